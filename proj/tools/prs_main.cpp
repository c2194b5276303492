#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "prs/errors.hpp"
#include "prs/harness.hpp"

namespace {

struct CliOptions {
  uint64_t seed = 7;
  int pairs = 2000;
  double hard_fraction = 0.58;
  std::string mode = "word";
  std::string disparity = "hypernym";
  double lambda_l = 1.0;
  double lambda_d = 1.0;
  int epochs = -1;
  int batch = 128;
  double lr = -1.0;
  int patience = -1;
  int repeats = 3;
  std::string out = "out";
};

prs::ExperimentConfig to_config(const CliOptions& o) {
  prs::ExperimentConfig cfg;
  cfg.seed = o.seed;
  cfg.n_pairs = o.pairs;
  cfg.hard_fraction = o.hard_fraction;
  cfg.mode = o.mode == "sentence" ? prs::Mode::Sentence : prs::Mode::Word;
  cfg.disparity = o.disparity == "limited-visual"
                      ? prs::DisparityKind::LimitedVisual
                      : prs::DisparityKind::Hypernym;
  cfg.lambda_l = o.lambda_l;
  cfg.lambda_d = o.lambda_d;
  cfg.epochs = o.epochs;
  cfg.batch = o.batch;
  cfg.lr = o.lr;
  cfg.patience = o.patience;
  cfg.repeats = o.repeats;
  return cfg;
}

int run_command(const std::string& cmd, const CliOptions& o) {
  const prs::Taxonomy& tax = prs::load_taxonomy();

  if (cmd == "gen-data") {
    prs::ExperimentConfig cfg = prs::resolve_defaults(to_config(o));
    prs::Dataset ds = prs::assemble_dataset(cfg.seed, cfg.n_pairs,
                                            cfg.hard_fraction, cfg.gen, tax);
    std::filesystem::create_directories(o.out);
    std::string path = o.out + "/dataset.jsonl";
    prs::save_dataset(ds, path);
    std::printf("wrote %s (%d pairs: %zu train / %zu val / %zu test)\n",
                path.c_str(), cfg.n_pairs, ds.train.size(), ds.val.size(),
                ds.test.size());
    return 0;
  }

  if (cmd == "sweep") {
    auto points = prs::lambda_sweep(to_config(o), prs::default_lambda_grid(),
                                    o.out);
    std::printf("%s", prs::sweep_to_csv(points).c_str());
    std::printf("wrote %s/sweep.csv\n", o.out.c_str());
    return 0;
  }

  if (cmd == "train" || cmd == "eval" || cmd == "shift" || cmd == "report") {
    const bool full = cmd == "report";
    prs::ExperimentResult res =
        prs::run_experiment(to_config(o), full ? o.out : "");
    if (cmd == "train") {
      for (size_t r = 0; r < res.policies.size(); ++r) {
        prs::write_file(o.out + "/policy_" + std::to_string(r) + ".json",
                        prs::policy_to_json(res.policies[r], tax));
        prs::write_file(o.out + "/history_" + std::to_string(r) + ".json",
                        prs::history_to_json(res.histories[r]));
      }
      std::printf("wrote %zu policy/history checkpoints to %s\n",
                  res.policies.size(), o.out.c_str());
    } else if (cmd == "eval") {
      prs::write_file(o.out + "/accuracy.csv",
                      prs::accuracy_to_csv(res.accuracy));
      std::printf("%s", prs::accuracy_to_csv(res.accuracy).c_str());
      std::printf("wrote %s/accuracy.csv\n", o.out.c_str());
    } else if (cmd == "shift") {
      prs::write_file(o.out + "/shift.csv", prs::shift_to_csv(res.shift, tax));
      std::printf("wrote %s/shift.csv\n", o.out.c_str());
    } else {
      std::printf("%s", prs::accuracy_to_csv(res.accuracy).c_str());
      std::printf("\n%s", prs::gains_to_text(prs::gain_report(res.accuracy)).c_str());
      std::printf("\nreports written to %s\n", o.out.c_str());
    }
    return 0;
  }

  std::fprintf(stderr, "unknown command: %s\n", cmd.c_str());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pragmatic rational speaker simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file");

  CliOptions o;
  app.add_option("--seed", o.seed, "master RNG seed");
  app.add_option("--pairs", o.pairs, "number of scene pairs");
  app.add_option("--hard-fraction", o.hard_fraction,
                 "fraction of hard pairs in the dataset");
  app.add_option("--mode", o.mode, "utterance mode")
      ->check(CLI::IsMember({"word", "sentence"}));
  app.add_option("--disparity", o.disparity, "listener disparity")
      ->check(CLI::IsMember({"hypernym", "limited-visual"}));
  app.add_option("--lambda-l", o.lambda_l, "listener-simulation exponent");
  app.add_option("--lambda-d", o.lambda_d, "disparity-adjustment exponent");
  app.add_option("--epochs", o.epochs, "training epochs (-1 = mode default)");
  app.add_option("--batch", o.batch, "REINFORCE batch size");
  app.add_option("--lr", o.lr, "initial learning rate (-1 = mode default)");
  app.add_option("--patience", o.patience,
                 "epochs without improvement before lr decay (-1 = default)");
  app.add_option("--repeats", o.repeats, "independent training repeats");
  app.add_option("--out", o.out, "output directory");

  const char* names[] = {"gen-data", "train", "eval", "shift", "sweep",
                         "report"};
  const char* descs[] = {"generate a scene-pair dataset",
                         "train disparity adjustments, write checkpoints",
                         "evaluate all speakers, write accuracy.csv",
                         "measure token-frequency shift, write shift.csv",
                         "sweep the lambda grid, write sweep.csv",
                         "run the full experiment and write all reports"};
  for (int i = 0; i < 6; ++i) {
    app.add_subcommand(names[i], descs[i])->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run_command(app.get_subcommands().front()->get_name(), o);
  } catch (const prs::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const prs::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
