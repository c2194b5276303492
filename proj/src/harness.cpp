#include "prs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "prs/errors.hpp"

namespace prs {

namespace {

// Learning-rate scale applied on top of the mode's base rate. Updates are
// accumulated as raw sums over a batch, so the scale normalizes the step to
// roughly one decision's worth; without it the first batch saturates the
// adjustment weights and the gradient dies.
constexpr double kWordLrScale = 1.0 / 128.0;
constexpr double kSentenceLrScale = 1.0 / 128.0;

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.stdev = std::sqrt(var / xs.size());
  return s;
}

int slice_of(Difficulty d) { return d == Difficulty::Hard ? 0 : 1; }

struct SpeakerEval {
  std::array<double, kNumSlices> acc{};
  std::vector<double> freq;  // chosen-token frequency, kVocabSize entries
};

// Plays one speaker over the cached pairs: per-slice accuracy against the
// actual listener plus the distribution of chosen tokens.
SpeakerEval play_speaker(SpeakerKind kind, const std::vector<CachedPair>& pairs,
                         const DisparityPolicy* policy, Rng& rng) {
  if (kind == SpeakerKind::S1d && policy == nullptr) {
    throw ConfigError("the pragmatic speaker needs a trained policy");
  }
  std::array<int, kNumSlices> correct{};
  std::array<int, kNumSlices> total{};
  std::vector<int> counts(kVocabSize, 0);
  long token_total = 0;

  for (const CachedPair& pair : pairs) {
    int idx = 0;
    switch (kind) {
      case SpeakerKind::S0:
        idx = static_cast<int>(rng.below(pair.cands.size()));
        break;
      case SpeakerKind::S1:
        idx = select_rational_cached(pair, false);
        break;
      case SpeakerKind::S1nd:
        idx = select_rational_cached(pair, true);
        break;
      case SpeakerKind::S1d:
        idx = select_pragmatic_cached(pair, *policy, SelectMode::Eval, nullptr)
                  .index;
        break;
    }
    const CachedCandidate& cand = pair.cands[idx];
    bool ok = cand.outcome == 0 || (cand.outcome == 2 && rng.coin());
    int slice = slice_of(pair.difficulty);
    total[slice] += 1;
    total[2] += 1;
    if (ok) {
      correct[slice] += 1;
      correct[2] += 1;
    }
    for (TokenId t : cand.utt.tokens) {
      counts[t] += 1;
      ++token_total;
    }
  }

  SpeakerEval out;
  for (int s = 0; s < kNumSlices; ++s) {
    out.acc[s] = total[s] > 0 ? static_cast<double>(correct[s]) / total[s] : 0.0;
  }
  out.freq.assign(kVocabSize, 0.0);
  if (token_total > 0) {
    for (int t = 0; t < kVocabSize; ++t) {
      out.freq[t] = static_cast<double>(counts[t]) / token_total;
    }
  }
  return out;
}

struct WrittenFiles {
  std::vector<std::string> paths;

  void write(const std::string& path, const std::string& content) {
    write_file(path, content);
    paths.push_back(path);
  }
  void discard() {
    for (const auto& p : paths) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
    paths.clear();
  }
};

}  // namespace

const char* speaker_name(SpeakerKind k) {
  switch (k) {
    case SpeakerKind::S0:
      return "S0";
    case SpeakerKind::S1:
      return "S1";
    case SpeakerKind::S1d:
      return "S1d";
    case SpeakerKind::S1nd:
      return "S1nd";
  }
  return "?";
}

const char* slice_name(int slice) {
  switch (slice) {
    case 0:
      return "hard";
    case 1:
      return "easy";
    default:
      return "combined";
  }
}

const char* disparity_name(DisparityKind d) {
  return d == DisparityKind::Hypernym ? "hypernym" : "limited_visual";
}

ExperimentConfig resolve_defaults(ExperimentConfig cfg) {
  const bool word = cfg.mode == Mode::Word;
  if (cfg.epochs < 0) cfg.epochs = word ? 200 : 150;
  if (cfg.lr < 0) cfg.lr = word ? 2.0 : 0.5;
  if (cfg.patience < 0) cfg.patience = word ? 50 : 20;
  if (cfg.lr_scale < 0) cfg.lr_scale = word ? kWordLrScale : kSentenceLrScale;

  if (cfg.n_pairs < 10) throw ConfigError("n_pairs must be at least 10");
  if (!(cfg.hard_fraction >= 0.0 && cfg.hard_fraction <= 1.0)) {
    throw ConfigError("hard_fraction must lie in [0, 1]");
  }
  if (cfg.lambda_l < 0.0 || cfg.lambda_d < 0.0) {
    throw ConfigError("lambda exponents must be non-negative");
  }
  if (cfg.epochs < 1) throw ConfigError("epochs must be positive");
  if (cfg.batch < 1) throw ConfigError("batch size must be positive");
  if (cfg.lr <= 0.0 || cfg.lr_scale <= 0.0) {
    throw ConfigError("learning rate must be positive");
  }
  if (cfg.patience < 1) throw ConfigError("patience must be positive");
  if (!(cfg.decay > 0.0 && cfg.decay < 1.0)) {
    throw ConfigError("decay must lie in (0, 1)");
  }
  if (cfg.repeats < 1) throw ConfigError("repeats must be positive");
  return cfg;
}

ListenerProfile profile_for(DisparityKind d) {
  return d == DisparityKind::Hypernym
             ? ListenerProfile::hypernym_only()
             : ListenerProfile::limited_visual_default();
}

std::array<double, kNumSlices> evaluate_speaker_cached(
    SpeakerKind kind, const std::vector<CachedPair>& pairs,
    const DisparityPolicy* policy, Rng& rng) {
  return play_speaker(kind, pairs, policy, rng).acc;
}

std::array<double, kNumSlices> evaluate_speaker(
    SpeakerKind kind, const std::vector<ScenePair>& pairs,
    const ListenerProfile& listener, Mode mode, const DisparityPolicy* policy,
    const Taxonomy& tax, Rng& rng) {
  auto cache = precompute_pairs(pairs, listener, mode, tax);
  return evaluate_speaker_cached(kind, cache, policy, rng);
}

ExperimentResult run_experiment(const ExperimentConfig& raw,
                                const std::string& out_dir) {
  const ExperimentConfig cfg = resolve_defaults(raw);
  const Taxonomy& tax = load_taxonomy();
  const ListenerProfile listener = profile_for(cfg.disparity);

  Dataset ds = assemble_dataset(cfg.seed, cfg.n_pairs, cfg.hard_fraction,
                                cfg.gen, tax);
  auto train_cache = precompute_pairs(ds.train, listener, cfg.mode, tax);
  auto val_cache = precompute_pairs(ds.val, listener, cfg.mode, tax);
  auto test_cache = precompute_pairs(ds.test, listener, cfg.mode, tax);

  constexpr SpeakerKind kKinds[kNumSpeakers] = {
      SpeakerKind::S0, SpeakerKind::S1, SpeakerKind::S1d, SpeakerKind::S1nd};

  ExperimentResult result;
  std::array<std::array<std::vector<double>, kNumSlices>, kNumSpeakers> acc_raw;
  std::array<std::vector<std::vector<double>>, kNumSpeakers> freq_raw;

  for (int r = 0; r < cfg.repeats; ++r) {
    TrainConfig tc;
    tc.mode = cfg.mode;
    tc.lambda_l = cfg.lambda_l;
    tc.lambda_d = cfg.lambda_d;
    tc.epochs = cfg.epochs;
    tc.batch = cfg.batch;
    tc.lr0 = cfg.lr * cfg.lr_scale;
    tc.patience = cfg.patience;
    tc.decay = cfg.decay;
    tc.seed = cfg.seed + static_cast<uint64_t>(r);
    TrainResult tr = train_cached(train_cache, val_cache, tc);

    for (int k = 0; k < kNumSpeakers; ++k) {
      Rng eval_rng(derive_seed(cfg.seed, 0x9000u + 8u * r + k));
      const DisparityPolicy* policy =
          kKinds[k] == SpeakerKind::S1d ? &tr.policy : nullptr;
      SpeakerEval ev = play_speaker(kKinds[k], test_cache, policy, eval_rng);
      for (int s = 0; s < kNumSlices; ++s) acc_raw[k][s].push_back(ev.acc[s]);
      freq_raw[k].push_back(std::move(ev.freq));
    }

    result.policies.push_back(std::move(tr.policy));
    result.histories.push_back(std::move(tr.history));
  }

  for (int k = 0; k < kNumSpeakers; ++k) {
    for (int s = 0; s < kNumSlices; ++s) {
      result.accuracy.acc[k][s] = stat_of(acc_raw[k][s]);
      result.accuracy.raw[k][s] = acc_raw[k][s];
    }
  }

  const int animal_cat = tax.category_of(tax.find("animal"));
  for (int k = 0; k < kNumSpeakers; ++k) {
    result.shift.freq_mean[k].assign(kVocabSize, 0.0);
    result.shift.freq_std[k].assign(kVocabSize, 0.0);
    for (int t = 0; t < kVocabSize; ++t) {
      std::vector<double> xs;
      for (const auto& f : freq_raw[k]) xs.push_back(f[t]);
      Stat st = stat_of(xs);
      result.shift.freq_mean[k][t] = st.mean;
      result.shift.freq_std[k][t] = st.stdev;
    }
    std::vector<double> hypo, hyper, animal;
    for (const auto& f : freq_raw[k]) {
      double lo = 0.0, hi = 0.0, an = 0.0;
      for (int t = 0; t < kVocabSize; ++t) {
        if (tax.is_object(t)) {
          lo += f[t];
        } else {
          hi += f[t];
        }
        if (tax.category_of(t) == animal_cat) an += f[t];
      }
      hypo.push_back(lo);
      hyper.push_back(hi);
      animal.push_back(an);
    }
    result.shift.hyponym_share[k] = stat_of(hypo);
    result.shift.hypernym_share[k] = stat_of(hyper);
    result.shift.animal_token_share[k] = stat_of(animal);
  }

  if (!out_dir.empty()) {
    WrittenFiles files;
    try {
      std::filesystem::create_directories(out_dir);
      files.write(out_dir + "/accuracy.csv", accuracy_to_csv(result.accuracy));
      files.write(out_dir + "/shift.csv", shift_to_csv(result.shift, tax));
      for (int r = 0; r < cfg.repeats; ++r) {
        files.write(out_dir + "/history_" + std::to_string(r) + ".json",
                    history_to_json(result.histories[r]));
        files.write(out_dir + "/policy_" + std::to_string(r) + ".json",
                    policy_to_json(result.policies[r], tax));
      }
    } catch (...) {
      files.discard();
      throw;
    }
  }
  return result;
}

std::vector<GainRow> gain_report(const AccuracyReport& acc) {
  auto diff = [](const Stat& a, const Stat& b) {
    Stat d;
    d.mean = a.mean - b.mean;
    d.stdev = std::sqrt(a.stdev * a.stdev + b.stdev * b.stdev);
    return d;
  };
  const int s1 = static_cast<int>(SpeakerKind::S1);
  const int s1d = static_cast<int>(SpeakerKind::S1d);
  const int s1nd = static_cast<int>(SpeakerKind::S1nd);
  std::vector<GainRow> rows;
  for (int s = 0; s < kNumSlices; ++s) {
    GainRow row;
    row.slice = slice_name(s);
    row.s1d_minus_s1 = diff(acc.acc[s1d][s], acc.acc[s1][s]);
    row.s1d_minus_s1nd = diff(acc.acc[s1d][s], acc.acc[s1nd][s]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<double, double>> default_lambda_grid() {
  return {{8, 1}, {4, 1}, {2, 1}, {1, 1}, {1, 2}, {1, 4}, {1, 8}};
}

std::vector<SweepPoint> lambda_sweep(
    const ExperimentConfig& raw,
    const std::vector<std::pair<double, double>>& grid,
    const std::string& out_dir) {
  if (grid.empty()) throw ConfigError("lambda grid must be nonempty");
  const ExperimentConfig cfg = resolve_defaults(raw);
  const Taxonomy& tax = load_taxonomy();
  const ListenerProfile listener = profile_for(cfg.disparity);

  Dataset ds = assemble_dataset(cfg.seed, cfg.n_pairs, cfg.hard_fraction,
                                cfg.gen, tax);
  auto train_cache = precompute_pairs(ds.train, listener, cfg.mode, tax);
  auto val_cache = precompute_pairs(ds.val, listener, cfg.mode, tax);
  auto test_cache = precompute_pairs(ds.test, listener, cfg.mode, tax);

  std::vector<SweepPoint> points;
  for (const auto& [ll, ld] : grid) {
    std::vector<double> accs;
    for (int r = 0; r < cfg.repeats; ++r) {
      TrainConfig tc;
      tc.mode = cfg.mode;
      tc.lambda_l = ll;
      tc.lambda_d = ld;
      tc.epochs = cfg.epochs;
      tc.batch = cfg.batch;
      tc.lr0 = cfg.lr * cfg.lr_scale;
      tc.patience = cfg.patience;
      tc.decay = cfg.decay;
      tc.seed = cfg.seed + static_cast<uint64_t>(r);
      TrainResult tr = train_cached(train_cache, val_cache, tc);
      Rng eval_rng(derive_seed(cfg.seed, 0xA000u + r));
      auto acc = evaluate_speaker_cached(SpeakerKind::S1d, test_cache,
                                         &tr.policy, eval_rng);
      accs.push_back(acc[2]);
    }
    SweepPoint pt;
    pt.lambda_l = ll;
    pt.lambda_d = ld;
    pt.combined_acc = stat_of(accs);
    points.push_back(pt);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/sweep.csv", sweep_to_csv(points));
  }
  return points;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string accuracy_to_csv(const AccuracyReport& report) {
  std::string out = "speaker,slice,mean,std\n";
  for (int k = 0; k < kNumSpeakers; ++k) {
    for (int s = 0; s < kNumSlices; ++s) {
      out += speaker_name(static_cast<SpeakerKind>(k));
      out += ',';
      out += slice_name(s);
      out += ',';
      out += format_number(report.acc[k][s].mean);
      out += ',';
      out += format_number(report.acc[k][s].stdev);
      out += '\n';
    }
  }
  return out;
}

std::string shift_to_csv(const ShiftReport& report, const Taxonomy& tax) {
  std::string out = "speaker,token,kind,mean,std\n";
  auto row = [&out](const char* speaker, const std::string& token,
                    const char* kind, const Stat& st) {
    out += speaker;
    out += ',';
    out += token;
    out += ',';
    out += kind;
    out += ',';
    out += format_number(st.mean);
    out += ',';
    out += format_number(st.stdev);
    out += '\n';
  };
  for (int k = 0; k < kNumSpeakers; ++k) {
    const char* sp = speaker_name(static_cast<SpeakerKind>(k));
    row(sp, "hyponym_share", "aggregate", report.hyponym_share[k]);
    row(sp, "hypernym_share", "aggregate", report.hypernym_share[k]);
    row(sp, "animal_token_share", "aggregate", report.animal_token_share[k]);
    for (int t = 0; t < kVocabSize; ++t) {
      Stat st{report.freq_mean[k][t], report.freq_std[k][t]};
      row(sp, tax.name(t), tax.is_object(t) ? "object" : "hypernym", st);
    }
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::string out = "lambda_l,lambda_d,mean,std\n";
  for (const auto& p : points) {
    out += format_number(p.lambda_l);
    out += ',';
    out += format_number(p.lambda_d);
    out += ',';
    out += format_number(p.combined_acc.mean);
    out += ',';
    out += format_number(p.combined_acc.stdev);
    out += '\n';
  }
  return out;
}

std::string gains_to_text(const std::vector<GainRow>& rows) {
  std::string out = "slice      S1d-S1 (std)        S1d-S1nd (std)\n";
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-10s %+.4f (%.4f)    %+.4f (%.4f)\n",
                  r.slice.c_str(), r.s1d_minus_s1.mean, r.s1d_minus_s1.stdev,
                  r.s1d_minus_s1nd.mean, r.s1d_minus_s1nd.stdev);
    out += buf;
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

}  // namespace prs
