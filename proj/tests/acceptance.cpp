// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line;
// the exit code is the number of failures. Expected runtime: ~1-2 minutes.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "prs/harness.hpp"

using namespace prs;

namespace {

// Pinned thresholds.
constexpr double kControlFloor = 0.99;         // 1. control accuracy
constexpr double kS0toS1 = 0.15;               // 2. ordering margins
constexpr double kS1toS1d = 0.05;
constexpr double kS1dToUpper = 0.02;
constexpr double kWordGap = 0.03;              // 3. upper-bound gap, word mode
constexpr double kHyponymCeil = 0.10;          // 4. language shift (hypernym)
constexpr double kHyponymFloor = 0.50;
constexpr double kAnimalCeil = 0.05;           // 5. language shift (visual)
constexpr double kAnimalFloor = 0.15;
constexpr double kGradRelTol = 1e-5;           // 8. gradient oracle
constexpr double kGradStep = 1e-6;
constexpr int kGradCases = 100;
constexpr int kBruteForcePairs = 500;          // 9. selection oracle
constexpr double kChanceLo = 0.45;             // 12. fair-coin floor
constexpr double kChanceHi = 0.55;
constexpr int kChanceTrials = 1000;

int g_failures = 0;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

void report(int id, const char* label, bool pass, const std::string& detail) {
  std::printf("C%-2d %-34s %s  %s\n", id, label, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

ExperimentConfig default_cfg(DisparityKind d) {
  ExperimentConfig cfg;
  cfg.disparity = d;
  return cfg;
}

double logistic_ref(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// --- criteria ----------------------------------------------------------------

void check_control(const Dataset& ds, const Taxonomy& tax) {
  auto cache = precompute_pairs(ds.test, ListenerProfile::full(), Mode::Word,
                                tax);
  Rng rng(derive_seed(7, 0xC1));
  auto acc = evaluate_speaker_cached(SpeakerKind::S1, cache, nullptr, rng);
  report(1, "no-disparity control", acc[2] >= kControlFloor,
         strf("acc=%.4f (need >= %.2f)", acc[2], kControlFloor));
}

double mean_acc(const ExperimentResult& res, SpeakerKind k, int slice) {
  return res.accuracy.acc[static_cast<int>(k)][slice].mean;
}

void check_ordering(const ExperimentResult& h, const ExperimentResult& v) {
  bool pass = true;
  std::string detail;
  const ExperimentResult* runs[2] = {&h, &v};
  const char* names[2] = {"hyp", "vis"};
  for (int i = 0; i < 2; ++i) {
    double s0 = mean_acc(*runs[i], SpeakerKind::S0, 2);
    double s1 = mean_acc(*runs[i], SpeakerKind::S1, 2);
    double s1d = mean_acc(*runs[i], SpeakerKind::S1d, 2);
    double s1nd = mean_acc(*runs[i], SpeakerKind::S1nd, 2);
    bool ok = (s0 + kS0toS1 <= s1) && (s1 + kS1toS1d <= s1d) &&
              (s1d <= s1nd + kS1dToUpper);
    pass = pass && ok;
    detail += strf("%s[%.3f/%.3f/%.3f/%.3f]%s", names[i], s0, s1, s1d, s1nd,
                   i == 0 ? " " : "");
  }
  report(2, "speaker ordering S0<<S1<S1d<=S1nd", pass, detail);
}

void check_word_gap(const ExperimentResult& h, const ExperimentResult& v) {
  double gap_h = mean_acc(h, SpeakerKind::S1nd, 2) -
                 mean_acc(h, SpeakerKind::S1d, 2);
  double gap_v = mean_acc(v, SpeakerKind::S1nd, 2) -
                 mean_acc(v, SpeakerKind::S1d, 2);
  report(3, "word-level upper-bound gap",
         gap_h <= kWordGap && gap_v <= kWordGap,
         strf("gap hyp=%.4f vis=%.4f (need <= %.2f)", gap_h, gap_v, kWordGap));
}

void check_hypernym_shift(const ExperimentResult& h) {
  const int s1 = static_cast<int>(SpeakerKind::S1);
  const int s1d = static_cast<int>(SpeakerKind::S1d);
  double lo_s1 = h.shift.hyponym_share[s1].mean;
  double lo_s1d = h.shift.hyponym_share[s1d].mean;
  double hi_s1 = h.shift.hypernym_share[s1].mean;
  double hi_s1d = h.shift.hypernym_share[s1d].mean;
  bool pass = lo_s1d <= kHyponymCeil && lo_s1 >= kHyponymFloor &&
              hi_s1d > hi_s1;
  report(4, "language shift away from hyponyms", pass,
         strf("hyponym S1=%.3f S1d=%.3f, hypernym S1=%.3f S1d=%.3f", lo_s1,
              lo_s1d, hi_s1, hi_s1d));
}

void check_visual_shift(const ExperimentResult& v) {
  const int s1 = static_cast<int>(SpeakerKind::S1);
  const int s1d = static_cast<int>(SpeakerKind::S1d);
  double a_s1 = v.shift.animal_token_share[s1].mean;
  double a_s1d = v.shift.animal_token_share[s1d].mean;
  bool pass = a_s1d <= kAnimalCeil && a_s1 >= kAnimalFloor;
  report(5, "language shift off animal words", pass,
         strf("animal share S1=%.3f S1d=%.3f (need <= %.2f, S1 >= %.2f)",
              a_s1, a_s1d, kAnimalCeil, kAnimalFloor));
}

void check_easy_hard(const ExperimentResult& h, const ExperimentResult& v) {
  auto gain = [](const ExperimentResult& r, int slice) {
    return mean_acc(r, SpeakerKind::S1d, slice) -
           mean_acc(r, SpeakerKind::S1, slice);
  };
  double eh = gain(h, 1), hh = gain(h, 0);
  double ev = gain(v, 1), hv = gain(v, 0);
  report(6, "easy pairs gain at least as much", eh >= hh && ev >= hv,
         strf("hyp easy=%.3f hard=%.3f, vis easy=%.3f hard=%.3f", eh, hh, ev,
              hv));
}

void check_sweep(const std::vector<SweepPoint>& pts) {
  double at_11 = -1.0, at_81 = -1.0, at_18 = -1.0;
  for (const auto& p : pts) {
    if (p.lambda_l == 1 && p.lambda_d == 1) at_11 = p.combined_acc.mean;
    if (p.lambda_l == 8 && p.lambda_d == 1) at_81 = p.combined_acc.mean;
    if (p.lambda_l == 1 && p.lambda_d == 8) at_18 = p.combined_acc.mean;
  }
  bool pass = at_11 >= at_81 && at_11 >= at_18 && at_11 >= 0.0;
  report(7, "lambda balance peaks at 1:1", pass,
         strf("acc 8:1=%.4f 1:1=%.4f 1:8=%.4f", at_81, at_11, at_18));
}

void check_gradient_oracle() {
  Rng rng(derive_seed(7, 0xC8));
  int bad = 0;
  double worst = 0.0;
  for (int c = 0; c < kGradCases; ++c) {
    DisparityPolicy pol = DisparityPolicy::init(
        Mode::Word, 1.0 + c % 3, 1.0 + (c / 3) % 3, 2.0, 50, 0.8, 0);
    for (int t = 0; t < kVocabSize; ++t) {
      pol.theta[t] = -3.0 + 6.0 * rng.uniform01();
    }
    Utterance u;
    u.tokens.push_back(static_cast<TokenId>(rng.below(kVocabSize)));
    if (c % 2) {
      TokenId second = static_cast<TokenId>(rng.below(kVocabSize));
      if (second != u.tokens[0]) u.tokens.push_back(second);
    }
    const int r = c % 3 == 0 ? -1 : +1;
    const double p_i = 0.5 + 0.5 * rng.uniform01();

    auto loss = [&](DisparityPolicy& pl) {
      double q = q_score(u, pl);
      return -(pl.lambda_l * std::log(p_i) + pl.lambda_d * std::log(q)) * r;
    };
    const double q0 = q_score(u, pol);
    for (TokenId w : u.tokens) {
      double occ = 0.0;
      for (TokenId t : u.tokens) {
        if (t == w) occ += 1.0;
      }
      double analytic =
          -r * pol.lambda_d * (1.0 - q0) * occ / double(u.tokens.size());
      double save = pol.theta[w];
      pol.theta[w] = save + kGradStep;
      double up = loss(pol);
      pol.theta[w] = save - kGradStep;
      double down = loss(pol);
      pol.theta[w] = save;
      double numeric = (up - down) / (2.0 * kGradStep);
      double rel = std::abs(numeric - analytic) / std::abs(analytic);
      worst = std::max(worst, rel);
      if (rel > kGradRelTol) ++bad;
    }
  }
  report(8, "gradient matches finite differences", bad == 0,
         strf("%d/%d cases, worst rel err %.2e (tol %.0e)", kGradCases - bad,
              kGradCases, worst, kGradRelTol));
}

void check_brute_force(const Taxonomy& tax) {
  Rng rng(derive_seed(7, 0xC9));
  const ListenerProfile full = ListenerProfile::full();
  int agree = 0;
  for (int c = 0; c < kBruteForcePairs; ++c) {
    // small scenes drawn from at most two categories keep the candidate
    // count at five or fewer
    auto small_scene = [&](int id) {
      Scene s;
      s.id = id;
      int cat_a = static_cast<int>(rng.below(kNumHypernyms));
      int cat_b = static_cast<int>(rng.below(kNumHypernyms));
      int n = 2 + static_cast<int>(rng.below(2));
      while (static_cast<int>(s.objects.size()) < n) {
        int cat = s.objects.size() % 2 ? cat_b : cat_a;
        TokenId t = tax.members(cat)[rng.below(tax.members(cat).size())];
        if (!s.contains(t)) s.objects.push_back(t);
        std::sort(s.objects.begin(), s.objects.end());
      }
      return s;
    };
    ScenePair pair;
    pair.a = small_scene(0);
    pair.b = small_scene(1);
    pair.target = rng.coin() ? 1 : 0;

    DisparityPolicy pol = DisparityPolicy::init(
        Mode::Word, c % 2 ? 2.0 : 1.0, c % 3 ? 1.0 : 2.0, 2.0, 50, 0.8, 0);
    for (int t = 0; t < kVocabSize; ++t) {
      pol.theta[t] = -2.0 + 4.0 * rng.uniform01();
    }

    CandidateSet cs = word_candidates(pair.target_scene(), tax);
    if (cs.candidates.size() > 5) {
      --c;  // resample; the oracle is specified for small candidate sets
      continue;
    }

    int best = -1;
    double best_a = -1.0;
    int best_gen = -1;
    for (size_t i = 0; i < cs.candidates.size(); ++i) {
      const Utterance& u = cs.candidates[i];
      int st = ground(u, pair.target_scene(), full, tax);
      int sd = ground(u, pair.distractor_scene(), full, tax);
      double task = st > sd ? double(st) / (st + sd) : 0.0;
      double mean = 0.0;
      for (TokenId t : u.tokens) mean += pol.theta[t];
      mean /= double(u.tokens.size());
      double a = std::pow(task, pol.lambda_l) *
                 std::pow(logistic_ref(mean), pol.lambda_d);
      int g = generality(u, tax);
      if (a > best_a || (a == best_a && g > best_gen)) {
        best = static_cast<int>(i);
        best_a = a;
        best_gen = g;
      }
    }

    Rng unused(0);
    ScoredCandidate got =
        pragmatic_select(pair, cs, pol, full, SelectMode::Eval, unused, tax);
    if (got.index == best) ++agree;
  }
  report(9, "brute-force selection oracle", agree == kBruteForcePairs,
         strf("%d/%d pairs agree", agree, kBruteForcePairs));
}

void check_zero_theta(const Dataset& ds, const Taxonomy& tax) {
  int mismatches = 0;
  for (DisparityKind d : {DisparityKind::Hypernym,
                          DisparityKind::LimitedVisual}) {
    auto cache = precompute_pairs(ds.test, profile_for(d), Mode::Word, tax);
    DisparityPolicy pol =
        DisparityPolicy::init(Mode::Word, 1.0, 1.0, 2.0, 50, 0.8, 0);
    for (const auto& pair : cache) {
      int rational = select_rational_cached(pair, false);
      int pragmatic =
          select_pragmatic_cached(pair, pol, SelectMode::Eval, nullptr).index;
      if (rational != pragmatic) ++mismatches;
    }
  }
  report(10, "zero-theta equivalence with S1", mismatches == 0,
         strf("%d mismatching pairs over both disparities", mismatches));
}

void check_determinism() {
  ExperimentConfig cfg = default_cfg(DisparityKind::Hypernym);
  cfg.n_pairs = 200;
  cfg.epochs = 30;
  cfg.repeats = 2;

  const auto tmp = std::filesystem::temp_directory_path();
  const std::string d1 = (tmp / "acceptance_run1").string();
  const std::string d2 = (tmp / "acceptance_run2").string();
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
  run_experiment(cfg, d1);
  run_experiment(cfg, d2);

  std::vector<std::string> files = {"accuracy.csv", "shift.csv",
                                    "history_0.json", "history_1.json",
                                    "policy_0.json", "policy_1.json"};
  int diffs = 0;
  for (const auto& f : files) {
    if (slurp(d1 + "/" + f) != slurp(d2 + "/" + f)) ++diffs;
  }
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
  report(11, "byte-identical reruns", diffs == 0,
         strf("%zu/%zu files identical", files.size() - diffs, files.size()));
}

void check_chance_floor(const Taxonomy& tax) {
  Rng rng(derive_seed(7, 0xCC));
  ListenerProfile hyp = ListenerProfile::hypernym_only();
  int correct = 0;
  for (int i = 0; i < kChanceTrials; ++i) {
    ScenePair pair = generate_pair(
        rng, i % 2 ? Difficulty::Easy : Difficulty::Hard, GenConfig{}, tax);
    const Scene& t = pair.target_scene();
    Utterance u;
    u.tokens = {t.objects[rng.below(t.objects.size())]};  // hyponym only
    Choice c = choose(u, pair, hyp, tax, rng);
    if (c.picked == pair.target) ++correct;
  }
  double acc = double(correct) / kChanceTrials;
  report(12, "hyponym-only chance floor", acc >= kChanceLo && acc <= kChanceHi,
         strf("acc=%.3f over %d trials (need [%.2f, %.2f])", acc,
              kChanceTrials, kChanceLo, kChanceHi));
}

}  // namespace

int main() {
  const Taxonomy& tax = load_taxonomy();
  ExperimentConfig cfg_probe = resolve_defaults(
      default_cfg(DisparityKind::Hypernym));
  std::printf("acceptance checks (word mode, %d pairs, %d repeats)\n",
              cfg_probe.n_pairs, cfg_probe.repeats);
  std::printf("----------------------------------------------------------\n");

  Dataset ds = assemble_dataset(cfg_probe.seed, cfg_probe.n_pairs,
                                cfg_probe.hard_fraction, cfg_probe.gen, tax);

  check_control(ds, tax);

  ExperimentResult h = run_experiment(default_cfg(DisparityKind::Hypernym));
  ExperimentResult v =
      run_experiment(default_cfg(DisparityKind::LimitedVisual));

  check_ordering(h, v);
  check_word_gap(h, v);
  check_hypernym_shift(h);
  check_visual_shift(v);
  check_easy_hard(h, v);

  auto pts = lambda_sweep(default_cfg(DisparityKind::Hypernym),
                          default_lambda_grid(), "");
  check_sweep(pts);

  check_gradient_oracle();
  check_brute_force(tax);
  check_zero_theta(ds, tax);
  check_determinism();
  check_chance_floor(tax);

  std::printf("----------------------------------------------------------\n");
  std::printf("%d/12 criteria passed\n", 12 - g_failures);
  return g_failures;
}
