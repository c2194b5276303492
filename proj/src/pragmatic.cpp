#include "prs/pragmatic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "prs/errors.hpp"

namespace prs {

namespace {

double pow_or_disable(double x, double e) {
  if (e == 0.0) return 1.0;  // zero exponent disables the factor, 0^0 = 1
  if (e == 1.0) return x;
  return std::pow(x, e);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

int outcome_of(const Utterance& utt, const ScenePair& pair,
               const ListenerProfile& listener, const Taxonomy& tax) {
  int sa = ground(utt, pair.a, listener, tax);
  int sb = ground(utt, pair.b, listener, tax);
  if (sa == sb) return 2;
  int picked = sa > sb ? 0 : 1;
  return picked == pair.target ? 0 : 1;
}

// Shared argmax rule: highest score, then the more general candidate, then
// the lower index.
struct Best {
  int index = 0;
  double score = -1.0;
  int gen = -1;

  void offer(int i, double s, int g) {
    if (s > score || (s == score && g > gen)) {
      index = i;
      score = s;
      gen = g;
    }
  }
};

}  // namespace

SimulationResult simulate_listener(const Utterance& candidate,
                                   const ScenePair& pair,
                                   const ListenerProfile& sim_profile,
                                   const Taxonomy& tax) {
  int st = ground(candidate, pair.target_scene(), sim_profile, tax);
  int sd = ground(candidate, pair.distractor_scene(), sim_profile, tax);
  if (st + sd == 0) return {kSimTie, 0.5};
  SimulationResult r;
  r.p_i = static_cast<double>(st) / (st + sd);
  if (st > sd) {
    r.t_i = pair.target;
  } else if (st < sd) {
    r.t_i = 1 - pair.target;
  } else {
    r.t_i = kSimTie;
  }
  return r;
}

int rational_select(const ScenePair& pair, const CandidateSet& candidates,
                    const ListenerProfile& sim_profile, const Taxonomy& tax) {
  Best best;
  for (size_t i = 0; i < candidates.candidates.size(); ++i) {
    const Utterance& utt = candidates.candidates[i];
    SimulationResult sim = simulate_listener(utt, pair, sim_profile, tax);
    double score = sim.t_i == pair.target ? sim.p_i : 0.0;
    best.offer(static_cast<int>(i), score, generality(utt, tax));
  }
  return best.index;
}

DisparityPolicy DisparityPolicy::init(Mode mode, double lambda_l,
                                      double lambda_d, double lr, int patience,
                                      double decay, uint64_t seed) {
  DisparityPolicy p;
  p.mode = mode;
  p.theta.assign(kVocabSize, 0.0);
  p.lambda_l = lambda_l;
  p.lambda_d = lambda_d;
  p.lr = lr;
  p.schedule.patience = patience;
  p.schedule.decay_factor = decay;
  p.seed = seed;
  return p;
}

double q_score(const Utterance& utt, const DisparityPolicy& policy) {
  if (utt.tokens.empty()) throw ConfigError("utterance has no tokens");
  double sum = 0.0;
  for (TokenId t : utt.tokens) {
    if (t < 0 || t >= kVocabSize) {
      throw UnknownTokenError("token id " + std::to_string(t));
    }
    sum += policy.theta[t];
  }
  return logistic(sum / static_cast<double>(utt.tokens.size()));
}

double combined_score(int t_i, int target, double p_i, double q_i,
                      double lambda_l, double lambda_d) {
  double task = t_i == target ? p_i : 0.0;
  return pow_or_disable(task, lambda_l) * pow_or_disable(q_i, lambda_d);
}

namespace {

// Selection over any candidate table that can produce (t, p, q, gen).
template <class GetScore>
ScoredCandidate select_impl(int n, const GetScore& get, SelectMode mode,
                            Rng* rng) {
  if (mode == SelectMode::Eval) {
    Best best;
    ScoredCandidate chosen;
    for (int i = 0; i < n; ++i) {
      ScoredCandidate sc = get(i);
      int prev = best.index;
      best.offer(i, sc.a_i, sc.gen);
      if (best.index != prev || i == 0) chosen = sc;
    }
    return chosen;
  }
  // Train: sample proportionally to a_i.
  std::vector<ScoredCandidate> all(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    all[i] = get(i);
    total += all[i].a_i;
  }
  if (total <= 0.0) {
    return all[rng->below(static_cast<uint64_t>(n))];
  }
  double x = rng->uniform01() * total;
  double cum = 0.0;
  int last_positive = 0;
  for (int i = 0; i < n; ++i) {
    if (all[i].a_i <= 0.0) continue;
    last_positive = i;
    cum += all[i].a_i;
    if (x < cum) return all[i];
  }
  return all[last_positive];
}

}  // namespace

ScoredCandidate pragmatic_select(const ScenePair& pair,
                                 const CandidateSet& candidates,
                                 const DisparityPolicy& policy,
                                 const ListenerProfile& sim_profile,
                                 SelectMode mode, Rng& rng,
                                 const Taxonomy& tax) {
  int n = static_cast<int>(candidates.candidates.size());
  auto get = [&](int i) {
    const Utterance& utt = candidates.candidates[i];
    SimulationResult sim = simulate_listener(utt, pair, sim_profile, tax);
    ScoredCandidate sc;
    sc.index = i;
    sc.t_i = sim.t_i;
    sc.p_i = sim.p_i;
    sc.q_i = q_score(utt, policy);
    sc.a_i = combined_score(sim.t_i, pair.target, sim.p_i, sc.q_i,
                            policy.lambda_l, policy.lambda_d);
    sc.gen = generality(utt, tax);
    return sc;
  };
  return select_impl(n, get, mode, &rng);
}

bool reinforce_update(DisparityPolicy& policy, const Utterance& chosen,
                      const ScoredCandidate& chosen_score, int r, double lr) {
  if (chosen_score.a_i == 0.0) return false;  // no gradient through a hard zero
  const double q = chosen_score.q_i;
  const double n = static_cast<double>(chosen.tokens.size());
  const double step = lr * r * policy.lambda_d * (1.0 - q) / n;
  for (TokenId t : chosen.tokens) policy.theta[t] += step;
  return true;
}

std::vector<CachedPair> precompute_pairs(const std::vector<ScenePair>& pairs,
                                         const ListenerProfile& listener,
                                         Mode mode, const Taxonomy& tax) {
  const ListenerProfile full = ListenerProfile::full();
  std::vector<CachedPair> out;
  out.reserve(pairs.size());
  for (const ScenePair& pair : pairs) {
    CachedPair cp;
    cp.target = pair.target;
    cp.difficulty = pair.difficulty;
    CandidateSet cs = mode == Mode::Word
                          ? word_candidates(pair.target_scene(), tax)
                          : sentence_candidates(pair.target_scene(), tax);
    cp.cands.reserve(cs.candidates.size());
    for (Utterance& utt : cs.candidates) {
      CachedCandidate cc;
      cc.gen = generality(utt, tax);
      SimulationResult sf = simulate_listener(utt, pair, full, tax);
      cc.p_full = sf.p_i;
      cc.t_full = sf.t_i;
      SimulationResult sl = simulate_listener(utt, pair, listener, tax);
      cc.p_lis = sl.p_i;
      cc.t_lis = sl.t_i;
      cc.outcome = outcome_of(utt, pair, listener, tax);
      cc.utt = std::move(utt);
      cp.cands.push_back(std::move(cc));
    }
    out.push_back(std::move(cp));
  }
  return out;
}

int select_rational_cached(const CachedPair& pair, bool use_listener_sim) {
  Best best;
  for (size_t i = 0; i < pair.cands.size(); ++i) {
    const CachedCandidate& c = pair.cands[i];
    int t = use_listener_sim ? c.t_lis : c.t_full;
    double p = use_listener_sim ? c.p_lis : c.p_full;
    double score = t == pair.target ? p : 0.0;
    best.offer(static_cast<int>(i), score, c.gen);
  }
  return best.index;
}

ScoredCandidate select_pragmatic_cached(const CachedPair& pair,
                                        const DisparityPolicy& policy,
                                        SelectMode mode, Rng* rng) {
  int n = static_cast<int>(pair.cands.size());
  auto get = [&](int i) {
    const CachedCandidate& c = pair.cands[i];
    ScoredCandidate sc;
    sc.index = i;
    sc.t_i = c.t_full;
    sc.p_i = c.p_full;
    sc.q_i = q_score(c.utt, policy);
    sc.a_i = combined_score(c.t_full, pair.target, c.p_full, sc.q_i,
                            policy.lambda_l, policy.lambda_d);
    sc.gen = c.gen;
    return sc;
  };
  return select_impl(n, get, mode, rng);
}

TrainResult train_cached(const std::vector<CachedPair>& train_pairs,
                         const std::vector<CachedPair>& val_pairs,
                         const TrainConfig& cfg) {
  if (train_pairs.empty() || val_pairs.empty()) {
    throw ConfigError("training requires nonempty train and val splits");
  }
  if (cfg.epochs < 1 || cfg.batch < 1 || cfg.lr0 <= 0.0 || cfg.patience < 1 ||
      !(cfg.decay > 0.0 && cfg.decay < 1.0)) {
    throw ConfigError("invalid training configuration");
  }

  DisparityPolicy policy =
      DisparityPolicy::init(cfg.mode, cfg.lambda_l, cfg.lambda_d, cfg.lr0,
                            cfg.patience, cfg.decay, cfg.seed);
  std::vector<double> best_theta = policy.theta;
  double best_val = -1.0;

  const Rng root(cfg.seed);
  const size_t n_train = train_pairs.size();
  std::vector<size_t> order(n_train);
  for (size_t i = 0; i < n_train; ++i) order[i] = i;

  std::vector<double> grad(kVocabSize, 0.0);
  TrainingHistory history;
  history.epochs.reserve(cfg.epochs);
  int since_improve = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng ep = root.derive(2 * static_cast<uint64_t>(epoch));
    Rng vp = root.derive(2 * static_cast<uint64_t>(epoch) + 1);
    ep.shuffle(order);

    int correct = 0;
    int pending = 0;
    int updates = 0;
    int skipped = 0;
    double loss_sum = 0.0;

    auto apply = [&]() {
      for (int k = 0; k < kVocabSize; ++k) {
        policy.theta[k] += policy.lr * grad[k];
        grad[k] = 0.0;
      }
      pending = 0;
    };

    for (size_t idx : order) {
      const CachedPair& pair = train_pairs[idx];
      ScoredCandidate sc =
          select_pragmatic_cached(pair, policy, SelectMode::Train, &ep);
      const CachedCandidate& cand = pair.cands[sc.index];
      int r;
      if (cand.outcome == 0) {
        r = +1;
      } else if (cand.outcome == 1) {
        r = -1;
      } else {
        r = ep.coin() ? +1 : -1;
      }
      if (r > 0) ++correct;

      if (sc.a_i > 0.0) {
        loss_sum += -std::log(sc.a_i) * r;
        ++updates;
        const double g = r * policy.lambda_d * (1.0 - sc.q_i) /
                         static_cast<double>(cand.utt.tokens.size());
        for (TokenId t : cand.utt.tokens) grad[t] += g;
      } else {
        ++skipped;
      }
      if (++pending == cfg.batch) apply();
    }
    if (pending > 0) apply();

    int val_correct = 0;
    for (const CachedPair& pair : val_pairs) {
      ScoredCandidate sc =
          select_pragmatic_cached(pair, policy, SelectMode::Eval, nullptr);
      int outcome = pair.cands[sc.index].outcome;
      if (outcome == 0 || (outcome == 2 && vp.coin())) ++val_correct;
    }
    double val_acc = static_cast<double>(val_correct) / val_pairs.size();

    EpochStats stats;
    stats.train_accuracy = static_cast<double>(correct) / n_train;
    stats.val_accuracy = val_acc;
    stats.mean_loss = updates > 0 ? loss_sum / updates : 0.0;
    stats.lr = policy.lr;
    stats.skipped_updates = skipped;
    history.epochs.push_back(stats);

    if (val_acc > best_val) {
      best_val = val_acc;
      best_theta = policy.theta;
      since_improve = 0;
    } else {
      ++since_improve;
    }
    if (since_improve >= cfg.patience) {
      policy.lr *= cfg.decay;
      since_improve = 0;
    }
  }

  policy.theta = std::move(best_theta);
  policy.schedule.best_val_accuracy = best_val;
  policy.schedule.epochs_since_improve = since_improve;
  return {std::move(policy), std::move(history)};
}

TrainResult train(const Dataset& ds, const ListenerProfile& listener,
                  const TrainConfig& cfg, const Taxonomy& tax) {
  if (ds.train.empty() || ds.val.empty()) {
    throw ConfigError("dataset is missing a train or val split");
  }
  auto train_cache = precompute_pairs(ds.train, listener, cfg.mode, tax);
  auto val_cache = precompute_pairs(ds.val, listener, cfg.mode, tax);
  return train_cached(train_cache, val_cache, cfg);
}

namespace {

using nlohmann::json;

const char* mode_name(Mode m) { return m == Mode::Word ? "word" : "sentence"; }

}  // namespace

std::string policy_to_json(const DisparityPolicy& policy,
                           const Taxonomy& tax) {
  json theta;
  for (int t = 0; t < kVocabSize; ++t) theta[tax.name(t)] = policy.theta[t];
  json j;
  j["format_version"] = 1;
  j["mode"] = mode_name(policy.mode);
  j["lambda_l"] = policy.lambda_l;
  j["lambda_d"] = policy.lambda_d;
  j["lr"] = policy.lr;
  j["theta"] = std::move(theta);
  j["schedule_state"] = {
      {"best_val_accuracy", policy.schedule.best_val_accuracy},
      {"epochs_since_improve", policy.schedule.epochs_since_improve},
      {"decay_factor", policy.schedule.decay_factor},
      {"patience", policy.schedule.patience}};
  j["best_val_accuracy"] = policy.schedule.best_val_accuracy;
  j["seed"] = policy.seed;
  return j.dump(2) + "\n";
}

std::string history_to_json(const TrainingHistory& history) {
  json epochs = json::array();
  for (size_t i = 0; i < history.epochs.size(); ++i) {
    const EpochStats& e = history.epochs[i];
    epochs.push_back({{"epoch", i + 1},
                      {"train_accuracy", e.train_accuracy},
                      {"val_accuracy", e.val_accuracy},
                      {"mean_loss", e.mean_loss},
                      {"lr", e.lr},
                      {"skipped_updates", e.skipped_updates}});
  }
  json j;
  j["format_version"] = 1;
  j["epochs"] = std::move(epochs);
  return j.dump(2) + "\n";
}

void save_policy(const DisparityPolicy& policy, const Taxonomy& tax,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write policy file: " + path);
  out << policy_to_json(policy, tax);
  if (!out) throw std::runtime_error("failed writing policy file: " + path);
}

DisparityPolicy load_policy(const std::string& path, const Taxonomy& tax) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open policy file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad policy JSON: ") + e.what(), 0);
  }
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw ParseError("unsupported policy format_version", 0);
    }
    DisparityPolicy p;
    p.mode =
        j.at("mode").get<std::string>() == "word" ? Mode::Word : Mode::Sentence;
    p.lambda_l = j.at("lambda_l").get<double>();
    p.lambda_d = j.at("lambda_d").get<double>();
    p.lr = j.at("lr").get<double>();
    p.seed = j.at("seed").get<uint64_t>();
    const auto& s = j.at("schedule_state");
    p.schedule.best_val_accuracy = s.at("best_val_accuracy").get<double>();
    p.schedule.epochs_since_improve =
        s.at("epochs_since_improve").get<int>();
    p.schedule.decay_factor = s.at("decay_factor").get<double>();
    p.schedule.patience = s.at("patience").get<int>();
    p.theta.assign(kVocabSize, 0.0);
    for (const auto& [name, value] : j.at("theta").items()) {
      TokenId id = tax.find(name);
      if (id < 0) throw UnknownTokenError(name);
      p.theta[id] = value.get<double>();
    }
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("missing or invalid policy field: ") +
                         e.what(),
                     0);
  }
}

}  // namespace prs
