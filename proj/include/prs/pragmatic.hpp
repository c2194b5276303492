#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prs/listener.hpp"
#include "prs/rng.hpp"
#include "prs/scenes.hpp"
#include "prs/speaker.hpp"
#include "prs/taxonomy.hpp"

namespace prs {

// Simulated listener verdict for one candidate. t_i is the scene index the
// simulated listener would pick, or kSimTie when the evidence is balanced
// (p_i is then 0.5).
constexpr int kSimTie = -1;

struct SimulationResult {
  int t_i = kSimTie;
  double p_i = 0.5;
};

// Grounds the candidate in both scenes under sim_profile and normalizes:
// p = s_target / (s_target + s_distractor); zero evidence on both sides is a
// tie at 0.5.
SimulationResult simulate_listener(const Utterance& candidate,
                                   const ScenePair& pair,
                                   const ListenerProfile& sim_profile,
                                   const Taxonomy& tax);

// Index of the candidate maximizing [[t_i == target]] * p_i. Ties prefer the
// more general candidate (more hypernym tokens), then the lower candidate
// index; all-zero scores fall back to index 0.
int rational_select(const ScenePair& pair, const CandidateSet& candidates,
                    const ListenerProfile& sim_profile, const Taxonomy& tax);

struct ScheduleState {
  double best_val_accuracy = -1.0;
  int epochs_since_improve = 0;
  double decay_factor = 0.8;
  int patience = 50;
};

// The working memory: per-token weights plus the scoring exponents and the
// learning-rate schedule driving their updates.
struct DisparityPolicy {
  Mode mode = Mode::Word;
  std::vector<double> theta;  // kVocabSize weights, zero-initialized
  double lambda_l = 1.0;
  double lambda_d = 1.0;
  double lr = 2.0;  // current learning rate
  ScheduleState schedule;
  uint64_t seed = 0;

  static DisparityPolicy init(Mode mode, double lambda_l, double lambda_d,
                              double lr, int patience, double decay,
                              uint64_t seed);
};

// logistic(mean theta over content tokens). Throws UnknownTokenError on
// tokens outside the closed vocabulary.
double q_score(const Utterance& utt, const DisparityPolicy& policy);

// a_i = ([[t_i == target]] * p_i)^lambda_l * (q_i)^lambda_d, with 0^0 = 1 so
// a zero exponent disables its factor.
double combined_score(int t_i, int target, double p_i, double q_i,
                      double lambda_l, double lambda_d);

struct ScoredCandidate {
  int index = 0;
  int t_i = kSimTie;
  double p_i = 0.0;
  double q_i = 0.5;
  double a_i = 0.0;
  int gen = 0;  // generality tie-break key of the utterance
};

enum class SelectMode { Train, Eval };

// Eval: argmax a_i with the rational_select tie-break. Train: samples
// proportionally to a_i (uniform fallback when every a_i is zero).
ScoredCandidate pragmatic_select(const ScenePair& pair,
                                 const CandidateSet& candidates,
                                 const DisparityPolicy& policy,
                                 const ListenerProfile& sim_profile,
                                 SelectMode mode, Rng& rng,
                                 const Taxonomy& tax);

// One REINFORCE step on L = -log(a) * r. Gradients flow only through the q
// factor: theta[w] += lr * r * lambda_d * (1 - q) * occ_w / n_tokens.
// Returns false (no-op) when chosen.a_i == 0.
bool reinforce_update(DisparityPolicy& policy, const Utterance& chosen,
                      const ScoredCandidate& chosen_score, int r, double lr);

struct EpochStats {
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double mean_loss = 0.0;
  double lr = 0.0;
  int skipped_updates = 0;
};

struct TrainingHistory {
  std::vector<EpochStats> epochs;
};

struct TrainConfig {
  Mode mode = Mode::Word;
  double lambda_l = 1.0;
  double lambda_d = 1.0;
  int epochs = 200;
  int batch = 128;
  double lr0 = 2.0;
  int patience = 50;
  double decay = 0.8;
  uint64_t seed = 0;
};

struct TrainResult {
  DisparityPolicy policy;  // snapshot with the best validation accuracy
  TrainingHistory history;
};

// REINFORCE against the actual listener: per epoch, train pairs in seeded
// shuffled order, gradients accumulated over batches of cfg.batch decisions,
// validation in Eval mode, lr decayed by cfg.decay after cfg.patience epochs
// without improvement.
TrainResult train(const Dataset& ds, const ListenerProfile& listener,
                  const TrainConfig& cfg, const Taxonomy& tax);

// --- precomputed fast path --------------------------------------------------
// Candidates, simulations and listener outcomes are frozen once per dataset;
// training and evaluation then only touch theta. outcome: 0 = listener picks
// the target, 1 = listener picks the distractor, 2 = coin flip.

struct CachedCandidate {
  Utterance utt;
  int gen = 0;          // generality tie-break key
  double p_full = 0.0;  // simulation with the Full profile
  int t_full = kSimTie;
  double p_lis = 0.0;  // simulation with the listener's own profile
  int t_lis = kSimTie;
  int outcome = 2;
};

struct CachedPair {
  int target = 0;
  Difficulty difficulty = Difficulty::Hard;
  std::vector<CachedCandidate> cands;
};

std::vector<CachedPair> precompute_pairs(const std::vector<ScenePair>& pairs,
                                         const ListenerProfile& listener,
                                         Mode mode, const Taxonomy& tax);

// use_listener_sim selects the p_lis/t_lis columns (the upper-bound speaker).
int select_rational_cached(const CachedPair& pair, bool use_listener_sim);

ScoredCandidate select_pragmatic_cached(const CachedPair& pair,
                                        const DisparityPolicy& policy,
                                        SelectMode mode, Rng* rng);

TrainResult train_cached(const std::vector<CachedPair>& train_pairs,
                         const std::vector<CachedPair>& val_pairs,
                         const TrainConfig& cfg);

// --- checkpoints -------------------------------------------------------------

std::string policy_to_json(const DisparityPolicy& policy, const Taxonomy& tax);
std::string history_to_json(const TrainingHistory& history);
void save_policy(const DisparityPolicy& policy, const Taxonomy& tax,
                 const std::string& path);
DisparityPolicy load_policy(const std::string& path, const Taxonomy& tax);

}  // namespace prs
