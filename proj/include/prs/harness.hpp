#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "prs/pragmatic.hpp"

namespace prs {

enum class SpeakerKind { S0, S1, S1d, S1nd };
enum class DisparityKind { Hypernym, LimitedVisual };

constexpr int kNumSpeakers = 4;
constexpr int kNumSlices = 3;  // Hard, Easy, Combined

const char* speaker_name(SpeakerKind k);
const char* slice_name(int slice);
const char* disparity_name(DisparityKind d);

struct ExperimentConfig {
  uint64_t seed = 7;
  int n_pairs = 2000;
  double hard_fraction = 0.58;
  Mode mode = Mode::Word;
  DisparityKind disparity = DisparityKind::Hypernym;
  double lambda_l = 1.0;
  double lambda_d = 1.0;
  int epochs = -1;    // -1 -> mode default (word 200, sentence 150)
  int batch = 128;
  double lr = -1.0;   // -1 -> mode default base lr (word 2.0, sentence 0.5)
  double lr_scale = -1.0;  // -1 -> mode default scale; multiplies lr
  int patience = -1;  // -1 -> mode default (word 50, sentence 20)
  double decay = 0.8;
  int repeats = 3;
  GenConfig gen;
};

// Fills mode-dependent defaults and validates ranges; throws ConfigError.
ExperimentConfig resolve_defaults(ExperimentConfig cfg);

ListenerProfile profile_for(DisparityKind d);

struct Stat {
  double mean = 0.0;
  double stdev = 0.0;  // population std over repeats
};

struct AccuracyReport {
  // Indexed [speaker][slice].
  std::array<std::array<Stat, kNumSlices>, kNumSpeakers> acc;
  // Raw per-repeat values, same indexing, innermost = repeat.
  std::array<std::array<std::vector<double>, kNumSlices>, kNumSpeakers> raw;
};

struct ShiftReport {
  // Chosen-token frequency per speaker over the test split, mean/std over
  // repeats, indexed [speaker][token].
  std::array<std::vector<double>, kNumSpeakers> freq_mean;
  std::array<std::vector<double>, kNumSpeakers> freq_std;
  // Aggregates per speaker: sums over object tokens, hypernym tokens, and
  // animal-related tokens (the animal objects plus the "animal" hypernym).
  std::array<Stat, kNumSpeakers> hyponym_share;
  std::array<Stat, kNumSpeakers> hypernym_share;
  std::array<Stat, kNumSpeakers> animal_token_share;
};

struct GainRow {
  std::string slice;
  Stat s1d_minus_s1;   // pragmatic speaker gain over the rational speaker
  Stat s1d_minus_s1nd; // gap to the no-disparity upper bound (<= 0 expected)
};

struct SweepPoint {
  double lambda_l = 1.0;
  double lambda_d = 1.0;
  Stat combined_acc;
};

struct ExperimentResult {
  AccuracyReport accuracy;
  ShiftReport shift;
  std::vector<DisparityPolicy> policies;
  std::vector<TrainingHistory> histories;
};

// Per-slice accuracy {hard, easy, combined} of one speaker against the actual
// listener. policy may be null except for S1d.
std::array<double, kNumSlices> evaluate_speaker(
    SpeakerKind kind, const std::vector<ScenePair>& pairs,
    const ListenerProfile& listener, Mode mode, const DisparityPolicy* policy,
    const Taxonomy& tax, Rng& rng);

std::array<double, kNumSlices> evaluate_speaker_cached(
    SpeakerKind kind, const std::vector<CachedPair>& pairs,
    const DisparityPolicy* policy, Rng& rng);

// Generates the dataset, trains the pragmatic speaker `repeats` times with
// consecutive seeds, evaluates all four speakers per repeat, and (when
// out_dir is nonempty) writes accuracy.csv, shift.csv, history_<r>.json and
// policy_<r>.json. Partial files are removed on failure.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::string& out_dir = "");

std::vector<GainRow> gain_report(const AccuracyReport& acc);

std::vector<std::pair<double, double>> default_lambda_grid();

// Trains/evaluates the pragmatic speaker once per grid point on the same
// dataset and seeds; writes sweep.csv when out_dir is nonempty.
std::vector<SweepPoint> lambda_sweep(
    const ExperimentConfig& cfg,
    const std::vector<std::pair<double, double>>& grid,
    const std::string& out_dir = "");

// --- export ------------------------------------------------------------------

// Shortest-form rendering with 6 significant digits.
std::string format_number(double v);

std::string accuracy_to_csv(const AccuracyReport& report);
std::string shift_to_csv(const ShiftReport& report, const Taxonomy& tax);
std::string sweep_to_csv(const std::vector<SweepPoint>& points);
std::string gains_to_text(const std::vector<GainRow>& rows);

void write_file(const std::string& path, const std::string& content);

}  // namespace prs
