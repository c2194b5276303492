#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prs/rng.hpp"
#include "prs/taxonomy.hpp"

namespace prs {

// A symbolic image: a set of inventory objects, stored sorted by token id.
struct Scene {
  int id = -1;
  std::vector<TokenId> objects;

  bool contains(TokenId t) const;
  bool operator==(const Scene& o) const = default;
};

enum class Difficulty { Hard, Easy };

struct ScenePair {
  int id = -1;
  Scene a;
  Scene b;
  int target = 0;  // index of the target scene: 0 -> a, 1 -> b
  Difficulty difficulty = Difficulty::Hard;

  const Scene& target_scene() const { return target == 0 ? a : b; }
  const Scene& distractor_scene() const { return target == 0 ? b : a; }
  bool operator==(const ScenePair& o) const = default;
};

struct GenConfig {
  int size_min = 6;
  int size_max = 7;
  bool operator==(const GenConfig& o) const = default;
};

int symmetric_difference_size(const Scene& a, const Scene& b);

// |objects| uniform in [size_min, size_max], sampled without replacement
// from the full inventory.
Scene generate_scene(Rng& rng, int size_min, int size_max, const Taxonomy& tax);

// Target scene plus a mutated distractor whose symmetric difference lands in
// the requested difficulty band. Throws ConfigError when the size bounds
// cannot reach the band.
ScenePair generate_pair(Rng& rng, Difficulty difficulty, const GenConfig& cfg,
                        const Taxonomy& tax);

// Hard iff |A (+) B| <= 4. Throws ConfigError when the difference is empty.
Difficulty classify_difficulty(const ScenePair& pair);

struct Dataset {
  std::vector<ScenePair> train;
  std::vector<ScenePair> val;
  std::vector<ScenePair> test;
  uint64_t seed = 0;
  int n_pairs = 0;
  double hard_fraction = 0.0;
  GenConfig gen;

  bool operator==(const Dataset& o) const = default;
};

// n_pairs >= 10; hard/easy mix within one pair of round(n_pairs *
// hard_fraction); splits 8:1:1 with the remainder going to train.
Dataset assemble_dataset(uint64_t seed, int n_pairs, double hard_fraction,
                         const GenConfig& cfg, const Taxonomy& tax);

// JSON-lines: a header object {format_version, seed, config} followed by one
// pair per line. load round-trips save exactly.
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path, const Taxonomy& tax);

const char* difficulty_name(Difficulty d);

}  // namespace prs
