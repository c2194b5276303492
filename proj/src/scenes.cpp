#include "prs/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "prs/errors.hpp"

namespace prs {

namespace {

// Pair-construction shaping. The distractor is built from the target by
// removing objects from one "focus" category (plus at most one secondary
// category) and adding fresh objects elsewhere. A "clean" removal wipes the
// focus category from the distractor entirely; a "covered" removal leaves a
// survivor, so the target's edge in that category is a matter of degree
// rather than outright absence. Large differences are kept mostly covered,
// and the animal category is picked as focus more often than the rest, which
// also skews scene composition toward animals. Animal-focus pairs are kept
// off the minimal differences (a single removal would be the pair's only
// evidence) and are always clean above them: that routes their surplus
// removals into a secondary (non-animal) category, so even a listener blind
// to animals is left some usable evidence.
constexpr double kAnimalWeight = 3.5;
constexpr double kCleanProbHard = 0.10;   // d in {3,4}
constexpr double kCleanProbEasy = 0.02;   // d >= 5
constexpr double kCoveredProbShort = 0.30;  // d in {1,2}
constexpr int kMaxRemovals = 4;
constexpr int kMaxFocusRemovals = 3;
constexpr int kEasyMaxDiff = 7;

int animal_category() {
  static const int cat =
      load_taxonomy().category_of(load_taxonomy().find("animal"));
  return cat;
}

double object_weight(const Taxonomy& tax, TokenId obj) {
  return tax.category_of(obj) == animal_category() ? kAnimalWeight : 1.0;
}

// Draws one element from `pool` with the given weights and removes it.
template <class T>
T weighted_take(Rng& rng, std::vector<T>& pool, std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double x = rng.uniform01() * total;
  size_t pick = pool.size() - 1;
  double cum = 0.0;
  for (size_t i = 0; i < pool.size(); ++i) {
    cum += weights[i];
    if (x < cum) {
      pick = i;
      break;
    }
  }
  T out = pool[pick];
  pool.erase(pool.begin() + pick);
  weights.erase(weights.begin() + pick);
  return out;
}

struct Shape {
  int d = 0;
  int rem = 0;
  int add = 0;
  std::vector<int> target_sizes;  // feasible |T| choices
};

int preferred_removals(int d) { return std::min((d + 1) / 2, kMaxRemovals); }

// Objects a clean focus needs in the target (one, fully removed, plus a
// secondary category with one survivor for the remaining removals).
int clean_footprint(int rem) { return rem > 1 ? 1 + rem : 1; }

std::vector<Shape> feasible_shapes(Difficulty difficulty,
                                   const GenConfig& cfg) {
  std::vector<Shape> shapes;
  const int d_lo = difficulty == Difficulty::Hard ? 1 : 5;
  const int d_hi = difficulty == Difficulty::Hard ? 4 : kEasyMaxDiff;
  for (int d = d_lo; d <= d_hi; ++d) {
    const int pref = preferred_removals(d);
    for (int delta : {0, -1, 1, -2, 2, -3, 3}) {
      int rem = pref + delta;
      if (rem < 1 || rem > kMaxRemovals || rem > d) continue;
      int add = d - rem;
      Shape s{d, rem, add, {}};
      for (int nt = cfg.size_min; nt <= cfg.size_max; ++nt) {
        int nd = nt - rem + add;
        if (nd < cfg.size_min || nd > cfg.size_max) continue;
        if (clean_footprint(rem) > nt) continue;  // clean must always fit
        s.target_sizes.push_back(nt);
      }
      if (!s.target_sizes.empty()) {
        shapes.push_back(std::move(s));
        break;  // keep the closest-to-preferred removal count per d
      }
    }
  }
  return shapes;
}

void validate_bounds(const GenConfig& cfg) {
  if (cfg.size_min < 1 || cfg.size_min > cfg.size_max || cfg.size_max > 9) {
    throw ConfigError("scene size bounds must satisfy 1 <= min <= max <= 9");
  }
}

}  // namespace

bool Scene::contains(TokenId t) const {
  return std::binary_search(objects.begin(), objects.end(), t);
}

int symmetric_difference_size(const Scene& a, const Scene& b) {
  size_t i = 0, j = 0;
  int diff = 0;
  while (i < a.objects.size() && j < b.objects.size()) {
    if (a.objects[i] == b.objects[j]) {
      ++i;
      ++j;
    } else if (a.objects[i] < b.objects[j]) {
      ++diff;
      ++i;
    } else {
      ++diff;
      ++j;
    }
  }
  diff += static_cast<int>((a.objects.size() - i) + (b.objects.size() - j));
  return diff;
}

Scene generate_scene(Rng& rng, int size_min, int size_max,
                     const Taxonomy& tax) {
  GenConfig bounds{size_min, size_max};
  validate_bounds(bounds);
  (void)tax;
  int n = size_min + static_cast<int>(rng.below(
                         static_cast<uint64_t>(size_max - size_min + 1)));
  std::vector<TokenId> all(kNumObjects);
  for (int i = 0; i < kNumObjects; ++i) all[i] = i;
  rng.shuffle(all);
  Scene s;
  s.objects.assign(all.begin(), all.begin() + n);
  std::sort(s.objects.begin(), s.objects.end());
  return s;
}

Difficulty classify_difficulty(const ScenePair& pair) {
  int d = symmetric_difference_size(pair.a, pair.b);
  if (d == 0) throw ConfigError("invalid pair: scenes are identical");
  return d <= 4 ? Difficulty::Hard : Difficulty::Easy;
}

ScenePair generate_pair(Rng& rng, Difficulty difficulty, const GenConfig& cfg,
                        const Taxonomy& tax) {
  validate_bounds(cfg);
  std::vector<Shape> shapes = feasible_shapes(difficulty, cfg);
  if (shapes.empty()) {
    throw ConfigError(std::string("cannot reach ") +
                      difficulty_name(difficulty) +
                      " difficulty within the scene size bounds");
  }

  const Shape& shape = shapes[rng.below(shapes.size())];
  const int rem = shape.rem;
  const int add = shape.add;
  const int nt =
      shape.target_sizes[rng.below(shape.target_sizes.size())];

  // Focus category, animal-weighted; secondary category for leftover
  // removals is uniform over the remaining non-animal categories.
  std::vector<int> cats;
  std::vector<double> cat_weights;
  for (int c = 0; c < kNumHypernyms; ++c) {
    if (shape.d <= 2 && c == animal_category()) continue;
    cats.push_back(c);
    cat_weights.push_back(c == animal_category() ? kAnimalWeight : 1.0);
  }
  const int focus = weighted_take(rng, cats, cat_weights);

  bool clean;
  if (shape.d <= 2) {
    clean = !rng.bernoulli(kCoveredProbShort);
  } else if (focus == animal_category()) {
    clean = true;
  } else {
    double p = shape.d <= 4 ? kCleanProbHard : kCleanProbEasy;
    clean = rng.bernoulli(p);
  }
  int focus_removals = clean ? std::min(rem, 1) : std::min(rem, kMaxFocusRemovals);
  int focus_count = clean ? focus_removals : focus_removals + 1;
  int spread_removals = rem - focus_removals;
  int spread_count = spread_removals > 0 ? spread_removals + 1 : 0;
  if (focus_count + spread_count > nt) {  // fall back to the minimal shape
    clean = true;
    focus_removals = 1;
    focus_count = 1;
    spread_removals = rem - 1;
    spread_count = spread_removals > 0 ? spread_removals + 1 : 0;
  }
  int spread = -1;
  if (spread_count > 0) {
    std::vector<int> others;
    for (int c = 0; c < kNumHypernyms; ++c) {
      if (c != focus && c != animal_category()) others.push_back(c);
    }
    spread = others[rng.below(others.size())];
  }

  auto take_members = [&](int category, int count) {
    std::vector<TokenId> pool = tax.members(category);
    std::vector<double> w(pool.size(), 1.0);
    std::vector<TokenId> out;
    for (int k = 0; k < count; ++k) out.push_back(weighted_take(rng, pool, w));
    return out;
  };

  std::vector<TokenId> focus_objs = take_members(focus, focus_count);
  std::vector<TokenId> spread_objs =
      spread >= 0 ? take_members(spread, spread_count) : std::vector<TokenId>{};

  std::vector<TokenId> target_objs = focus_objs;
  target_objs.insert(target_objs.end(), spread_objs.begin(),
                     spread_objs.end());

  // Fillers for the rest of the target, from untouched categories.
  {
    std::vector<TokenId> pool;
    std::vector<double> w;
    for (TokenId o = 0; o < kNumObjects; ++o) {
      int c = tax.category_of(o);
      if (c == focus || c == spread) continue;
      pool.push_back(o);
      w.push_back(object_weight(tax, o));
    }
    while (static_cast<int>(target_objs.size()) < nt) {
      target_objs.push_back(weighted_take(rng, pool, w));
    }
  }

  // Removals: the leading focus/spread draws go, the last one of each group
  // survives in covered mode.
  std::vector<TokenId> removed(focus_objs.begin(),
                               focus_objs.begin() + focus_removals);
  removed.insert(removed.end(), spread_objs.begin(),
                 spread_objs.begin() + spread_removals);

  std::vector<TokenId> distractor_objs;
  for (TokenId o : target_objs) {
    if (std::find(removed.begin(), removed.end(), o) == removed.end()) {
      distractor_objs.push_back(o);
    }
  }

  // Additions avoid the removal categories so the distractor never regains
  // evidence there, and avoid objects already in the target.
  if (add > 0) {
    std::vector<TokenId> pool;
    std::vector<double> w;
    for (TokenId o = 0; o < kNumObjects; ++o) {
      int c = tax.category_of(o);
      if (c == focus || c == spread) continue;
      if (std::find(target_objs.begin(), target_objs.end(), o) !=
          target_objs.end()) {
        continue;
      }
      pool.push_back(o);
      w.push_back(object_weight(tax, o));
    }
    for (int k = 0; k < add; ++k) {
      distractor_objs.push_back(weighted_take(rng, pool, w));
    }
  }

  Scene target_scene;
  target_scene.objects = target_objs;
  std::sort(target_scene.objects.begin(), target_scene.objects.end());
  Scene distractor_scene;
  distractor_scene.objects = distractor_objs;
  std::sort(distractor_scene.objects.begin(), distractor_scene.objects.end());

  ScenePair pair;
  pair.target = rng.coin() ? 1 : 0;
  if (pair.target == 0) {
    pair.a = target_scene;
    pair.b = distractor_scene;
  } else {
    pair.a = distractor_scene;
    pair.b = target_scene;
  }
  pair.difficulty = classify_difficulty(pair);
  return pair;
}

Dataset assemble_dataset(uint64_t seed, int n_pairs, double hard_fraction,
                         const GenConfig& cfg, const Taxonomy& tax) {
  if (n_pairs < 10) throw ConfigError("n_pairs must be at least 10");
  if (!(hard_fraction >= 0.0 && hard_fraction <= 1.0)) {
    throw ConfigError("hard_fraction must lie in [0, 1]");
  }
  validate_bounds(cfg);

  const int n_hard =
      static_cast<int>(std::llround(n_pairs * hard_fraction));
  Rng gen_rng = Rng(seed).derive(1);
  Rng order_rng = Rng(seed).derive(2);

  std::vector<ScenePair> pairs;
  pairs.reserve(n_pairs);
  for (int i = 0; i < n_hard; ++i) {
    pairs.push_back(generate_pair(gen_rng, Difficulty::Hard, cfg, tax));
  }
  for (int i = n_hard; i < n_pairs; ++i) {
    pairs.push_back(generate_pair(gen_rng, Difficulty::Easy, cfg, tax));
  }
  order_rng.shuffle(pairs);
  for (int i = 0; i < n_pairs; ++i) {
    pairs[i].id = i;
    pairs[i].a.id = 2 * i;
    pairs[i].b.id = 2 * i + 1;
  }

  const int n_holdout = n_pairs / 10;
  const int n_train = n_pairs - 2 * n_holdout;

  Dataset ds;
  ds.seed = seed;
  ds.n_pairs = n_pairs;
  ds.hard_fraction = hard_fraction;
  ds.gen = cfg;
  ds.train.assign(pairs.begin(), pairs.begin() + n_train);
  ds.val.assign(pairs.begin() + n_train, pairs.begin() + n_train + n_holdout);
  ds.test.assign(pairs.begin() + n_train + n_holdout, pairs.end());
  return ds;
}

const char* difficulty_name(Difficulty d) {
  return d == Difficulty::Hard ? "hard" : "easy";
}

namespace {

using nlohmann::json;

json scene_to_json(const Scene& s, const Taxonomy& tax) {
  json arr = json::array();
  for (TokenId t : s.objects) arr.push_back(tax.name(t));
  return arr;
}

json pair_to_json(const ScenePair& p, const char* split, const Taxonomy& tax) {
  json j;
  j["id"] = p.id;
  j["scene_a"] = scene_to_json(p.a, tax);
  j["scene_b"] = scene_to_json(p.b, tax);
  j["target"] = p.target;
  j["difficulty"] = difficulty_name(p.difficulty);
  j["split"] = split;
  return j;
}

ScenePair pair_from_json(const json& j, const Taxonomy& tax, int lineno) {
  ScenePair p;
  p.id = j.at("id").get<int>();
  auto read_scene = [&](const char* key) {
    Scene s;
    for (const auto& tok : j.at(key)) {
      TokenId id = tax.find(tok.get<std::string>());
      if (id < 0 || !tax.is_object(id)) {
        throw ParseError("not an inventory object: " + tok.get<std::string>(),
                         lineno);
      }
      s.objects.push_back(id);
    }
    std::sort(s.objects.begin(), s.objects.end());
    return s;
  };
  p.a = read_scene("scene_a");
  p.b = read_scene("scene_b");
  p.a.id = 2 * p.id;
  p.b.id = 2 * p.id + 1;
  p.target = j.at("target").get<int>();
  if (p.target != 0 && p.target != 1) {
    throw ParseError("target must be 0 or 1", lineno);
  }
  std::string diff = j.at("difficulty").get<std::string>();
  if (diff != "hard" && diff != "easy") {
    throw ParseError("difficulty must be hard or easy", lineno);
  }
  p.difficulty = diff == "hard" ? Difficulty::Hard : Difficulty::Easy;
  if (classify_difficulty(p) != p.difficulty) {
    throw ParseError("stored difficulty does not match the scenes", lineno);
  }
  return p;
}

}  // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  const Taxonomy& tax = load_taxonomy();

  json header;
  header["format_version"] = 1;
  header["seed"] = ds.seed;
  header["config"] = {{"n_pairs", ds.n_pairs},
                      {"hard_fraction", ds.hard_fraction},
                      {"size_min", ds.gen.size_min},
                      {"size_max", ds.gen.size_max}};
  out << header.dump() << '\n';

  auto dump_split = [&](const std::vector<ScenePair>& pairs,
                        const char* split) {
    for (const auto& p : pairs) out << pair_to_json(p, split, tax).dump() << '\n';
  };
  dump_split(ds.train, "train");
  dump_split(ds.val, "val");
  dump_split(ds.test, "test");
  if (!out) throw std::runtime_error("failed writing dataset file: " + path);
}

Dataset load_dataset(const std::string& path, const Taxonomy& tax) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::string line;
  int lineno = 0;
  Dataset ds;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad JSON: ") + e.what(), lineno);
    }
    try {
      if (!have_header) {
        if (j.at("format_version").get<int>() != 1) {
          throw ParseError("unsupported format_version", lineno);
        }
        ds.seed = j.at("seed").get<uint64_t>();
        const auto& cfg = j.at("config");
        ds.n_pairs = cfg.at("n_pairs").get<int>();
        ds.hard_fraction = cfg.at("hard_fraction").get<double>();
        ds.gen.size_min = cfg.at("size_min").get<int>();
        ds.gen.size_max = cfg.at("size_max").get<int>();
        have_header = true;
        continue;
      }
      std::string split = j.at("split").get<std::string>();
      ScenePair p = pair_from_json(j, tax, lineno);
      if (split == "train") {
        ds.train.push_back(std::move(p));
      } else if (split == "val") {
        ds.val.push_back(std::move(p));
      } else if (split == "test") {
        ds.test.push_back(std::move(p));
      } else {
        throw ParseError("unknown split: " + split, lineno);
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("missing or invalid field: ") + e.what(),
                       lineno);
    }
  }
  if (!have_header) throw ParseError("missing dataset header", lineno);
  int total = static_cast<int>(ds.train.size() + ds.val.size() + ds.test.size());
  if (total != ds.n_pairs) {
    throw ParseError("pair count does not match header", lineno);
  }
  return ds;
}

}  // namespace prs
