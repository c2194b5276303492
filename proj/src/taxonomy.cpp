#include "prs/taxonomy.hpp"

#include <fstream>
#include <sstream>

#include "prs/errors.hpp"

namespace prs {

namespace {

// Inventory order follows the source table: categories in table order,
// objects in row order. Multiword entries are canonicalized with
// underscores so every token is a single whitespace-free unit.
struct Row {
  const char* object;
  const char* hypernym;
};

constexpr Row kInventory[kNumObjects] = {
    {"mike_reach", "boy"},
    {"mike_kick", "boy"},
    {"mike_run", "boy"},
    {"mike_sit", "boy"},
    {"mike_fall_over", "boy"},
    {"mike_wave", "boy"},
    {"mike_up", "boy"},
    {"jenny_reach", "girl"},
    {"jenny_kick", "girl"},
    {"jenny_run", "girl"},
    {"jenny_sit", "girl"},
    {"jenny_fall_over", "girl"},
    {"jenny_wave", "girl"},
    {"jenny_up", "girl"},
    {"blue_hat", "clothing"},
    {"crown", "clothing"},
    {"chef_hat", "clothing"},
    {"pirate_hat", "clothing"},
    {"sweater_hat", "clothing"},
    {"silly_hat", "clothing"},
    {"wizzard_hat", "clothing"},
    {"horn_hat", "clothing"},
    {"glasses", "clothing"},
    {"sunglasses", "clothing"},
    {"bee", "large_objects"},
    {"slide", "large_objects"},
    {"sand", "large_objects"},
    {"grill", "large_objects"},
    {"swing", "large_objects"},
    {"tent", "large_objects"},
    {"bench", "large_objects"},
    {"christmas_tree", "large_objects"},
    {"tree", "large_objects"},
    {"apple_tree", "large_objects"},
    {"baseball", "toys"},
    {"glove", "toys"},
    {"shovel", "toys"},
    {"racket", "toys"},
    {"kite", "toys"},
    {"fire", "toys"},
    {"bucket", "toys"},
    {"colorful_ball", "toys"},
    {"basketball", "toys"},
    {"soccer", "toys"},
    {"tennis_ball", "toys"},
    {"football", "toys"},
    {"frisbee", "toys"},
    {"baseball_poll", "toys"},
    {"balloon", "toys"},
    {"pie", "food"},
    {"pizza", "food"},
    {"hotdog", "food"},
    {"ketchup", "food"},
    {"mustard", "food"},
    {"burger", "food"},
    {"coke", "food"},
    {"helicopter", "sky_objects"},
    {"hotair_balloon", "sky_objects"},
    {"cloud", "sky_objects"},
    {"sun", "sky_objects"},
    {"lightening", "sky_objects"},
    {"rain", "sky_objects"},
    {"rocket", "sky_objects"},
    {"plane", "sky_objects"},
    {"bear", "animal"},
    {"cat", "animal"},
    {"dog", "animal"},
    {"duck", "animal"},
    {"owl", "animal"},
    {"snake", "animal"},
};

constexpr const char* kHypernyms[kNumHypernyms] = {
    "boy",  "girl", "clothing",    "large_objects",
    "toys", "food", "sky_objects", "animal",
};

int hypernym_index(const std::string& name) {
  for (int h = 0; h < kNumHypernyms; ++h) {
    if (name == kHypernyms[h]) return h;
  }
  return -1;
}

}  // namespace

Taxonomy::Taxonomy() {
  names_.reserve(kVocabSize);
  for (int i = 0; i < kNumObjects; ++i) {
    names_.emplace_back(kInventory[i].object);
    int h = hypernym_index(kInventory[i].hypernym);
    object_category_[i] = h;
    members_[h].push_back(i);
    ids_.emplace(names_.back(), i);
  }
  for (int h = 0; h < kNumHypernyms; ++h) {
    names_.emplace_back(kHypernyms[h]);
    ids_.emplace(names_.back(), kNumObjects + h);
  }
}

TokenId Taxonomy::find(const std::string& name) const {
  auto it = ids_.find(name);
  return it == ids_.end() ? -1 : it->second;
}

std::string Taxonomy::hypernym_of(const std::string& token) const {
  TokenId id = find(token);
  if (id < 0) throw UnknownTokenError(token);
  return names_[hypernym_token(id)];
}

bool Taxonomy::in_category(const std::string& token,
                           const std::string& category) const {
  int h = hypernym_index(category);
  if (h < 0) throw ConfigError("unknown category: " + category);
  TokenId id = find(token);
  if (id < 0) return false;
  return category_of(id) == h;
}

std::map<std::string, std::string> Taxonomy::mapping() const {
  std::map<std::string, std::string> m;
  for (int i = 0; i < kNumObjects; ++i) {
    m.emplace(names_[i], names_[hypernym_token(i)]);
  }
  return m;
}

std::map<std::string, std::vector<std::string>> Taxonomy::inverse() const {
  std::map<std::string, std::vector<std::string>> inv;
  for (int h = 0; h < kNumHypernyms; ++h) {
    auto& list = inv[names_[kNumObjects + h]];
    for (TokenId obj : members_[h]) list.push_back(names_[obj]);
  }
  return inv;
}

std::string Taxonomy::to_tsv() const {
  std::string out;
  for (int i = 0; i < kNumObjects; ++i) {
    out += names_[i];
    out += '\t';
    out += names_[hypernym_token(i)];
    out += '\n';
  }
  return out;
}

const Taxonomy& load_taxonomy() {
  static const Taxonomy tax;
  return tax;
}

Taxonomy load_taxonomy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open taxonomy file: " + path, 0);

  const Taxonomy& ref = load_taxonomy();
  std::vector<bool> seen(kNumObjects, false);
  std::string line;
  int lineno = 0;
  int count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("expected object<TAB>hypernym, got: " + line, lineno);
    }
    std::string object = line.substr(0, tab);
    std::string hypernym = line.substr(tab + 1);
    TokenId id = ref.find(object);
    if (id < 0 || !ref.is_object(id)) {
      throw ParseError("not an inventory object: " + object, lineno);
    }
    if (seen[id]) throw ParseError("duplicate object: " + object, lineno);
    if (ref.hypernym_of(object) != hypernym) {
      throw ParseError("wrong hypernym for " + object + ": " + hypernym,
                       lineno);
    }
    seen[id] = true;
    ++count;
  }
  if (count != kNumObjects) {
    throw ParseError("expected " + std::to_string(kNumObjects) +
                         " rows, got " + std::to_string(count),
                     lineno);
  }
  return ref;  // contents verified identical to the built-in table
}

}  // namespace prs
