#pragma once

#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace prs {

// Tokens are interned: object names take ids 0..69 in inventory order,
// hypernym names take ids 70..77. Id -1 means "not in vocabulary".
using TokenId = int;

constexpr int kNumObjects = 70;
constexpr int kNumHypernyms = 8;
constexpr int kVocabSize = kNumObjects + kNumHypernyms;
constexpr const char* kUnkToken = "[UNK]";

class Taxonomy {
 public:
  // Fixed built-in inventory (70 objects, 8 categories).
  Taxonomy();

  // --- interned API --------------------------------------------------------

  bool is_object(TokenId id) const { return id >= 0 && id < kNumObjects; }
  bool is_hypernym(TokenId id) const {
    return id >= kNumObjects && id < kVocabSize;
  }

  // Category index 0..7 of any vocabulary token.
  int category_of(TokenId id) const {
    return is_object(id) ? object_category_[id] : id - kNumObjects;
  }

  // Hypernyms are their own hypernym.
  TokenId hypernym_token(TokenId id) const {
    return is_object(id) ? kNumObjects + object_category_[id] : id;
  }

  const std::string& name(TokenId id) const { return names_[id]; }

  // -1 when the name is not in the vocabulary.
  TokenId find(const std::string& name) const;

  const std::vector<TokenId>& members(int category) const {
    return members_[category];
  }

  int category_size(int category) const {
    return static_cast<int>(members_[category].size());
  }

  // --- string API -----------------------------------------------------------

  // Throws UnknownTokenError for names outside the vocabulary.
  std::string hypernym_of(const std::string& token) const;

  // True iff token is `category` itself or an object in it. Throws
  // ConfigError when category is not one of the 8 hypernyms.
  bool in_category(const std::string& token, const std::string& category) const;

  // Full object -> hypernym map / hypernym -> objects partition, for
  // inspection and round-trip tests.
  std::map<std::string, std::string> mapping() const;
  std::map<std::string, std::vector<std::string>> inverse() const;

  // Canonical serialization: one "object<TAB>hypernym" row per object, in
  // inventory order, trailing newline.
  std::string to_tsv() const;

 private:
  std::vector<std::string> names_;               // 78, objects then hypernyms
  std::array<int, kNumObjects> object_category_;  // object id -> category 0..7
  std::array<std::vector<TokenId>, kNumHypernyms> members_;
  std::unordered_map<std::string, TokenId> ids_;
};

// Shared immutable instance of the built-in table.
const Taxonomy& load_taxonomy();

// Parses an object<TAB>hypernym file and checks it against the full
// inventory invariants. Throws ParseError naming the offending row.
Taxonomy load_taxonomy_file(const std::string& path);

}  // namespace prs
