#pragma once

#include <string>
#include <vector>

#include "prs/scenes.hpp"
#include "prs/taxonomy.hpp"

namespace prs {

enum class Mode { Word, Sentence };

struct Utterance {
  std::vector<TokenId> tokens;  // content tokens, in surface order
  Mode mode = Mode::Word;
  std::string surface;  // rendered text (sentence mode only)

  bool operator==(const Utterance& o) const = default;
};

// Candidate cap, mirroring the generator's beam width. Word mode tops out at
// 9 objects + 8 hypernyms = 17 so the cap only binds in sentence mode.
constexpr int kBeamSize = 30;

struct CandidateSet {
  std::vector<Utterance> candidates;
  int source_scene_id = -1;
};

// One single-token utterance per target object plus one per covering
// hypernym: objects in lexicographic order, then hypernyms in lexicographic
// order.
CandidateSet word_candidates(const Scene& target, const Taxonomy& tax);

// Template sentences over the word-candidate tokens: first "there is a <x>"
// for every token x (word-candidate order), then "there is a <x> and a <y>"
// for all ordered pairs x != y sorted lexicographically, truncated to
// kBeamSize.
CandidateSet sentence_candidates(const Scene& target, const Taxonomy& tax);

// Number of hypernym tokens in the utterance; the generality key used to
// break score ties during selection.
int generality(const Utterance& utt, const Taxonomy& tax);

}  // namespace prs
