#include "prs/speaker.hpp"

#include <algorithm>

namespace prs {

namespace {

std::vector<TokenId> base_tokens(const Scene& target, const Taxonomy& tax) {
  std::vector<TokenId> objects = target.objects;
  std::sort(objects.begin(), objects.end(),
            [&](TokenId a, TokenId b) { return tax.name(a) < tax.name(b); });

  std::vector<TokenId> hypernyms;
  for (TokenId o : target.objects) {
    TokenId h = tax.hypernym_token(o);
    if (std::find(hypernyms.begin(), hypernyms.end(), h) == hypernyms.end()) {
      hypernyms.push_back(h);
    }
  }
  std::sort(hypernyms.begin(), hypernyms.end(),
            [&](TokenId a, TokenId b) { return tax.name(a) < tax.name(b); });

  objects.insert(objects.end(), hypernyms.begin(), hypernyms.end());
  return objects;
}

}  // namespace

CandidateSet word_candidates(const Scene& target, const Taxonomy& tax) {
  CandidateSet cs;
  cs.source_scene_id = target.id;
  for (TokenId t : base_tokens(target, tax)) {
    if (static_cast<int>(cs.candidates.size()) >= kBeamSize) break;
    cs.candidates.push_back(Utterance{{t}, Mode::Word, ""});
  }
  return cs;
}

CandidateSet sentence_candidates(const Scene& target, const Taxonomy& tax) {
  std::vector<TokenId> base = base_tokens(target, tax);

  CandidateSet cs;
  cs.source_scene_id = target.id;
  for (TokenId t : base) {
    if (static_cast<int>(cs.candidates.size()) >= kBeamSize) return cs;
    cs.candidates.push_back(
        Utterance{{t}, Mode::Sentence, "there is a " + tax.name(t)});
  }

  std::vector<std::pair<TokenId, TokenId>> pairs;
  for (TokenId x : base) {
    for (TokenId y : base) {
      if (x != y) pairs.emplace_back(x, y);
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [&](const auto& l, const auto& r) {
              if (tax.name(l.first) != tax.name(r.first)) {
                return tax.name(l.first) < tax.name(r.first);
              }
              return tax.name(l.second) < tax.name(r.second);
            });
  for (const auto& [x, y] : pairs) {
    if (static_cast<int>(cs.candidates.size()) >= kBeamSize) break;
    cs.candidates.push_back(Utterance{
        {x, y},
        Mode::Sentence,
        "there is a " + tax.name(x) + " and a " + tax.name(y)});
  }
  return cs;
}

int generality(const Utterance& utt, const Taxonomy& tax) {
  int n = 0;
  for (TokenId t : utt.tokens) {
    if (tax.is_hypernym(t)) ++n;
  }
  return n;
}

}  // namespace prs
