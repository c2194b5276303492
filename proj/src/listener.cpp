#include "prs/listener.hpp"

#include <algorithm>

#include "prs/errors.hpp"

namespace prs {

ListenerProfile ListenerProfile::limited_visual(std::vector<int> blocked) {
  std::sort(blocked.begin(), blocked.end());
  blocked.erase(std::unique(blocked.begin(), blocked.end()), blocked.end());
  for (int c : blocked) {
    if (c < 0 || c >= kNumHypernyms) {
      throw ConfigError("blocked category index out of range");
    }
  }
  return {ListenerKind::LimitedVisual, std::move(blocked)};
}

ListenerProfile ListenerProfile::limited_visual_default() {
  const Taxonomy& tax = load_taxonomy();
  return limited_visual({tax.category_of(tax.find("animal"))});
}

bool ListenerProfile::blocks(int category) const {
  return kind == ListenerKind::LimitedVisual &&
         std::binary_search(blocked_categories.begin(),
                            blocked_categories.end(), category);
}

Scene perceive(const Scene& scene, const ListenerProfile& profile,
               const Taxonomy& tax) {
  if (profile.kind != ListenerKind::LimitedVisual) return scene;
  Scene out;
  out.id = scene.id;
  for (TokenId o : scene.objects) {
    if (!profile.blocks(tax.category_of(o))) out.objects.push_back(o);
  }
  return out;
}

TokenId interpret_token(TokenId token, const ListenerProfile& profile,
                        const Taxonomy& tax) {
  if (token < 0 || token >= kVocabSize) return -1;  // out-of-vocabulary
  switch (profile.kind) {
    case ListenerKind::Full:
      return token;
    case ListenerKind::HypernymOnly:
      return tax.is_hypernym(token) ? token : -1;
    case ListenerKind::LimitedVisual:
      return profile.blocks(tax.category_of(token)) ? -1 : token;
  }
  return -1;
}

std::string interpret_token(const std::string& token,
                            const ListenerProfile& profile,
                            const Taxonomy& tax) {
  TokenId heard = interpret_token(tax.find(token), profile, tax);
  return heard < 0 ? std::string(kUnkToken) : tax.name(heard);
}

int ground(const Utterance& utt, const Scene& scene,
           const ListenerProfile& profile, const Taxonomy& tax) {
  Scene perceived = perceive(scene, profile, tax);
  int score = 0;
  for (TokenId w : utt.tokens) {
    TokenId heard = interpret_token(w, profile, tax);
    if (heard < 0) continue;
    for (TokenId o : perceived.objects) {
      if (o == heard || tax.hypernym_token(o) == heard) ++score;
    }
  }
  return score;
}

Choice choose(const Utterance& utt, const ScenePair& pair,
              const ListenerProfile& profile, const Taxonomy& tax, Rng& rng) {
  int sa = ground(utt, pair.a, profile, tax);
  int sb = ground(utt, pair.b, profile, tax);
  if (sa > sb) return {0, false};
  if (sb > sa) return {1, false};
  return {rng.coin() ? 1 : 0, true};
}

}  // namespace prs
