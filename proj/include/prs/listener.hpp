#pragma once

#include <string>
#include <vector>

#include "prs/rng.hpp"
#include "prs/scenes.hpp"
#include "prs/speaker.hpp"
#include "prs/taxonomy.hpp"

namespace prs {

enum class ListenerKind { Full, HypernymOnly, LimitedVisual };

struct ListenerProfile {
  ListenerKind kind = ListenerKind::Full;
  // Category indices 0..7; only meaningful for LimitedVisual.
  std::vector<int> blocked_categories;

  static ListenerProfile full() { return {}; }
  static ListenerProfile hypernym_only() {
    return {ListenerKind::HypernymOnly, {}};
  }
  // Default limited-visual disparity blocks the animal category.
  static ListenerProfile limited_visual(std::vector<int> blocked);
  static ListenerProfile limited_visual_default();

  bool blocks(int category) const;
};

struct Choice {
  int picked = 0;
  bool tie = false;
};

// The scene as the listener detects it: LimitedVisual drops objects in
// blocked categories (the perceived view may be empty); other profiles see
// everything.
Scene perceive(const Scene& scene, const ListenerProfile& profile,
               const Taxonomy& tax);

// Interned form: -1 stands for [UNK]. HypernymOnly understands only hypernym
// tokens; LimitedVisual maps everything in a blocked category (the category
// token included) to [UNK]. Tokens outside the vocabulary are heard as [UNK].
TokenId interpret_token(TokenId token, const ListenerProfile& profile,
                        const Taxonomy& tax);
std::string interpret_token(const std::string& token,
                            const ListenerProfile& profile,
                            const Taxonomy& tax);

// Sum over content tokens of how many perceived objects each token matches:
// an object token matches itself, a hypernym token matches every perceived
// object of its category, [UNK] matches nothing.
int ground(const Utterance& utt, const Scene& scene,
           const ListenerProfile& profile, const Taxonomy& tax);

// Grounds the utterance in both scenes and picks the better one; equal
// scores fall to a fair coin with tie=true.
Choice choose(const Utterance& utt, const ScenePair& pair,
              const ListenerProfile& profile, const Taxonomy& tax, Rng& rng);

inline int reward(const Choice& choice, int target) {
  return choice.picked == target ? +1 : -1;
}

}  // namespace prs
