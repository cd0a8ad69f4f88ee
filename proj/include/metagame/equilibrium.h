// Copyright 2026 The Metagame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef METAGAME_EQUILIBRIUM_H_
#define METAGAME_EQUILIBRIUM_H_

#include <optional>
#include <vector>

#include "metagame/game.h"

namespace metagame {

inline constexpr double kDegeneracyTolerance = 1e-12;

// Fully mixed Nash equilibrium of a 2x2 game from the two indifference
// conditions. Returns nullopt when the solution leaves [0,1]^2. Throws
// DegenerateGameError when an indifference condition has a zero slope.
std::optional<MixedProfile> MixedNash2x2(const BimatrixGame& game);

struct ActionProfile {
  int row = 0;
  int col = 0;
  bool operator==(const ActionProfile&) const = default;
};

std::vector<ActionProfile> PureNash(const BimatrixGame& game);

struct EliminationStep {
  Player player;
  int eliminated;
  int dominator;
};

struct EliminationTrace {
  std::vector<EliminationStep> steps;
  std::vector<int> surviving_rows;
  std::vector<int> surviving_cols;

  bool Solved() const {
    return surviving_rows.size() == 1 && surviving_cols.size() == 1;
  }
};

enum class EliminationOrder { kRowFirst, kColumnFirst };

// Iterated elimination of actions strictly dominated by a pure action.
// Scans players in `order` and actions by increasing index, removes the first
// dominated action found and rescans.
EliminationTrace IteratedElimination(
    const BimatrixGame& game,
    EliminationOrder order = EliminationOrder::kRowFirst);

bool IsDominanceSolvable(const BimatrixGame& game);

struct StackelbergOutcome {
  int leader_action = 0;
  int follower_action = 0;
  double leader_value = 0;
  double follower_value = 0;
};

// Pure-commitment Stackelberg outcome. Follower ties favor the leader, leader
// ties go to the lowest index.
StackelbergOutcome Stackelberg(const BimatrixGame& game, Player leader);

// max over players i and fixed actions a of E[u_i(a, a_-i)] - E[u_i].
// Non-positive exactly when `dist` is a coarse correlated equilibrium.
double CceViolation(const BimatrixGame& game, const JointDistribution& dist);

// The unique CCE when it is known in closed form: the surviving point mass of
// a dominance-solvable game, or the mixed-equilibrium product of an
// opposing-interests 2x2 game. nullopt otherwise.
std::optional<JointDistribution> UniqueCce(const BimatrixGame& game);

}  // namespace metagame

#endif  // METAGAME_EQUILIBRIUM_H_
