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

#ifndef METAGAME_METAGAME_H_
#define METAGAME_METAGAME_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "metagame/cournot.h"
#include "metagame/dynamics.h"
#include "metagame/game.h"

namespace metagame {

inline constexpr int kDefaultGridPoints = 200;

// Evenly spaced declaration values on [lo, hi].
struct GridAxis {
  double lo = 0;
  double hi = 1;
  int points = kDefaultGridPoints;
  std::vector<double> Values() const;
};

// Finite-horizon evaluation: agents play the declared game for `horizon`
// rounds per seed and utilities are averaged over seeds.
struct SimulationMode {
  AgentSpecs agents;
  int64_t horizon = 100000;
  std::vector<uint64_t> seeds = {1};
  int threads = 0;
  int cournot_grid_points = 201;
};

// The game between users who declare parameters to their agents. Without a
// simulation mode, meta-utilities are the true-type utilities of the declared
// game's unique coarse correlated equilibrium.
class MetaGameScenario {
 public:
  // One axis per free cell of each player.
  MetaGameScenario(ParamGame2x2 family,
                   std::array<std::vector<GridAxis>, 2> grids);
  MetaGameScenario(CournotScenario cournot, std::array<GridAxis, 2> grids);

  bool is_cournot() const {
    return std::holds_alternative<CournotScenario>(family_);
  }
  const ParamGame2x2& family() const { return std::get<ParamGame2x2>(family_); }
  const CournotScenario& cournot() const {
    return std::get<CournotScenario>(family_);
  }
  const std::vector<GridAxis>& grids(Player p) const {
    return grids_[Index(p)];
  }
  DeclarationProfile Truth() const;
  Declaration Truth(Player p) const { return Truth()[Index(p)]; }

  const std::optional<SimulationMode>& simulation() const {
    return simulation_;
  }
  void set_simulation(std::optional<SimulationMode> mode);
  bool analytic() const { return !simulation_; }

  // All grid declarations of `p` (the product of their axes).
  std::vector<Declaration> GridDeclarations(Player p) const;

 private:
  void Validate() const;

  std::variant<ParamGame2x2, CournotScenario> family_;
  std::array<std::vector<GridAxis>, 2> grids_;
  std::optional<SimulationMode> simulation_;
};

// Default scenarios for the bundled examples.
MetaGameScenario OpposingInterestsScenario();
MetaGameScenario DominanceSolvableScenario();
MetaGameScenario CournotMetaScenario(double a, double b, double c1, double c2);

// True-type utilities of both users. Analytic mode throws NonUniqueCceError
// when the declared 2x2 game has no closed-form unique CCE.
std::array<double, 2> MetaUtility(const MetaGameScenario& scn,
                                  const DeclarationProfile& decls);

struct BestResponse {
  Declaration declaration;
  double utility = 0;
  // Grid points skipped because the declared game had no unique CCE.
  int skipped = 0;
};

// Cournot: closed-form comparison of the interior, drive-out and
// zero-production candidates. Finite families: grid sweep over the player's
// axes followed by golden-section refinement of single-parameter spaces.
// Ties prefer the truthful declaration.
BestResponse MetaBestResponse(const MetaGameScenario& scn, Player player,
                              const DeclarationProfile& decls);

struct Certificate {
  // Largest utility gain from a unilateral grid deviation, floored at 0.
  double epsilon = 0;
  Player player = Player::kRow;
  Declaration witness;
  std::array<double, 2> utilities = {0, 0};
  int skipped = 0;

  bool Holds(double eps) const { return epsilon <= eps; }
};

// Max over players and grid deviations of the meta-utility gain.
Certificate EpsilonCertificate(const MetaGameScenario& scn,
                               const DeclarationProfile& decls);

struct MetaEquilibriumReport {
  DeclarationProfile declarations;
  std::optional<MixedProfile> induced_profile;
  std::optional<CournotOutcome> induced_cournot;
  std::array<double, 2> utilities = {0, 0};
  double certificate = 0;
  // truthful, unilateral-manipulation, meta-NE or eps-NE.
  std::string classification;
  std::string note;
};

MetaEquilibriumReport CournotMetaEquilibrium(const MetaGameScenario& scn);

// Closed-form meta-equilibrium of an opposing-interests family with a natural
// declaration space. Throws InvalidSpec otherwise.
MetaEquilibriumReport OpposingInterestsMetaEquilibrium(
    const MetaGameScenario& scn);

// Iterated best response from the truth; at most `max_iterations` rounds,
// stopping early on a repeated profile.
MetaEquilibriumReport IteratedBestResponse(const MetaGameScenario& scn,
                                           int max_iterations = 500);

struct ManipulationReport {
  bool manipulation_free = false;
  // closed-form-cournot, closed-form-opposing-interests or grid.
  std::string method;
  std::optional<Player> player;
  Declaration witness;
  double gain = 0;
};

// Whether truthful declarations form a meta-game equilibrium, with a
// profitable deviation as witness when they do not. Generic scenarios are
// certified on the grid with tolerance `epsilon`.
ManipulationReport ManipulationFree(const MetaGameScenario& scn,
                                    double epsilon = 1e-3);

struct DominantDeclaration {
  bool ok = false;
  Declaration declaration;
  std::string binding_constraint;
};

// Declaration under which `target` strictly dominates the player's other
// action by at least `margin`, keeping already-dominant truth unchanged.
DominantDeclaration ConstructDominantDeclaration(const ParamGame2x2& family,
                                                 Player player, int target,
                                                 double margin = 1.0);

}  // namespace metagame

#endif  // METAGAME_METAGAME_H_
