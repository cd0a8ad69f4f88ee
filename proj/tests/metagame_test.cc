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

#include "metagame/metagame.h"

#include <random>

#include "gtest/gtest.h"
#include "metagame/equilibrium.h"
#include "oracles.h"
#include "test_util.h"

namespace metagame {
namespace {

constexpr double kExact = 1e-9;

TEST(ScenarioTest, TruthMustLieOnGridRange) {
  EXPECT_THROW(MetaGameScenario(OpposingInterestsFamily(),
                                {{{GridAxis{3, 5}}, {GridAxis{0, 5}}}}),
               InvalidSpec);
  EXPECT_THROW(MetaGameScenario(OpposingInterestsFamily(),
                                {{{GridAxis{0, 5}}, {}}}),
               InvalidSpec);
  EXPECT_THROW(MetaGameScenario(CournotScenario{1, 1, {1.5, 0.5}},
                                {GridAxis{0, 1}, GridAxis{0, 1}}),
               InvalidSpec);
  // The default grid stretches to cover costs above a.
  EXPECT_EQ(CournotMetaScenario(1, 1, 1.5, 0.5).grids(Player::kRow)[0].hi, 1.5);
}

TEST(ScenarioTest, GridInsideDeclarationSpace) {
  EXPECT_THROW(MetaGameScenario(OpposingInterestsFamily({0, 4}, {}),
                                {{{GridAxis{0, 5}}, {GridAxis{0, 5}}}}),
               InvalidSpec);
}

TEST(ScenarioTest, AnalyticModeNeedsUniqueCce) {
  EXPECT_THROW(MetaGameScenario(SingleCellFamily(BattleOfTheSexes(), Cell::kA,
                                                 Cell::kA),
                                {{{GridAxis{0, 5}}, {GridAxis{0, 5}}}}),
               InvalidSpec);
}

TEST(GridAxisTest, Values) {
  const auto v = GridAxis{0, 1, 5}.Values();
  EXPECT_EQ(v, (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ((GridAxis{2, 2, 1}.Values()), std::vector<double>{2});
}

TEST(MetaUtilityTest, OpposingInterestsGoldens) {
  const MetaGameScenario scn = OpposingInterestsScenario();
  auto u = MetaUtility(scn, scn.Truth());
  EXPECT_NEAR(u[0], 1.0 / 5, kExact);
  EXPECT_NEAR(u[1], 1.0 / 3, kExact);
  u = MetaUtility(scn, {{{1.0}, {1.0}}});
  EXPECT_NEAR(u[0], 1.0 / 4, kExact);
  EXPECT_NEAR(u[1], 1.0 / 2, kExact);
}

TEST(MetaUtilityTest, DominanceSolvableGoldens) {
  const MetaGameScenario scn = DominanceSolvableScenario();
  auto u = MetaUtility(scn, scn.Truth());
  EXPECT_NEAR(u[0], 2, kExact);
  EXPECT_NEAR(u[1], 3, kExact);
  u = MetaUtility(scn, {{{5.0}, {3.0}}});
  EXPECT_NEAR(u[0], 3, kExact);
  EXPECT_NEAR(u[1], 3, kExact);
  u = MetaUtility(scn, {{{1e4}, {3.0}}});
  EXPECT_NEAR(u[0], 69989.0 / 19998, kExact);
}

TEST(MetaUtilityTest, DegenerateDeclarationThrows) {
  const MetaGameScenario scn = OpposingInterestsScenario();
  // c = -1 ties the row player's first column.
  EXPECT_THROW(MetaUtility(scn, {{{-1.0}, {3.0}}}), NonUniqueCceError);
}

TEST(MetaUtilityTest, CournotGoldens) {
  const MetaGameScenario scn = CournotMetaScenario(1, 1, 0.5, 0.5);
  auto u = MetaUtility(scn, scn.Truth());
  EXPECT_NEAR(u[0], 1.0 / 36, kExact);
  u = MetaUtility(scn, {{{3.0 / 8}, {0.5}}});
  EXPECT_NEAR(u[0], 1.0 / 32, kExact);
  EXPECT_NEAR(u[1], 1.0 / 64, kExact);
  u = MetaUtility(scn, {{{0.4}, {0.4}}});
  EXPECT_NEAR(u[0], 1.0 / 50, kExact);
}

TEST(BestResponseTest, CournotUnilateral) {
  const MetaGameScenario scn = CournotMetaScenario(1, 1, 0.5, 0.5);
  const BestResponse br = MetaBestResponse(scn, Player::kRow, scn.Truth());
  ASSERT_EQ(br.declaration.size(), 1u);
  EXPECT_NEAR(br.declaration[0], 3.0 / 8, kExact);
  EXPECT_NEAR(br.utility, 1.0 / 32, kExact);
}

TEST(BestResponseTest, OpposingInterestsLowerBound) {
  const MetaGameScenario scn = OpposingInterestsScenario();
  const BestResponse br = MetaBestResponse(scn, Player::kRow, scn.Truth());
  EXPECT_NEAR(br.declaration[0], -0.9, kExact);
  // u1 = (10 - 2c) / (6 (c + 3)) at c = -0.9.
  EXPECT_NEAR(br.utility, (10 + 1.8) / (6 * 2.1), kExact);
}

TEST(CournotMetaEquilibriumTest, SymmetricHalfCost) {
  const auto r = CournotMetaEquilibrium(CournotMetaScenario(1, 1, 0.5, 0.5));
  EXPECT_NEAR(r.declarations[0][0], 0.4, kExact);
  EXPECT_NEAR(r.declarations[1][0], 0.4, kExact);
  ASSERT_TRUE(r.induced_cournot.has_value());
  EXPECT_NEAR(r.induced_cournot->q1, 0.2, kExact);
  EXPECT_NEAR(r.utilities[0], 1.0 / 50, kExact);
  EXPECT_LE(r.certificate, 1e-9);
}

TEST(CournotMetaEquilibriumTest, DriveOut) {
  const auto r = CournotMetaEquilibrium(CournotMetaScenario(1, 1, 0.3, 0.6));
  EXPECT_NEAR(r.declarations[0][0], 0.2, kExact);
  EXPECT_NEAR(r.declarations[1][0], 0.6, kExact);
  EXPECT_NEAR(r.utilities[0], 0.12, kExact);
  EXPECT_NEAR(r.utilities[1], 0.0, kExact);
}

TEST(CournotMetaEquilibriumTest, TruthfulOutsideDuopolyRegion) {
  for (auto [c1, c2] : {std::pair{0.0, 0.0}, std::pair{0.2, 0.8},
                        std::pair{1.0, 1.0}}) {
    const MetaGameScenario scn = CournotMetaScenario(1, 1, c1, c2);
    const auto r = CournotMetaEquilibrium(scn);
    EXPECT_EQ(r.declarations, scn.Truth()) << c1 << "," << c2;
  }
}

// Meta-equilibria are grid equilibria for the brute-force oracle, and total
// output rises relative to truthful play.
TEST(CournotMetaEquilibriumTest, ComparativeStaticsAndOracle) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> c(0, 1);
  int sampled = 0;
  while (sampled < 100) {
    const double c1 = c(rng), c2 = c(rng);
    const oracle::CournotEq truth = oracle::Cournot(1, 1, c1, c2);
    if (!(truth.q1 > 0 && truth.q2 > 0)) continue;
    ++sampled;
    const auto r = CournotMetaEquilibrium(CournotMetaScenario(1, 1, c1, c2));
    const double x1 = r.declarations[0][0], x2 = r.declarations[1][0];
    const oracle::CournotEq meta = oracle::Cournot(1, 1, x1, x2);
    EXPECT_GE(meta.q1 + meta.q2, truth.q1 + truth.q2 - 1e-9);
    const auto u_truth = oracle::CournotMetaUtilities(1, 1, {c1, c2}, {c1, c2});
    const auto u_meta = oracle::CournotMetaUtilities(1, 1, {c1, c2}, {x1, x2});
    EXPECT_NEAR(u_meta[0], r.utilities[0], 1e-12);
    if (meta.q1 > 0 && meta.q2 > 0) {
      // One firm may gain; never both.
      EXPECT_TRUE(u_meta[0] <= u_truth[0] + 1e-9 ||
                  u_meta[1] <= u_truth[1] + 1e-9);
    } else {
      const int producer = meta.q1 > 0 ? 0 : 1;
      EXPECT_GE(u_meta[producer], u_truth[producer] - 1e-9);
    }
    const auto grid = oracle::Linspace(0, 1, 200);
    for (int i = 0; i < 2; ++i) {
      auto f = [&](double x) {
        std::array<double, 2> d = {x1, x2};
        d[i] = x;
        return oracle::CournotMetaUtilities(1, 1, {c1, c2}, d)[i];
      };
      EXPECT_LE(oracle::GridMax(f, grid).second - u_meta[i], 1e-9);
    }
  }
}

TEST(CournotMetaEquilibriumTest, SymmetricCostsHurtBothFirms) {
  for (double c : {0.05, 0.2, 0.5, 0.7, 0.95}) {
    const auto r = CournotMetaEquilibrium(CournotMetaScenario(1, 1, c, c));
    const auto truth = oracle::CournotMetaUtilities(1, 1, {c, c}, {c, c});
    EXPECT_LE(r.utilities[0], truth[0] + 1e-12) << c;
    EXPECT_LE(r.utilities[1], truth[1] + 1e-12) << c;
  }
}

// With both firms still producing, the low-cost firm can end up better off.
TEST(CournotMetaEquilibriumTest, LowCostFirmCanGainWhileBothProduce) {
  const double c1 = 0.553, c2 = 0.384;
  const auto r = CournotMetaEquilibrium(CournotMetaScenario(1, 1, c1, c2));
  const double x1 = r.declarations[0][0], x2 = r.declarations[1][0];
  EXPECT_NEAR(x1, (24 * c1 - 6 * c2 - 3) / 15, 1e-12);
  EXPECT_NEAR(x2, (24 * c2 - 6 * c1 - 3) / 15, 1e-12);
  const oracle::CournotEq meta = oracle::Cournot(1, 1, x1, x2);
  EXPECT_GT(meta.q1, 0);
  EXPECT_GT(meta.q2, 0);
  const auto truth = oracle::CournotMetaUtilities(1, 1, {c1, c2}, {c1, c2});
  EXPECT_GT(r.utilities[1], truth[1] + 1e-3);
  EXPECT_LT(r.utilities[0], truth[0]);
}

TEST(OpposingInterestsMetaEquilibriumTest, RunningExample) {
  const auto r = OpposingInterestsMetaEquilibrium(OpposingInterestsScenario());
  EXPECT_NEAR(r.declarations[0][0], 3, kExact);
  EXPECT_NEAR(r.declarations[1][0], 1.0 / 3, kExact);
  EXPECT_NEAR(r.utilities[0], 1.0 / 5, kExact);
  EXPECT_NEAR(r.utilities[1], 1.0 / 3, kExact);
  EXPECT_LE(r.certificate, 1e-9);
}

TEST(OpposingInterestsMetaEquilibriumTest, UtilitiesEqualTruthfulNash) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 30; ++k) {
    const oracle::Game2 og = oracle::RandomOpposingInterests(rng);
    const ParamGame2x2 family =
        SingleCellFamily(ToGame(og), Cell::kA, Cell::kC);
    const auto truth = family.Truth();
    const MetaGameScenario scn(
        family, {{{GridAxis{truth[0][0] - 5, truth[0][0] + 5}},
                  {GridAxis{truth[1][0] - 5, truth[1][0] + 5}}}});
    const auto r = OpposingInterestsMetaEquilibrium(scn);
    const auto [p, q] = oracle::MixedNash(og);
    const auto u = oracle::Utilities(og, p, q);
    const auto at = MetaUtility(scn, r.declarations);
    EXPECT_NEAR(at[0], u[0], 1e-9);
    EXPECT_NEAR(at[1], u[1], 1e-9);
    EXPECT_LE(r.certificate, 1e-9);
  }
}

TEST(ManipulationTest, ClosedFormClasses) {
  EXPECT_FALSE(ManipulationFree(OpposingInterestsScenario()).manipulation_free);
  const MetaGameScenario mp(SingleCellFamily(MatchingPennies(), Cell::kA,
                                             Cell::kC),
                            {{{GridAxis{-4, 6}}, {GridAxis{-4, 6}}}});
  const ManipulationReport r = ManipulationFree(mp);
  EXPECT_TRUE(r.manipulation_free);
  EXPECT_EQ(r.method, "closed-form-opposing-interests");
  EXPECT_TRUE(ManipulationFree(CournotMetaScenario(1, 1, 0, 0)).manipulation_free);
  EXPECT_TRUE(ManipulationFree(CournotMetaScenario(1, 1, 0, 1)).manipulation_free);
  const ManipulationReport c = ManipulationFree(CournotMetaScenario(1, 1, 0.5, 0.5));
  EXPECT_FALSE(c.manipulation_free);
  EXPECT_GT(c.gain, 0);
  ASSERT_EQ(c.witness.size(), 1u);
}

TEST(ManipulationTest, GridMethodOnDominanceSolvable) {
  const ManipulationReport r = ManipulationFree(DominanceSolvableScenario());
  EXPECT_FALSE(r.manipulation_free);
  EXPECT_EQ(r.method, "grid");
  ASSERT_TRUE(r.player.has_value());
  EXPECT_EQ(*r.player, Player::kRow);
  EXPECT_GT(r.gain, 1.0);
}

TEST(DominantDeclarationTest, WideFamilyMakesTopDominant) {
  const ParamGame2x2 wide(DominanceSolvableGame(),
                          {{Cell::kA, {}}, {Cell::kB, {}}}, {{Cell::kA, {}}});
  const DominantDeclaration d =
      ConstructDominantDeclaration(wide, Player::kRow, 0);
  ASSERT_TRUE(d.ok) << d.binding_constraint;
  EXPECT_EQ(d.declaration, (Declaration{3, 5}));
  const MetaGameScenario scn(wide, {{{GridAxis{-10, 10}, GridAxis{-10, 10}},
                                     {GridAxis{-10, 10}}}});
  const auto u = MetaUtility(scn, {d.declaration, scn.Truth(Player::kColumn)});
  EXPECT_NEAR(u[0], 3, kExact);
  EXPECT_GT(u[0], MetaUtility(scn, scn.Truth())[0]);
}

TEST(DominantDeclarationTest, SingleCellFamilyReportsBindingConstraint) {
  const DominantDeclaration d =
      ConstructDominantDeclaration(DominanceSolvableFamily(), Player::kRow, 0);
  EXPECT_FALSE(d.ok);
  EXPECT_NE(d.binding_constraint.find("fixed"), std::string::npos);
}

TEST(DominantDeclarationTest, RespectsBounds) {
  const ParamGame2x2 narrow(DominanceSolvableGame(),
                            {{Cell::kA, {0, 1.5}}, {Cell::kB, {}}},
                            {{Cell::kA, {}}});
  // Cell A would have to exceed C = 2.
  const DominantDeclaration d =
      ConstructDominantDeclaration(narrow, Player::kRow, 0, 1.0);
  EXPECT_FALSE(d.ok);
  EXPECT_NE(d.binding_constraint.find("bounds"), std::string::npos);
}

TEST(IteratedBestResponseTest, DominanceSolvableEpsilonEquilibrium) {
  const MetaGameScenario scn = DominanceSolvableScenario();
  const auto r = IteratedBestResponse(scn);
  EXPECT_NEAR(r.utilities[0], 3, 0.01);
  EXPECT_NEAR(r.utilities[1], 4, 0.01);
  const Certificate cert =
      EpsilonCertificate(scn, {{{1e4}, {4 - 1e-3}}});
  EXPECT_NEAR(cert.utilities[0], 3, 0.01);
  EXPECT_NEAR(cert.utilities[1], 4, 0.01);
  EXPECT_TRUE(cert.Holds(0.05));
  EXPECT_GE(cert.epsilon, 0);
}

// Simulated meta-utilities (MW, T = 1e5, 10 seeds) match the analytic limit.
TEST(ModeConsistencyTest, SimulatedMatchesAnalytic) {
  AgentSpec mw;
  SimulationMode sim;
  sim.agents = {mw, mw};
  sim.horizon = 100000;
  sim.seeds.clear();
  for (uint64_t s = 1; s <= 10; ++s) sim.seeds.push_back(s);
  struct Case {
    MetaGameScenario scn;
    DeclarationProfile decls;
  };
  std::vector<Case> cases = {
      {OpposingInterestsScenario(), {{{2.0}, {3.0}}}},
      {OpposingInterestsScenario(), {{{1.0}, {1.0}}}},
      {DominanceSolvableScenario(), {{{1.0}, {3.0}}}},
      {DominanceSolvableScenario(), {{{5.0}, {3.0}}}},
      {CournotMetaScenario(1, 1, 0.5, 0.5), {{{0.4}, {0.4}}}},
  };
  for (Case& c : cases) {
    const auto analytic = MetaUtility(c.scn, c.decls);
    c.scn.set_simulation(sim);
    const auto simulated = MetaUtility(c.scn, c.decls);
    EXPECT_NEAR(simulated[0], analytic[0], 0.05);
    EXPECT_NEAR(simulated[1], analytic[1], 0.05);
  }
}

}  // namespace
}  // namespace metagame
