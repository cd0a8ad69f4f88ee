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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Run with a criterion number to run only that one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "metagame/agents.h"
#include "metagame/cournot.h"
#include "metagame/dynamics.h"
#include "metagame/equilibrium.h"
#include "metagame/experiments.h"
#include "metagame/game.h"
#include "metagame/metagame.h"
#include "oracles.h"
#include "test_util.h"

namespace metagame {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Expect(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
  void Near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os << what << " = " << got << ", want " << want << " +- " << tol;
    Expect(std::abs(got - want) <= tol, os.str());
  }
};

using Criterion = std::function<void(Outcome&)>;

void GoldenClosedForms(Outcome& out) {
  const auto truth = MixedNash2x2(OpposingInterestsGame());
  out.Expect(truth.has_value(), "truthful NE exists");
  if (!truth) return;
  out.Near(truth->p(), 2.0 / 3, 1e-9, "p");
  out.Near(truth->q(), 2.0 / 5, 1e-9, "q");
  const auto u = ExpectedUtilities2x2(OpposingInterestsGame(), *truth);
  out.Near(u[0], 1.0 / 5, 1e-9, "u1");
  out.Near(u[1], 1.0 / 3, 1e-9, "u2");
  const MetaGameScenario scn = OpposingInterestsScenario();
  struct Case {
    double c, d, u1, u2;
  } cases[] = {{1, 3, 1.0 / 3, 1.0 / 3},
               {2, 1, 1.0 / 5, 2.0 / 5},
               {1, 1, 1.0 / 4, 1.0 / 2},
               {3, 1.0 / 3, 1.0 / 5, 1.0 / 3}};
  for (const Case& k : cases) {
    const auto ne = MixedNash2x2(OpposingInterestsGame(k.c, k.d));
    out.Expect(ne.has_value(), "declared NE exists");
    if (!ne) continue;
    std::ostringstream tag;
    tag << "(c,d)=(" << k.c << "," << k.d << ")";
    out.Near(ne->p(), (k.d + 1) / (k.d + 3), 1e-9, tag.str() + " p");
    out.Near(ne->q(), 2 / (k.c + 3), 1e-9, tag.str() + " q");
    const auto mu = MetaUtility(scn, {{{k.c}, {k.d}}});
    out.Near(mu[0], k.u1, 1e-9, tag.str() + " u1");
    out.Near(mu[1], k.u2, 1e-9, tag.str() + " u2");
  }
  out.detail << "truthful NE (" << truth->p() << ", " << truth->q()
             << "), utilities (" << u[0] << ", " << u[1] << ")";
}

void CournotGoldens(Outcome& out) {
  const MetaGameScenario scn = CournotMetaScenario(1, 1, 0.5, 0.5);
  const CournotOutcome t = CournotNash(scn.cournot(), {0.5, 0.5});
  out.Near(t.q1, 1.0 / 6, 1e-9, "q1");
  out.Near(t.q2, 1.0 / 6, 1e-9, "q2");
  out.Near(t.price, 2.0 / 3, 1e-9, "price");
  out.Near(t.u1, 1.0 / 36, 1e-9, "u1");
  out.Near(t.u2, 1.0 / 36, 1e-9, "u2");
  const BestResponse br = MetaBestResponse(scn, Player::kRow, scn.Truth());
  out.Near(br.declaration[0], 3.0 / 8, 1e-9, "best response x1");
  out.Near(br.utility, 1.0 / 32, 1e-9, "best response u1");
  const MetaEquilibriumReport eq = CournotMetaEquilibrium(scn);
  out.Near(eq.declarations[0][0], 0.4, 1e-9, "meta-NE x1");
  out.Near(eq.declarations[1][0], 0.4, 1e-9, "meta-NE x2");
  out.Expect(eq.induced_cournot.has_value(), "induced outcome");
  if (eq.induced_cournot) {
    out.Near(eq.induced_cournot->q1, 0.2, 1e-9, "meta-NE q1");
    out.Near(eq.induced_cournot->q2, 0.2, 1e-9, "meta-NE q2");
  }
  out.Near(eq.utilities[0], 1.0 / 50, 1e-9, "meta-NE u1");
  out.Near(eq.utilities[1], 1.0 / 50, 1e-9, "meta-NE u2");
  out.detail << "truth q=" << t.q1 << " u=" << t.u1 << "; BR x1=" << br.declaration[0]
             << " u1=" << br.utility << "; meta-NE u=" << eq.utilities[0];
}

std::vector<uint64_t> Seeds(int n) {
  std::vector<uint64_t> s;
  for (int k = 1; k <= n; ++k) s.push_back(k);
  return s;
}

void MwReproduction(Outcome& out) {
  const BimatrixGame g = OpposingInterestsGame();
  AgentSpec mw;
  mw.eta = 0.01;
  DynamicsOptions opts;
  opts.log = LogPolicy::kNever;
  opts.record_policies = false;
  const auto traces = RunEnsemble(g, {mw, mw}, 50000, Seeds(20), opts);
  // Equilibrium cells rounded to three places, laid out by the margins
  // p = 0.667 (top) and q = 0.4 (left).
  const double ref[2][2] = {{0.267, 0.400}, {0.133, 0.200}};
  int within = 0;
  double worst_regret = 0;
  for (const auto& t : traces) {
    bool ok = true;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        ok = ok && std::abs(t.FinalDistribution()(r, c) - ref[r][c]) <= 0.02;
      }
    within += ok;
    for (int i = 0; i < 2; ++i) {
      worst_regret = std::max(worst_regret, t.Final().regret[i] / t.Final().t);
    }
  }
  out.Expect(within >= 18, "seeds within 0.02");
  out.Expect(worst_regret <= 0.05, "regret/T <= 0.05");
  out.detail << within << "/20 seeds within 0.02, max regret/T "
             << worst_regret;
}

void MapeScalingCriterion(Outcome& out) {
  const BimatrixGame g = OpposingInterestsGame();
  AgentSpec mw;
  const auto ne = JointDistribution::Product(*MixedNash2x2(g));
  const auto rows = MapeScaling(g, {mw, mw}, {10000, 20000, 50000, 100000},
                                Seeds(20), ne);
  out.Expect(ScalingPasses(rows), "monotone and below 4/sqrt(T)");
  for (const ScalingRow& r : rows) {
    out.detail << "T=" << r.horizon << ":" << r.mean_mape << "<=" << r.bound
               << " ";
  }
}

void DominanceSolvableMetaGame(Outcome& out) {
  const ParamGame2x2 wide(DominanceSolvableGame(),
                          {{Cell::kA, {}}, {Cell::kB, {}}}, {{Cell::kA, {}}});
  const DominantDeclaration d =
      ConstructDominantDeclaration(wide, Player::kRow, 0);
  out.Expect(d.ok, "dominant declaration constructed: " + d.binding_constraint);
  if (!d.ok) return;
  const MetaGameScenario wide_scn(
      wide, {{{GridAxis{-10, 10}, GridAxis{-10, 10}}, {GridAxis{-10, 10}}}});
  const auto manipulated =
      MetaUtility(wide_scn, {d.declaration, wide_scn.Truth(Player::kColumn)});
  const auto truthful = MetaUtility(wide_scn, wide_scn.Truth());
  out.Near(manipulated[0], 3, 1e-9, "manipulated row utility");
  out.Near(truthful[0], 2, 1e-9, "truthful row utility");
  out.Expect(manipulated[0] > truthful[0], "manipulation gains");

  const MetaGameScenario scn = DominanceSolvableScenario();
  const Certificate cert = EpsilonCertificate(scn, {{{1e4}, {4 - 1e-3}}});
  out.Near(cert.utilities[0], 3, 0.01, "eps-equilibrium u1");
  out.Near(cert.utilities[1], 4, 0.01, "eps-equilibrium u2");
  out.Expect(cert.Holds(0.05), "grid certificate <= 0.05");
  out.detail << "declaration (" << d.declaration[0] << ", " << d.declaration[1]
             << ") gives u1=" << manipulated[0] << " > " << truthful[0]
             << "; eps-eq utilities (" << cert.utilities[0] << ", "
             << cert.utilities[1] << "), certificate " << cert.epsilon;
}

void Oscillation(Outcome& out) {
  const auto d1 = JointDistribution::PointMass(2, 2, 0, 0);
  const auto d2 = JointDistribution::PointMass(2, 2, 1, 1);
  const OscillationReport rep =
      RunOscillation(BattleOfTheSexes(), d1, d2, 0.1, 3);
  out.Expect(rep.alpha == 100, "alpha = 100");
  out.Expect(rep.phases.size() == 3, "three phases");
  for (const PhaseReport& p : rep.phases) {
    std::ostringstream tag;
    tag << "phase " << p.phase;
    out.Expect(p.active == (p.phase % 2 == 1 ? 1 : 2), tag.str() + " target");
    out.Expect(p.distance_active < 0.1, tag.str() + " distance");
    out.Expect(p.regret_per_round[0] <= 0.1 && p.regret_per_round[1] <= 0.1,
               tag.str() + " regret");
    out.detail << tag.str() << " L1=" << p.distance_active << " ";
  }
  out.Expect(!rep.self_convergence.pass, "oscillating trace not self-convergent");
  out.Expect(rep.single_schedule_self_convergence.pass,
             "single schedule self-convergent");
  out.detail << "self-convergence " << rep.self_convergence.value
             << ", single " << rep.single_schedule_self_convergence.value;
}

void CournotPropertySuite(Outcome& out) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> c(0, 1.5);
  int counts[4] = {0, 0, 0, 0};
  int disagreements = 0, quantity = 0, duopoly_utility = 0, monopoly_utility = 0,
      not_equilibrium = 0, duopolies = 0;
  while (counts[0] + counts[1] + counts[2] + counts[3] < 800) {
    const double c1 = c(rng), c2 = c(rng);
    const oracle::CournotEq t = oracle::Cournot(1, 1, c1, c2);
    const int region = t.q1 > 0 ? (t.q2 > 0 ? 0 : 1) : (t.q2 > 0 ? 2 : 3);
    if (counts[region] >= 200) continue;
    ++counts[region];
    const MetaGameScenario scn = CournotMetaScenario(1, 1, c1, c2);
    const bool free = ManipulationFree(scn, 1e-3).manipulation_free;
    const double gain = oracle::CournotTruthfulGridGain(1, 1, c1, c2, 200);
    if (free ? gain > 1e-3 : gain <= 1e-12) ++disagreements;
    if (region != 0) continue;
    const MetaEquilibriumReport eq = CournotMetaEquilibrium(scn);
    const double x1 = eq.declarations[0][0], x2 = eq.declarations[1][0];
    const oracle::CournotEq m = oracle::Cournot(1, 1, x1, x2);
    const auto ut = oracle::CournotMetaUtilities(1, 1, {c1, c2}, {c1, c2});
    const auto um = oracle::CournotMetaUtilities(1, 1, {c1, c2}, {x1, x2});
    quantity += m.q1 + m.q2 < t.q1 + t.q2 - 1e-9;
    if (m.q1 > 0 && m.q2 > 0) {
      ++duopolies;
      duopoly_utility += um[0] > ut[0] + 1e-9 || um[1] > ut[1] + 1e-9;
    } else {
      const int producer = m.q1 > 0 ? 0 : 1;
      monopoly_utility += um[producer] < ut[producer] - 1e-9;
    }
    const auto grid = oracle::Linspace(0, 1, 200);
    for (int i = 0; i < 2; ++i) {
      auto f = [&](double x) {
        std::array<double, 2> dd = {x1, x2};
        dd[i] = x;
        return oracle::CournotMetaUtilities(1, 1, {c1, c2}, dd)[i];
      };
      if (oracle::GridMax(f, grid).second - um[i] > 1e-3) {
        ++not_equilibrium;
        break;
      }
    }
  }
  out.Expect(disagreements == 0, "manipulation-free classification");
  out.Expect(not_equilibrium == 0, "meta-NE is a grid equilibrium");
  out.Expect(quantity == 0, "total quantity rises");
  out.Expect(monopoly_utility == 0, "lone producer gains");
  out.Expect(duopoly_utility == 0, "both producing: no firm gains");
  out.detail << "800 instances (200 per region): " << disagreements
             << " classification disagreements, " << not_equilibrium
             << " meta-NE not grid equilibria, " << quantity
             << " quantity violations, " << monopoly_utility
             << " lone-producer violations, " << duopoly_utility << "/"
             << duopolies << " both-producing cases where a firm gains";
}

// Opposing-interests game whose payoff ratios satisfy the manipulation-free
// equalities: the column matrix is rebuilt from the row player's ratios.
oracle::Game2 RandomManipulationFree(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3, 3), s(0.5, 4);
  oracle::Game2 g = oracle::RandomOpposingInterests(rng);
  const double A1 = g.u1[0][0], B1 = g.u1[0][1], C1 = g.u1[1][0],
               D1 = g.u1[1][1];
  const double S1 = A1 - B1 + D1 - C1;
  const double x = (D1 - C1) / S1, y = (D1 - B1) / S1;
  const double S2 = (A1 - C1 > 0 ? -1 : 1) * s(rng);
  const double D2 = u(rng);
  const double C2 = D2 - x * S2, B2 = D2 - y * S2;
  const double A2 = S2 + B2 - D2 + C2;
  g.u2 = {{{A2, B2}, {C2, D2}}};
  return g;
}

void OpposingInterestsPropertySuite(Outcome& out) {
  std::mt19937_64 rng(4242);
  int utility_failures = 0, disagreements = 0, checked = 0;
  auto run = [&](const oracle::Game2& og, bool expect_free) {
    const BimatrixGame g = ToGame(og);
    if (!IsOpposingInterests(g)) {
      out.Expect(false, "generator produced a non-opposing-interests game");
      return;
    }
    const ParamGame2x2 family = SingleCellFamily(g, Cell::kA, Cell::kC);
    const double a = og.u1[0][0], cc = og.u2[1][0];
    const MetaGameScenario scn(
        family, {{{GridAxis{a - 5, a + 5}}, {GridAxis{cc - 5, cc + 5}}}});
    const MetaEquilibriumReport eq = OpposingInterestsMetaEquilibrium(scn);
    const auto [p, q] = oracle::MixedNash(og);
    const auto truthful = oracle::Utilities(og, p, q);
    const auto at = MetaUtility(scn, eq.declarations);
    if (std::abs(at[0] - truthful[0]) > 1e-9 ||
        std::abs(at[1] - truthful[1]) > 1e-9) {
      ++utility_failures;
    }
    const bool free = ManipulationFree(scn, 1e-3).manipulation_free;
    const double gain = oracle::TwoByTwoTruthfulGridGain(
        og, {0, 2},
        {oracle::Linspace(a - 5, a + 5, 200),
         oracle::Linspace(cc - 5, cc + 5, 200)});
    if (free ? gain > 1e-3 : gain <= 1e-12) ++disagreements;
    if (free != expect_free) ++disagreements;
    ++checked;
  };
  for (int k = 0; k < 100; ++k) run(oracle::RandomOpposingInterests(rng), false);
  for (int k = 0; k < 20; ++k) run(RandomManipulationFree(rng), true);
  run(ToOracle(MatchingPennies()), true);
  run(ToOracle(OpposingInterestsGame()), false);
  out.Expect(utility_failures == 0, "meta-equilibrium utilities");
  out.Expect(disagreements == 0, "classification agrees with grid oracle");
  out.detail << checked << " games (100 random, 20 constructed free, matching "
             << "pennies, running example): " << utility_failures
             << " utility mismatches, " << disagreements
             << " classification disagreements";
}

void UniqueCceProperty(Outcome& out) {
  std::mt19937_64 rng(99);
  std::gamma_distribution<double> gam(0.5);
  int games = 0, failures = 0;
  for (int k = 0; k < 50; ++k) {
    const oracle::Game2 og = oracle::RandomDominanceSolvable(rng);
    const BimatrixGame g = ToGame(og);
    const EliminationTrace t = IteratedElimination(g);
    if (!t.Solved()) {
      ++failures;
      continue;
    }
    ++games;
    const auto pm = JointDistribution::PointMass(2, 2, t.surviving_rows[0],
                                                 t.surviving_cols[0]);
    if (CceViolation(g, pm) > 0) ++failures;
    int sampled = 0;
    while (sampled < 200) {
      Matrix m(2, 2);
      double s = 0;
      for (int i = 0; i < 4; ++i) s += m(i / 2, i % 2) = gam(rng);
      for (int i = 0; i < 4; ++i) m(i / 2, i % 2) /= s;
      const JointDistribution d(m);
      if (d.TotalVariation(pm) < 0.1) continue;
      ++sampled;
      if (!(CceViolation(g, d) > 0)) ++failures;
    }
  }
  out.Expect(failures == 0, "violation signs");
  out.detail << games << " games x 200 distributions, " << failures
             << " failures";
}

void CournotDynamicsCriterion(Outcome& out) {
  const CournotScenario scn{1, 1, {0.5, 0.5}};
  AgentSpec ogd, mw;
  ogd.algo = Algorithm::kOnlineGradientDescent;
  for (const auto& [name, spec] :
       {std::pair<std::string, AgentSpec>{"ogd", ogd}, {"mw", mw}}) {
    for (const std::array<double, 2>& x :
         {std::array<double, 2>{0.5, 0.5}, std::array<double, 2>{0.4, 0.4}}) {
      const CournotOutcome ne = CournotNash(scn, x);
      const CournotTrace t = RunCournotDynamics(scn, x, {spec, spec}, 100000, 1);
      double worst = 0;
      worst = std::max(worst, std::abs(t.mean_quantity[0] - ne.q1) / ne.q1);
      worst = std::max(worst, std::abs(t.mean_quantity[1] - ne.q2) / ne.q2);
      std::ostringstream tag;
      tag << name << " at x=(" << x[0] << "," << x[1] << ")";
      out.Expect(worst <= 0.05, tag.str());
      out.detail << tag.str() << " rel.err " << worst << "; ";
    }
  }
}

}  // namespace
}  // namespace metagame

int main(int argc, char** argv) {
  using metagame::Outcome;
  struct Entry {
    const char* name;
    metagame::Criterion run;
    double budget_seconds;
  };
  const std::vector<Entry> criteria = {
      {"golden closed forms", metagame::GoldenClosedForms, 1},
      {"Cournot goldens", metagame::CournotGoldens, 1},
      {"MW simulation reproduction", metagame::MwReproduction, 30},
      {"MAPE scaling", metagame::MapeScalingCriterion, 180},
      {"dominance-solvable meta-game", metagame::DominanceSolvableMetaGame, 60},
      {"oscillating schedules", metagame::Oscillation, 120},
      {"Cournot property suite", metagame::CournotPropertySuite, 120},
      {"opposing-interests property suite",
       metagame::OpposingInterestsPropertySuite, 120},
      {"unique CCE of dominance-solvable games", metagame::UniqueCceProperty,
       60},
      {"Cournot learning dynamics", metagame::CournotDynamicsCriterion, 120},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    if (only && static_cast<int>(k + 1) != only) continue;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].run(out);
    } catch (const std::exception& e) {
      out.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (secs > criteria[k].budget_seconds) {
      out.Expect(false, "over time budget");
    }
    std::printf("%s %2zu %s (%.2fs): %s\n", out.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].name, secs, out.detail.str().c_str());
    failed += !out.pass;
  }
  return failed == 0 ? 0 : 1;
}
