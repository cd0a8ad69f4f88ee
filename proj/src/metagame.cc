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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "metagame/equilibrium.h"
#include "metagame/parallel.h"

namespace metagame {

std::vector<double> GridAxis::Values() const {
  if (points < 1) throw InvalidSpec("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> out(points);
  for (int k = 0; k < points; ++k) {
    out[k] = lo + (hi - lo) * k / (points - 1);
  }
  out.back() = hi;
  return out;
}

MetaGameScenario::MetaGameScenario(ParamGame2x2 family,
                                   std::array<std::vector<GridAxis>, 2> grids)
    : family_(std::move(family)), grids_(std::move(grids)) {
  Validate();
}

MetaGameScenario::MetaGameScenario(CournotScenario cournot,
                                   std::array<GridAxis, 2> grids)
    : family_(cournot), grids_{{{grids[0]}, {grids[1]}}} {
  cournot.Validate();
  Validate();
}

DeclarationProfile MetaGameScenario::Truth() const {
  if (is_cournot()) return {{{cournot().costs[0]}, {cournot().costs[1]}}};
  return family().Truth();
}

void MetaGameScenario::set_simulation(std::optional<SimulationMode> mode) {
  if (mode) {
    if (mode->horizon < 1) throw InvalidSpec("simulation horizon must be >= 1");
    if (mode->seeds.empty()) throw InvalidSpec("simulation needs seeds");
    for (const auto& spec : mode->agents) spec.Validate();
  }
  simulation_ = std::move(mode);
  Validate();
}

void MetaGameScenario::Validate() const {
  const DeclarationProfile truth = Truth();
  for (Player p : {Player::kRow, Player::kColumn}) {
    const auto& axes = grids_[Index(p)];
    if (axes.size() != truth[Index(p)].size()) {
      throw InvalidSpec("need one grid axis per declared value of the " +
                        PlayerName(p) + " player");
    }
    for (size_t k = 0; k < axes.size(); ++k) {
      if (axes[k].points < 1 || !(axes[k].lo <= axes[k].hi)) {
        throw InvalidSpec("invalid grid axis");
      }
      if (!is_cournot()) {
        const Interval& b = family().free_cells(p)[k].bounds;
        if (axes[k].lo < b.lo || axes[k].hi > b.hi) {
          throw InvalidSpec("grid axis leaves the declaration space");
        }
      }
      const double t = truth[Index(p)][k];
      if (t < axes[k].lo || t > axes[k].hi) {
        throw InvalidSpec("true type of the " + PlayerName(p) +
                          " player lies outside their declaration grid");
      }
    }
  }
  if (!is_cournot() && analytic() && !UniqueCce(family().base())) {
    throw InvalidSpec("analytic meta-utilities need a family whose games have "
                      "a unique CCE (dominance-solvable or opposing-interests)");
  }
}

std::vector<Declaration> MetaGameScenario::GridDeclarations(Player p) const {
  std::vector<Declaration> out = {{}};
  for (const GridAxis& axis : grids_[Index(p)]) {
    std::vector<Declaration> next;
    for (const Declaration& prefix : out) {
      for (double v : axis.Values()) {
        Declaration d = prefix;
        d.push_back(v);
        next.push_back(std::move(d));
      }
    }
    out = std::move(next);
  }
  return out;
}

MetaGameScenario OpposingInterestsScenario() {
  return MetaGameScenario(OpposingInterestsFamily(),
                          {{{{-0.9, 10.0}}, {{-0.9, 10.0}}}});
}

MetaGameScenario DominanceSolvableScenario() {
  return MetaGameScenario(DominanceSolvableFamily(),
                          {{{{-10.0, 1e4}}, {{-10.0, 10.0}}}});
}

MetaGameScenario CournotMetaScenario(double a, double b, double c1,
                                     double c2) {
  CournotScenario scn{a, b, {c1, c2}};
  // Costs above a keep the firm out of the market; the grid still has to
  // contain the truth.
  return MetaGameScenario(
      scn, {{{0.0, std::max(a, c1)}, {0.0, std::max(a, c2)}}});
}

namespace {

std::array<double, 2> SimulatedUtility(const MetaGameScenario& scn,
                                       const DeclarationProfile& decls) {
  const SimulationMode& sim = *scn.simulation();
  std::vector<std::array<double, 2>> per_seed(sim.seeds.size());
  if (scn.is_cournot()) {
    const std::array<double, 2> x = {decls[0].at(0), decls[1].at(0)};
    CournotDynamicsOptions opts;
    opts.grid_points = sim.cournot_grid_points;
    opts.checkpoints.geometric_points = 2;
    opts.checkpoints.linear_points = 1;
    ParallelFor(static_cast<int>(sim.seeds.size()), [&](int i) {
      CournotTrace tr = RunCournotDynamics(scn.cournot(), x, sim.agents,
                                           sim.horizon, sim.seeds[i], opts);
      per_seed[i] = tr.MeanProfit(scn.cournot().costs);
    }, sim.threads);
  } else {
    const BimatrixGame declared = scn.family().Instantiate(decls);
    DynamicsOptions opts;
    opts.geometric_points = 2;
    opts.linear_points = 1;
    opts.log = LogPolicy::kNever;
    opts.record_policies = false;
    ParallelFor(static_cast<int>(sim.seeds.size()), [&](int i) {
      DynamicsTrace tr =
          RunDynamics(declared, sim.agents, sim.horizon, sim.seeds[i], opts);
      per_seed[i] =
          JointExpectedUtilities(scn.family().base(), tr.FinalDistribution());
    }, sim.threads);
  }
  std::array<double, 2> out = {0, 0};
  for (const auto& u : per_seed) {
    out[0] += u[0] / per_seed.size();
    out[1] += u[1] / per_seed.size();
  }
  return out;
}

}  // namespace

std::array<double, 2> MetaUtility(const MetaGameScenario& scn,
                                  const DeclarationProfile& decls) {
  if (!scn.analytic()) return SimulatedUtility(scn, decls);
  if (scn.is_cournot()) {
    return CournotUtilitiesAt(scn.cournot(), {decls[0].at(0), decls[1].at(0)});
  }
  const BimatrixGame declared = scn.family().Instantiate(decls);
  std::optional<JointDistribution> cce;
  try {
    cce = UniqueCce(declared);
  } catch (const DegenerateGameError&) {
  }
  if (!cce) {
    throw NonUniqueCceError("declared game has no closed-form unique CCE");
  }
  return JointExpectedUtilities(scn.family().base(), *cce);
}

namespace {

// Meta-utility of `player` with their declaration replaced; nullopt when the
// declared game is not analyzable.
std::optional<double> UtilityWith(const MetaGameScenario& scn, Player player,
                                  DeclarationProfile decls,
                                  const Declaration& own) {
  decls[Index(player)] = own;
  try {
    return MetaUtility(scn, decls)[Index(player)];
  } catch (const NonUniqueCceError&) {
    return std::nullopt;
  }
}

BestResponse CournotBestResponse(const MetaGameScenario& scn, Player player,
                                 const DeclarationProfile& decls) {
  const CournotScenario& c = scn.cournot();
  const int i = Index(player);
  const double a = c.a;
  const double ci = c.costs[i];
  const double xj = std::clamp(decls[1 - i].at(0), 0.0, a);
  std::vector<double> candidates = {ci};
  // Both produce: x_i in [max(0, 2 x_j - a), (a + x_j) / 2], where the
  // utility is a concave quadratic with stationary point (6 c_i - a - x_j)/4.
  const double lo = std::max(0.0, 2 * xj - a);
  const double hi = std::min(a, (a + xj) / 2);
  if (lo <= hi) {
    candidates.push_back(std::clamp((6 * ci - a - xj) / 4, lo, hi));
    candidates.push_back(lo);
    candidates.push_back(hi);
  }
  // Opponent driven out: monopoly profit peaks at the true cost.
  if (2 * xj - a >= 0) {
    candidates.push_back(std::min(std::min(ci, a), 2 * xj - a));
    candidates.push_back(0.0);
  }
  candidates.push_back(a);
  BestResponse best;
  best.utility = -kInfinity;
  for (double x : candidates) {
    x = std::clamp(x, 0.0, a);
    DeclarationProfile d = decls;
    d[i] = {x};
    const double u = CournotUtilitiesAt(c, {d[0][0], d[1][0]})[i];
    if (u > best.utility) {
      best.utility = u;
      best.declaration = {x};
    }
  }
  return best;
}

// Maximizes f on [lo, hi] by golden-section search.
template <typename F>
std::pair<double, double> GoldenSection(F f, double lo, double hi,
                                        int iterations = 80) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < iterations; ++k) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

BestResponse MetaBestResponse(const MetaGameScenario& scn, Player player,
                              const DeclarationProfile& decls) {
  if (scn.is_cournot() && scn.analytic()) {
    return CournotBestResponse(scn, player, decls);
  }
  BestResponse best;
  best.utility = -kInfinity;
  auto consider = [&](const Declaration& d) {
    std::optional<double> u = UtilityWith(scn, player, decls, d);
    if (!u) {
      ++best.skipped;
      return;
    }
    if (*u > best.utility) {
      best.utility = *u;
      best.declaration = d;
    }
  };
  consider(scn.Truth(player));
  const std::vector<Declaration> grid = scn.GridDeclarations(player);
  for (const Declaration& d : grid) consider(d);
  if (best.declaration.empty()) {
    throw NonUniqueCceError("no grid declaration yields an analyzable game");
  }
  const auto& axes = scn.grids(player);
  if (scn.analytic() && axes.size() == 1 && axes[0].points > 2) {
    // Refine between the grid neighbours of the best point.
    const std::vector<double> values = axes[0].Values();
    const double x = best.declaration[0];
    auto it = std::lower_bound(values.begin(), values.end(), x);
    const size_t k = std::min<size_t>(it - values.begin(), values.size() - 1);
    const double lo = values[k == 0 ? 0 : k - 1];
    const double hi = values[std::min(k + 1, values.size() - 1)];
    auto f = [&](double v) {
      return UtilityWith(scn, player, decls, {v}).value_or(-kInfinity);
    };
    auto [xr, fr] = GoldenSection(f, lo, hi);
    if (fr > best.utility + 1e-15) {
      best.utility = fr;
      best.declaration = {xr};
    }
  }
  return best;
}

Certificate EpsilonCertificate(const MetaGameScenario& scn,
                               const DeclarationProfile& decls) {
  Certificate cert;
  cert.utilities = MetaUtility(scn, decls);
  // Keeping the current declaration is always available.
  cert.epsilon = 0;
  cert.player = Player::kRow;
  cert.witness = decls[0];
  for (Player p : {Player::kRow, Player::kColumn}) {
    for (const Declaration& d : scn.GridDeclarations(p)) {
      std::optional<double> u = UtilityWith(scn, p, decls, d);
      if (!u) {
        ++cert.skipped;
        continue;
      }
      const double gain = *u - cert.utilities[Index(p)];
      if (gain > cert.epsilon) {
        cert.epsilon = gain;
        cert.player = p;
        cert.witness = d;
      }
    }
  }
  return cert;
}

namespace {

double MaxAnalyticGain(const MetaGameScenario& scn,
                       const DeclarationProfile& decls,
                       const std::array<double, 2>& u) {
  double gain = -kInfinity;
  for (Player p : {Player::kRow, Player::kColumn}) {
    gain = std::max(gain,
                    MetaBestResponse(scn, p, decls).utility - u[Index(p)]);
  }
  return gain;
}

std::string Classify(const MetaGameScenario& scn,
                     const DeclarationProfile& decls, double certificate) {
  const DeclarationProfile truth = scn.Truth();
  const bool row_true = decls[0] == truth[0];
  const bool col_true = decls[1] == truth[1];
  if (certificate <= 1e-9) {
    return row_true && col_true ? "truthful" : "meta-NE";
  }
  if (row_true != col_true) return "unilateral-manipulation";
  return "eps-NE";
}

}  // namespace

MetaEquilibriumReport CournotMetaEquilibrium(const MetaGameScenario& scn) {
  if (!scn.is_cournot()) throw InvalidSpec("not a Cournot scenario");
  const CournotScenario& c = scn.cournot();
  const double a = c.a;
  const double c1 = c.costs[0], c2 = c.costs[1];
  MetaEquilibriumReport report;
  std::array<double, 2> x = {c1, c2};
  if (ClassifyCournot(a, c.costs) != CournotRegion::kA) {
    report.note = "truthful equilibrium has a non-producing firm";
  } else if (c2 >= a / 2 && c2 >= (2 * c1 + a) / 3) {
    x = {2 * c2 - a, c2};
    report.note = "firm 1 under-declares and produces alone";
  } else if (c1 >= a / 2 && c1 >= (2 * c2 + a) / 3) {
    x = {c1, 2 * c1 - a};
    report.note = "firm 2 under-declares and produces alone";
  } else {
    const double s1 = (8 * c1 - 2 * c2 - a) / 5;
    const double s2 = (8 * c2 - 2 * c1 - a) / 5;
    if (s1 >= 0 && s2 >= 0) {
      x = {s1, s2};
    } else if (s2 < 0 && s1 >= 0) {
      x = {std::max(0.0, (6 * c1 - a) / 4), 0.0};
    } else if (s1 < 0 && s2 >= 0) {
      x = {0.0, std::max(0.0, (6 * c2 - a) / 4)};
    } else {
      x = {0.0, 0.0};
    }
    report.note = "both firms produce";
  }
  report.declarations = {{{x[0]}, {x[1]}}};
  report.induced_cournot = CournotNash(c, x);
  report.utilities = CournotUtilitiesAt(c, x);
  report.certificate = MaxAnalyticGain(scn, report.declarations,
                                       report.utilities);
  report.classification = Classify(scn, report.declarations,
                                   report.certificate);
  return report;
}

namespace {

// Value of free cell `k` of `player` that makes `player` indifferent when the
// opponent plays their first action with probability `s`, other cells true.
std::optional<double> SolveIndifference(const ParamGame2x2& family,
                                        Player player, size_t k, double s) {
  const Matrix& u = family.base().Payoffs(player);
  // Indifference: s * first + (1 - s) * second = 0 where, for the row player,
  // first = A - C and second = B - D; for the column player first = A - B and
  // second = C - D.
  auto cell = [&](Cell c) { return u(CellRow(c), CellCol(c)); };
  double coef[4], constant = 0;
  if (player == Player::kRow) {
    double w[4] = {s, 1 - s, -s, -(1 - s)};  // A, B, C, D
    std::copy(w, w + 4, coef);
  } else {
    double w[4] = {s, -s, 1 - s, -(1 - s)};
    std::copy(w, w + 4, coef);
  }
  const Cell target = family.free_cells(player)[k].cell;
  for (Cell c : {Cell::kA, Cell::kB, Cell::kC, Cell::kD}) {
    if (c != target) constant += coef[static_cast<int>(c)] * cell(c);
  }
  const double w = coef[static_cast<int>(target)];
  if (std::abs(w) < 1e-15) return std::nullopt;
  return -constant / w;
}

}  // namespace

MetaEquilibriumReport OpposingInterestsMetaEquilibrium(
    const MetaGameScenario& scn) {
  if (scn.is_cournot()) throw InvalidSpec("not a 2x2 family");
  const ParamGame2x2& family = scn.family();
  const BimatrixGame& g = family.base();
  if (!IsOpposingInterests(g)) {
    throw InvalidSpec("base game is not opposing-interests");
  }
  NaturalSpaceResult natural = ValidateNaturalSpace(family);
  if (!natural.natural) throw InvalidSpec(natural.reason);
  const Matrix& u1 = g.u1();
  const Matrix& u2 = g.u2();
  const double p = (u1(1, 1) - u1(1, 0)) /
                   (u1(0, 0) - u1(0, 1) + u1(1, 1) - u1(1, 0));
  const double q = (u2(1, 1) - u2(0, 1)) /
                   (u2(0, 0) - u2(0, 1) + u2(1, 1) - u2(1, 0));
  MetaEquilibriumReport report;
  report.induced_profile = MixedProfile::FromPQ(p, q);
  report.utilities = ExpectedUtilities2x2(g, *report.induced_profile);
  // The row declaration pins q through the row player's indifference, the
  // column declaration pins p.
  const double target[2] = {q, p};
  DeclarationProfile decls = family.Truth();
  for (Player pl : {Player::kRow, Player::kColumn}) {
    bool solved = false;
    for (size_t k = 0; k < family.free_cells(pl).size() && !solved; ++k) {
      std::optional<double> v =
          SolveIndifference(family, pl, k, target[Index(pl)]);
      if (v && family.free_cells(pl)[k].bounds.Contains(*v)) {
        decls[Index(pl)][k] = *v;
        solved = true;
      }
    }
    if (!solved) {
      report.note += PlayerName(pl) + " declaration not solvable in its "
                     "space; ";
    }
  }
  report.declarations = decls;
  try {
    report.certificate = EpsilonCertificate(scn, decls).epsilon;
  } catch (const NonUniqueCceError&) {
    report.certificate = kInfinity;
  }
  report.classification = Classify(scn, decls, report.certificate);
  if (report.classification != "truthful") report.classification = "meta-NE";
  return report;
}

MetaEquilibriumReport IteratedBestResponse(const MetaGameScenario& scn,
                                           int max_iterations) {
  DeclarationProfile decls = scn.Truth();
  std::set<DeclarationProfile> seen = {decls};
  MetaEquilibriumReport report;
  report.note = "iteration limit reached";
  for (int it = 0; it < max_iterations; ++it) {
    DeclarationProfile next = decls;
    for (Player p : {Player::kRow, Player::kColumn}) {
      const Declaration current = next[Index(p)];
      BestResponse br = MetaBestResponse(scn, p, next);
      const double u_now =
          UtilityWith(scn, p, next, current).value_or(-kInfinity);
      // Keep the current declaration unless the reply is strictly better.
      if (br.utility > u_now + 1e-12) next[Index(p)] = br.declaration;
    }
    if (next == decls) {
      report.note = "fixed point";
      break;
    }
    decls = next;
    if (!seen.insert(decls).second) {
      report.note = "cycle detected";
      break;
    }
  }
  report.declarations = decls;
  report.utilities = MetaUtility(scn, decls);
  if (scn.is_cournot()) {
    report.induced_cournot =
        CournotNash(scn.cournot(), {decls[0][0], decls[1][0]});
    report.certificate = MaxAnalyticGain(scn, decls, report.utilities);
  } else {
    const BimatrixGame declared = scn.family().Instantiate(decls);
    if (IsFullyMixed2x2(declared)) {
      report.induced_profile = MixedNash2x2(declared);
    }
    report.certificate = EpsilonCertificate(scn, decls).epsilon;
  }
  report.classification = Classify(scn, decls, report.certificate);
  return report;
}

namespace {

bool NearlyEqual(double x, double y) {
  return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
}

void AttachWitness(const MetaGameScenario& scn, ManipulationReport& report) {
  const DeclarationProfile truth = scn.Truth();
  const std::array<double, 2> u = MetaUtility(scn, truth);
  for (Player p : {Player::kRow, Player::kColumn}) {
    BestResponse br = MetaBestResponse(scn, p, truth);
    const double gain = br.utility - u[Index(p)];
    if (gain > report.gain) {
      report.gain = gain;
      report.player = p;
      report.witness = br.declaration;
    }
  }
}

}  // namespace

ManipulationReport ManipulationFree(const MetaGameScenario& scn,
                                    double epsilon) {
  ManipulationReport report;
  if (scn.is_cournot() && scn.analytic()) {
    const CournotScenario& c = scn.cournot();
    const CournotOutcome truthful = CournotNash(c, c.costs);
    report.method = "closed-form-cournot";
    report.manipulation_free = truthful.q1 <= 0 || truthful.q2 <= 0 ||
                               (c.costs[0] == 0 && c.costs[1] == 0);
    if (!report.manipulation_free) AttachWitness(scn, report);
    return report;
  }
  if (!scn.is_cournot() && scn.analytic() &&
      IsOpposingInterests(scn.family().base()) &&
      ValidateNaturalSpace(scn.family()).natural) {
    const Matrix& u1 = scn.family().base().u1();
    const Matrix& u2 = scn.family().base().u2();
    const double a1 = u1(0, 0), b1 = u1(0, 1), c1 = u1(1, 0), d1 = u1(1, 1);
    const double a2 = u2(0, 0), b2 = u2(0, 1), c2 = u2(1, 0), d2 = u2(1, 1);
    report.method = "closed-form-opposing-interests";
    report.manipulation_free =
        NearlyEqual((d1 - c1) / (a1 - b1 + d1 - c1),
                    (d2 - c2) / (a2 - b2 + d2 - c2)) &&
        NearlyEqual((d2 - b2) / (a2 - b2 + d2 - c2),
                    (d1 - b1) / (a1 - c1 + d1 - b1));
    if (!report.manipulation_free) AttachWitness(scn, report);
    return report;
  }
  report.method = "grid";
  const Certificate cert = EpsilonCertificate(scn, scn.Truth());
  report.manipulation_free = cert.Holds(epsilon);
  if (!report.manipulation_free) {
    report.player = cert.player;
    report.witness = cert.witness;
    report.gain = cert.epsilon;
  }
  return report;
}

DominantDeclaration ConstructDominantDeclaration(const ParamGame2x2& family,
                                                 Player player, int target,
                                                 double margin) {
  if (target < 0 || target > 1) throw InvalidSpec("target must be 0 or 1");
  const int other = 1 - target;
  const auto& cells = family.free_cells(player);
  DominantDeclaration out;
  out.declaration = family.Truth(player);
  Matrix u = family.base().Payoffs(player);
  // Cell of `player`'s matrix for own action `own` against `opp`.
  auto cell_of = [&](int own, int opp) {
    const int r = player == Player::kRow ? own : opp;
    const int c = player == Player::kRow ? opp : own;
    return static_cast<Cell>(2 * r + c);
  };
  auto slot = [&](Cell c) -> int {
    for (size_t k = 0; k < cells.size(); ++k)
      if (cells[k].cell == c) return static_cast<int>(k);
    return -1;
  };
  auto value = [&](Cell c) -> double& { return u(CellRow(c), CellCol(c)); };
  for (int opp = 0; opp < 2; ++opp) {
    const Cell hi_cell = cell_of(target, opp);
    const Cell lo_cell = cell_of(other, opp);
    if (value(hi_cell) > value(lo_cell)) continue;
    const int hs = slot(hi_cell);
    const int ls = slot(lo_cell);
    if (hs >= 0) {
      const double want = value(lo_cell) + margin;
      const double v = std::min(want, cells[hs].bounds.hi);
      if (v > value(lo_cell)) {
        value(hi_cell) = v;
        out.declaration[hs] = v;
        continue;
      }
    }
    if (ls >= 0) {
      const double want = value(hi_cell) - margin;
      const double v = std::max(want, cells[ls].bounds.lo);
      if (v < value(hi_cell)) {
        value(lo_cell) = v;
        out.declaration[ls] = v;
        continue;
      }
    }
    std::ostringstream os;
    os << "cell " << CellName(hi_cell) << " must exceed cell "
       << CellName(lo_cell) << " (" << value(lo_cell) << ") but "
       << (hs >= 0 || ls >= 0 ? "the declaration bounds do not allow it"
                              : "both cells are fixed")
       << "; currently " << value(hi_cell);
    out.ok = false;
    out.binding_constraint = os.str();
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace metagame
