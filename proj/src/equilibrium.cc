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

#include "metagame/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace metagame {

std::optional<MixedProfile> MixedNash2x2(const BimatrixGame& game) {
  if (!game.Is2x2()) throw DimensionMismatch("mixed 2x2 solver needs 2x2");
  const Matrix& u1 = game.u1();
  const Matrix& u2 = game.u2();
  const double den_p = u2(0, 0) - u2(0, 1) + u2(1, 1) - u2(1, 0);
  const double den_q = u1(0, 0) - u1(1, 0) + u1(1, 1) - u1(0, 1);
  if (std::abs(den_p) < kDegeneracyTolerance ||
      std::abs(den_q) < kDegeneracyTolerance) {
    throw DegenerateGameError("degenerate (weak-dominance) game: zero "
                              "indifference slope");
  }
  double p = (u2(1, 1) - u2(1, 0)) / den_p;
  double q = (u1(1, 1) - u1(0, 1)) / den_q;
  auto in_unit = [](double x) {
    return x >= -kProbTolerance && x <= 1 + kProbTolerance;
  };
  if (!in_unit(p) || !in_unit(q)) return std::nullopt;
  p = std::clamp(p, 0.0, 1.0);
  q = std::clamp(q, 0.0, 1.0);
  return MixedProfile::FromPQ(p, q);
}

std::vector<ActionProfile> PureNash(const BimatrixGame& game) {
  std::vector<ActionProfile> out;
  for (int r = 0; r < game.rows(); ++r) {
    for (int c = 0; c < game.cols(); ++c) {
      bool ok = true;
      for (int r2 = 0; r2 < game.rows() && ok; ++r2)
        ok = game.u1()(r2, c) <= game.u1()(r, c);
      for (int c2 = 0; c2 < game.cols() && ok; ++c2)
        ok = game.u2()(r, c2) <= game.u2()(r, c);
      if (ok) out.push_back({r, c});
    }
  }
  return out;
}

namespace {

// Index of the first surviving action that strictly dominates `a` for `p`
// against all surviving opponent actions, or -1.
int FindDominator(const BimatrixGame& game, Player p, int a,
                  const std::vector<int>& own, const std::vector<int>& opp) {
  for (int d : own) {
    if (d == a) continue;
    bool dominates = true;
    for (int o : opp) {
      if (!(game.PayoffFor(p, d, o) > game.PayoffFor(p, a, o))) {
        dominates = false;
        break;
      }
    }
    if (dominates) return d;
  }
  return -1;
}

}  // namespace

EliminationTrace IteratedElimination(const BimatrixGame& game,
                                     EliminationOrder order) {
  EliminationTrace trace;
  for (int r = 0; r < game.rows(); ++r) trace.surviving_rows.push_back(r);
  for (int c = 0; c < game.cols(); ++c) trace.surviving_cols.push_back(c);
  const Player first =
      order == EliminationOrder::kRowFirst ? Player::kRow : Player::kColumn;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Player p : {first, Opponent(first)}) {
      auto& own = p == Player::kRow ? trace.surviving_rows
                                    : trace.surviving_cols;
      const auto& opp = p == Player::kRow ? trace.surviving_cols
                                          : trace.surviving_rows;
      for (size_t k = 0; k < own.size(); ++k) {
        int d = FindDominator(game, p, own[k], own, opp);
        if (d >= 0) {
          trace.steps.push_back({p, own[k], d});
          own.erase(own.begin() + k);
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  return trace;
}

bool IsDominanceSolvable(const BimatrixGame& game) {
  return IteratedElimination(game).Solved();
}

StackelbergOutcome Stackelberg(const BimatrixGame& game, Player leader) {
  const Player follower = Opponent(leader);
  StackelbergOutcome best;
  best.leader_value = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < game.NumActions(leader); ++a) {
    int reply = -1;
    for (int b = 0; b < game.NumActions(follower); ++b) {
      if (reply < 0) {
        reply = b;
        continue;
      }
      const double fb = game.PayoffFor(follower, b, a);
      const double fr = game.PayoffFor(follower, reply, a);
      if (fb > fr || (fb == fr && game.PayoffFor(leader, a, b) >
                                      game.PayoffFor(leader, a, reply))) {
        reply = b;
      }
    }
    const double v = game.PayoffFor(leader, a, reply);
    if (v > best.leader_value) {
      best = {a, reply, v, game.PayoffFor(follower, reply, a)};
    }
  }
  return best;
}

double CceViolation(const BimatrixGame& game, const JointDistribution& dist) {
  if (game.rows() != dist.rows() || game.cols() != dist.cols()) {
    throw DimensionMismatch("distribution does not match game shape");
  }
  const auto value = JointExpectedUtilities(game, dist);
  const auto col_marginal = dist.Marginal(Player::kColumn);
  const auto row_marginal = dist.Marginal(Player::kRow);
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < game.rows(); ++r) {
    double dev = 0;
    for (int c = 0; c < game.cols(); ++c) dev += col_marginal[c] * game.u1()(r, c);
    worst = std::max(worst, dev - value[0]);
  }
  for (int c = 0; c < game.cols(); ++c) {
    double dev = 0;
    for (int r = 0; r < game.rows(); ++r) dev += row_marginal[r] * game.u2()(r, c);
    worst = std::max(worst, dev - value[1]);
  }
  return worst;
}

std::optional<JointDistribution> UniqueCce(const BimatrixGame& game) {
  EliminationTrace trace = IteratedElimination(game);
  if (trace.Solved()) {
    return JointDistribution::PointMass(game.rows(), game.cols(),
                                        trace.surviving_rows[0],
                                        trace.surviving_cols[0]);
  }
  if (IsFullyMixed2x2(game)) {
    std::optional<MixedProfile> ne = MixedNash2x2(game);
    if (ne) return JointDistribution::Product(*ne);
  }
  return std::nullopt;
}

}  // namespace metagame
