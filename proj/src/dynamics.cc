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

#include "metagame/dynamics.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "metagame/equilibrium.h"

namespace metagame {

std::vector<int64_t> CheckpointTimes(int64_t horizon,
                                     const DynamicsOptions& options) {
  if (horizon < 1) throw InvalidSpec("horizon must be >= 1");
  std::vector<int64_t> out;
  const int g = options.geometric_points;
  for (int k = 0; k < g; ++k) {
    const double e = g > 1 ? static_cast<double>(k) / (g - 1) : 1.0;
    out.push_back(static_cast<int64_t>(
        std::llround(std::pow(static_cast<double>(horizon), e))));
  }
  const int l = options.linear_points;
  for (int k = 1; k <= l; ++k) {
    out.push_back(static_cast<int64_t>(
        std::llround(static_cast<double>(horizon) * k / l)));
  }
  for (int64_t t : options.extra_checkpoints) out.push_back(t);
  out.push_back(horizon);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove_if(out.begin(), out.end(),
                           [&](int64_t t) { return t < 1 || t > horizon; }),
            out.end());
  return out;
}

DynamicsTrace RunDynamics(const BimatrixGame& game, const AgentSpecs& specs,
                          int64_t horizon, uint64_t seed,
                          const DynamicsOptions& options) {
  const std::vector<int64_t> times = CheckpointTimes(horizon, options);
  std::unique_ptr<Agent> agents[2] = {
      MakeAgent(specs[0], game, Player::kRow, horizon, seed),
      MakeAgent(specs[1], game, Player::kColumn, horizon, seed)};

  DynamicsTrace trace;
  trace.seed = seed;
  trace.horizon = horizon;
  trace.counts = Matrix(game.rows(), game.cols());
  const bool keep_log =
      options.log == LogPolicy::kAlways ||
      (options.log == LogPolicy::kAuto && horizon <= kAutoLogLimit);
  if (keep_log) trace.log.reserve(horizon);

  std::vector<double> fixed_row(game.rows(), 0.0);
  std::vector<double> fixed_col(game.cols(), 0.0);
  std::array<double, 2> realized = {0.0, 0.0};
  size_t next = 0;
  for (int64_t t = 1; t <= horizon; ++t) {
    const int r = agents[0]->Act();
    const int c = agents[1]->Act();
    agents[0]->Observe(r, c);
    agents[1]->Observe(c, r);
    trace.counts(r, c) += 1;
    realized[0] += game.u1()(r, c);
    realized[1] += game.u2()(r, c);
    for (int a = 0; a < game.rows(); ++a) fixed_row[a] += game.u1()(a, c);
    for (int a = 0; a < game.cols(); ++a) fixed_col[a] += game.u2()(r, a);
    if (keep_log) trace.log.push_back({r, c});
    if (next < times.size() && times[next] == t) {
      Matrix probs(game.rows(), game.cols());
      for (int i = 0; i < game.rows(); ++i)
        for (int j = 0; j < game.cols(); ++j)
          probs(i, j) = trace.counts(i, j) / static_cast<double>(t);
      Checkpoint cp;
      cp.t = t;
      cp.empirical = JointDistribution(std::move(probs));
      cp.cumulative_payoff = realized;
      cp.regret = {
          *std::max_element(fixed_row.begin(), fixed_row.end()) - realized[0],
          *std::max_element(fixed_col.begin(), fixed_col.end()) - realized[1]};
      if (options.record_policies) {
        cp.policy = {agents[0]->Policy(), agents[1]->Policy()};
      }
      trace.checkpoints.push_back(std::move(cp));
      ++next;
    }
  }
  return trace;
}

CheckResult CheckApproach(const DynamicsTrace& trace,
                          const std::vector<JointDistribution>& targets,
                          double epsilon) {
  if (targets.empty()) throw InvalidSpec("approach check needs a target");
  double best = kInfinity;
  for (const auto& d : targets) {
    best = std::min(best, trace.FinalDistribution().L1Distance(d));
  }
  std::ostringstream os;
  os << "L1 distance to target set " << best << " vs epsilon " << epsilon;
  return {best < epsilon, best, os.str()};
}

CheckResult CheckApproachCce(const DynamicsTrace& trace,
                             const BimatrixGame& game, double epsilon) {
  const double v = CceViolation(game, trace.FinalDistribution());
  std::ostringstream os;
  os << "CCE violation " << v << " vs epsilon " << epsilon;
  return {v <= epsilon, v, os.str()};
}

namespace {

// Max L1 distance of checkpoints in (epsilon H, H] from `ref`, with the
// number of checkpoints examined.
std::pair<double, int> WindowDistance(const DynamicsTrace& trace, size_t end,
                                      double epsilon,
                                      const JointDistribution& ref) {
  const double lo = epsilon * trace.checkpoints[end].t;
  double worst = 0;
  int n = 0;
  for (size_t k = 0; k <= end; ++k) {
    if (trace.checkpoints[k].t <= lo) continue;
    worst = std::max(worst, trace.checkpoints[k].empirical.L1Distance(ref));
    ++n;
  }
  return {worst, n};
}

}  // namespace

CheckResult CheckSelfConvergent(const DynamicsTrace& trace, double epsilon,
                                int64_t min_horizon) {
  if (trace.checkpoints.empty()) throw InvalidSpec("trace has no checkpoints");
  const size_t last = trace.checkpoints.size() - 1;
  size_t first = last;
  if (min_horizon > 0) {
    first = 0;
    while (first < last && trace.checkpoints[first].t < min_horizon) ++first;
  }
  double worst = 0;
  int64_t worst_horizon = 0;
  int evaluated = 0;
  for (size_t h = first; h <= last; ++h) {
    auto [d, n] = WindowDistance(trace, h, epsilon,
                                 trace.checkpoints[h].empirical);
    if (n < kMinSelfConvergenceCheckpoints) continue;
    ++evaluated;
    if (evaluated == 1 || d > worst) {
      worst = d;
      worst_horizon = trace.checkpoints[h].t;
    }
  }
  if (evaluated == 0) {
    throw InvalidSpec("too few checkpoints for a self-convergence check (need "
                      "50 after epsilon*T)");
  }
  std::ostringstream os;
  os << "max L1 deviation " << worst << " (horizon " << worst_horizon
     << ", " << evaluated << " horizons checked) vs epsilon " << epsilon;
  return {worst < epsilon, worst, os.str()};
}

CheckResult CheckConvergesTo(const DynamicsTrace& trace,
                             const JointDistribution& target, double epsilon) {
  if (trace.checkpoints.empty()) throw InvalidSpec("trace has no checkpoints");
  auto [d, n] =
      WindowDistance(trace, trace.checkpoints.size() - 1, epsilon, target);
  std::ostringstream os;
  os << "max L1 distance to target " << d << " over " << n
     << " checkpoints vs epsilon " << epsilon;
  return {d < epsilon, d, os.str()};
}

double Mape(const JointDistribution& empirical,
            const JointDistribution& reference) {
  if (empirical.rows() != reference.rows() ||
      empirical.cols() != reference.cols()) {
    throw DimensionMismatch("MAPE of distributions of different shape");
  }
  double total = 0;
  for (int r = 0; r < reference.rows(); ++r) {
    for (int c = 0; c < reference.cols(); ++c) {
      if (!(reference(r, c) > 0)) {
        throw InvalidSpec("MAPE needs a strictly positive reference");
      }
      total += std::abs(empirical(r, c) - reference(r, c)) / reference(r, c);
    }
  }
  return total / (reference.rows() * reference.cols());
}

std::array<double, 2> CournotTrace::MeanProfit(
    const std::array<double, 2>& costs) const {
  return {mean_revenue[0] - costs[0] * mean_quantity[0],
          mean_revenue[1] - costs[1] * mean_quantity[1]};
}

namespace {

// One Cournot learner: either a gradient agent or a finite agent on the grid.
class QuantityLearner {
 public:
  QuantityLearner(const CournotScenario& scn, double declared,
                  const AgentSpec& spec, Player player, int grid_points,
                  int64_t horizon, uint64_t seed)
      : scn_(scn), declared_(declared) {
    if (spec.algo == Algorithm::kOnlineGradientDescent) {
      spec.Validate();
      gradient_ = std::make_unique<GradientAgent>(scn.MaxQuantity(),
                                                  spec.ogd_step);
      return;
    }
    if (spec.algo == Algorithm::kSchedule ||
        spec.algo == Algorithm::kOscillatingSchedule) {
      throw InvalidSpec("schedule agents are not supported in Cournot runs");
    }
    if (grid_points < 2) throw InvalidSpec("Cournot grid needs >= 2 points");
    for (int k = 0; k < grid_points; ++k) {
      grid_.push_back(scn.MaxQuantity() * k / (grid_points - 1));
    }
    Matrix payoffs(grid_points, grid_points);
    for (int i = 0; i < grid_points; ++i)
      for (int j = 0; j < grid_points; ++j)
        payoffs(i, j) = CournotProfit(scn, declared, grid_[i], grid_[j]);
    finite_ = MakeAgent(spec, player, payoffs, horizon, seed);
  }

  double Act() {
    if (gradient_) return gradient_->Act();
    index_ = finite_->Act();
    return grid_[index_];
  }

  // Opponent quantity `opp`, opponent grid index `opp_index` (-1 if
  // continuous).
  void Observe(double own, double opp, int opp_index) {
    if (gradient_) {
      gradient_->Observe(scn_.a - scn_.b * (2 * own + opp) - declared_);
      return;
    }
    if (opp_index < 0) {
      // Snap a continuous opponent onto the grid.
      const double step = grid_[1] - grid_[0];
      opp_index = static_cast<int>(std::llround(opp / step));
      opp_index = std::clamp(opp_index, 0, static_cast<int>(grid_.size()) - 1);
    }
    finite_->Observe(index_, opp_index);
  }

  int index() const { return gradient_ ? -1 : index_; }

 private:
  const CournotScenario& scn_;
  double declared_;
  std::unique_ptr<GradientAgent> gradient_;
  std::unique_ptr<Agent> finite_;
  std::vector<double> grid_;
  int index_ = 0;
};

}  // namespace

CournotTrace RunCournotDynamics(const CournotScenario& scn,
                                const std::array<double, 2>& declared,
                                const AgentSpecs& specs, int64_t horizon,
                                uint64_t seed,
                                const CournotDynamicsOptions& options) {
  scn.Validate();
  const std::array<double, 2> x = {std::clamp(declared[0], 0.0, scn.a),
                                   std::clamp(declared[1], 0.0, scn.a)};
  const std::vector<int64_t> times =
      CheckpointTimes(horizon, options.checkpoints);
  QuantityLearner learners[2] = {
      {scn, x[0], specs[0], Player::kRow, options.grid_points, horizon, seed},
      {scn, x[1], specs[1], Player::kColumn, options.grid_points, horizon,
       seed}};
  CournotTrace trace;
  trace.seed = seed;
  trace.horizon = horizon;
  trace.declared = x;
  std::array<double, 2> sum_q = {0, 0}, sum_rev = {0, 0}, realized = {0, 0};
  size_t next = 0;
  auto regret_at = [&](int i, int64_t t) {
    // Best fixed quantity against the opponent's history, in closed form:
    // sum_t q (a - x_i - b (q + o_t)) is concave quadratic in q.
    const double tt = static_cast<double>(t);
    const double lin = tt * (scn.a - x[i]) - scn.b * sum_q[1 - i];
    const double q = std::clamp(lin / (2 * scn.b * tt), 0.0, scn.MaxQuantity());
    return q * lin - scn.b * tt * q * q - realized[i];
  };
  for (int64_t t = 1; t <= horizon; ++t) {
    const double q1 = learners[0].Act();
    const double q2 = learners[1].Act();
    const int i1 = learners[0].index(), i2 = learners[1].index();
    learners[0].Observe(q1, q2, i2);
    learners[1].Observe(q2, q1, i1);
    const double price = scn.a - scn.b * (q1 + q2);
    sum_q[0] += q1;
    sum_q[1] += q2;
    sum_rev[0] += q1 * price;
    sum_rev[1] += q2 * price;
    realized[0] += q1 * (price - x[0]);
    realized[1] += q2 * (price - x[1]);
    if (next < times.size() && times[next] == t) {
      CournotCheckpoint cp;
      cp.t = t;
      cp.mean_quantity = {sum_q[0] / t, sum_q[1] / t};
      cp.regret = {regret_at(0, t), regret_at(1, t)};
      trace.checkpoints.push_back(cp);
      ++next;
    }
  }
  const double tt = static_cast<double>(horizon);
  trace.mean_quantity = {sum_q[0] / tt, sum_q[1] / tt};
  trace.mean_revenue = {sum_rev[0] / tt, sum_rev[1] / tt};
  trace.regret = {regret_at(0, horizon), regret_at(1, horizon)};
  return trace;
}

}  // namespace metagame
