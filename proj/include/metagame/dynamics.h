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

#ifndef METAGAME_DYNAMICS_H_
#define METAGAME_DYNAMICS_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "metagame/agents.h"
#include "metagame/cournot.h"
#include "metagame/game.h"

namespace metagame {

using AgentSpecs = std::array<AgentSpec, 2>;

struct Checkpoint {
  int64_t t = 0;
  JointDistribution empirical = JointDistribution::Uniform(1, 1);
  std::array<double, 2> cumulative_payoff = {0, 0};
  std::array<double, 2> regret = {0, 0};
  std::array<std::vector<double>, 2> policy;
};

struct DynamicsTrace {
  uint64_t seed = 0;
  int64_t horizon = 0;
  std::vector<Checkpoint> checkpoints;
  Matrix counts;
  // Joint action of every round; empty unless logging was enabled.
  std::vector<ActionProfile> log;

  const Checkpoint& Final() const { return checkpoints.back(); }
  const JointDistribution& FinalDistribution() const {
    return Final().empirical;
  }
};

enum class LogPolicy { kAuto, kAlways, kNever };
inline constexpr int64_t kAutoLogLimit = 1000000;

struct DynamicsOptions {
  int geometric_points = 200;
  int linear_points = 200;
  std::vector<int64_t> extra_checkpoints;
  LogPolicy log = LogPolicy::kAuto;
  bool record_policies = true;
};

// Sorted, de-duplicated checkpoint rounds in [1, T], always including T.
std::vector<int64_t> CheckpointTimes(int64_t horizon,
                                     const DynamicsOptions& options);

// Synchronous repeated play: both agents act, then both observe the joint
// action. Fully determined by (game, specs, horizon, seed).
DynamicsTrace RunDynamics(const BimatrixGame& game, const AgentSpecs& specs,
                          int64_t horizon, uint64_t seed,
                          const DynamicsOptions& options = {});

struct CheckResult {
  bool pass = false;
  double value = 0;  // the statistic compared against epsilon
  std::string detail;
};

// min over targets of the L1 distance from the final empirical distribution.
CheckResult CheckApproach(const DynamicsTrace& trace,
                          const std::vector<JointDistribution>& targets,
                          double epsilon);
// Approach of the CCE set, measured by the CCE violation of the final
// empirical distribution.
CheckResult CheckApproachCce(const DynamicsTrace& trace,
                             const BimatrixGame& game, double epsilon);

inline constexpr int kMinSelfConvergenceCheckpoints = 50;

// For each evaluated horizon H, every checkpoint t in (epsilon H, H] must be
// within L1 distance epsilon of the empirical distribution at H. With
// min_horizon <= 0 only the final horizon is evaluated; otherwise every
// checkpoint H >= min_horizon with enough checkpoints in its window is.
// Throws InvalidSpec when no horizon has at least 50 checkpoints in its
// window.
CheckResult CheckSelfConvergent(const DynamicsTrace& trace, double epsilon,
                                int64_t min_horizon = 0);
// Every checkpoint t in (epsilon T, T] within L1 distance epsilon of target.
CheckResult CheckConvergesTo(const DynamicsTrace& trace,
                             const JointDistribution& target, double epsilon);

// Mean over cells of |empirical - reference| / reference.
double Mape(const JointDistribution& empirical,
            const JointDistribution& reference);

struct CournotCheckpoint {
  int64_t t = 0;
  std::array<double, 2> mean_quantity = {0, 0};
  std::array<double, 2> regret = {0, 0};
};

struct CournotTrace {
  uint64_t seed = 0;
  int64_t horizon = 0;
  std::array<double, 2> declared = {0, 0};
  std::vector<CournotCheckpoint> checkpoints;
  std::array<double, 2> mean_quantity = {0, 0};
  // Time averages of q_i * price, for pricing with any cost afterwards.
  std::array<double, 2> mean_revenue = {0, 0};
  // Regret against the best fixed quantity in [0, a/b] at declared costs.
  std::array<double, 2> regret = {0, 0};

  // Average profit per round at the given unit costs.
  std::array<double, 2> MeanProfit(const std::array<double, 2>& costs) const;
};

struct CournotDynamicsOptions {
  // Uniform quantity grid on [0, a/b] for finite-action learners.
  int grid_points = 201;
  DynamicsOptions checkpoints;
};

// Learners are OGD (continuous quantity) or any finite-action algorithm run
// on the quantity grid. Agents optimize profits at the declared costs.
CournotTrace RunCournotDynamics(const CournotScenario& scn,
                                const std::array<double, 2>& declared,
                                const AgentSpecs& specs, int64_t horizon,
                                uint64_t seed,
                                const CournotDynamicsOptions& options = {});

}  // namespace metagame

#endif  // METAGAME_DYNAMICS_H_
