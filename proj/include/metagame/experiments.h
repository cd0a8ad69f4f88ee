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

#ifndef METAGAME_EXPERIMENTS_H_
#define METAGAME_EXPERIMENTS_H_

#include <array>
#include <cstdint>
#include <vector>

#include "metagame/dynamics.h"
#include "metagame/game.h"

namespace metagame {

// One independent run per seed, fanned out over a worker pool. The result is
// ordered like `seeds` and independent of the thread count.
std::vector<DynamicsTrace> RunEnsemble(const BimatrixGame& game,
                                       const AgentSpecs& specs,
                                       int64_t horizon,
                                       const std::vector<uint64_t>& seeds,
                                       const DynamicsOptions& options = {},
                                       int threads = 0);

struct ScalingRow {
  int64_t horizon = 0;
  double mean_mape = 0;
  double std_mape = 0;
  int seeds = 0;
  // Acceptance bound 4 / sqrt(T).
  double bound = 0;
};

std::vector<ScalingRow> MapeScaling(const BimatrixGame& game,
                                    const AgentSpecs& specs,
                                    const std::vector<int64_t>& horizons,
                                    const std::vector<uint64_t>& seeds,
                                    const JointDistribution& reference,
                                    int threads = 0);

// Means non-increasing in T and each at most 4 / sqrt(T).
bool ScalingPasses(const std::vector<ScalingRow>& rows);

struct PhaseReport {
  int phase = 0;
  int64_t end = 0;
  int active = 0;  // 1 or 2
  double distance_active = 0;
  double distance_other = 0;
  std::array<double, 2> regret_per_round = {0, 0};
};

struct OscillationReport {
  int64_t alpha = 0;
  std::vector<int64_t> phase_lengths;
  std::vector<PhaseReport> phases;
  // Self-convergence of the oscillating run and of plain schedule dynamics on
  // the first distribution over the same horizon, both swept over horizons
  // from the end of the first phase.
  CheckResult self_convergence;
  CheckResult single_schedule_self_convergence;
  DynamicsTrace trace;
};

// alpha = ceil(1 / epsilon^2). Throws InvalidSpec for non-CCE or irrational
// distributions.
OscillationReport RunOscillation(const BimatrixGame& game,
                                 const JointDistribution& dist1,
                                 const JointDistribution& dist2,
                                 double epsilon, int num_phases = 3);

}  // namespace metagame

#endif  // METAGAME_EXPERIMENTS_H_
