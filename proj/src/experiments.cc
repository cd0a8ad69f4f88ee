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

#include "metagame/experiments.h"

#include <cmath>
#include <numeric>

#include "metagame/agents.h"
#include "metagame/parallel.h"

namespace metagame {

std::vector<DynamicsTrace> RunEnsemble(const BimatrixGame& game,
                                       const AgentSpecs& specs,
                                       int64_t horizon,
                                       const std::vector<uint64_t>& seeds,
                                       const DynamicsOptions& options,
                                       int threads) {
  std::vector<DynamicsTrace> out(seeds.size());
  ParallelFor(static_cast<int>(seeds.size()), [&](int i) {
    out[i] = RunDynamics(game, specs, horizon, seeds[i], options);
  }, threads);
  return out;
}

std::vector<ScalingRow> MapeScaling(const BimatrixGame& game,
                                    const AgentSpecs& specs,
                                    const std::vector<int64_t>& horizons,
                                    const std::vector<uint64_t>& seeds,
                                    const JointDistribution& reference,
                                    int threads) {
  DynamicsOptions opts;
  opts.geometric_points = 2;
  opts.linear_points = 1;
  opts.log = LogPolicy::kNever;
  opts.record_policies = false;
  std::vector<ScalingRow> rows;
  for (int64_t horizon : horizons) {
    std::vector<DynamicsTrace> traces =
        RunEnsemble(game, specs, horizon, seeds, opts, threads);
    std::vector<double> m;
    for (const auto& t : traces) m.push_back(Mape(t.FinalDistribution(), reference));
    const double mean = std::accumulate(m.begin(), m.end(), 0.0) / m.size();
    double var = 0;
    for (double x : m) var += (x - mean) * (x - mean);
    var = m.size() > 1 ? var / (m.size() - 1) : 0.0;
    rows.push_back({horizon, mean, std::sqrt(var), static_cast<int>(m.size()),
                    4.0 / std::sqrt(static_cast<double>(horizon))});
  }
  return rows;
}

bool ScalingPasses(const std::vector<ScalingRow>& rows) {
  for (size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].mean_mape > rows[k].bound) return false;
    if (k > 0 && rows[k].mean_mape > rows[k - 1].mean_mape) return false;
  }
  return true;
}

OscillationReport RunOscillation(const BimatrixGame& game,
                                 const JointDistribution& dist1,
                                 const JointDistribution& dist2,
                                 double epsilon, int num_phases) {
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidSpec("epsilon in (0, 1)");
  if (num_phases < 1) throw InvalidSpec("need at least one phase");
  OscillationReport report;
  report.alpha = static_cast<int64_t>(std::ceil(1.0 / (epsilon * epsilon) - 1e-9));
  const AgentSpec spec =
      MakeOscillatingSchedule(game, dist1, dist2, report.alpha);
  report.phase_lengths = OscillationPhaseLengths(spec, num_phases);
  std::vector<int64_t> ends;
  int64_t total = 0;
  for (int64_t len : report.phase_lengths) ends.push_back(total += len);

  DynamicsOptions opts;
  opts.geometric_points = 2000;
  opts.linear_points = 200;
  opts.extra_checkpoints = ends;
  opts.log = LogPolicy::kNever;
  opts.record_policies = false;
  report.trace = RunDynamics(game, {spec, spec}, total, 1, opts);

  size_t k = 0;
  for (int c = 0; c < num_phases; ++c) {
    while (report.trace.checkpoints[k].t != ends[c]) ++k;
    const Checkpoint& cp = report.trace.checkpoints[k];
    PhaseReport pr;
    pr.phase = c + 1;
    pr.end = ends[c];
    pr.active = c % 2 == 0 ? 1 : 2;
    const JointDistribution& on = pr.active == 1 ? dist1 : dist2;
    const JointDistribution& off = pr.active == 1 ? dist2 : dist1;
    pr.distance_active = cp.empirical.L1Distance(on);
    pr.distance_other = cp.empirical.L1Distance(off);
    pr.regret_per_round = {cp.regret[0] / cp.t, cp.regret[1] / cp.t};
    report.phases.push_back(pr);
  }
  report.self_convergence = CheckSelfConvergent(report.trace, epsilon, ends[0]);

  const AgentSpec single = MakeScheduleSpec(game, dist1);
  DynamicsTrace plain = RunDynamics(game, {single, single}, total, 1, opts);
  report.single_schedule_self_convergence =
      CheckSelfConvergent(plain, epsilon, ends[0]);
  return report;
}

}  // namespace metagame
