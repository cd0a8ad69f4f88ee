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

#ifndef METAGAME_AGENTS_H_
#define METAGAME_AGENTS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "metagame/equilibrium.h"
#include "metagame/game.h"

namespace metagame {

enum class Algorithm {
  kMultiplicativeWeights,
  kFollowPerturbedLeader,
  kRegretMatching,
  kOnlineGradientDescent,
  kSchedule,
  kOscillatingSchedule,
};

std::string AlgorithmName(Algorithm a);
Algorithm AlgorithmFromName(const std::string& name);

struct AgentSpec {
  Algorithm algo = Algorithm::kMultiplicativeWeights;
  // Multiplicative weights step size on payoffs normalized to [0, 1].
  double eta = 0.01;
  // Follow-the-perturbed-leader draws i.i.d. U[0, scale * sqrt(T)] noise per
  // action and round, in normalized payoff units.
  double ftpl_scale = 1.0;
  // Online gradient descent uses step ogd_step / sqrt(t); 0 selects half the
  // action interval.
  double ogd_step = 0.0;
  // Target distribution of a schedule, and the second target of an
  // oscillating schedule.
  std::optional<JointDistribution> dist;
  std::optional<JointDistribution> dist2;
  int64_t alpha = 1;

  // Throws InvalidSpec when the hyperparameters are out of range.
  void Validate() const;
};

// Deterministic cyclic realization of a rational joint distribution: profile
// k is played for lengths[k] consecutive rounds of each cycle.
struct CycleSchedule {
  std::vector<ActionProfile> profiles;
  std::vector<int64_t> lengths;
  int64_t cycle = 0;

  // Profile played at zero-based offset `s` within the cycle.
  const ActionProfile& At(int64_t s) const;
};

// Best rational approximation with |x - n/d| <= tol and d <= max_den.
std::optional<std::pair<int64_t, int64_t>> ToRational(double x,
                                                      double tol = 1e-13,
                                                      int64_t max_den = 1000000);

// Profiles are ordered by decreasing probability (ties: higher flat index
// first). With L the lcm of the reduced denominators times the support size,
// profile k gets Pr_k * L rounds. Throws InvalidSpec for non-rational entries.
CycleSchedule BuildSchedule(const JointDistribution& dist);

// Schedule spec after checking the distribution is a rational CCE of `game`.
AgentSpec MakeScheduleSpec(const BimatrixGame& game,
                           const JointDistribution& dist);
// Oscillating schedule alternating between dist1 (odd phases) and dist2 (even
// phases); phase c spans cycle(c) * (2 alpha)^c rounds.
AgentSpec MakeOscillatingSchedule(const BimatrixGame& game,
                                  const JointDistribution& dist1,
                                  const JointDistribution& dist2,
                                  int64_t alpha);
inline constexpr double kCceCheckTolerance = 1e-9;

// Action-count of each oscillation phase c = 1..num_phases.
std::vector<int64_t> OscillationPhaseLengths(const AgentSpec& spec,
                                             int num_phases);

// Positive-part normalization; uniform when no regret is positive.
std::vector<double> RegretMatchingPolicy(const std::vector<double>& regrets);

// Per-agent random stream derived from a run seed and a player index.
class AgentRng {
 public:
  AgentRng(uint64_t seed, int stream);
  double Uniform();  // [0, 1)
  int Sample(const std::vector<double>& probs);

 private:
  std::mt19937_64 engine_;
};

// A learner over a finite action set with full-information feedback.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual int Act() = 0;
  // Joint action of the finished round, from this agent's point of view.
  virtual void Observe(int own, int opp) = 0;
  // Current mixed strategy.
  virtual std::vector<double> Policy() const = 0;
};

// `payoffs` is the agent's own matrix indexed [own action][opponent action];
// it is rescaled to [0, 1] internally. `horizon` is only used by FTPL.
std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec, Player player,
                                 const Matrix& payoffs, int64_t horizon,
                                 uint64_t seed);
// Convenience overload using `player`'s view of `game`. Validates that
// schedule specs match the game's shape.
std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec,
                                 const BimatrixGame& game, Player player,
                                 int64_t horizon, uint64_t seed);

// `player`'s payoff matrix with rows indexed by their own actions.
Matrix OwnPayoffs(const BimatrixGame& game, Player player);

// Projected online gradient ascent on a quantity in [0, q_max].
class GradientAgent {
 public:
  GradientAgent(double q_max, double step);
  double Act() const { return point_; }
  void Observe(double gradient);
  double point() const { return point_; }

 private:
  double q_max_;
  double step_;
  double point_;
  int64_t t_ = 0;
};

// max_a sum_t u_p(a, a_-p^t) - u_p(a^t).
double ExternalRegret(const BimatrixGame& game,
                      const std::vector<ActionProfile>& history, Player p);

}  // namespace metagame

#endif  // METAGAME_AGENTS_H_
