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

#include "metagame/agents.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace metagame {

std::string AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kMultiplicativeWeights: return "mw";
    case Algorithm::kFollowPerturbedLeader: return "ftpl";
    case Algorithm::kRegretMatching: return "rm";
    case Algorithm::kOnlineGradientDescent: return "ogd";
    case Algorithm::kSchedule: return "schedule";
    case Algorithm::kOscillatingSchedule: return "oscillate";
  }
  return "?";
}

Algorithm AlgorithmFromName(const std::string& name) {
  for (Algorithm a :
       {Algorithm::kMultiplicativeWeights, Algorithm::kFollowPerturbedLeader,
        Algorithm::kRegretMatching, Algorithm::kOnlineGradientDescent,
        Algorithm::kSchedule, Algorithm::kOscillatingSchedule}) {
    if (AlgorithmName(a) == name) return a;
  }
  throw InvalidSpec("unknown algorithm '" + name + "'");
}

void AgentSpec::Validate() const {
  switch (algo) {
    case Algorithm::kMultiplicativeWeights:
      if (!(eta > 0) || !std::isfinite(eta)) throw InvalidSpec("MW needs eta > 0");
      break;
    case Algorithm::kFollowPerturbedLeader:
      if (!(ftpl_scale > 0) || !std::isfinite(ftpl_scale)) {
        throw InvalidSpec("FTPL needs a positive perturbation scale");
      }
      break;
    case Algorithm::kOnlineGradientDescent:
      if (!(ogd_step >= 0)) throw InvalidSpec("OGD step must be >= 0");
      break;
    case Algorithm::kRegretMatching:
      break;
    case Algorithm::kOscillatingSchedule:
      if (!dist2) throw InvalidSpec("oscillating schedule needs dist2");
      if (alpha < 1) throw InvalidSpec("oscillating schedule needs alpha >= 1");
      [[fallthrough]];
    case Algorithm::kSchedule:
      if (!dist) throw InvalidSpec("schedule needs a target distribution");
      break;
  }
}

const ActionProfile& CycleSchedule::At(int64_t s) const {
  for (size_t k = 0; k < lengths.size(); ++k) {
    if (s < lengths[k]) return profiles[k];
    s -= lengths[k];
  }
  return profiles.back();
}

std::optional<std::pair<int64_t, int64_t>> ToRational(double x, double tol,
                                                      int64_t max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents.
  int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(r);
    if (std::abs(fl) > 1e15) break;
    const int64_t ai = static_cast<int64_t>(fl);
    const int64_t h2 = ai * h1 + h0;
    const int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::abs(x - static_cast<double>(h1) / k1) <= tol) {
      return std::make_pair(h1, k1);
    }
    const double frac = r - fl;
    if (frac == 0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

CycleSchedule BuildSchedule(const JointDistribution& dist) {
  struct Entry {
    ActionProfile profile;
    int flat;
    int64_t num, den;
  };
  std::vector<Entry> support;
  for (int r = 0; r < dist.rows(); ++r) {
    for (int c = 0; c < dist.cols(); ++c) {
      if (dist(r, c) <= 0) continue;
      auto frac = ToRational(dist(r, c));
      if (!frac) {
        std::ostringstream os;
        os << "schedule probability " << dist(r, c)
           << " is not a rational with denominator <= 10^6";
        throw InvalidSpec(os.str());
      }
      support.push_back({{r, c}, r * dist.cols() + c, frac->first,
                         frac->second});
    }
  }
  std::stable_sort(support.begin(), support.end(),
                   [](const Entry& x, const Entry& y) {
                     // Compare num/den exactly via cross-multiplication.
                     __int128 lhs = static_cast<__int128>(x.num) * y.den;
                     __int128 rhs = static_cast<__int128>(y.num) * x.den;
                     if (lhs != rhs) return lhs > rhs;
                     return x.flat > y.flat;
                   });
  int64_t l = 1;
  for (const Entry& e : support) l = std::lcm(l, e.den);
  l *= static_cast<int64_t>(support.size());
  CycleSchedule out;
  for (const Entry& e : support) {
    out.profiles.push_back(e.profile);
    out.lengths.push_back(e.num * (l / e.den));
    out.cycle += out.lengths.back();
  }
  return out;
}

namespace {

void CheckCce(const BimatrixGame& game, const JointDistribution& dist,
              const char* which) {
  if (dist.rows() != game.rows() || dist.cols() != game.cols()) {
    throw DimensionMismatch(std::string(which) +
                            " does not match the game's shape");
  }
  const double v = CceViolation(game, dist);
  if (v > kCceCheckTolerance) {
    std::ostringstream os;
    os << which << " is not a coarse correlated equilibrium (violation " << v
       << ")";
    throw InvalidSpec(os.str());
  }
}

int64_t SaturatingMul(int64_t x, int64_t y) {
  constexpr int64_t kMax = std::numeric_limits<int64_t>::max() / 4;
  if (x != 0 && y > kMax / x) return kMax;
  return x * y;
}

}  // namespace

AgentSpec MakeScheduleSpec(const BimatrixGame& game,
                           const JointDistribution& dist) {
  CheckCce(game, dist, "schedule distribution");
  BuildSchedule(dist);
  AgentSpec spec;
  spec.algo = Algorithm::kSchedule;
  spec.dist = dist;
  return spec;
}

AgentSpec MakeOscillatingSchedule(const BimatrixGame& game,
                                  const JointDistribution& dist1,
                                  const JointDistribution& dist2,
                                  int64_t alpha) {
  if (alpha < 1) throw InvalidSpec("alpha must be a positive integer");
  CheckCce(game, dist1, "first distribution");
  CheckCce(game, dist2, "second distribution");
  BuildSchedule(dist1);
  BuildSchedule(dist2);
  AgentSpec spec;
  spec.algo = Algorithm::kOscillatingSchedule;
  spec.dist = dist1;
  spec.dist2 = dist2;
  spec.alpha = alpha;
  return spec;
}

std::vector<int64_t> OscillationPhaseLengths(const AgentSpec& spec,
                                             int num_phases) {
  if (!spec.dist || !spec.dist2) throw InvalidSpec("needs two distributions");
  const int64_t tau[2] = {BuildSchedule(*spec.dist).cycle,
                          BuildSchedule(*spec.dist2).cycle};
  std::vector<int64_t> out;
  int64_t gamma = 1;
  for (int c = 1; c <= num_phases; ++c) {
    gamma = SaturatingMul(gamma, 2 * spec.alpha);
    out.push_back(SaturatingMul(tau[(c - 1) % 2], gamma));
  }
  return out;
}

std::vector<double> RegretMatchingPolicy(const std::vector<double>& regrets) {
  std::vector<double> out(regrets.size());
  double total = 0;
  for (size_t a = 0; a < regrets.size(); ++a) {
    out[a] = std::max(0.0, regrets[a]);
    total += out[a];
  }
  if (total <= 0) {
    std::fill(out.begin(), out.end(), 1.0 / regrets.size());
  } else {
    for (double& x : out) x /= total;
  }
  return out;
}

AgentRng::AgentRng(uint64_t seed, int stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), 0x6d657461u};
  engine_.seed(seq);
}

double AgentRng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int AgentRng::Sample(const std::vector<double>& probs) {
  const double u = Uniform();
  double acc = 0;
  int last_positive = 0;
  for (size_t a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0) continue;
    acc += probs[a];
    last_positive = static_cast<int>(a);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

Matrix OwnPayoffs(const BimatrixGame& game, Player player) {
  if (player == Player::kRow) return game.u1();
  Matrix out(game.cols(), game.rows());
  for (int r = 0; r < game.rows(); ++r)
    for (int c = 0; c < game.cols(); ++c) out(c, r) = game.u2()(r, c);
  return out;
}

namespace {

Matrix Normalize(const Matrix& m) {
  const double lo = m.Min(), hi = m.Max();
  Matrix out(m.rows(), m.cols());
  if (hi > lo) {
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) out(r, c) = (m(r, c) - lo) / (hi - lo);
  }
  return out;
}

class MultiplicativeWeightsAgent : public Agent {
 public:
  MultiplicativeWeightsAgent(Matrix payoffs, double eta, uint64_t seed,
                             int stream)
      : payoffs_(std::move(payoffs)),
        eta_(eta),
        log_weights_(payoffs_.rows(), 0.0),
        rng_(seed, stream) {}

  int Act() override { return rng_.Sample(Policy()); }
  void Observe(int /*own*/, int opp) override {
    for (int a = 0; a < payoffs_.rows(); ++a) {
      log_weights_[a] += eta_ * payoffs_(a, opp);
    }
  }
  std::vector<double> Policy() const override {
    const double mx = *std::max_element(log_weights_.begin(), log_weights_.end());
    std::vector<double> w(log_weights_.size());
    double total = 0;
    for (size_t a = 0; a < w.size(); ++a) {
      w[a] = std::exp(log_weights_[a] - mx);
      total += w[a];
    }
    for (double& x : w) x /= total;
    return w;
  }

 private:
  Matrix payoffs_;
  double eta_;
  std::vector<double> log_weights_;
  AgentRng rng_;
};

class RegretMatchingAgent : public Agent {
 public:
  RegretMatchingAgent(Matrix payoffs, uint64_t seed, int stream)
      : payoffs_(std::move(payoffs)),
        regrets_(payoffs_.rows(), 0.0),
        rng_(seed, stream) {}

  int Act() override { return rng_.Sample(Policy()); }
  void Observe(int own, int opp) override {
    const double realized = payoffs_(own, opp);
    for (int a = 0; a < payoffs_.rows(); ++a) {
      regrets_[a] += payoffs_(a, opp) - realized;
    }
  }
  std::vector<double> Policy() const override {
    return RegretMatchingPolicy(regrets_);
  }

 private:
  Matrix payoffs_;
  std::vector<double> regrets_;
  AgentRng rng_;
};

class PerturbedLeaderAgent : public Agent {
 public:
  PerturbedLeaderAgent(Matrix payoffs, double noise, uint64_t seed, int stream)
      : payoffs_(std::move(payoffs)),
        noise_(noise),
        cumulative_(payoffs_.rows(), 0.0),
        rng_(seed, stream) {}

  int Act() override {
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < cumulative_.size(); ++a) {
      const double v = cumulative_[a] + noise_ * rng_.Uniform();
      if (v > best_value) {
        best_value = v;
        best = static_cast<int>(a);
      }
    }
    return best;
  }
  void Observe(int /*own*/, int opp) override {
    for (int a = 0; a < payoffs_.rows(); ++a) cumulative_[a] += payoffs_(a, opp);
  }
  // Probability that each action wins the perturbed argmax. Exact for two
  // actions, midpoint quadrature otherwise.
  std::vector<double> Policy() const override {
    const size_t n = cumulative_.size();
    if (n == 1) return {1.0};
    const double r = noise_;
    // P(U_j + X_j < v) for X_j ~ U[0, r].
    auto cdf = [r](double v) { return std::clamp(v / r, 0.0, 1.0); };
    std::vector<double> out(n, 0.0);
    if (n == 2) {
      // X0 - X1 is triangular on [-r, r]; action 0 wins when
      // X0 - X1 > cum1 - cum0.
      const double z = cumulative_[1] - cumulative_[0];
      double p0;
      if (z <= -r) {
        p0 = 1.0;
      } else if (z >= r) {
        p0 = 0.0;
      } else if (z <= 0) {
        const double s = (r + z) / r;
        p0 = 1.0 - 0.5 * s * s;
      } else {
        const double s = (r - z) / r;
        p0 = 0.5 * s * s;
      }
      return {p0, 1.0 - p0};
    }
    constexpr int kNodes = 2000;
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
      double acc = 0;
      for (int k = 0; k < kNodes; ++k) {
        const double v = cumulative_[i] + r * (k + 0.5) / kNodes;
        double prod = 1.0;
        for (size_t j = 0; j < n && prod > 0; ++j) {
          if (j != i) prod *= cdf(v - cumulative_[j]);
        }
        acc += prod;
      }
      out[i] = acc / kNodes;
      total += out[i];
    }
    for (double& x : out) x /= total;
    return out;
  }

 private:
  Matrix payoffs_;
  double noise_;
  std::vector<double> cumulative_;
  AgentRng rng_;
};

// Plays a fixed cycle per phase and falls back to regret matching after the
// opponent leaves the schedule. A plain schedule is a single endless phase.
class ScheduleAgent : public Agent {
 public:
  ScheduleAgent(Player player, Matrix payoffs, std::vector<CycleSchedule> phases,
                int64_t alpha, bool oscillate, uint64_t seed, int stream)
      : player_(player),
        phases_(std::move(phases)),
        alpha_(alpha),
        oscillate_(oscillate),
        fallback_(payoffs, seed, stream) {
    num_actions_ = payoffs.rows();
    StartPhase(1, 0);
  }

  int Act() override {
    if (deviated_) return fallback_.Act();
    return Own(Current());
  }

  void Observe(int own, int opp) override {
    if (deviated_) {
      fallback_.Observe(own, opp);
    } else if (opp != Opp(Current())) {
      deviated_ = true;
    }
    ++t_;
    if (oscillate_ && t_ - phase_start_ >= phase_length_) {
      StartPhase(phase_ + 1, t_);
    }
  }

  std::vector<double> Policy() const override {
    if (deviated_) return fallback_.Policy();
    std::vector<double> out(num_actions_, 0.0);
    out[Own(Current())] = 1.0;
    return out;
  }

  bool deviated() const { return deviated_; }

 private:
  const CycleSchedule& Active() const {
    return phases_[oscillate_ ? (phase_ - 1) % 2 : 0];
  }
  const ActionProfile& Current() const {
    const CycleSchedule& s = Active();
    return s.At((t_ - phase_start_) % s.cycle);
  }
  int Own(const ActionProfile& a) const {
    return player_ == Player::kRow ? a.row : a.col;
  }
  int Opp(const ActionProfile& a) const {
    return player_ == Player::kRow ? a.col : a.row;
  }
  void StartPhase(int phase, int64_t start) {
    phase_ = phase;
    phase_start_ = start;
    if (!oscillate_) {
      phase_length_ = std::numeric_limits<int64_t>::max();
      return;
    }
    int64_t gamma = 1;
    for (int c = 0; c < phase; ++c) gamma = SaturatingMul(gamma, 2 * alpha_);
    phase_length_ = SaturatingMul(Active().cycle, gamma);
  }

  Player player_;
  std::vector<CycleSchedule> phases_;
  int64_t alpha_;
  bool oscillate_;
  RegretMatchingAgent fallback_;
  int num_actions_ = 0;
  bool deviated_ = false;
  int64_t t_ = 0;
  int phase_ = 1;
  int64_t phase_start_ = 0;
  int64_t phase_length_ = 0;
};

void CheckScheduleShape(const CycleSchedule& s, Player player,
                        const Matrix& payoffs) {
  for (const ActionProfile& a : s.profiles) {
    const int own = player == Player::kRow ? a.row : a.col;
    const int opp = player == Player::kRow ? a.col : a.row;
    if (own >= payoffs.rows() || opp >= payoffs.cols()) {
      throw DimensionMismatch("schedule profile outside the game");
    }
  }
}

}  // namespace

std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec, Player player,
                                 const Matrix& payoffs, int64_t horizon,
                                 uint64_t seed) {
  spec.Validate();
  const int stream = Index(player);
  switch (spec.algo) {
    case Algorithm::kMultiplicativeWeights:
      return std::make_unique<MultiplicativeWeightsAgent>(
          Normalize(payoffs), spec.eta, seed, stream);
    case Algorithm::kFollowPerturbedLeader:
      return std::make_unique<PerturbedLeaderAgent>(
          Normalize(payoffs),
          spec.ftpl_scale * std::sqrt(static_cast<double>(std::max<int64_t>(
                                horizon, 1))),
          seed, stream);
    case Algorithm::kRegretMatching:
      return std::make_unique<RegretMatchingAgent>(Normalize(payoffs), seed,
                                                   stream);
    case Algorithm::kOnlineGradientDescent:
      throw InvalidSpec("online gradient descent needs a continuous action "
                        "space; use it with Cournot scenarios");
    case Algorithm::kSchedule:
    case Algorithm::kOscillatingSchedule: {
      std::vector<CycleSchedule> phases = {BuildSchedule(*spec.dist)};
      const bool osc = spec.algo == Algorithm::kOscillatingSchedule;
      if (osc) phases.push_back(BuildSchedule(*spec.dist2));
      for (const auto& s : phases) CheckScheduleShape(s, player, payoffs);
      return std::make_unique<ScheduleAgent>(player, Normalize(payoffs),
                                             std::move(phases), spec.alpha,
                                             osc, seed, stream);
    }
  }
  throw InvalidSpec("unhandled algorithm");
}

std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec,
                                 const BimatrixGame& game, Player player,
                                 int64_t horizon, uint64_t seed) {
  for (const auto* d : {&spec.dist, &spec.dist2}) {
    if (*d && ((*d)->rows() != game.rows() || (*d)->cols() != game.cols())) {
      throw DimensionMismatch("schedule distribution does not match the game");
    }
  }
  return MakeAgent(spec, player, OwnPayoffs(game, player), horizon, seed);
}

GradientAgent::GradientAgent(double q_max, double step)
    : q_max_(q_max), step_(step > 0 ? step : q_max / 2), point_(q_max / 2) {}

void GradientAgent::Observe(double gradient) {
  ++t_;
  point_ = std::clamp(point_ + step_ / std::sqrt(static_cast<double>(t_)) *
                                   gradient,
                      0.0, q_max_);
}

double ExternalRegret(const BimatrixGame& game,
                      const std::vector<ActionProfile>& history, Player p) {
  if (history.empty()) return 0.0;
  std::vector<double> fixed(game.NumActions(p), 0.0);
  double realized = 0;
  for (const ActionProfile& a : history) {
    const int own = p == Player::kRow ? a.row : a.col;
    const int opp = p == Player::kRow ? a.col : a.row;
    realized += game.PayoffFor(p, own, opp);
    for (int x = 0; x < game.NumActions(p); ++x) {
      fixed[x] += game.PayoffFor(p, x, opp);
    }
  }
  return *std::max_element(fixed.begin(), fixed.end()) - realized;
}

}  // namespace metagame
