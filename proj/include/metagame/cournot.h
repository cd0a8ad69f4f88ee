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

#ifndef METAGAME_COURNOT_H_
#define METAGAME_COURNOT_H_

#include <array>
#include <string>

namespace metagame {

// Linear-demand Cournot duopoly: price a - b (q1 + q2), constant unit costs.
struct CournotScenario {
  double a = 1.0;
  double b = 1.0;
  std::array<double, 2> costs = {0.0, 0.0};

  // Throws InvalidSpec unless a > 0, b > 0 and costs are non-negative.
  void Validate() const;
  double MaxQuantity() const { return a / b; }
};

// A: both firms produce; B: only firm 1; C: only firm 2; D: nobody.
enum class CournotRegion { kA, kB, kC, kD };
std::string RegionName(CournotRegion r);

struct CournotOutcome {
  double q1 = 0;
  double q2 = 0;
  double price = 0;
  double u1 = 0;
  double u2 = 0;
  CournotRegion region = CournotRegion::kD;
};

CournotRegion ClassifyCournot(double a, const std::array<double, 2>& costs);

// Nash equilibrium quantities of the game with the given unit costs, with
// utilities evaluated at those same costs. Costs above a are treated as a.
CournotOutcome CournotNash(const CournotScenario& scn,
                           const std::array<double, 2>& costs);

// Firms play the equilibrium of the declared-cost game; utilities use the
// scenario's true costs.
std::array<double, 2> CournotUtilitiesAt(const CournotScenario& scn,
                                         const std::array<double, 2>& declared);

// Profit of a firm with unit cost `cost` producing `own` against `other`.
double CournotProfit(const CournotScenario& scn, double cost, double own,
                     double other);

}  // namespace metagame

#endif  // METAGAME_COURNOT_H_
