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

#include "metagame/cournot.h"

#include <algorithm>
#include <cmath>

#include "metagame/game.h"

namespace metagame {

void CournotScenario::Validate() const {
  if (!(a > 0) || !std::isfinite(a)) throw InvalidSpec("Cournot needs a > 0");
  if (!(b > 0) || !std::isfinite(b)) throw InvalidSpec("Cournot needs b > 0");
  for (double c : costs) {
    if (!(c >= 0) || !std::isfinite(c)) {
      throw InvalidSpec("Cournot costs must be non-negative");
    }
  }
}

std::string RegionName(CournotRegion r) {
  switch (r) {
    case CournotRegion::kA: return "A";
    case CournotRegion::kB: return "B";
    case CournotRegion::kC: return "C";
    case CournotRegion::kD: return "D";
  }
  return "?";
}

CournotRegion ClassifyCournot(double a, const std::array<double, 2>& costs) {
  const double c1 = std::min(costs[0], a);
  const double c2 = std::min(costs[1], a);
  const double s1 = a + c2 - 2 * c1;
  const double s2 = a + c1 - 2 * c2;
  if (s1 >= 0 && s2 >= 0 && 2 * a - c1 - c2 > 0) return CournotRegion::kA;
  if (s2 < 0 && c1 < a) return CournotRegion::kB;
  if (s1 < 0 && c2 < a) return CournotRegion::kC;
  return CournotRegion::kD;
}

CournotOutcome CournotNash(const CournotScenario& scn,
                           const std::array<double, 2>& costs) {
  const double a = scn.a, b = scn.b;
  const double c1 = std::min(costs[0], a);
  const double c2 = std::min(costs[1], a);
  CournotOutcome out;
  out.region = ClassifyCournot(a, costs);
  switch (out.region) {
    case CournotRegion::kA:
      out.q1 = std::max(0.0, (a + c2 - 2 * c1) / (3 * b));
      out.q2 = std::max(0.0, (a + c1 - 2 * c2) / (3 * b));
      break;
    case CournotRegion::kB:
      out.q1 = (a - c1) / (2 * b);
      break;
    case CournotRegion::kC:
      out.q2 = (a - c2) / (2 * b);
      break;
    case CournotRegion::kD:
      break;
  }
  out.price = a - b * (out.q1 + out.q2);
  out.u1 = out.q1 * (out.price - costs[0]);
  out.u2 = out.q2 * (out.price - costs[1]);
  return out;
}

std::array<double, 2> CournotUtilitiesAt(
    const CournotScenario& scn, const std::array<double, 2>& declared) {
  const std::array<double, 2> x = {std::clamp(declared[0], 0.0, scn.a),
                                   std::clamp(declared[1], 0.0, scn.a)};
  CournotOutcome o = CournotNash(scn, x);
  return {o.q1 * (o.price - scn.costs[0]), o.q2 * (o.price - scn.costs[1])};
}

double CournotProfit(const CournotScenario& scn, double cost, double own,
                     double other) {
  return own * (scn.a - scn.b * (own + other) - cost);
}

}  // namespace metagame
