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

#ifndef METAGAME_JSON_IO_H_
#define METAGAME_JSON_IO_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "metagame/agents.h"
#include "metagame/cournot.h"
#include "metagame/dynamics.h"
#include "metagame/equilibrium.h"
#include "metagame/game.h"
#include "metagame/metagame.h"

namespace metagame {

using Json = nlohmann::json;

// Numbers may be given as JSON numbers or as "p/q" strings.
double ParseNumber(const Json& j);
Matrix MatrixFromJson(const Json& j);
Json MatrixToJson(const Matrix& m);

// {"rows": m, "cols": n, "u1": [[...]], "u2": [[...]]}
BimatrixGame GameFromJson(const Json& j);
Json GameToJson(const BimatrixGame& g);

// Game JSON plus {"free_cells": {"row": ["A"], "col": ["C"]},
// "truth": {"row": [...], "col": [...]}, "bounds": {"row": [[lo, hi]], ...}}.
// Truth values overwrite the corresponding base cells.
ParamGame2x2 FamilyFromJson(const Json& j);
Json FamilyToJson(const ParamGame2x2& f);

JointDistribution DistributionFromJson(const Json& j);
Json DistributionToJson(const JointDistribution& d);

// {"algo": "mw"|"ftpl"|"rm"|"ogd"|"schedule"|"oscillate", "eta", "scale",
//  "step", "alpha", "dist", "dist2"}
AgentSpec AgentSpecFromJson(const Json& j);
Json AgentSpecToJson(const AgentSpec& s);

// {"a": .., "b": .., "costs": [c1, c2]}
CournotScenario CournotFromJson(const Json& j);
Json CournotToJson(const CournotScenario& c);
Json CournotOutcomeToJson(const CournotOutcome& o);

// {"family": family-or-{"type": "cournot", "a", "b"}, "truth": ...,
//  "grids": {"row": [{"lo", "hi", "points"}], "col": [...]},
//  "mode": "analytic"|"simulated",
//  "simulation": {"agents": [spec, spec], "horizon": T, "seeds": [..]}}
MetaGameScenario ScenarioFromJson(const Json& j);
Json ScenarioToJson(const MetaGameScenario& s);

// Seeds from a list, a single number or an "a..b" range string.
std::vector<uint64_t> SeedsFromJson(const Json& j);
std::vector<uint64_t> ParseSeedRange(const std::string& s);

Json ProfileToJson(const MixedProfile& p);
Json EliminationTraceToJson(const EliminationTrace& t);
Json StackelbergToJson(const StackelbergOutcome& s);
Json ReportToJson(const MetaEquilibriumReport& r);
Json ManipulationToJson(const ManipulationReport& r);
Json CertificateToJson(const Certificate& c);
Json CheckToJson(const CheckResult& c);

// Final distribution, regrets, payoffs and checkpoint count.
Json TraceSummaryToJson(const DynamicsTrace& t);

// Columns t, cell_<r><c>..., regret_1, regret_2, payoff_1, payoff_2 with
// round-trip exact number formatting.
std::string TraceToCsv(const DynamicsTrace& t);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable ParseCsv(const std::string& text);
// Formats a table with the same round-trip number formatting.
std::string CsvToString(const CsvTable& table);
std::string FormatNumber(double x);

}  // namespace metagame

#endif  // METAGAME_JSON_IO_H_
