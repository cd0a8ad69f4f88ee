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

#include "metagame/json_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace metagame {

namespace {

const Json& Require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidSpec(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T Get(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(std::string("field '") + key + "': " + e.what());
  }
}

double NumberOr(const Json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return ParseNumber(j.at(key));
}

Json Number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

double ParseNumber(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    const size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      const double num = std::stod(s.substr(0, slash));
      const double den = std::stod(s.substr(slash + 1));
      if (den == 0) throw InvalidSpec("zero denominator in '" + s + "'");
      return num / den;
    } catch (const std::logic_error&) {
      throw InvalidSpec("cannot parse number '" + s + "'");
    }
  }
  throw InvalidSpec("expected a number, got " + j.dump());
}

Matrix MatrixFromJson(const Json& j) {
  if (!j.is_array()) throw InvalidSpec("matrix must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const Json& r : j) {
    if (!r.is_array()) throw InvalidSpec("matrix row must be an array");
    std::vector<double> row;
    for (const Json& x : r) row.push_back(ParseNumber(x));
    rows.push_back(std::move(row));
  }
  return Matrix::FromRows(rows);
}

Json MatrixToJson(const Matrix& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

BimatrixGame GameFromJson(const Json& j) {
  Matrix u1 = MatrixFromJson(Require(j, "u1"));
  Matrix u2 = MatrixFromJson(Require(j, "u2"));
  const int rows = Get<int>(j, "rows", u1.rows());
  const int cols = Get<int>(j, "cols", u1.cols());
  if (rows != u1.rows() || cols != u1.cols()) {
    throw DimensionMismatch("declared rows/cols do not match u1");
  }
  return BimatrixGame(std::move(u1), std::move(u2));
}

Json GameToJson(const BimatrixGame& g) {
  return {{"rows", g.rows()},
          {"cols", g.cols()},
          {"u1", MatrixToJson(g.u1())},
          {"u2", MatrixToJson(g.u2())}};
}

ParamGame2x2 FamilyFromJson(const Json& j) {
  BimatrixGame base = GameFromJson(j);
  Matrix u[2] = {base.u1(), base.u2()};
  std::vector<FreeCell> cells[2];
  const Json free = j.value("free_cells", Json::object());
  const Json truth = j.value("truth", Json::object());
  const Json bounds = j.value("bounds", Json::object());
  const char* keys[2] = {"row", "col"};
  for (int i = 0; i < 2; ++i) {
    if (!free.contains(keys[i])) continue;
    const Json& names = free.at(keys[i]);
    for (size_t k = 0; k < names.size(); ++k) {
      FreeCell fc{CellFromName(names[k].get<std::string>()), {}};
      if (bounds.contains(keys[i])) {
        const Json& b = bounds.at(keys[i]).at(k);
        fc.bounds = {ParseNumber(b.at(0)), ParseNumber(b.at(1))};
      }
      if (truth.contains(keys[i])) {
        u[i](CellRow(fc.cell), CellCol(fc.cell)) =
            ParseNumber(truth.at(keys[i]).at(k));
      }
      cells[i].push_back(fc);
    }
  }
  return ParamGame2x2(BimatrixGame(u[0], u[1]), cells[0], cells[1]);
}

Json FamilyToJson(const ParamGame2x2& f) {
  Json out = GameToJson(f.base());
  const char* keys[2] = {"row", "col"};
  for (Player p : {Player::kRow, Player::kColumn}) {
    Json names = Json::array(), bounds = Json::array();
    for (const FreeCell& fc : f.free_cells(p)) {
      names.push_back(CellName(fc.cell));
      bounds.push_back({Number(fc.bounds.lo), Number(fc.bounds.hi)});
    }
    out["free_cells"][keys[Index(p)]] = names;
    out["bounds"][keys[Index(p)]] = bounds;
    out["truth"][keys[Index(p)]] = f.Truth(p);
  }
  return out;
}

JointDistribution DistributionFromJson(const Json& j) {
  return JointDistribution(MatrixFromJson(j));
}

Json DistributionToJson(const JointDistribution& d) {
  return MatrixToJson(d.probs());
}

AgentSpec AgentSpecFromJson(const Json& j) {
  AgentSpec s;
  s.algo = AlgorithmFromName(Get<std::string>(j, "algo", "mw"));
  s.eta = NumberOr(j, "eta", s.eta);
  s.ftpl_scale = NumberOr(j, "scale", s.ftpl_scale);
  s.ogd_step = NumberOr(j, "step", s.ogd_step);
  s.alpha = Get<int64_t>(j, "alpha", s.alpha);
  if (j.contains("dist")) s.dist = DistributionFromJson(j.at("dist"));
  if (j.contains("dist2")) s.dist2 = DistributionFromJson(j.at("dist2"));
  s.Validate();
  return s;
}

Json AgentSpecToJson(const AgentSpec& s) {
  Json out = {{"algo", AlgorithmName(s.algo)}};
  switch (s.algo) {
    case Algorithm::kMultiplicativeWeights:
      out["eta"] = s.eta;
      break;
    case Algorithm::kFollowPerturbedLeader:
      out["scale"] = s.ftpl_scale;
      break;
    case Algorithm::kOnlineGradientDescent:
      out["step"] = s.ogd_step;
      break;
    case Algorithm::kRegretMatching:
      break;
    case Algorithm::kOscillatingSchedule:
      out["alpha"] = s.alpha;
      out["dist2"] = DistributionToJson(*s.dist2);
      [[fallthrough]];
    case Algorithm::kSchedule:
      out["dist"] = DistributionToJson(*s.dist);
      break;
  }
  return out;
}

CournotScenario CournotFromJson(const Json& j) {
  CournotScenario c;
  c.a = NumberOr(j, "a", 1.0);
  c.b = NumberOr(j, "b", 1.0);
  if (j.contains("costs")) {
    c.costs = {ParseNumber(j.at("costs").at(0)),
               ParseNumber(j.at("costs").at(1))};
  }
  c.Validate();
  return c;
}

Json CournotToJson(const CournotScenario& c) {
  return {{"type", "cournot"}, {"a", c.a}, {"b", c.b}, {"costs", c.costs}};
}

Json CournotOutcomeToJson(const CournotOutcome& o) {
  return {{"q1", o.q1},         {"q2", o.q2}, {"price", o.price},
          {"u1", o.u1},         {"u2", o.u2},
          {"region", RegionName(o.region)}};
}

std::vector<uint64_t> ParseSeedRange(const std::string& s) {
  const size_t dots = s.find("..");
  try {
    if (dots == std::string::npos) return {std::stoull(s)};
    const uint64_t a = std::stoull(s.substr(0, dots));
    const uint64_t b = std::stoull(s.substr(dots + 2));
    if (b < a) throw InvalidSpec("empty seed range '" + s + "'");
    std::vector<uint64_t> out;
    for (uint64_t x = a; x <= b; ++x) out.push_back(x);
    return out;
  } catch (const std::logic_error&) {
    throw InvalidSpec("cannot parse seed range '" + s + "'");
  }
}

std::vector<uint64_t> SeedsFromJson(const Json& j) {
  if (j.is_string()) return ParseSeedRange(j.get<std::string>());
  if (j.is_number_unsigned() || j.is_number_integer()) {
    return {j.get<uint64_t>()};
  }
  if (j.is_array()) {
    std::vector<uint64_t> out;
    for (const Json& x : j) out.push_back(x.get<uint64_t>());
    if (out.empty()) throw InvalidSpec("seed list is empty");
    return out;
  }
  throw InvalidSpec("seeds must be a list, a number or 'a..b'");
}

namespace {

GridAxis AxisFromJson(const Json& j) {
  GridAxis g;
  g.lo = ParseNumber(Require(j, "lo"));
  g.hi = ParseNumber(Require(j, "hi"));
  g.points = Get<int>(j, "points", kDefaultGridPoints);
  return g;
}

Json AxisToJson(const GridAxis& g) {
  return {{"lo", g.lo}, {"hi", g.hi}, {"points", g.points}};
}

}  // namespace

MetaGameScenario ScenarioFromJson(const Json& j) {
  const Json& fam = Require(j, "family");
  const Json grids = j.value("grids", Json::object());
  std::optional<MetaGameScenario> scn;
  if (fam.value("type", "") == "cournot") {
    Json cj = fam;
    if (j.contains("truth")) cj["costs"] = j.at("truth").at("costs");
    CournotScenario c = CournotFromJson(cj);
    std::array<GridAxis, 2> axes = {GridAxis{0.0, c.a}, GridAxis{0.0, c.a}};
    if (grids.contains("row")) axes[0] = AxisFromJson(grids.at("row").at(0));
    if (grids.contains("col")) axes[1] = AxisFromJson(grids.at("col").at(0));
    scn.emplace(c, axes);
  } else {
    Json fj = fam;
    if (j.contains("truth")) fj["truth"] = j.at("truth");
    ParamGame2x2 family = FamilyFromJson(fj);
    std::array<std::vector<GridAxis>, 2> axes;
    const char* keys[2] = {"row", "col"};
    for (int i = 0; i < 2; ++i) {
      if (!grids.contains(keys[i])) {
        throw InvalidSpec(std::string("missing grids for ") + keys[i]);
      }
      for (const Json& a : grids.at(keys[i])) axes[i].push_back(AxisFromJson(a));
    }
    scn.emplace(family, axes);
  }
  const std::string mode = j.value("mode", "analytic");
  if (mode == "simulated") {
    const Json& sj = Require(j, "simulation");
    SimulationMode sim;
    const Json& agents = Require(sj, "agents");
    if (!agents.is_array() || agents.size() != 2) {
      throw InvalidSpec("simulation needs exactly two agent specs");
    }
    sim.agents = {AgentSpecFromJson(agents[0]), AgentSpecFromJson(agents[1])};
    sim.horizon = Get<int64_t>(sj, "horizon", sim.horizon);
    if (sj.contains("seeds")) sim.seeds = SeedsFromJson(sj.at("seeds"));
    sim.cournot_grid_points =
        Get<int>(sj, "grid_points", sim.cournot_grid_points);
    scn->set_simulation(sim);
  } else if (mode != "analytic") {
    throw InvalidSpec("mode must be 'analytic' or 'simulated'");
  }
  return *scn;
}

Json ScenarioToJson(const MetaGameScenario& s) {
  Json out;
  const char* keys[2] = {"row", "col"};
  if (s.is_cournot()) {
    out["family"] = CournotToJson(s.cournot());
    out["truth"] = {{"costs", s.cournot().costs}};
  } else {
    out["family"] = FamilyToJson(s.family());
  }
  for (Player p : {Player::kRow, Player::kColumn}) {
    Json axes = Json::array();
    for (const GridAxis& g : s.grids(p)) axes.push_back(AxisToJson(g));
    out["grids"][keys[Index(p)]] = axes;
  }
  if (s.simulation()) {
    const SimulationMode& sim = *s.simulation();
    out["mode"] = "simulated";
    out["simulation"] = {
        {"agents",
         {AgentSpecToJson(sim.agents[0]), AgentSpecToJson(sim.agents[1])}},
        {"horizon", sim.horizon},
        {"seeds", sim.seeds},
        {"grid_points", sim.cournot_grid_points}};
  } else {
    out["mode"] = "analytic";
  }
  return out;
}

Json ProfileToJson(const MixedProfile& p) {
  return {{"row", p.row()}, {"col", p.col()}, {"p", p.p()}, {"q", p.q()}};
}

Json EliminationTraceToJson(const EliminationTrace& t) {
  Json steps = Json::array();
  for (const EliminationStep& s : t.steps) {
    steps.push_back({{"player", PlayerName(s.player)},
                     {"eliminated", s.eliminated},
                     {"dominator", s.dominator}});
  }
  return {{"steps", steps},
          {"surviving_rows", t.surviving_rows},
          {"surviving_cols", t.surviving_cols},
          {"dominance_solvable", t.Solved()}};
}

Json StackelbergToJson(const StackelbergOutcome& s) {
  return {{"leader_action", s.leader_action},
          {"follower_action", s.follower_action},
          {"leader_value", s.leader_value},
          {"follower_value", s.follower_value}};
}

Json ReportToJson(const MetaEquilibriumReport& r) {
  Json out = {{"declarations", {r.declarations[0], r.declarations[1]}},
              {"utilities", r.utilities},
              {"certificate", Number(r.certificate)},
              {"classification", r.classification},
              {"note", r.note}};
  if (r.induced_profile) out["induced_profile"] = ProfileToJson(*r.induced_profile);
  if (r.induced_cournot) {
    out["induced_cournot"] = CournotOutcomeToJson(*r.induced_cournot);
  }
  return out;
}

Json ManipulationToJson(const ManipulationReport& r) {
  Json out = {{"manipulation_free", r.manipulation_free},
              {"method", r.method}};
  if (r.player) {
    out["witness"] = {{"player", PlayerName(*r.player)},
                      {"declaration", r.witness},
                      {"gain", r.gain}};
  }
  return out;
}

Json CertificateToJson(const Certificate& c) {
  return {{"epsilon", Number(c.epsilon)},
          {"player", PlayerName(c.player)},
          {"witness", c.witness},
          {"utilities", c.utilities},
          {"skipped", c.skipped}};
}

Json CheckToJson(const CheckResult& c) {
  return {{"pass", c.pass}, {"value", Number(c.value)}, {"detail", c.detail}};
}

Json TraceSummaryToJson(const DynamicsTrace& t) {
  const Checkpoint& f = t.Final();
  return {{"seed", t.seed},
          {"horizon", t.horizon},
          {"final_distribution", DistributionToJson(f.empirical)},
          {"regret", f.regret},
          {"regret_per_round",
           {f.regret[0] / f.t, f.regret[1] / f.t}},
          {"average_payoff",
           {f.cumulative_payoff[0] / f.t, f.cumulative_payoff[1] / f.t}},
          {"checkpoints", t.checkpoints.size()}};
}

std::string FormatNumber(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string TraceToCsv(const DynamicsTrace& t) {
  CsvTable table;
  table.header.push_back("t");
  const int rows = t.counts.rows(), cols = t.counts.cols();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      table.header.push_back("cell_" + std::to_string(r) + std::to_string(c));
  for (const char* h : {"regret_1", "regret_2", "payoff_1", "payoff_2"}) {
    table.header.push_back(h);
  }
  for (const Checkpoint& cp : t.checkpoints) {
    std::vector<double> row = {static_cast<double>(cp.t)};
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) row.push_back(cp.empirical(r, c));
    row.insert(row.end(), {cp.regret[0], cp.regret[1], cp.cumulative_payoff[0],
                           cp.cumulative_payoff[1]});
    table.rows.push_back(std::move(row));
  }
  return CsvToString(table);
}

std::string CsvToString(const CsvTable& table) {
  std::ostringstream os;
  for (size_t k = 0; k < table.header.size(); ++k) {
    os << (k ? "," : "") << table.header[k];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (size_t k = 0; k < row.size(); ++k) {
      os << (k ? "," : "") << FormatNumber(row[k]);
    }
    os << "\n";
  }
  return os.str();
}

CsvTable ParseCsv(const std::string& text) {
  CsvTable table;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (first) {
      table.header = fields;
      first = false;
      continue;
    }
    std::vector<double> row;
    for (const std::string& f : fields) {
      double v = 0;
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc()) throw InvalidSpec("bad CSV number '" + f + "'");
      row.push_back(v);
    }
    if (row.size() != table.header.size()) {
      throw InvalidSpec("CSV row width does not match header");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace metagame
