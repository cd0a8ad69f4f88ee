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

// Command-line harness: simulate, equilibrium, metagame, oscillate, scaling.
// Exit status 0 on success, 2 when a --check assertion fails, 1 on errors.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "metagame/agents.h"
#include "metagame/cournot.h"
#include "metagame/dynamics.h"
#include "metagame/equilibrium.h"
#include "metagame/experiments.h"
#include "metagame/game.h"
#include "metagame/json_io.h"
#include "metagame/metagame.h"
#include "metagame/parallel.h"
#include "metagame/svg.h"

namespace fs = std::filesystem;
using metagame::Json;

namespace {

struct Flags {
  std::string scenario;
  std::string seeds;
  int64_t horizon = 0;
  std::string out = "out";
  std::string format = "csv,json,svg";
  bool check = false;
  int threads = 0;
};

class Outputs {
 public:
  explicit Outputs(const Flags& flags) : dir_(flags.out) {
    std::stringstream ss(flags.format);
    std::string f;
    while (std::getline(ss, f, ',')) {
      if (f != "csv" && f != "json" && f != "svg") {
        throw metagame::InvalidSpec("unknown output format '" + f + "'");
      }
      formats_.insert(f);
    }
    fs::create_directories(dir_);
  }
  bool Wants(const std::string& f) const { return formats_.count(f) > 0; }
  void Write(const std::string& name, const std::string& content) const {
    const fs::path path = dir_ / name;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << content;
    if (!os) throw std::runtime_error("failed writing " + path.string());
    std::cout << "wrote " << path.string() << "\n";
  }
  void WriteJson(const std::string& name, const Json& j) const {
    if (Wants("json")) Write(name, j.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::set<std::string> formats_;
};

Json LoadJson(const std::string& path) {
  if (path.empty()) throw metagame::InvalidSpec("--scenario is required");
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read scenario " + path);
  try {
    return Json::parse(is);
  } catch (const Json::exception& e) {
    throw metagame::InvalidSpec(path + ": " + e.what());
  }
}

std::vector<uint64_t> Seeds(const Flags& flags, const Json& cfg) {
  if (!flags.seeds.empty()) return metagame::ParseSeedRange(flags.seeds);
  if (cfg.contains("seeds")) return metagame::SeedsFromJson(cfg.at("seeds"));
  return {1};
}

int64_t Horizon(const Flags& flags, const Json& cfg, int64_t fallback) {
  if (flags.horizon > 0) return flags.horizon;
  return cfg.value("horizon", fallback);
}

// {"row": [...], "col": [...]}
metagame::DeclarationProfile LoadDeclarations(const Json& j) {
  metagame::DeclarationProfile decls;
  const char* keys[2] = {"row", "col"};
  for (int i = 0; i < 2; ++i) {
    for (const Json& x : j.at(keys[i])) {
      decls[i].push_back(metagame::ParseNumber(x));
    }
  }
  return decls;
}

metagame::BimatrixGame LoadGame(const Json& cfg) {
  if (cfg.contains("game")) return metagame::GameFromJson(cfg.at("game"));
  if (cfg.contains("family")) {
    metagame::ParamGame2x2 family = metagame::FamilyFromJson(cfg.at("family"));
    if (!cfg.contains("declarations")) return family.base();
    return family.Instantiate(LoadDeclarations(cfg.at("declarations")));
  }
  throw metagame::InvalidSpec("scenario needs 'game' or 'family'");
}

metagame::AgentSpecs LoadAgents(const Json& cfg) {
  const Json& a = cfg.at("agents");
  if (!a.is_array() || a.size() != 2) {
    throw metagame::InvalidSpec("'agents' must list two agent specs");
  }
  return {metagame::AgentSpecFromJson(a[0]), metagame::AgentSpecFromJson(a[1])};
}

int Finish(bool check, bool passed) {
  if (!check) return 0;
  std::cout << (passed ? "CHECK PASS" : "CHECK FAIL") << "\n";
  return passed ? 0 : 2;
}

int CmdSimulateCournot(const Flags& flags, const Json& cfg) {
  Outputs out(flags);
  const metagame::CournotScenario scn =
      metagame::CournotFromJson(cfg.at("cournot"));
  const std::array<double, 2> declared = {
      metagame::ParseNumber(cfg.at("declared").at(0)),
      metagame::ParseNumber(cfg.at("declared").at(1))};
  const metagame::AgentSpecs agents = LoadAgents(cfg);
  const int64_t horizon = Horizon(flags, cfg, 100000);
  const std::vector<uint64_t> seeds = Seeds(flags, cfg);
  metagame::CournotDynamicsOptions opts;
  opts.grid_points = cfg.value("grid_points", 201);
  std::vector<metagame::CournotTrace> traces(seeds.size());
  metagame::ParallelFor(static_cast<int>(seeds.size()), [&](int i) {
    traces[i] = metagame::RunCournotDynamics(scn, declared, agents, horizon,
                                             seeds[i], opts);
  }, flags.threads);
  const metagame::CournotOutcome ne = metagame::CournotNash(scn, declared);
  const double tol = cfg.value("tolerance", 0.05);
  bool passed = true;
  Json runs = Json::array();
  metagame::CsvTable table;
  table.header = {"seed", "mean_q1", "mean_q2", "regret_1", "regret_2"};
  for (const auto& t : traces) {
    bool ok = true;
    const double ref[2] = {ne.q1, ne.q2};
    for (int i = 0; i < 2; ++i) {
      const double err = std::abs(t.mean_quantity[i] - ref[i]);
      ok = ok && (ref[i] > 0 ? err <= tol * ref[i] : err <= tol);
    }
    passed = passed && ok;
    runs.push_back({{"seed", t.seed},
                    {"mean_quantity", t.mean_quantity},
                    {"regret", t.regret},
                    {"true_cost_profit", t.MeanProfit(scn.costs)},
                    {"within_tolerance", ok}});
    table.rows.push_back({static_cast<double>(t.seed), t.mean_quantity[0],
                          t.mean_quantity[1], t.regret[0], t.regret[1]});
  }
  out.WriteJson("summary.json", {{"declared", declared},
                                 {"nash", metagame::CournotOutcomeToJson(ne)},
                                 {"horizon", horizon},
                                 {"runs", runs}});
  if (out.Wants("csv")) out.Write("cournot.csv", metagame::CsvToString(table));
  if (out.Wants("svg") && !traces.empty()) {
    metagame::Series s1{"mean q1", {}}, s2{"mean q2", {}};
    for (const auto& cp : traces[0].checkpoints) {
      s1.points.push_back({static_cast<double>(cp.t), cp.mean_quantity[0]});
      s2.points.push_back({static_cast<double>(cp.t), cp.mean_quantity[1]});
    }
    out.Write("quantities.svg",
              metagame::LineChart({s1, s2}, {"Time-average quantities", "t",
                                             "quantity", true}));
  }
  return Finish(flags.check, passed);
}

int CmdSimulate(const Flags& flags) {
  const Json cfg = LoadJson(flags.scenario);
  if (cfg.contains("cournot")) return CmdSimulateCournot(flags, cfg);
  Outputs out(flags);
  const metagame::BimatrixGame game = LoadGame(cfg);
  const metagame::AgentSpecs agents = LoadAgents(cfg);
  const int64_t horizon = Horizon(flags, cfg, 50000);
  const std::vector<uint64_t> seeds = Seeds(flags, cfg);
  std::optional<metagame::JointDistribution> reference;
  if (cfg.contains("reference")) {
    reference = metagame::DistributionFromJson(cfg.at("reference"));
  } else {
    reference = metagame::UniqueCce(game);
  }
  const std::vector<metagame::DynamicsTrace> traces =
      metagame::RunEnsemble(game, agents, horizon, seeds, {}, flags.threads);

  const Json chk = cfg.value("check", Json::object());
  const double cell_tol = chk.value("cell_tolerance", 0.02);
  const double regret_tol = chk.value("max_regret_per_round", 0.05);
  const int min_pass = chk.value("min_pass_seeds",
                                 static_cast<int>(seeds.size()));
  int cell_pass = 0;
  bool regret_ok = true;
  Json runs = Json::array();
  for (const auto& t : traces) {
    Json s = metagame::TraceSummaryToJson(t);
    if (reference) {
      const auto& f = t.FinalDistribution();
      double worst = 0;
      for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c)
          worst = std::max(worst, std::abs(f(r, c) - (*reference)(r, c)));
      s["max_cell_error"] = worst;
      if (worst <= cell_tol) ++cell_pass;
      bool positive = true;
      for (double x : reference->probs().data()) positive = positive && x > 0;
      if (positive) s["mape"] = metagame::Mape(f, *reference);
    }
    for (int i = 0; i < 2; ++i) {
      regret_ok = regret_ok && t.Final().regret[i] / t.Final().t <= regret_tol;
    }
    runs.push_back(s);
    if (out.Wants("csv")) {
      out.Write("trace_seed" + std::to_string(t.seed) + ".csv",
                metagame::TraceToCsv(t));
    }
  }
  Json summary = {{"game", metagame::GameToJson(game)},
                  {"agents",
                   {metagame::AgentSpecToJson(agents[0]),
                    metagame::AgentSpecToJson(agents[1])}},
                  {"horizon", horizon},
                  {"runs", runs}};
  if (reference) {
    summary["reference"] = metagame::DistributionToJson(*reference);
    summary["seeds_within_cell_tolerance"] = cell_pass;
  }
  out.WriteJson("summary.json", summary);
  if (out.Wants("svg") && !traces.empty() && game.Is2x2()) {
    const auto& t = traces[0];
    metagame::Series p{"p (row top)", {}}, q{"q (column left)", {}};
    metagame::Series path{"(p, q)", {}};
    for (const auto& cp : t.checkpoints) {
      if (cp.policy[0].empty()) continue;
      p.points.push_back({static_cast<double>(cp.t), cp.policy[0][0]});
      q.points.push_back({static_cast<double>(cp.t), cp.policy[1][0]});
      path.points.push_back({cp.policy[0][0], cp.policy[1][0]});
    }
    out.Write("strategies.svg",
              metagame::LineChart({p, q}, {"Mixed strategies", "t",
                                           "probability", true}));
    out.Write("pq_path.svg",
              metagame::LineChart({path}, {"Strategy path", "p", "q"}));
  }
  const bool passed =
      regret_ok && (!reference || cell_pass >= min_pass);
  return Finish(flags.check, passed);
}

int CmdEquilibrium(const Flags& flags) {
  const Json cfg = LoadJson(flags.scenario);
  Outputs out(flags);
  Json result;
  if (cfg.contains("cournot")) {
    const metagame::CournotScenario scn =
        metagame::CournotFromJson(cfg.at("cournot"));
    std::array<double, 2> costs = scn.costs;
    if (cfg.contains("declared")) {
      costs = {metagame::ParseNumber(cfg.at("declared").at(0)),
               metagame::ParseNumber(cfg.at("declared").at(1))};
    }
    result["cournot"] = metagame::CournotOutcomeToJson(
        metagame::CournotNash(scn, costs));
    result["true_cost_utilities"] = metagame::CournotUtilitiesAt(scn, costs);
  } else {
    const metagame::BimatrixGame game = LoadGame(cfg);
    result["game"] = metagame::GameToJson(game);
    Json pure = Json::array();
    for (const auto& a : metagame::PureNash(game)) {
      pure.push_back({{"row", a.row}, {"col", a.col},
                      {"u1", game.u1()(a.row, a.col)},
                      {"u2", game.u2()(a.row, a.col)}});
    }
    result["pure_nash"] = pure;
    if (game.Is2x2()) {
      try {
        auto ne = metagame::MixedNash2x2(game);
        if (ne) {
          result["mixed_nash"] = metagame::ProfileToJson(*ne);
          result["mixed_nash_utilities"] =
              metagame::ExpectedUtilities2x2(game, *ne);
        } else {
          result["mixed_nash"] = nullptr;
        }
      } catch (const metagame::DegenerateGameError& e) {
        result["mixed_nash"] = std::string("degenerate: ") + e.what();
      }
      result["opposing_interests"] = metagame::IsOpposingInterests(game);
    }
    result["elimination"] =
        metagame::EliminationTraceToJson(metagame::IteratedElimination(game));
    result["stackelberg"] = {
        {"row_leader", metagame::StackelbergToJson(metagame::Stackelberg(
                           game, metagame::Player::kRow))},
        {"column_leader", metagame::StackelbergToJson(metagame::Stackelberg(
                              game, metagame::Player::kColumn))}};
    if (auto cce = metagame::UniqueCce(game)) {
      result["unique_cce"] = metagame::DistributionToJson(*cce);
    }
  }
  out.WriteJson("equilibrium.json", result);
  std::cout << result.dump(2) << "\n";
  return 0;
}

int CmdMetagame(const Flags& flags) {
  const Json cfg = LoadJson(flags.scenario);
  Outputs out(flags);
  metagame::MetaGameScenario scn = metagame::ScenarioFromJson(cfg);
  if (scn.simulation()) {
    auto sim = *scn.simulation();
    if (flags.horizon > 0) sim.horizon = flags.horizon;
    if (!flags.seeds.empty()) sim.seeds = metagame::ParseSeedRange(flags.seeds);
    sim.threads = flags.threads;
    scn.set_simulation(sim);
  }
  Json result;
  result["scenario"] = metagame::ScenarioToJson(scn);
  result["truthful_utilities"] = metagame::MetaUtility(scn, scn.Truth());
  const double eps = cfg.value("epsilon", 1e-3);
  result["manipulation"] =
      metagame::ManipulationToJson(metagame::ManipulationFree(scn, eps));
  metagame::MetaEquilibriumReport report;
  if (scn.is_cournot() && scn.analytic()) {
    report = metagame::CournotMetaEquilibrium(scn);
  } else if (!scn.is_cournot() && scn.analytic() &&
             metagame::IsOpposingInterests(scn.family().base()) &&
             metagame::ValidateNaturalSpace(scn.family()).natural) {
    report = metagame::OpposingInterestsMetaEquilibrium(scn);
  } else {
    report = metagame::IteratedBestResponse(scn, cfg.value("max_iterations", 500));
  }
  result["equilibrium"] = metagame::ReportToJson(report);
  bool passed = true;
  if (cfg.contains("declarations")) {
    const metagame::DeclarationProfile decls =
        LoadDeclarations(cfg.at("declarations"));
    const metagame::Certificate cert = metagame::EpsilonCertificate(scn, decls);
    result["certificate"] = metagame::CertificateToJson(cert);
    passed = cert.Holds(cfg.value("certificate_epsilon", 0.05));
  }
  out.WriteJson("report.json", result);
  std::cout << result.dump(2) << "\n";
  return Finish(flags.check, passed);
}

int CmdOscillate(const Flags& flags) {
  const Json cfg = LoadJson(flags.scenario);
  Outputs out(flags);
  const metagame::BimatrixGame game = LoadGame(cfg);
  const auto d1 = metagame::DistributionFromJson(cfg.at("dist1"));
  const auto d2 = metagame::DistributionFromJson(cfg.at("dist2"));
  const double eps = cfg.value("epsilon", 0.1);
  const metagame::OscillationReport rep =
      metagame::RunOscillation(game, d1, d2, eps, cfg.value("phases", 3));
  bool passed = !rep.self_convergence.pass &&
                rep.single_schedule_self_convergence.pass;
  Json phases = Json::array();
  metagame::CsvTable table;
  table.header = {"phase", "end", "active", "distance_active",
                  "distance_other", "regret_per_round_1",
                  "regret_per_round_2"};
  for (const auto& p : rep.phases) {
    passed = passed && p.distance_active < eps &&
             p.regret_per_round[0] <= eps && p.regret_per_round[1] <= eps;
    phases.push_back({{"phase", p.phase},
                      {"end", p.end},
                      {"active", p.active},
                      {"distance_active", p.distance_active},
                      {"distance_other", p.distance_other},
                      {"regret_per_round", p.regret_per_round}});
    table.rows.push_back({static_cast<double>(p.phase),
                          static_cast<double>(p.end),
                          static_cast<double>(p.active), p.distance_active,
                          p.distance_other, p.regret_per_round[0],
                          p.regret_per_round[1]});
  }
  out.WriteJson("oscillation.json",
                {{"alpha", rep.alpha},
                 {"phase_lengths", rep.phase_lengths},
                 {"phases", phases},
                 {"self_convergence", metagame::CheckToJson(rep.self_convergence)},
                 {"single_schedule_self_convergence",
                  metagame::CheckToJson(rep.single_schedule_self_convergence)}});
  if (out.Wants("csv")) out.Write("phases.csv", metagame::CsvToString(table));
  if (out.Wants("svg")) {
    metagame::Series s1{"L1 to dist1", {}}, s2{"L1 to dist2", {}};
    for (const auto& cp : rep.trace.checkpoints) {
      s1.points.push_back({static_cast<double>(cp.t), cp.empirical.L1Distance(d1)});
      s2.points.push_back({static_cast<double>(cp.t), cp.empirical.L1Distance(d2)});
    }
    out.Write("oscillation.svg",
              metagame::LineChart({s1, s2}, {"Empirical distribution vs CCEs",
                                             "t", "L1 distance", true}));
  }
  for (const auto& p : rep.phases) {
    std::cout << "phase " << p.phase << " end=" << p.end << " active=dist"
              << p.active << " L1=" << p.distance_active << "\n";
  }
  std::cout << "self-convergence: " << rep.self_convergence.detail << "\n";
  return Finish(flags.check, passed);
}

int CmdScaling(const Flags& flags) {
  const Json cfg = LoadJson(flags.scenario);
  Outputs out(flags);
  const metagame::BimatrixGame game = LoadGame(cfg);
  const metagame::AgentSpecs agents = LoadAgents(cfg);
  std::vector<int64_t> horizons =
      cfg.value("horizons", std::vector<int64_t>{10000, 20000, 50000, 100000});
  if (flags.horizon > 0) horizons = {flags.horizon};
  const std::vector<uint64_t> seeds = Seeds(flags, cfg);
  std::optional<metagame::JointDistribution> reference;
  if (cfg.contains("reference")) {
    reference = metagame::DistributionFromJson(cfg.at("reference"));
  } else {
    reference = metagame::UniqueCce(game);
  }
  if (!reference) {
    throw metagame::InvalidSpec("scaling needs a reference distribution");
  }
  const auto rows = metagame::MapeScaling(game, agents, horizons, seeds,
                                          *reference, flags.threads);
  metagame::CsvTable table;
  table.header = {"T", "mean_mape", "std_mape", "seeds", "bound"};
  metagame::Series mean{"mean MAPE", {}}, bound{"4/sqrt(T)", {}};
  for (const auto& r : rows) {
    table.rows.push_back({static_cast<double>(r.horizon), r.mean_mape,
                          r.std_mape, static_cast<double>(r.seeds), r.bound});
    mean.points.push_back({static_cast<double>(r.horizon), r.mean_mape});
    bound.points.push_back({static_cast<double>(r.horizon), r.bound});
    std::cout << "T=" << r.horizon << " mean MAPE=" << r.mean_mape
              << " std=" << r.std_mape << " bound=" << r.bound << "\n";
  }
  if (out.Wants("csv")) out.Write("scaling.csv", metagame::CsvToString(table));
  if (out.Wants("json")) {
    Json j = Json::array();
    for (const auto& r : rows) {
      j.push_back({{"T", r.horizon}, {"mean_mape", r.mean_mape},
                   {"std_mape", r.std_mape}, {"seeds", r.seeds},
                   {"bound", r.bound}});
    }
    out.WriteJson("scaling.json", {{"rows", j},
                                   {"passes", metagame::ScalingPasses(rows)}});
  }
  if (out.Wants("svg")) {
    out.Write("scaling.svg",
              metagame::LineChart({mean, bound}, {"MAPE vs horizon", "T",
                                                  "MAPE", true}));
  }
  return Finish(flags.check, metagame::ScalingPasses(rows));
}

void AddCommonFlags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--scenario", flags.scenario, "Scenario JSON file")
      ->required();
  cmd->add_option("--seeds", flags.seeds, "Seed or range a..b");
  cmd->add_option("--horizon", flags.horizon, "Number of rounds T");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--format", flags.format, "Comma list of csv,json,svg");
  cmd->add_flag("--check", flags.check, "Exit 2 when acceptance checks fail");
  cmd->add_option("--threads", flags.threads,
                  "Worker threads (default METAGAME_THREADS or all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repeated games of learning agents and their users' meta-game"};
  app.require_subcommand(1);
  Flags flags;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Flags&);
  };
  const Command commands[] = {
      {"simulate", "Run agent dynamics and export traces", CmdSimulate},
      {"equilibrium", "Solve the game's equilibria", CmdEquilibrium},
      {"metagame", "Analyze the users' declaration game", CmdMetagame},
      {"oscillate", "Run oscillating schedule dynamics", CmdOscillate},
      {"scaling", "MAPE against the horizon", CmdScaling},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    AddCommonFlags(sub, flags);
    subs.push_back({sub, &c});
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    for (auto& [sub, cmd] : subs) {
      if (sub->parsed()) return cmd->run(flags);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
