#include "intersample/scenario.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

namespace fs = std::filesystem;
using namespace intersample;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;

struct Overrides {
  std::optional<double> rank_rtol;
  std::optional<double> residual_atol;
  std::optional<double> stealth_tol;
  std::optional<int> fine_steps;
  std::optional<std::int64_t> clusters;
  std::optional<std::string> t_star;
  std::uint64_t seed = 0;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--tol-rank", ov.rank_rtol, "Relative singular-value cutoff for rank decisions")
      ->envname("INTERSAMPLE_TOL_RANK");
  cmd->add_option("--tol-residual", ov.residual_atol, "Absolute residual bound for solves")
      ->envname("INTERSAMPLE_TOL_RESIDUAL");
  cmd->add_option("--stealth-tol", ov.stealth_tol, "Residual bound for the stealth verdict")
      ->envname("INTERSAMPLE_STEALTH_TOL");
  cmd->add_option("--fine-steps", ov.fine_steps, "Fine grid points per hold interval")
      ->envname("INTERSAMPLE_FINE_STEPS");
  cmd->add_option("--clusters", ov.clusters, "Number of clusters to synthesize")
      ->envname("INTERSAMPLE_CLUSTERS");
  cmd->add_option("--t-star", ov.t_star, "Disruption time: 'auto' or a fraction in (0,1]")
      ->envname("INTERSAMPLE_T_STAR");
  cmd->add_option("--seed", ov.seed, "Seed recorded in generated artifacts")
      ->envname("INTERSAMPLE_SEED");
}

void apply(const Overrides& ov, Scenario& s) {
  if (ov.rank_rtol) s.tol.rank_rtol = *ov.rank_rtol;
  if (ov.residual_atol) s.tol.residual_atol = *ov.residual_atol;
  if (ov.stealth_tol) s.stealth_tol = *ov.stealth_tol;
  if (ov.fine_steps) {
    if (*ov.fine_steps < 1 || *ov.fine_steps > 100000) {
      throw std::invalid_argument("--fine-steps must lie in [1, 100000]");
    }
    s.fine_steps_per_hold = *ov.fine_steps;
  }
  if (ov.clusters) s.clusters = *ov.clusters;
  if (ov.t_star) {
    if (*ov.t_star == "auto") {
      s.t_star.reset();
    } else {
      s.t_star = Rational::parse(*ov.t_star);
    }
  }
  s.tol.check();
}

struct Analysis {
  LtiSystem sys;
  TimingGrid design;
  LiftedCluster lifted;
  RedundancyReport report;
};

Analysis analyze_scenario(const Scenario& s) {
  LtiSystem sys = s.system();
  TimingGrid design = s.design_grid();
  LiftedCluster lifted = build_lifted(sys, design);
  std::vector<Rational> candidates;
  if (s.t_star) candidates.push_back(*s.t_star);
  RedundancyReport report = analyze_redundancy(sys, design, lifted, candidates, s.tol);
  return {std::move(sys), design, std::move(lifted), std::move(report)};
}

AttackPlan synthesize_scenario(const Scenario& s, const Analysis& a) {
  if (!a.report.feasible()) {
    std::string reasons;
    if (!a.report.kernel_nontrivial) reasons += " kernel-trivial";
    if (!a.report.disruption_reachable) reasons += " disruption-unreachable";
    if (!a.report.carryover_cancellable) reasons += " carryover-uncancellable";
    throw NoRedundancy("scenario is infeasible:" + reasons);
  }
  const DisruptionSpec spec = build_disruption_spec(a.sys, a.design, *a.report.t_star);
  return synthesize(a.sys, a.design, a.lifted, spec, s.thresholds, s.clusters, s.tol);
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ScenarioError("cannot create output directory '" + dir.string() + "'");
}

Scenario load_scenario_arg(const std::string& path) {
  return load_scenario(fs::path(path));
}

int cmd_analyze(const std::string& scenario_path, const std::string& out_dir,
                const Overrides& ov) {
  Scenario s = load_scenario_arg(scenario_path);
  apply(ov, s);
  const Analysis a = analyze_scenario(s);
  const std::string doc = report_to_json(a.report);
  std::cout << doc;
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    std::ofstream(fs::path(out_dir) / "report.json") << doc;
  }
  return a.report.feasible() ? kExitOk : kExitInfeasible;
}

int cmd_synthesize(const std::string& scenario_path, const std::string& out_dir,
                   const Overrides& ov) {
  Scenario s = load_scenario_arg(scenario_path);
  apply(ov, s);
  const Analysis a = analyze_scenario(s);
  const AttackPlan plan = synthesize_scenario(s, a);
  ensure_dir(out_dir);
  write_plan(plan, fs::path(out_dir) / "plan.json");
  std::cout << "plan: " << plan.clusters() << " clusters, " << plan.holds.size()
            << " holds, t_star = " << plan.t_star.str() << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& plan_path,
                 const std::string& out_dir, const Overrides& ov) {
  Scenario s = load_scenario_arg(scenario_path);
  apply(ov, s);
  const AttackPlan plan = load_plan(plan_path);
  const SimTrace trace = simulate(s.system(), s.true_grid(), plan, s.fine_steps_per_hold);
  ensure_dir(out_dir);
  write_trace_csv(trace, fs::path(out_dir) / "trace.csv");
  std::cout << "trace: " << trace.times.size() << " grid points over " << format_double(trace.span)
            << " s, " << trace.sampled.size() << " samples\n";
  return kExitOk;
}

int cmd_verify(const std::string& scenario_path, const std::string& plan_path,
               const std::string& trace_path, const std::string& out_dir, const Overrides& ov) {
  Scenario s = load_scenario_arg(scenario_path);
  apply(ov, s);
  const AttackPlan plan = load_plan(plan_path);
  SimTrace trace;
  if (!trace_path.empty()) {
    trace = load_trace_csv(trace_path);
  } else {
    trace = simulate(s.system(), s.true_grid(), plan, s.fine_steps_per_hold);
  }
  const VerificationReport report = verify(trace, plan, s.stealth_tol);
  const std::string doc = verification_to_json(report);
  std::cout << doc;
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    std::ofstream(fs::path(out_dir) / "verification.json") << doc;
  }
  return (report.stealthy && report.disruptive) ? kExitOk : kExitInfeasible;
}

int cmd_demo(const std::string& name, const std::string& out_dir, const Overrides& ov) {
  Scenario s = demo_scenario(name, ov.seed);
  apply(ov, s);
  const fs::path dir = out_dir.empty() ? fs::path(name + "-out") : fs::path(out_dir);
  ensure_dir(dir);
  save_scenario(s, dir / "scenario.json");

  const Analysis a = analyze_scenario(s);
  std::ofstream(dir / "report.json") << report_to_json(a.report);
  if (!a.report.feasible()) {
    std::cout << "demo " << name << ": infeasible, see " << (dir / "report.json").string() << "\n";
    return kExitInfeasible;
  }
  const AttackPlan plan = synthesize_scenario(s, a);
  write_plan(plan, dir / "plan.json");
  const SimTrace trace = simulate(a.sys, s.true_grid(), plan, s.fine_steps_per_hold);
  write_trace_csv(trace, dir / "trace.csv");
  const VerificationReport report = verify(trace, plan, s.stealth_tol);
  std::ofstream(dir / "verification.json") << verification_to_json(report);

  std::cout << "demo " << name << ": stealthy=" << (report.stealthy ? "true" : "false")
            << " disruptive=" << (report.disruptive ? "true" : "false")
            << " max_sampled_residual=" << format_double(report.max_sampled_residual) << "\n"
            << "artifacts in " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stealthy hold-injection analysis for multirate sampled-data control loops"};
  app.require_subcommand(1);

  std::string scenario_path, plan_path, trace_path, out_dir, demo_name;
  Overrides ov;

  CLI::App* analyze = app.add_subcommand("analyze", "Check attack feasibility for a scenario");
  analyze->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required()
      ->envname("INTERSAMPLE_SCENARIO");
  analyze->add_option("--out", out_dir, "Directory for report.json")->envname("INTERSAMPLE_OUT");
  add_override_flags(analyze, ov);

  CLI::App* synthesize = app.add_subcommand("synthesize", "Construct the hold sequence offline");
  synthesize->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required()
      ->envname("INTERSAMPLE_SCENARIO");
  synthesize->add_option("--out", out_dir, "Directory for plan.json and plan.csv")
      ->envname("INTERSAMPLE_OUT");
  add_override_flags(synthesize, ov);

  CLI::App* simulate = app.add_subcommand("simulate", "Run the exact continuous-time simulation");
  simulate->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required()
      ->envname("INTERSAMPLE_SCENARIO");
  simulate->add_option("--plan", plan_path, "Plan JSON file")->required();
  simulate->add_option("--out", out_dir, "Directory for trace.csv")->envname("INTERSAMPLE_OUT");
  add_override_flags(simulate, ov);

  CLI::App* verify = app.add_subcommand("verify", "Evaluate the stealth and disruption verdicts");
  verify->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required()
      ->envname("INTERSAMPLE_SCENARIO");
  verify->add_option("--plan", plan_path, "Plan JSON file")->required();
  verify->add_option("--trace", trace_path, "Trace CSV (simulated fresh when omitted)");
  verify->add_option("--out", out_dir, "Directory for verification.json")
      ->envname("INTERSAMPLE_OUT");
  add_override_flags(verify, ov);

  CLI::App* demo = app.add_subcommand("demo", "Run a built-in scenario end to end");
  std::string names;
  for (const std::string& d : intersample::demo_names()) names += " " + d;
  demo->add_option("name", demo_name, "One of:" + names)->required();
  demo->add_option("--out", out_dir, "Output directory (default <name>-out)")
      ->envname("INTERSAMPLE_OUT");
  add_override_flags(demo, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(scenario_path, out_dir, ov);
    if (app.got_subcommand(synthesize)) return cmd_synthesize(scenario_path, out_dir, ov);
    if (app.got_subcommand(simulate)) return cmd_simulate(scenario_path, plan_path, out_dir, ov);
    if (app.got_subcommand(verify)) {
      return cmd_verify(scenario_path, plan_path, trace_path, out_dir, ov);
    }
    if (app.got_subcommand(demo)) return cmd_demo(demo_name, out_dir, ov);
  } catch (const NoRedundancy& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InfeasibleDirection& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const RankDeficientBd& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InconsistentSystem& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
