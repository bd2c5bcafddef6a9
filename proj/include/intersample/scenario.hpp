#pragma once

#include "intersample/feasibility.hpp"
#include "intersample/sim.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace intersample {

/// A scenario file is malformed; the message names the offending field.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One self-contained problem instance: model, timing, thresholds, horizon,
/// tolerances, and an optional true timing that overrides the design timing
/// during simulation.
struct Scenario {
  std::string name = "scenario";
  Matrix A, B, C;

  double hold_period = 1.0;
  double sample_period = 1.0;
  double offset = 0.0;
  std::int64_t max_denominator = 1000;

  ThresholdSpec thresholds = ThresholdSpec::linear(1.0);
  std::optional<Rational> t_star;  ///< nullopt: select automatically
  std::int64_t clusters = 10;

  Tolerances tol;
  double stealth_tol = 1e-8;
  int fine_steps_per_hold = 20;

  struct Mismatch {
    double hold_period = 1.0;
    double sample_period = 1.0;
    double offset = 0.0;
    std::int64_t max_denominator = 10000;
  };
  std::optional<Mismatch> mismatch;

  LtiSystem system() const { return LtiSystem(A, B, C); }
  TimingGrid design_grid() const {
    return TimingGrid::make(hold_period, sample_period, offset, max_denominator);
  }
  /// Mismatch timing when present, design timing otherwise.
  TimingGrid true_grid() const;
};

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& s);

/// Built-in demo scenarios: "sec4a", "sec4c", "sec4c-mismatch", "x38-shape".
/// The seed regenerates the synthetic entries of "x38-shape" (0 keeps the
/// built-in instance); the other demos are fixed models and ignore it.
Scenario demo_scenario(const std::string& name, std::uint64_t seed = 0);
std::vector<std::string> demo_names();

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

std::string report_to_json(const RedundancyReport& report);
std::string verification_to_json(const VerificationReport& report);

/// Plan files: a JSON document with the synthesis metadata plus a sibling CSV
/// (referenced by name inside the JSON) holding the flattened sequence with
/// columns i, t_start, a_1..a_p. Rewriting the same plan is byte-identical.
void write_plan(const AttackPlan& plan, const std::filesystem::path& json_path);
AttackPlan load_plan(const std::filesystem::path& json_path);

/// Trace CSV columns: t, x_1..x_n, y_1..y_q, is_sensing, is_actuation,
/// is_disruption.
void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path);

/// Rebuilds the sampled-output and disruption lists from the flag columns.
/// The reloaded trace carries no propagation context (probing unavailable);
/// thresholds for the disruption samples come from the plan at verify time.
SimTrace load_trace_csv(const std::filesystem::path& path);

}  // namespace intersample
