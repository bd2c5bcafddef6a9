#pragma once

#include "intersample/synthesis.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace intersample {

struct SampledOutput {
  std::int64_t j = 0;  ///< 1-based sample index
  double t = 0.0;
  Vector y;
};

struct DisruptionSample {
  std::int64_t k = 0;  ///< 1-based cluster index
  double t = 0.0;
  double state_norm = 0.0;
};

/// Error-state trajectory on the union of actuation instants, sample
/// instants, the plan's disruption instants, and a uniform fine grid inside
/// each hold. Propagation is closed-form on every subinterval of constant
/// input, so values carry no integration error and do not move when the fine
/// grid is refined.
struct SimTrace {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> outputs;
  std::vector<std::uint8_t> sensing_flag;
  std::vector<std::uint8_t> actuation_flag;
  std::vector<std::uint8_t> disruption_flag;
  std::vector<std::int64_t> hold_index;  ///< hold active on [t_i, t_{i+1}); -1 past the plan

  std::vector<SampledOutput> sampled;
  std::vector<DisruptionSample> disruption_samples;

  // propagation context for probing between grid points
  Matrix A, B, C;
  std::vector<Vector> holds;
  double span = 0.0;

  /// Index of the grid point at time t (within a relative 1e-9 window).
  std::optional<Index> index_at(double t) const;
};

/// Simulates the error dynamics x' = A x + B a(t) from x(0) = 0 with the
/// plan's holds placed at grid_true's actuation instants and the output
/// sampled on grid_true's shifted sample schedule. grid_true may differ from
/// the plan's design grid (timing-mismatch experiments).
SimTrace simulate(const LtiSystem& sys, const TimingGrid& grid_true, const AttackPlan& plan,
                  int fine_steps_per_hold = 20);

struct VerificationReport {
  bool stealthy = false;
  bool disruptive = false;
  double max_sampled_residual = 0.0;
  double stealth_tol = 0.0;
  std::vector<double> margins;  ///< state norm at t_k minus H_k, per cluster
  std::optional<std::int64_t> first_detection_sample;
};

/// Checks the trace against the two defining properties: every sampled
/// output residual within stealth_tol, and the state norm at each disruption
/// instant at least the cluster's threshold (up to a relative 1e-9 slack;
/// the first cluster meets its threshold with equality by construction).
VerificationReport verify(const SimTrace& trace, const AttackPlan& plan,
                          double stealth_tol = 1e-8);

/// Output values at arbitrary instants inside the simulated span, propagated
/// exactly from the nearest earlier grid point. Models an inspector sampling
/// off the periodic schedule.
std::vector<Vector> probe_outputs(const SimTrace& trace, const std::vector<double>& probe_times);

}  // namespace intersample
