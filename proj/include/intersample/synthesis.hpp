#pragma once

#include "intersample/lifting.hpp"

#include <cstdint>
#include <vector>

namespace intersample {

/// Per-cluster damage thresholds H_k > 0 (state-norm units).
struct ThresholdSpec {
  enum class Kind { Linear, Constant, Explicit };

  Kind kind = Kind::Linear;
  double scale = 1.0;          ///< Linear: H_k = scale * k; Constant: H_k = scale
  std::vector<double> values;  ///< Explicit list, k = 1..values.size()

  static ThresholdSpec linear(double scale);
  static ThresholdSpec constant(double value);
  static ThresholdSpec explicit_list(std::vector<double> values);

  double at(std::int64_t k) const;  ///< k >= 1; throws when the value is not positive
};

/// Precomputed hold-injection sequence. Each cluster's stacked holds are
/// gain_k * stealth_direction + correction_k: the direction lies in the
/// kernel of the stacked output map (invisible at every sample instant), the
/// correction cancels the carryover of the previous terminal state from the
/// sampled outputs, and the gain scales the state excursion past the
/// threshold at the disruption instant. Built entirely offline from the
/// model and timing data; no runtime measurements enter.
struct AttackPlan {
  TimingGrid grid;  ///< design grid the plan was synthesized for
  Rational t_star;
  Vector stealth_direction;  ///< unit norm, beta*p
  Index kernel_dim = 0;

  std::vector<double> gains;
  std::vector<Vector> corrections;      ///< beta*p each
  std::vector<double> thresholds;       ///< H_k actually used
  std::vector<Vector> terminal_states;  ///< predicted state at each cluster end
  std::vector<double> predicted_disruption_norms;
  std::vector<double> disruption_times;  ///< t_k = (k-1+t_star) * beta * T_a seconds

  std::vector<Vector> holds;  ///< flattened sequence, p each; hold i covers [i T_a, (i+1) T_a)

  std::int64_t clusters() const { return static_cast<std::int64_t>(gains.size()); }
  Index hold_width() const { return holds.empty() ? 0 : holds.front().size(); }
};

/// Unit-norm kernel direction of the stacked output map maximizing the norm
/// of its image under the disruption map (top singular direction of the
/// disruption map restricted to the kernel). Deterministic sign: first
/// nonzero component positive.
Vector choose_direction(const LiftedCluster& lifted, const DisruptionSpec& spec,
                        const Tolerances& tol);

/// Minimum-norm stacked holds cancelling the previous terminal state's
/// contribution to the sampled outputs. Throws InconsistentSystem when the
/// carryover cannot be cancelled.
Vector solve_correction(const LiftedCluster& lifted, const Vector& terminal_prev,
                        const Tolerances& tol);

/// Smallest admissible gain: (threshold + |bias at the disruption instant|)
/// divided by the direction's disruption drive. Taking the bound with
/// equality minimizes the injected energy.
double disruption_gain(const DisruptionSpec& spec, const Vector& terminal_prev,
                       const Vector& correction, const Vector& direction, double threshold);

/// Runs the per-cluster construction for the requested number of clusters and
/// flattens the hold sequence. The direction is fixed across clusters (the
/// disruption map is constant when t_star is).
AttackPlan synthesize(const LtiSystem& sys, const TimingGrid& grid, const LiftedCluster& lifted,
                      const DisruptionSpec& spec, const ThresholdSpec& thresholds,
                      std::int64_t clusters, const Tolerances& tol);

}  // namespace intersample
