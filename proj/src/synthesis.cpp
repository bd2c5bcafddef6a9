#include "intersample/synthesis.hpp"

#include "intersample/linalg.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace intersample {

ThresholdSpec ThresholdSpec::linear(double scale) {
  ThresholdSpec spec;
  spec.kind = Kind::Linear;
  spec.scale = scale;
  return spec;
}

ThresholdSpec ThresholdSpec::constant(double value) {
  ThresholdSpec spec;
  spec.kind = Kind::Constant;
  spec.scale = value;
  return spec;
}

ThresholdSpec ThresholdSpec::explicit_list(std::vector<double> values) {
  ThresholdSpec spec;
  spec.kind = Kind::Explicit;
  spec.values = std::move(values);
  return spec;
}

double ThresholdSpec::at(std::int64_t k) const {
  if (k < 1) throw std::invalid_argument("ThresholdSpec: cluster index starts at 1");
  double value = 0.0;
  switch (kind) {
    case Kind::Linear:
      value = scale * static_cast<double>(k);
      break;
    case Kind::Constant:
      value = scale;
      break;
    case Kind::Explicit:
      if (k > static_cast<std::int64_t>(values.size())) {
        throw std::invalid_argument("ThresholdSpec: no threshold listed for cluster " +
                                    std::to_string(k));
      }
      value = values[static_cast<std::size_t>(k - 1)];
      break;
  }
  if (!(value > 0.0)) {
    throw std::invalid_argument("ThresholdSpec: thresholds must be positive, H_" +
                                std::to_string(k) + " = " + std::to_string(value));
  }
  return value;
}

Vector choose_direction(const LiftedCluster& lifted, const DisruptionSpec& spec,
                        const Tolerances& tol) {
  tol.check();
  const Matrix basis = kernel_basis(lifted.output_forced, tol);
  if (basis.cols() == 0) {
    throw NoRedundancy("choose_direction: stacked output map has a trivial kernel");
  }
  // top singular direction of the disruption map restricted to the kernel
  const Matrix restricted = spec.forced_disruption * basis;
  Eigen::JacobiSVD<Matrix> svd(restricted, Eigen::ComputeFullV);
  const double drive = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  if (!(drive > tol.rank_rtol * std::max(1.0, spec.forced_disruption.norm()))) {
    throw InfeasibleDirection(
        "choose_direction: the disruption map annihilates every stealthy direction at t_star = " +
        spec.t_star.str());
  }
  Vector direction = basis * svd.matrixV().col(0);
  direction /= direction.norm();
  for (Index r = 0; r < direction.size(); ++r) {
    if (std::abs(direction(r)) > 1e-12) {
      if (direction(r) < 0.0) direction = -direction;
      break;
    }
  }
  return direction;
}

Vector solve_correction(const LiftedCluster& lifted, const Vector& terminal_prev,
                        const Tolerances& tol) {
  if (terminal_prev.size() != lifted.n) {
    throw std::invalid_argument("solve_correction: terminal state must have length n");
  }
  const Vector rhs = -(lifted.output_free * terminal_prev);
  return min_norm_solve(lifted.output_forced, rhs, tol);
}

double disruption_gain(const DisruptionSpec& spec, const Vector& terminal_prev,
                       const Vector& correction, const Vector& direction, double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("disruption_gain: threshold must be positive");
  }
  const double drive = (spec.forced_disruption * direction).norm();
  if (!(drive > 0.0)) {
    throw InfeasibleDirection("disruption_gain: direction is annihilated at the disruption time");
  }
  const double bias =
      (spec.free_disruption * terminal_prev + spec.forced_disruption * correction).norm();
  const double gain = (threshold + bias) / drive;
  if (!std::isfinite(gain)) {
    throw InfeasibleDirection("disruption_gain: gain overflowed; drive " + std::to_string(drive));
  }
  return gain;
}

AttackPlan synthesize(const LtiSystem& sys, const TimingGrid& grid, const LiftedCluster& lifted,
                      const DisruptionSpec& spec, const ThresholdSpec& thresholds,
                      std::int64_t clusters, const Tolerances& tol) {
  tol.check();
  if (clusters < 0) {
    throw std::invalid_argument("synthesize: cluster count must be nonnegative");
  }
  AttackPlan plan;
  plan.grid = grid;
  plan.t_star = spec.t_star;
  plan.stealth_direction = choose_direction(lifted, spec, tol);
  plan.kernel_dim = lifted.output_forced.cols() - numerical_rank(lifted.output_forced, tol);

  const Index p = sys.p();
  plan.gains.reserve(clusters);
  plan.holds.reserve(clusters * grid.beta);
  Vector terminal = Vector::Zero(sys.n());
  for (std::int64_t k = 1; k <= clusters; ++k) {
    const double threshold = thresholds.at(k);
    const Vector correction = solve_correction(lifted, terminal, tol);
    const double gain = disruption_gain(spec, terminal, correction, plan.stealth_direction,
                                        threshold);
    const Vector cluster_holds = gain * plan.stealth_direction + correction;
    const Vector at_disruption = predict_disruption(spec, terminal, cluster_holds);
    terminal = lifted.free_terminal * terminal + lifted.forced_terminal * cluster_holds;

    plan.gains.push_back(gain);
    plan.corrections.push_back(correction);
    plan.thresholds.push_back(threshold);
    plan.terminal_states.push_back(terminal);
    plan.predicted_disruption_norms.push_back(at_disruption.norm());
    plan.disruption_times.push_back(
        grid.seconds((Rational(k - 1) + spec.t_star) * Rational(grid.alpha * grid.beta)));
    for (std::int64_t m = 0; m < grid.beta; ++m) {
      plan.holds.emplace_back(cluster_holds.segment(m * p, p));
    }
  }
  return plan;
}

}  // namespace intersample
