#pragma once

#include "intersample/plant.hpp"

namespace intersample {

/// Cluster-lifted maps of the error dynamics under piecewise-constant input.
/// Stacking the beta holds of cluster k into one vector a (beta*p long) and
/// the states at the alpha sample instants into one vector, the multirate
/// system becomes a time-invariant recursion:
///
///   sampled_states  = free_samples  * terminal_prev + forced_samples  * a
///   sampled_outputs = output_free   * terminal_prev + output_forced   * a
///   terminal_next   = free_terminal * terminal_prev + forced_terminal * a
///
/// where terminal_prev is the state at the cluster's left edge.
struct LiftedCluster {
  TimingGrid grid;
  Index n = 0;
  Index p = 0;
  Index q = 0;

  Matrix hold_transition;  ///< e^{A T_a}
  Matrix hold_input;       ///< (integral_0^{T_a} e^{A tau} dtau) B

  Matrix free_samples;     ///< alpha*n x n
  Matrix forced_samples;   ///< alpha*n x beta*p
  Matrix free_terminal;    ///< n x n, hold_transition^beta
  Matrix forced_terminal;  ///< n x beta*p
  Matrix output_free;      ///< alpha*q x n
  Matrix output_forced;    ///< alpha*q x beta*p
};

/// (I_blocks kron C) * M applied blockwise; M must have blocks * C.cols() rows.
Matrix stack_output(const Matrix& C, const Matrix& M, Index blocks);

/// Stacked forced response at the alpha sample instants of one cluster.
/// Row block l (1-based), column block m: with f = floor(l_delta * R),
/// blocks m <= f carry a full hold propagated by e^{A(l_delta T_s - m T_a)},
/// block f+1 (when it exists) carries the partial hold integral up to the
/// sample instant, and blocks beyond are zero because later holds cannot
/// affect an earlier sample.
Matrix build_forced_samples(const LtiSystem& sys, const TimingGrid& grid);

/// Stacked free response e^{A l_delta T_s}, l = 1..alpha.
Matrix build_free_samples(const LtiSystem& sys, const TimingGrid& grid);

/// Forced response at the cluster's terminal instant:
/// [A_d^{beta-1} B_d | A_d^{beta-2} B_d | ... | B_d].
Matrix build_forced_terminal(const LtiSystem& sys, const TimingGrid& grid);

/// All lifted maps for one cluster of the given grid.
LiftedCluster build_lifted(const LtiSystem& sys, const TimingGrid& grid);

/// Maps from (terminal_prev, cluster holds) to the state at the disruption
/// instant t_star * beta * T_a into the cluster, t_star in (0, 1].
struct DisruptionSpec {
  Rational t_star;
  Matrix free_disruption;    ///< n x n, e^{A t_star beta T_a}
  Matrix forced_disruption;  ///< n x beta*p, same case split as forced_samples
};

DisruptionSpec build_disruption_spec(const LtiSystem& sys, const TimingGrid& grid,
                                     const Rational& t_star);

struct ClusterPrediction {
  Vector sampled_states;   ///< alpha*n
  Vector sampled_outputs;  ///< alpha*q
  Vector terminal_state;   ///< n
};

ClusterPrediction predict_cluster(const LiftedCluster& lifted, const Vector& terminal_prev,
                                  const Vector& cluster_holds);

Vector predict_disruption(const DisruptionSpec& spec, const Vector& terminal_prev,
                          const Vector& cluster_holds);

}  // namespace intersample
