#include "intersample/lifting.hpp"

#include "intersample/linalg.hpp"

#include <algorithm>
#include <string>

namespace intersample {

Matrix stack_output(const Matrix& C, const Matrix& M, Index blocks) {
  const Index n = C.cols();
  const Index q = C.rows();
  if (M.rows() != blocks * n) {
    throw std::invalid_argument("stack_output: row count must be blocks * state dimension");
  }
  Matrix out(blocks * q, M.cols());
  for (Index b = 0; b < blocks; ++b) {
    out.middleRows(b * q, q) = C * M.middleRows(b * n, n);
  }
  return out;
}

namespace {

Matrix hold_input_matrix(const LtiSystem& sys, const TimingGrid& grid) {
  return zoh_pair(sys.A, sys.B, grid.hold_period).second;
}

Matrix forced_samples_with(const LtiSystem& sys, const TimingGrid& grid, const Matrix& hold_input) {
  const Index n = sys.n();
  const Index p = sys.p();
  Matrix forced = Matrix::Zero(grid.alpha * n, grid.beta * p);
  for (std::int64_t l = 1; l <= grid.alpha; ++l) {
    const Rational l_shift = shifted_index(l, grid.delta);
    // number of holds completed before sample l; exact, so the boundary case
    // of a sample landing on an actuation instant floors correctly
    const std::int64_t full = (l_shift * grid.ratio()).floor();
    const Index row = (l - 1) * n;
    for (std::int64_t m = 1; m <= std::min<std::int64_t>(full, grid.beta); ++m) {
      forced.block(row, (m - 1) * p, n, p) =
          transition_block(sys, grid, l_shift, Rational(m)) * hold_input;
    }
    if (full + 1 <= grid.beta) {
      // partial hold running when the sample is taken; zero width when the
      // sample coincides with an actuation instant
      forced.block(row, full * p, n, p) = hold_gramian_block(sys, grid, l_shift, Rational(full));
    }
  }
  return forced;
}

Matrix forced_terminal_with(const LtiSystem& sys, const TimingGrid& grid,
                            const Matrix& hold_transition, const Matrix& hold_input) {
  const Index n = sys.n();
  const Index p = sys.p();
  Matrix forced(n, grid.beta * p);
  Matrix power = hold_input;  // A_d^{beta-m} B_d, filled right to left
  for (std::int64_t m = grid.beta; m >= 1; --m) {
    forced.middleCols((m - 1) * p, p) = power;
    if (m > 1) power = hold_transition * power;
  }
  return forced;
}

}  // namespace

Matrix build_forced_samples(const LtiSystem& sys, const TimingGrid& grid) {
  return forced_samples_with(sys, grid, hold_input_matrix(sys, grid));
}

Matrix build_free_samples(const LtiSystem& sys, const TimingGrid& grid) {
  const Index n = sys.n();
  Matrix free(grid.alpha * n, n);
  for (std::int64_t l = 1; l <= grid.alpha; ++l) {
    const Rational l_shift = shifted_index(l, grid.delta);
    free.middleRows((l - 1) * n, n) = transition_block(sys, grid, l_shift, Rational(0));
  }
  return free;
}

Matrix build_forced_terminal(const LtiSystem& sys, const TimingGrid& grid) {
  auto [hold_transition, hold_input] = zoh_pair(sys.A, sys.B, grid.hold_period);
  return forced_terminal_with(sys, grid, hold_transition, hold_input);
}

LiftedCluster build_lifted(const LtiSystem& sys, const TimingGrid& grid) {
  LiftedCluster lifted;
  lifted.grid = grid;
  lifted.n = sys.n();
  lifted.p = sys.p();
  lifted.q = sys.q();
  auto [hold_transition, hold_input] = zoh_pair(sys.A, sys.B, grid.hold_period);
  lifted.hold_transition = hold_transition;
  lifted.hold_input = hold_input;
  lifted.free_samples = build_free_samples(sys, grid);
  lifted.forced_samples = forced_samples_with(sys, grid, hold_input);
  lifted.forced_terminal = forced_terminal_with(sys, grid, hold_transition, hold_input);
  Matrix power = Matrix::Identity(sys.n(), sys.n());
  for (std::int64_t i = 0; i < grid.beta; ++i) power = hold_transition * power;
  lifted.free_terminal = power;
  lifted.output_free = stack_output(sys.C, lifted.free_samples, grid.alpha);
  lifted.output_forced = stack_output(sys.C, lifted.forced_samples, grid.alpha);
  return lifted;
}

DisruptionSpec build_disruption_spec(const LtiSystem& sys, const TimingGrid& grid,
                                     const Rational& t_star) {
  if (!(t_star > Rational(0)) || !(t_star <= Rational(1))) {
    throw std::invalid_argument("build_disruption_spec: t_star must lie in (0, 1], got " +
                                t_star.str());
  }
  const Index n = sys.n();
  const Index p = sys.p();
  const Matrix hold_input = hold_input_matrix(sys, grid);
  const Rational progress = t_star * Rational(grid.beta);  // disruption instant in hold units
  const std::int64_t full = progress.floor();

  DisruptionSpec spec;
  spec.t_star = t_star;
  spec.forced_disruption = Matrix::Zero(n, grid.beta * p);
  for (std::int64_t m = 1; m <= std::min<std::int64_t>(full, grid.beta); ++m) {
    spec.forced_disruption.middleCols((m - 1) * p, p) =
        transition_block(sys, grid, Rational(0), Rational(m) - progress) * hold_input;
  }
  if (full + 1 <= grid.beta && !progress.is_integer()) {
    spec.forced_disruption.middleCols(full * p, p) =
        hold_gramian_block(sys, grid, Rational(0), Rational(full) - progress);
  }
  spec.free_disruption =
      mat_exp(sys.A, grid.seconds(t_star * Rational(grid.alpha * grid.beta)));
  return spec;
}

ClusterPrediction predict_cluster(const LiftedCluster& lifted, const Vector& terminal_prev,
                                  const Vector& cluster_holds) {
  if (terminal_prev.size() != lifted.n) {
    throw std::invalid_argument("predict_cluster: terminal state must have length n");
  }
  if (cluster_holds.size() != lifted.forced_samples.cols()) {
    throw std::invalid_argument("predict_cluster: cluster holds must have length beta * p");
  }
  ClusterPrediction pred;
  pred.sampled_states = lifted.free_samples * terminal_prev + lifted.forced_samples * cluster_holds;
  pred.sampled_outputs = lifted.output_free * terminal_prev + lifted.output_forced * cluster_holds;
  pred.terminal_state =
      lifted.free_terminal * terminal_prev + lifted.forced_terminal * cluster_holds;
  return pred;
}

Vector predict_disruption(const DisruptionSpec& spec, const Vector& terminal_prev,
                          const Vector& cluster_holds) {
  if (terminal_prev.size() != spec.free_disruption.rows()) {
    throw std::invalid_argument("predict_disruption: terminal state must have length n");
  }
  if (cluster_holds.size() != spec.forced_disruption.cols()) {
    throw std::invalid_argument("predict_disruption: cluster holds must have length beta * p");
  }
  return spec.free_disruption * terminal_prev + spec.forced_disruption * cluster_holds;
}

}  // namespace intersample
