#include "intersample/feasibility.hpp"

#include "intersample/linalg.hpp"

#include <Eigen/SVD>

namespace intersample {

namespace {

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

}  // namespace

bool disruption_reachable_at(const LtiSystem& sys, const TimingGrid& grid,
                             const LiftedCluster& lifted, const Rational& t_star,
                             const Tolerances& tol) {
  const DisruptionSpec spec = build_disruption_spec(sys, grid, t_star);
  const Index rank_alone = numerical_rank(lifted.output_forced, tol);
  const Index rank_stacked = numerical_rank(vstack(lifted.output_forced, spec.forced_disruption), tol);
  return rank_stacked > rank_alone;
}

DisruptionChoice select_disruption_time(const LtiSystem& sys, const TimingGrid& grid,
                                        const LiftedCluster& lifted, const Tolerances& tol) {
  tol.check();
  const Matrix basis = kernel_basis(lifted.output_forced, tol);
  if (basis.cols() == 0) {
    throw NoRedundancy("select_disruption_time: stacked output map has a trivial kernel");
  }
  if (numerical_rank(lifted.hold_input, tol) < sys.p()) {
    throw RankDeficientBd("select_disruption_time: hold input matrix has dependent columns");
  }
  const Index p = sys.p();
  DisruptionChoice best;
  best.i_star = 0;
  double best_mag = 0.0;
  for (Index c = 0; c < basis.cols(); ++c) {
    const Vector z = basis.col(c);
    for (std::int64_t i = 1; i <= grid.beta; ++i) {
      const double mag = z.segment((i - 1) * p, p).norm();
      if (mag > tol.rank_rtol * z.norm()) {
        const bool better = best.i_star == 0 || i < best.i_star ||
                            (i == best.i_star && mag > best_mag);
        if (better) {
          best.i_star = i;
          best.witness = z;
          best_mag = mag;
        }
        break;  // only the first live segment of each basis vector matters
      }
    }
  }
  // a unit vector always has a segment above the relative cutoff
  best.t_star = Rational(best.i_star, grid.beta);
  return best;
}

SingleRateDiagnostics single_rate_diagnostics(const LtiSystem& sys, const TimingGrid& grid,
                                              const LiftedCluster& lifted, const Tolerances& tol) {
  SingleRateDiagnostics diag;
  diag.applicable = grid.alpha == 1 && grid.delta.is_zero();
  if (!diag.applicable) return diag;

  const Index n = sys.n();
  // stack of the disruption maps for every candidate instant i/beta; lower
  // block triangular in the hold responses
  Matrix stacked(grid.beta * n, lifted.forced_samples.cols());
  for (std::int64_t i = 1; i <= grid.beta; ++i) {
    stacked.middleRows((i - 1) * n, n) =
        build_disruption_spec(sys, grid, Rational(i, grid.beta)).forced_disruption;
  }
  const Index rank_alone = numerical_rank(lifted.output_forced, tol);
  diag.stacked_escape = numerical_rank(vstack(lifted.output_forced, stacked), tol) > rank_alone;

  Eigen::JacobiSVD<Matrix> svd(lifted.forced_samples, Eigen::ComputeThinU);
  Index range_dim = 0;
  const Vector& s = svd.singularValues();
  while (range_dim < s.size() && s(range_dim) > tol.rank_rtol * s(0)) ++range_dim;
  if (range_dim == 0) {
    diag.output_kernel_meets_range = false;
  } else {
    const Matrix range_basis = svd.matrixU().leftCols(range_dim);
    diag.output_kernel_meets_range = numerical_rank(sys.C * range_basis, tol) < range_dim;
  }
  return diag;
}

RedundancyReport analyze_redundancy(const LtiSystem& sys, const TimingGrid& grid,
                                    const LiftedCluster& lifted,
                                    const std::vector<Rational>& t_star_candidates,
                                    const Tolerances& tol) {
  tol.check();
  RedundancyReport report;
  report.rank_output_forced = numerical_rank(lifted.output_forced, tol);
  report.kernel_dim = lifted.output_forced.cols() - report.rank_output_forced;
  report.kernel_nontrivial = report.kernel_dim > 0;

  Matrix aug(lifted.output_forced.rows(), lifted.output_forced.cols() + lifted.output_free.cols());
  aug << lifted.output_forced, lifted.output_free;
  report.rank_output_forced_aug = numerical_rank(aug, tol);
  report.carryover_cancellable = report.rank_output_forced_aug == report.rank_output_forced;

  report.count_inequality = grid.alpha * sys.q() < grid.beta * sys.p();
  report.output_forced_full_row_rank = report.rank_output_forced == lifted.output_forced.rows();
  report.forced_full_row_rank =
      numerical_rank(lifted.forced_samples, tol) == lifted.forced_samples.rows();
  report.single_rate = single_rate_diagnostics(sys, grid, lifted, tol);

  if (report.kernel_nontrivial) {
    if (!t_star_candidates.empty()) {
      for (const Rational& candidate : t_star_candidates) {
        if (disruption_reachable_at(sys, grid, lifted, candidate, tol)) {
          report.disruption_reachable = true;
          report.t_star = candidate;
          const Rational progress = candidate * Rational(grid.beta);
          if (progress.is_integer()) report.i_star = progress.num();
          break;
        }
      }
    } else {
      try {
        const DisruptionChoice choice = select_disruption_time(sys, grid, lifted, tol);
        report.disruption_reachable = true;
        report.t_star = choice.t_star;
        report.i_star = choice.i_star;
      } catch (const RankDeficientBd&) {
        for (std::int64_t i = 1; i <= grid.beta; ++i) {
          const Rational candidate(i, grid.beta);
          if (disruption_reachable_at(sys, grid, lifted, candidate, tol)) {
            report.disruption_reachable = true;
            report.t_star = candidate;
            report.i_star = i;
            break;
          }
        }
      }
    }
  }
  return report;
}

}  // namespace intersample
