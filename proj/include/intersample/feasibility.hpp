#pragma once

#include "intersample/lifting.hpp"

#include <optional>
#include <vector>

namespace intersample {

/// Sufficient-condition diagnostics for the single-rate case (alpha == 1,
/// zero offset), where the candidate disruption times are i/beta.
struct SingleRateDiagnostics {
  bool applicable = false;
  /// Kernel of the stacked output map escapes the stack of all candidate
  /// disruption maps (a lower block-triangular matrix of hold responses).
  bool stacked_escape = false;
  /// ker C meets im(forced_samples) nontrivially; guarantees escape at t_star = 1.
  bool output_kernel_meets_range = false;
};

/// Verdict on the three feasibility conditions for a zero-stealthy,
/// disruptive hold-injection attack:
///   (kernel)    the stacked output map has a nontrivial kernel,
///   (reach)     some kernel direction survives at a disruption time,
///   (carryover) the free response of the previous cluster's terminal state
///               can always be cancelled by the holds.
struct RedundancyReport {
  bool kernel_nontrivial = false;
  Index kernel_dim = 0;
  bool disruption_reachable = false;
  bool carryover_cancellable = false;

  Index rank_output_forced = 0;
  Index rank_output_forced_aug = 0;  ///< rank of [output_forced | output_free]

  std::optional<Rational> t_star;       ///< selected or first working candidate
  std::optional<std::int64_t> i_star;   ///< hold index behind t_star when derived from one

  // sufficient-condition flags
  bool count_inequality = false;  ///< alpha*q < beta*p
  bool output_forced_full_row_rank = false;
  bool forced_full_row_rank = false;
  SingleRateDiagnostics single_rate;

  bool feasible() const { return kernel_nontrivial && disruption_reachable && carryover_cancellable; }
};

/// Evaluates all three conditions. With an empty candidate list the
/// disruption time is selected automatically (witness construction first,
/// exhaustive i/beta scan when the hold input matrix is rank deficient);
/// otherwise each candidate is tested in order and the first workable one is
/// reported. Never throws for an infeasible system; the report carries the
/// failures.
RedundancyReport analyze_redundancy(const LtiSystem& sys, const TimingGrid& grid,
                                    const LiftedCluster& lifted,
                                    const std::vector<Rational>& t_star_candidates,
                                    const Tolerances& tol);

struct DisruptionChoice {
  Rational t_star;
  std::int64_t i_star = 0;  ///< 1-based index of the first live hold in the witness
  Vector witness;           ///< unit kernel vector with witness_{i_star} != 0
};

/// Picks t_star = i_star/beta from a kernel basis vector whose first
/// numerically nonzero p-segment sits at hold i_star; with a full-column-rank
/// hold input matrix the witness then survives at the disruption instant.
/// Scans all basis vectors, preferring the smallest i_star and breaking ties
/// by the largest surviving segment.
/// Throws NoRedundancy when the kernel is trivial and RankDeficientBd when
/// the hold input matrix has dependent columns.
DisruptionChoice select_disruption_time(const LtiSystem& sys, const TimingGrid& grid,
                                        const LiftedCluster& lifted, const Tolerances& tol);

SingleRateDiagnostics single_rate_diagnostics(const LtiSystem& sys, const TimingGrid& grid,
                                              const LiftedCluster& lifted, const Tolerances& tol);

/// True iff some kernel direction of the stacked output map survives the
/// disruption map at t_star (rank of the vertical stack exceeds the rank of
/// the output map alone).
bool disruption_reachable_at(const LtiSystem& sys, const TimingGrid& grid,
                             const LiftedCluster& lifted, const Rational& t_star,
                             const Tolerances& tol);

}  // namespace intersample
