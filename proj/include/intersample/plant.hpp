#pragma once

#include "intersample/rational.hpp"
#include "intersample/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace intersample {

/// Continuous-time LTI plant x' = A x + B u, y = C x.
struct LtiSystem {
  Matrix A;  ///< n x n
  Matrix B;  ///< n x p
  Matrix C;  ///< q x n

  LtiSystem(Matrix A_in, Matrix B_in, Matrix C_in);

  Index n() const { return A.rows(); }
  Index p() const { return B.cols(); }
  Index q() const { return C.rows(); }
};

/// Coprime (alpha, beta) with sample_period / hold_period == beta / alpha,
/// found by continued-fraction approximation with both numbers bounded by
/// max_denominator. Throws IrrationalRatio when no such fraction fits the
/// ratio to within 1e-9 (relative for ratios above one).
std::pair<std::int64_t, std::int64_t> rationalize(double hold_period, double sample_period,
                                                  std::int64_t max_denominator = 1000);

/// Best bounded-denominator rational approximation of an arbitrary real.
Rational rationalize_real(double value, std::int64_t max_denominator);

/// Offset-shifted sample index: (j-1)+delta when delta > 0, j when delta == 0.
/// Sample j is taken at shifted_index(j, delta) * sample_period; j starts at 1.
Rational shifted_index(std::int64_t j, const Rational& delta);

/// Two-rate timing geometry: actuation holds every hold_period seconds,
/// output samples every sample_period seconds lagged by offset seconds.
/// The pattern of instants repeats every beta * hold_period == alpha *
/// sample_period seconds (one cluster: beta holds, alpha samples).
///
/// Schedule arithmetic is carried in exact integer multiples of the base
/// tick hold_period / alpha == sample_period / beta; seconds are derived
/// views, so instant comparisons never drift.
struct TimingGrid {
  double hold_period = 1.0;
  double sample_period = 1.0;
  double offset = 0.0;
  std::int64_t alpha = 1;
  std::int64_t beta = 1;
  Rational delta;  ///< offset / sample_period in [0, 1), exact after rationalization

  static TimingGrid make(double hold_period, double sample_period, double offset = 0.0,
                         std::int64_t max_denominator = 1000);

  Rational ratio() const { return Rational(beta, alpha); }  ///< sample_period / hold_period
  double tick() const { return hold_period / static_cast<double>(alpha); }
  double cluster_span() const { return static_cast<double>(beta) * hold_period; }

  Rational actuation_ticks(std::int64_t i) const;
  Rational sensing_ticks(std::int64_t j) const;
  double seconds(const Rational& ticks) const { return ticks.to_double() * tick(); }
  double actuation_time(std::int64_t i) const { return seconds(actuation_ticks(i)); }
  double sensing_time(std::int64_t j) const { return seconds(sensing_ticks(j)); }
};

/// Instants of cluster k (k >= 1): beta actuation updates starting at the
/// cluster's left edge, and alpha samples inside ((k-1) beta T_a, k beta T_a]
/// (left-closed when the offset is positive).
struct ClusterSchedule {
  std::vector<double> actuation;
  std::vector<double> sensing;
};
ClusterSchedule cluster_schedule(const TimingGrid& grid, std::int64_t k);

/// e^{A (l sample_period - m hold_period)} for rational l, m of either sign.
Matrix transition_block(const LtiSystem& sys, const TimingGrid& grid, const Rational& l,
                        const Rational& m);

/// (integral_0^{l sample_period - m hold_period} e^{A tau} dtau) B.
/// Throws NegativeDuration when the upper limit is negative.
Matrix hold_gramian_block(const LtiSystem& sys, const TimingGrid& grid, const Rational& l,
                          const Rational& m);

}  // namespace intersample
