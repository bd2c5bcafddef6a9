#include "intersample/plant.hpp"

#include "intersample/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace intersample {

LtiSystem::LtiSystem(Matrix A_in, Matrix B_in, Matrix C_in)
    : A(std::move(A_in)), B(std::move(B_in)), C(std::move(C_in)) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw std::invalid_argument("LtiSystem: A must be square and nonempty");
  }
  if (B.rows() != A.rows() || B.cols() < 1) {
    throw std::invalid_argument("LtiSystem: B must have n rows and at least one column");
  }
  if (C.cols() != A.rows() || C.rows() < 1) {
    throw std::invalid_argument("LtiSystem: C must have n columns and at least one row");
  }
  if (!A.allFinite() || !B.allFinite() || !C.allFinite()) {
    throw std::invalid_argument("LtiSystem: matrices must be finite");
  }
}

namespace {

// Continued-fraction convergents of |value|; accepts the first one within
// tolerance whose numerator and denominator both stay within the bound.
Rational best_rational(double value, std::int64_t max_denominator, const char* what) {
  if (!(std::isfinite(value)) || value < 0.0) {
    throw std::invalid_argument(std::string(what) + ": value must be finite and nonnegative");
  }
  if (max_denominator < 1) {
    throw std::invalid_argument(std::string(what) + ": max_denominator must be at least 1");
  }
  const double tolerance = 1e-9 * std::max(1.0, value);
  std::int64_t p_prev = 1, q_prev = 0;  // convergent h_{-1}/k_{-1}
  std::int64_t p_prev2 = 0, q_prev2 = 1;
  double x = value;
  for (int iter = 0; iter < 64; ++iter) {
    const double whole = std::floor(x);
    if (whole > static_cast<double>(max_denominator) && iter > 0) break;
    if (whole > 9.0e18) break;
    const std::int64_t a = static_cast<std::int64_t>(whole);
    const std::int64_t p = a * p_prev + p_prev2;
    const std::int64_t q = a * q_prev + q_prev2;
    if (p > max_denominator || q > max_denominator) break;
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
    if (std::abs(static_cast<double>(p) / static_cast<double>(q) - value) <= tolerance) {
      return Rational(p, q);
    }
    const double frac = x - whole;
    if (frac < 1e-18) break;
    x = 1.0 / frac;
  }
  throw IrrationalRatio(std::string(what) + ": no rational approximation of " +
                        std::to_string(value) + " with terms bounded by " +
                        std::to_string(max_denominator));
}

}  // namespace

std::pair<std::int64_t, std::int64_t> rationalize(double hold_period, double sample_period,
                                                  std::int64_t max_denominator) {
  if (!(hold_period > 0.0) || !(sample_period > 0.0)) {
    throw std::invalid_argument("rationalize: periods must be positive");
  }
  const Rational ratio =
      best_rational(sample_period / hold_period, max_denominator, "rationalize");
  return {ratio.den(), ratio.num()};  // sample/hold == beta/alpha
}

Rational rationalize_real(double value, std::int64_t max_denominator) {
  if (value == 0.0) return Rational(0);
  return best_rational(value, max_denominator, "rationalize_real");
}

Rational shifted_index(std::int64_t j, const Rational& delta) {
  if (j < 1) {
    throw std::invalid_argument("shifted_index: sample index starts at 1");
  }
  if (delta.num() < 0 || delta >= Rational(1)) {
    throw std::invalid_argument("shifted_index: delta must lie in [0, 1)");
  }
  if (delta.is_zero()) return Rational(j);
  return Rational(j - 1) + delta;
}

TimingGrid TimingGrid::make(double hold_period, double sample_period, double offset,
                            std::int64_t max_denominator) {
  if (!(hold_period > 0.0) || !(sample_period > 0.0)) {
    throw std::invalid_argument("TimingGrid: periods must be positive");
  }
  if (!(offset >= 0.0) || !(offset < sample_period)) {
    throw std::invalid_argument("TimingGrid: offset must lie in [0, sample_period)");
  }
  TimingGrid grid;
  grid.hold_period = hold_period;
  grid.sample_period = sample_period;
  grid.offset = offset;
  auto [alpha, beta] = rationalize(hold_period, sample_period, max_denominator);
  grid.alpha = alpha;
  grid.beta = beta;
  grid.delta = rationalize_real(offset / sample_period, max_denominator);
  if (grid.delta >= Rational(1)) {
    throw std::invalid_argument("TimingGrid: normalized offset rounded to 1; tighten the offset");
  }
  return grid;
}

Rational TimingGrid::actuation_ticks(std::int64_t i) const {
  if (i < 0) {
    throw std::invalid_argument("TimingGrid: actuation index must be nonnegative");
  }
  return Rational(i) * Rational(alpha);
}

Rational TimingGrid::sensing_ticks(std::int64_t j) const {
  return shifted_index(j, delta) * Rational(beta);
}

ClusterSchedule cluster_schedule(const TimingGrid& grid, std::int64_t k) {
  if (k < 1) {
    throw std::invalid_argument("cluster_schedule: cluster index starts at 1");
  }
  ClusterSchedule sched;
  sched.actuation.reserve(grid.beta);
  sched.sensing.reserve(grid.alpha);
  for (std::int64_t i = (k - 1) * grid.beta; i < k * grid.beta; ++i) {
    sched.actuation.push_back(grid.actuation_time(i));
  }
  for (std::int64_t j = (k - 1) * grid.alpha + 1; j <= k * grid.alpha; ++j) {
    sched.sensing.push_back(grid.sensing_time(j));
  }
  return sched;
}

Matrix transition_block(const LtiSystem& sys, const TimingGrid& grid, const Rational& l,
                        const Rational& m) {
  const Rational ticks = l * Rational(grid.beta) - m * Rational(grid.alpha);
  return mat_exp(sys.A, grid.seconds(ticks));
}

Matrix hold_gramian_block(const LtiSystem& sys, const TimingGrid& grid, const Rational& l,
                          const Rational& m) {
  const Rational ticks = l * Rational(grid.beta) - m * Rational(grid.alpha);
  if (ticks < Rational(0)) {
    throw NegativeDuration("hold_gramian_block: negative integration window");
  }
  return zoh_pair(sys.A, sys.B, grid.seconds(ticks)).second;
}

}  // namespace intersample
