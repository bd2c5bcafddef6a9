#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace intersample {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical cutoffs that make exact-arithmetic rank and containment
/// statements decidable in floating point.
struct Tolerances {
  double rank_rtol = 1e-9;      ///< relative singular-value cutoff for rank decisions
  double residual_atol = 1e-8;  ///< absolute residual bound for solves and containment checks

  void check() const {
    if (!(rank_rtol > 0.0) || !(rank_rtol < 1.0)) {
      throw std::invalid_argument("Tolerances: rank_rtol must lie in (0, 1)");
    }
    if (!(residual_atol > 0.0)) {
      throw std::invalid_argument("Tolerances: residual_atol must be positive");
    }
  }
};

/// The sample/hold period ratio admits no bounded-denominator rational fit.
struct IrrationalRatio : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A hold integral was requested over a negative duration.
struct NegativeDuration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear system has no solution within the residual tolerance.
struct InconsistentSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The stacked output map has a trivial kernel: no stealthy input directions exist.
struct NoRedundancy : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The hold input matrix is column rank deficient.
struct RankDeficientBd : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every stealthy direction is annihilated at the disruption time.
struct InfeasibleDirection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace intersample
