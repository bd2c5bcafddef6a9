#pragma once

#include "intersample/types.hpp"

#include <utility>

namespace intersample {

/// e^{At}. The matrix must be square with finite entries; t may be negative.
Matrix mat_exp(const Matrix& A, double t);

/// Zero-order-hold discretization pair (e^{At}, (integral_0^t e^{A tau} dtau) B)
/// computed jointly from the exponential of the augmented matrix [[A, B], [0, 0]] t.
/// t = 0 yields (I, 0); negative t is rejected.
std::pair<Matrix, Matrix> zoh_pair(const Matrix& A, const Matrix& B, double t);

/// Rank under the relative singular-value cutoff rank_rtol * sigma_max.
Index numerical_rank(const Matrix& M, const Tolerances& tol);

/// Orthonormal basis of the numerical null space, one column per kernel
/// direction (zero columns when the kernel is trivial). Each column is sign
/// normalized so its first nonzero component is positive.
Matrix kernel_basis(const Matrix& M, const Tolerances& tol);

/// True iff im V is contained in im M, decided as rank([M | V]) == rank(M).
bool range_contained(const Matrix& M, const Matrix& V, const Tolerances& tol);

/// Minimum-Euclidean-norm x with M x = b. Throws InconsistentSystem when the
/// residual of the pseudoinverse solution exceeds residual_atol.
Vector min_norm_solve(const Matrix& M, const Vector& b, const Tolerances& tol);

}  // namespace intersample
