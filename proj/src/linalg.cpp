#include "intersample/linalg.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>
#include <string>

namespace intersample {

namespace {

void require_finite(const Matrix& M, const char* what) {
  if (!M.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
  }
}

Index rank_from_singular_values(const Vector& s, double rank_rtol) {
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  const double cutoff = rank_rtol * s(0);
  Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return r;
}

}  // namespace

Matrix mat_exp(const Matrix& A, double t) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("mat_exp: matrix must be square");
  }
  require_finite(A, "mat_exp");
  if (!std::isfinite(t)) {
    throw std::invalid_argument("mat_exp: time must be finite");
  }
  return (A * t).exp();
}

std::pair<Matrix, Matrix> zoh_pair(const Matrix& A, const Matrix& B, double t) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("zoh_pair: state matrix must be square");
  }
  if (B.rows() != A.rows()) {
    throw std::invalid_argument("zoh_pair: input matrix row count must match state dimension");
  }
  require_finite(A, "zoh_pair");
  require_finite(B, "zoh_pair");
  if (!(t >= 0.0)) {
    throw NegativeDuration("zoh_pair: hold duration must be nonnegative, got " +
                           std::to_string(t));
  }
  const Index n = A.rows();
  const Index p = B.cols();
  Matrix aug = Matrix::Zero(n + p, n + p);
  aug.topLeftCorner(n, n) = A;
  aug.topRightCorner(n, p) = B;
  const Matrix phi = (aug * t).exp();
  return {phi.topLeftCorner(n, n), phi.topRightCorner(n, p)};
}

Index numerical_rank(const Matrix& M, const Tolerances& tol) {
  tol.check();
  require_finite(M, "numerical_rank");
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return rank_from_singular_values(svd.singularValues(), tol.rank_rtol);
}

Matrix kernel_basis(const Matrix& M, const Tolerances& tol) {
  tol.check();
  require_finite(M, "kernel_basis");
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const Index rank = rank_from_singular_values(svd.singularValues(), tol.rank_rtol);
  Matrix basis = svd.matrixV().rightCols(M.cols() - rank);
  for (Index c = 0; c < basis.cols(); ++c) {
    for (Index r = 0; r < basis.rows(); ++r) {
      if (std::abs(basis(r, c)) > 1e-12) {
        if (basis(r, c) < 0.0) basis.col(c) = -basis.col(c);
        break;
      }
    }
  }
  return basis;
}

bool range_contained(const Matrix& M, const Matrix& V, const Tolerances& tol) {
  if (M.rows() != V.rows()) {
    throw std::invalid_argument("range_contained: row counts differ");
  }
  Matrix aug(M.rows(), M.cols() + V.cols());
  aug << M, V;
  return numerical_rank(aug, tol) == numerical_rank(M, tol);
}

Vector min_norm_solve(const Matrix& M, const Vector& b, const Tolerances& tol) {
  tol.check();
  require_finite(M, "min_norm_solve");
  if (!b.allFinite()) {
    throw std::invalid_argument("min_norm_solve: non-finite right-hand side");
  }
  if (b.size() != M.rows()) {
    throw std::invalid_argument("min_norm_solve: right-hand side length must match row count");
  }
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const Index rank = rank_from_singular_values(s, tol.rank_rtol);
  const Vector coords = svd.matrixU().transpose() * b;
  Vector x = Vector::Zero(M.cols());
  for (Index i = 0; i < rank; ++i) {
    x += svd.matrixV().col(i) * (coords(i) / s(i));
  }
  const double residual = (M * x - b).norm();
  if (residual > tol.residual_atol) {
    std::ostringstream msg;
    msg << "min_norm_solve: residual " << residual << " exceeds bound " << tol.residual_atol;
    throw InconsistentSystem(msg.str());
  }
  return x;
}

}  // namespace intersample
