#include "minkinv/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

namespace minkinv {

CMatrix make_matrix(Index rows, Index cols, std::span<const Complex> row_major) {
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != row_major.size()) {
    throw DimensionError("make_matrix: entry count does not equal rows * cols");
  }
  CMatrix A(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      A(i, j) = row_major[static_cast<std::size_t>(i * cols + j)];
    }
  }
  require_finite(A, "make_matrix");
  return A;
}

bool all_finite(const CMatrix& A) noexcept {
  for (Index j = 0; j < A.cols(); ++j) {
    for (Index i = 0; i < A.rows(); ++i) {
      if (!std::isfinite(A(i, j).real()) || !std::isfinite(A(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

void require_finite(const CMatrix& A, std::string_view what) {
  if (!all_finite(A)) {
    throw std::invalid_argument(std::string(what) + ": matrix has a non-finite entry");
  }
}

void require_square(const CMatrix& A, std::string_view what) {
  if (A.rows() != A.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()) + ", expected square");
  }
}

CMatrix minkowski_adjoint(const CMatrix& A, const MinkowskiMetric& G) {
  require_square(A, "minkowski_adjoint");
  if (A.rows() != G.dim()) {
    throw DimensionError("minkowski_adjoint: matrix and metric dimensions differ");
  }
  const Index n = A.rows();
  CMatrix out = A.adjoint();
  // (G A* G)(i,j) = s_i s_j conj(A(j,i)); the product of signs is -1 exactly
  // when one of i, j is the time-like index 0.
  if (n > 1) {
    out.row(0).tail(n - 1) *= -1.0;
    out.col(0).tail(n - 1) *= -1.0;
  }
  return out;
}

Eigen::VectorXd singular_values(const CMatrix& A) {
  if (A.rows() == 0 || A.cols() == 0) {
    return Eigen::VectorXd();
  }
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues();
}

double spectral_norm(const CMatrix& A) {
  Eigen::VectorXd s = singular_values(A);
  return s.size() == 0 ? 0.0 : s(0);
}

double rank_threshold(Index rows, Index cols, double reference_norm,
                      const Tolerances& tol) noexcept {
  const double eps = std::numeric_limits<double>::epsilon();
  return tol.rank_tol_factor * static_cast<double>(std::max(rows, cols)) * eps * reference_norm;
}

namespace {

Index count_above(const Eigen::VectorXd& s, double threshold) {
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) {
      ++rank;
    }
  }
  return rank;
}

}  // namespace

Index numerical_rank(const CMatrix& A, const Tolerances& tol) {
  Eigen::VectorXd s = singular_values(A);
  if (s.size() == 0) {
    return 0;
  }
  return count_above(s, rank_threshold(A.rows(), A.cols(), s(0), tol));
}

Index numerical_rank(const CMatrix& A, const Tolerances& tol, double reference_norm) {
  Eigen::VectorXd s = singular_values(A);
  if (s.size() == 0) {
    return 0;
  }
  return count_above(s, rank_threshold(A.rows(), A.cols(), reference_norm, tol));
}

CMatrix matrix_power(const CMatrix& A, Index p) {
  require_square(A, "matrix_power");
  if (p < 0) {
    throw std::invalid_argument("matrix_power: negative exponent");
  }
  CMatrix result = CMatrix::Identity(A.rows(), A.cols());
  CMatrix base = A;
  while (p > 0) {
    if (p & 1) {
      result = result * base;
    }
    p >>= 1;
    if (p > 0) {
      base = base * base;
    }
  }
  return result;
}

Index matrix_index(const CMatrix& A, const Tolerances& tol) {
  require_square(A, "matrix_index");
  const Index n = A.rows();
  if (n == 0) {
    return 0;
  }
  const double norm = spectral_norm(A);
  Index previous = n;  // rk(A^0) = rk(I)
  CMatrix power = CMatrix::Identity(n, n);
  double reference = 1.0;
  for (Index k = 0; k < n; ++k) {
    power = power * A;
    reference *= norm;
    const Index rank = numerical_rank(power, tol, reference);
    if (rank == previous) {
      return k;
    }
    previous = rank;
  }
  return n;
}

CMatrix range_basis(const CMatrix& A, Index rank) {
  if (rank == 0 || A.rows() == 0 || A.cols() == 0) {
    return CMatrix::Zero(A.rows(), 0);
  }
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(rank);
}

double residual_scale(const CMatrix& A, const CMatrix& X) noexcept {
  return (1.0 + A.norm()) * (1.0 + X.norm());
}

}  // namespace minkinv
