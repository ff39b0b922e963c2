#pragma once

#include <span>
#include <string_view>

#include <Eigen/Core>

#include "minkinv/types.hpp"

namespace minkinv {

/// Builds a rows x cols matrix from row-major entries.
/// Throws DimensionError on a size mismatch and std::invalid_argument on a
/// non-finite entry.
[[nodiscard]] CMatrix make_matrix(Index rows, Index cols, std::span<const Complex> row_major);

[[nodiscard]] bool all_finite(const CMatrix& A) noexcept;
void require_finite(const CMatrix& A, std::string_view what);
void require_square(const CMatrix& A, std::string_view what);

/// G A* G. A must be n x n with n == G.dim().
[[nodiscard]] CMatrix minkowski_adjoint(const CMatrix& A, const MinkowskiMetric& G);

/// Singular values in decreasing order.
[[nodiscard]] Eigen::VectorXd singular_values(const CMatrix& A);
[[nodiscard]] double spectral_norm(const CMatrix& A);

/// Singular values above this are counted as nonzero:
/// rank_tol_factor * max(rows, cols) * eps * reference_norm.
[[nodiscard]] double rank_threshold(Index rows, Index cols, double reference_norm,
                                    const Tolerances& tol) noexcept;

/// Number of singular values above rank_threshold(..., sigma_max(A), tol).
[[nodiscard]] Index numerical_rank(const CMatrix& A, const Tolerances& tol = {});

/// Same, against an explicit reference norm. Use this for products and
/// powers: a matrix that is zero in exact arithmetic has a sigma_max made of
/// rounding noise, so it must be ranked against the norms of its factors.
[[nodiscard]] Index numerical_rank(const CMatrix& A, const Tolerances& tol,
                                   double reference_norm);

/// A^p with A^0 = I.
[[nodiscard]] CMatrix matrix_power(const CMatrix& A, Index p);

/// Smallest k >= 0 with rk(A^(k+1)) == rk(A^k); A^j is ranked against
/// ||A||_2^j. Capped at n.
[[nodiscard]] Index matrix_index(const CMatrix& A, const Tolerances& tol = {});

/// Orthonormal basis (n x rank) for the column space of A, from the SVD.
[[nodiscard]] CMatrix range_basis(const CMatrix& A, Index rank);

/// (1 + ||A||_F) (1 + ||X||_F), the scale residuals are compared against.
[[nodiscard]] double residual_scale(const CMatrix& A, const CMatrix& X) noexcept;

}  // namespace minkinv
