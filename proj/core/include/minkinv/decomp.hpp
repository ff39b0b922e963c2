#pragma once

#include "minkinv/types.hpp"

namespace minkinv {

/// Core-EP form A = U [[T, S], [0, N]] U*.
///
/// U is unitary, T (r x r) is upper triangular and invertible, N is upper
/// triangular and nilpotent with N^k = 0 to working precision. r is the
/// rank of A^k and k the index of A. U is not canonical; anything derived
/// from it that is mathematically U-independent (the parts, every inverse)
/// is, and the tests check that.
struct CoreEPDecomp {
  CMatrix U;
  CMatrix T;
  CMatrix S;
  CMatrix N;
  Index r = 0;
  Index k = 0;

  [[nodiscard]] Index n() const noexcept { return U.rows(); }
};

/// Partition of U* G U at row/column r.
struct MetricBlocks {
  CMatrix G1;
  CMatrix G2;
  CMatrix G3;
  CMatrix G4;
  bool g1_invertible = true;
  double g1_condition = 1.0;  // infinity when G1 is singular
};

/// A = A1 + A2 with A1 = U [[T, S], [0, 0]] U* and A2 = U [[0, 0], [0, N]] U*.
struct CoreEPParts {
  CMatrix A1;
  CMatrix A2;
};

/// A = Â1 + Â2, the Minkowski-space analogue of the core-EP split.
struct MCoreEPDecomp {
  CMatrix A1hat;
  CMatrix A2hat;
  Index k = 0;
};

/// Complex Schur form reordered so that the r = rk(A^k) eigenvalues of
/// largest modulus lead. Throws NumericalError when the spectral split and
/// the rank of A^k disagree.
[[nodiscard]] CoreEPDecomp core_ep_decompose(const CMatrix& A, const Tolerances& tol = {});

[[nodiscard]] CMatrix reassemble(const CoreEPDecomp& d);
[[nodiscard]] CoreEPParts extract_parts(const CoreEPDecomp& d);

/// Upper-right block of U* A^p U:
/// T^(p-1) S + T^(p-2) S N + ... + S N^(p-1). Zero columns for p == 0.
[[nodiscard]] CMatrix power_corner(const CoreEPDecomp& d, Index p);

/// Partition of U* G U at r. G1 counts as invertible when its smallest
/// singular value exceeds rank_threshold(n, n, subspace_condition), the
/// reference being the error amplification of the leading r columns of U
/// (||U* G U||_2 = 1 otherwise fixes the scale).
[[nodiscard]] MetricBlocks metric_blocks(const CMatrix& U, Index r, const MinkowskiMetric& G,
                                         const Tolerances& tol = {},
                                         double subspace_condition = 1.0);

/// Same, with subspace_condition = ||A^k||_2 / sigma_r(A^k) read off the
/// block row [T^k, T^(k-1) S + ... + S N^(k-1)].
[[nodiscard]] MetricBlocks metric_blocks(const CoreEPDecomp& d, const MinkowskiMetric& G,
                                         const Tolerances& tol = {});

/// Block form: Â1 = U [[T, S + G1^-1 G2 N], [0, 0]] U*, Â2 = A - Â1.
/// Throws NotInvertible(not_m_core_ep_invertible) when G1 is singular.
[[nodiscard]] MCoreEPDecomp m_core_ep_decompose(const CMatrix& A, const MinkowskiMetric& G,
                                                const Tolerances& tol = {});

/// Â1 = A^k (A^k)^ⓜ A, cross-checked against A A^Ⓔ A. Throws NumericalError
/// if the two disagree beyond residual_tol * (1 + ||A||_F)^2.
[[nodiscard]] MCoreEPDecomp m_core_ep_parts_via_projection(const CMatrix& A,
                                                           const MinkowskiMetric& G,
                                                           const Tolerances& tol = {});

/// Residuals of the m-core-EP decomposition properties, keyed by label.
[[nodiscard]] ResidualMap m_core_ep_decomp_residuals(const CMatrix& A, const MCoreEPDecomp& d,
                                                     const MinkowskiMetric& G);

}  // namespace minkinv
