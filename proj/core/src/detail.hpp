#pragma once

// Helpers shared by the implementation files. Not installed.

#include <string>

#include "minkinv/decomp.hpp"
#include "minkinv/types.hpp"

namespace minkinv::detail {

/// Validates a square, finite input whose order matches the metric.
void check_input(const CMatrix& A, const MinkowskiMetric& G, const char* what);
void check_input(const CMatrix& A, const char* what);

/// U [[Lead, Right], [0, 0]] U* for an r-row leading block row.
[[nodiscard]] CMatrix assemble_top(const CMatrix& U, const CMatrix& lead, const CMatrix& right);

/// U [[0, Right], [0, Bottom]] U*.
[[nodiscard]] CMatrix assemble_trailing(const CMatrix& U, const CMatrix& right,
                                        const CMatrix& bottom);

/// T^-1 B for upper triangular T.
[[nodiscard]] CMatrix triangular_solve(const CMatrix& T, const CMatrix& B);

/// G1^-1 B via LU with partial pivoting.
[[nodiscard]] CMatrix g1_solve(const CMatrix& G1, const CMatrix& B);

/// U [[T^-1 G1^-1, 0], [0, 0]] U* G, the shared shape of the m-core and
/// m-core-EP block formulas. `lead` is the invertible leading block (T, or
/// T^k for the m-core inverse of A^k).
[[nodiscard]] CMatrix metric_block_inverse(const CMatrix& U, const CMatrix& lead,
                                           const CMatrix& G1, const MinkowskiMetric& G);

/// U [[T^p, C_p], [0, 0]] U*, i.e. A^p with the nilpotent part dropped.
/// Equal to A^p for p >= k; used wherever a rank decision is made on a
/// power, so that rounding noise in N^p cannot be mistaken for rank.
[[nodiscard]] CMatrix clean_power(const CoreEPDecomp& d, Index p);

/// Throws NumericalError naming the first residual above
/// residual_tol * residual_scale(A, report.X).
void require_small_residuals(const CMatrix& A, const InverseReport& report,
                             const Tolerances& tol, const char* what);

[[nodiscard]] InverseReport failed_report(InverseKind kind, ResidualMap tests, Index index);

[[nodiscard]] std::string format_double(double value);

}  // namespace minkinv::detail
