#pragma once

#include "minkinv/types.hpp"

namespace minkinv {

// Every function below validates its input (square, finite, conformable with
// the metric) and returns a report whose residuals are the Frobenius norms of
// the defining equations of that inverse, as produced by check_axioms.
// A report that comes back always has exists == true; non-existence is
// signalled by NotInvertible, whose report() carries the failed test.

/// Solution of AXA=A, XAX=X, (AX)~=AX, (XA)~=XA.
/// Exists iff rk(A~A) = rk(AA~) = rk(A). Computed from a full-rank
/// factorization A = FH (column-pivoted QR) as X = GH* (F*GAGH*)^-1 F*G.
[[nodiscard]] InverseReport minkowski_inverse(const CMatrix& A, const MinkowskiMetric& G,
                                              const Tolerances& tol = {});

/// U [[T^-1, T^-2 S], [0, 0]] U*. Requires Ind(A) <= 1.
[[nodiscard]] InverseReport group_inverse(const CMatrix& A, const Tolerances& tol = {});

/// U [[T^-1, T^-(k+2) Tbar], [0, 0]] U*, cross-checked against
/// A^k (A^(k+1))^#. Always exists.
[[nodiscard]] InverseReport drazin_inverse(const CMatrix& A, const Tolerances& tol = {});

/// U [[T^-1, 0], [0, 0]] U*. Always exists.
[[nodiscard]] InverseReport core_ep_inverse(const CMatrix& A, const Tolerances& tol = {});

/// U [[T^-1 G1^-1, 0], [0, 0]] U* G for a CM matrix.
/// Throws NotInvertible(not_cm) when Ind(A) > 1 and
/// NotInvertible(not_m_core_invertible) when rk(A~A) != rk(A).
[[nodiscard]] InverseReport m_core_inverse(const CMatrix& A, const MinkowskiMetric& G,
                                           const Tolerances& tol = {});

/// rk((A^k)~ A^k) == rk(A^k). The G1 test on the core-EP partition is run
/// alongside; if the two disagree a NumericalError is thrown.
[[nodiscard]] bool m_core_ep_exists(const CMatrix& A, const MinkowskiMetric& G,
                                    const Tolerances& tol = {});

/// U [[T^-1 G1^-1, 0], [0, 0]] U* G.
[[nodiscard]] InverseReport m_core_ep_inverse(const CMatrix& A, const MinkowskiMetric& G,
                                              const Tolerances& tol = {});

/// A^k A^D (A^k)^ⓜ, checked against the block formula.
[[nodiscard]] InverseReport m_core_ep_via_drazin(const CMatrix& A, const MinkowskiMetric& G,
                                                 const Tolerances& tol = {});

/// A1^ⓜ, A1^# A1 A1^m (when rk(A^k (A^k)~) = r) and Â1^ⓜ; all pairs are
/// compared and the A1^ⓜ route is returned. A skipped route is noted in the
/// diagnostics.
[[nodiscard]] InverseReport m_core_ep_via_parts(const CMatrix& A, const MinkowskiMetric& G,
                                                const Tolerances& tol = {});

/// Dispatch on kind. Kinds that ignore the metric accept it anyway.
[[nodiscard]] InverseReport compute_inverse(InverseKind kind, const CMatrix& A,
                                            const MinkowskiMetric& G, const Tolerances& tol = {});

}  // namespace minkinv
