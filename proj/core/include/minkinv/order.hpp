#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "minkinv/types.hpp"
#include "minkinv/verify.hpp"

namespace minkinv {

enum class OrderRelation { m_core, m_core_ep };

/// Verdict of a single route. Residuals at most the bound give `holds`,
/// above ten times the bound `fails`; the band between is `indeterminate`.
enum class Decision { holds, fails, indeterminate };

[[nodiscard]] std::string_view to_string(OrderRelation relation) noexcept;
[[nodiscard]] std::string_view to_string(Decision decision) noexcept;
[[nodiscard]] std::optional<OrderRelation> parse_order_relation(std::string_view text) noexcept;

struct OrderVerdict {
  OrderRelation relation = OrderRelation::m_core_ep;
  bool holds = false;  // definition == holds
  Decision definition = Decision::indeterminate;
  Decision characterization = Decision::indeterminate;
  std::optional<Decision> transfer;  // Â1 <=m B̂1, m-core-EP only
  ResidualMap def_residuals;
  ResidualMap char_residuals;
  ResidualMap transfer_residuals;
  ResidualMap consequence_residuals;  // absorbing identities, m-core only
  bool agree = false;                 // every computed route returns the same decision
  bool hypothesis_met = true;         // rk(B) >= rk(A)
  double scale = 0.0;                 // bound on the definition residuals
  std::vector<std::string> diagnostics;
};

/// A <=m B: A^m A = A^m B and A A^m = B A^m. The characterization route is
/// A^2 = BA and A~A = B~A. When the definition holds, the absorbing
/// identities A^m B B^m = A^m and B^m B A^m = A^m are also measured.
/// Throws NotInvertible if either matrix is not CM or not m-core invertible.
[[nodiscard]] OrderVerdict m_core_leq(const CMatrix& A, const CMatrix& B,
                                      const MinkowskiMetric& G, const Tolerances& tol = {});

/// A <=E B: A^E A = A^E B and A A^E = B A^E, against A^(k+1) = B A^k and
/// A~A^k = B~A^k, and against Â1 <=m B̂1. Throws NotInvertible if either
/// matrix is not m-core-EP invertible.
[[nodiscard]] OrderVerdict m_core_ep_leq(const CMatrix& A, const CMatrix& B,
                                         const MinkowskiMetric& G, const Tolerances& tol = {});

[[nodiscard]] OrderVerdict order_leq(OrderRelation relation, const CMatrix& A, const CMatrix& B,
                                     const MinkowskiMetric& G, const Tolerances& tol = {});

/// Block data for A = Û [[T, S1, S2], [0, N11, N12], [0, N13, N14]] Û* and
/// B = Û [[T, alpha, beta], [0, Ttilde, Shat], [0, 0, Nhat]] Û*.
/// Sizes: T is r x r, Ttilde is (s - r) x (s - r), Nhat is (n - s) x (n - s).
struct OrderCanonicalSpec {
  CMatrix Uhat;
  CMatrix T;
  CMatrix Ttilde;
  CMatrix S1;
  CMatrix S2;
  CMatrix Shat;
  CMatrix Nhat;
  CMatrix N11;
  CMatrix N12;
  CMatrix N13;
  CMatrix N14;

  [[nodiscard]] Index n() const noexcept { return Uhat.rows(); }
  [[nodiscard]] Index r() const noexcept { return T.rows(); }
  [[nodiscard]] Index s() const noexcept { return T.rows() + Ttilde.rows(); }

  /// Throws DimensionError on a block size mismatch and
  /// std::invalid_argument when Û is not unitary, T or Ttilde is singular,
  /// or the nilpotent blocks are not nilpotent.
  void validate(const Tolerances& tol = {}) const;
};

struct OrderPair {
  CMatrix A;
  CMatrix B;
  CMatrix alpha;
  CMatrix beta;
};

/// alpha = S1 + G1^-1 (G21 N11 - G21 Ttilde + G22 N13),
/// beta  = S2 + G1^-1 (G21 N12 - G21 Shat + G22 N14 - G22 Nhat),
/// where [G1, G21, G22] is the first block row of Û* G Û. Throws
/// NumericalError when G1 or the leading s x s block of Û* G Û is singular.
[[nodiscard]] OrderPair order_pair(const OrderCanonicalSpec& spec, const MinkowskiMetric& G,
                                   const Tolerances& tol = {});

/// Random spec with Û resampled until both metric blocks have condition
/// number below 1e6.
[[nodiscard]] OrderCanonicalSpec random_order_spec(Index n, Index r, Index s, Rng& rng);

/// B = U [[T, S - G1^-1 G2 P + G1^-1 G2 N], [0, P]] U* from the core-EP
/// form of A; A <=E B for every (n - r) x (n - r) block P.
[[nodiscard]] CMatrix order_successor(const CMatrix& A, const CMatrix& P,
                                      const MinkowskiMetric& G, const Tolerances& tol = {});

}  // namespace minkinv
