#pragma once

#include <cstdint>
#include <random>

#include "minkinv/types.hpp"

namespace minkinv {

/// Equation labels used in every residual map.
namespace eq {
inline constexpr const char* axa = "AXA=A";
inline constexpr const char* xax = "XAX=X";
inline constexpr const char* ax_minkowski = "(AX)~=AX";
inline constexpr const char* xa_minkowski = "(XA)~=XA";
inline constexpr const char* ax_hermitian = "(AX)*=AX";
inline constexpr const char* ak_xa = "A^kXA=A^k";
inline constexpr const char* commute = "AX=XA";
inline constexpr const char* x_ak1 = "XA^(k+1)=A^k";
inline constexpr const char* ax2 = "AX^2=X";
inline constexpr const char* range = "R(X)<=R(A^k)";
}  // namespace eq

/// Seeded random stream. Passed explicitly so every consumer is
/// reproducible from its seed and independent of call order elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }
  Complex gaussian() { return {normal(), normal()}; }
  Complex unit_phase();
  /// Uniform in [lo, hi].
  Index index(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(engine_); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

[[nodiscard]] CMatrix random_gaussian(Index rows, Index cols, Rng& rng);

/// Q from the QR factorization of a complex Gaussian matrix, with the
/// phases of R's diagonal folded back into Q (Haar distributed).
[[nodiscard]] CMatrix random_unitary(Index n, Rng& rng);

/// m x m strictly upper triangular matrix with nilpotency index exactly k
/// (k = 0 only for m = 0, k = 1 gives the zero matrix).
[[nodiscard]] CMatrix random_nilpotent(Index m, Index k, Rng& rng);

/// Upper triangular r x r matrix with diagonal moduli in [1/cap, 1].
[[nodiscard]] CMatrix random_invertible_triangular(Index r, double cap, Rng& rng);

struct CanonicalCaseSpec {
  Index n = 0;
  Index r = 0;
  Index k = 0;
  std::uint64_t seed = 0;
  double t_condition_cap = 10.0;

  /// (r == n and k == 0) or (r < n and 1 <= k <= n - r); throws
  /// std::invalid_argument otherwise.
  void validate() const;
};

struct GeneratedCase {
  CMatrix A;
  CMatrix U;
  CMatrix T;
  CMatrix S;
  CMatrix N;
  double g1_condition = 1.0;
  int resamples = 0;
};

inline constexpr double generator_g1_condition_cap = 1e6;
inline constexpr int generator_resample_budget = 200;

/// A = U [[T, S], [0, N]] U* with U resampled until cond(G1) < 1e6.
/// Throws NumericalError (naming the seed) if the budget runs out.
[[nodiscard]] GeneratedCase generate_case_detailed(const CanonicalCaseSpec& spec,
                                                   const MinkowskiMetric& G);
[[nodiscard]] CMatrix generate_case(const CanonicalCaseSpec& spec, const MinkowskiMetric& G);

/// The m-core-EP inverse straight from its four defining equations: with
/// X = Q Y (Q an orthonormal basis of R(A^k)), XA^(k+1) = A^k and
/// (AX)~ = AX are stacked into one real least-squares system in Y. XAX = X
/// is checked afterwards. Does not use the core-EP decomposition.
/// Throws NotInvertible when the existence test fails and NumericalError
/// when the least-squares residual exceeds tolerance.
[[nodiscard]] CMatrix oracle_m_core_ep(const CMatrix& A, const MinkowskiMetric& G,
                                       const Tolerances& tol = {});

/// Frobenius residual of every defining equation of `kind`. Pure
/// measurement; only dimension mismatches throw. Ind(A) is computed with tol.
[[nodiscard]] ResidualMap check_axioms(const CMatrix& A, const CMatrix& X, InverseKind kind,
                                       const MinkowskiMetric& G, const Tolerances& tol = {});

/// Same with Ind(A) supplied by the caller.
[[nodiscard]] ResidualMap check_axioms_at_index(const CMatrix& A, const CMatrix& X,
                                                InverseKind kind, const MinkowskiMetric& G,
                                                Index k, const Tolerances& tol = {});

}  // namespace minkinv
