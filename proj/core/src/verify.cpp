#include "minkinv/verify.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

#include "detail.hpp"
#include "minkinv/decomp.hpp"
#include "minkinv/numlin.hpp"

namespace minkinv {

Complex Rng::unit_phase() {
  return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi));
}

CMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
  CMatrix M(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      M(i, j) = rng.gaussian();
    }
  }
  return M;
}

CMatrix random_unitary(Index n, Rng& rng) {
  if (n == 0) {
    return CMatrix(0, 0);
  }
  const Eigen::HouseholderQR<CMatrix> qr(random_gaussian(n, n, rng));
  CMatrix Q = qr.householderQ();
  const CMatrix& R = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double modulus = std::abs(R(j, j));
    if (modulus > 0.0) {
      Q.col(j) *= R(j, j) / modulus;
    }
  }
  return Q;
}

CMatrix random_nilpotent(Index m, Index k, Rng& rng) {
  if (m == 0) {
    if (k != 0) {
      throw std::invalid_argument("random_nilpotent: empty block has index 0");
    }
    return CMatrix(0, 0);
  }
  if (k < 1 || k > m) {
    throw std::invalid_argument("random_nilpotent: need 1 <= k <= m");
  }
  // Jordan structure: one chain of length k, the rest in chains of length <= k.
  CMatrix J = CMatrix::Zero(m, m);
  Index start = 0;
  Index length = k;
  while (start < m) {
    for (Index i = start; i + 1 < start + length; ++i) {
      J(i, i + 1) = 1.0;
    }
    start += length;
    if (start < m) {
      length = rng.index(1, std::min(k, m - start));
    }
  }
  CMatrix W = CMatrix::Identity(m, m);
  for (Index j = 1; j < m; ++j) {
    for (Index i = 0; i < j; ++i) {
      W(i, j) = 0.5 * rng.gaussian();
    }
  }
  const CMatrix W_inv =
      W.triangularView<Eigen::UnitUpper>().solve(CMatrix::Identity(m, m));
  CMatrix N = W * J * W_inv;
  N.triangularView<Eigen::Lower>().setZero();
  return N;
}

CMatrix random_invertible_triangular(Index r, double cap, Rng& rng) {
  CMatrix T = CMatrix::Zero(r, r);
  const double scale = r > 1 ? 0.5 / std::sqrt(static_cast<double>(r)) : 0.0;
  for (Index j = 0; j < r; ++j) {
    T(j, j) = rng.uniform(1.0 / cap, 1.0) * rng.unit_phase();
    for (Index i = 0; i < j; ++i) {
      T(i, j) = scale * rng.gaussian();
    }
  }
  return T;
}

void CanonicalCaseSpec::validate() const {
  if (n < 0 || r < 0 || r > n) {
    throw std::invalid_argument("CanonicalCaseSpec: need 0 <= r <= n");
  }
  const bool full = r == n && k == 0;
  const bool singular = r < n && k >= 1 && k <= n - r;
  if (!full && !singular) {
    throw std::invalid_argument("CanonicalCaseSpec: k = " + std::to_string(k) +
                                " incompatible with n = " + std::to_string(n) +
                                ", r = " + std::to_string(r));
  }
  if (!std::isfinite(t_condition_cap) || t_condition_cap < 1.0) {
    throw std::invalid_argument("CanonicalCaseSpec: t_condition_cap must be finite and >= 1");
  }
}

GeneratedCase generate_case_detailed(const CanonicalCaseSpec& spec, const MinkowskiMetric& G) {
  spec.validate();
  if (G.dim() != spec.n) {
    throw DimensionError("generate_case: metric dimension does not match spec.n");
  }
  Rng rng(spec.seed);
  const Index m = spec.n - spec.r;
  GeneratedCase out;
  out.T = random_invertible_triangular(spec.r, spec.t_condition_cap, rng);
  out.S = random_gaussian(spec.r, m, rng);
  out.N = random_nilpotent(m, spec.k, rng);

  for (int attempt = 0; attempt < generator_resample_budget; ++attempt) {
    CMatrix U = random_unitary(spec.n, rng);
    const MetricBlocks mb = metric_blocks(U, spec.r, G);
    if (mb.g1_condition < generator_g1_condition_cap) {
      out.U = std::move(U);
      out.g1_condition = mb.g1_condition;
      out.resamples = attempt;
      out.A = detail::assemble_top(out.U, out.T, out.S) +
              detail::assemble_trailing(out.U, CMatrix::Zero(spec.r, m), out.N);
      return out;
    }
  }
  throw NumericalError("generate_case: no U with cond(G1) < 1e6 after " +
                       std::to_string(generator_resample_budget) + " draws (seed " +
                       std::to_string(spec.seed) + ")");
}

CMatrix generate_case(const CanonicalCaseSpec& spec, const MinkowskiMetric& G) {
  return generate_case_detailed(spec, G).A;
}

CMatrix oracle_m_core_ep(const CMatrix& A, const MinkowskiMetric& G, const Tolerances& tol) {
  detail::check_input(A, G, "oracle_m_core_ep");
  tol.validate();
  const Index n = A.rows();
  if (n > 8) {
    throw DimensionError("oracle_m_core_ep: n <= 8 only");
  }
  const Index k = matrix_index(A, tol);
  const CMatrix Ak = matrix_power(A, k);
  const CMatrix Ak1 = Ak * A;
  const double norm2 = spectral_norm(A);
  const Index r = numerical_rank(Ak, tol, std::pow(norm2, static_cast<double>(k)));
  if (r == 0) {
    return CMatrix::Zero(n, n);
  }
  const Index r_kk = numerical_rank(minkowski_adjoint(Ak, G) * Ak, tol,
                                    std::pow(norm2, 2.0 * static_cast<double>(k)));
  if (r_kk != r) {
    ResidualMap tests{{"rk(A^k)", static_cast<double>(r)},
                      {"rk((A^k)~A^k)", static_cast<double>(r_kk)}};
    throw NotInvertible(Failure::not_m_core_ep_invertible,
                        detail::failed_report(InverseKind::m_core_ep, std::move(tests), k),
                        "rank test failed");
  }

  // X = Q Y puts R(X) inside R(A^k). The unknowns are Re Y and Im Y; both
  // remaining linear conditions are real-linear in them (the adjoint
  // conjugates), so each unknown's column is the image of a unit Y.
  const CMatrix Q = range_basis(Ak, r);
  const Index unknowns = 2 * r * n;
  const Index equations = 4 * n * n;
  Eigen::MatrixXd M(equations, unknowns);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(equations);

  auto flatten = [n](const CMatrix& first, const CMatrix& second, auto&& sink) {
    Index row = 0;
    for (const CMatrix* part : {&first, &second}) {
      for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
          sink(row++, (*part)(i, j).real());
          sink(row++, (*part)(i, j).imag());
        }
      }
    }
  };

  const CMatrix AQ = A * Q;
  Index column = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < r; ++i) {
      for (const Complex unit : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        CMatrix Y = CMatrix::Zero(r, n);
        Y(i, j) = unit;
        const CMatrix X = Q * Y;
        const CMatrix AX = AQ * Y;
        const CMatrix image_a = X * Ak1;
        const CMatrix image_b = minkowski_adjoint(AX, G) - AX;
        flatten(image_a, image_b, [&](Index row, double v) { M(row, column) = v; });
        ++column;
      }
    }
  }
  flatten(Ak, CMatrix::Zero(n, n), [&](Index row, double v) { rhs(row) = v; });

  const Eigen::VectorXd y = M.completeOrthogonalDecomposition().solve(rhs);
  CMatrix Y(r, n);
  column = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < r; ++i) {
      Y(i, j) = Complex(y(column), y(column + 1));
      column += 2;
    }
  }
  const CMatrix X = Q * Y;

  const double scale = tol.residual_tol * residual_scale(A, X);
  const double ls = (M * y - rhs).norm();
  if (!(ls <= scale)) {
    throw NumericalError("oracle_m_core_ep: least-squares residual " + detail::format_double(ls) +
                         " exceeds " + detail::format_double(scale));
  }
  const double idempotent = (X * A * X - X).norm();
  if (!(idempotent <= scale)) {
    throw NumericalError("oracle_m_core_ep: XAX=X residual " + detail::format_double(idempotent) +
                         " exceeds " + detail::format_double(scale));
  }
  return X;
}

ResidualMap check_axioms(const CMatrix& A, const CMatrix& X, InverseKind kind,
                         const MinkowskiMetric& G, const Tolerances& tol) {
  require_square(A, "check_axioms");
  return check_axioms_at_index(A, X, kind, G, matrix_index(A, tol), tol);
}

ResidualMap check_axioms_at_index(const CMatrix& A, const CMatrix& X, InverseKind kind,
                                  const MinkowskiMetric& G, Index k, const Tolerances& tol) {
  require_square(A, "check_axioms");
  if (X.rows() != A.rows() || X.cols() != A.cols()) {
    throw DimensionError("check_axioms: X must have the shape of A");
  }
  if (G.dim() != A.rows()) {
    throw DimensionError("check_axioms: metric dimension does not match A");
  }
  if (k < 0) {
    throw std::invalid_argument("check_axioms: index must be >= 0");
  }
  const CMatrix AX = A * X;
  const CMatrix XA = X * A;
  auto range_residual = [&]() {
    const CMatrix Ak = matrix_power(A, k);
    const Index r =
        numerical_rank(Ak, tol, std::pow(spectral_norm(A), static_cast<double>(k)));
    if (r == 0) {
      return X.norm();
    }
    const CMatrix Q = range_basis(Ak, r);
    return (X - Q * (Q.adjoint() * X)).norm();
  };

  ResidualMap res;
  switch (kind) {
    case InverseKind::minkowski:
      res[eq::axa] = (AX * A - A).norm();
      res[eq::xax] = (XA * X - X).norm();
      res[eq::ax_minkowski] = (minkowski_adjoint(AX, G) - AX).norm();
      res[eq::xa_minkowski] = (minkowski_adjoint(XA, G) - XA).norm();
      break;
    case InverseKind::group:
    case InverseKind::drazin: {
      const CMatrix Ak = matrix_power(A, k);
      res[eq::ak_xa] = (Ak * XA - Ak).norm();
      res[eq::xax] = (XA * X - X).norm();
      res[eq::commute] = (AX - XA).norm();
      break;
    }
    case InverseKind::core_ep: {
      const CMatrix Ak = matrix_power(A, k);
      res[eq::x_ak1] = (X * Ak * A - Ak).norm();
      res[eq::xax] = (XA * X - X).norm();
      res[eq::ax_hermitian] = (AX.adjoint() - AX).norm();
      res[eq::range] = range_residual();
      break;
    }
    case InverseKind::m_core:
      res[eq::axa] = (AX * A - A).norm();
      res[eq::ax2] = (AX * X - X).norm();
      res[eq::ax_minkowski] = (minkowski_adjoint(AX, G) - AX).norm();
      break;
    case InverseKind::m_core_ep: {
      const CMatrix Ak = matrix_power(A, k);
      res[eq::xax] = (XA * X - X).norm();
      res[eq::x_ak1] = (X * Ak * A - Ak).norm();
      res[eq::ax_minkowski] = (minkowski_adjoint(AX, G) - AX).norm();
      res[eq::range] = range_residual();
      break;
    }
  }
  return res;
}

}  // namespace minkinv
