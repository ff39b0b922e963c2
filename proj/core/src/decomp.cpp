#include "minkinv/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "detail.hpp"
#include "minkinv/ginv.hpp"
#include "minkinv/numlin.hpp"
#include "minkinv/schur.hpp"

namespace minkinv {

namespace {

std::vector<bool> select_largest(const CMatrix& R, Index count) {
  const Index n = R.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&R](Index a, Index b) {
    return std::abs(R(a, a)) > std::abs(R(b, b));
  });
  std::vector<bool> select(static_cast<std::size_t>(n), false);
  for (Index i = 0; i < count; ++i) {
    select[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
  }
  return select;
}

}  // namespace

CoreEPDecomp core_ep_decompose(const CMatrix& A, const Tolerances& tol) {
  detail::check_input(A, "core_ep_decompose");
  tol.validate();
  const Index n = A.rows();
  CoreEPDecomp d;
  if (n == 0) {
    d.U = d.T = d.S = d.N = CMatrix(0, 0);
    return d;
  }

  const double norm2 = spectral_norm(A);
  d.k = matrix_index(A, tol);
  d.r = numerical_rank(matrix_power(A, d.k), tol, std::pow(norm2, static_cast<double>(d.k)));

  SchurForm form = complex_schur(A);

  // The count comes from the rank of A^k; the spectrum only says which
  // eigenvalues. Eigenvalues of a defective nilpotent block come out of the
  // QR iteration at size ~eps^(1/k), so a purely spectral cut is unusable.
  const std::vector<bool> select = select_largest(form.R, d.r);
  const double eig_zero =
      tol.eig_zero_factor * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * norm2;
  double smallest_kept = std::numeric_limits<double>::infinity();
  double largest_dropped = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double modulus = std::abs(form.R(i, i));
    if (select[static_cast<std::size_t>(i)]) {
      smallest_kept = std::min(smallest_kept, modulus);
    } else {
      largest_dropped = std::max(largest_dropped, modulus);
    }
  }
  if (d.r > 0 && (smallest_kept <= eig_zero || smallest_kept <= largest_dropped)) {
    throw NumericalError("core_ep_decompose: spectral split disagrees with rk(A^k) = " +
                         std::to_string(d.r) + " (smallest kept |lambda| = " +
                         detail::format_double(smallest_kept) + ", largest dropped = " +
                         detail::format_double(largest_dropped) + ", zero threshold = " +
                         detail::format_double(eig_zero) + ")");
  }
  reorder_leading(form, select);

  const Index m = n - d.r;
  d.U = std::move(form.U);
  d.T = form.R.topLeftCorner(d.r, d.r);
  d.S = form.R.topRightCorner(d.r, m);
  d.N = form.R.bottomRightCorner(m, m);

  if (m > 0 && d.k > 0) {
    const double nil = matrix_power(d.N, d.k).norm();
    const double bound =
        tol.residual_tol * std::pow(1.0 + d.N.norm(), static_cast<double>(d.k));
    if (nil > bound) {
      throw NumericalError("core_ep_decompose: trailing block is not nilpotent to tolerance (||N^k||_F = " +
                           detail::format_double(nil) + ")");
    }
  }
  return d;
}

CMatrix reassemble(const CoreEPDecomp& d) {
  return detail::assemble_top(d.U, d.T, d.S) +
         detail::assemble_trailing(d.U, CMatrix::Zero(d.r, d.N.cols()), d.N);
}

CoreEPParts extract_parts(const CoreEPDecomp& d) {
  return {detail::assemble_top(d.U, d.T, d.S),
          detail::assemble_trailing(d.U, CMatrix::Zero(d.r, d.N.cols()), d.N)};
}

CMatrix power_corner(const CoreEPDecomp& d, Index p) {
  const Index m = d.N.rows();
  CMatrix corner = CMatrix::Zero(d.r, m);
  if (p <= 0) {
    return corner;
  }
  // C_1 = S, C_(p+1) = T C_p + S N^p.
  corner = d.S;
  CMatrix n_power = d.N;
  for (Index q = 1; q < p; ++q) {
    corner = d.T * corner + d.S * n_power;
    n_power = n_power * d.N;
  }
  return corner;
}

MetricBlocks metric_blocks(const CMatrix& U, Index r, const MinkowskiMetric& G,
                           const Tolerances& tol, double subspace_condition) {
  if (U.rows() != G.dim() || U.cols() != G.dim()) {
    throw DimensionError("metric_blocks: unitary factor does not match metric dimension");
  }
  if (r < 0 || r > U.rows()) {
    throw DimensionError("metric_blocks: partition index out of range");
  }
  const Index n = U.rows();
  const Index m = n - r;
  const CMatrix M = U.adjoint() * G.left(U);
  MetricBlocks mb;
  mb.G1 = M.topLeftCorner(r, r);
  mb.G2 = M.topRightCorner(r, m);
  mb.G3 = M.bottomLeftCorner(m, r);
  mb.G4 = M.bottomRightCorner(m, m);
  if (r == 0) {
    mb.g1_invertible = true;
    mb.g1_condition = 1.0;
    return mb;
  }
  const Eigen::VectorXd s = singular_values(mb.G1);
  const double smallest = s(s.size() - 1);
  mb.g1_invertible = smallest > rank_threshold(n, n, std::max(1.0, subspace_condition), tol);
  mb.g1_condition =
      mb.g1_invertible ? s(0) / smallest : std::numeric_limits<double>::infinity();
  return mb;
}

MetricBlocks metric_blocks(const CoreEPDecomp& d, const MinkowskiMetric& G,
                           const Tolerances& tol) {
  double condition = 1.0;
  if (d.r > 0 && d.k > 0) {
    CMatrix row(d.r, d.n());
    row << matrix_power(d.T, d.k), power_corner(d, d.k);
    const Eigen::VectorXd s = singular_values(row);
    condition = s(d.r - 1) > 0.0 ? s(0) / s(d.r - 1) : std::numeric_limits<double>::infinity();
  }
  return metric_blocks(d.U, d.r, G, tol, condition);
}

MCoreEPDecomp m_core_ep_decompose(const CMatrix& A, const MinkowskiMetric& G,
                                  const Tolerances& tol) {
  detail::check_input(A, G, "m_core_ep_decompose");
  const CoreEPDecomp d = core_ep_decompose(A, tol);
  const MetricBlocks mb = metric_blocks(d, G, tol);
  if (!mb.g1_invertible) {
    ResidualMap tests{{"sigma_min(G1)", singular_values(mb.G1).minCoeff()}};
    throw NotInvertible(Failure::not_m_core_ep_invertible,
                        detail::failed_report(InverseKind::m_core_ep, std::move(tests), d.k),
                        "G1 singular");
  }
  const CMatrix shift = detail::g1_solve(mb.G1, mb.G2 * d.N);  // G1^-1 G2 N
  MCoreEPDecomp out;
  out.k = d.k;
  out.A1hat = detail::assemble_top(d.U, d.T, d.S + shift);
  out.A2hat = detail::assemble_trailing(d.U, -shift, d.N);
  return out;
}

MCoreEPDecomp m_core_ep_parts_via_projection(const CMatrix& A, const MinkowskiMetric& G,
                                             const Tolerances& tol) {
  detail::check_input(A, G, "m_core_ep_parts_via_projection");
  const InverseReport inverse = m_core_ep_inverse(A, G, tol);
  const Index k = inverse.index;
  const CMatrix Ak = matrix_power(A, k);
  const InverseReport ak_inverse =
      m_core_inverse(detail::clean_power(core_ep_decompose(A, tol), k), G, tol);

  MCoreEPDecomp out;
  out.k = k;
  out.A1hat = Ak * ak_inverse.X * A;
  const CMatrix via_inverse = A * inverse.X * A;
  const double gap = (out.A1hat - via_inverse).norm();
  if (gap > tol.residual_tol * residual_scale(A, inverse.X)) {
    throw NumericalError("m_core_ep_parts_via_projection: A^k (A^k)^m A and A A^E A differ by " +
                         detail::format_double(gap));
  }
  out.A2hat = A - out.A1hat;
  return out;
}

ResidualMap m_core_ep_decomp_residuals(const CMatrix& A, const MCoreEPDecomp& d,
                                       const MinkowskiMetric& G) {
  ResidualMap res;
  res["A1hat+A2hat=A"] = (d.A1hat + d.A2hat - A).norm();
  res["A2hat^k=0"] = d.k == 0 ? d.A2hat.norm() : matrix_power(d.A2hat, d.k).norm();
  res["A1hat~A2hat=0"] = (minkowski_adjoint(d.A1hat, G) * d.A2hat).norm();
  res["A2hat*A1hat=0"] = (d.A2hat * d.A1hat).norm();
  return res;
}

}  // namespace minkinv
