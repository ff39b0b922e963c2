#include "minkinv/order.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "detail.hpp"
#include "minkinv/decomp.hpp"
#include "minkinv/ginv.hpp"
#include "minkinv/numlin.hpp"

namespace minkinv {

namespace {

constexpr double hysteresis = 10.0;

Decision decide(const ResidualMap& residuals, double bound) {
  double worst = 0.0;
  for (const auto& [label, value] : residuals) {
    if (!std::isfinite(value)) {
      return Decision::indeterminate;
    }
    worst = std::max(worst, value);
  }
  if (worst <= bound) {
    return Decision::holds;
  }
  return worst > hysteresis * bound ? Decision::fails : Decision::indeterminate;
}

void check_pair(const CMatrix& A, const CMatrix& B, const MinkowskiMetric& G, const char* what) {
  detail::check_input(A, G, what);
  detail::check_input(B, G, what);
}

ResidualMap definition_residuals(const CMatrix& A, const CMatrix& B, const CMatrix& X,
                                 const char* x_name) {
  const std::string x(x_name);
  ResidualMap res;
  res[x + "A=" + x + "B"] = (X * A - X * B).norm();
  res["A" + x + "=B" + x] = (A * X - B * X).norm();
  return res;
}

/// A^(k+1) = B A^k and A~A^k = B~A^k, with the bound stored in `bound`.
ResidualMap characterization_residuals(const CMatrix& A, const CMatrix& B,
                                       const MinkowskiMetric& G, Index k, double residual_tol,
                                       double& bound) {
  const CMatrix Ak = matrix_power(A, k);
  bound = residual_tol * (1.0 + A.norm()) * (1.0 + B.norm()) * (1.0 + Ak.norm());
  ResidualMap res;
  if (k == 1) {
    res["A^2=BA"] = (A * Ak - B * Ak).norm();
    res["A~A=B~A"] = ((minkowski_adjoint(A, G) - minkowski_adjoint(B, G)) * Ak).norm();
  } else {
    res["A^(k+1)=BA^k"] = (A * Ak - B * Ak).norm();
    res["A~A^k=B~A^k"] = ((minkowski_adjoint(A, G) - minkowski_adjoint(B, G)) * Ak).norm();
  }
  return res;
}

void flag_hypothesis(OrderVerdict& v, const CMatrix& A, const CMatrix& B, const Tolerances& tol) {
  const Index rank_a = numerical_rank(A, tol);
  const Index rank_b = numerical_rank(B, tol);
  v.hypothesis_met = rank_b >= rank_a;
  if (!v.hypothesis_met) {
    v.diagnostics.push_back("hypothesis rk(B) >= rk(A) unmet: rk(A) = " + std::to_string(rank_a) +
                            ", rk(B) = " + std::to_string(rank_b));
  }
}

}  // namespace

std::string_view to_string(OrderRelation relation) noexcept {
  switch (relation) {
    case OrderRelation::m_core:
      return "m-core";
    case OrderRelation::m_core_ep:
      return "m-core-ep";
  }
  return "?";
}

std::string_view to_string(Decision decision) noexcept {
  switch (decision) {
    case Decision::holds:
      return "holds";
    case Decision::fails:
      return "fails";
    case Decision::indeterminate:
      return "indeterminate";
  }
  return "?";
}

std::optional<OrderRelation> parse_order_relation(std::string_view text) noexcept {
  if (text == "m-core" || text == "m_core") {
    return OrderRelation::m_core;
  }
  if (text == "m-core-ep" || text == "m_core_ep") {
    return OrderRelation::m_core_ep;
  }
  return std::nullopt;
}

OrderVerdict m_core_leq(const CMatrix& A, const CMatrix& B, const MinkowskiMetric& G,
                        const Tolerances& tol) {
  check_pair(A, B, G, "m_core_leq");
  const InverseReport ra = m_core_inverse(A, G, tol);
  const InverseReport rb = m_core_inverse(B, G, tol);
  const CMatrix& Xa = ra.X;
  const CMatrix& Xb = rb.X;

  OrderVerdict v;
  v.relation = OrderRelation::m_core;
  v.scale = tol.residual_tol * (1.0 + A.norm()) * (1.0 + B.norm()) * (1.0 + Xa.norm());
  v.def_residuals = definition_residuals(A, B, Xa, "A^m");
  v.definition = decide(v.def_residuals, v.scale);
  double char_bound = 0.0;
  v.char_residuals =
      characterization_residuals(A, B, G, ra.index, tol.residual_tol, char_bound);
  v.characterization = decide(v.char_residuals, char_bound);
  flag_hypothesis(v, A, B, tol);

  if (v.definition == Decision::holds) {
    v.consequence_residuals["A^mBB^m=A^m"] = (Xa * B * Xb - Xa).norm();
    v.consequence_residuals["B^mBA^m=A^m"] = (Xb * B * Xa - Xa).norm();
    const double bound = v.scale * (1.0 + Xb.norm());
    if (v.hypothesis_met && decide(v.consequence_residuals, bound) != Decision::holds) {
      v.diagnostics.push_back("absorbing identities violated");
    }
  }
  v.holds = v.definition == Decision::holds;
  v.agree = v.definition == v.characterization;
  return v;
}

OrderVerdict m_core_ep_leq(const CMatrix& A, const CMatrix& B, const MinkowskiMetric& G,
                           const Tolerances& tol) {
  check_pair(A, B, G, "m_core_ep_leq");
  const InverseReport ra = m_core_ep_inverse(A, G, tol);
  if (!m_core_ep_exists(B, G, tol)) {
    // Rethrows with B's failing test attached.
    static_cast<void>(m_core_ep_inverse(B, G, tol));
  }
  const CMatrix& Xa = ra.X;

  OrderVerdict v;
  v.relation = OrderRelation::m_core_ep;
  v.scale = tol.residual_tol * (1.0 + A.norm()) * (1.0 + B.norm()) * (1.0 + Xa.norm());
  v.def_residuals = definition_residuals(A, B, Xa, "A^E");
  v.definition = decide(v.def_residuals, v.scale);
  double char_bound = 0.0;
  v.char_residuals =
      characterization_residuals(A, B, G, ra.index, tol.residual_tol, char_bound);
  v.characterization = decide(v.char_residuals, char_bound);
  flag_hypothesis(v, A, B, tol);

  const CMatrix a1hat = m_core_ep_decompose(A, G, tol).A1hat;
  const CMatrix b1hat = m_core_ep_decompose(B, G, tol).A1hat;
  const OrderVerdict hat = m_core_leq(a1hat, b1hat, G, tol);
  v.transfer = hat.definition;
  v.transfer_residuals = hat.def_residuals;

  v.holds = v.definition == Decision::holds;
  v.agree = v.definition == v.characterization && *v.transfer == v.definition;
  return v;
}

OrderVerdict order_leq(OrderRelation relation, const CMatrix& A, const CMatrix& B,
                       const MinkowskiMetric& G, const Tolerances& tol) {
  return relation == OrderRelation::m_core ? m_core_leq(A, B, G, tol)
                                           : m_core_ep_leq(A, B, G, tol);
}

void OrderCanonicalSpec::validate(const Tolerances& tol) const {
  const Index dim = n();
  const Index lead = r();
  const Index mid = Ttilde.rows();
  const Index tail = dim - lead - mid;
  auto expect = [](const CMatrix& M, Index rows, Index cols, const char* name) {
    if (M.rows() != rows || M.cols() != cols) {
      throw DimensionError(std::string("OrderCanonicalSpec: ") + name + " must be " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    }
  };
  if (Uhat.cols() != dim || T.cols() != lead || Ttilde.cols() != mid || tail < 0) {
    throw DimensionError("OrderCanonicalSpec: Uhat, T and Ttilde must be square with r <= s <= n");
  }
  expect(S1, lead, mid, "S1");
  expect(S2, lead, tail, "S2");
  expect(Shat, mid, tail, "Shat");
  expect(Nhat, tail, tail, "Nhat");
  expect(N11, mid, mid, "N11hat");
  expect(N12, mid, tail, "N12hat");
  expect(N13, tail, mid, "N13hat");
  expect(N14, tail, tail, "N14hat");

  const double slack = tol.residual_tol * (1.0 + static_cast<double>(dim));
  if ((Uhat.adjoint() * Uhat - CMatrix::Identity(dim, dim)).norm() > slack) {
    throw std::invalid_argument("OrderCanonicalSpec: Uhat is not unitary");
  }
  if (numerical_rank(T, tol) != lead || numerical_rank(Ttilde, tol) != mid) {
    throw std::invalid_argument("OrderCanonicalSpec: T and Ttilde must be invertible");
  }
  auto nilpotent = [&](const CMatrix& M) {
    if (M.rows() == 0) {
      return true;
    }
    const double bound =
        tol.residual_tol * std::pow(1.0 + M.norm(), static_cast<double>(M.rows()));
    return matrix_power(M, M.rows()).norm() <= bound;
  };
  CMatrix block(mid + tail, mid + tail);
  block << N11, N12, N13, N14;
  if (!nilpotent(block) || !nilpotent(Nhat)) {
    throw std::invalid_argument("OrderCanonicalSpec: nilpotent blocks are not nilpotent");
  }
}

OrderPair order_pair(const OrderCanonicalSpec& spec, const MinkowskiMetric& G,
                     const Tolerances& tol) {
  spec.validate(tol);
  const Index n = spec.n();
  const Index r = spec.r();
  const Index s = spec.s();
  const Index mid = s - r;
  const Index tail = n - s;
  if (G.dim() != n) {
    throw DimensionError("order_pair: metric dimension does not match the spec");
  }
  const MetricBlocks lead = metric_blocks(spec.Uhat, r, G, tol);
  const MetricBlocks wide = metric_blocks(spec.Uhat, s, G, tol);
  if (!lead.g1_invertible || !wide.g1_invertible) {
    throw NumericalError("order_pair: G1 or its s x s extension is singular");
  }
  const CMatrix G21 = lead.G2.leftCols(mid);
  const CMatrix G22 = lead.G2.rightCols(tail);

  OrderPair out;
  out.alpha = spec.S1 + detail::g1_solve(lead.G1, G21 * spec.N11 - G21 * spec.Ttilde + G22 * spec.N13);
  out.beta = spec.S2 + detail::g1_solve(lead.G1, G21 * spec.N12 - G21 * spec.Shat +
                                                     G22 * spec.N14 - G22 * spec.Nhat);

  CMatrix a_core = CMatrix::Zero(n, n);
  a_core.topLeftCorner(r, r) = spec.T;
  a_core.block(0, r, r, mid) = spec.S1;
  a_core.block(0, s, r, tail) = spec.S2;
  a_core.block(r, r, mid, mid) = spec.N11;
  a_core.block(r, s, mid, tail) = spec.N12;
  a_core.block(s, r, tail, mid) = spec.N13;
  a_core.block(s, s, tail, tail) = spec.N14;

  CMatrix b_core = CMatrix::Zero(n, n);
  b_core.topLeftCorner(r, r) = spec.T;
  b_core.block(0, r, r, mid) = out.alpha;
  b_core.block(0, s, r, tail) = out.beta;
  b_core.block(r, r, mid, mid) = spec.Ttilde;
  b_core.block(r, s, mid, tail) = spec.Shat;
  b_core.block(s, s, tail, tail) = spec.Nhat;

  out.A = spec.Uhat * a_core * spec.Uhat.adjoint();
  out.B = spec.Uhat * b_core * spec.Uhat.adjoint();
  return out;
}

OrderCanonicalSpec random_order_spec(Index n, Index r, Index s, Rng& rng) {
  if (r < 0 || r > s || s > n) {
    throw std::invalid_argument("random_order_spec: need 0 <= r <= s <= n");
  }
  const MinkowskiMetric G(n);
  const Index mid = s - r;
  const Index tail = n - s;
  OrderCanonicalSpec spec;
  bool found = false;
  for (int attempt = 0; attempt < generator_resample_budget && !found; ++attempt) {
    spec.Uhat = random_unitary(n, rng);
    found = metric_blocks(spec.Uhat, r, G).g1_condition < generator_g1_condition_cap &&
            metric_blocks(spec.Uhat, s, G).g1_condition < generator_g1_condition_cap;
  }
  if (!found) {
    throw NumericalError("random_order_spec: no Uhat with well-conditioned metric blocks");
  }
  spec.T = random_invertible_triangular(r, 10.0, rng);
  spec.Ttilde = random_invertible_triangular(mid, 10.0, rng);
  spec.S1 = random_gaussian(r, mid, rng);
  spec.S2 = random_gaussian(r, tail, rng);
  spec.Shat = random_gaussian(mid, tail, rng);

  const Index m = n - r;
  CMatrix block(m, m);
  if (m > 0) {
    const CMatrix V = random_unitary(m, rng);
    block = V * random_nilpotent(m, rng.index(1, m), rng) * V.adjoint();
  }
  spec.N11 = block.topLeftCorner(mid, mid);
  spec.N12 = block.topRightCorner(mid, tail);
  spec.N13 = block.bottomLeftCorner(tail, mid);
  spec.N14 = block.bottomRightCorner(tail, tail);
  spec.Nhat = tail > 0 ? random_nilpotent(tail, rng.index(1, tail), rng) : CMatrix(0, 0);
  return spec;
}

CMatrix order_successor(const CMatrix& A, const CMatrix& P, const MinkowskiMetric& G,
                        const Tolerances& tol) {
  detail::check_input(A, G, "order_successor");
  const CoreEPDecomp d = core_ep_decompose(A, tol);
  const Index m = d.N.rows();
  if (P.rows() != m || P.cols() != m) {
    throw DimensionError("order_successor: P must be " + std::to_string(m) + "x" +
                         std::to_string(m));
  }
  require_finite(P, "order_successor");
  const MetricBlocks mb = metric_blocks(d, G, tol);
  if (!mb.g1_invertible) {
    throw NotInvertible(Failure::not_m_core_ep_invertible,
                        detail::failed_report(InverseKind::m_core_ep, {}, d.k), "G1 singular");
  }
  const CMatrix shift = detail::g1_solve(mb.G1, mb.G2 * (d.N - P));
  return detail::assemble_top(d.U, d.T, d.S + shift) +
         detail::assemble_trailing(d.U, CMatrix::Zero(d.r, m), P);
}

}  // namespace minkinv
