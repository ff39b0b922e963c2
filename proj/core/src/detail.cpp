#include "detail.hpp"

#include <cstdio>

#include <Eigen/LU>

#include "minkinv/numlin.hpp"

namespace minkinv::detail {

void check_input(const CMatrix& A, const char* what) {
  require_square(A, what);
  require_finite(A, what);
}

void check_input(const CMatrix& A, const MinkowskiMetric& G, const char* what) {
  check_input(A, what);
  if (A.rows() != G.dim()) {
    throw DimensionError(std::string(what) + ": matrix order " + std::to_string(A.rows()) +
                         " does not match metric dimension " + std::to_string(G.dim()));
  }
}

CMatrix assemble_top(const CMatrix& U, const CMatrix& lead, const CMatrix& right) {
  const Index n = U.rows();
  const Index r = lead.rows();
  if (r == 0) {
    return CMatrix::Zero(n, n);
  }
  CMatrix row_block = lead * U.leftCols(r).adjoint();
  if (n > r) {
    row_block += right * U.rightCols(n - r).adjoint();
  }
  return U.leftCols(r) * row_block;
}

CMatrix assemble_trailing(const CMatrix& U, const CMatrix& right, const CMatrix& bottom) {
  const Index n = U.rows();
  const Index m = bottom.rows();
  const Index r = n - m;
  if (m == 0) {
    return CMatrix::Zero(n, n);
  }
  CMatrix tail = U.rightCols(m).adjoint();
  CMatrix out = U.rightCols(m) * (bottom * tail);
  if (r > 0) {
    out += U.leftCols(r) * (right * tail);
  }
  return out;
}

CMatrix triangular_solve(const CMatrix& T, const CMatrix& B) {
  if (T.rows() == 0) {
    return CMatrix::Zero(0, B.cols());
  }
  return T.triangularView<Eigen::Upper>().solve(B);
}

CMatrix g1_solve(const CMatrix& G1, const CMatrix& B) {
  if (G1.rows() == 0) {
    return CMatrix::Zero(0, B.cols());
  }
  return Eigen::PartialPivLU<CMatrix>(G1).solve(B);
}

CMatrix metric_block_inverse(const CMatrix& U, const CMatrix& lead, const CMatrix& G1,
                             const MinkowskiMetric& G) {
  const Index n = U.rows();
  const Index r = lead.rows();
  if (r == 0) {
    return CMatrix::Zero(n, n);
  }
  const CMatrix U1 = U.leftCols(r);
  // U1* G = (G U1)* because G is Hermitian.
  const CMatrix U1_star_G = G.left(U1).adjoint();
  return U1 * triangular_solve(lead, g1_solve(G1, U1_star_G));
}

CMatrix clean_power(const CoreEPDecomp& d, Index p) {
  const Index n = d.n();
  if (p == 0) {
    return CMatrix::Identity(n, n);
  }
  CMatrix lead = CMatrix::Identity(d.r, d.r);
  for (Index q = 0; q < p; ++q) {
    lead = lead * d.T;
  }
  return assemble_top(d.U, lead, power_corner(d, p));
}

void require_small_residuals(const CMatrix& A, const InverseReport& report,
                             const Tolerances& tol, const char* what) {
  const double bound = tol.residual_tol * residual_scale(A, report.X);
  for (const auto& [label, value] : report.residuals) {
    if (!(value <= bound)) {
      throw NumericalError(std::string(what) + ": residual " + label + " = " +
                           format_double(value) + " exceeds " + format_double(bound));
    }
  }
}

InverseReport failed_report(InverseKind kind, ResidualMap tests, Index index) {
  InverseReport report;
  report.kind = kind;
  report.exists = false;
  report.residuals = std::move(tests);
  report.index = index;
  return report;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", value);
  return buf;
}

}  // namespace minkinv::detail
