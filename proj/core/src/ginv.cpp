#include "minkinv/ginv.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <Eigen/QR>

#include "detail.hpp"
#include "minkinv/decomp.hpp"
#include "minkinv/numlin.hpp"
#include "minkinv/verify.hpp"

namespace minkinv {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

double condition_number(const CMatrix& M) {
  if (M.rows() == 0) {
    return 1.0;
  }
  const Eigen::VectorXd s = singular_values(M);
  const double smallest = s(s.size() - 1);
  return smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
}

double sigma_min(const CMatrix& M) {
  return M.rows() == 0 ? 0.0 : singular_values(M).minCoeff();
}

CMatrix triangular_inverse(const CMatrix& T) {
  return detail::triangular_solve(T, CMatrix::Identity(T.rows(), T.cols()));
}

/// T^-p B.
CMatrix triangular_solve_power(const CMatrix& T, CMatrix B, Index p) {
  for (Index q = 0; q < p; ++q) {
    B = detail::triangular_solve(T, B);
  }
  return B;
}

InverseReport finish(const CMatrix& A, const MinkowskiMetric& G, const Tolerances& tol,
                     InverseKind kind, CMatrix X, Index k, std::string route, const char* what) {
  InverseReport report;
  report.kind = kind;
  report.exists = true;
  report.X = std::move(X);
  report.index = k;
  report.route = std::move(route);
  report.residuals = check_axioms_at_index(A, report.X, kind, G, k, tol);
  detail::require_small_residuals(A, report, tol, what);
  return report;
}

void require_close(const CMatrix& A, const CMatrix& X, const CMatrix& Y, const Tolerances& tol,
                   const std::string& what) {
  const double gap = (X - Y).norm();
  const double bound = tol.residual_tol * residual_scale(A, X);
  if (!(gap <= bound)) {
    throw NumericalError(what + ": routes differ by " + detail::format_double(gap) +
                         " (bound " + detail::format_double(bound) + ")");
  }
}

struct Probe {
  CoreEPDecomp d;
  MetricBlocks mb;
  Index rank_kk = 0;  // rk((A^k)~ A^k)
  bool exists = true;
};

Probe probe_m_core_ep(const CMatrix& A, const MinkowskiMetric& G, const Tolerances& tol) {
  detail::check_input(A, G, "m_core_ep_exists");
  Probe p;
  p.d = core_ep_decompose(A, tol);
  p.mb = metric_blocks(p.d, G, tol);
  if (p.d.r == 0) {
    return p;
  }
  const CMatrix Ak = matrix_power(A, p.d.k);
  const double ref = std::pow(spectral_norm(A), 2.0 * static_cast<double>(p.d.k));
  p.rank_kk = numerical_rank(minkowski_adjoint(Ak, G) * Ak, tol, ref);
  p.exists = p.rank_kk == p.d.r;
  if (p.exists != p.mb.g1_invertible) {
    throw NumericalError("m_core_ep_exists: rank test says " +
                         std::string(p.exists ? "invertible" : "not invertible") +
                         " but sigma_min(G1) = " + detail::format_double(sigma_min(p.mb.G1)) +
                         " says otherwise");
  }
  return p;
}

[[noreturn]] void throw_not_m_core_ep(const Probe& p) {
  ResidualMap tests{{"rk(A^k)", static_cast<double>(p.d.r)},
                    {"rk((A^k)~A^k)", static_cast<double>(p.rank_kk)},
                    {"sigma_min(G1)", sigma_min(p.mb.G1)}};
  throw NotInvertible(Failure::not_m_core_ep_invertible,
                      detail::failed_report(InverseKind::m_core_ep, std::move(tests), p.d.k),
                      "G1 singular");
}

InverseReport block_m_core_ep(const CMatrix& A, const MinkowskiMetric& G, const Tolerances& tol,
                              const Probe& p) {
  if (!p.exists) {
    throw_not_m_core_ep(p);
  }
  InverseReport report =
      finish(A, G, tol, InverseKind::m_core_ep,
             detail::metric_block_inverse(p.d.U, p.d.T, p.mb.G1, G), p.d.k, "block",
             "m_core_ep_inverse");
  report.diagnostics.push_back("cond(G1) = " + detail::format_double(p.mb.g1_condition));
  return report;
}

}  // namespace

InverseReport minkowski_inverse(const CMatrix& A, const MinkowskiMetric& G, const Tolerances& tol) {
  detail::check_input(A, G, "minkowski_inverse");
  tol.validate();
  const Index n = A.rows();
  const CMatrix At = minkowski_adjoint(A, G);
  const double norm2 = spectral_norm(A);
  const Index r = numerical_rank(A, tol);
  const Index r_left = numerical_rank(At * A, tol, norm2 * norm2);
  const Index r_right = numerical_rank(A * At, tol, norm2 * norm2);
  if (r_left != r || r_right != r) {
    ResidualMap tests{{"rk(A)", static_cast<double>(r)},
                      {"rk(A~A)", static_cast<double>(r_left)},
                      {"rk(AA~)", static_cast<double>(r_right)}};
    throw NotInvertible(Failure::not_minkowski_invertible,
                        detail::failed_report(InverseKind::minkowski, std::move(tests), 0),
                        "rank test failed");
  }
  if (r == 0) {
    return finish(A, G, tol, InverseKind::minkowski, CMatrix::Zero(n, n), 0, "full-rank",
                  "minkowski_inverse");
  }

  const Eigen::ColPivHouseholderQR<CMatrix> qr(A);
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(n, r);
  const CMatrix R = qr.matrixR().topRows(r).triangularView<Eigen::Upper>();
  const CMatrix F = Q;
  const CMatrix H = R * qr.colsPermutation().transpose();

  const CMatrix Ft = G.right(F.adjoint());  // F~ = F* G
  const CMatrix Ht = G.left(H.adjoint());   // H~ = G H*
  const double cap = 1.0 / (static_cast<double>(n) * eps);
  const double cond_f = condition_number(Ft * F);
  const double cond_h = condition_number(H * Ht);
  if (!(cond_f <= cap) || !(cond_h <= cap)) {
    throw NumericalError("minkowski_inverse: F~F or HH~ numerically singular (cond " +
                         detail::format_double(cond_f) + ", " + detail::format_double(cond_h) +
                         ")");
  }
  const CMatrix X = Ht * Eigen::PartialPivLU<CMatrix>(Ft * A * Ht).solve(Ft);
  InverseReport report =
      finish(A, G, tol, InverseKind::minkowski, X, 0, "full-rank", "minkowski_inverse");
  report.diagnostics.push_back("cond(F~F) = " + detail::format_double(cond_f));
  report.diagnostics.push_back("cond(HH~) = " + detail::format_double(cond_h));
  return report;
}

InverseReport group_inverse(const CMatrix& A, const Tolerances& tol) {
  detail::check_input(A, "group_inverse");
  const CoreEPDecomp d = core_ep_decompose(A, tol);
  if (d.k > 1) {
    throw NotInvertible(
        Failure::not_group_invertible,
        detail::failed_report(InverseKind::group, {{"Ind(A)", static_cast<double>(d.k)}}, d.k),
        "index " + std::to_string(d.k) + " > 1");
  }
  const CMatrix X = detail::assemble_top(d.U, triangular_inverse(d.T),
                                         triangular_solve_power(d.T, d.S, 2));
  return finish(A, MinkowskiMetric(A.rows()), tol, InverseKind::group, X, d.k, "block",
                "group_inverse");
}

InverseReport drazin_inverse(const CMatrix& A, const Tolerances& tol) {
  detail::check_input(A, "drazin_inverse");
  const CoreEPDecomp d = core_ep_decompose(A, tol);
  const Index k = d.k;
  const CMatrix X = detail::assemble_top(
      d.U, triangular_inverse(d.T), triangular_solve_power(d.T, power_corner(d, k + 1), k + 2));

  // A^k (A^(k+1))^#, the group inverse taken of the noise-free power.
  CMatrix via_power = CMatrix::Zero(A.rows(), A.cols());
  if (d.r > 0) {
    via_power = matrix_power(A, k) * group_inverse(detail::clean_power(d, k + 1), tol).X;
  }
  require_close(A, X, via_power, tol, "drazin_inverse");

  InverseReport report = finish(A, MinkowskiMetric(A.rows()), tol, InverseKind::drazin, X, k,
                                "block", "drazin_inverse");
  report.route_gaps["block-power"] = (X - via_power).norm();
  return report;
}

InverseReport core_ep_inverse(const CMatrix& A, const Tolerances& tol) {
  detail::check_input(A, "core_ep_inverse");
  const CoreEPDecomp d = core_ep_decompose(A, tol);
  const CMatrix X =
      detail::assemble_top(d.U, triangular_inverse(d.T), CMatrix::Zero(d.r, A.rows() - d.r));
  return finish(A, MinkowskiMetric(A.rows()), tol, InverseKind::core_ep, X, d.k, "block",
                "core_ep_inverse");
}

InverseReport m_core_inverse(const CMatrix& A, const MinkowskiMetric& G, const Tolerances& tol) {
  detail::check_input(A, G, "m_core_inverse");
  const CoreEPDecomp d = core_ep_decompose(A, tol);
  if (d.k > 1) {
    throw NotInvertible(
        Failure::not_cm,
        detail::failed_report(InverseKind::m_core, {{"Ind(A)", static_cast<double>(d.k)}}, d.k),
        "index " + std::to_string(d.k) + " > 1");
  }
  const MetricBlocks mb = metric_blocks(d, G, tol);
  Index r_left = 0;
  if (d.r > 0) {
    const double norm2 = spectral_norm(A);
    r_left = numerical_rank(minkowski_adjoint(A, G) * A, tol, norm2 * norm2);
  }
  const bool ok = r_left == d.r;
  if (ok != mb.g1_invertible) {
    throw NumericalError("m_core_inverse: rk(A~A) test and G1 test disagree (sigma_min(G1) = " +
                         detail::format_double(sigma_min(mb.G1)) + ")");
  }
  if (!ok) {
    ResidualMap tests{{"rk(A)", static_cast<double>(d.r)},
                      {"rk(A~A)", static_cast<double>(r_left)},
                      {"sigma_min(G1)", sigma_min(mb.G1)}};
    throw NotInvertible(Failure::not_m_core_invertible,
                        detail::failed_report(InverseKind::m_core, std::move(tests), d.k),
                        "G1 singular");
  }
  InverseReport report =
      finish(A, G, tol, InverseKind::m_core, detail::metric_block_inverse(d.U, d.T, mb.G1, G),
             d.k, "block", "m_core_inverse");
  report.diagnostics.push_back("cond(G1) = " + detail::format_double(mb.g1_condition));
  return report;
}

bool m_core_ep_exists(const CMatrix& A, const MinkowskiMetric& G, const Tolerances& tol) {
  return probe_m_core_ep(A, G, tol).exists;
}

InverseReport m_core_ep_inverse(const CMatrix& A, const MinkowskiMetric& G, const Tolerances& tol) {
  return block_m_core_ep(A, G, tol, probe_m_core_ep(A, G, tol));
}

InverseReport m_core_ep_via_drazin(const CMatrix& A, const MinkowskiMetric& G,
                                   const Tolerances& tol) {
  const Probe p = probe_m_core_ep(A, G, tol);
  const InverseReport block = block_m_core_ep(A, G, tol, p);
  const Index n = A.rows();
  CMatrix X = CMatrix::Zero(n, n);
  if (p.d.r > 0) {
    const CMatrix D = drazin_inverse(A, tol).X;
    const CMatrix M = m_core_inverse(detail::clean_power(p.d, p.d.k), G, tol).X;
    X = matrix_power(A, p.d.k) * D * M;
  }
  require_close(A, block.X, X, tol, "m_core_ep_via_drazin");
  InverseReport report =
      finish(A, G, tol, InverseKind::m_core_ep, std::move(X), p.d.k, "drazin",
             "m_core_ep_via_drazin");
  report.route_gaps["drazin-block"] = (report.X - block.X).norm();
  return report;
}

InverseReport m_core_ep_via_parts(const CMatrix& A, const MinkowskiMetric& G,
                                  const Tolerances& tol) {
  const Probe p = probe_m_core_ep(A, G, tol);
  const InverseReport block = block_m_core_ep(A, G, tol, p);
  const Index n = A.rows();
  std::vector<std::string> notes;

  CMatrix via_a1 = CMatrix::Zero(n, n);
  CMatrix via_a1hat = CMatrix::Zero(n, n);
  std::optional<CMatrix> via_group;
  if (p.d.r == 0) {
    via_group = CMatrix::Zero(n, n);
  } else {
    const CoreEPParts parts = extract_parts(p.d);
    via_a1 = m_core_inverse(parts.A1, G, tol).X;
    via_a1hat = m_core_inverse(m_core_ep_decompose(A, G, tol).A1hat, G, tol).X;

    const CMatrix Ak = matrix_power(A, p.d.k);
    const double ref = std::pow(spectral_norm(A), 2.0 * static_cast<double>(p.d.k));
    const Index r_right = numerical_rank(Ak * minkowski_adjoint(Ak, G), tol, ref);
    if (r_right != p.d.r) {
      notes.push_back("A1^# A1 A1^m route skipped: rk(A^k(A^k)~) = " + std::to_string(r_right) +
                      " != " + std::to_string(p.d.r));
    } else {
      try {
        via_group = group_inverse(parts.A1, tol).X * parts.A1 * minkowski_inverse(parts.A1, G, tol).X;
      } catch (const NotInvertible& e) {
        notes.push_back(std::string("A1^# A1 A1^m route skipped: ") + e.what());
      }
    }
  }

  ResidualMap gaps;
  gaps["parts-block"] = (via_a1 - block.X).norm();
  gaps["parts-hat"] = (via_a1 - via_a1hat).norm();
  require_close(A, via_a1, block.X, tol, "m_core_ep_via_parts (A1^m vs block)");
  require_close(A, via_a1, via_a1hat, tol, "m_core_ep_via_parts (A1^m vs A1hat^m)");
  if (via_group) {
    gaps["parts-group"] = (via_a1 - *via_group).norm();
    require_close(A, via_a1, *via_group, tol, "m_core_ep_via_parts (A1^m vs A1^# A1 A1^m)");
  }

  InverseReport report = finish(A, G, tol, InverseKind::m_core_ep, std::move(via_a1), p.d.k,
                                "parts", "m_core_ep_via_parts");
  report.route_gaps = std::move(gaps);
  report.diagnostics = std::move(notes);
  return report;
}

InverseReport compute_inverse(InverseKind kind, const CMatrix& A, const MinkowskiMetric& G,
                              const Tolerances& tol) {
  switch (kind) {
    case InverseKind::minkowski:
      return minkowski_inverse(A, G, tol);
    case InverseKind::group:
      return group_inverse(A, tol);
    case InverseKind::drazin:
      return drazin_inverse(A, tol);
    case InverseKind::core_ep:
      return core_ep_inverse(A, tol);
    case InverseKind::m_core:
      return m_core_inverse(A, G, tol);
    case InverseKind::m_core_ep:
      return m_core_ep_inverse(A, G, tol);
  }
  throw Error("compute_inverse: unknown kind");
}

}  // namespace minkinv
