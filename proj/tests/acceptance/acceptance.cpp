// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "examples.hpp"
#include "minkinv/decomp.hpp"
#include "minkinv/ginv.hpp"
#include "minkinv/numlin.hpp"
#include "minkinv/order.hpp"
#include "minkinv/verify.hpp"
#include "oracles.hpp"
#include "sweep.hpp"

using namespace minkinv;

namespace {

constexpr double tol = 1e-8;
constexpr std::uint64_t sweep_seed = 20240601;

/// Collects the first few failure messages of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok) {
      ++failed_;
      if (notes_.size() < 3) {
        notes_.push_back(what);
      }
    }
  }
  [[nodiscard]] bool ok() const { return failed_ == 0 && count_ > 0; }
  [[nodiscard]] std::string summary() const {
    std::ostringstream s;
    s << count_ - failed_ << "/" << count_ << " checks";
    for (const auto& n : notes_) {
      s << "; " << n;
    }
    return s.str();
  }

 private:
  int count_ = 0;
  int failed_ = 0;
  std::vector<std::string> notes_;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double max_abs(const CMatrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

std::vector<CanonicalCaseSpec> cases() { return sweep::canonical_specs(100, sweep_seed); }

void ex2_golden(Check& c) {
  const MinkowskiMetric G(3);
  const CMatrix A = examples::ex2();
  const CMatrix e = m_core_ep_inverse(A, G).X;
  const CMatrix ce = core_ep_inverse(A).X;
  const double g1 = metric_blocks(core_ep_decompose(A), G).G1(0, 0).real();
  c.expect(max_abs(e - examples::ex2_m_core_ep()) <= 1e-8, "m-core-EP entry error " + num(max_abs(e - examples::ex2_m_core_ep())));
  c.expect(max_abs(ce - examples::ex2_core_ep()) <= 1e-8, "core-EP entry error " + num(max_abs(ce - examples::ex2_core_ep())));
  c.expect(std::abs(g1 - examples::ex2_g1) <= 1e-10, "G1 = " + num(g1));
  c.expect((e - ce).norm() > 1.0, "inverses too close");
}

void ex1_negative(Check& c) {
  const MinkowskiMetric G(3);
  const CMatrix A = examples::ex1();
  const double g1 = std::abs(metric_blocks(core_ep_decompose(A), G).G1(0, 0));
  c.expect(!m_core_ep_exists(A, G), "reported as existing");
  c.expect(g1 < 1e-10, "|G1| = " + num(g1));
}

void ex3_golden(Check& c) {
  const MinkowskiMetric G(3);
  const CMatrix A = examples::ex3();
  const CMatrix expected = examples::ex3_m_core_ep();
  const CoreEPDecomp d = core_ep_decompose(A);
  const CMatrix a1 = extract_parts(d).A1;
  const CMatrix a1hat = m_core_ep_decompose(A, G).A1hat;
  const double g1 = metric_blocks(d, G).G1(0, 0).real();
  c.expect(max_abs(m_core_ep_inverse(A, G).X - expected) <= 1e-8, "A^E");
  c.expect(max_abs(m_core_inverse(a1, G).X - expected) <= 1e-8, "A1^m");
  c.expect(max_abs(m_core_inverse(a1hat, G).X - expected) <= 1e-8, "A1hat^m");
  c.expect(std::abs(g1 - examples::ex3_g1) <= 1e-10, "G1 = " + num(g1));
  c.expect((a1hat - a1).norm() > 0.1, "A1hat equals A1");
  c.expect(max_abs(a1hat - examples::ex3_a1hat()) <= 1e-8, "A1hat entry error " + num(max_abs(a1hat - examples::ex3_a1hat())));
}

void ex4_golden(Check& c) {
  const MinkowskiMetric G(3);
  const CMatrix A = examples::ex4a();
  const CMatrix B = examples::ex4b();
  for (const auto& [x, y, name] : {std::tuple{A, B, "A<=B"}, std::tuple{B, A, "B<=A"}}) {
    const OrderVerdict v = m_core_ep_leq(x, y, G);
    c.expect(v.definition == Decision::holds, std::string(name) + " definition " + std::string(to_string(v.definition)));
    c.expect(v.characterization == Decision::holds, std::string(name) + " characterization " + std::string(to_string(v.characterization)));
  }
  c.expect((A - B).norm() > 0.5, "pair too close");
}

void oracle_equivalence(Check& c) {
  for (const auto& spec : cases()) {
    const MinkowskiMetric G(spec.n);
    const CMatrix A = generate_case(spec, G);
    const InverseReport r = m_core_ep_inverse(A, G);
    const double gap = (r.X - oracle_m_core_ep(A, G)).norm();
    c.expect(gap <= tol * (1.0 + r.X.norm()), "oracle gap " + num(gap) + " seed " + std::to_string(spec.seed));
    for (const auto& [label, value] : r.residuals) {
      c.expect(value <= tol * residual_scale(A, r.X), label + " = " + num(value));
    }
  }
}

void route_agreement(Check& c) {
  for (const auto& spec : cases()) {
    const MinkowskiMetric G(spec.n);
    const CMatrix A = generate_case(spec, G);
    const CMatrix X = m_core_ep_inverse(A, G).X;
    const double bound = tol * residual_scale(A, X);
    const CMatrix drazin = m_core_ep_via_drazin(A, G).X;
    const InverseReport parts = m_core_ep_via_parts(A, G);
    c.expect((X - drazin).norm() <= bound, "block vs drazin " + num((X - drazin).norm()));
    c.expect((X - parts.X).norm() <= bound, "block vs parts " + num((X - parts.X).norm()));
    c.expect((drazin - parts.X).norm() <= bound, "drazin vs parts");
    for (const auto& [route, gap] : parts.route_gaps) {
      c.expect(gap <= bound, route + " " + num(gap));
    }
  }
}

void decomposition_properties(Check& c) {
  for (const auto& spec : cases()) {
    const MinkowskiMetric G(spec.n);
    const CMatrix A = generate_case(spec, G);
    const MCoreEPDecomp d = m_core_ep_decompose(A, G);
    const double bound = tol * residual_scale(A, d.A1hat);
    for (const auto& [label, value] : m_core_ep_decomp_residuals(A, d, G)) {
      c.expect(value <= bound, label + " = " + num(value));
    }
    const CMatrix a1t = minkowski_adjoint(d.A1hat, G);
    c.expect(numerical_rank(a1t * d.A1hat) == numerical_rank(d.A1hat), "rk(A1hat~A1hat) != rk(A1hat)");
    const MCoreEPDecomp p = m_core_ep_parts_via_projection(A, G);
    c.expect((p.A1hat - d.A1hat).norm() <= bound, "projection form " + num((p.A1hat - d.A1hat).norm()));
    const CMatrix X = m_core_ep_inverse(A, G).X;
    c.expect((A * X * A - d.A1hat).norm() <= tol * residual_scale(A, X) * (1.0 + A.norm()),
             "A A^E A != A1hat");
  }
}

void order_soundness(Check& c) {
  Rng rng(sweep_seed + 1);
  for (int i = 0; i < 100; ++i) {
    const Index n = rng.index(2, 6);
    const Index s = rng.index(1, n);
    const Index r = rng.index(0, s);
    const MinkowskiMetric G(n);
    const OrderPair p = order_pair(random_order_spec(n, r, s, rng), G);
    const OrderVerdict v = m_core_ep_leq(p.A, p.B, G);
    c.expect(v.definition == Decision::holds && v.characterization == Decision::holds &&
                 v.transfer == Decision::holds,
             "pair " + std::to_string(i) + ": " + std::string(to_string(v.definition)) + "/" +
                 std::string(to_string(v.characterization)) + "/" +
                 std::string(to_string(v.transfer.value_or(Decision::indeterminate))));
  }
  int unrelated = 0;
  for (const auto& spec : sweep::canonical_specs(400, sweep_seed + 2)) {
    if (unrelated == 100) {
      break;
    }
    if (spec.r == 0) {
      continue;
    }
    const MinkowskiMetric G(spec.n);
    const CMatrix A = generate_case(spec, G);
    const CMatrix B = random_gaussian(spec.n, spec.n, rng);
    const OrderVerdict v = m_core_ep_leq(A, B, G);
    c.expect(v.definition == Decision::fails && v.characterization == Decision::fails,
             "unrelated pair " + std::to_string(unrelated) + ": " + std::string(to_string(v.definition)) + "/" +
                 std::string(to_string(v.characterization)));
    ++unrelated;
  }
  c.expect(unrelated == 100, "only " + std::to_string(unrelated) + " unrelated pairs");
}

/// Columns G-orthogonal to a neutral vector among them: rk(A~A) < rk(A).
CMatrix rank_test_failure(Index n, Index r, Rng& rng) {
  const CMatrix G = oracle::metric(n);
  const CMatrix x = random_gaussian(n - 1, 1, rng);
  CMatrix v(n, 1);
  v(0, 0) = x.norm() * rng.unit_phase();
  v.bottomRows(n - 1) = x;
  const CMatrix u = random_gaussian(n, 1, rng);
  const Complex vGu = (v.adjoint() * G * u)(0, 0);
  CMatrix F(n, r);
  F.col(0) = v;
  for (Index j = 1; j < r; ++j) {
    const CMatrix g = random_gaussian(n, 1, rng);
    F.col(j) = g - u * ((v.adjoint() * G * g)(0, 0) / vGu);
  }
  return F * random_gaussian(r, n, rng);
}

void minkowski_axioms(Check& c) {
  Rng rng(sweep_seed + 3);
  for (int i = 0; i < 100; ++i) {
    const Index n = rng.index(1, 6);
    const Index r = rng.index(1, n);
    const CMatrix A = random_gaussian(n, r, rng) * random_gaussian(r, n, rng);
    const InverseReport rep = minkowski_inverse(A, MinkowskiMetric(n));
    for (const auto& [label, value] : rep.residuals) {
      c.expect(value <= tol * residual_scale(A, rep.X), label + " = " + num(value));
    }
  }
  for (int i = 0; i < 20; ++i) {
    const Index n = rng.index(3, 6);
    const CMatrix A = rank_test_failure(n, rng.index(2, n - 1), rng);
    bool raised = false;
    try {
      (void)minkowski_inverse(A, MinkowskiMetric(n));
    } catch (const NotInvertible& e) {
      raised = e.failure() == Failure::not_minkowski_invertible;
    }
    c.expect(raised, "rank-failing matrix " + std::to_string(i) + " accepted");
  }
}

void degenerate_sweep(Check& c) {
  const InverseKind kinds[] = {InverseKind::minkowski, InverseKind::group,   InverseKind::drazin,
                               InverseKind::core_ep,   InverseKind::m_core, InverseKind::m_core_ep};
  auto expect_all = [&](const CMatrix& A, const CMatrix& expected, const std::string& name) {
    const MinkowskiMetric G(A.rows());
    for (InverseKind kind : kinds) {
      const CMatrix X = compute_inverse(kind, A, G).X;
      c.expect((X - expected).norm() <= tol * residual_scale(A, expected),
               name + " " + std::string(to_string(kind)));
    }
    c.expect(m_core_ep_exists(A, G), name + " exists");
    c.expect(m_core_ep_leq(A, A, G).holds, name + " reflexive");
    const MCoreEPDecomp d = m_core_ep_decompose(A, G);
    c.expect((d.A1hat + d.A2hat - A).norm() <= tol, name + " split");
  };
  for (Index n = 1; n <= 5; ++n) {
    expect_all(CMatrix::Zero(n, n), CMatrix::Zero(n, n), "zero " + std::to_string(n));
    expect_all(CMatrix::Identity(n, n), CMatrix::Identity(n, n), "identity " + std::to_string(n));
  }
  for (const Complex a : {Complex(2.0, 0.0), Complex(-0.5, 3.0), Complex(1e-3, 0.0)}) {
    CMatrix A(1, 1);
    A(0, 0) = a;
    CMatrix inv(1, 1);
    inv(0, 0) = 1.0 / a;
    expect_all(A, inv, "scalar");
  }
  for (Index n = 2; n <= 6; ++n) {
    CMatrix J = CMatrix::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) {
      J(i, i + 1) = 1.0;
    }
    const MinkowskiMetric G(n);
    const std::string name = "shift " + std::to_string(n);
    c.expect(drazin_inverse(J).X.norm() == 0.0, name + " drazin");
    c.expect(core_ep_inverse(J).X.norm() == 0.0, name + " core-ep");
    c.expect(m_core_ep_inverse(J, G).X.norm() == 0.0, name + " m-core-ep");
    c.expect(m_core_ep_exists(J, G), name + " exists");
    c.expect(matrix_index(J) == n, name + " index");
    c.expect(m_core_ep_decompose(J, G).A1hat.norm() == 0.0, name + " A1hat");
    bool not_cm = false;
    try {
      (void)m_core_inverse(J, G);
    } catch (const NotInvertible& e) {
      not_cm = e.failure() == Failure::not_cm;
    }
    c.expect(not_cm, name + " not CM");
  }
}

struct Criterion {
  const char* title;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"second example golden values", ex2_golden},
      {"first example has no m-core-EP inverse", ex1_negative},
      {"third example golden values", ex3_golden},
      {"order pair holds both ways", ex4_golden},
      {"block formula equals oracle on 100 cases", oracle_equivalence},
      {"routes agree on 100 cases", route_agreement},
      {"decomposition properties on 100 cases", decomposition_properties},
      {"order soundness", order_soundness},
      {"Minkowski inverse axioms and rank-test failures", minkowski_axioms},
      {"degenerate sweep", degenerate_sweep},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    std::string error;
    try {
      criteria[i].run(check);
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const bool ok = error.empty() && check.ok();
    failed += ok ? 0 : 1;
    std::printf("%s %2zu %s (%s)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].title,
                error.empty() ? check.summary().c_str() : error.c_str());
  }
  std::fflush(stdout);
  return failed;
}
