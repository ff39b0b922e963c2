#include <cmath>

#include <gtest/gtest.h>

#include "examples.hpp"
#include "minkinv/decomp.hpp"
#include "minkinv/ginv.hpp"
#include "minkinv/numlin.hpp"
#include "minkinv/verify.hpp"
#include "oracles.hpp"
#include "sweep.hpp"

using namespace minkinv;

namespace {

const InverseKind all_kinds[] = {InverseKind::minkowski, InverseKind::group,
                                 InverseKind::drazin,    InverseKind::core_ep,
                                 InverseKind::m_core,    InverseKind::m_core_ep};

double max_abs(const CMatrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

void expect_residuals_within(const CMatrix& A, const InverseReport& r) {
  EXPECT_TRUE(r.exists);
  for (const auto& [label, value] : r.residuals) {
    EXPECT_LE(value, oracle::scale(A, r.X)) << label;
  }
}

/// Rank-r n x n matrix built as a product of Gaussian factors.
CMatrix low_rank(Index n, Index r, Rng& rng) {
  return random_gaussian(n, r, rng) * random_gaussian(r, n, rng);
}

/// Columns made G-orthogonal to a neutral vector v (v* G v = 0), plus v
/// itself: rk(A~A) < rk(A).
CMatrix rank_test_failure(Index n, Index r, Rng& rng) {
  const CMatrix G = oracle::metric(n);
  CMatrix x = random_gaussian(n - 1, 1, rng);
  CMatrix v(n, 1);
  v(0, 0) = x.norm() * rng.unit_phase();
  v.bottomRows(n - 1) = x;
  CMatrix F(n, r);
  F.col(0) = v;
  const CMatrix u = random_gaussian(n, 1, rng);
  const Complex vGu = (v.adjoint() * G * u)(0, 0);
  for (Index j = 1; j < r; ++j) {
    CMatrix g = random_gaussian(n, 1, rng);
    const Complex vGg = (v.adjoint() * G * g)(0, 0);
    F.col(j) = g - u * (vGg / vGu);
  }
  return F * random_gaussian(r, n, rng);
}

}  // namespace

TEST(MCoreEPInverse, Ex2Golden) {
  const MinkowskiMetric G(3);
  const InverseReport e = m_core_ep_inverse(examples::ex2(), G);
  const InverseReport c = core_ep_inverse(examples::ex2());
  EXPECT_LT(max_abs(e.X - examples::ex2_m_core_ep()), 1e-8);
  EXPECT_LT(max_abs(c.X - examples::ex2_core_ep()), 1e-8);
  EXPECT_GT((e.X - c.X).norm(), 1.0);
  EXPECT_EQ(e.route, "block");
  EXPECT_EQ(e.index, 2);
  EXPECT_EQ(e.residuals.size(), 4u);
  expect_residuals_within(examples::ex2(), e);
  expect_residuals_within(examples::ex2(), c);
}

TEST(MCoreEPInverse, Ex3GoldenByEveryRoute) {
  const MinkowskiMetric G(3);
  const CMatrix A = examples::ex3();
  const CMatrix expected = examples::ex3_m_core_ep();
  EXPECT_LT(max_abs(m_core_ep_inverse(A, G).X - expected), 1e-8);
  EXPECT_LT(max_abs(m_core_ep_via_drazin(A, G).X - expected), 1e-8);
  const InverseReport parts = m_core_ep_via_parts(A, G);
  EXPECT_LT(max_abs(parts.X - expected), 1e-8);
  EXPECT_EQ(parts.route, "parts");
  const CMatrix a1 = extract_parts(core_ep_decompose(A)).A1;
  EXPECT_LT(max_abs(m_core_inverse(a1, G).X - expected), 1e-8);
  EXPECT_LT(max_abs(m_core_inverse(examples::ex3_a1hat(), G).X - expected), 1e-8);
}

TEST(MCoreEPInverse, Ex2Routes) {
  const MinkowskiMetric G(3);
  const InverseReport d = m_core_ep_via_drazin(examples::ex2(), G);
  EXPECT_LT(max_abs(d.X - examples::ex2_m_core_ep()), 1e-8);
  EXPECT_EQ(d.route, "drazin");
  EXPECT_LE(d.route_gaps.at("drazin-block"), 1e-8);
}

TEST(MCoreEPInverse, Ex1DoesNotExist) {
  const MinkowskiMetric G(3);
  EXPECT_FALSE(m_core_ep_exists(examples::ex1(), G));
  try {
    (void)m_core_ep_inverse(examples::ex1(), G);
    FAIL() << "expected NotInvertible";
  } catch (const NotInvertible& e) {
    EXPECT_EQ(e.failure(), Failure::not_m_core_ep_invertible);
    EXPECT_EQ(e.detail(), "G1 singular");
    EXPECT_FALSE(e.report().exists);
    EXPECT_EQ(e.report().X.size(), 0);
    EXPECT_EQ(e.report().residuals.at("rk(A^k)"), 1.0);
    EXPECT_EQ(e.report().residuals.at("rk((A^k)~A^k)"), 0.0);
  }
  EXPECT_THROW((void)m_core_ep_via_drazin(examples::ex1(), G), NotInvertible);
  EXPECT_THROW((void)m_core_ep_via_parts(examples::ex1(), G), NotInvertible);
}

TEST(MCoreEPInverse, ScaleCovariance) {
  const MinkowskiMetric G(3);
  const Complex c(0.3, -2.0);
  for (const CMatrix& A : {examples::ex2(), examples::ex3()}) {
    const CMatrix X = m_core_ep_inverse(A, G).X;
    const CMatrix Xc = m_core_ep_inverse(c * A, G).X;
    EXPECT_LT((Xc - X / c).norm(), 1e-8 * (1.0 + X.norm()));
  }
}

TEST(Inverses, InvertibleCollapseForEveryKind) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = rng.index(1, 6);
    const CMatrix A = random_gaussian(n, n, rng);
    const MinkowskiMetric G(n);
    const CMatrix inv = A.inverse();
    for (InverseKind kind : all_kinds) {
      const InverseReport r = compute_inverse(kind, A, G);
      EXPECT_EQ(r.kind, kind);
      EXPECT_LT((r.X - inv).norm(), 1e-8 * (1.0 + inv.norm())) << to_string(kind);
    }
    EXPECT_LT((m_core_ep_via_drazin(A, G).X - inv).norm(), 1e-8 * (1.0 + inv.norm()));
    EXPECT_LT((m_core_ep_via_parts(A, G).X - inv).norm(), 1e-8 * (1.0 + inv.norm()));
  }
}

TEST(Inverses, ZeroMatrix) {
  const CMatrix Z = CMatrix::Zero(3, 3);
  const MinkowskiMetric G(3);
  for (InverseKind kind : all_kinds) {
    const InverseReport r = compute_inverse(kind, Z, G);
    EXPECT_EQ(r.X.norm(), 0.0) << to_string(kind);
  }
}

TEST(Minkowski, MatchesLeastSquaresOracle) {
  Rng rng(42);
  int tested = 0;
  while (tested < 20) {
    const CMatrix A = low_rank(4, 2, rng);
    const MinkowskiMetric G(4);
    const InverseReport r = minkowski_inverse(A, G);
    const oracle::LinearSolve o = oracle::minkowski_inverse(A, 2);
    EXPECT_LT(o.residual, 1e-8 * (1.0 + A.norm()));
    EXPECT_LT((r.X - o.Y).norm(), 1e-8 * (1.0 + r.X.norm()));
    expect_residuals_within(A, r);
    ++tested;
  }
}

TEST(Minkowski, RankTestFailure) {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = rng.index(3, 6);
    const CMatrix A = rank_test_failure(n, rng.index(2, n - 1), rng);
    const CMatrix At = oracle::adjoint(A);
    EXPECT_LT(oracle::rank_abs(At * A, 1e-8 * A.squaredNorm()), oracle::rank_abs(A, 1e-8 * A.norm()));
    try {
      (void)minkowski_inverse(A, MinkowskiMetric(n));
      FAIL() << "expected NotInvertible";
    } catch (const NotInvertible& e) {
      EXPECT_EQ(e.failure(), Failure::not_minkowski_invertible);
      EXPECT_TRUE(e.report().residuals.count("rk(A~A)"));
    }
  }
}

TEST(Group, DiagonalAndIndexTwo) {
  CMatrix D = CMatrix::Zero(2, 2);
  D(0, 0) = 2.0;
  const InverseReport r = group_inverse(D);
  EXPECT_NEAR(r.X(0, 0).real(), 0.5, 1e-14);
  EXPECT_LT(std::abs(r.X(1, 1)) + std::abs(r.X(0, 1)) + std::abs(r.X(1, 0)), 1e-14);
  try {
    (void)group_inverse(examples::ex2());
    FAIL() << "expected NotInvertible";
  } catch (const NotInvertible& e) {
    EXPECT_EQ(e.failure(), Failure::not_group_invertible);
    EXPECT_EQ(e.report().residuals.at("Ind(A)"), 2.0);
  }
}

TEST(Group, Ex3PartA1SatisfiesEquations) {
  const CMatrix A1 = extract_parts(core_ep_decompose(examples::ex3())).A1;
  const InverseReport r = group_inverse(A1);
  const CMatrix& X = r.X;
  EXPECT_LT((A1 * X * A1 - A1).norm(), 1e-8);
  EXPECT_LT((X * A1 * X - X).norm(), 1e-8);
  EXPECT_LT((A1 * X - X * A1).norm(), 1e-8);
}

TEST(Drazin, MatchesPseudoInverseIdentity) {
  for (const auto& spec : sweep::canonical_specs(40, 201)) {
    const MinkowskiMetric G(spec.n);
    const CMatrix A = generate_case(spec, G);
    const InverseReport r = drazin_inverse(A);
    const double cutoff = 1e-9 * std::pow(A.norm(), 2.0 * spec.k + 1.0);
    const CMatrix o = oracle::drazin(A, spec.k, cutoff);
    EXPECT_LT((r.X - o).norm(), 1e-6 * (1.0 + o.norm()));
    expect_residuals_within(A, r);
    EXPECT_LE(r.route_gaps.at("block-power"), oracle::scale(A, r.X));
  }
}

TEST(Drazin, NilpotentGivesZero) {
  CMatrix J = CMatrix::Zero(4, 4);
  for (Index i = 0; i < 3; ++i) {
    J(i, i + 1) = 1.0;
  }
  EXPECT_EQ(drazin_inverse(J).X.norm(), 0.0);
  EXPECT_EQ(core_ep_inverse(J).X.norm(), 0.0);
  EXPECT_EQ(m_core_ep_inverse(J, MinkowskiMetric(4)).X.norm(), 0.0);
  EXPECT_TRUE(m_core_ep_exists(J, MinkowskiMetric(4)));
}

TEST(CoreEPInverse, MatchesPseudoInverseIdentity) {
  for (const auto& spec : sweep::canonical_specs(40, 202)) {
    const MinkowskiMetric G(spec.n);
    const CMatrix A = generate_case(spec, G);
    const InverseReport r = core_ep_inverse(A);
    const double cutoff = 1e-9 * std::pow(A.norm(), spec.k + 1.0);
    const CMatrix o = oracle::core_ep(A, spec.k, cutoff);
    EXPECT_LT((r.X - o).norm(), 1e-6 * (1.0 + o.norm()));
    expect_residuals_within(A, r);
  }
}

TEST(MCore, MatchesLeastSquaresOracleOnCMParts) {
  for (const auto& spec : sweep::canonical_specs(30, 203)) {
    if (spec.r == 0) {
      continue;
    }
    const MinkowskiMetric G(spec.n);
    const CMatrix A = generate_case(spec, G);
    const CMatrix A1 = extract_parts(core_ep_decompose(A)).A1;
    const InverseReport r = m_core_inverse(A1, G);
    const oracle::LinearSolve o = oracle::m_core_inverse(A1, spec.r);
    EXPECT_LT((r.X - o.Y).norm(), 1e-7 * (1.0 + r.X.norm()));
    expect_residuals_within(A1, r);
  }
}

TEST(MCore, Errors) {
  const MinkowskiMetric G(3);
  try {
    (void)m_core_inverse(examples::ex2(), G);
    FAIL() << "expected NotInvertible";
  } catch (const NotInvertible& e) {
    EXPECT_EQ(e.failure(), Failure::not_cm);
  }
  // CM, but its range is G-degenerate: A1 of the first example.
  const CMatrix a1 = extract_parts(core_ep_decompose(examples::ex1())).A1;
  try {
    (void)m_core_inverse(a1, G);
    FAIL() << "expected NotInvertible";
  } catch (const NotInvertible& e) {
    EXPECT_EQ(e.failure(), Failure::not_m_core_invertible);
  }
}

TEST(Inverses, RejectBadInput) {
  const MinkowskiMetric G(3);
  EXPECT_THROW((void)m_core_ep_inverse(CMatrix::Zero(2, 3), G), DimensionError);
  EXPECT_THROW((void)m_core_ep_inverse(CMatrix::Zero(2, 2), G), DimensionError);
  CMatrix bad = CMatrix::Identity(3, 3);
  bad(0, 0) = std::nan("");
  EXPECT_THROW((void)drazin_inverse(bad), std::invalid_argument);
}

TEST(Inverses, CoreEPAndMCoreEPAreDistinctObjects) {
  // The core-EP inverse of the second example violates (AX)~ = AX.
  const ResidualMap r = check_axioms(examples::ex2(), examples::ex2_core_ep(),
                                     InverseKind::m_core_ep, MinkowskiMetric(3));
  EXPECT_GT(r.at("(AX)~=AX"), 0.1);
}
