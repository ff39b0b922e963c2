#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "minkinv/schur.hpp"
#include "minkinv/verify.hpp"

using namespace minkinv;

namespace {

double lower_part(const CMatrix& R) {
  double worst = 0.0;
  for (Index j = 0; j < R.cols(); ++j) {
    for (Index i = j + 1; i < R.rows(); ++i) {
      worst = std::max(worst, std::abs(R(i, j)));
    }
  }
  return worst;
}

void expect_valid(const CMatrix& A, const SchurForm& f) {
  const Index n = A.rows();
  EXPECT_LT((f.U.adjoint() * f.U - CMatrix::Identity(n, n)).norm(), 1e-13);
  EXPECT_LT((f.U * f.R * f.U.adjoint() - A).norm(), 1e-12 * (1.0 + A.norm()));
  EXPECT_EQ(lower_part(f.R), 0.0);
}

}  // namespace

TEST(Schur, FactorsRandomMatrices) {
  Rng rng(21);
  for (Index n : {1, 2, 5, 8}) {
    const CMatrix A = random_gaussian(n, n, rng);
    expect_valid(A, complex_schur(A));
  }
  EXPECT_EQ(complex_schur(CMatrix(0, 0)).R.size(), 0);
}

TEST(Schur, SwapExchangesDiagonal) {
  Rng rng(22);
  const CMatrix A = random_gaussian(5, 5, rng);
  SchurForm f = complex_schur(A);
  const Complex a = f.R(1, 1);
  const Complex b = f.R(2, 2);
  swap_adjacent(f, 1);
  expect_valid(A, f);
  EXPECT_LT(std::abs(f.R(1, 1) - b), 1e-12);
  EXPECT_LT(std::abs(f.R(2, 2) - a), 1e-12);
  EXPECT_THROW(swap_adjacent(f, 4), std::out_of_range);
}

TEST(Schur, ReorderMovesSelectionToFront) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = rng.index(2, 7);
    const CMatrix A = random_gaussian(n, n, rng);
    SchurForm f = complex_schur(A);
    std::vector<bool> select(static_cast<std::size_t>(n));
    std::vector<Complex> chosen;
    for (Index i = 0; i < n; ++i) {
      select[static_cast<std::size_t>(i)] = rng.uniform(0, 1) < 0.5;
      if (select[static_cast<std::size_t>(i)]) {
        chosen.push_back(f.R(i, i));
      }
    }
    EXPECT_EQ(reorder_leading(f, select), static_cast<Index>(chosen.size()));
    expect_valid(A, f);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      EXPECT_LT(std::abs(f.R(static_cast<Index>(i), static_cast<Index>(i)) - chosen[i]), 1e-10);
    }
  }
}

TEST(Schur, ReorderRejectsWrongSelectionSize) {
  SchurForm f = complex_schur(CMatrix::Identity(3, 3));
  EXPECT_THROW((void)reorder_leading(f, std::vector<bool>(2, true)), DimensionError);
}
