#include "minkinv/schur.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace minkinv {

SchurForm complex_schur(const CMatrix& A) {
  if (A.rows() != A.cols()) {
    throw DimensionError("complex_schur: matrix is not square");
  }
  const Index n = A.rows();
  if (n == 0) {
    return {CMatrix(0, 0), CMatrix(0, 0)};
  }
  Eigen::ComplexSchur<CMatrix> schur(A, /*computeU=*/true);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("complex_schur: QR iteration did not converge");
  }
  SchurForm form{schur.matrixU(), schur.matrixT()};
  // Eigen leaves the strictly lower part at whatever the iteration produced;
  // the form is triangular by construction.
  form.R.triangularView<Eigen::StrictlyLower>().setZero();
  return form;
}

namespace {

// Plane rotation [c s; -conj(s) c] with real c that maps (f, g) to (r, 0).
struct Rotation {
  double c = 1.0;
  Complex s{0.0, 0.0};
};

Rotation make_rotation(Complex f, Complex g) {
  const double af = std::abs(f);
  const double ag = std::abs(g);
  const double norm = std::hypot(af, ag);
  if (norm == 0.0) {
    return {};
  }
  if (af == 0.0) {
    return {0.0, std::conj(g) / ag};
  }
  return {af / norm, (f / af) * std::conj(g) / norm};
}

}  // namespace

void swap_adjacent(SchurForm& form, Index k) {
  CMatrix& R = form.R;
  const Index n = R.rows();
  if (k < 0 || k + 1 >= n) {
    throw std::out_of_range("swap_adjacent: position out of range");
  }
  const Complex t11 = R(k, k);
  const Complex t22 = R(k + 1, k + 1);
  if (t11 == t22) {
    return;
  }
  const Rotation rot = make_rotation(R(k, k + 1), t22 - t11);

  // Rows k, k+1 to the right of the 2x2 block.
  for (Index j = k + 2; j < n; ++j) {
    const Complex x = R(k, j);
    const Complex y = R(k + 1, j);
    R(k, j) = rot.c * x + rot.s * y;
    R(k + 1, j) = rot.c * y - std::conj(rot.s) * x;
  }
  // Columns k, k+1 above the block; the block itself becomes [t22 t12; 0 t11].
  for (Index i = 0; i < k; ++i) {
    const Complex x = R(i, k);
    const Complex y = R(i, k + 1);
    R(i, k) = rot.c * x + std::conj(rot.s) * y;
    R(i, k + 1) = rot.c * y - rot.s * x;
  }
  R(k, k) = t22;
  R(k + 1, k + 1) = t11;

  CMatrix& U = form.U;
  for (Index i = 0; i < n; ++i) {
    const Complex x = U(i, k);
    const Complex y = U(i, k + 1);
    U(i, k) = rot.c * x + std::conj(rot.s) * y;
    U(i, k + 1) = rot.c * y - rot.s * x;
  }
}

Index reorder_leading(SchurForm& form, const std::vector<bool>& select) {
  const Index n = form.R.rows();
  if (static_cast<Index>(select.size()) != n) {
    throw DimensionError("reorder_leading: selection size does not match matrix order");
  }
  std::vector<bool> flags = select;
  Index placed = 0;
  for (Index i = 0; i < n; ++i) {
    if (!flags[static_cast<std::size_t>(i)]) {
      continue;
    }
    // Bubble entry i up to position `placed`.
    for (Index j = i; j > placed; --j) {
      swap_adjacent(form, j - 1);
      flags[static_cast<std::size_t>(j)] = flags[static_cast<std::size_t>(j - 1)];
      flags[static_cast<std::size_t>(j - 1)] = true;
    }
    ++placed;
  }
  return placed;
}

}  // namespace minkinv
