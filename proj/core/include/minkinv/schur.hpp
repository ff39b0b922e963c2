#pragma once

#include <vector>

#include "minkinv/types.hpp"

namespace minkinv {

/// A = U R U* with U unitary and R upper triangular.
struct SchurForm {
  CMatrix U;
  CMatrix R;
};

/// Complex Schur decomposition. Throws NumericalError if the QR iteration
/// does not converge.
[[nodiscard]] SchurForm complex_schur(const CMatrix& A);

/// Swaps the diagonal entries at positions (k, k) and (k+1, k+1) with a
/// single Givens rotation, updating R and U so that A = U R U* still holds.
void swap_adjacent(SchurForm& form, Index k);

/// Moves the selected diagonal entries to the leading positions, keeping
/// their relative order. Returns the number of selected entries.
Index reorder_leading(SchurForm& form, const std::vector<bool>& select);

}  // namespace minkinv
