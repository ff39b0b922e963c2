#include "minkinv/types.hpp"

#include <cmath>

namespace minkinv {

MinkowskiMetric::MinkowskiMetric(Index n) : n_(n) {
  if (n < 0) {
    throw std::invalid_argument("MinkowskiMetric: negative dimension");
  }
}

CMatrix MinkowskiMetric::matrix() const {
  CMatrix G = CMatrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i) {
    G(i, i) = sign(i);
  }
  return G;
}

CMatrix MinkowskiMetric::left(const CMatrix& M) const {
  if (M.rows() != n_) {
    throw DimensionError("MinkowskiMetric::left: row count does not match metric dimension");
  }
  CMatrix out = -M;
  if (n_ > 0) {
    out.row(0) = M.row(0);
  }
  return out;
}

CMatrix MinkowskiMetric::right(const CMatrix& M) const {
  if (M.cols() != n_) {
    throw DimensionError("MinkowskiMetric::right: column count does not match metric dimension");
  }
  CMatrix out = -M;
  if (n_ > 0) {
    out.col(0) = M.col(0);
  }
  return out;
}

void Tolerances::validate() const {
  for (double v : {rank_tol_factor, residual_tol, eig_zero_factor}) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("Tolerances: every field must be finite and strictly positive");
    }
  }
}

std::string_view to_string(InverseKind kind) noexcept {
  switch (kind) {
    case InverseKind::minkowski: return "minkowski";
    case InverseKind::group: return "group";
    case InverseKind::drazin: return "drazin";
    case InverseKind::core_ep: return "core-ep";
    case InverseKind::m_core: return "m-core";
    case InverseKind::m_core_ep: return "m-core-ep";
  }
  return "unknown";
}

std::optional<InverseKind> parse_inverse_kind(std::string_view text) noexcept {
  for (auto kind : {InverseKind::minkowski, InverseKind::group, InverseKind::drazin,
                    InverseKind::core_ep, InverseKind::m_core, InverseKind::m_core_ep}) {
    std::string_view name = to_string(kind);
    if (text == name) {
      return kind;
    }
    // Accept snake_case as well.
    if (text.size() == name.size()) {
      bool same = true;
      for (std::size_t i = 0; i < text.size() && same; ++i) {
        char a = text[i] == '_' ? '-' : text[i];
        same = a == name[i];
      }
      if (same) {
        return kind;
      }
    }
  }
  return std::nullopt;
}

std::string_view to_string(Failure failure) noexcept {
  switch (failure) {
    case Failure::not_minkowski_invertible: return "NotMinkowskiInvertible";
    case Failure::not_group_invertible: return "NotGroupInvertible";
    case Failure::not_cm: return "NotCM";
    case Failure::not_m_core_invertible: return "NotMCoreInvertible";
    case Failure::not_m_core_ep_invertible: return "NotMCoreEPInvertible";
  }
  return "Unknown";
}

NotInvertible::NotInvertible(Failure failure, InverseReport report, const std::string& detail)
    : Error(std::string(to_string(failure)) + ": " + detail),
      failure_(failure),
      report_(std::move(report)),
      detail_(detail) {}

}  // namespace minkinv
