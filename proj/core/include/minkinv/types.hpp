#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace minkinv {

using Complex = std::complex<double>;

/// Dense complex matrix. Every object in the library (A, B, X, U, the
/// decomposition blocks) is carried by this type. Entries coming from
/// outside the library are checked for finiteness at the API boundary.
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Frobenius residuals keyed by equation label. std::map keeps the labels
/// sorted, which the CLI relies on for byte-stable output.
using ResidualMap = std::map<std::string, double>;

/// The Minkowski metric diag(1, -1, ..., -1) on C^n.
///
/// Only the dimension is stored; the sign pattern is implicit so that
/// applying G is a row or column sign flip rather than a product.
class MinkowskiMetric {
 public:
  explicit MinkowskiMetric(Index n);

  [[nodiscard]] Index dim() const noexcept { return n_; }
  [[nodiscard]] static constexpr double sign(Index i) noexcept { return i == 0 ? 1.0 : -1.0; }

  /// Materialized n x n matrix.
  [[nodiscard]] CMatrix matrix() const;

  /// G * M without forming G.
  [[nodiscard]] CMatrix left(const CMatrix& M) const;
  /// M * G without forming G.
  [[nodiscard]] CMatrix right(const CMatrix& M) const;

 private:
  Index n_;
};

struct Tolerances {
  double rank_tol_factor = 1.0;
  double residual_tol = 1e-8;
  double eig_zero_factor = 1.0;

  /// Throws std::invalid_argument unless every field is finite and > 0.
  void validate() const;
};

enum class InverseKind { minkowski, group, drazin, core_ep, m_core, m_core_ep };

[[nodiscard]] std::string_view to_string(InverseKind kind) noexcept;
/// Accepts the CLI spellings ("core-ep", "m-core-ep", ...) as well as the
/// enumerator names.
[[nodiscard]] std::optional<InverseKind> parse_inverse_kind(std::string_view text) noexcept;

/// A computed generalized inverse together with the residuals of the
/// equations that define it.
struct InverseReport {
  InverseKind kind = InverseKind::minkowski;
  bool exists = false;
  CMatrix X;  // empty when !exists
  ResidualMap residuals;
  std::string route;
  Index index = 0;  // Ind(A) used by the defining equations
  ResidualMap route_gaps;  // pairwise Frobenius distances between routes
  std::vector<std::string> diagnostics;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-conformable or non-square input.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Numerical diagnostic: non-convergence, a borderline rank decision, two
/// tests that must agree but do not, or routes that disagree.
class NumericalError : public Error {
 public:
  using Error::Error;
};

enum class Failure {
  not_minkowski_invertible,
  not_group_invertible,
  not_cm,
  not_m_core_invertible,
  not_m_core_ep_invertible,
};

[[nodiscard]] std::string_view to_string(Failure failure) noexcept;

/// A clean mathematical negative: the requested inverse does not exist.
/// The attached report has exists == false and records the failing test.
class NotInvertible : public Error {
 public:
  NotInvertible(Failure failure, InverseReport report, const std::string& detail);

  [[nodiscard]] Failure failure() const noexcept { return failure_; }
  [[nodiscard]] const InverseReport& report() const noexcept { return report_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  Failure failure_;
  InverseReport report_;
  std::string detail_;
};

}  // namespace minkinv
