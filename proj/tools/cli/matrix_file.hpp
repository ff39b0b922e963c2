#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "minkinv/types.hpp"

namespace minkinv::cli {

/// Malformed or unreadable input. The message carries the source name and,
/// for syntax errors, line:column.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatrixFile {
  std::string name;
  CMatrix entries;
};

/// {"n": 3, "entries": [[[re, im], ...], ...], "name": "..."}.
/// `source` is used in error messages and as the default name.
[[nodiscard]] MatrixFile parse_matrix_json(std::string_view text, const std::string& source);

/// Real CSV: one row per line, cells separated by commas, each x read as [x, 0].
[[nodiscard]] MatrixFile parse_matrix_csv(std::string_view text, const std::string& source);

/// Dispatches on the extension (.csv, anything else is JSON).
[[nodiscard]] MatrixFile read_matrix_file(const std::filesystem::path& path);

/// Shortest decimal that round-trips each double.
[[nodiscard]] std::string write_matrix_json(const MatrixFile& file);

}  // namespace minkinv::cli
