#include "matrix_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace minkinv::cli {

namespace {

using nlohmann::json;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

[[noreturn]] void fail(const std::string& source, const std::string& message) {
  throw InputError(source + ": " + message);
}

double finite_number(const json& value, const std::string& source, const std::string& where) {
  if (!value.is_number()) {
    fail(source, where + " must be a number");
  }
  const double x = value.get<double>();
  if (!std::isfinite(x)) {
    fail(source, where + " is not finite");
  }
  return x;
}

}  // namespace

MatrixFile parse_matrix_json(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string message = e.what();
    const auto colon = message.rfind(": ");
    if (colon != std::string::npos) {
      message = message.substr(colon + 2);
    }
    fail(source, line_column(text, e.byte) + ": " + message);
  }
  if (!doc.is_object()) {
    fail(source, "top level must be an object");
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 0) {
    fail(source, "\"n\" must be a non-negative integer");
  }
  const auto n = static_cast<Index>(doc["n"].get<long long>());
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    fail(source, "\"entries\" must be an array");
  }
  const json& rows = doc["entries"];
  if (static_cast<Index>(rows.size()) != n) {
    fail(source, "\"entries\" has " + std::to_string(rows.size()) + " rows, expected " +
                     std::to_string(n));
  }
  MatrixFile file;
  file.name = source;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) {
      fail(source, "\"name\" must be a string");
    }
    file.name = doc["name"].get<std::string>();
  }
  file.entries.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    const std::string row_path = "entries[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      fail(source, row_path + " must hold " + std::to_string(n) + " entries");
    }
    for (Index j = 0; j < n; ++j) {
      const json& cell = row[static_cast<std::size_t>(j)];
      const std::string where = row_path + "[" + std::to_string(j) + "]";
      if (!cell.is_array() || cell.size() != 2) {
        fail(source, where + " must be a [re, im] pair");
      }
      file.entries(i, j) = Complex(finite_number(cell[0], source, where + "[0]"),
                                   finite_number(cell[1], source, where + "[1]"));
    }
  }
  return file;
}

MatrixFile parse_matrix_csv(std::string_view text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(start, end - start);
    ++line_number;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      continue;
    }
    std::vector<double> row;
    std::size_t cell_start = 0;
    while (true) {
      std::size_t cell_end = line.find(',', cell_start);
      if (cell_end == std::string_view::npos) {
        cell_end = line.size();
      }
      std::string_view cell = line.substr(cell_start, cell_end - cell_start);
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      const std::size_t column = cell_start + (first == std::string_view::npos ? 0 : first) + 1;
      const std::string at = std::to_string(line_number) + ":" + std::to_string(column);
      if (first == std::string_view::npos) {
        fail(source, at + ": empty cell");
      }
      cell = cell.substr(first, last - first + 1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        fail(source, at + ": not a finite number: " + std::string(cell));
      }
      row.push_back(value);
      if (cell_end == line.size()) {
        break;
      }
      cell_start = cell_end + 1;
    }
    rows.push_back(std::move(row));
    if (end == text.size()) {
      break;
    }
  }
  const auto n = static_cast<Index>(rows.size());
  MatrixFile file;
  file.name = source;
  file.entries.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Index>(row.size()) != n) {
      fail(source, "row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                       " cells, expected " + std::to_string(n));
    }
    for (Index j = 0; j < n; ++j) {
      file.entries(i, j) = Complex(row[static_cast<std::size_t>(j)], 0.0);
    }
  }
  return file;
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError(path.string() + ": cannot open");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (path.extension() == ".csv") {
    return parse_matrix_csv(text, path.string());
  }
  return parse_matrix_json(text, path.string());
}

std::string write_matrix_json(const MatrixFile& file) {
  json rows = json::array();
  for (Index i = 0; i < file.entries.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < file.entries.cols(); ++j) {
      row.push_back({file.entries(i, j).real(), file.entries(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  json doc = {{"n", file.entries.rows()}, {"entries", std::move(rows)}};
  if (!file.name.empty()) {
    doc["name"] = file.name;
  }
  return doc.dump() + "\n";
}

}  // namespace minkinv::cli
