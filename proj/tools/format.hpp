#pragma once

// Pinned number formatting and output writers. Everything the CLI writes goes
// through here so that identical runs produce identical bytes.

#include <string>
#include <vector>

#include "json.hpp"

namespace cli {

using Json = nlohmann::ordered_json;

/// Thrown for unwritable outputs; maps to exit code 2.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown for invalid configurations and unparseable inputs; exit code 1.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// 12 significant digits, scientific below 1e-4 in magnitude.
std::string format_number(double x);

/// Rounds to 12 significant digits; throws std::domain_error on NaN/Inf.
double pinned(double x);

/// A pinned JSON number.
Json number(double x);

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values);
  [[nodiscard]] std::string str() const;

private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

std::string dump_json(const Json& j);

/// Writes to `path`, or to stdout when the path is empty or "-".
void write_output(const std::string& path, const std::string& content);

} // namespace cli
