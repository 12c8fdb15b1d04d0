#include "format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace cli {

std::string format_number(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value in output");
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double pinned(double x) {
  return std::strtod(format_number(x).c_str(), nullptr);
}

Json number(double x) { return Json(pinned(x)); }

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != header_.size()) {
    throw std::logic_error("csv row width does not match header");
  }
  std::string row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) row += ',';
    row += format_number(values[i]);
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& r : rows_) {
    out += r;
    out += '\n';
  }
  return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  out.close();
  if (!out) throw IoError("failed writing output file: " + path);
}

} // namespace cli
