#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kepart/harness.hpp"

namespace kepart::cli {

inline constexpr const char* kCsvMagic = "# kepart simulate csv v1";

/// Fixed column order of the simulate CSV.
const std::vector<std::string>& csv_columns();

/// A simulate output: the JSON run config echoed in the header plus the
/// per-point reports.
struct CsvDocument {
  std::string config_json;
  std::vector<PointReport> points;
};

/// Numbers are written as shortest round-trip decimals; absent optional
/// fields are left empty.
void write_csv(std::ostream& out, const CsvDocument& doc);

/// Inverse of write_csv. Throws std::runtime_error with a line number on
/// malformed input.
CsvDocument read_csv(std::istream& in);

/// Shortest decimal that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace kepart::cli
