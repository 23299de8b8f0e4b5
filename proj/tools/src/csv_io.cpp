#include "kepart/cli/csv_io.hpp"

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>

namespace kepart::cli {

namespace {

constexpr std::string_view kConfigPrefix = "# config ";

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw std::runtime_error("csv line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, const char* column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(line, std::string("bad value '") + std::string(text) + "' in column " + column);
  }
  return value;
}

std::optional<double> parse_optional(std::string_view text, std::size_t line, const char* column) {
  if (text.empty()) return std::nullopt;
  return parse_number<double>(text, line, column);
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "d",        "N",          "x_abscissa",          "mass_mode",         "term",
      "count",    "mean",       "variance_biased",     "stderr",            "min",
      "max",      "expected",   "abs_diff",            "weighted_diff",     "sigma_ratio",
      "fraction_negative",      "fraction_positive",   "degenerate_excluded", "seed",
  };
  return cols;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const CsvDocument& doc) {
  out << kCsvMagic << '\n' << kConfigPrefix << doc.config_json << '\n';
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& p : doc.points) {
    for (const auto& t : p.terms) {
      out << p.d << ',' << p.N << ',' << format_double(p.x_abscissa) << ',' << to_string(p.mode)
          << ',' << term_name(t.term) << ',' << t.count << ',' << format_double(t.mean) << ','
          << format_double(t.variance_biased) << ',' << format_double(t.stderr_) << ','
          << format_double(t.min) << ',' << format_double(t.max) << ','
          << format_optional(t.expected) << ',' << format_optional(t.abs_diff) << ','
          << format_optional(t.weighted_diff) << ',' << format_optional(t.sigma_ratio) << ','
          << format_double(t.fraction_negative) << ',' << format_double(t.fraction_positive)
          << ',' << t.degenerate_excluded << ',' << p.seed << '\n';
    }
  }
}

CsvDocument read_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || line != kCsvMagic) fail(1, "missing '" + std::string(kCsvMagic) + "' header");
  if (!next_line() || line.rfind(kConfigPrefix, 0) != 0) fail(lineno, "missing '# config' line");
  doc.config_json = line.substr(kConfigPrefix.size());

  if (!next_line()) fail(lineno, "missing column header");
  const auto& cols = csv_columns();
  {
    const auto fields = split(line);
    bool ok = fields.size() == cols.size();
    for (std::size_t i = 0; ok && i < cols.size(); ++i) ok = fields[i] == cols[i];
    if (!ok) fail(lineno, "unexpected column header");
  }

  while (next_line()) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != cols.size()) {
      fail(lineno, "expected " + std::to_string(cols.size()) + " fields, got " +
                       std::to_string(f.size()));
    }
    const int d = parse_number<int>(f[0], lineno, "d");
    const int n = parse_number<int>(f[1], lineno, "N");
    MassMode mode;
    try {
      mode = parse_mass_mode(f[3]);
    } catch (const std::invalid_argument& e) {
      fail(lineno, e.what());
    }
    const auto term = parse_term(f[4]);
    if (!term) fail(lineno, "unknown term '" + std::string(f[4]) + "'");
    const auto seed = parse_number<std::uint64_t>(f[18], lineno, "seed");

    if (doc.points.empty() || doc.points.back().d != d || doc.points.back().N != n ||
        doc.points.back().mode != mode) {
      PointReport p;
      p.d = d;
      p.N = n;
      p.mode = mode;
      p.seed = seed;
      p.x_abscissa = parse_number<double>(f[2], lineno, "x_abscissa");
      doc.points.push_back(std::move(p));
    }
    TermReport t;
    t.term = *term;
    t.count = parse_number<std::uint64_t>(f[5], lineno, "count");
    t.mean = parse_number<double>(f[6], lineno, "mean");
    t.variance_biased = parse_number<double>(f[7], lineno, "variance_biased");
    t.variance_unbiased =
        t.count > 1 ? static_cast<double>(t.count) * t.variance_biased / static_cast<double>(t.count - 1)
                    : 0.0;
    t.stderr_ = parse_number<double>(f[8], lineno, "stderr");
    t.min = parse_number<double>(f[9], lineno, "min");
    t.max = parse_number<double>(f[10], lineno, "max");
    t.expected = parse_optional(f[11], lineno, "expected");
    t.abs_diff = parse_optional(f[12], lineno, "abs_diff");
    t.weighted_diff = parse_optional(f[13], lineno, "weighted_diff");
    t.sigma_ratio = parse_optional(f[14], lineno, "sigma_ratio");
    t.fraction_negative = parse_number<double>(f[15], lineno, "fraction_negative");
    t.fraction_positive = parse_number<double>(f[16], lineno, "fraction_positive");
    t.degenerate_excluded = parse_number<std::uint64_t>(f[17], lineno, "degenerate_excluded");
    doc.points.back().terms.push_back(t);
  }
  if (doc.points.empty()) fail(lineno, "no data rows");
  return doc;
}

}  // namespace kepart::cli
