#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace pcfpair {

struct CsvRow {
  std::size_t line = 0;  // 1-based line in the source, header is line 1
  std::vector<double> values;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

/// Reads a numeric CSV whose header must equal `expected_header`.
/// Malformed or non-finite fields raise ParseError with the offending line.
CsvTable read_csv(std::istream& in, const std::vector<std::string>& expected_header);

/// Nine significant digits, the fixed output precision for every CSV.
std::string format_number(double v);

/// Rounds to nine significant digits (for JSON output).
double round9(double v);

void write_csv_row(std::ostream& out, const std::vector<double>& values);
void write_csv_header(std::ostream& out, const std::vector<std::string>& names);

}  // namespace pcfpair
