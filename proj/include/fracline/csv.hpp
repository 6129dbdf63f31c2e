#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fracline::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws InvalidInput when absent.
  std::size_t column(std::string_view name) const;
};

/// Parses plain comma-separated text (no quoting). Blank lines are skipped.
Table parse(const std::string& text);
/// Throws InvalidInput unless the header matches exactly.
void expect_header(const Table& t, const std::vector<std::string>& header);

std::string join(const std::vector<std::string>& cells);
/// Shortest round-trip representation of a double.
std::string num(double v);

double to_double(const std::string& s);
long long to_int(const std::string& s);

}  // namespace fracline::csv
