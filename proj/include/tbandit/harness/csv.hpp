#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tbandit::harness {

/// Shortest-round-trip-safe decimal text: %.17g.
std::string format_real(double v);

/// Splits one CSV line on commas (no quoting; none of our files need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace tbandit::harness
