#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace cpt::cli {

/// Shortest round-trip-stable text for a double ("%.12g"; inf/nan spelled out).
std::string format_number(double v);

/// Comma-separated table with a leading `#` manifest comment.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void manifest(const nlohmann::json& params);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
};

struct Grid {
  double lo;
  double hi;
  std::size_t steps;

  std::vector<double> points() const;
};

/// Parses "lo:hi:steps" (steps >= 2, or 1 when lo == hi).
Grid parse_grid(const std::string& text);

}  // namespace cpt::cli
