#include "cpt/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cpt::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvWriter::manifest(const nlohmann::json& params) { os_ << "# " << params.dump() << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
}

std::vector<double> Grid::points() const {
  std::vector<double> p(steps);
  for (std::size_t k = 0; k < steps; ++k)
    p[k] = steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
  return p;
}

Grid parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) ||
      c.find(':') != std::string::npos)
    throw std::invalid_argument("grid must have the form lo:hi:steps");
  Grid g{};
  try {
    std::size_t used = 0;
    g.lo = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    g.hi = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    const long long s = std::stoll(c, &used);
    if (used != c.size() || s < 1) throw std::invalid_argument(c);
    g.steps = static_cast<std::size_t>(s);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("grid '" + text + "' is not of the form lo:hi:steps");
  }
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || g.hi < g.lo || (g.steps == 1 && g.lo != g.hi) ||
      (g.steps > 1 && g.lo == g.hi))
    throw std::invalid_argument("grid '" + text + "' needs lo < hi and steps >= 2");
  return g;
}

}  // namespace cpt::cli
