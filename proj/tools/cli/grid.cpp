#include "cli/grid.hpp"

#include <charconv>
#include <system_error>

#include "z2h/errors.hpp"

namespace z2h::cli {

std::vector<GridRow> evaluate_grid(const HarmonicFamily& fam, const GridSpec& spec) {
  const std::size_t n = fam.dim();
  if (spec.axis_a >= n || spec.axis_b >= n || spec.axis_a == spec.axis_b) {
    throw PreconditionError("grid: plane axes must be two distinct indices in 1..n");
  }
  if (spec.count < 1) throw PreconditionError("grid: --n must be at least 1");
  if (!(spec.hi >= spec.lo)) throw PreconditionError("grid: range must satisfy lo <= hi");
  auto coord = [&](std::size_t k) {
    if (spec.count == 1) return spec.lo;
    return spec.lo + (spec.hi - spec.lo) * static_cast<double>(k) / static_cast<double>(spec.count - 1);
  };
  std::vector<GridRow> rows;
  rows.reserve(spec.count * spec.count);
  for (std::size_t a = 0; a < spec.count; ++a) {
    for (std::size_t b = 0; b < spec.count; ++b) {
      GridRow row;
      row.x.assign(n, 0.0);
      row.x[spec.axis_a] = coord(a);
      row.x[spec.axis_b] = coord(b);
      try {
        row.f_plus = fam.eval(row.x, Sheet::plus);
      } catch (const BranchProximityError&) {
        row.f_plus = 0.0;  // continuous limit on the branch locus
        row.branch_clamped = true;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw NumericFailure("could not format value");
  return std::string(buf, res.ptr);
}

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) os << 'x' << (i + 1) << ',';
  os << "f_plus\n";
  for (const auto& row : rows) {
    for (double v : row.x) os << format_double(v) << ',';
    os << format_double(row.f_plus) << '\n';
  }
}

}  // namespace z2h::cli
