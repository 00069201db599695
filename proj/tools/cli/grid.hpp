#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "z2h/zharmonic.hpp"

namespace z2h::cli {

struct GridSpec {
  std::size_t axis_a = 0;  // zero-based
  std::size_t axis_b = 1;
  double lo = -1.0;
  double hi = 1.0;
  std::size_t count = 11;
};

struct GridRow {
  std::vector<double> x;
  double f_plus = 0.0;
  bool branch_clamped = false;
};

std::vector<GridRow> evaluate_grid(const HarmonicFamily& fam, const GridSpec& spec);

// Shortest round-trip decimal form of v.
std::string format_double(double v);

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows, std::size_t n);

}  // namespace z2h::cli
