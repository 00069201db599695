#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace z2h {

// e[k] = k-th elementary symmetric polynomial of v, k = 0..v.size().
std::vector<double> elementary_symmetric(std::span<const double> v);

// Same, with entry `skip` removed from v.
std::vector<double> elementary_symmetric_excluding(std::span<const double> v, std::size_t skip);

// Coefficients in ascending powers. poly_from_roots returns prod (y - r).
std::vector<double> poly_from_roots(std::span<const double> roots);
std::vector<double> poly_multiply(std::span<const double> p, std::span<const double> q);
std::vector<double> poly_derivative(std::span<const double> p);
double poly_eval(std::span<const double> p, double y);

}  // namespace z2h
