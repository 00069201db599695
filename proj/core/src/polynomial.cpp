#include "z2h/polynomial.hpp"

namespace z2h {

std::vector<double> elementary_symmetric(std::span<const double> v) {
  std::vector<double> e(v.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += v[i] * e[k - 1];
  }
  return e;
}

std::vector<double> elementary_symmetric_excluding(std::span<const double> v, std::size_t skip) {
  std::vector<double> rest;
  rest.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != skip) rest.push_back(v[i]);
  }
  return elementary_symmetric(rest);
}

std::vector<double> poly_from_roots(std::span<const double> roots) {
  std::vector<double> p{1.0};
  for (double r : roots) {
    const double lin[2] = {-r, 1.0};
    p = poly_multiply(p, lin);
  }
  return p;
}

std::vector<double> poly_multiply(std::span<const double> p, std::span<const double> q) {
  if (p.empty() || q.empty()) return {};
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

std::vector<double> poly_derivative(std::span<const double> p) {
  if (p.size() <= 1) return {0.0};
  std::vector<double> d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
  return d;
}

double poly_eval(std::span<const double> p, double y) {
  double acc = 0.0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * y + p[k];
  return acc;
}

}  // namespace z2h
