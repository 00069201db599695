#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace z2h {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_depth = 60;
  std::size_t max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;

  QuadratureResult& operator+=(const QuadratureResult& other);
};

using ScalarFunction = std::function<double(double)>;
using FieldFunction = std::function<double(std::span<const double>)>;

// Adaptive Gauss-Kronrod (7/15) on [a, b]. Integrable (x-a)^{-1/2} and
// (b-x)^{-1/2} endpoint singularities are absorbed by a fixed cubic endpoint
// map, so the integrand is never sampled at a or b.
QuadratureResult integrate_finite(const ScalarFunction& f, double a, double b,
                                  const QuadratureOptions& opts = {});

// Sum of integrate_finite over consecutive knots (knots must be sorted).
QuadratureResult integrate_piecewise(const ScalarFunction& f,
                                     std::span<const double> knots,
                                     const QuadratureOptions& opts = {});

// Integral over [0, inf) after u = s/(1-s).
QuadratureResult integrate_semi_infinite(const ScalarFunction& f,
                                         const QuadratureOptions& opts = {});

// Safeguarded secant/bisection. Requires g(lo)*g(hi) <= 0; the result lies in
// [lo, hi] and the final bracket is no wider than tol*max(1,|r|).
double find_root_bracketed(const ScalarFunction& g, double lo, double hi,
                           double tol = 1e-15);

// Plain bisection on the closed interval [lo, hi] with caller supplied
// endpoint signs (used where g vanishes exactly at an endpoint and the sign
// must be taken from the generic configuration). Runs to full precision.
double bisect_with_signs(const ScalarFunction& g, double lo, double hi,
                         int sign_lo, int sign_hi);

double fd_laplacian(const FieldFunction& f, std::span<const double> x,
                    double delta);
// (4 L(delta/2) - L(delta)) / 3
double fd_laplacian_richardson(const FieldFunction& f,
                               std::span<const double> x, double delta);

// Central-difference gradient with one Richardson step (delta, delta/2).
std::vector<double> fd_gradient(const FieldFunction& f,
                                std::span<const double> x, double delta);

// Least-squares slope of log|y| against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Deterministic sampling helpers built on mt19937_64. The bit-level mapping
// is fixed here so seeded output does not depend on the standard library.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : engine_(seed) {}
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();
  std::vector<double> unit_vector(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace z2h
