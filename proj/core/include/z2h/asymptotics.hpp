#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "z2h/errors.hpp"
#include "z2h/numerics.hpp"
#include "z2h/report.hpp"

namespace z2h {

class HarmonicFamily;

// Far field f ~ a0 - sum a_i x_i^2.
struct QuadricAsymptote {
  double a0 = 0.0;
  std::vector<double> a;        // a_1..a_n, a_n = -sum_{j<n} a_j
  double a_n_integral = 0.0;    // a_n from the S'/S^{3/2} integral
  double quadrature_error = 0.0;
};

// Accepts any positive h (equal values allowed).
QuadricAsymptote coefficients(std::span<const double> h, const QuadratureOptions& opts = {});

// a_i for equal axes h = 1 in dimension n: (1/2) int (1+u^2)^{-(n+1)/2}.
double equal_axes_coefficient(std::size_t n);

// Phi(h) = a0 / prod h = (1/2) int du / sqrt(S(u^2)) and its closed-form
// gradient dPhi/dh_i = -(h_i / prod h) a_i.
double phi_potential(std::span<const double> h, const QuadratureOptions& opts = {});
std::vector<double> phi_gradient(std::span<const double> h, const QuadratureOptions& opts = {});

VerificationReport scaling_check(std::span<const double> h, double s);
VerificationReport phi_gradient_check(std::span<const double> h, double step = 1e-4);

struct InversionResult {
  std::vector<double> h0;  // direction solve: coefficients(h0).a = target
  std::vector<double> h;   // final axes (scale * h0 when C is given)
  double scale = 1.0;
  int iterations = 0;
  double residual = 0.0;   // max relative coefficient mismatch at h0
  bool converged = false;
};

class InversionFailure : public NumericFailure {
 public:
  InversionFailure(const std::string& what, InversionResult best)
      : NumericFailure(what, best.residual), best_(std::move(best)) {}
  const InversionResult& best() const { return best_; }

 private:
  InversionResult best_;
};

InversionResult invert(std::span<const double> target, std::optional<double> C = std::nullopt,
                       double tol = 1e-12, int max_iter = 50);

// Same solve from a caller supplied starting point (used for injectivity checks).
InversionResult invert_from(std::span<const double> target, std::span<const double> start, double tol = 1e-12,
                            int max_iter = 50);

// Least-squares fit of c0 - sum c_j x_j^2 (with sum c_j = 0) to f_h on the
// sphere |x| = radius, sheet "+".
struct FarFieldFit {
  double c0 = 0.0;
  std::vector<double> c;  // n entries
  double rms_residual = 0.0;
};
FarFieldFit far_field_fit(const HarmonicFamily& fam, double radius, std::size_t samples, std::uint64_t seed);

// Exact leading remainder: f - (a0 - sum a_i x_i^2) ~ monopole / |x|^{n-2}.
double far_field_monopole(std::span<const double> h);

// |f - asymptote| along `direction` at the given radii and the fitted decay exponent.
VerificationReport far_field_decay(const HarmonicFamily& fam, std::span<const double> direction,
                                   std::span<const double> radii);

}  // namespace z2h
