#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "z2h/numerics.hpp"
#include "z2h/report.hpp"

namespace z2h {

class TwistorParams {
 public:
  explicit TwistorParams(double eps);
  double eps() const { return eps_; }
  double Q(double theta) const;
  // Semi-axes (sqrt(1+eps), sqrt(1-eps)) of the branch ellipse.
  std::array<double, 2> axes() const;

 private:
  double eps_;
};

// int_0^{2pi} dtheta / Q(theta) by quadrature.
double inverse_Q_integral(const TwistorParams& p, const QuadratureOptions& opts = {});

// Twistor integral for x_3 >= 0. Throws PreconditionError for x_3 < 0 and
// NumericFailure when the arctan branch scan finds a discontinuity.
double donaldson_eval(const TwistorParams& p, std::span<const double> x, const QuadratureOptions& opts = {});

// Continuity scan of theta -> atan(w/sqrt(Q)) on [0, 2pi] with step halving.
// Returns the largest jump in the real part seen after refinement.
double arctan_branch_scan(const TwistorParams& p, std::span<const double> x, std::size_t steps = 512);

struct TwistorCoefficients {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  std::array<double, 3> theta_form{};  // c0, c1, c2 from the theta integrals
  std::array<double, 3> u_form{};      // c0, c1, c2 from the u integrals
  double max_route_gap = 0.0;          // max relative difference between routes
};
TwistorCoefficients donaldson_coefficients(const TwistorParams& p, const QuadratureOptions& opts = {});

// Proportionality constant c1 / a1 with h = (sqrt(1+eps), sqrt(1-eps)).
double kappa(const TwistorParams& p);

// Semi-axes used for f_h: the exact ones, or (1 + 1e-6, 1) at eps = 0.
std::vector<double> comparison_axes(const TwistorParams& p);

VerificationReport compare_to_fh(const TwistorParams& p, std::size_t samples, std::uint64_t seed);

}  // namespace z2h
