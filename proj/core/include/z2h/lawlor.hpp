#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "z2h/ellipsoidal.hpp"
#include "z2h/numerics.hpp"
#include "z2h/report.hpp"

namespace z2h {

class NeckParams {
 public:
  explicit NeckParams(std::vector<double> c, QuadratureOptions opts = {});

  std::size_t dim() const { return c_.size(); }
  const std::vector<double>& c() const { return c_; }
  // Fiber scale c_n (the role of t in the small-angle family).
  double fiber_scale() const { return c_.back(); }
  const QuadratureOptions& quadrature() const { return opts_; }

  // P(x) = (prod (1 + c_k^2 x) - 1) / x, evaluated without cancellation.
  double P(double x) const;
  double psi_derivative(std::size_t i, double y) const;
  double psi(std::size_t i, double s) const;
  const std::vector<double>& angles() const { return phi_; }

 private:
  std::vector<double> knots(double upto) const;

  std::vector<double> c_;
  QuadratureOptions opts_;
  std::vector<double> phi_;
};

struct NeckPoint {
  std::vector<double> w;  // unit vector
  double s = 0.0;

  NeckPoint involution() const;
};

NeckPoint make_neck_point(std::vector<double> w, double s);

struct NeckProjection {
  std::vector<double> x;  // base
  std::vector<double> y;  // fiber, d_i w_i with d_i carrying the factor c_n
};

NeckProjection project(const NeckParams& c, const NeckPoint& pt);

// m_k(s) and m_k'(s) of the base coordinates.
struct BaseProfile {
  std::vector<double> m, dm, im;  // im: unscaled fiber profile
};
BaseProfile base_profile(const NeckParams& c, double s);

// int_0^s [sum_{i<n} d_i w_i^2 m_i' - d_n w_n^2 m_n'] du with d = c_n * im.
double potential(const NeckParams& c, const NeckPoint& pt);
// The same integral with d replaced by the unscaled im (= potential / c_n).
double liouville_primitive(const NeckParams& c, const NeckPoint& pt);

// f_h sheet matched by the neck point: "+" iff s < 0 or (s = 0 and w_n > 0).
Sheet neck_sheet(const NeckPoint& pt);

struct LimitProfiles {
  std::vector<double> beta;  // beta_1..beta_{n-1}, beta_n
};
LimitProfiles limit_profiles(std::span<const double> c_base, double s, const QuadratureOptions& opts = {});

// Pr_Y in the limit profile regime.
std::vector<double> limit_fiber(std::span<const double> c_base, const NeckPoint& pt);

// c = (1/h_1, ..., 1/h_{n-1}, t)
std::vector<double> small_angle_parameters(std::span<const double> h, double t);

VerificationReport angle_match(const HalfAxes& h, std::span<const double> t_list);

std::vector<NeckPoint> sample_neck_points(std::size_t n, std::size_t count, std::uint64_t seed,
                                          double min_radius = 0.5, double s_max = 1.5);

VerificationReport convergence_harness(const HalfAxes& h, std::span<const double> t_list,
                                       const std::vector<NeckPoint>& samples,
                                       double branch_tol = kDefaultBranchTolerance);

struct NeckGrid {
  std::vector<double> s_values;
  std::size_t directions = 64;
  std::uint64_t seed = 1;
  double exclusion = 0.1;  // radius of the excluded ball in (s, w_n)
};
VerificationReport fiber_nonvanishing(std::span<const double> c_base, const NeckGrid& grid);

// Im det(I + i H) and the asymmetry of H = dY/dX at a neck point, with Y the
// unscaled fiber coordinates (H is the Hessian of the Liouville primitive).
struct LagrangianCheck {
  double im_det = 0.0;
  double re_det = 0.0;
  double asymmetry = 0.0;
};
LagrangianCheck special_lagrangian_residual(const NeckParams& c, const NeckPoint& pt, double step = 1e-5);

// Newton inversion of Pr_X seeded from the limit profile.
NeckPoint invert_projection(const NeckParams& c, std::span<const double> x, Sheet sheet, double tol = 1e-12,
                            int max_iter = 50);

}  // namespace z2h
