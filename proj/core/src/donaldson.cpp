#include "z2h/donaldson.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "z2h/asymptotics.hpp"
#include "z2h/errors.hpp"
#include "z2h/zharmonic.hpp"

namespace z2h {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> atan_argument(const TwistorParams& p, std::span<const double> x, double theta) {
  const double sq = std::sqrt(p.Q(theta));
  const double v = x[0] * std::cos(theta) + x[1] * std::sin(theta);
  // A zero real part is +0.0 so the x_3 -> 0+ limit is selected.
  const double re = x[2] > 0.0 ? x[2] / sq : 0.0;
  return {re, v / sq};
}

// Zeros of v(theta)^2 - Q(theta) on [0, 2pi): the log-singular points.
std::vector<double> singular_angles(const TwistorParams& p, std::span<const double> x) {
  auto g = [&](double th) {
    const double v = x[0] * std::cos(th) + x[1] * std::sin(th);
    return v * v - p.Q(th);
  };
  std::vector<double> out;
  const int samples = 720;
  double prev = g(0.0);
  for (int k = 1; k <= samples; ++k) {
    const double a = kTwoPi * (k - 1) / samples;
    const double b = kTwoPi * k / samples;
    const double cur = g(b);
    if (prev == 0.0) out.push_back(a);
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) out.push_back(find_root_bracketed(g, a, b, 0.0));
    prev = cur;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TwistorParams::TwistorParams(double eps) : eps_(eps) {
  if (!std::isfinite(eps) || !(eps > -1.0 && eps < 1.0)) throw PreconditionError("TwistorParams: eps must lie in (-1, 1)");
}

double TwistorParams::Q(double theta) const { return 1.0 + eps_ * std::cos(2.0 * theta); }

std::array<double, 2> TwistorParams::axes() const { return {std::sqrt(1.0 + eps_), std::sqrt(1.0 - eps_)}; }

double inverse_Q_integral(const TwistorParams& p, const QuadratureOptions& opts) {
  return integrate_finite([&](double th) { return 1.0 / p.Q(th); }, 0.0, kTwoPi, opts).value;
}

double arctan_branch_scan(const TwistorParams& p, std::span<const double> x, std::size_t steps) {
  // Tracks the real part of atan by continuity from the principal value at 0.
  // A jump that survives 40 halvings is a genuine branch switch.
  double worst = 0.0;
  double prev_theta = 0.0;
  double prev = std::atan(atan_argument(p, x, 0.0)).real();
  for (std::size_t k = 1; k <= steps; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(steps);
    double cur = std::atan(atan_argument(p, x, theta)).real();
    double jump = std::abs(cur - prev);
    if (jump > 0.25 * std::numbers::pi) {
      double lo = prev_theta, hi = theta, flo = prev;
      for (int halving = 0; halving < 40 && jump > 0.25 * std::numbers::pi; ++halving) {
        const double mid = 0.5 * (lo + hi);
        const double fm = std::atan(atan_argument(p, x, mid)).real();
        if (std::abs(fm - flo) > 0.25 * std::numbers::pi) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
        jump = std::abs(std::atan(atan_argument(p, x, hi)).real() - flo);
      }
    }
    worst = std::max(worst, jump);
    prev = cur;
    prev_theta = theta;
  }
  return worst;
}

double donaldson_eval(const TwistorParams& p, std::span<const double> x, const QuadratureOptions& opts) {
  if (x.size() != 3) throw PreconditionError("donaldson_eval: expected a point in R^3");
  if (x[2] < 0.0) throw PreconditionError("donaldson_eval: requires x_3 >= 0 (use oddness for x_3 < 0)");
  if (x[2] > 0.0) {
    const double jump = arctan_branch_scan(p, x);
    if (jump > 0.25 * std::numbers::pi) {
      throw NumericFailure("donaldson_eval: arctan branch continuity failed (jump " + std::to_string(jump) + ")");
    }
  }
  auto integrand = [&](double theta) {
    const double q = p.Q(theta);
    const auto arg = atan_argument(p, x, theta);
    const std::complex<double> w(x[2], x[0] * std::cos(theta) + x[1] * std::sin(theta));
    const auto val = std::atan(arg) * (w * w + q);
    return val.real() / (q * std::sqrt(q));
  };
  std::vector<double> knots{0.0};
  for (double th : singular_angles(p, x)) {
    if (th > 0.0 && th < kTwoPi) knots.push_back(th);
  }
  knots.push_back(kTwoPi);
  const double main = integrate_piecewise(integrand, knots, opts).value;
  const double linear = x[2] * kTwoPi / std::sqrt(1.0 - p.eps() * p.eps());
  return main + linear;
}

TwistorCoefficients donaldson_coefficients(const TwistorParams& p, const QuadratureOptions& opts) {
  const double e = p.eps();
  TwistorCoefficients c;
  const double half_pi = 0.5 * std::numbers::pi;
  auto theta_int = [&](auto weight) {
    return half_pi * integrate_finite(weight, 0.0, kTwoPi, opts).value;
  };
  c.theta_form[0] = theta_int([&](double th) { return 1.0 / std::sqrt(p.Q(th)); });
  c.theta_form[1] = theta_int([&](double th) {
    const double q = p.Q(th);
    return std::cos(th) * std::cos(th) / (q * std::sqrt(q));
  });
  c.theta_form[2] = theta_int([&](double th) {
    const double q = p.Q(th);
    return std::sin(th) * std::sin(th) / (q * std::sqrt(q));
  });
  const double lo = 1.0 - e, hi = 1.0 + e;
  auto u_int = [&](auto weight) { return 2.0 * std::numbers::pi * integrate_semi_infinite(weight, opts).value; };
  auto root = [&](double u) { return std::sqrt((lo + u * u) * (hi + u * u)); };
  c.u_form[0] = u_int([&](double u) { return 1.0 / root(u); });
  c.u_form[1] = u_int([&](double u) { return 1.0 / ((hi + u * u) * root(u)); });
  c.u_form[2] = u_int([&](double u) { return 1.0 / ((lo + u * u) * root(u)); });
  for (int k = 0; k < 3; ++k) {
    c.max_route_gap = std::max(c.max_route_gap, std::abs(c.theta_form[k] - c.u_form[k]) / std::abs(c.u_form[k]));
  }
  c.c0 = c.u_form[0];
  c.c1 = c.u_form[1];
  c.c2 = c.u_form[2];
  c.c3 = c.c1 + c.c2;
  return c;
}

std::vector<double> comparison_axes(const TwistorParams& p) {
  const auto ax = p.axes();
  if (ax[0] - ax[1] < HalfAxes::kMinRelativeGap * ax[0] * 10.0) return {1.0 + 1e-6, 1.0};
  return {ax[0], ax[1]};
}

double kappa(const TwistorParams& p) {
  const auto ax = p.axes();
  const std::vector<double> h{ax[0], ax[1]};
  return donaldson_coefficients(p).c1 / coefficients(h).a[0];
}

VerificationReport compare_to_fh(const TwistorParams& p, std::size_t samples, std::uint64_t seed) {
  const auto h = comparison_axes(p);
  const HarmonicFamily fam{HalfAxes(h)};
  const double k = kappa(p);
  SeededSampler rng(seed);
  VerificationReport rep;
  rep.name = "donaldson_vs_fh";
  rep.columns = {"x1", "x2", "x3", "f_donaldson", "kappa_f_h", "relative_deviation"};
  const auto ax = p.axes();
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    // Annulus around the branch ellipse: offset along the in-plane normal and x_3.
    const double alpha = rng.uniform(0.0, kTwoPi);
    const double beta = rng.uniform(0.05, std::numbers::pi - 0.05);
    const double rho = rng.uniform(0.1, 0.6);
    const double ex = ax[0] * std::cos(alpha), ey = ax[1] * std::sin(alpha);
    double nx = std::cos(alpha) / ax[0], ny = std::sin(alpha) / ax[1];
    const double nn = std::hypot(nx, ny);
    nx /= nn;
    ny /= nn;
    const std::vector<double> x{ex + rho * std::cos(beta) * nx, ey + rho * std::cos(beta) * ny, rho * std::sin(beta)};
    const double fd = donaldson_eval(p, x);
    const double fh = k * fam.eval(x, Sheet::plus);
    const double dev = std::abs(fd / fh - 1.0);
    worst = std::max(worst, dev);
    rep.rows.push_back({x[0], x[1], x[2], fd, fh, dev});
  }
  rep.set("kappa", k);
  rep.set("max_rel_dev", worst);
  rep.set("axis_1", h[0]);
  rep.set("axis_2", h[1]);
  if (h[0] != ax[0]) rep.notes.push_back("equal axes perturbed to h = (1 + 1e-6, 1) for f_h");
  return rep;
}

}  // namespace z2h
