#include "z2h/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "z2h/ellipsoidal.hpp"
#include "z2h/zharmonic.hpp"

namespace z2h {

namespace {

double S_of(std::span<const double> h, double y) {
  double s = 1.0;
  for (double v : h) s *= y + v * v;
  return s;
}

double product_of(std::span<const double> h) {
  return std::accumulate(h.begin(), h.end(), 1.0, std::multiplies<>());
}

QuadratureOptions inversion_quadrature() {
  QuadratureOptions q;
  q.rel_tol = 1e-14;
  q.abs_tol = 1e-300;
  return q;
}

std::vector<double> direction_coefficients(std::span<const double> h) {
  auto c = coefficients(h, inversion_quadrature());
  c.a.pop_back();
  return c.a;
}

}  // namespace

QuadricAsymptote coefficients(std::span<const double> h, const QuadratureOptions& opts) {
  require_positive_axes(h, 2);
  const double half_prod = 0.5 * product_of(h);
  QuadricAsymptote out;
  const auto r0 = integrate_semi_infinite([&](double u) { return 1.0 / std::sqrt(S_of(h, u * u)); }, opts);
  out.a0 = half_prod * r0.value;
  out.quadrature_error = half_prod * r0.error_estimate;
  double sum = 0.0;
  for (double hi : h) {
    const double hi2 = hi * hi;
    const auto r = integrate_semi_infinite(
        [&](double u) { return 1.0 / ((u * u + hi2) * std::sqrt(S_of(h, u * u))); }, opts);
    out.a.push_back(half_prod * r.value);
    out.quadrature_error += half_prod * r.error_estimate;
    sum += out.a.back();
  }
  out.a.push_back(-sum);
  const auto rn = integrate_semi_infinite(
      [&](double u) {
        const double y = u * u;
        double sp = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
          double term = 1.0;
          for (std::size_t j = 0; j < h.size(); ++j) {
            if (j != i) term *= y + h[j] * h[j];
          }
          sp += term;
        }
        const double s = S_of(h, y);
        return sp / (s * std::sqrt(s));
      },
      opts);
  out.a_n_integral = -half_prod * rn.value;
  return out;
}

double equal_axes_coefficient(std::size_t n) {
  const double m = 0.5 * static_cast<double>(n + 1);
  return 0.5 * std::sqrt(std::numbers::pi) * std::tgamma(m - 0.5) / (2.0 * std::tgamma(m));
}

double phi_potential(std::span<const double> h, const QuadratureOptions& opts) {
  require_positive_axes(h, 2);
  return 0.5 * integrate_semi_infinite([&](double u) { return 1.0 / std::sqrt(S_of(h, u * u)); }, opts).value;
}

std::vector<double> phi_gradient(std::span<const double> h, const QuadratureOptions& opts) {
  const auto c = coefficients(h, opts);
  const double prod = product_of(h);
  std::vector<double> g(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) g[i] = -(h[i] / prod) * c.a[i];
  return g;
}

VerificationReport scaling_check(std::span<const double> h, double s) {
  if (!(s > 0.0)) throw PreconditionError("scaling_check: s must be positive");
  const auto base = coefficients(h);
  std::vector<double> scaled(h.begin(), h.end());
  for (auto& v : scaled) v *= s;
  const auto sc = coefficients(scaled);
  VerificationReport rep;
  rep.name = "scaling";
  rep.columns = {"index", "a(s h)", "a(h)/s", "relative_error"};
  double worst = 0.0;
  for (std::size_t i = 0; i < sc.a.size(); ++i) {
    const double expect = base.a[i] / s;
    const double rel = std::abs(sc.a[i] - expect) / std::abs(expect);
    worst = std::max(worst, rel);
    rep.rows.push_back({static_cast<double>(i + 1), sc.a[i], expect, rel});
  }
  const double rel0 = std::abs(sc.a0 - s * base.a0) / (s * base.a0);
  rep.rows.push_back({0.0, sc.a0, s * base.a0, rel0});
  rep.set("max_relative_error_a", worst);
  rep.set("relative_error_a0", rel0);
  rep.require(worst <= 1e-10, "a_i(s h) != a_i(h)/s");
  rep.require(rel0 <= 1e-10, "a0(s h) != s a0(h)");
  return rep;
}

VerificationReport phi_gradient_check(std::span<const double> h, double step) {
  const auto closed = phi_gradient(h);
  QuadratureOptions tight;
  tight.rel_tol = 1e-14;
  tight.abs_tol = 1e-300;
  VerificationReport rep;
  rep.name = "phi_gradient";
  rep.columns = {"index", "fd", "closed_form", "abs_error"};
  double worst = 0.0;
  std::vector<double> hp(h.begin(), h.end());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double d = step * h[i];
    auto at = [&](double hi) {
      hp[i] = hi;
      const double v = phi_potential(hp, tight);
      hp[i] = h[i];
      return v;
    };
    // Fourth-order central difference.
    const double fd = (8.0 * (at(h[i] + d) - at(h[i] - d)) - (at(h[i] + 2 * d) - at(h[i] - 2 * d))) / (12.0 * d);
    const double err = std::abs(fd - closed[i]);
    worst = std::max(worst, err);
    rep.rows.push_back({static_cast<double>(i + 1), fd, closed[i], err});
  }
  rep.set("max_abs_error", worst);
  rep.require(worst <= 1e-8, "dPhi/dh_i differs from -(h_i/prod h) a_i");
  return rep;
}

InversionResult invert_from(std::span<const double> target, std::span<const double> start, double tol,
                            int max_iter) {
  const std::size_t m = target.size();
  if (m < 2) throw PreconditionError("invert: need at least two target coefficients");
  for (double t : target) {
    if (!std::isfinite(t) || !(t > 0.0)) throw PreconditionError("invert: targets must be strictly positive");
  }
  if (start.size() != m) throw PreconditionError("invert: start has wrong size");
  require_positive_axes(start, 2);

  Eigen::VectorXd v(m), logt(m);
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = std::log(start[i]);
    logt[i] = std::log(target[i]);
  }
  auto residual = [&](const Eigen::VectorXd& lv) {
    std::vector<double> h(m);
    for (std::size_t i = 0; i < m; ++i) h[i] = std::exp(lv[i]);
    const auto a = direction_coefficients(h);
    Eigen::VectorXd r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = std::log(a[i]) - logt[i];
    return r;
  };
  auto rel_mismatch = [](const Eigen::VectorXd& r) {
    double w = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) w = std::max(w, std::abs(std::expm1(r[i])));
    return w;
  };

  InversionResult res;
  Eigen::VectorXd r = residual(v);
  int iter = 0;
  for (; iter < max_iter && rel_mismatch(r) > tol; ++iter) {
    // Exact scale step: a(e^c h) = e^{-c} a(h).
    const double c = r.mean();
    v.array() += c;
    r.array() -= c;
    if (rel_mismatch(r) <= tol) break;

    Eigen::MatrixXd J(m, m);
    const double d = 1e-6;
    for (std::size_t j = 0; j < m; ++j) {
      Eigen::VectorXd vp = v, vm = v;
      vp[j] += d;
      vm[j] -= d;
      J.col(j) = (residual(vp) - residual(vm)) / (2.0 * d);
    }
    const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
    double lambda = 1.0;
    Eigen::VectorXd trial_r;
    Eigen::VectorXd trial_v;
    for (;;) {
      trial_v = v + lambda * step;
      trial_r = residual(trial_v);
      if (trial_r.norm() < r.norm() || lambda <= std::ldexp(1.0, -20)) break;
      lambda *= 0.5;
    }
    if (!(trial_r.norm() < r.norm())) break;
    v = trial_v;
    r = trial_r;
  }
  res.iterations = iter;
  res.h0.resize(m);
  for (std::size_t i = 0; i < m; ++i) res.h0[i] = std::exp(v[i]);
  res.h = res.h0;
  res.residual = rel_mismatch(r);
  res.converged = res.residual <= tol;
  if (!res.converged) throw InversionFailure("invert: Newton iteration did not converge", res);
  return res;
}

InversionResult invert(std::span<const double> target, std::optional<double> C, double tol, int max_iter) {
  const std::size_t m = target.size();
  for (double t : target) {
    if (!std::isfinite(t) || !(t > 0.0)) throw PreconditionError("invert: targets must be strictly positive");
  }
  if (C && !(*C > 0.0)) throw PreconditionError("invert: C must be positive");
  const double alpha = equal_axes_coefficient(m + 1);
  std::vector<double> start(m);
  for (std::size_t i = 0; i < m; ++i) start[i] = alpha / target[i];
  InversionResult res = invert_from(target, start, tol, max_iter);
  if (C) {
    const double a0 = coefficients(res.h0, inversion_quadrature()).a0;
    res.scale = std::sqrt(*C / a0);
    for (auto& v : res.h) v *= res.scale;
  }
  return res;
}

double far_field_monopole(std::span<const double> h) {
  const double n = static_cast<double>(h.size() + 1);
  return -product_of(h) / (n * (n - 2.0));
}

FarFieldFit far_field_fit(const HarmonicFamily& fam, double radius, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = fam.dim();
  if (samples < 2 * n) throw PreconditionError("far_field_fit: too few samples");
  SeededSampler rng(seed);
  Eigen::MatrixXd A(samples, n);
  Eigen::VectorXd b(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    auto dir = rng.unit_vector(n);
    CartesianPoint x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = radius * dir[i];
    b[s] = fam.eval(x, Sheet::plus);
    // c0 - sum_{j<n} c_j (x_j^2 - x_n^2), with c_n = -sum_{j<n} c_j.
    A(s, 0) = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) A(s, j + 1) = -(x[j] * x[j] - x[n - 1] * x[n - 1]);
  }
  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  FarFieldFit fit;
  fit.c0 = sol[0];
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    fit.c.push_back(sol[j + 1]);
    sum += sol[j + 1];
  }
  fit.c.push_back(-sum);
  fit.rms_residual = std::sqrt((A * sol - b).squaredNorm() / static_cast<double>(samples));
  return fit;
}

VerificationReport far_field_decay(const HarmonicFamily& fam, std::span<const double> direction,
                                   std::span<const double> radii) {
  const std::size_t n = fam.dim();
  if (direction.size() != n) throw PreconditionError("far_field_decay: direction has wrong size");
  const double norm = std::sqrt(std::inner_product(direction.begin(), direction.end(), direction.begin(), 0.0));
  QuadratureOptions tight;
  tight.rel_tol = 1e-14;
  tight.abs_tol = 1e-300;
  const auto asym = coefficients(fam.axes().values(), tight);
  VerificationReport rep;
  rep.name = "far_field_decay";
  rep.columns = {"radius", "value", "asymptote", "abs_difference"};
  std::vector<double> rs, errs;
  for (double r : radii) {
    CartesianPoint x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = r * direction[i] / norm;
    const double f = fam.eval(x, Sheet::plus);
    double q = asym.a0;
    for (std::size_t i = 0; i < n; ++i) q -= asym.a[i] * x[i] * x[i];
    rs.push_back(r);
    errs.push_back(std::abs(f - q));
    rep.rows.push_back({r, f, q, errs.back()});
  }
  const double slope = loglog_slope(rs, errs);
  rep.set("decay_exponent", -slope);
  rep.set("expected_exponent", static_cast<double>(n - 2));
  rep.require(std::abs(-slope - static_cast<double>(n - 2)) <= 0.2, "far-field decay exponent off by more than 0.2");
  return rep;
}

}  // namespace z2h
