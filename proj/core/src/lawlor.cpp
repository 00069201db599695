#include "z2h/lawlor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "z2h/asymptotics.hpp"
#include "z2h/errors.hpp"
#include "z2h/zharmonic.hpp"

namespace z2h {

namespace {

double sign_of(double s) { return s < 0.0 ? -1.0 : 1.0; }

// Telescoped (prod (1 + a_k x) - 1) / x = sum_k a_k prod_{j<k} (1 + a_j x).
double telescoped(std::span<const double> a, double x) {
  double acc = 0.0, prefix = 1.0;
  for (double ak : a) {
    acc += ak * prefix;
    prefix *= 1.0 + ak * x;
  }
  return acc;
}

std::vector<double> squares_of(std::span<const double> c) {
  std::vector<double> a(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) a[i] = c[i] * c[i];
  return a;
}

}  // namespace

NeckParams::NeckParams(std::vector<double> c, QuadratureOptions opts) : c_(std::move(c)), opts_(opts) {
  if (c_.size() < 2) throw PreconditionError("NeckParams: need at least two parameters");
  for (double v : c_) {
    if (!std::isfinite(v) || !(v > 0.0)) throw PreconditionError("NeckParams: parameters must be positive");
  }
  phi_.resize(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    phi_[i] = 2.0 * integrate_semi_infinite([&](double y) { return psi_derivative(i, y); }, opts_).value;
  }
}

double NeckParams::P(double x) const {
  const auto a = squares_of(c_);
  return telescoped(a, x);
}

double NeckParams::psi_derivative(std::size_t i, double y) const {
  const double ci2 = c_[i] * c_[i];
  return ci2 / ((1.0 + ci2 * y * y) * std::sqrt(P(y * y)));
}

std::vector<double> NeckParams::knots(double upto) const {
  const double cmax = *std::max_element(c_.begin(), c_.end());
  std::vector<double> k{0.0};
  for (double m : {1.0, 4.0, 16.0}) {
    if (m / cmax < upto) k.push_back(m / cmax);
  }
  k.push_back(upto);
  return k;
}

double NeckParams::psi(std::size_t i, double s) const {
  if (i >= c_.size()) throw PreconditionError("psi: index out of range");
  if (s == 0.0) return 0.0;
  const auto k = knots(std::abs(s));
  const double v = integrate_piecewise([&](double y) { return psi_derivative(i, y); }, k, opts_).value;
  return sign_of(s) * v;
}

NeckPoint NeckPoint::involution() const {
  NeckPoint out = *this;
  out.w.back() = -out.w.back();
  out.s = -s;
  return out;
}

NeckPoint make_neck_point(std::vector<double> w, double s) {
  const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
  if (!(norm > 0.0) || !std::isfinite(s)) throw PreconditionError("NeckPoint: w must be nonzero and s finite");
  for (auto& v : w) v /= norm;
  return {std::move(w), s};
}

BaseProfile base_profile(const NeckParams& c, double s) {
  const std::size_t n = c.dim();
  BaseProfile bp;
  bp.m.resize(n);
  bp.dm.resize(n);
  bp.im.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = std::sqrt(1.0 / (c.c()[k] * c.c()[k]) + s * s);
    const double ps = c.psi(k, s);
    const double dps = c.psi_derivative(k, s);
    const double sn = std::sin(ps), cs = std::cos(ps);
    if (k + 1 < n) {
      bp.m[k] = cs * r;
      bp.im[k] = sn * r;
      bp.dm[k] = -sn * dps * r + cs * s / r;
    } else {
      bp.m[k] = sn * r;
      bp.im[k] = cs * r;
      bp.dm[k] = cs * dps * r + sn * s / r;
    }
  }
  return bp;
}

NeckProjection project(const NeckParams& c, const NeckPoint& pt) {
  const std::size_t n = c.dim();
  if (pt.w.size() != n) throw PreconditionError("project: w has wrong dimension");
  const auto bp = base_profile(c, pt.s);
  const double t = c.fiber_scale();
  NeckProjection out;
  out.x.resize(n);
  out.y.resize(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out.x[k] = bp.m[k] * pt.w[k];
    out.y[k] = t * bp.im[k] * pt.w[k];
  }
  out.x[n - 1] = -bp.m[n - 1] * pt.w[n - 1];
  out.y[n - 1] = t * bp.im[n - 1] * pt.w[n - 1];
  return out;
}

double liouville_primitive(const NeckParams& c, const NeckPoint& pt) {
  const std::size_t n = c.dim();
  if (pt.w.size() != n) throw PreconditionError("potential: w has wrong dimension");
  if (pt.s == 0.0) return 0.0;
  auto integrand = [&](double u) {
    const auto bp = base_profile(c, u);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc += bp.im[i] * pt.w[i] * pt.w[i] * bp.dm[i];
    acc -= bp.im[n - 1] * pt.w[n - 1] * pt.w[n - 1] * bp.dm[n - 1];
    return acc;
  };
  const double cmax = *std::max_element(c.c().begin(), c.c().end());
  const double a = std::abs(pt.s);
  std::vector<double> knots{0.0};
  for (double m : {1.0, 3.0, 10.0}) {
    if (m / cmax < a) knots.push_back(m / cmax);
  }
  knots.push_back(a);
  // The integrand is even in u, so the primitive is odd in s.
  const double v = integrate_piecewise(integrand, knots, c.quadrature()).value;
  return sign_of(pt.s) * v;
}

double potential(const NeckParams& c, const NeckPoint& pt) { return c.fiber_scale() * liouville_primitive(c, pt); }

Sheet neck_sheet(const NeckPoint& pt) {
  if (pt.s < 0.0) return Sheet::plus;
  if (pt.s > 0.0) return Sheet::minus;
  return pt.w.back() > 0.0 ? Sheet::plus : Sheet::minus;
}

LimitProfiles limit_profiles(std::span<const double> c_base, double s, const QuadratureOptions& opts) {
  const std::size_t m = c_base.size();
  if (m < 1) throw PreconditionError("limit_profiles: need at least one base parameter");
  const auto a = squares_of(c_base);
  auto C = [&](double x) {
    double p = 1.0;
    for (double ak : a) p *= 1.0 + ak * x;
    return p;
  };
  LimitProfiles lp;
  lp.beta.resize(m + 1, 0.0);
  if (s == 0.0) return lp;
  const double len = std::abs(s);
  for (std::size_t i = 0; i < m; ++i) {
    lp.beta[i] = sign_of(s) *
                 integrate_finite([&](double u) { return a[i] / ((1.0 + a[i] * u * u) * std::sqrt(C(u * u))); }, 0.0,
                                  len, opts)
                     .value;
  }
  lp.beta[m] = -sign_of(s) * integrate_finite(
                                 [&](double u) {
                                   const double cc = C(u * u);
                                   return telescoped(a, u * u) / (cc + std::sqrt(cc));
                                 },
                                 0.0, len, opts)
                                 .value;
  return lp;
}

std::vector<double> limit_fiber(std::span<const double> c_base, const NeckPoint& pt) {
  const std::size_t n = c_base.size() + 1;
  if (pt.w.size() != n) throw PreconditionError("limit_fiber: w has wrong dimension");
  const auto lp = limit_profiles(c_base, pt.s);
  std::vector<double> y(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    y[i] = pt.w[i] * lp.beta[i] * std::sqrt(1.0 / (c_base[i] * c_base[i]) + pt.s * pt.s);
  }
  y[n - 1] = pt.w[n - 1] * (1.0 - pt.s * lp.beta[n - 1]);
  return y;
}

std::vector<double> small_angle_parameters(std::span<const double> h, double t) {
  std::vector<double> c;
  for (double v : h) c.push_back(1.0 / v);
  c.push_back(t);
  return c;
}

VerificationReport angle_match(const HalfAxes& h, std::span<const double> t_list) {
  const std::size_t n = h.dim();
  if (t_list.size() < 2) throw PreconditionError("angle_match: need at least two values of t");
  QuadratureOptions tight;
  tight.rel_tol = 1e-14;
  tight.abs_tol = 1e-300;
  const auto asym = coefficients(h.values(), tight);
  VerificationReport rep;
  rep.name = "angle_match";
  rep.columns = {"t"};
  for (std::size_t i = 0; i < n; ++i) rep.columns.push_back("err_" + std::to_string(i + 1));
  rep.columns.insert(rep.columns.end(), {"max_err", "sum_phi_minus_pi", "sum_phi_tilde_minus_pi", "t_phi_1_over_4a_1"});
  std::vector<std::vector<double>> errs(n);
  std::vector<double> excess, max_err;
  for (double t : t_list) {
    const NeckParams neck(small_angle_parameters(h.values(), t), tight);
    const auto& phi = neck.angles();
    std::vector<double> row{t};
    double sum_phi = 0.0, sum_tilde = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tilde = (i + 1 < n ? 0.0 : std::numbers::pi) + 2.0 * std::atan(2.0 * asym.a[i] / t);
      const double e = std::abs(phi[i] - tilde);
      errs[i].push_back(e);
      worst = std::max(worst, e);
      sum_phi += phi[i];
      sum_tilde += tilde;
      row.push_back(e);
    }
    excess.push_back(sum_tilde - std::numbers::pi);
    max_err.push_back(worst);
    row.insert(row.end(), {worst, sum_phi - std::numbers::pi, excess.back(), t * phi[0] / (4.0 * asym.a[0])});
    rep.rows.push_back(row);
  }
  std::vector<double> ts(t_list.begin(), t_list.end());
  double min_exp = INFINITY, max_exp = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    const double ex = -loglog_slope(ts, errs[i]);
    rep.set("exponent_" + std::to_string(i + 1), ex);
    min_exp = std::min(min_exp, ex);
    max_exp = std::max(max_exp, ex);
  }
  rep.set("exponent_max_error", -loglog_slope(ts, max_err));
  rep.set("min_exponent", min_exp);
  rep.set("max_exponent", max_exp);
  const double min_excess = *std::min_element(excess.begin(), excess.end());
  rep.set("min_sum_excess", min_excess);
  bool positive = min_excess > 0.0;
  rep.set("sum_excess_exponent", positive ? -loglog_slope(ts, excess) : NAN);
  rep.require(positive, "sum of matched angles does not exceed pi");
  rep.require(min_exp >= 2.5 && max_exp <= 3.5, "angle mismatch does not decay like t^-3");
  return rep;
}

std::vector<NeckPoint> sample_neck_points(std::size_t n, std::size_t count, std::uint64_t seed, double min_radius,
                                          double s_max) {
  SeededSampler rng(seed);
  std::vector<NeckPoint> out;
  while (out.size() < count) {
    auto w = rng.unit_vector(n);
    const double s = rng.uniform(-s_max, s_max);
    if (s * s + w.back() * w.back() < min_radius * min_radius) continue;
    out.push_back({std::move(w), s});
  }
  return out;
}

VerificationReport convergence_harness(const HalfAxes& h, std::span<const double> t_list,
                                       const std::vector<NeckPoint>& samples, double branch_tol) {
  const HarmonicFamily fam(h);
  VerificationReport rep;
  rep.name = "lawlor_convergence";
  rep.columns = {"sample", "t", "neck_value", "f_h", "error"};
  double min_ratio = INFINITY;
  std::size_t used = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& pt = samples[k];
    std::vector<double> errors;
    bool skipped = false;
    for (double t : t_list) {
      const NeckParams neck(small_angle_parameters(h.values(), t));
      const auto pr = project(neck, pt);
      double fh = 0.0;
      try {
        fh = fam.eval(from_cartesian(h, pr.x, neck_sheet(pt), branch_tol));
      } catch (const BranchProximityError&) {
        rep.notes.push_back("sample " + std::to_string(k) + " skipped: projection within branch tolerance");
        skipped = true;
        break;
      }
      const double fn = potential(neck, pt);
      errors.push_back(std::abs(fn - fh));
      rep.rows.push_back({static_cast<double>(k), t, fn, fh, errors.back()});
    }
    if (skipped) continue;
    ++used;
    for (std::size_t j = 1; j < errors.size(); ++j) {
      const double ratio = errors[j - 1] / errors[j];
      min_ratio = std::min(min_ratio, ratio);
    }
  }
  rep.set("samples_used", static_cast<double>(used));
  rep.set("min_ratio", min_ratio);
  rep.require(used > 0, "no usable samples");
  rep.require(min_ratio >= 1.8, "errors do not shrink by 1.8 per doubling of t");
  return rep;
}

VerificationReport fiber_nonvanishing(std::span<const double> c_base, const NeckGrid& grid) {
  const std::size_t n = c_base.size() + 1;
  SeededSampler rng(grid.seed);
  std::vector<std::vector<double>> dirs;
  for (std::size_t k = 0; k < grid.directions; ++k) dirs.push_back(rng.unit_vector(n));
  // Directions hugging w_n = 0 probe the approach to the excluded set.
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<double> w(n, 0.0);
    w[k % (n - 1)] = 1.0;
    w[n - 1] = std::ldexp(1.0, -static_cast<int>(2 * k + 2));
    dirs.push_back(make_neck_point(w, 0.0).w);
  }
  VerificationReport rep;
  rep.name = "fiber_nonvanishing";
  rep.columns = {"s", "w_n", "norm_limit_fiber"};
  double min_out = INFINITY, min_in = INFINITY;
  for (double s : grid.s_values) {
    for (const auto& w : dirs) {
      const NeckPoint pt{w, s};
      const auto y = limit_fiber(c_base, pt);
      const double norm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
      const double rad = std::hypot(s, w.back());
      if (rad >= grid.exclusion) {
        min_out = std::min(min_out, norm);
      } else {
        min_in = std::min(min_in, norm);
      }
      rep.rows.push_back({s, w.back(), norm});
    }
  }
  rep.set("min_outside_exclusion", min_out);
  rep.set("min_inside_exclusion", min_in);
  rep.require(min_out > 0.0, "limit fiber vanishes away from {s = 0, w_n = 0}");
  return rep;
}

LagrangianCheck special_lagrangian_residual(const NeckParams& c, const NeckPoint& pt, double step) {
  const std::size_t n = c.dim();
  // Orthonormal tangent basis of the sphere at w, via Householder QR.
  Eigen::VectorXd w0 = Eigen::Map<const Eigen::VectorXd>(pt.w.data(), static_cast<Eigen::Index>(n));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(w0);
  const Eigen::MatrixXd Qm = qr.householderQ();
  auto coords = [&](const Eigen::VectorXd& param) {
    Eigen::VectorXd w = w0;
    for (std::size_t k = 1; k < n; ++k) w += param[static_cast<Eigen::Index>(k - 1)] * Qm.col(static_cast<Eigen::Index>(k));
    w.normalize();
    NeckPoint p{std::vector<double>(w.data(), w.data() + n), pt.s + param[static_cast<Eigen::Index>(n - 1)]};
    const auto pr = project(c, p);
    Eigen::VectorXd X(n), Y(n);
    for (std::size_t i = 0; i < n; ++i) {
      X[static_cast<Eigen::Index>(i)] = pr.x[i];
      Y[static_cast<Eigen::Index>(i)] = pr.y[i] / c.fiber_scale();
    }
    return std::make_pair(X, Y);
  };
  Eigen::MatrixXd JX(n, n), JY(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    e[static_cast<Eigen::Index>(j)] = step;
    const auto plus = coords(e);
    const auto minus = coords(-e);
    JX.col(static_cast<Eigen::Index>(j)) = (plus.first - minus.first) / (2.0 * step);
    JY.col(static_cast<Eigen::Index>(j)) = (plus.second - minus.second) / (2.0 * step);
  }
  const Eigen::MatrixXd H = JY * JX.inverse();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  M += std::complex<double>(0.0, 1.0) * H.cast<std::complex<double>>();
  const std::complex<double> det = M.determinant();
  LagrangianCheck out;
  out.im_det = det.imag();
  out.re_det = det.real();
  out.asymmetry = (H - H.transpose()).cwiseAbs().maxCoeff() / std::max(1.0, H.cwiseAbs().maxCoeff());
  return out;
}

NeckPoint invert_projection(const NeckParams& c, std::span<const double> x, Sheet sheet, double tol, int max_iter) {
  const std::size_t n = c.dim();
  if (x.size() != n) throw PreconditionError("invert_projection: x has wrong dimension");
  // Seed from the limit profile Pr_X ~ (w_i sqrt(c_i^-2 + s^2), -w_n s).
  std::vector<double> inv2(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) inv2[i] = 1.0 / (c.c()[i] * c.c()[i]);
  auto g = [&](double m) {
    double acc = -1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc += x[i] * x[i] / (inv2[i] + m);
    return m > 0.0 ? acc + x[n - 1] * x[n - 1] / m : acc;
  };
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  double m = 0.0;
  if (x[n - 1] != 0.0 || g(0.0) > 0.0) m = find_root_bracketed(g, 1e-300, r2 + 1.0, 1e-15);
  const double s0 = (sheet == Sheet::plus ? -1.0 : 1.0) * std::sqrt(m);
  std::vector<double> w(n);
  double wsum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    w[i] = x[i] / std::sqrt(inv2[i] + m);
    wsum += w[i] * w[i];
  }
  w[n - 1] = s0 != 0.0 ? -x[n - 1] / s0 : (sheet == Sheet::plus ? 1.0 : -1.0) * std::sqrt(std::max(0.0, 1.0 - wsum));

  // Newton on (Pr_X(v/|v|, s) - x, |v|^2 - 1) with a central-difference Jacobian.
  Eigen::VectorXd z(static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i < n; ++i) z[static_cast<Eigen::Index>(i)] = w[i];
  z[static_cast<Eigen::Index>(n)] = s0;
  auto F = [&](const Eigen::VectorXd& v) {
    std::vector<double> ww(v.data(), v.data() + n);
    double norm2 = 0.0;
    for (double q : ww) norm2 += q * q;
    const auto pr = project(c, make_neck_point(ww, v[static_cast<Eigen::Index>(n)]));
    Eigen::VectorXd r(static_cast<Eigen::Index>(n + 1));
    for (std::size_t i = 0; i < n; ++i) r[static_cast<Eigen::Index>(i)] = pr.x[i] - x[i];
    r[static_cast<Eigen::Index>(n)] = norm2 - 1.0;
    return r;
  };
  const double scale = std::max(1.0, std::sqrt(r2));
  Eigen::VectorXd r = F(z);
  for (int it = 0; it < max_iter && r.cwiseAbs().maxCoeff() > tol * scale; ++it) {
    Eigen::MatrixXd J(n + 1, n + 1);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n + 1); ++j) {
      Eigen::VectorXd zp = z, zm = z;
      zp[j] += 1e-7;
      zm[j] -= 1e-7;
      J.col(j) = (F(zp) - F(zm)) / 2e-7;
    }
    const Eigen::VectorXd dz = J.colPivHouseholderQr().solve(-r);
    double lambda = 1.0;
    Eigen::VectorXd zt, rt;
    do {
      zt = z + lambda * dz;
      rt = F(zt);
      lambda *= 0.5;
    } while (rt.norm() >= r.norm() && lambda > std::ldexp(1.0, -20));
    if (!(rt.norm() < r.norm())) break;
    z = zt;
    r = rt;
  }
  if (r.cwiseAbs().maxCoeff() > 1e3 * tol * scale) {
    throw NumericFailure("invert_projection: Newton iteration did not converge", r.norm());
  }
  std::vector<double> ww(z.data(), z.data() + n);
  return make_neck_point(ww, z[static_cast<Eigen::Index>(n)]);
}

}  // namespace z2h
