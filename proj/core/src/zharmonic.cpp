#include "z2h/zharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "z2h/errors.hpp"
#include "z2h/polynomial.hpp"

namespace z2h {

namespace {

double inv_sqrt_S(const HalfAxes& h, double u) { return 1.0 / std::sqrt(h.S(u * u)); }

}  // namespace

HarmonicFamily::HarmonicFamily(HalfAxes axes, FamilyOptions options)
    : axes_(std::move(axes)), options_(options), roots_(focal_roots(axes_)) {
  const std::size_t m = roots_.p.size();
  denom_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double d = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) d *= roots_.p[i] - roots_.p[j];
    }
    denom_[i] = d;
  }
  norm_ = axes_.product() / static_cast<double>(axes_.dim());
  sign_ = (axes_.dim() - 2) % 2 == 0 ? 1 : -1;

  if (options_.prefix_cache) {
    const double lo = 1e-3 * axes_[axes_.count() - 1];
    const double hi = 1e3 * axes_[0];
    const std::size_t nodes = std::max<std::size_t>(options_.cache_nodes, 2);
    grid_.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      grid_[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(nodes - 1));
    }
    // Cumulative sums piece by piece; the cache is read-only afterwards.
    prefix_.assign(m + 1, std::vector<double>(nodes, 0.0));
    for (std::size_t slot = 0; slot <= m; ++slot) {
      auto integrand = [&, slot](double u) {
        const double base = inv_sqrt_S(axes_, u);
        if (slot == 0) return base;
        const double w = u * u + roots_.p[slot - 1];
        return base / (w * w);
      };
      double acc = 0.0, left = 0.0;
      for (std::size_t k = 0; k < nodes; ++k) {
        acc += integrate_finite(integrand, left, grid_[k], options_.quadrature).value;
        prefix_[slot][k] = acc;
        left = grid_[k];
      }
    }
  }
}

Evaluation HarmonicFamily::integrate_from_zero(std::size_t slot, double mu) const {
  if (mu == 0.0) return {0.0, 0.0};
  const double a = std::abs(mu);
  auto integrand = [&](double u) {
    const double base = inv_sqrt_S(axes_, u);
    if (slot == 0) return base;
    const double w = u * u + roots_.p[slot - 1];
    return base / (w * w);
  };
  double start = 0.0, offset = 0.0;
  if (!grid_.empty() && a >= grid_.front()) {
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), a);
    const std::size_t k = static_cast<std::size_t>(it - grid_.begin()) - 1;
    start = grid_[k];
    offset = prefix_[slot][k];
  }
  const auto r = integrate_finite(integrand, start, a, options_.quadrature);
  const double v = offset + r.value;
  return {mu < 0.0 ? -v : v, r.error_estimate};
}

Evaluation HarmonicFamily::f0(double mu) const { return integrate_from_zero(0, mu); }

Evaluation HarmonicFamily::inner_integral(std::size_t i, double mu) const {
  if (i >= roots_.p.size()) throw PreconditionError("inner_integral: index out of range");
  return integrate_from_zero(i + 1, mu);
}

Evaluation HarmonicFamily::f2(std::size_t i, const SheetPoint& sp) const {
  if (sp.mu.size() != dim()) throw PreconditionError("f2: dimension mismatch");
  const double p = roots_.p.at(i);
  const double mun = sp.mu_n();
  double product = 1.0;
  for (std::size_t j = 0; j + 1 < dim(); ++j) product *= sp.mu[j] * sp.mu[j] - p;
  const auto inner = inner_integral(i, mun);
  const double factor = (mun * mun + p) * product;
  return {factor * inner.value, std::abs(factor) * inner.quadrature_error};
}

Evaluation HarmonicFamily::evaluate(const SheetPoint& sp) const {
  if (sp.mu.size() != dim()) throw PreconditionError("eval: dimension mismatch");
  const auto base = f0(sp.mu_n());
  double value = base.value;
  double err = base.quadrature_error;
  double sum = 0.0;
  for (std::size_t i = 0; i < roots_.p.size(); ++i) {
    const auto t = f2(i, sp);
    sum += t.value / denom_[i];
    err += t.quadrature_error / std::abs(denom_[i]);
  }
  value += sign_ * sum;
  return {norm_ * value, norm_ * err};
}

double HarmonicFamily::eval(std::span<const double> x, Sheet sheet) const {
  return eval(from_cartesian(axes_, x, sheet));
}

double f0(const HalfAxes& h, double mu, const QuadratureOptions& opts) {
  if (mu == 0.0) return 0.0;
  const auto r = integrate_finite([&](double u) { return inv_sqrt_S(h, u); }, 0.0, std::abs(mu), opts);
  return mu < 0.0 ? -r.value : r.value;
}

double f0_limit(const HalfAxes& h, const QuadratureOptions& opts) {
  return integrate_semi_infinite([&](double u) { return inv_sqrt_S(h, u); }, opts).value;
}

double ellipsoidal_harmonic(const HarmonicFamily& fam, std::size_t i, const SheetPoint& sp) {
  const double p = fam.roots().p.at(i);
  double v = sp.mu_n() * sp.mu_n() + p;
  for (std::size_t j = 0; j + 1 < sp.mu.size(); ++j) v *= sp.mu[j] * sp.mu[j] - p;
  return v;
}

std::vector<double> focal_M_coefficients(const HalfAxes& h) {
  // S(-y) = prod (h_j^2 - y); 2S(-y) - 2yS'(-y) = 2 d/dy[...] rearranged coefficientwise.
  std::vector<double> roots(h.squares().begin(), h.squares().end());
  auto s_neg = poly_from_roots(roots);  // prod (y - h_j^2) = (-1)^{n-1} S(-y)
  const double flip = (roots.size() % 2 == 0) ? 1.0 : -1.0;
  for (auto& c : s_neg) c *= flip;      // now S(-y)
  // y S'(-y): d/dy S(-y) = -S'(-y), so -y d/dy[S(-y)] = y S'(-y).
  const auto ds = poly_derivative(s_neg);
  std::vector<double> m(s_neg.size(), 0.0);
  for (std::size_t k = 0; k < s_neg.size(); ++k) {
    const double y_sprime = k >= 1 ? -ds[k - 1] : 0.0;  // coefficient of y^k in y S'(-y)
    m[k] = 2.0 * s_neg[k] - 2.0 * y_sprime;
  }
  return m;
}

QRecurrence q_recurrence(const HalfAxes& h, double p) {
  const auto M = focal_M_coefficients(h);
  const std::size_t top = M.size() - 1;  // n-1
  QRecurrence r;
  r.q.assign(top, 0.0);
  r.q[top - 1] = -M[top];
  for (std::size_t j = top - 1; j >= 1; --j) r.q[j - 1] = p * r.q[j] - M[j];
  r.closure = M[0] - p * r.q[0];
  double pj = 1.0;
  for (double mj : M) {
    r.scale = std::max(r.scale, std::abs(mj * pj));
    pj *= p;
  }
  return r;
}

double eval_local(const HarmonicFamily& fam, std::span<const double> x, const SheetPoint& reference) {
  return fam.eval(from_cartesian_near(fam.axes(), x, reference.mu_nm1(), reference.mu_n()));
}

std::vector<double> gradient(const HarmonicFamily& fam, std::span<const double> x, Sheet sheet, double delta) {
  const SheetPoint ref = from_cartesian(fam.axes(), x, sheet);
  if (delta <= 0.0) {
    double r = 0.0;
    for (double v : x) r += v * v;
    delta = 1e-4 * std::max(fam.axes()[0], std::sqrt(r));
  }
  return fd_gradient([&](std::span<const double> y) { return eval_local(fam, y, ref); }, x, delta);
}

double laplacian(const HarmonicFamily& fam, std::span<const double> x, Sheet sheet, double delta) {
  const SheetPoint ref = from_cartesian(fam.axes(), x, sheet);
  return fd_laplacian([&](std::span<const double> y) { return eval_local(fam, y, ref); }, x, delta);
}

BranchExpansion branch_coefficient(const HarmonicFamily& fam, const SheetPoint& sp) {
  if (sp.mu.size() != fam.dim()) throw PreconditionError("branch_coefficient: dimension mismatch");
  if (!sp.on_branch()) throw PreconditionError("branch_coefficient: point is not on the branch locus");
  double num = 1.0;
  for (std::size_t j = 0; j + 2 < sp.mu.size(); ++j) num *= std::sqrt(sp.mu[j]);
  double den = 1.0;
  for (double v : fam.axes().values()) den *= std::sqrt(v);
  BranchExpansion be;
  be.B = -(2.0 * std::numbers::sqrt2 / 3.0) * num / den;
  be.zhalf_frame = {num / (std::numbers::sqrt2 * den), 0.0};
  return be;
}

std::vector<PathSample> continue_along_path(const HarmonicFamily& fam, const std::vector<CartesianPoint>& path,
                                            Sheet start) {
  std::vector<PathSample> out;
  if (path.empty()) return out;
  out.reserve(path.size());
  const double max_step = 0.2 * fam.axes()[fam.axes().count() - 1];
  SheetPoint current = from_cartesian(fam.axes(), path[0], start);
  out.push_back({fam.eval(current), current.sheet(), current});
  for (std::size_t k = 1; k < path.size(); ++k) {
    const SheetPoint lift = from_cartesian(fam.axes(), path[k], Sheet::plus);
    const SheetPoint other = lift.involution();
    const double d1 = std::hypot(lift.mu_nm1() - current.mu_nm1(), lift.mu_n() - current.mu_n());
    const double d2 = std::hypot(other.mu_nm1() - current.mu_nm1(), other.mu_n() - current.mu_n());
    const double near = std::min(d1, d2), far = std::max(d1, d2);
    if (near >= max_step || far <= 2.0 * near) {
      throw ContinuationError("ambiguous continuation: preimage step too large", k);
    }
    current = d1 <= d2 ? lift : other;
    out.push_back({fam.eval(current), current.sheet(), current});
  }
  return out;
}

std::vector<CartesianPoint> planar_loop(std::span<const double> center, std::size_t axis, double radius,
                                        std::size_t steps) {
  const std::size_t n = center.size();
  if (axis + 1 >= n) throw PreconditionError("planar_loop: axis must be one of x_1..x_{n-1}");
  if (steps < 3 || !(radius > 0.0)) throw PreconditionError("planar_loop: need radius > 0 and >= 3 steps");
  std::vector<CartesianPoint> path(steps + 1, CartesianPoint(center.begin(), center.end()));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k % steps) / static_cast<double>(steps);
    path[k][axis] += radius * std::cos(theta);
    path[k][n - 1] += radius * std::sin(theta);
  }
  return path;
}

VerificationReport harmonicity_report(const HarmonicFamily& fam, const ShellRegion& region, std::size_t count,
                                      std::uint64_t seed, double delta) {
  if (!(region.r_min > 0.0 && region.r_max >= region.r_min)) throw PreconditionError("harmonicity_report: bad shell");
  if (!(delta > 0.0)) throw PreconditionError("harmonicity_report: delta must be positive");
  const std::size_t n = fam.dim();
  SeededSampler rng(seed);
  VerificationReport rep;
  rep.name = "harmonicity";
  for (std::size_t i = 0; i < n; ++i) rep.columns.push_back("x" + std::to_string(i + 1));
  rep.columns.insert(rep.columns.end(), {"abs_z", "residual", "residual_half", "residual_richardson"});

  double worst = 0.0, worst_half = 0.0, worst_rich = 0.0;
  std::size_t accepted = 0, attempts = 0;
  while (accepted < count) {
    if (++attempts > 1000 * std::max<std::size_t>(count, 1)) {
      throw NumericFailure("harmonicity_report: could not place points away from the branch locus");
    }
    auto dir = rng.unit_vector(n);
    const double r = rng.uniform(region.r_min, region.r_max);
    CartesianPoint x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = r * dir[i];
    SheetPoint sp;
    try {
      sp = from_cartesian(fam.axes(), x, Sheet::plus);
    } catch (const BranchProximityError&) {
      continue;
    }
    const double absz = std::abs(branch_coordinate_z(fam.axes(), sp).z);
    if (absz < region.branch_guard) continue;
    auto f = [&](std::span<const double> y) { return eval_local(fam, y, sp); };
    const double coarse = fd_laplacian(f, x, delta);
    const double fine = fd_laplacian(f, x, 0.5 * delta);
    const double rich = (4.0 * fine - coarse) / 3.0;
    worst = std::max(worst, std::abs(coarse));
    worst_half = std::max(worst_half, std::abs(fine));
    worst_rich = std::max(worst_rich, std::abs(rich));
    std::vector<double> row(x);
    row.insert(row.end(), {absz, coarse, fine, rich});
    rep.rows.push_back(std::move(row));
    ++accepted;
  }
  rep.set("points", static_cast<double>(accepted));
  rep.set("delta", delta);
  rep.set("max_residual", worst);
  rep.set("max_residual_half", worst_half);
  rep.set("max_residual_richardson", worst_rich);
  const double ratio = worst_half > 0.0 ? worst / worst_half : INFINITY;
  rep.set("ratio", ratio);
  rep.set("observed_order", std::log2(ratio));
  rep.require(ratio >= 3.5, "FD residual does not shrink like delta^2");
  return rep;
}

}  // namespace z2h
