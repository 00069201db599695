#include "z2h/ellipsoidal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "z2h/errors.hpp"
#include "z2h/numerics.hpp"
#include "z2h/polynomial.hpp"

namespace z2h {

std::string to_string(Sheet s) { return s == Sheet::plus ? "+" : "-"; }

Sheet parse_sheet(const std::string& text) {
  if (text == "+" || text == "plus") return Sheet::plus;
  if (text == "-" || text == "minus") return Sheet::minus;
  throw PreconditionError("unknown sheet '" + text + "' (expected plus or minus)");
}

HalfAxes::HalfAxes(std::vector<double> h) : h_(std::move(h)) {
  if (h_.size() < 2) throw PreconditionError("HalfAxes: need at least two semi-axes (n >= 3)");
  for (double v : h_) {
    if (!std::isfinite(v) || !(v > 0.0)) throw PreconditionError("HalfAxes: semi-axes must be positive and finite");
  }
  for (std::size_t i = 0; i + 1 < h_.size(); ++i) {
    if (!((h_[i] - h_[i + 1]) / h_[0] >= kMinRelativeGap)) {
      throw PreconditionError(
          "HalfAxes: semi-axes must be strictly decreasing with relative gap >= 1e-9");
    }
  }
  h2_.resize(h_.size());
  for (std::size_t i = 0; i < h_.size(); ++i) {
    h2_[i] = h_[i] * h_[i];
    product_ *= h_[i];
  }
  sigma_ = elementary_symmetric(h2_);
}

double HalfAxes::S(double y) const {
  double s = 1.0;
  for (double q : h2_) s *= (y + q);
  return s;
}

double HalfAxes::S_prime(double y) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < h2_.size(); ++i) {
    double term = 1.0;
    for (std::size_t j = 0; j < h2_.size(); ++j) {
      if (j != i) term *= (y + h2_[j]);
    }
    acc += term;
  }
  return acc;
}

void require_positive_axes(std::span<const double> h, std::size_t min_count) {
  if (h.size() < min_count) {
    throw PreconditionError("expected at least " + std::to_string(min_count) + " semi-axes");
  }
  for (double v : h) {
    if (!std::isfinite(v) || !(v > 0.0)) throw PreconditionError("semi-axes must be positive and finite");
  }
}

double focal_function(const HalfAxes& h, double y) { return h.S(-y) - y * h.S_prime(-y); }

FocalRoots focal_roots(const HalfAxes& h) {
  const auto& q = h.squares();
  const std::size_t m = q.size();
  auto g = [&](double y) { return focal_function(h, y); };
  FocalRoots roots;
  roots.p.reserve(m);
  try {
    for (std::size_t k = 0; k + 1 < m; ++k) roots.p.push_back(find_root_bracketed(g, q[k + 1], q[k], 0.0));
    roots.p.push_back(find_root_bracketed(g, 0.0, q[m - 1], 0.0));
  } catch (const PreconditionError& e) {
    throw NumericFailure(std::string("focal_roots: bracket failure: ") + e.what());
  }
  return roots;
}

std::vector<double> focal_identity_lhs(const HalfAxes& h) {
  std::vector<double> neg(h.squares().size());
  std::transform(h.squares().begin(), h.squares().end(), neg.begin(), [](double v) { return -v; });
  auto s = poly_from_roots(neg);
  s.insert(s.begin(), 0.0);  // y S(y)
  return poly_derivative(s);
}

std::vector<double> focal_identity_rhs(const HalfAxes& h, const FocalRoots& roots) {
  std::vector<double> neg(roots.p.size());
  std::transform(roots.p.begin(), roots.p.end(), neg.begin(), [](double v) { return -v; });
  auto r = poly_from_roots(neg);
  for (auto& c : r) c *= static_cast<double>(h.dim());
  return r;
}

Sheet SheetPoint::sheet() const {
  const double mn = mu_n();
  if (mn > 0.0) return Sheet::plus;
  if (mn < 0.0) return Sheet::minus;
  return mu_nm1() < 0.0 ? Sheet::minus : Sheet::plus;
}

SheetPoint SheetPoint::involution() const {
  SheetPoint out = *this;
  out.mu[mu.size() - 2] = -out.mu[mu.size() - 2];
  out.mu.back() = -out.mu.back();
  return out;
}

namespace {

void check_shape(const HalfAxes& h, std::size_t size, const char* what) {
  if (size != h.dim()) {
    throw PreconditionError(std::string(what) + ": expected " + std::to_string(h.dim()) +
                            " coordinates, got " + std::to_string(size));
  }
}

}  // namespace

CartesianPoint to_cartesian(const HalfAxes& h, const SheetPoint& sp) {
  const std::size_t n = h.dim();
  check_shape(h, sp.mu.size(), "to_cartesian");
  if (sp.signs.size() != n - 1) throw PreconditionError("to_cartesian: expected n-1 sign flags");
  const double slack = 1e-13 * h[0];
  for (std::size_t j = 0; j + 2 < n; ++j) {
    if (!(sp.mu[j] >= h[j + 1] - slack && sp.mu[j] <= h[j] + slack)) {
      throw PreconditionError("to_cartesian: mu_" + std::to_string(j + 1) + " violates interlacing");
    }
  }
  if (!(std::abs(sp.mu_nm1()) <= h[n - 2] + slack)) {
    throw PreconditionError("to_cartesian: |mu_{n-1}| exceeds h_{n-1}");
  }
  if (!std::isfinite(sp.mu_n())) throw PreconditionError("to_cartesian: mu_n not finite");

  const double mun2 = sp.mu_n() * sp.mu_n();
  CartesianPoint x(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double num = h.squares()[i] + mun2;
    double den = h.squares()[i];
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double m = std::abs(sp.mu[j]);
      num *= (h[i] - m) * (h[i] + m);
      if (j != i) den *= (h[i] - h[j]) * (h[i] + h[j]);
    }
    double xi2 = num / den;
    if (xi2 < 0.0) {
      if (xi2 < -1e-12 * h.squares()[0]) throw PreconditionError("to_cartesian: negative squared coordinate");
      xi2 = 0.0;
    }
    x[i] = (sp.signs[i] < 0 ? -1.0 : 1.0) * std::sqrt(xi2);
  }
  double xn = 1.0;
  for (std::size_t j = 0; j < n; ++j) xn *= sp.mu[j];
  for (std::size_t j = 0; j + 1 < n; ++j) xn /= h[j];
  x[n - 1] = xn;
  return x;
}

std::vector<double> confocal_polynomial(const HalfAxes& h, std::span<const double> x) {
  const std::size_t n = h.dim();
  check_shape(h, x.size(), "confocal_polynomial");
  const auto& sh = h.sigma();  // size n
  std::vector<std::vector<double>> excl(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) excl[i] = elementary_symmetric_excluding(h.squares(), i);
  const double xn2 = x[n - 1] * x[n - 1];

  std::vector<double> sigma_mu(n + 1, 0.0);
  sigma_mu[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double v = (k < sh.size() ? sh[k] : 0.0) - sh[k - 1] * xn2;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (k - 1 < excl[i].size()) v -= excl[i][k - 1] * x[i] * x[i];
    }
    sigma_mu[k] = v;
  }
  std::vector<double> coeffs(n + 1);
  for (std::size_t k = 0; k <= n; ++k) coeffs[n - k] = (k % 2 == 0 ? 1.0 : -1.0) * sigma_mu[k];
  return coeffs;
}

std::vector<double> confocal_roots(const HalfAxes& h, std::span<const double> x) {
  const std::size_t n = h.dim();
  const auto coeffs = confocal_polynomial(h, x);
  auto poly = [&](double y) { return poly_eval(coeffs, y); };
  // Expected endpoint signs of the monic polynomial; endpoints are never
  // sampled, so roots colliding with an endpoint are found by bisection.
  auto parity = [](std::size_t e) { return e % 2 == 0 ? 1 : -1; };
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double lower = -(r2 + h.squares()[0]);

  std::vector<double> roots(n);
  for (std::size_t k = 1; k + 1 < n; ++k) {  // bracket [h_{k+1}^2, h_k^2], 1-based k
    roots[k - 1] = bisect_with_signs(poly, h.squares()[k], h.squares()[k - 1], parity(k + 2), parity(k + 1));
  }
  roots[n - 2] = bisect_with_signs(poly, 0.0, h.squares()[n - 2], parity(n + 1), parity(n));
  roots[n - 1] = bisect_with_signs(poly, lower, 0.0, parity(n), parity(n + 1));
  return roots;
}

SheetPoint from_cartesian(const HalfAxes& h, std::span<const double> x, Sheet sheet, double branch_tol) {
  const std::size_t n = h.dim();
  check_shape(h, x.size(), "from_cartesian");
  for (double v : x) {
    if (!std::isfinite(v)) throw PreconditionError("from_cartesian: non-finite coordinate");
  }
  const auto y = confocal_roots(h, x);
  SheetPoint sp;
  sp.mu.resize(n);
  sp.signs.resize(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) sp.mu[j] = std::sqrt(std::max(0.0, y[j]));
  const double mun = std::sqrt(std::max(0.0, -y[n - 1]));
  const double mun1 = sp.mu[n - 2];
  const double proxy = (mun * mun + mun1 * mun1) / h.squares()[0];
  if (proxy < branch_tol) {
    throw BranchProximityError("point lies within branch tolerance of the branching ellipsoid", proxy);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) sp.signs[i] = x[i] < 0.0 ? -1 : 1;
  // x_n = prod(mu)/prod(h) vanishes exactly only if mu_n or mu_{n-1} does:
  // mu_n on the cut disc, mu_{n-1} outside it. Drop the root-finder residue.
  double mn = mun, mn1 = mun1;
  if (x[n - 1] == 0.0) (mn <= mn1 ? mn : mn1) = 0.0;
  sp.mu[n - 1] = mn;
  sp.mu[n - 2] = x[n - 1] < 0.0 ? -mn1 : mn1;
  if (sheet == Sheet::minus) sp = sp.involution();
  return sp;
}

SheetPoint from_cartesian_near(const HalfAxes& h, std::span<const double> x, double ref_nm1, double ref_n,
                               double branch_tol) {
  SheetPoint sp = from_cartesian(h, x, Sheet::plus, branch_tol);
  const double d_plus = std::hypot(sp.mu_nm1() - ref_nm1, sp.mu_n() - ref_n);
  const double d_minus = std::hypot(-sp.mu_nm1() - ref_nm1, -sp.mu_n() - ref_n);
  return d_minus < d_plus ? sp.involution() : sp;
}

double sym_identity_check(std::span<const double> y, std::size_t k, std::size_t l) {
  const std::size_t m = y.size();
  if (m < 1 || k >= m || l >= m) throw PreconditionError("sym_identity_check: indices out of range");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (y[i] == y[j]) throw PreconditionError("sym_identity_check: entries must be distinct");
    }
  }
  // Terms cancel heavily for clustered y; accumulate in extended precision.
  const std::size_t order = m - 1 - k;
  const long double sign = order % 2 == 0 ? 1.0L : -1.0L;
  long double acc = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<long double> e(m, 0.0L);
    e[0] = 1.0L;
    std::size_t used = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      ++used;
      for (std::size_t r = used; r >= 1; --r) e[r] += e[r - 1] * static_cast<long double>(y[j]);
    }
    long double den = 1.0L, pw = 1.0L;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) den *= static_cast<long double>(y[i]) - static_cast<long double>(y[j]);
    }
    for (std::size_t r = 0; r < l; ++r) pw *= static_cast<long double>(y[i]);
    acc += sign * pw * e[order] / den;
  }
  return static_cast<double>(acc);
}

BranchCoordinate branch_coordinate_z(const HalfAxes& h, const SheetPoint& sp) {
  const std::size_t n = h.dim();
  double prod_mu = 1.0, prod_sqrt_mu = 1.0;
  for (std::size_t j = 0; j + 2 < n; ++j) {
    prod_mu *= sp.mu[j];
    prod_sqrt_mu *= std::sqrt(sp.mu[j]);
  }
  double prod_sqrt_h = 1.0;
  for (double v : h.values()) prod_sqrt_h *= std::sqrt(v);
  const std::complex<double> w(sp.mu_n(), sp.mu_nm1());
  BranchCoordinate bc;
  bc.z = (prod_mu / (2.0 * h.product())) * (w * w);
  bc.zhalf = (prod_sqrt_mu / (std::sqrt(2.0) * prod_sqrt_h)) * w;
  return bc;
}

double metric_coefficient(const HalfAxes& h, const SheetPoint& sp, std::size_t j) {
  const std::size_t n = h.dim();
  const double mun2 = sp.mu_n() * sp.mu_n();
  if (j == n - 1) {
    double num = 1.0, den = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      num *= sp.mu[k] * sp.mu[k] + mun2;
      den *= h.squares()[k] + mun2;
    }
    return num / den;
  }
  const double mj2 = sp.mu[j] * sp.mu[j];
  double num = mun2 + mj2, den = 1.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (k != j) num *= sp.mu[k] * sp.mu[k] - mj2;
    den *= h.squares()[k] - mj2;
  }
  return num / den;
}

VerificationReport metric_orthogonality(const HalfAxes& h, const SheetPoint& sp, double step) {
  const std::size_t n = h.dim();
  const double d = step * h[0];
  std::vector<std::vector<double>> tangent(n, std::vector<double>(n));
  try {
    for (std::size_t j = 0; j < n; ++j) {
      SheetPoint p = sp, m = sp;
      p.mu[j] += d;
      m.mu[j] -= d;
      const auto xp = to_cartesian(h, p);
      const auto xm = to_cartesian(h, m);
      for (std::size_t i = 0; i < n; ++i) tangent[j][i] = (xp[i] - xm[i]) / (2.0 * d);
    }
  } catch (const PreconditionError& e) {
    throw NumericFailure(std::string("metric_orthogonality: stencil leaves the chart: ") + e.what());
  }
  auto dot = [&](std::size_t a, std::size_t b) {
    return std::inner_product(tangent[a].begin(), tangent[a].end(), tangent[b].begin(), 0.0);
  };
  VerificationReport rep;
  rep.name = "metric_orthogonality";
  rep.columns = {"index", "fd_diagonal", "closed_form", "relative_error"};
  double max_off = 0.0, max_diag = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double gaa = dot(a, a);
    const double exact = metric_coefficient(h, sp, a);
    const double rel = std::abs(gaa - exact) / std::abs(exact);
    max_diag = std::max(max_diag, rel);
    rep.rows.push_back({static_cast<double>(a + 1), gaa, exact, rel});
    for (std::size_t b = a + 1; b < n; ++b) {
      max_off = std::max(max_off, std::abs(dot(a, b)) / std::sqrt(gaa * dot(b, b)));
    }
  }
  rep.set("max_offdiagonal", max_off);
  rep.set("max_diagonal_relative_error", max_diag);
  rep.require(max_off <= 1e-6, "off-diagonal metric entries exceed 1e-6");
  rep.require(max_diag <= 1e-6, "diagonal metric entries deviate by more than 1e-6");
  return rep;
}

}  // namespace z2h
