#include "z2h/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "z2h/errors.hpp"

namespace z2h {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi;
  double value;
  double error;
  double resabs;
  int depth;
  bool frozen;
};

Segment gauss_kronrod(const ScalarFunction& g, double lo, double hi, int depth) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = g(center);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = g(center - dx);
    const double f2 = g(center + dx);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  if (!std::isfinite(resk)) {
    throw NumericFailure("non-finite integrand value near [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  Segment s{lo, hi, resk * half, std::abs(resk - resg) * half,
            resabs * std::abs(half), depth, false};
  s.error = std::max(s.error, 50.0 * kEps * s.resabs);
  return s;
}

// Globally adaptive bisection on [0, 1] for an already transformed integrand.
QuadratureResult adapt_unit(const ScalarFunction& g, const QuadratureOptions& opts) {
  std::vector<Segment> segs;
  segs.reserve(64);
  std::size_t evals = 0;
  auto freeze = [&](Segment& s) {
    if (s.error <= 50.0 * kEps * s.resabs || s.depth >= opts.max_depth) s.frozen = true;
  };
  segs.push_back(gauss_kronrod(g, 0.0, 1.0, 0));
  evals += 15;
  freeze(segs.back());

  for (;;) {
    double value = 0.0, error = 0.0;
    for (const auto& s : segs) {
      value += s.value;
      error += s.error;
    }
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    if (error <= tol) return {value, error, evals};

    std::size_t worst = segs.size();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (!segs[i].frozen && (worst == segs.size() || segs[i].error > segs[worst].error)) worst = i;
    }
    if (worst == segs.size()) {
      // Every segment sits at its roundoff floor or the depth limit.
      bool depth_limited = false;
      for (const auto& s : segs) {
        if (s.depth >= opts.max_depth && s.error > 50.0 * kEps * s.resabs) depth_limited = true;
      }
      if (!depth_limited) return {value, error, evals};
      throw NumericFailure("quadrature hit maximum subdivision depth", value);
    }
    if (segs.size() >= opts.max_intervals) {
      throw NumericFailure("quadrature did not converge within " +
                               std::to_string(opts.max_intervals) + " subintervals",
                           value);
    }
    const Segment parent = segs[worst];
    const double mid = 0.5 * (parent.lo + parent.hi);
    Segment left = gauss_kronrod(g, parent.lo, mid, parent.depth + 1);
    Segment right = gauss_kronrod(g, mid, parent.hi, parent.depth + 1);
    evals += 30;
    freeze(left);
    freeze(right);
    segs[worst] = left;
    segs.push_back(right);
  }
}

// x = a + (b - a) (3t^2 - 2t^3); dx/dt = 6 (b - a) t (1 - t).
double cubic_map(double t) { return t * t * (3.0 - 2.0 * t); }
double cubic_map_complement(double t) { return (1.0 - t) * (1.0 - t) * (1.0 + 2.0 * t); }
double cubic_map_derivative(double t) { return 6.0 * t * (1.0 - t); }

}  // namespace

QuadratureResult& QuadratureResult::operator+=(const QuadratureResult& other) {
  value += other.value;
  error_estimate += other.error_estimate;
  evaluations += other.evaluations;
  return *this;
}

QuadratureResult integrate_finite(const ScalarFunction& f, double a, double b,
                                  const QuadratureOptions& opts) {
  if (!(a <= b)) throw PreconditionError("integrate_finite: requires a <= b");
  if (a == b) return {0.0, 0.0, 1};
  const double width = b - a;
  auto g = [&](double t) {
    // Evaluate from the nearer endpoint so points next to b keep full precision.
    const double x = t < 0.5 ? a + width * cubic_map(t) : b - width * cubic_map_complement(t);
    return f(x) * width * cubic_map_derivative(t);
  };
  return adapt_unit(g, opts);
}

QuadratureResult integrate_piecewise(const ScalarFunction& f, std::span<const double> knots,
                                     const QuadratureOptions& opts) {
  if (knots.size() < 2) throw PreconditionError("integrate_piecewise: need at least two knots");
  QuadratureOptions piece = opts;
  piece.abs_tol = opts.abs_tol / static_cast<double>(knots.size() - 1);
  QuadratureResult total{0.0, 0.0, 0};
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    if (!(knots[k] <= knots[k + 1])) throw PreconditionError("integrate_piecewise: knots not sorted");
    total += integrate_finite(f, knots[k], knots[k + 1], piece);
  }
  return total;
}

QuadratureResult integrate_semi_infinite(const ScalarFunction& f, const QuadratureOptions& opts) {
  // u = s/(1-s) composed with s = 3t^2 - 2t^3; 1-s is formed without cancellation.
  auto g = [&](double t) {
    const double one_minus_s = cubic_map_complement(t);
    if (one_minus_s <= 0.0) return 0.0;
    const double u = cubic_map(t) / one_minus_s;
    const double dudt = cubic_map_derivative(t) / (one_minus_s * one_minus_s);
    const double fu = f(u);
    return fu == 0.0 ? 0.0 : fu * dudt;
  };
  try {
    return adapt_unit(g, opts);
  } catch (const NumericFailure& e) {
    throw NumericFailure(std::string("semi-infinite integral: tail did not converge (") +
                             e.what() + ")",
                         e.best_estimate());
  }
}

double find_root_bracketed(const ScalarFunction& g, double lo, double hi, double tol) {
  if (lo > hi) std::swap(lo, hi);
  double flo = g(lo);
  double fhi = g(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw PreconditionError("find_root_bracketed: g has the same strict sign at both ends");
  }
  double a = lo, b = hi, fa = flo, fb = fhi;
  int side = 0;  // Illinois bookkeeping
  for (int iter = 0; iter < 200; ++iter) {
    const double width = b - a;
    const double mid = a + 0.5 * width;
    if (width <= tol * std::max(1.0, std::abs(mid)) || mid == a || mid == b) break;
    double x = (a * fb - b * fa) / (fb - fa);
    // Fall back to bisection when the secant point is unusable or stalls.
    if (!(x > a && x < b) || iter % 3 == 2) x = mid;
    const double fx = g(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = x;
      fb = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
  }
  const double ga = std::abs(g(a));
  const double gb = std::abs(g(b));
  return ga <= gb ? a : b;
}

double bisect_with_signs(const ScalarFunction& g, double lo, double hi, int sign_lo, int sign_hi) {
  if (lo > hi) throw PreconditionError("bisect_with_signs: lo > hi");
  if (sign_lo == sign_hi) throw PreconditionError("bisect_with_signs: endpoint signs must differ");
  for (int iter = 0; iter < 2200; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double v = g(mid);
    if (v == 0.0) return mid;
    const int s = v > 0.0 ? 1 : -1;
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

double fd_laplacian(const FieldFunction& f, std::span<const double> x, double delta) {
  if (!(delta > 0.0)) throw PreconditionError("fd_laplacian: delta must be positive");
  std::vector<double> p(x.begin(), x.end());
  const double f0 = f(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double xi = p[i];
    p[i] = xi + delta;
    const double fp = f(p);
    p[i] = xi - delta;
    const double fm = f(p);
    p[i] = xi;
    acc += (fp - 2.0 * f0) + fm;
  }
  return acc / (delta * delta);
}

double fd_laplacian_richardson(const FieldFunction& f, std::span<const double> x, double delta) {
  const double coarse = fd_laplacian(f, x, delta);
  const double fine = fd_laplacian(f, x, 0.5 * delta);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> fd_gradient(const FieldFunction& f, std::span<const double> x, double delta) {
  if (!(delta > 0.0)) throw PreconditionError("fd_gradient: delta must be positive");
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> grad(p.size());
  auto central = [&](std::size_t i, double h) {
    const double xi = p[i];
    p[i] = xi + h;
    const double fp = f(p);
    p[i] = xi - h;
    const double fm = f(p);
    p[i] = xi;
    return (fp - fm) / (2.0 * h);
  };
  for (std::size_t i = 0; i < p.size(); ++i) {
    grad[i] = (4.0 * central(i, 0.5 * delta) - central(i, delta)) / 3.0;
  }
  return grad;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionError("loglog_slope: need at least two paired samples");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double SeededSampler::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededSampler::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SeededSampler::normal() {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> SeededSampler::unit_vector(std::size_t n) {
  std::vector<double> v(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& c : v) {
      c = normal();
      norm += c * c;
    }
  } while (norm < 1e-20);
  norm = std::sqrt(norm);
  for (auto& c : v) c /= norm;
  return v;
}

}  // namespace z2h
