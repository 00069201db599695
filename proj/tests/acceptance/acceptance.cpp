// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "z2h/asymptotics.hpp"
#include "z2h/donaldson.hpp"
#include "z2h/ellipsoidal.hpp"
#include "z2h/lawlor.hpp"
#include "z2h/zharmonic.hpp"

namespace {

using namespace z2h;
using std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> info;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome closed_form_asymptotics() {
  Outcome o;
  const auto q3 = coefficients(std::vector<double>{1.0, 1.0});
  const auto q4 = coefficients(std::vector<double>{1.0, 1.0, 1.0});
  const std::vector<double> got{q3.a0, q3.a[0], q3.a[1], q3.a[2], q4.a0, q4.a[0], q4.a[1], q4.a[2], q4.a[3]};
  const std::vector<double> want{pi / 4, pi / 8, pi / 8, -pi / 4, 0.5, 1.0 / 3, 1.0 / 3, 1.0 / 3, -1.0};
  const double err = testing::max_abs_diff(got, want);
  o.check(err <= 1e-8, "max abs error " + fmt("%.2e", err));
  return o;
}

Outcome elliptic_value() {
  Outcome o;
  const double a0 = coefficients(std::vector<double>{2.0, 1.0}).a0;
  const double oracle = testing::elliptic_k_agm(std::sqrt(3.0) / 2) / 2;
  o.check(std::abs(a0 - oracle) <= 1e-8, "a0 = " + fmt("%.15f", a0) + ", AGM " + fmt("%.15f", oracle));
  return o;
}

Outcome trace_consistency() {
  Outcome o;
  SeededSampler rng(3);
  double worst = 0.0;
  for (std::size_t n = 3; n <= 5; ++n) {
    for (int k = 0; k < 10; ++k) {
      const auto q = coefficients(testing::random_axes(n - 1, rng));
      worst = std::max(worst, std::abs(q.a.back() - q.a_n_integral));
    }
  }
  o.check(worst <= 1e-12, "30 axis sets, max gap " + fmt("%.2e", worst));
  return o;
}

Outcome harmonicity() {
  Outcome o;
  const HarmonicFamily fam(HalfAxes({2.0, 1.0}));
  const auto rep = harmonicity_report(fam, ShellRegion{1.5, 4.0}, 20, 1, 1e-3);
  o.check(rep.get("max_residual") <= 1e-5, "max residual " + fmt("%.2e", rep.get("max_residual")));
  o.check(rep.get("ratio") >= 3.5, "halving ratio " + fmt("%.3f", rep.get("ratio")));
  return o;
}

Outcome monodromy() {
  Outcome o;
  const HarmonicFamily fam(HalfAxes({2.0, 1.0}));
  const double h1 = fam.axes()[0];
  const std::vector<double> center{h1, 0.0, 0.0};
  const auto linked = continue_along_path(fam, planar_loop(center, 0, 0.3 * h1, 200), Sheet::plus);
  const double e1 = std::abs(linked.back().value + linked.front().value);
  o.check(e1 <= 1e-8, "linking loop |f_end + f_start| " + fmt("%.2e", e1));
  const std::vector<double> away{0.0, 0.5, 2.5};
  const auto trivial = continue_along_path(fam, planar_loop(away, 0, 0.3 * h1, 200), Sheet::plus);
  const double e2 = std::abs(trivial.back().value - trivial.front().value);
  o.check(e2 <= 1e-8, "contractible loop |f_end - f_start| " + fmt("%.2e", e2));
  return o;
}

Outcome branch_nondegeneracy() {
  Outcome o;
  const HarmonicFamily fam(HalfAxes({2.0, 1.0}));
  const double h1sq = fam.axes().squares()[0];
  double worst_exp = 0.0, worst_coef = 0.0;
  for (double mu1 : {1.0, 1.5, 2.0}) {
    SheetPoint base;
    base.mu = {mu1, 0.0, 0.0};
    base.signs = {1, 1};
    const double B = branch_coefficient(fam, base).B;
    const double scale = mu1 / (2.0 * fam.axes().product());  // |z| = scale * r^2
    for (double alpha : {0.0, 0.6, -1.1}) {
      std::vector<double> zs, res;
      double b_fit = 0.0;
      for (double zmag : {1e-2, 1e-3, 1e-4}) {
        const double r = std::sqrt(zmag * h1sq / scale);
        SheetPoint sp = base;
        sp.mu[1] = r * std::sin(alpha);
        sp.mu[2] = r * std::cos(alpha);
        const auto bc = branch_coordinate_z(fam.axes(), sp);
        const auto z32 = bc.zhalf * bc.zhalf * bc.zhalf;
        const double f = fam.eval(sp);
        zs.push_back(std::abs(bc.z));
        res.push_back(f - std::real(B * z32));
        b_fit = f / std::real(z32);
      }
      worst_exp = std::max(worst_exp, std::abs(loglog_slope(zs, res) - 2.5));
      if (alpha == 0.0) worst_coef = std::max(worst_coef, rel(b_fit, B));
    }
  }
  o.check(worst_exp <= 0.2, "max |exponent - 2.5| " + fmt("%.3f", worst_exp));
  o.check(worst_coef <= 0.01, "max relative error of fitted B " + fmt("%.2e", worst_coef));
  SheetPoint p;
  p.mu = {1.0, 0.0, 0.0};
  p.signs = {1, 1};
  const double b1 = branch_coefficient(fam, p).B;
  p.mu[0] = 2.0;
  const double b2 = branch_coefficient(fam, p).B;
  o.check(std::abs(b1 + 2.0 / 3.0) <= 1e-14 && std::abs(b2 + 2.0 * std::sqrt(2.0) / 3.0) <= 1e-14,
          "spot values B = " + fmt("%.12f", b1) + ", " + fmt("%.12f", b2));
  return o;
}

Outcome far_field() {
  Outcome o;
  double worst_exp = 0.0;
  for (const std::vector<double>& h : {std::vector<double>{2.0, 1.0}, std::vector<double>{3.0, 2.0, 1.0}}) {
    const HarmonicFamily fam{HalfAxes(h)};
    SeededSampler rng(7);
    const std::vector<double> radii{10 * h[0], 20 * h[0], 40 * h[0]};
    for (int ray = 0; ray < 3; ++ray) {
      const auto rep = far_field_decay(fam, rng.unit_vector(fam.dim()), radii);
      worst_exp = std::max(worst_exp, std::abs(rep.get("decay_exponent") - rep.get("expected_exponent")));
    }
  }
  o.check(worst_exp <= 0.2, "n=3,4 decay exponents within " + fmt("%.3f", worst_exp));

  // Full (a0, a_i) recovery on |x| = 50 h_1.
  {
    const std::vector<double> h{3.0, 2.0, 1.0};
    const HarmonicFamily fam{HalfAxes(h)};
    const auto q = coefficients(h);
    const auto fit = far_field_fit(fam, 50 * h[0], 200, 11);
    double err = rel(fit.c0, q.a0);
    for (std::size_t i = 0; i < q.a.size(); ++i) err = std::max(err, rel(fit.c[i], q.a[i]));
    o.check(err <= 1e-4, "n=4 LSQ (a0, a_i) max relative error " + fmt("%.2e", err));
  }
  // n = 3: the |x|^{-1} monopole is constant on the sphere and shifts the fitted constant.
  {
    const std::vector<double> h{2.0, 1.0};
    const HarmonicFamily fam{HalfAxes(h)};
    const auto q = coefficients(h);
    const double R = 50 * h[0];
    const auto fit = far_field_fit(fam, R, 200, 11);
    double err = 0.0;
    for (std::size_t i = 0; i < q.a.size(); ++i) err = std::max(err, rel(fit.c[i], q.a[i]));
    o.check(err <= 1e-4, "n=3 LSQ a_i max relative error " + fmt("%.2e", err));
    const double shifted = q.a0 + far_field_monopole(h) / R;
    o.check(rel(fit.c0, shifted) <= 1e-4, "n=3 c0 vs a0 + b/R relative error " + fmt("%.2e", rel(fit.c0, shifted)));
    o.info.push_back("n=3 raw c0 vs a0 relative error " + fmt("%.2e", rel(fit.c0, q.a0)) +
                     " (monopole b/R = " + fmt("%.3e", far_field_monopole(h) / R) + ")");
  }
  return o;
}

Outcome inversion() {
  Outcome o;
  for (const std::vector<double>& h : {std::vector<double>{2.0, 1.0}, std::vector<double>{3.0, 2.0, 1.0}}) {
    const auto q = coefficients(h);
    const std::vector<double> target(q.a.begin(), q.a.end() - 1);
    const auto r = invert(target);
    const double err = testing::max_abs_diff(r.h, h);
    o.check(err <= 1e-8, "n=" + std::to_string(h.size() + 1) + " roundtrip error " + fmt("%.2e", err));
  }
  const std::vector<double> h0{2.0, 1.0};
  const auto q0 = coefficients(h0);
  const double C = 3.7;
  const std::vector<double> target{q0.a[0], q0.a[1]};
  const auto r = invert(target, C);
  const double expect = std::sqrt(C / q0.a0);
  o.check(rel(r.scale, expect) <= 1e-8, "scale " + fmt("%.12f", r.scale) + " vs sqrt(C/a0) " + fmt("%.12f", expect));
  // s * f_{s h0} has constant term C and the target quadric.
  const auto qs = coefficients(r.h);
  o.check(rel(r.scale * qs.a0, C) <= 1e-8 && rel(r.scale * qs.a[0], target[0]) <= 1e-8 &&
              rel(r.scale * qs.a[1], target[1]) <= 1e-8,
          "s f_{s h0} has constant term C and unchanged quadric");
  return o;
}

Outcome donaldson() {
  Outcome o;
  const auto c = donaldson_coefficients(TwistorParams(0.0));
  const std::vector<double> got{c.c0, c.c1, c.c2, c.c3}, want{pi * pi, pi * pi / 2, pi * pi / 2, pi * pi};
  o.check(testing::max_abs_diff(got, want) <= 1e-8,
          "eps=0 coefficients error " + fmt("%.2e", testing::max_abs_diff(got, want)));
  const auto rep = compare_to_fh(TwistorParams(0.5), 10, 7);
  o.check(rep.get("max_rel_dev") <= 1e-6, "eps=0.5 max |f_D/(kappa f_h) - 1| " + fmt("%.2e", rep.get("max_rel_dev")));
  double worst = 0.0;
  for (double eps : {0.2, 0.5, 0.8}) {
    const TwistorParams p(eps);
    const auto d = donaldson_coefficients(p);
    const auto ax = p.axes();
    const auto a = coefficients(std::vector<double>{ax[0], ax[1]});
    worst = std::max({worst, std::abs(d.c0 / d.c1 - a.a0 / a.a[0]), std::abs(d.c2 / d.c1 - a.a[1] / a.a[0]),
                      std::abs(d.c3 / d.c1 + a.a[2] / a.a[0])});
  }
  o.check(worst <= 1e-8, "coefficient ratio identity error " + fmt("%.2e", worst));
  return o;
}

Outcome lawlor_angles() {
  Outcome o;
  SeededSampler rng(10);
  double worst_sum = 0.0;
  for (int k = 0; k < 10; ++k) {
    std::vector<double> c(3 + k % 3);
    for (auto& v : c) v = rng.uniform(0.3, 3.0);
    const NeckParams neck(c);
    double s = 0.0;
    for (double phi : neck.angles()) s += phi;
    worst_sum = std::max(worst_sum, std::abs(s - pi));
  }
  o.check(worst_sum <= 1e-10, "angle sum error " + fmt("%.2e", worst_sum));
  const NeckParams sym(std::vector<double>{1.0, 1.0, 1.0});
  double worst_sym = 0.0;
  for (double phi : sym.angles()) worst_sym = std::max(worst_sym, std::abs(phi - pi / 3));
  o.check(worst_sym <= 1e-10, "c=(1,1,1) error " + fmt("%.2e", worst_sym));
  const std::vector<double> t{10, 20, 40};
  const auto rep = angle_match(HalfAxes({2.0, 1.0}), t);
  o.check(rep.get("min_exponent") >= 2.5 && rep.get("max_exponent") <= 3.5,
          "angle match exponents in [" + fmt("%.3f", rep.get("min_exponent")) + ", " +
              fmt("%.3f", rep.get("max_exponent")) + "]");
  o.check(rep.get("min_sum_excess") > 0.0 && std::abs(rep.get("sum_excess_exponent") - 3.0) <= 0.5,
          "sum excess > 0, decay exponent " + fmt("%.3f", rep.get("sum_excess_exponent")));
  return o;
}

Outcome lawlor_convergence() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> t{5, 10, 20, 40};
  const auto pts = sample_neck_points(3, 5, 2024, 0.5);
  const auto rep = convergence_harness(HalfAxes({2.0, 1.0}), t, pts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool decreasing = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    if (rep.rows[k][0] == rep.rows[k - 1][0] && !(rep.rows[k][4] < rep.rows[k - 1][4])) decreasing = false;
  }
  o.check(rep.get("samples_used") == 5.0, "samples used " + fmt("%.0f", rep.get("samples_used")));
  o.check(decreasing && rep.get("min_ratio") >= 1.8, "min error ratio per doubling " + fmt("%.3f", rep.get("min_ratio")));
  o.check(secs <= 60.0, "runtime " + fmt("%.2f", secs) + " s");
  return o;
}

Outcome coordinates() {
  Outcome o;
  SeededSampler rng(12);
  double worst_rt = 0.0;
  for (int k = 0; k < 100; ++k) {
    const HalfAxes h(testing::random_axes(2 + k % 4, rng));
    const auto sp = testing::random_sheet_point(h, rng, k % 2 ? Sheet::plus : Sheet::minus);
    const auto x = to_cartesian(h, sp);
    const auto x2 = to_cartesian(h, from_cartesian(h, x, sp.sheet()));
    worst_rt = std::max(worst_rt, testing::max_abs_diff(x, x2) / std::max(1.0, testing::norm(x)));
  }
  o.check(worst_rt <= 1e-10, "100-point roundtrip " + fmt("%.2e", worst_rt));

  double worst_sym = 0.0;
  for (std::size_t m = 1; m <= 5; ++m) {
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = static_cast<double>(i + 1) + rng.uniform(0.1, 0.8);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l)
        worst_sym = std::max(worst_sym, std::abs(sym_identity_check(y, k, l) - (k == l ? 1.0 : 0.0)));
  }
  o.check(worst_sym <= 1e-12, "symmetric identity " + fmt("%.2e", worst_sym));

  bool metric_ok = true;
  double worst_off = 0.0, worst_diag = 0.0;
  for (int k = 0; k < 20; ++k) {
    const HalfAxes h(testing::random_axes(2 + k % 3, rng));
    const auto rep = metric_orthogonality(h, testing::random_sheet_point(h, rng, Sheet::plus, 2.0));
    metric_ok = metric_ok && rep.passed;
    worst_off = std::max(worst_off, rep.get("max_offdiagonal"));
    worst_diag = std::max(worst_diag, rep.get("max_diagonal_relative_error"));
  }
  o.check(metric_ok && worst_off <= 1e-6 && worst_diag <= 1e-6,
          "metric off-diagonal " + fmt("%.2e", worst_off) + ", diagonal " + fmt("%.2e", worst_diag));

  double worst_focal = 0.0;
  for (std::size_t n = 3; n <= 6; ++n) {
    const HalfAxes h(testing::random_axes(n - 1, rng));
    const auto lhs = focal_identity_lhs(h);
    const auto rhs = focal_identity_rhs(h, focal_roots(h));
    for (std::size_t k = 0; k < lhs.size(); ++k)
      worst_focal = std::max(worst_focal, std::abs(lhs[k] - rhs[k]) / std::max(1.0, std::abs(lhs[k])));
  }
  o.check(worst_focal <= 1e-12, "focal-root coefficient identity " + fmt("%.2e", worst_focal));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed-form asymptotics", closed_form_asymptotics},
      {"elliptic value", elliptic_value},
      {"trace consistency", trace_consistency},
      {"harmonicity", harmonicity},
      {"monodromy", monodromy},
      {"non-degeneracy at the branch", branch_nondegeneracy},
      {"far field", far_field},
      {"inversion", inversion},
      {"Donaldson n=3", donaldson},
      {"Lawlor angles", lawlor_angles},
      {"Lawlor convergence", lawlor_convergence},
      {"coordinates", coordinates},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %2zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    for (const auto& line : o.info) std::printf("     info: %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
