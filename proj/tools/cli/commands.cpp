#include "cli/commands.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/grid.hpp"
#include "json.hpp"
#include "z2h/asymptotics.hpp"
#include "z2h/donaldson.hpp"
#include "z2h/ellipsoidal.hpp"
#include "z2h/errors.hpp"
#include "z2h/lawlor.hpp"
#include "z2h/zharmonic.hpp"

namespace z2h::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  std::string log_level = "warn";
  std::string output;  // empty: write to the given stream
};

struct EvalArgs {
  std::vector<double> h, x;
  std::string sheet = "plus";
};
struct AsymArgs {
  std::vector<double> h;
};
struct InvertArgs {
  std::vector<double> a;
  std::optional<double> c0;
  double tol = 1e-12;
  int max_iter = 50;
};
struct LaplaceArgs {
  std::vector<double> h, shell{1.5, 4.0};
  std::size_t count = 20;
  std::uint64_t seed = 1;
  double delta = 1e-3;
  double guard = 0.25;
};
struct MonodromyArgs {
  std::vector<double> h;
  std::size_t center = 1;
  std::optional<double> radius;
  std::size_t steps = 200;
};
struct DonaldsonArgs {
  double eps = 0.0;
  std::size_t compare = 0;
  std::uint64_t seed = 1;
  std::vector<double> x;
};
struct LawlorArgs {
  std::vector<double> h, t{5, 10, 20, 40};
  std::size_t samples = 5;
  std::uint64_t seed = 1;
  bool angles_only = false;
};
struct GridArgs {
  std::vector<double> h;
  std::vector<std::size_t> plane{1, 2};
  std::vector<double> range{-3.0, 3.0};
  std::size_t count = 21;
  std::string out = "-";
  std::string format = "csv";
};

QuadratureOptions quadrature(const Common& c) {
  QuadratureOptions q;
  q.rel_tol = c.rel_tol;
  q.abs_tol = c.abs_tol;
  return q;
}

json report_json(const VerificationReport& r) {
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  return json{{"name", r.name},       {"passed", r.passed}, {"metrics", metrics},
              {"columns", r.columns}, {"rows", r.rows},     {"notes", r.notes}};
}

json document(const std::string& command, json inputs) {
  return json{{"command", command}, {"inputs", std::move(inputs)}, {"outputs", json::object()},
              {"diagnostics", json::object()}};
}

json tolerance_inputs(const Common& c) { return json{{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}}; }

json cmd_eval(const EvalArgs& a, const Common& c) {
  const Sheet sheet = parse_sheet(a.sheet);
  FamilyOptions opts;
  opts.quadrature = quadrature(c);
  const HarmonicFamily fam(HalfAxes(a.h), opts);
  if (a.x.size() != fam.dim()) {
    throw PreconditionError("--x must have " + std::to_string(fam.dim()) + " entries");
  }
  spdlog::info("eval: n = {}, sheet {}", fam.dim(), to_string(sheet));
  const SheetPoint sp = from_cartesian(fam.axes(), a.x, sheet);
  const Evaluation ev = fam.evaluate(sp);
  const auto grad = gradient(fam, a.x, sheet);
  json inputs{{"h", a.h}, {"x", a.x}, {"sheet", to_string(sheet)}};
  inputs.update(tolerance_inputs(c));
  json doc = document("eval", inputs);
  doc["h"] = a.h;
  doc["x"] = a.x;
  doc["sheet"] = to_string(sheet);
  doc["value"] = ev.value;
  doc["grad"] = grad;
  doc["mu"] = sp.mu;
  doc["outputs"] = json{{"value", ev.value}, {"grad", grad}, {"mu", sp.mu}, {"sheet", to_string(sp.sheet())}};
  doc["diagnostics"] = json{{"quadrature_error", ev.quadrature_error}};
  return doc;
}

json cmd_asym(const AsymArgs& a, const Common& c) {
  const auto q = coefficients(a.h, quadrature(c));
  json inputs{{"h", a.h}};
  inputs.update(tolerance_inputs(c));
  json doc = document("asym", inputs);
  doc["outputs"] = json{{"a0", q.a0}, {"a", q.a}};
  doc["diagnostics"] = json{{"a_n_integral", q.a_n_integral},
                            {"trace_gap", std::abs(q.a.back() - q.a_n_integral)},
                            {"quadrature_error", q.quadrature_error}};
  return doc;
}

json inversion_json(const InversionResult& r) {
  return json{{"h", r.h},          {"h0", r.h0},         {"scale", r.scale},
              {"iterations", r.iterations}, {"residual", r.residual}, {"converged", r.converged}};
}

json cmd_invert(const InvertArgs& a, const Common&, int& code) {
  json inputs{{"a", a.a}, {"c0", a.c0 ? json(*a.c0) : json(nullptr)}, {"tol", a.tol}, {"max_iter", a.max_iter}};
  json doc = document("invert", inputs);
  try {
    const auto r = invert(a.a, a.c0, a.tol, a.max_iter);
    doc["outputs"] = inversion_json(r);
  } catch (const InversionFailure& e) {
    doc["outputs"] = inversion_json(e.best());
    doc["diagnostics"] = json{{"error", e.what()}};
    code = kNumericFailure;
  }
  return doc;
}

json cmd_laplace(const LaplaceArgs& a, const Common& c) {
  if (a.shell.size() != 2) throw PreconditionError("--shell expects r1,r2");
  FamilyOptions opts;
  opts.quadrature = quadrature(c);
  const HarmonicFamily fam(HalfAxes(a.h), opts);
  const ShellRegion region{a.shell[0], a.shell[1], a.guard};
  const auto rep = harmonicity_report(fam, region, a.count, a.seed, a.delta);
  json inputs{{"h", a.h}, {"shell", a.shell}, {"n", a.count}, {"seed", a.seed}, {"delta", a.delta}, {"guard", a.guard}};
  inputs.update(tolerance_inputs(c));
  json doc = document("laplace-check", inputs);
  doc["outputs"] = json{{"max_residual", rep.get("max_residual")},
                        {"max_residual_half", rep.get("max_residual_half")},
                        {"ratio", rep.get("ratio")},
                        {"observed_order", rep.get("observed_order")}};
  doc["diagnostics"] = json{{"report", report_json(rep)}};
  return doc;
}

json cmd_monodromy(const MonodromyArgs& a, const Common& c) {
  FamilyOptions opts;
  opts.quadrature = quadrature(c);
  const HarmonicFamily fam(HalfAxes(a.h), opts);
  const std::size_t n = fam.dim();
  if (a.center < 1 || a.center > n - 1) throw PreconditionError("--center must be in 1..n-1");
  const double radius = a.radius.value_or(0.3 * fam.axes()[0]);
  std::vector<double> center(n, 0.0);
  center[a.center - 1] = fam.axes()[a.center - 1];
  const auto path = planar_loop(center, a.center - 1, radius, a.steps);
  const auto samples = continue_along_path(fam, path, Sheet::plus);
  const double start = samples.front().value, end = samples.back().value;
  json inputs{{"h", a.h}, {"center", a.center}, {"radius", radius}, {"steps", a.steps}};
  inputs.update(tolerance_inputs(c));
  json doc = document("monodromy", inputs);
  doc["outputs"] = json{{"start_value", start},
                        {"end_value", end},
                        {"start_sheet", to_string(samples.front().sheet)},
                        {"end_sheet", to_string(samples.back().sheet)},
                        {"monodromy", start != 0.0 ? end / start : NAN}};
  doc["diagnostics"] = json{{"sign_flip_error", std::abs(end + start)}};
  return doc;
}

json cmd_donaldson(const DonaldsonArgs& a, const Common& c) {
  const TwistorParams p(a.eps);
  const auto coeff = donaldson_coefficients(p, quadrature(c));
  json inputs{{"eps", a.eps}, {"compare", a.compare}, {"seed", a.seed}, {"x", a.x}};
  inputs.update(tolerance_inputs(c));
  json doc = document("donaldson", inputs);
  json out{{"c0", coeff.c0}, {"c1", coeff.c1}, {"c2", coeff.c2}, {"c3", coeff.c3}, {"kappa", kappa(p)}};
  json diag{{"theta_form", coeff.theta_form}, {"u_form", coeff.u_form}, {"max_route_gap", coeff.max_route_gap}};
  if (!a.x.empty()) {
    if (a.x.size() != 3) throw PreconditionError("--x must have 3 entries");
    out["value"] = donaldson_eval(p, a.x, quadrature(c));
  }
  if (a.compare > 0) {
    const auto rep = compare_to_fh(p, a.compare, a.seed);
    out["max_rel_dev"] = rep.get("max_rel_dev");
    out["axes"] = comparison_axes(p);
    diag["comparison"] = report_json(rep);
  }
  doc["outputs"] = out;
  doc["diagnostics"] = diag;
  return doc;
}

json cmd_lawlor(const LawlorArgs& a, const Common& c) {
  const HalfAxes h(a.h);
  json inputs{{"h", a.h}, {"t", a.t}, {"samples", a.samples}, {"seed", a.seed}, {"angles_only", a.angles_only}};
  inputs.update(tolerance_inputs(c));
  json doc = document("lawlor", inputs);
  const auto angles = angle_match(h, a.t);
  json out{{"angle_exponent_min", angles.get("min_exponent")},
           {"angle_exponent_max", angles.get("max_exponent")},
           {"min_sum_excess", angles.get("min_sum_excess")}};
  json diag{{"angle_match", report_json(angles)}};
  if (!a.angles_only) {
    const auto pts = sample_neck_points(h.dim(), a.samples, a.seed);
    const auto conv = convergence_harness(h, a.t, pts);
    out["min_ratio"] = conv.get("min_ratio");
    out["converged"] = conv.passed;
    diag["convergence"] = report_json(conv);
  }
  doc["outputs"] = out;
  doc["diagnostics"] = diag;
  return doc;
}

json cmd_grid(const GridArgs& a, const Common& c, std::ostream& out, bool& wrote_csv) {
  FamilyOptions opts;
  opts.quadrature = quadrature(c);
  const HarmonicFamily fam(HalfAxes(a.h), opts);
  if (a.plane.size() != 2 || a.range.size() != 2) throw PreconditionError("--plane and --range expect two values");
  if (a.format != "csv" && a.format != "json") throw PreconditionError("--format must be csv or json");
  if (a.plane[0] < 1 || a.plane[1] < 1) throw PreconditionError("--plane indices are 1-based");
  GridSpec spec{a.plane[0] - 1, a.plane[1] - 1, a.range[0], a.range[1], a.count};
  const auto rows = evaluate_grid(fam, spec);
  std::size_t clamped = 0;
  for (const auto& r : rows) clamped += r.branch_clamped ? 1 : 0;
  json inputs{{"h", a.h}, {"plane", a.plane}, {"range", a.range}, {"n", a.count}, {"out", a.out}, {"format", a.format}};
  inputs.update(tolerance_inputs(c));
  json doc = document("grid", inputs);
  doc["diagnostics"] = json{{"branch_clamped_points", clamped}};
  if (a.format == "json") {
    json data = json::array();
    for (const auto& r : rows) {
      json row = r.x;
      row.push_back(r.f_plus);
      data.push_back(row);
    }
    doc["outputs"] = json{{"rows", rows.size()}, {"data", data}};
    return doc;
  }
  if (a.out == "-") {
    write_grid_csv(out, rows, fam.dim());
    wrote_csv = true;
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw PreconditionError("cannot open --out path '" + a.out + "'");
    write_grid_csv(file, rows, fam.dim());
  }
  doc["outputs"] = json{{"rows", rows.size()}, {"path", a.out}};
  return doc;
}

void configure_logging(const std::string& level, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
  auto logger = std::make_shared<spdlog::logger>("z2h", sink);
  logger->set_level(spdlog::level::from_str(level));
  spdlog::set_default_logger(logger);
}

json error_document(const std::string& command, const std::string& type, const std::string& message) {
  json doc = document(command, json::object());
  doc["diagnostics"] = json{{"error", type}, {"message", message}};
  return doc;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Z2-harmonic functions branching along ellipsoids"};
  app.name(args.empty() ? "z2h" : args.front());
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  Common common;
  app.add_option("--rel-tol", common.rel_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--abs-tol", common.abs_tol, "absolute quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--log-level", common.log_level, "trace|debug|info|warn|err|critical|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "err", "critical", "off"}));
  app.add_option("--output", common.output, "write the JSON document to this path");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "evaluate f_h at a Cartesian point");
  eval->add_option("--h", ev.h, "semi-axes, strictly decreasing")->required()->delimiter(',');
  eval->add_option("--x", ev.x, "Cartesian point")->required()->delimiter(',');
  eval->add_option("--sheet", ev.sheet, "plus|minus")->check(CLI::IsMember({"plus", "minus", "+", "-"}));

  AsymArgs as;
  auto* asym = app.add_subcommand("asym", "far-field coefficients a0, a_i");
  asym->add_option("--h", as.h, "positive semi-axes")->required()->delimiter(',');

  InvertArgs inv;
  auto* invert_cmd = app.add_subcommand("invert", "recover semi-axes from target coefficients");
  invert_cmd->add_option("--a", inv.a, "targets a_1..a_{n-1}")->required()->delimiter(',');
  invert_cmd->add_option("--c0", inv.c0, "constant term C");
  invert_cmd->add_option("--tol", inv.tol, "relative tolerance")->check(CLI::PositiveNumber);
  invert_cmd->add_option("--max-iter", inv.max_iter, "Newton iteration cap")->check(CLI::PositiveNumber);

  LaplaceArgs lap;
  auto* laplace = app.add_subcommand("laplace-check", "finite-difference harmonicity report");
  laplace->add_option("--h", lap.h, "semi-axes")->required()->delimiter(',');
  laplace->add_option("--shell", lap.shell, "r1,r2")->delimiter(',');
  laplace->add_option("--n", lap.count, "number of sample points");
  laplace->add_option("--seed", lap.seed, "random seed");
  laplace->add_option("--delta", lap.delta, "finite-difference step")->check(CLI::PositiveNumber);
  laplace->add_option("--guard", lap.guard, "minimum |z| of sample points");

  MonodromyArgs mono;
  auto* monodromy = app.add_subcommand("monodromy", "continue f_h around a loop linking the branch locus");
  monodromy->add_option("--h", mono.h, "semi-axes")->required()->delimiter(',');
  monodromy->add_option("--center", mono.center, "loop centred at h_i e_i (1-based i)");
  monodromy->add_option("--radius", mono.radius, "loop radius (default 0.3 h_1)")->check(CLI::PositiveNumber);
  monodromy->add_option("--steps", mono.steps, "number of loop segments");

  DonaldsonArgs don;
  auto* donaldson = app.add_subcommand("donaldson", "n = 3 twistor integral comparison");
  donaldson->add_option("--eps", don.eps, "ellipse parameter in (-1, 1)")->required();
  donaldson->add_option("--compare", don.compare, "number of comparison points");
  donaldson->add_option("--seed", don.seed, "random seed");
  donaldson->add_option("--x", don.x, "evaluate the twistor integral at this point")->delimiter(',');

  LawlorArgs law;
  auto* lawlor = app.add_subcommand("lawlor", "small-angle Lawlor neck checks");
  lawlor->add_option("--h", law.h, "semi-axes")->required()->delimiter(',');
  lawlor->add_option("--t", law.t, "fiber scales")->delimiter(',');
  lawlor->add_option("--samples", law.samples, "number of neck sample points");
  lawlor->add_option("--seed", law.seed, "random seed");
  lawlor->add_flag("--angles-only", law.angles_only, "skip the potential convergence harness");

  GridArgs gr;
  auto* grid = app.add_subcommand("grid", "sample f_h on a planar grid");
  grid->add_option("--h", gr.h, "semi-axes")->required()->delimiter(',');
  grid->add_option("--plane", gr.plane, "two 1-based axes")->delimiter(',');
  grid->add_option("--range", gr.range, "lo,hi")->delimiter(',');
  grid->add_option("--n", gr.count, "points per axis");
  grid->add_option("--out", gr.out, "CSV path, '-' for the output stream");
  grid->add_option("--format", gr.format, "csv|json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kOk : kInvalidArguments;
  }
  configure_logging(common.log_level, err);

  std::string name = app.get_subcommands().front()->get_name();
  json doc;
  int code = kOk;
  bool wrote_csv = false;
  try {
    if (*eval) doc = cmd_eval(ev, common);
    if (*asym) doc = cmd_asym(as, common);
    if (*invert_cmd) doc = cmd_invert(inv, common, code);
    if (*laplace) doc = cmd_laplace(lap, common);
    if (*monodromy) doc = cmd_monodromy(mono, common);
    if (*donaldson) doc = cmd_donaldson(don, common);
    if (*lawlor) doc = cmd_lawlor(law, common);
    if (*grid) doc = cmd_grid(gr, common, out, wrote_csv);
  } catch (const BranchProximityError& e) {
    doc = error_document(name, "branch_proximity", e.what());
    code = kBranchProximity;
  } catch (const PreconditionError& e) {
    doc = error_document(name, "invalid_arguments", e.what());
    code = kInvalidArguments;
  } catch (const std::exception& e) {
    doc = error_document(name, "numeric_failure", e.what());
    code = kNumericFailure;
  }
  if (code != kOk) spdlog::error("{}: {}", name, doc["diagnostics"].value("message", std::string("failed")));
  if (wrote_csv) return code;

  const std::string text = doc.dump(2) + "\n";
  if (common.output.empty()) {
    out << text;
  } else {
    std::ofstream file(common.output, std::ios::binary);
    if (!file) {
      err << "cannot open --output path '" << common.output << "'\n";
      return kInvalidArguments;
    }
    file << text;
  }
  return code;
}

}  // namespace z2h::cli
