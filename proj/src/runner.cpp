#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "diagnostics.hpp"
#include "error.hpp"
#include "hum.hpp"
#include "output.hpp"
#include "parallel.hpp"
#include "random_fields.hpp"

namespace degwave {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config_error, msg); }

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::filesystem::path resolve_relative(const Config& cfg, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  const std::filesystem::path origin(cfg.origin());
  return origin.has_parent_path() ? origin.parent_path() / p : p;
}

struct Setup {
  Problem problem;
  DegeneracyReport report;
  double T = 0.0;
  SolveSettings settings;
};

Setup make_setup(const Config& cfg, bool needs_time) {
  const CoefficientProfile profile = profile_from_config(cfg);
  const std::size_t n = cfg.get_count("mesh.n");
  const double p = cfg.get_double("mesh.p", 2.0);
  if (n < 2) config_error("key 'mesh.n': need at least 2 cells");
  if (p < 1.0 || p > 4.0) config_error("key 'mesh.p': grading must lie in [1, 4]");
  Setup s{Problem::build(profile, n, p), classify_degeneracy(profile, 256), 0.0, {}};
  if (needs_time) {
    s.T = cfg.get_double("time.T");
    if (s.T <= 0.0) config_error("key 'time.T': must be positive");
    s.settings.dt = cfg.get_double("time.dt", 0.0);
    try {
      s.settings.dt = make_time_grid(s.T, s.settings.dt).dt;
    } catch (const Error& e) {
      config_error(std::string("key 'time.dt': ") + e.what());
    }
  }
  return s;
}

FieldPair sine_data(const Problem& problem) {
  WeightedVector u0 =
      WeightedVector::sample(problem.mesh, [](double x) { return std::sin(std::numbers::pi * x); });
  u0[0] = 0.0;
  u0[u0.size() - 1] = 0.0;
  return {u0, WeightedVector(problem.n_nodes())};
}

FieldPair file_data(const Config& cfg, const Problem& problem) {
  const auto path = resolve_relative(cfg, cfg.get_string("data.path"));
  std::ifstream in(path);
  if (!in) config_error("key 'data.path': cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (line.rfind("u0,u1", 0) != 0) {
    config_error("key 'data.path': header must be 'u0,u1' in '" + path.string() + "'");
  }
  FieldPair out{WeightedVector(problem.n_nodes()), WeightedVector(problem.n_nodes())};
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (row >= problem.n_nodes()) config_error("key 'data.path': more rows than mesh nodes");
    double a = 0.0, b = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) != 2) {
      config_error("key 'data.path': malformed row " + std::to_string(row + 2));
    }
    out.first[row] = a;
    out.second[row] = b;
    ++row;
  }
  if (row != problem.n_nodes()) {
    config_error("key 'data.path': expected " + std::to_string(problem.n_nodes()) +
                 " rows (one per mesh node), found " + std::to_string(row));
  }
  out.first[0] = 0.0;
  out.second[0] = 0.0;
  return out;
}

std::string data_kind(const Config& cfg, const std::string& fallback) {
  const std::string kind = cfg.get_string("data.kind", fallback);
  if (kind != "sine" && kind != "random" && kind != "file") {
    config_error("key 'data.kind': expected sine, random or file, got '" + kind + "'");
  }
  return kind;
}

/// One datum for sine/file, data.ensemble random members otherwise.
std::vector<FieldPair> make_data(const Config& cfg, const Problem& problem,
                                 const std::string& fallback_kind, std::size_t fallback_members) {
  const std::string kind = data_kind(cfg, fallback_kind);
  if (kind == "sine") return {sine_data(problem)};
  if (kind == "file") return {file_data(cfg, problem)};
  const std::size_t members = cfg.get_count("data.ensemble", fallback_members);
  if (members == 0) config_error("key 'data.ensemble': must be at least 1");
  const std::uint64_t seed = cfg.get_seed("data.seed", 1);
  std::vector<FieldPair> out;
  out.reserve(members);
  for (std::size_t k = 0; k < members; ++k) {
    out.push_back(random_h0_pair(problem.ips, member_seed(seed, k)));
  }
  return out;
}

std::vector<double> pick(const std::vector<double>& v, std::size_t every) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); i += every) out.push_back(v[i]);
  return out;
}

struct Context {
  const Config& cfg;
  std::filesystem::path out_dir;
  const MessageSink& sink;
  RunOutcome& outcome;

  std::filesystem::path file(const std::string& name) {
    const auto p = out_dir / name;
    outcome.artifacts.push_back(p);
    return p;
  }
  void gate(bool ok, const std::string& line) {
    outcome.gate_lines.push_back(std::string(ok ? "PASS " : "FAIL ") + line);
    outcome.gate_passed = outcome.gate_passed && ok;
  }
};

void run_conserve(Context& ctx) {
  Setup s = make_setup(ctx.cfg, true);
  const FieldPair data = make_data(ctx.cfg, s.problem, "sine", 1).front();
  s.settings.store_every = 1;
  const Trajectory traj = solve_homogeneous({data.first, data.second, 0.0}, s.T,
                                            Direction::forward, s.problem, s.settings);
  const EnergySeries es = energy(traj, s.problem.ips);
  if (es.E0 <= 0.0) config_error("initial data have zero energy");

  CsvTable csv({"t[time]", "trace[1/length]:y_x(t;1)",
                "energy[energy]:0.5*int(y_t^2/sigma+eta*y_x^2)dx",
                "rel_drift[1]:|E(t)-E(0)|/E(0)"});
  std::vector<double> drift(es.E.size());
  for (std::size_t k = 0; k < es.E.size(); ++k) {
    drift[k] = std::abs(es.E[k] - es.E0) / es.E0;
    csv.add_numbers({es.times[k], traj.trace_series[k], es.E[k], drift[k]});
  }
  csv.write(ctx.file("energy.csv"));
  const std::size_t every = std::max<std::size_t>(1, es.E.size() / 1000);
  write_svg_plot(ctx.file("energy.svg"),
                 {"Relative energy drift", "t", "|E(t)-E(0)|/E(0)", true, false},
                 {{pick(es.times, every), pick(drift, every), ""}});
  ctx.gate(es.max_rel_drift < 1e-7,
           fmt("conserve: max_rel_drift %.3e < %.0e", es.max_rel_drift, 1e-7));
}

void run_inequality(Context& ctx, bool lower) {
  Setup s = make_setup(ctx.cfg, true);
  const std::vector<FieldPair> data = make_data(ctx.cfg, s.problem, "random", 50);
  std::vector<ObservabilityCheck> checks(data.size());
  SolveSettings local = s.settings;
  local.store_every = 0;
  parallel_for(data.size(), [&](std::size_t k) {
    const Trajectory traj = solve_homogeneous({data[k].first, data[k].second, 0.0}, s.T,
                                              Direction::forward, s.problem, local);
    checks[k] = observability_check(traj, s.report, s.problem, s.T);
  });

  const ControlTimeBound bound =
      observability_time(s.report, s.problem.weights, s.problem.a_at_1());
  CsvTable csv({"member[1]", "E0[energy]:0.5*int(y_t^2/sigma+eta*y_x^2)dx",
                "trace_integral[energy*time]:eta(1)*int_0^T y_x(t;1)^2 dt",
                "ratio[time]:trace_integral/E0",
                "upper_const[time]:2(2+K+M)T+4max{1/a(1);1}",
                "lower_const[time]:T(2-K-2M)-8max{1;1/a(1);K*eta_max/(a(1)eta_min)}",
                "passes_upper[bool]:ratio<=upper_const",
                "passes_lower[bool]:ratio>=0.95*lower_const"});
  double min_ratio = checks.front().ratio, max_ratio = checks.front().ratio;
  bool all_upper = true, all_lower = true;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const auto& c = checks[k];
    csv.add_numbers({static_cast<double>(k), c.E0, c.trace_integral, c.ratio, c.upper_const,
                     c.lower_const, c.passes_upper ? 1.0 : 0.0, c.passes_lower ? 1.0 : 0.0});
    min_ratio = std::min(min_ratio, c.ratio);
    max_ratio = std::max(max_ratio, c.ratio);
    all_upper = all_upper && c.passes_upper;
    all_lower = all_lower && c.passes_lower;
  }
  csv.write(ctx.file("observability.csv"));

  if (!lower) {
    ctx.gate(all_upper, fmt("direct: max ratio %.6g <= upper constant %.6g", max_ratio,
                            checks.front().upper_const));
    return;
  }
  if (!(s.T > bound.T0)) {
    ctx.sink(fmt("warning: T = %.6g does not exceed T0 = %.6g; the lower constant is not "
                 "positive and the bound is vacuous",
                 s.T, bound.T0));
  }
  const double threshold = (1.0 - kLowerBoundAllowance) * checks.front().lower_const;
  ctx.gate(all_lower, fmt("observe: min ratio %.6g >= 0.95 * lower constant = %.6g", min_ratio,
                          threshold));
}

void run_identity(Context& ctx) {
  Setup s = make_setup(ctx.cfg, true);
  const FieldPair data = make_data(ctx.cfg, s.problem, "sine", 1).front();
  const std::string which = ctx.cfg.get_string("identity.which", "both");
  std::vector<Identity> ids;
  if (which == "x2" || which == "both") ids.push_back(Identity::x2_multiplier);
  if (which == "x" || which == "both") ids.push_back(Identity::x_multiplier);
  if (ids.empty()) config_error("key 'identity.which': expected x2, x or both");

  s.settings.store_every = 1;
  const Trajectory traj = solve_homogeneous({data.first, data.second, 0.0}, s.T,
                                            Direction::forward, s.problem, s.settings);
  CsvTable csv({"identity[-]:multiplier m(x)=x^2 or x", "term[-]",
                "value[energy*time]:lhs=0.5*eta(1)*int y_x(t;1)^2 dt; rhs terms sum to lhs"});
  for (Identity id : ids) {
    const IdentityResidual r = multiplier_residual(traj, id, s.problem);
    const std::string name = to_string(id);
    csv.add_row({name, "lhs", format_real(r.lhs)});
    for (const auto& [term, value] : r.rhs_terms) csv.add_row({name, term, format_real(value)});
    csv.add_row({name, "residual", format_real(r.residual)});
    csv.add_row({name, "relative_residual", format_real(r.relative_residual)});
    ctx.gate(r.relative_residual < 0.02,
             name + fmt(": relative_residual %.3e < %.2g", r.relative_residual, 0.02));
  }
  csv.write(ctx.file("identity.csv"));
}

void run_hum(Context& ctx) {
  Setup s = make_setup(ctx.cfg, true);
  const FieldPair data = make_data(ctx.cfg, s.problem, "sine", 1).front();
  CgSettings cg;
  cg.tol = ctx.cfg.get_double("hum.tol", 1e-8);
  cg.max_iter = ctx.cfg.get_count("hum.max_iter", 400);
  if (cg.tol <= 0.0) config_error("key 'hum.tol': must be positive");

  const HUMSolution sol = solve_hum(data.first, data.second, s.T, cg, s.problem, s.settings);
  for (const auto& w : sol.warnings) ctx.sink("warning: " + w);
  SolveSettings ends = s.settings;
  ends.store_every = 0;
  const Trajectory traj =
      solve_controlled(data.first, data.second, sol.f, s.T, s.problem, ends);
  const NullControlReport check =
      verify_null_control(sol, traj, data.first, data.second, s.problem);

  CsvTable control({"t[time]", "f[length^-1]:v_x(t;1) of the adjoint solution from V_bar"});
  for (std::size_t k = 0; k < sol.f.size(); ++k) {
    control.add_numbers({static_cast<double>(k) * sol.dt, sol.f[k]});
  }
  control.write(ctx.file("control.csv"));

  const auto& profile = s.problem.profile;
  CsvTable report({"K[1]:sup x|a'|/a", "h[1]", "c[1]", "T[time]", "N[cells]", "dt[time]",
                   "iters[1]", "residual[1]:|r|/|b| in H0", "final_u_norm[1]:|u(T)|_{1/sigma}",
                   "final_ut_norm[1]:|u_t(T)|_{-1}", "control_norm[1]:(int f^2 dt)^(1/2)",
                   "initial_norm[1]:(|u0|^2_{1/sigma}+|u1|^2_{-1})^(1/2)",
                   "cost_ratio[1]:control_norm^2/initial_norm^2", "T0[time]", "converged[bool]"});
  report.add_numbers({s.report.K_measured, profile.h_exp(), profile.c_drift(), s.T,
                      static_cast<double>(s.problem.mesh.n_cells()), sol.dt,
                      static_cast<double>(sol.cg_iterations), sol.cg_rel_residual,
                      check.final_u_norm, check.final_ut_norm, check.control_L2_norm,
                      check.initial_norm, check.cost_ratio, sol.T0, sol.converged ? 1.0 : 0.0});
  report.write(ctx.file("hum_report.csv"));

  std::vector<double> t(sol.f.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) * sol.dt;
  write_svg_plot(ctx.file("control.svg"), {"HUM boundary control", "t", "f(t)", false, false},
                 {{t, sol.f, ""}});

  ctx.gate(sol.converged, fmt("hum: CG relative residual %.3e < tol %.1e", sol.cg_rel_residual,
                              cg.tol) +
                              " after " + std::to_string(sol.cg_iterations) + " iterations");
  const double ref = check.initial_norm > 0.0 ? check.initial_norm : 1.0;
  ctx.gate(check.final_u_norm < 1e-3 * ref || check.initial_norm == 0.0,
           fmt("hum: final_u_norm/initial_norm %.3e < %.0e", check.final_u_norm / ref, 1e-3));
  ctx.gate(check.final_ut_norm < 1e-2 * ref || check.initial_norm == 0.0,
           fmt("hum: final_ut_norm/initial_norm %.3e < %.0e", check.final_ut_norm / ref, 1e-2));
}

void run_sweep(Context& ctx) {
  const std::string kind = ctx.cfg.get_string("coeff.kind");
  if (kind != "power_law") config_error("key 'coeff.kind': sweep needs power_law");
  if (ctx.cfg.has("coeff.K")) ctx.sink("note: coeff.K is ignored by sweep (see sweep.K_grid)");
  SweepBase base;
  base.h = ctx.cfg.get_double("coeff.h", 0.0);
  base.c = ctx.cfg.get_double("coeff.c", 0.0);
  base.n_cells = ctx.cfg.get_count("mesh.n");
  base.grading_p = ctx.cfg.get_double("mesh.p", 2.0);
  if (base.n_cells < 2) config_error("key 'mesh.n': need at least 2 cells");
  if (base.grading_p < 1.0 || base.grading_p > 4.0) {
    config_error("key 'mesh.p': grading must lie in [1, 4]");
  }
  base.seed = ctx.cfg.get_seed("data.seed", 1);
  const double T = ctx.cfg.get_double("time.T");
  if (T <= 0.0) config_error("key 'time.T': must be positive");
  base.settings.dt = ctx.cfg.get_double("time.dt", 0.0);
  const std::vector<double> grid =
      ctx.cfg.get_list("sweep.K_grid", {0.5, 1.0, 1.5, 1.9, 2.2});
  const std::size_t members = ctx.cfg.get_count("data.ensemble", 20);
  if (members == 0) config_error("key 'data.ensemble': must be at least 1");
  if (data_kind(ctx.cfg, "random") != "random") config_error("key 'data.kind': sweep needs random");

  const std::vector<SweepRow> rows = sweep_observability(grid, T, members, base);
  CsvTable csv({"K[1]:a=x^K", "C_est[time]:min over ensemble of eta(1)*int y_x(t;1)^2 dt/E0",
                "T[time]", "n[cells]", "dt[time]"});
  std::vector<double> ks, cs;
  bool decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv.add_numbers({rows[i].K, rows[i].C_est, rows[i].T, static_cast<double>(rows[i].n),
                     rows[i].dt});
    ks.push_back(rows[i].K);
    cs.push_back(rows[i].C_est);
    if (i > 0 && !(rows[i].C_est < rows[i - 1].C_est)) decreasing = false;
  }
  csv.write(ctx.file("sweep.csv"));
  write_svg_plot(ctx.file("sweep.svg"),
                 {"Estimated observability constant", "K", "C_est", true, true},
                 {{ks, cs, ""}});
  std::string line = "sweep: C_est strictly decreasing in K:";
  for (double c : cs) line += fmt(" %.4g", c);
  ctx.gate(decreasing, line);
}

void run_hardy(Context& ctx) {
  Setup s = make_setup(ctx.cfg, false);
  const auto& ips = s.problem.ips;
  std::vector<std::pair<std::string, WeightedVector>> fields;
  fields.emplace_back("x(1-x)",
                      WeightedVector::sample(s.problem.mesh, [](double x) { return x * (1.0 - x); }));
  fields.back().second[s.problem.n_nodes() - 1] = 0.0;
  const std::vector<FieldPair> data = make_data(ctx.cfg, s.problem, "random", 100);
  for (std::size_t k = 0; k < data.size(); ++k) {
    fields.emplace_back("member_" + std::to_string(k), data[k].first);
  }

  // v_i^2 <= x_i * sum h (v')^2 for v(0) = 0, so every quotient is at most
  // sum_i m_i x_i.
  double bound = 0.0;
  for (std::size_t i = 0; i < s.problem.n_nodes(); ++i) {
    bound += ips.node_mass[i] * s.problem.mesh.nodes()[i];
  }

  CsvTable csv({"field[-]", "hardy_quotient[1]:int v^2/sigma / int v'^2",
                "hardy_quotient_eta[1]:int v^2/sigma / int eta v'^2",
                "norm_ratio[1]:(int v^2/sigma + int v'^2)/int v'^2"});
  double max_q = 0.0;
  bool finite_positive = true;
  for (const auto& [name, v] : fields) {
    const double q = hardy_quotient(v, ips);
    const double qe = hardy_quotient_eta(v, ips);
    csv.add_row({name, format_real(q), format_real(qe), format_real(1.0 + q)});
    finite_positive = finite_positive && std::isfinite(q) && q > 0.0;
    max_q = std::max(max_q, q);
  }
  csv.write(ctx.file("hardy.csv"));
  ctx.gate(finite_positive, "hardy: every quotient finite and positive");
  ctx.gate(max_q <= bound,
           fmt("hardy: max quotient %.6g <= discrete bound sum m_i x_i = %.6g", max_q, bound));
}

}  // namespace

CoefficientProfile profile_from_config(const Config& cfg) {
  const std::string kind = cfg.get_string("coeff.kind");
  if (kind == "power_law") {
    const double K = cfg.get_double("coeff.K");
    if (K < 0.0) config_error("key 'coeff.K': must be nonnegative");
    return CoefficientProfile::power_law(K, cfg.get_double("coeff.h", 0.0),
                                         cfg.get_double("coeff.c", 0.0));
  }
  if (kind == "tabulated") {
    return CoefficientProfile::from_csv(resolve_relative(cfg, cfg.get_string("coeff.table_path")));
  }
  config_error("key 'coeff.kind': expected power_law or tabulated, got '" + kind + "'");
}

RunOutcome run_experiment(const Config& cfg,
                          const std::optional<std::filesystem::path>& out_dir_override,
                          const MessageSink& sink) {
  static const std::set<std::string> kinds = {"conserve", "direct", "observe", "identity",
                                              "hum",      "sweep",  "hardy"};
  const std::string experiment = cfg.get_string("experiment");
  if (!kinds.count(experiment)) {
    config_error("key 'experiment': unknown experiment '" + experiment + "'");
  }

  RunOutcome outcome;
  outcome.experiment = experiment;
  outcome.gate_passed = true;
  const std::filesystem::path out_dir =
      out_dir_override ? *out_dir_override : std::filesystem::path(cfg.get_string("out.dir", "out"));
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  require(!ec, ErrorCode::io_error, "cannot create output directory '" + out_dir.string() + "'");

  const MessageSink quiet = [](const std::string&) {};
  Context ctx{cfg, out_dir, sink ? sink : quiet, outcome};
  if (experiment == "conserve") run_conserve(ctx);
  else if (experiment == "direct") run_inequality(ctx, false);
  else if (experiment == "observe") run_inequality(ctx, true);
  else if (experiment == "identity") run_identity(ctx);
  else if (experiment == "hum") run_hum(ctx);
  else if (experiment == "sweep") run_sweep(ctx);
  else run_hardy(ctx);
  return outcome;
}

std::string constants_table(const Config& cfg) {
  const CoefficientProfile profile = profile_from_config(cfg);
  const WeightPair weights = build_weights(profile, Problem::kDefaultQuadrature);
  const DegeneracyReport report = classify_degeneracy(profile, 256);
  const double a1 = profile.a(1.0);
  const ControlTimeBound bound = observability_time(report, weights, a1);

  std::ostringstream out;
  auto row = [&](const std::string& name, const std::string& value) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-14s %s\n", name.c_str(), value.c_str());
    out << buf;
  };
  auto num = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  row("profile", profile.describe());
  row("K", num(report.K_measured));
  row("class", to_string(report.classification));
  row("M", num(report.M));
  row("M_inf", num(report.M_inf));
  row("a(1)", num(a1));
  row("eta(1)", num(weights.eta_at_1()));
  row("eta_min", num(weights.eta_min()));
  row("eta_max", num(weights.eta_max()));
  row("regime", to_string(bound.regime));
  row("gap", num(bound.gap));
  row("T0", bound.finite() ? num(bound.T0) : "inf");
  row("hyp_b/a_L1", report.hyp_b_over_a_L1 ? "yes" : "no");
  row("hyp_x^K/a_mon", report.hyp_xK_over_a_monotone ? "yes" : "no");
  row("hyp_xb/a_Linf", report.hyp_xb_over_a_Linf ? "yes" : "no");
  row("probe_points", std::to_string(report.n_probe));
  if (cfg.has("time.T")) {
    const double T = cfg.get_double("time.T");
    row("T", num(T));
    row("upper_const", num(direct_inequality_constant(report, a1, T)));
    row("lower_const", num(observability_lower_constant(bound, T)));
  }
  return out.str();
}

}  // namespace degwave
