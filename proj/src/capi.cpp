#include "degwave/degwave.h"

#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "diagnostics.hpp"
#include "error.hpp"
#include "hum.hpp"
#include "runner.hpp"

struct dw_profile {
  degwave::CoefficientProfile profile;
};

struct dw_problem {
  degwave::Problem problem;
};

struct dw_hum_result {
  degwave::HUMSolution solution;
};

namespace {

thread_local std::string last_error;

dw_status to_status(degwave::ErrorCode code) {
  using degwave::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return DW_ERR_INVALID_ARGUMENT;
    case ErrorCode::hypothesis_violation: return DW_ERR_HYPOTHESIS;
    case ErrorCode::mesh_mismatch: return DW_ERR_MESH_MISMATCH;
    case ErrorCode::boundary_violation: return DW_ERR_BOUNDARY;
    case ErrorCode::solver_breakdown: return DW_ERR_SOLVER_BREAKDOWN;
    case ErrorCode::cg_stagnation: return DW_ERR_CG_STAGNATION;
    case ErrorCode::io_error: return DW_ERR_IO;
    case ErrorCode::config_error: return DW_ERR_CONFIG;
  }
  return DW_ERR_INTERNAL;
}

template <class Fn>
dw_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const degwave::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DW_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return DW_ERR_INTERNAL;
  }
}

dw_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return DW_ERR_INVALID_ARGUMENT;
}

degwave::WeightedVector field(const double* data, std::size_t len, const dw_problem* p,
                              const char* what) {
  degwave::require(len == p->problem.n_nodes(), degwave::ErrorCode::mesh_mismatch,
                   std::string(what) + ": expected " + std::to_string(p->problem.n_nodes()) +
                       " values, got " + std::to_string(len));
  return degwave::WeightedVector(std::vector<double>(data, data + len));
}

dw_degeneracy to_c(degwave::Degeneracy d) {
  switch (d) {
    case degwave::Degeneracy::none: return DW_DEG_NONE;
    case degwave::Degeneracy::WD: return DW_DEG_WEAK;
    case degwave::Degeneracy::SD: return DW_DEG_STRONG;
    case degwave::Degeneracy::supercritical: return DW_DEG_SUPERCRITICAL;
  }
  return DW_DEG_NONE;
}

void emit_lines(const std::string& text, dw_message_fn sink, void* user) {
  if (!sink) return;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) sink(line.c_str(), user);
}

}  // namespace

extern "C" {

const char* dw_version(void) { return "1.0.0"; }

const char* dw_status_name(dw_status status) {
  switch (status) {
    case DW_OK: return "ok";
    case DW_GATE_FAILED: return "gate_failed";
    case DW_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DW_ERR_HYPOTHESIS: return "hypothesis_violation";
    case DW_ERR_MESH_MISMATCH: return "mesh_mismatch";
    case DW_ERR_BOUNDARY: return "boundary_violation";
    case DW_ERR_SOLVER_BREAKDOWN: return "solver_breakdown";
    case DW_ERR_CG_STAGNATION: return "cg_stagnation";
    case DW_ERR_IO: return "io_error";
    case DW_ERR_CONFIG: return "config_error";
    case DW_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* dw_last_error(void) { return last_error.c_str(); }

dw_status dw_profile_power_law(double K, double h, double c, dw_profile** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    degwave::require(std::isfinite(K) && K >= 0.0 && std::isfinite(h) && std::isfinite(c),
                     degwave::ErrorCode::invalid_argument,
                     "power law needs finite K >= 0, h and c");
    *out = new dw_profile{degwave::CoefficientProfile::power_law(K, h, c)};
    return DW_OK;
  });
}

dw_status dw_profile_from_csv(const char* path, dw_profile** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new dw_profile{degwave::CoefficientProfile::from_csv(path)};
    return DW_OK;
  });
}

void dw_profile_free(dw_profile* profile) { delete profile; }

dw_status dw_profile_constants(const dw_profile* profile, dw_constants* out) {
  if (!profile) return null_argument("profile");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& p = profile->profile;
    const auto weights = degwave::build_weights(p, degwave::Problem::kDefaultQuadrature);
    const auto report = degwave::classify_degeneracy(p, 256);
    const double a1 = p.a(1.0);
    const auto bound = degwave::observability_time(report, weights, a1);
    out->K = report.K_measured;
    out->M = report.M;
    out->M_inf = report.M_inf;
    out->a_at_1 = a1;
    out->eta_at_1 = weights.eta_at_1();
    out->eta_min = weights.eta_min();
    out->eta_max = weights.eta_max();
    out->gap = bound.gap;
    out->T0 = bound.finite() ? bound.T0 : std::numeric_limits<double>::infinity();
    out->classification = to_c(report.classification);
    return DW_OK;
  });
}

dw_status dw_inequality_constants(const dw_profile* profile, double T, double* upper,
                                  double* lower) {
  if (!profile) return null_argument("profile");
  if (!upper || !lower) return null_argument("upper/lower");
  return guarded([&] {
    degwave::require(std::isfinite(T) && T > 0.0, degwave::ErrorCode::invalid_argument,
                     "T must be positive");
    const auto& p = profile->profile;
    const auto weights = degwave::build_weights(p, degwave::Problem::kDefaultQuadrature);
    const auto report = degwave::classify_degeneracy(p, 256);
    const double a1 = p.a(1.0);
    *upper = degwave::direct_inequality_constant(report, a1, T);
    *lower = degwave::observability_lower_constant(
        degwave::observability_time(report, weights, a1), T);
    return DW_OK;
  });
}

dw_status dw_problem_create(const dw_profile* profile, size_t n_cells, double grading_p,
                            dw_problem** out) {
  if (!profile) return null_argument("profile");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new dw_problem{degwave::Problem::build(profile->profile, n_cells, grading_p)};
    return DW_OK;
  });
}

void dw_problem_free(dw_problem* problem) { delete problem; }

size_t dw_problem_nodes(const dw_problem* problem) {
  return problem ? problem->problem.n_nodes() : 0;
}

dw_status dw_problem_coordinates(const dw_problem* problem, double* x, size_t len) {
  if (!problem) return null_argument("problem");
  if (!x) return null_argument("x");
  return guarded([&] {
    const auto& nodes = problem->problem.mesh.nodes();
    degwave::require(len == nodes.size(), degwave::ErrorCode::mesh_mismatch,
                     "coordinate buffer length does not match the mesh");
    std::copy(nodes.begin(), nodes.end(), x);
    return DW_OK;
  });
}

dw_status dw_energy(const dw_problem* problem, const double* y, const double* v, size_t len,
                    double* energy) {
  if (!problem) return null_argument("problem");
  if (!y || !v || !energy) return null_argument("y/v/energy");
  return guarded([&] {
    const degwave::State s{field(y, len, problem, "y"), field(v, len, problem, "v"), 0.0};
    *energy = degwave::discrete_energy(s, problem->problem.ips);
    return DW_OK;
  });
}

dw_status dw_solve_homogeneous(const dw_problem* problem, const double* y0, const double* v0,
                               size_t len, double T, double dt, double* trace, size_t trace_len,
                               dw_solve_summary* out) {
  if (!problem) return null_argument("problem");
  if (!y0 || !v0 || !out) return null_argument("y0/v0/out");
  return guarded([&] {
    const auto& p = problem->problem;
    degwave::SolveSettings settings;
    settings.dt = dt;
    const auto traj = degwave::solve_homogeneous(
        {field(y0, len, problem, "y0"), field(v0, len, problem, "v0"), 0.0}, T,
        degwave::Direction::forward, p, settings);
    const auto es = degwave::energy(traj, p.ips);
    out->steps = traj.steps;
    out->dt = traj.dt;
    out->E0 = es.E0;
    out->max_rel_drift = es.max_rel_drift;
    out->trace_integral = degwave::trace_integral(traj.trace_series, traj.dt, p.eta_at_1());
    out->ratio = es.E0 > 0.0 ? out->trace_integral / es.E0 : 0.0;
    if (trace) {
      const std::size_t n = std::min(trace_len, traj.trace_series.size());
      std::copy(traj.trace_series.begin(), traj.trace_series.begin() + n, trace);
    }
    return DW_OK;
  });
}

dw_status dw_hum_solve(const dw_problem* problem, const double* u0, const double* u1,
                       size_t len, double T, double dt, double tol, size_t max_iter,
                       dw_hum_result** out) {
  if (!problem) return null_argument("problem");
  if (!u0 || !u1 || !out) return null_argument("u0/u1/out");
  *out = nullptr;
  return guarded([&] {
    degwave::SolveSettings settings;
    settings.dt = dt;
    auto result = std::make_unique<dw_hum_result>();
    result->solution =
        degwave::solve_hum(field(u0, len, problem, "u0"), field(u1, len, problem, "u1"), T,
                           {tol, max_iter}, problem->problem, settings);
    const bool converged = result->solution.converged;
    *out = result.release();
    if (!converged) {
      try {
        degwave::require_converged((*out)->solution);
      } catch (const degwave::Error& e) {
        last_error = e.what();
      }
      return DW_ERR_CG_STAGNATION;
    }
    return DW_OK;
  });
}

void dw_hum_free(dw_hum_result* result) { delete result; }

dw_status dw_hum_get_summary(const dw_hum_result* result, dw_hum_summary* out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  const auto& s = result->solution;
  out->iterations = s.cg_iterations;
  out->converged = s.converged ? 1 : 0;
  out->rel_residual = s.cg_rel_residual;
  out->T0 = s.T0;
  out->final_u_norm = s.final_u_norm;
  out->final_ut_norm = s.final_ut_norm;
  out->control_L2_norm = s.control_L2_norm;
  out->initial_norm = s.initial_norm;
  last_error.clear();
  return DW_OK;
}

size_t dw_hum_control_length(const dw_hum_result* result) {
  return result ? result->solution.f.size() : 0;
}

dw_status dw_hum_control(const dw_hum_result* result, double* f, size_t len) {
  if (!result) return null_argument("result");
  if (!f) return null_argument("f");
  return guarded([&] {
    const auto& ctrl = result->solution.f;
    degwave::require(len == ctrl.size(), degwave::ErrorCode::invalid_argument,
                     "control buffer needs " + std::to_string(ctrl.size()) + " entries");
    std::copy(ctrl.begin(), ctrl.end(), f);
    return DW_OK;
  });
}

dw_status dw_run_config(const char* config_path, const char* out_dir, dw_message_fn sink,
                        void* user) {
  if (!config_path) return null_argument("config_path");
  return guarded([&] {
    const auto cfg = degwave::Config::load(config_path);
    std::optional<std::filesystem::path> override_dir;
    if (out_dir && *out_dir) override_dir = out_dir;
    const degwave::MessageSink forward = [&](const std::string& line) {
      if (sink) sink(line.c_str(), user);
    };
    const auto outcome = degwave::run_experiment(cfg, override_dir, forward);
    for (const auto& line : outcome.gate_lines) forward(line);
    if (!outcome.gate_passed) {
      last_error = "gate failed for experiment '" + outcome.experiment + "'";
      return DW_GATE_FAILED;
    }
    return DW_OK;
  });
}

dw_status dw_print_constants(const char* config_path, dw_message_fn sink, void* user) {
  if (!config_path) return null_argument("config_path");
  return guarded([&] {
    const auto cfg = degwave::Config::load(config_path);
    emit_lines(degwave::constants_table(cfg), sink, user);
    return DW_OK;
  });
}

}  // extern "C"
