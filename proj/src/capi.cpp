// Copyright 2026 The spintomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spintomo.h"

#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spintomo/measurement.hpp"
#include "spintomo/optimize.hpp"
#include "spintomo/polarization.hpp"
#include "spintomo/reconstruct.hpp"

// C shim: every exported function funnels through Guard(), which turns the
// core's exception taxonomy into status codes and stashes the message in a
// thread-local slot for st_last_error().  Handles are thin structs owning
// one core value each.

struct st_axes {
  spintomo::AxisSet value;
};
struct st_design {
  spintomo::MeasurementDesign value;
};
struct st_state {
  Eigen::MatrixXcd value;
};
struct st_record {
  spintomo::MeasurementRecord value;
};
struct st_sweep {
  spintomo::BetaSweepResult value;
};
struct st_scan {
  spintomo::ThetaScan value;
};

namespace {

thread_local std::string g_last_error;

template <typename Body>
st_status Guard(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return ST_OK;
  } catch (const spintomo::InfeasibleDesignError& err) {
    g_last_error = err.what();
    return ST_INFEASIBLE;
  } catch (const spintomo::DimensionMismatchError& err) {
    g_last_error = err.what();
    return ST_DIMENSION_MISMATCH;
  } catch (const std::invalid_argument& err) {
    g_last_error = err.what();
    return ST_INVALID_ARGUMENT;
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return ST_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return ST_INTERNAL;
  }
}

void Require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

extern "C" {

const char* st_version(void) { return "1.0.0"; }

const char* st_last_error(void) { return g_last_error.c_str(); }

/* ---- Axis sets ------------------------------------------------------- */

st_status st_axes_random(int dim, int count, uint64_t seed, st_axes** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle pointer is null");
    *out = new st_axes{spintomo::RandomAxes(dim, count, seed)};
  });
}

st_status st_axes_newton_young(int dim, double theta, st_axes** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle pointer is null");
    *out = new st_axes{spintomo::NewtonYoungAxes(dim, theta)};
  });
}

st_status st_axes_create(int dim, const double* alphas, const double* betas,
                         int count, st_axes** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle pointer is null");
    Require(alphas != nullptr && betas != nullptr, "angle buffer is null");
    Require(dim >= 2, "axis set needs dim >= 2");
    Require(count >= 1, "axis set needs at least one axis");
    spintomo::AxisSet axes;
    axes.dim = dim;
    axes.axes.resize(count);
    for (int i = 0; i < count; ++i) {
      Require(std::isfinite(alphas[i]) && std::isfinite(betas[i]),
              "axis angles must be finite");
      axes.axes[i].alpha = alphas[i];
      axes.axes[i].beta = betas[i];
    }
    *out = new st_axes{std::move(axes)};
  });
}

st_status st_axes_optimize(const st_axes* axes, int iters, st_axes** out) {
  return Guard([&] {
    Require(axes != nullptr, "axes handle is null");
    Require(out != nullptr, "output handle pointer is null");
    spintomo::SearchConfig config;
    config.local_iters = iters > 0 ? iters : 0;
    *out = new st_axes{spintomo::OptimizeAxes(axes->value, config)};
  });
}

int st_axes_dim(const st_axes* axes) {
  return axes == nullptr ? 0 : axes->value.dim;
}

int st_axes_count(const st_axes* axes) {
  return axes == nullptr ? 0 : static_cast<int>(axes->value.axes.size());
}

st_status st_axes_get(const st_axes* axes, int index, double* alpha,
                      double* beta) {
  return Guard([&] {
    Require(axes != nullptr, "axes handle is null");
    Require(index >= 0 && index < static_cast<int>(axes->value.axes.size()),
            "axis index out of range");
    if (alpha != nullptr) *alpha = axes->value.axes[index].alpha;
    if (beta != nullptr) *beta = axes->value.axes[index].beta;
  });
}

void st_axes_free(st_axes* axes) { delete axes; }

/* ---- Measurement designs --------------------------------------------- */

st_status st_design_create(const st_axes* axes, st_design** out) {
  return Guard([&] {
    Require(axes != nullptr, "axes handle is null");
    Require(out != nullptr, "output handle pointer is null");
    *out = new st_design{spintomo::BuildMeasurementDesign(axes->value)};
  });
}

int st_design_feasible(const st_design* design) {
  return (design != nullptr && design->value.feasible) ? 1 : 0;
}

int st_design_degree_count(const st_design* design) {
  return design == nullptr ? 0
                           : static_cast<int>(design->value.blocks.size());
}

st_status st_design_degree_info(const st_design* design, int ell,
                                double* scale2, double* gamma) {
  return Guard([&] {
    Require(design != nullptr, "design handle is null");
    Require(ell >= 0 && ell < static_cast<int>(design->value.blocks.size()),
            "degree out of range");
    if (scale2 != nullptr) *scale2 = design->value.s2[ell];
    if (gamma != nullptr) *gamma = design->value.gamma.gamma[ell];
  });
}

st_status st_design_total_scale2(const st_design* design, double* out) {
  return Guard([&] {
    Require(design != nullptr, "design handle is null");
    Require(out != nullptr, "output pointer is null");
    *out = design->value.total_s2;
  });
}

st_status st_design_epsilon2(const st_design* design, double* out) {
  return Guard([&] {
    Require(design != nullptr, "design handle is null");
    Require(out != nullptr, "output pointer is null");
    *out = design->value.epsilon2;
  });
}

void st_design_free(st_design* design) { delete design; }

/* ---- States ----------------------------------------------------------- */

st_status st_state_create(int dim, const double* re, const double* im,
                          st_state** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle pointer is null");
    Require(re != nullptr && im != nullptr, "matrix buffer is null");
    Require(dim >= 2, "states need dim >= 2");
    Eigen::MatrixXcd rho(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        const double x = re[r * dim + c];
        const double y = im[r * dim + c];
        Require(std::isfinite(x) && std::isfinite(y),
                "matrix entries must be finite");
        rho(r, c) = std::complex<double>(x, y);
      }
    }
    *out = new st_state{std::move(rho)};
  });
}

st_status st_state_mixed(int dim, st_state** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle pointer is null");
    Require(dim >= 2, "states need dim >= 2");
    *out = new st_state{Eigen::MatrixXcd::Identity(dim, dim) / double(dim)};
  });
}

int st_state_dim(const st_state* state) {
  return state == nullptr ? 0 : static_cast<int>(state->value.rows());
}

st_status st_state_get(const st_state* state, int row, int col, double* re,
                       double* im) {
  return Guard([&] {
    Require(state != nullptr, "state handle is null");
    const int dim = static_cast<int>(state->value.rows());
    Require(row >= 0 && row < dim && col >= 0 && col < dim,
            "matrix index out of range");
    if (re != nullptr) *re = state->value(row, col).real();
    if (im != nullptr) *im = state->value(row, col).imag();
  });
}

st_status st_state_distance(const st_state* a, const st_state* b,
                            double* out) {
  return Guard([&] {
    Require(a != nullptr && b != nullptr, "state handle is null");
    Require(out != nullptr, "output pointer is null");
    if (a->value.rows() != b->value.rows()) {
      throw spintomo::DimensionMismatchError(
          "states have different dimensions");
    }
    *out = (a->value - b->value).norm();
  });
}

st_status st_state_project(const st_state* state, st_state** out) {
  return Guard([&] {
    Require(state != nullptr, "state handle is null");
    Require(out != nullptr, "output handle pointer is null");
    *out = new st_state{spintomo::MleProject(state->value)};
  });
}

void st_state_free(st_state* state) { delete state; }

/* ---- Simulation and reconstruction ------------------------------------ */

st_status st_simulate(const st_state* state, const st_axes* axes,
                      int64_t shots, uint64_t seed, st_record** out) {
  return Guard([&] {
    Require(state != nullptr, "state handle is null");
    Require(axes != nullptr, "axes handle is null");
    Require(out != nullptr, "output handle pointer is null");
    *out = new st_record{
        spintomo::SimulateMeasurements(state->value, axes->value, shots, seed)};
  });
}

st_status st_record_create(const st_axes* axes, int64_t shots,
                           const int64_t* counts, st_record** out) {
  return Guard([&] {
    Require(axes != nullptr, "axes handle is null");
    Require(counts != nullptr, "count buffer is null");
    Require(out != nullptr, "output handle pointer is null");
    Require(shots >= 1, "records need shots >= 1");
    const int dim = axes->value.dim;
    const int rows = static_cast<int>(axes->value.axes.size());
    spintomo::MeasurementRecord record;
    record.axis_set = axes->value;
    record.shots = shots;
    record.counts.resize(rows, dim);
    for (int v = 0; v < rows; ++v) {
      std::int64_t total = 0;
      for (int mu = 0; mu < dim; ++mu) {
        const std::int64_t n = counts[v * dim + mu];
        Require(n >= 0, "counts must be nonnegative");
        record.counts(v, mu) = n;
        total += n;
      }
      Require(total == shots, "per-axis counts must sum to shots");
    }
    *out = new st_record{std::move(record)};
  });
}

int st_record_dim(const st_record* record) {
  return record == nullptr ? 0 : record->value.axis_set.dim;
}

int st_record_axis_count(const st_record* record) {
  return record == nullptr
             ? 0
             : static_cast<int>(record->value.axis_set.axes.size());
}

int64_t st_record_shots(const st_record* record) {
  return record == nullptr ? 0 : record->value.shots;
}

st_status st_record_count(const st_record* record, int axis, int outcome,
                          int64_t* out) {
  return Guard([&] {
    Require(record != nullptr, "record handle is null");
    Require(out != nullptr, "output pointer is null");
    Require(axis >= 0 && axis < record->value.counts.rows(),
            "axis index out of range");
    Require(outcome >= 0 && outcome < record->value.counts.cols(),
            "outcome index out of range");
    *out = record->value.counts(axis, outcome);
  });
}

st_status st_record_axes(const st_record* record, st_axes** out) {
  return Guard([&] {
    Require(record != nullptr, "record handle is null");
    Require(out != nullptr, "output handle pointer is null");
    *out = new st_axes{record->value.axis_set};
  });
}

st_status st_reconstruct(const st_record* record, st_state** out) {
  return Guard([&] {
    Require(record != nullptr, "record handle is null");
    Require(out != nullptr, "output handle pointer is null");
    const spintomo::MeasurementDesign design =
        spintomo::BuildMeasurementDesign(record->value.axis_set);
    const Eigen::MatrixXd estimates =
        spintomo::EstimatePolarization(record->value, design.gamma);
    *out = new st_state{spintomo::ReconstructState(design, estimates)};
  });
}

st_status st_exact_error(const st_axes* axes, const st_state* state,
                         int64_t shots, double* out) {
  return Guard([&] {
    Require(axes != nullptr, "axes handle is null");
    Require(state != nullptr, "state handle is null");
    Require(out != nullptr, "output pointer is null");
    const spintomo::MeasurementDesign design =
        spintomo::BuildMeasurementDesign(axes->value);
    *out = spintomo::ExactError(design, state->value, shots);
  });
}

void st_record_free(st_record* record) { delete record; }

/* ---- Searches ---------------------------------------------------------- */

st_status st_sweep_beta(int dim, int p_max, int candidates, int local_iters,
                        uint64_t seed, double time_budget, st_sweep** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle pointer is null");
    spintomo::SearchConfig config;
    config.dim = dim;
    config.candidates = candidates;
    config.local_iters = local_iters > 0 ? local_iters : 0;
    config.seed = seed;
    config.time_budget = time_budget;
    *out = new st_sweep{spintomo::BetaSweep(dim, p_max, config)};
  });
}

int st_sweep_size(const st_sweep* sweep) {
  return sweep == nullptr ? 0
                          : static_cast<int>(sweep->value.p_values.size());
}

st_status st_sweep_entry(const st_sweep* sweep, int index, int* p,
                         double* beta_tilde) {
  return Guard([&] {
    Require(sweep != nullptr, "sweep handle is null");
    Require(index >= 0 &&
                index < static_cast<int>(sweep->value.p_values.size()),
            "sweep index out of range");
    if (p != nullptr) *p = sweep->value.p_values[index];
    if (beta_tilde != nullptr) *beta_tilde = sweep->value.beta_tilde[index];
  });
}

st_status st_sweep_axes(const st_sweep* sweep, int index, st_axes** out) {
  return Guard([&] {
    Require(sweep != nullptr, "sweep handle is null");
    Require(out != nullptr, "output handle pointer is null");
    Require(index >= 0 &&
                index < static_cast<int>(sweep->value.best_axes.size()),
            "sweep index out of range");
    *out = new st_axes{sweep->value.best_axes[index]};
  });
}

void st_sweep_free(st_sweep* sweep) { delete sweep; }

st_status st_scan_theta(int dim, const double* grid, int grid_size,
                        st_scan** out) {
  return Guard([&] {
    Require(out != nullptr, "output handle pointer is null");
    Require(grid != nullptr, "grid buffer is null");
    Require(grid_size >= 1, "grid must not be empty");
    const std::vector<double> angles(grid, grid + grid_size);
    *out = new st_scan{spintomo::ScanTheta(dim, angles)};
  });
}

int st_scan_size(const st_scan* scan) {
  return scan == nullptr ? 0
                         : static_cast<int>(scan->value.theta_grid.size());
}

st_status st_scan_entry(const st_scan* scan, int index, double* theta,
                        double* eps) {
  return Guard([&] {
    Require(scan != nullptr, "scan handle is null");
    Require(index >= 0 &&
                index < static_cast<int>(scan->value.theta_grid.size()),
            "scan index out of range");
    if (theta != nullptr) *theta = scan->value.theta_grid[index];
    if (eps != nullptr) *eps = scan->value.eps_theta[index];
  });
}

st_status st_scan_optimum(const st_scan* scan, double* theta_opt) {
  return Guard([&] {
    Require(scan != nullptr, "scan handle is null");
    Require(theta_opt != nullptr, "output pointer is null");
    *theta_opt = scan->value.theta_opt;
  });
}

void st_scan_free(st_scan* scan) { delete scan; }

}  // extern "C"
