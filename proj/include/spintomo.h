/* Copyright 2026 The spintomo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the spin-qudit tomography core.
 *
 * Everything observable through this header is plain C: opaque handles,
 * status codes, and flat numeric buffers.  All functions that can fail
 * return an st_status; outputs travel through trailing pointer arguments
 * and are written only on ST_OK.  Handles are created by st_*_create-style
 * calls and released with the matching st_*_free (free functions accept
 * NULL).  A human-readable description of the most recent failure on the
 * calling thread is available from st_last_error().
 *
 * Angle convention: an axis is (alpha, beta) = (azimuth, polar angle) in
 * radians.  Density matrices are row-major dim x dim complex arrays split
 * into real and imaginary parts; row/column index k corresponds to the
 * spin projection s - k along the quantization axis, where s = (dim-1)/2.
 *
 * Determinism: for fixed inputs and seeds every function here produces
 * bit-identical results, independent of the SPINTOMO_THREADS setting (the
 * one exception is st_sweep_beta with a positive time budget, which may
 * truncate differently from run to run).
 */

#ifndef SPINTOMO_H_
#define SPINTOMO_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum st_status {
  ST_OK = 0,
  ST_INVALID_ARGUMENT = 1,   /* malformed input (size, range, parse) */
  ST_INFEASIBLE = 2,         /* rank-deficient measurement design */
  ST_DIMENSION_MISMATCH = 3, /* inputs describe different qudit sizes */
  ST_INTERNAL = 4            /* unexpected failure; see st_last_error() */
} st_status;

typedef struct st_axes st_axes;     /* a set of spin-projection axes     */
typedef struct st_design st_design; /* scored measurement design         */
typedef struct st_state st_state;   /* dim x dim density matrix          */
typedef struct st_record st_record; /* projective measurement counts     */
typedef struct st_sweep st_sweep;   /* axis-count sweep results          */
typedef struct st_scan st_scan;     /* polar-angle scan results          */

/* Library version as "major.minor.patch". */
const char* st_version(void);

/* Description of the last failure observed on this thread; empty string
 * when the previous call succeeded.  The pointer stays valid until the
 * next spintomo call on the same thread. */
const char* st_last_error(void);

/* ---- Axis sets ------------------------------------------------------- */

/* `count` axes drawn from the uniform sphere measure (substream-seeded:
 * axis i depends only on seed and i). */
st_status st_axes_random(int dim, int count, uint64_t seed, st_axes** out);

/* The equal-azimuth family: 2*dim-1 axes at azimuths 2*pi*k/(2*dim-1),
 * all at polar angle theta (radians, in [0, pi]). */
st_status st_axes_newton_young(int dim, double theta, st_axes** out);

/* Axis set from caller-provided angles (radians; finite, otherwise
 * unrestricted).  alphas/betas each hold `count` values. */
st_status st_axes_create(int dim, const double* alphas, const double* betas,
                         int count, st_axes** out);

/* Derivative-free local search minimizing the quantum error scale over
 * all 2*count angles.  iters <= 0 selects a default proportional to the
 * axis count.  Returns a new handle; the input is never modified. */
st_status st_axes_optimize(const st_axes* axes, int iters, st_axes** out);

/* Trivial accessors; return 0 on a NULL handle. */
int st_axes_dim(const st_axes* axes);
int st_axes_count(const st_axes* axes);

st_status st_axes_get(const st_axes* axes, int index, double* alpha,
                      double* beta);

void st_axes_free(st_axes* axes);

/* ---- Measurement designs --------------------------------------------- */

/* Scores an axis set: per-degree scales, feasibility, and the quantum
 * error scale.  Infeasible sets are data here, not errors. */
st_status st_design_create(const st_axes* axes, st_design** out);

/* 1 when every degree block has full column rank, else 0 (0 on NULL). */
int st_design_feasible(const st_design* design);

/* Number of tensor degrees, i.e. 2s+1 = dim of the underlying qudit
 * (0 on NULL). */
int st_design_degree_count(const st_design* design);

/* Per-degree classical scale S_ell^2 (+infinity when rank deficient) and
 * sensitivity span Gamma_ell.  Either output pointer may be NULL. */
st_status st_design_degree_info(const st_design* design, int ell,
                                double* scale2, double* gamma);

/* Classical error scale S_V^2 = sum of per-degree scales (may be +inf). */
st_status st_design_total_scale2(const st_design* design, double* out);

/* Squared quantum error scale eps_V^2 (may be +inf). */
st_status st_design_epsilon2(const st_design* design, double* out);

void st_design_free(st_design* design);

/* ---- States ----------------------------------------------------------- */

/* Density matrix from row-major real/imaginary parts (each dim*dim).
 * Entries must be finite; Hermiticity is the caller's business (the
 * reconstruction pipeline produces Hermitian output but intermediate
 * estimates need not be positive). */
st_status st_state_create(int dim, const double* re, const double* im,
                          st_state** out);

/* The maximally mixed state I/dim. */
st_status st_state_mixed(int dim, st_state** out);

int st_state_dim(const st_state* state);

st_status st_state_get(const st_state* state, int row, int col, double* re,
                       double* im);

/* Frobenius distance ||a - b||_F. */
st_status st_state_distance(const st_state* a, const st_state* b,
                            double* out);

/* Maximum-likelihood projection: closest density matrix (Frobenius sense)
 * with nonnegative spectrum and unit trace.  Input must be Hermitian with
 * unit trace. */
st_status st_state_project(const st_state* state, st_state** out);

void st_state_free(st_state* state);

/* ---- Simulation and reconstruction ------------------------------------ */

/* Samples `shots` projective measurements along every axis.  Counts for
 * axis v depend only on (seed, v), so records are reproducible across
 * thread counts. */
st_status st_simulate(const st_state* state, const st_axes* axes,
                      int64_t shots, uint64_t seed, st_record** out);

/* Record from caller-provided counts: row-major axis-major buffer of
 * st_axes_count(axes) * dim nonnegative entries, each row summing to
 * `shots`. */
st_status st_record_create(const st_axes* axes, int64_t shots,
                           const int64_t* counts, st_record** out);

int st_record_dim(const st_record* record);
int st_record_axis_count(const st_record* record);
int64_t st_record_shots(const st_record* record);

st_status st_record_count(const st_record* record, int axis, int outcome,
                          int64_t* out);

/* Copy of the record's axis set. */
st_status st_record_axes(const st_record* record, st_axes** out);

/* Linear-inversion estimate from a record: Hermitian, unit trace, exactly
 * the true state in the infinite-shot limit.  Fails with ST_INFEASIBLE
 * when the record's axes cannot determine every degree. */
st_status st_reconstruct(const st_record* record, st_state** out);

/* Expected squared Frobenius error of the estimator, sqrt'ed: the exact
 * a-priori error E_V(state) for `shots` measurements per axis.  Evaluating
 * it at a reconstructed state gives the a-posteriori estimate. */
st_status st_exact_error(const st_axes* axes, const st_state* state,
                         int64_t shots, double* out);

void st_record_free(st_record* record);

/* ---- Searches ---------------------------------------------------------- */

/* Measurement-adjusted sweep over p = 0..p_max extra axes.  candidates
 * random restarts per step (a slice extends the previous winner);
 * local_iters > 0 adds a simplex polish per candidate; time_budget > 0
 * truncates (seconds).  Entry k reports the running-best score
 * eps_V^2 * |V| with |V| = 2*dim-1+p. */
st_status st_sweep_beta(int dim, int p_max, int candidates, int local_iters,
                        uint64_t seed, double time_budget, st_sweep** out);

int st_sweep_size(const st_sweep* sweep);

st_status st_sweep_entry(const st_sweep* sweep, int index, int* p,
                         double* beta_tilde);

/* Copy of the best axis set found at entry `index`. */
st_status st_sweep_axes(const st_sweep* sweep, int index, st_axes** out);

void st_sweep_free(st_sweep* sweep);

/* Quantum error scale of the equal-azimuth family over a strictly
 * increasing polar-angle grid (radians in [0, pi]); the best grid point is
 * refined by golden-section search. */
st_status st_scan_theta(int dim, const double* grid, int grid_size,
                        st_scan** out);

int st_scan_size(const st_scan* scan);

/* eps may be +infinity (coplanar grid points). */
st_status st_scan_entry(const st_scan* scan, int index, double* theta,
                        double* eps);

st_status st_scan_optimum(const st_scan* scan, double* theta_opt);

void st_scan_free(st_scan* scan);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPINTOMO_H_ */
