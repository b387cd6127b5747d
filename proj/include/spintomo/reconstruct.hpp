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

#ifndef SPINTOMO_RECONSTRUCT_HPP_
#define SPINTOMO_RECONSTRUCT_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spintomo/measurement.hpp"
#include "spintomo/polarization.hpp"

// Reconstruction layer: shot-noise-limited measurement simulation, state
// recovery from projection statistics, physicality correction, and the
// exact reconstruction-error functional.
//
// The experiment this models: prepare n copies of rho per axis, measure the
// spin projection along each axis v of a set V, and keep the outcome counts.
// The empirical outcome frequencies give, per axis and degree, the estimate
//
//   estimate(v, l) = sum_mu t_{l mu} counts[v][mu] / n,
//
// an unbiased estimator of the rotated-operator expectation <T_{vl,0}>_rho.
// Solving each degree's linear system by pseudoinverse and reassembling the
// operator yields the raw reconstruction rho~ (Hermitian, unit trace, but
// possibly with negative eigenvalues at finite n); eigenvalue truncation
// projects it to the closest physical state.
//
// Error analysis happens in closed form.  The shot-noise covariance of the
// estimates propagates through the pseudoinverses into the expected squared
// Frobenius error of the raw reconstruction,
//
//   E_V(rho)^2 = E[ ||rho~ - rho||_F^2 ]
//             = (1/n) sum_l [ <chi_{Vl}, rho_l> - <rho_l, N_{Vl} rho_l> ],
//
// where rho_l is the degree-l coefficient vector of rho, the noise matrices
// N_{Vl} are Hermitian positive-definite condensates of the block SVDs, and
// the chi vectors fold the operator product structure into the linear term.
// The same functional evaluated on a reconstruction gives the a posteriori
// error estimate, and its unique maximizer over unit-trace Hermitian
// operators - generally not a physical state - caps the error of any
// experiment on any state.

namespace spintomo {

// Nonnegative outcome counts, one row per axis, one column per projection
// value mu = s .. -s.
using CountMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// The outcome statistics of one simulated (or imported) experiment: `shots`
// measurements along every axis, counts[v][mu] of each projection outcome.
// Every row of counts sums to shots.
struct MeasurementRecord {
  AxisSet axis_set;
  std::int64_t shots = 0;
  CountMatrix counts;
};

// Probabilities of the d projection outcomes when measuring rho along the
// axis: p_mu = <mu_v| rho |mu_v> with |mu_v> = R(v)|mu>.  Roundoff-level
// negative entries (> -1e-12) are clipped to zero and the vector is
// renormalized; anything more negative means rho was not a state and throws
// std::invalid_argument.
Eigen::VectorXd OutcomeProbabilities(const Eigen::MatrixXcd& rho,
                                     const Axis& axis);

// Draws the outcome counts of `shots` measurements along every axis of the
// set.  Axis v consumes the substream Substream(seed, v) of the master seed,
// so records are reproducible bit for bit and independent of evaluation
// order or thread count.  Throws DimensionMismatchError when rho and the
// axis set disagree and std::invalid_argument when shots < 1.
MeasurementRecord SimulateMeasurements(const Eigen::MatrixXcd& rho,
                                       const AxisSet& axes,
                                       std::int64_t shots,
                                       std::uint64_t seed);

// The estimate table described above: entry (v, l) averages the diagonal
// weights t_{l mu} over the empirical frequencies of axis v.  Column 0 is
// identically 1/sqrt(d).  Throws DimensionMismatchError when the gamma
// table and record disagree.
Eigen::MatrixXd EstimatePolarization(const MeasurementRecord& record,
                                     const GammaTable& gamma);

// Solves every degree's linear system with the design's block pseudoinverse
// and reassembles the operator.  The result is Hermitian by construction
// with unit trace for estimates that came from a record; it is generally
// not positive semidefinite at finite n.  Throws InfeasibleDesignError when
// some block lacks full column rank, DimensionMismatchError on a shape
// mismatch.
Eigen::MatrixXcd ReconstructState(const MeasurementDesign& design,
                                  const Eigen::MatrixXd& estimates);

// Projects a unit-trace Hermitian estimate to the nearest density matrix in
// Frobenius norm: eigendecompose, then repeatedly zero the most negative
// eigenvalue and spread its mass uniformly over the others until all are
// nonnegative.  Physical inputs come back unchanged.
Eigen::MatrixXcd MleProject(const Eigen::MatrixXcd& estimate);

// The degree-l noise matrix N_{Vl} = M^dag diag[ pinv^dag pinv ] M, the
// (2l+1) x (2l+1) Hermitian positive-definite kernel through which shot
// noise enters E_V.  Throws InfeasibleDesignError on infeasible designs.
Eigen::MatrixXcd NoiseMatrix(const MeasurementDesign& design, int ell);

// The chi vectors: per_degree[L] has length 2L+1, entry M + L holding
//   chi_{VL,M} = sum_l sum_{m'+m=M} conj[(-1)^{m'} N_{Vl}(-m', m)]
//                                   f^{L,M}_{l m'; l m},
// with f the operator-product coefficients.  They obey the conjugation
// symmetry chi_{L,-M} = (-1)^M conj(chi_{L,M}).
struct ChiVector {
  int dim = 0;
  std::vector<Eigen::VectorXcd> per_degree;
};
ChiVector BuildChiVector(const MeasurementDesign& design);

// The exact expected reconstruction error E_V(rho) >= 0 described above for
// n = shots measurements per axis.  Also accepts a (near-)Hermitian
// reconstruction in place of rho, which yields the a posteriori estimate.
// Tiny negative squared values (> -1e-9, pure roundoff) clamp to zero;
// anything more negative throws std::runtime_error, since for states the
// quantity is a variance.
double ExactError(const MeasurementDesign& design,
                  const Eigen::MatrixXcd& rho, std::int64_t shots);

// General-covariance form of the same functional: the caller supplies the
// per-axis, per-degree variances var(v, l) of the single-shot estimates and
// gets sqrt( (1/n) sum_{v,l} [pinv^dag pinv]_{vv} var(v, l) ).  Covariances
// across axes are taken to vanish (independent experiments).
double ExactErrorFromVariances(const MeasurementDesign& design,
                               const Eigen::MatrixXd& variances,
                               std::int64_t shots);

// The error-maximizing unit-trace Hermitian operator sigma* (degree-l > 0
// coefficients N^{-1} chi / 2, fixed trace component 1/sqrt(d)) and its
// error value E_V(sigma*).  For every state rho,
//   E_V(rho)^2 = E_V(sigma*)^2 - (1/n) sum_l <delta_l, N_{Vl} delta_l>
// with delta = rho - sigma*, so E_V(sigma*) bounds every E_V(rho).  The
// operator is generally not a physical state.
struct SigmaStarResult {
  Eigen::MatrixXcd state;
  double error = 0.0;
};
SigmaStarResult SigmaStar(const MeasurementDesign& design,
                          std::int64_t shots);

}  // namespace spintomo

#endif  // SPINTOMO_RECONSTRUCT_HPP_
