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

#ifndef SPINTOMO_MEASUREMENT_HPP_
#define SPINTOMO_MEASUREMENT_HPP_

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spintomo/polarization.hpp"

// Measurement layer: axis sets, the per-degree measurement blocks they
// induce, and the error scales that grade a design.
//
// Measuring the spin projection along an axis v = (alpha, beta) yields the
// populations of the rotated basis R(v)|mu>.  Averaging the diagonal weights
// t_{l mu} over those populations estimates one linear functional of the
// state per degree l, and collecting the functionals for every axis of a set
// V gives, degree by degree, the linear system
//
//   estimate(v, l) = sum_m M_l(v, m) x_{lm},
//
// whose coefficient matrix is the degree-l measurement block built here.
// Its row for axis v is
//
//   M_l(v, ell + m) = D^l_{0,-m}(v) = sqrt(4 pi / (2l+1)) Y_{lm}(beta, alpha),
//
// a unit-norm row of rotated-basis overlap amplitudes.  A design resolves
// every operator degree (is "feasible") exactly when each block has full
// column rank 2l+1, which needs at least 2d-1 axes.
//
// Two scalar figures of merit summarize a design, both built from the block
// singular values sigma_{lk}:
//
//   classical scale  S_{Vl}^2 = sum_k sigma_{lk}^{-2},   S_V^2 = sum_l S_{Vl}^2
//   quantum scale    eps_V^2  = sum_l Gamma_l^2 S_{Vl}^2
//
// with Gamma_l the spectral-range factors of the diagonal weights.  For any
// feasible design eps_V^2 < S_V^2 / 2 (the degree-0 term contributes to S_V
// but never to eps_V).  Rank-deficient designs get infinite scales rather
// than an error so optimizers can score and reject them smoothly.

namespace spintomo {

// A measurement design whose blocks do not all reach full column rank was
// asked to do something only feasible designs can (e.g. reconstruct).
class InfeasibleDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two objects that must agree on the qudit dimension do not.
class DimensionMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A spin-projection axis, stored as azimuthal and polar angles in radians.
struct Axis {
  double alpha = 0.0;  // azimuthal, in [0, 2 pi)
  double beta = 0.0;   // polar, in [0, pi]
};

// Maps arbitrary finite angles onto the canonical ranges while preserving
// the direction they describe (a polar angle beyond pi folds back and turns
// the azimuth by pi).  Throws std::invalid_argument on non-finite input.
Axis NormalizedAxis(double alpha, double beta);

// An ordered collection of measurement axes for one qudit dimension.  Order
// matters: it is the row order of every measurement block.  Duplicates are
// allowed (extra rows never hurt rank).
struct AxisSet {
  int dim = 0;
  std::vector<Axis> axes;
};

// The degree-l measurement block of an axis set: the |V| x (2l+1) matrix
// described above together with its singular value decomposition, numerical
// rank, and Moore-Penrose pseudoinverse.  A singular value counts as zero
// when it falls below 1e-10 * sigma_max * max(|V|, 2l+1).
struct MeasurementBlock {
  int ell = 0;
  Eigen::MatrixXcd matrix;          // |V| x (2l+1)
  Eigen::VectorXd singular_values;  // descending, length min(|V|, 2l+1)
  Eigen::MatrixXcd left_vectors;    // |V| x min(|V|, 2l+1), thin-SVD U
  int rank = 0;
  Eigen::MatrixXcd pinv;            // (2l+1) x |V|, truncated at the rank
};

// Builds the degree-ell block of an axis set.  Throws std::invalid_argument
// if ell is outside 0..d-1 or the set is empty / has dim < 2.
MeasurementBlock BuildMeasurementBlock(const AxisSet& axes, int ell);

// The full (|V| d) x d^2 measurement matrix: row v * d + l carries the
// degree-l block row of axis v in the columns CoefficientIndex(l, m).  The
// blocks are this matrix's invariant factors, so its singular values are the
// multiset union of the block singular values; the full form exists as a
// cross-check oracle and for callers that want the system in one piece.
Eigen::MatrixXcd FullMeasurementMatrix(const AxisSet& axes);

// A fully analyzed measurement design: all d blocks plus the derived scales.
// Infeasible designs carry +infinity scales, never an error.
struct MeasurementDesign {
  AxisSet axis_set;
  std::vector<MeasurementBlock> blocks;  // ell = 0..d-1
  std::vector<double> s2;                // S_{Vl}^2 per degree
  double total_s2 = 0.0;                 // S_V^2
  double epsilon2 = 0.0;                 // eps_V^2
  GammaTable gamma;
  bool feasible = false;
};

// Builds every block of the axis set and computes the error scales.
// Throws std::invalid_argument on an empty set or dim < 2.
MeasurementDesign BuildMeasurementDesign(const AxisSet& axes);

}  // namespace spintomo

#endif  // SPINTOMO_MEASUREMENT_HPP_
