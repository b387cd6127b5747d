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

#ifndef SPINTOMO_POLARIZATION_HPP_
#define SPINTOMO_POLARIZATION_HPP_

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Polarization-operator layer for a spin qudit with d levels realizing a
// total spin s = (d-1)/2.
//
// Basis ordering, fixed everywhere in this library: the projection quantum
// number mu runs s, s-1, ..., -s, so row 0 of every matrix corresponds to
// mu = s (the highest weight).
//
// The polarization operators
//   T_{lm} entry (nu, mu) = sqrt((2l+1)/d) <s mu; l m | s nu>
// form an orthonormal operator basis under the trace inner product
// tr(X^dag Y); they are the qudit analogue of the spherical harmonics, carry
// a degree l that rotations preserve, and obey T_{lm}^dag = (-1)^m T_{l,-m}.
//
// Operator coefficient vectors: a d x d operator X expands as
// X = sum_{lm} x_{lm} T_{lm} with x_{lm} = tr(T_{lm}^dag X).  Flattened
// coefficient vectors use the index l^2 + l + m (degrees stacked in order,
// orders -l..l inside each degree).

namespace spintomo {

// Flat position of (ell, m) in a stacked coefficient vector of length d^2.
inline int CoefficientIndex(int ell, int m) { return ell * ell + ell + m; }

// The polarization operator T_{lm} for 0 <= ell <= d-1, |m| <= ell.
// Throws std::invalid_argument on an out-of-range index.
Eigen::MatrixXcd PolarizationOperator(int dim, int ell, int m);

// Spin operators in the same basis: Sz = diag(s, s-1, ..., -s) and ladder
// operators with <mu+-1|S+-|mu> = sqrt(s(s+1) - mu(mu+-1)).
struct SpinOperators {
  Eigen::MatrixXcd sz;
  Eigen::MatrixXcd splus;
  Eigen::MatrixXcd sminus;
};
SpinOperators BuildSpinOperators(int dim);

// Expansion of the rotated operator R(omega) T_{lm} R(omega)^dag in the
// unrotated operators of the same degree:
//   R T_{lm} R^dag = sum_n coeff[n + ell] T_{ln},
// with R(alpha, beta, gamma) = exp(-i alpha Sz) exp(-i beta Sy)
// exp(-i gamma Sz); the coefficient of T_{ln} is D^ell_{nm}(omega).  All
// other degrees vanish (degree is preserved under rotations).
Eigen::VectorXcd RotatePolarization(int dim, int ell, int m, double alpha,
                                    double beta, double gamma);

// Same expansion for the rotation taking the z axis to the measurement axis
// v = (alpha, beta), i.e. R(v) = R(alpha, beta, 0).
Eigen::VectorXcd RotatePolarizationToAxis(int dim, int ell, int m,
                                          double alpha, double beta);

// Structure constant f^{LM}_{l1 m1; l2 m2} of the operator product
// expansion T_{l1 m1} T_{l2 m2} = sum_{LM} f^{LM}_{l1 m1; l2 m2} T_{LM}:
//   f = (-1)^(2s + L) sqrt((2 l1 + 1)(2 l2 + 1))
//       <l1 m1; l2 m2 | L M> {l1 l2 L; s s s}.
// Zero unless M = m1 + m2 and |l1 - l2| <= L <= min(l1 + l2, d - 1).
// Values are assembled from the memoized coupling caches, so repeated
// evaluation is cheap.
double ProductCoefficient(int dim, int ell1, int m1, int ell2, int m2, int L,
                          int M);

// Diagonal weights t_{l mu} = <mu|T_{l,0}|mu> and the spectral-range
// factors Gamma_l = (max_mu t_{l mu} - min_mu t_{l mu}) / 2.
struct GammaTable {
  int dim = 0;
  // t(ell, i) with i the basis row (mu = s - i).
  Eigen::MatrixXd t;
  // Gamma_ell for ell = 0..d-1.
  std::vector<double> gamma;
  // Whether Gamma_ell coincides with max_mu t_{l mu}.  This holds whenever
  // ell is odd (t is then odd in mu); for even ell it can fail, so consumers
  // must not assume it.
  std::vector<bool> spread_equals_max;
};
GammaTable BuildGammaTable(int dim);

// The rotation operator R(alpha, beta, gamma) = exp(-i alpha Sz)
// exp(-i beta Sy) exp(-i gamma Sz) as a d x d unitary, with matrix elements
// <nu|R|mu> = D^s_{nu mu}(alpha, beta, gamma).
Eigen::MatrixXcd RotationOperator(int dim, double alpha, double beta,
                                  double gamma);

// Spin coherent state |s_v> = R(v)|s>, the highest-weight state rotated to
// point along v = (alpha, beta).
Eigen::VectorXcd CoherentState(int dim, double alpha, double beta);

// Phase-space (Husimi point) value <s_v| X |s_v>.
// Throws std::invalid_argument when X is not square.
std::complex<double> PhaseSpaceValue(const Eigen::MatrixXcd& X, double alpha,
                                     double beta);

// Coefficients x_{lm} = tr(T_{lm}^dag X), flattened by CoefficientIndex.
Eigen::VectorXcd ExpandInBasis(const Eigen::MatrixXcd& X);

// Inverse of ExpandInBasis: sum_{lm} coeffs[CoefficientIndex(l, m)] T_{lm}.
Eigen::MatrixXcd AssembleFromBasis(int dim, const Eigen::VectorXcd& coeffs);

}  // namespace spintomo

#endif  // SPINTOMO_POLARIZATION_HPP_
