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

#include "spintomo/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spintomo/angular.hpp"

namespace spintomo {

namespace {

void CheckDimension(int dim) {
  if (dim < 2) throw std::invalid_argument("qudit dimension must be >= 2");
}

void CheckIndex(int dim, int ell, int m) {
  CheckDimension(dim);
  if (ell < 0 || ell > dim - 1 || std::abs(m) > ell) {
    throw std::invalid_argument("polarization index out of range");
  }
}

}  // namespace

Eigen::MatrixXcd PolarizationOperator(int dim, int ell, int m) {
  CheckIndex(dim, ell, m);
  const int two_s = dim - 1;
  const double scale = std::sqrt((2.0 * ell + 1.0) / dim);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
  // Entry (nu, mu) is nonzero only on the diagonal nu = mu + m, i.e. row
  // col - m in basis indices.
  for (int col = 0; col < dim; ++col) {
    const int row = col - m;
    if (row < 0 || row >= dim) continue;
    const int two_mu = two_s - 2 * col;
    const int two_nu = two_mu + 2 * m;
    t(row, col) =
        scale * ClebschGordan2(two_s, two_mu, 2 * ell, 2 * m, two_s, two_nu);
  }
  return t;
}

SpinOperators BuildSpinOperators(int dim) {
  CheckDimension(dim);
  const int two_s = dim - 1;
  SpinOperators spin;
  spin.sz = Eigen::MatrixXcd::Zero(dim, dim);
  spin.splus = Eigen::MatrixXcd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const int two_mu = two_s - 2 * col;
    spin.sz(col, col) = 0.5 * two_mu;
    if (col > 0) {
      spin.splus(col - 1, col) =
          0.5 * std::sqrt(static_cast<double>(two_s * (two_s + 2) -
                                              two_mu * (two_mu + 2)));
    }
  }
  spin.sminus = spin.splus.adjoint();
  return spin;
}

Eigen::VectorXcd RotatePolarization(int dim, int ell, int m, double alpha,
                                    double beta, double gamma) {
  CheckIndex(dim, ell, m);
  Eigen::VectorXcd coeffs(2 * ell + 1);
  for (int n = -ell; n <= ell; ++n) {
    coeffs(n + ell) = WignerD(ell, n, m, alpha, beta, gamma);
  }
  return coeffs;
}

Eigen::VectorXcd RotatePolarizationToAxis(int dim, int ell, int m,
                                          double alpha, double beta) {
  return RotatePolarization(dim, ell, m, alpha, beta, 0.0);
}

double ProductCoefficient(int dim, int ell1, int m1, int ell2, int m2, int L,
                          int M) {
  CheckIndex(dim, ell1, m1);
  CheckIndex(dim, ell2, m2);
  CheckIndex(dim, L, M);
  if (m1 + m2 != M) return 0.0;
  const int two_s = dim - 1;
  const double sign = ((two_s + L) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt((2.0 * ell1 + 1.0) * (2.0 * ell2 + 1.0)) *
         ClebschGordan(ell1, m1, ell2, m2, L, M) *
         Wigner6j2(2 * ell1, 2 * ell2, 2 * L, two_s, two_s, two_s);
}

GammaTable BuildGammaTable(int dim) {
  CheckDimension(dim);
  const int two_s = dim - 1;
  GammaTable table;
  table.dim = dim;
  table.t.resize(dim, dim);
  table.gamma.resize(dim);
  table.spread_equals_max.resize(dim);
  for (int ell = 0; ell < dim; ++ell) {
    const double scale = std::sqrt((2.0 * ell + 1.0) / dim);
    double t_max = -2.0;
    double t_min = 2.0;
    for (int i = 0; i < dim; ++i) {
      const int two_mu = two_s - 2 * i;
      const double value =
          scale * ClebschGordan2(two_s, two_mu, 2 * ell, 0, two_s, two_mu);
      table.t(ell, i) = value;
      t_max = std::max(t_max, value);
      t_min = std::min(t_min, value);
    }
    table.gamma[ell] = 0.5 * (t_max - t_min);
    table.spread_equals_max[ell] = std::abs(table.gamma[ell] - t_max) < 1e-14;
  }
  return table;
}

Eigen::MatrixXcd RotationOperator(int dim, double alpha, double beta,
                                  double gamma) {
  CheckDimension(dim);
  const int two_s = dim - 1;
  Eigen::MatrixXcd rotation(dim, dim);
  for (int row = 0; row < dim; ++row) {
    const int two_nu = two_s - 2 * row;
    for (int col = 0; col < dim; ++col) {
      const int two_mu = two_s - 2 * col;
      const double amplitude = WignerSmallD2(two_s, two_nu, two_mu, beta);
      const double phase = -0.5 * (two_nu * alpha + two_mu * gamma);
      rotation(row, col) =
          amplitude * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return rotation;
}

Eigen::VectorXcd CoherentState(int dim, double alpha, double beta) {
  CheckDimension(dim);
  const int two_s = dim - 1;
  Eigen::VectorXcd state(dim);
  // Component mu of R(alpha, beta, 0)|s> is D^s_{mu, s} = e^{-i mu alpha}
  // d^s_{mu, s}(beta).
  for (int i = 0; i < dim; ++i) {
    const int two_mu = two_s - 2 * i;
    const double amplitude = WignerSmallD2(two_s, two_mu, two_s, beta);
    const double phase = -0.5 * two_mu * alpha;
    state(i) =
        amplitude * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return state;
}

std::complex<double> PhaseSpaceValue(const Eigen::MatrixXcd& X, double alpha,
                                     double beta) {
  if (X.rows() != X.cols() || X.rows() < 2) {
    throw std::invalid_argument("phase-space value needs a square operator");
  }
  const Eigen::VectorXcd state =
      CoherentState(static_cast<int>(X.rows()), alpha, beta);
  return state.dot(X * state);  // Eigen's dot conjugates the left factor
}

Eigen::VectorXcd ExpandInBasis(const Eigen::MatrixXcd& X) {
  if (X.rows() != X.cols() || X.rows() < 2) {
    throw std::invalid_argument("basis expansion needs a square operator");
  }
  const int dim = static_cast<int>(X.rows());
  Eigen::VectorXcd coeffs(dim * dim);
  for (int ell = 0; ell < dim; ++ell) {
    for (int m = -ell; m <= ell; ++m) {
      // tr(T_{lm}^dag X) touches only the nu = mu + m diagonal of X.
      coeffs(CoefficientIndex(ell, m)) =
          (PolarizationOperator(dim, ell, m).adjoint() * X).trace();
    }
  }
  return coeffs;
}

Eigen::MatrixXcd AssembleFromBasis(int dim, const Eigen::VectorXcd& coeffs) {
  CheckDimension(dim);
  if (coeffs.size() != static_cast<long>(dim) * dim) {
    throw std::invalid_argument("coefficient vector has wrong length");
  }
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(dim, dim);
  for (int ell = 0; ell < dim; ++ell) {
    for (int m = -ell; m <= ell; ++m) {
      x += coeffs(CoefficientIndex(ell, m)) *
           PolarizationOperator(dim, ell, m);
    }
  }
  return x;
}

}  // namespace spintomo
