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

#include "spintomo/measurement.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spintomo/angular.hpp"

namespace spintomo {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

// Relative threshold below which a singular value counts as zero.
constexpr double kRankTolerance = 1e-10;

void CheckAxisSet(const AxisSet& axes) {
  if (axes.dim < 2) {
    throw std::invalid_argument("axis set needs qudit dimension >= 2");
  }
  if (axes.axes.empty()) {
    throw std::invalid_argument("axis set needs at least one axis");
  }
}

}  // namespace

Axis NormalizedAxis(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("axis angles must be finite");
  }
  // Fold the polar angle into [0, 2 pi) first; a value in (pi, 2 pi) names
  // the same direction as 2 pi - beta with the azimuth advanced by pi.
  beta = std::fmod(beta, kTwoPi);
  if (beta < 0.0) beta += kTwoPi;
  if (beta > kPi) {
    beta = kTwoPi - beta;
    alpha += kPi;
  }
  alpha = std::fmod(alpha, kTwoPi);
  if (alpha < 0.0) alpha += kTwoPi;
  return Axis{alpha, beta};
}

MeasurementBlock BuildMeasurementBlock(const AxisSet& axes, int ell) {
  CheckAxisSet(axes);
  if (ell < 0 || ell >= axes.dim) {
    throw std::invalid_argument("block degree must satisfy 0 <= ell <= d-1");
  }
  const int rows = static_cast<int>(axes.axes.size());
  const int cols = 2 * ell + 1;

  MeasurementBlock block;
  block.ell = ell;
  block.matrix.resize(rows, cols);
  for (int v = 0; v < rows; ++v) {
    const Axis& axis = axes.axes[v];
    for (int m = -ell; m <= ell; ++m) {
      block.matrix(v, ell + m) =
          WignerDAxis(ell, 0, -m, axis.alpha, axis.beta);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      block.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  block.singular_values = svd.singularValues();
  block.left_vectors = svd.matrixU();

  const double sigma_max =
      block.singular_values.size() > 0 ? block.singular_values(0) : 0.0;
  const double cutoff =
      kRankTolerance * sigma_max * static_cast<double>(std::max(rows, cols));
  block.rank = 0;
  for (int k = 0; k < block.singular_values.size(); ++k) {
    if (block.singular_values(k) > cutoff && block.singular_values(k) > 0.0) {
      ++block.rank;
    }
  }

  Eigen::VectorXd inverted = Eigen::VectorXd::Zero(block.singular_values.size());
  for (int k = 0; k < block.rank; ++k) {
    inverted(k) = 1.0 / block.singular_values(k);
  }
  block.pinv = svd.matrixV() * inverted.asDiagonal() *
               svd.matrixU().adjoint();
  return block;
}

Eigen::MatrixXcd FullMeasurementMatrix(const AxisSet& axes) {
  CheckAxisSet(axes);
  const int d = axes.dim;
  const int rows = static_cast<int>(axes.axes.size());
  Eigen::MatrixXcd full =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows) * d, d * d);
  for (int ell = 0; ell < d; ++ell) {
    const MeasurementBlock block = BuildMeasurementBlock(axes, ell);
    for (int v = 0; v < rows; ++v) {
      for (int m = -ell; m <= ell; ++m) {
        full(v * d + ell, CoefficientIndex(ell, m)) =
            block.matrix(v, ell + m);
      }
    }
  }
  return full;
}

MeasurementDesign BuildMeasurementDesign(const AxisSet& axes) {
  CheckAxisSet(axes);
  const int d = axes.dim;
  const double inf = std::numeric_limits<double>::infinity();

  MeasurementDesign design;
  design.axis_set = axes;
  design.blocks.reserve(d);
  design.s2.resize(d, inf);
  design.gamma = BuildGammaTable(d);
  design.feasible = true;

  for (int ell = 0; ell < d; ++ell) {
    design.blocks.push_back(BuildMeasurementBlock(axes, ell));
    const MeasurementBlock& block = design.blocks.back();
    if (block.rank < 2 * ell + 1) {
      design.s2[ell] = inf;
      design.feasible = false;
      continue;
    }
    double sum = 0.0;
    for (int k = 0; k < block.singular_values.size(); ++k) {
      const double sigma = block.singular_values(k);
      sum += 1.0 / (sigma * sigma);
    }
    design.s2[ell] = sum;
  }

  design.total_s2 = 0.0;
  design.epsilon2 = 0.0;
  for (int ell = 0; ell < d; ++ell) {
    design.total_s2 += design.s2[ell];
    const double g2 = design.gamma.gamma[ell] * design.gamma.gamma[ell];
    if (g2 == 0.0) continue;  // degree 0 never feeds the quantum scale
    design.epsilon2 = design.epsilon2 + g2 * design.s2[ell];
  }
  return design;
}

}  // namespace spintomo
