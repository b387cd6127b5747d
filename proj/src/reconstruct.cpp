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

#include "spintomo/reconstruct.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "spintomo/parallel.hpp"
#include "spintomo/rng.hpp"

namespace spintomo {

namespace {

// Squared-error values above this magnitude of negative are treated as an
// implementation bug rather than roundoff.
constexpr double kNegativeTolerance = 1e-9;

void CheckFeasible(const MeasurementDesign& design) {
  if (!design.feasible) {
    throw InfeasibleDesignError(
        "design has a rank-deficient block; reconstruction-side quantities "
        "are undefined");
  }
}

void CheckState(const Eigen::MatrixXcd& rho, int dim) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("state matrix must be square");
  }
  if (rho.rows() != dim) {
    throw DimensionMismatchError("state dimension does not match axis set");
  }
}

// Degree-l coefficient vector of the raw reconstruction from the estimate
// column: the pseudoinverse solve conjugated back into coefficient space,
// with the index flip m -> -m and sign (-1)^m that encodes Hermiticity.
Eigen::VectorXcd SolveDegree(const MeasurementBlock& block,
                             const Eigen::VectorXcd& estimates) {
  const int ell = block.ell;
  const Eigen::VectorXcd x = block.pinv.conjugate() * estimates;
  Eigen::VectorXcd coeffs(2 * ell + 1);
  for (int m = -ell; m <= ell; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    coeffs(ell + m) = sign * x(ell - m);
  }
  return coeffs;
}

// All d noise matrices of a feasible design.
std::vector<Eigen::MatrixXcd> AllNoiseMatrices(
    const MeasurementDesign& design) {
  std::vector<Eigen::MatrixXcd> noise;
  noise.reserve(design.blocks.size());
  for (int ell = 0; ell < static_cast<int>(design.blocks.size()); ++ell) {
    noise.push_back(NoiseMatrix(design, ell));
  }
  return noise;
}

// (1/n) sum_l [ <chi_l, c_l> - <c_l, N_l c_l> ] for a full coefficient
// vector c, the quadratic functional whose value on states is E_V^2.
double ErrorSquaredFromCoefficients(
    const Eigen::VectorXcd& coeffs,
    const std::vector<Eigen::MatrixXcd>& noise, const ChiVector& chi,
    std::int64_t shots) {
  const int d = chi.dim;
  std::complex<double> total = 0.0;
  for (int ell = 0; ell < d; ++ell) {
    const Eigen::VectorXcd c_ell = coeffs.segment(ell * ell, 2 * ell + 1);
    total += chi.per_degree[ell].dot(c_ell) - c_ell.dot(noise[ell] * c_ell);
  }
  return total.real() / static_cast<double>(shots);
}

double FinishError(double error_squared) {
  if (error_squared < 0.0) {
    if (error_squared < -kNegativeTolerance) {
      throw std::runtime_error(
          "exact error came out negative beyond roundoff; the input was not "
          "close to a state");
    }
    error_squared = 0.0;
  }
  return std::sqrt(error_squared);
}

}  // namespace

Eigen::VectorXd OutcomeProbabilities(const Eigen::MatrixXcd& rho,
                                     const Axis& axis) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) {
    throw std::invalid_argument("state matrix must be square with d >= 2");
  }
  const int d = static_cast<int>(rho.rows());
  const Eigen::MatrixXcd rotation =
      RotationOperator(d, axis.alpha, axis.beta, 0.0);
  Eigen::VectorXd p =
      (rotation.adjoint() * rho * rotation).diagonal().real();
  double total = 0.0;
  for (int mu = 0; mu < d; ++mu) {
    if (p(mu) < -1e-12) {
      throw std::invalid_argument(
          "outcome probabilities need a positive-semidefinite state");
    }
    if (p(mu) < 0.0) p(mu) = 0.0;
    total += p(mu);
  }
  if (total <= 0.0) {
    throw std::invalid_argument("state has vanishing trace along the axis");
  }
  return p / total;
}

MeasurementRecord SimulateMeasurements(const Eigen::MatrixXcd& rho,
                                       const AxisSet& axes,
                                       std::int64_t shots,
                                       std::uint64_t seed) {
  CheckState(rho, axes.dim);
  if (shots < 1) {
    throw std::invalid_argument("simulation needs shots >= 1");
  }
  const int r = static_cast<int>(axes.axes.size());
  if (r == 0) {
    throw std::invalid_argument("axis set needs at least one axis");
  }
  const int d = axes.dim;

  MeasurementRecord record;
  record.axis_set = axes;
  record.shots = shots;
  record.counts.resize(r, d);
  // One substream per axis: identical counts no matter how the loop is
  // scheduled.
  ParallelFor(r, [&](int v) {
    const Eigen::VectorXd p = OutcomeProbabilities(rho, axes.axes[v]);
    std::vector<double> weights(p.data(), p.data() + d);
    SplitMix64 rng = Substream(seed, static_cast<std::uint64_t>(v));
    const std::vector<std::int64_t> row =
        MultinomialSample(rng, shots, weights);
    for (int mu = 0; mu < d; ++mu) record.counts(v, mu) = row[mu];
  });
  return record;
}

Eigen::MatrixXd EstimatePolarization(const MeasurementRecord& record,
                                     const GammaTable& gamma) {
  const int d = record.axis_set.dim;
  if (gamma.dim != d) {
    throw DimensionMismatchError("gamma table dimension does not match record");
  }
  const int r = static_cast<int>(record.axis_set.axes.size());
  if (record.counts.rows() != r || record.counts.cols() != d) {
    throw DimensionMismatchError("count table shape does not match axis set");
  }
  if (record.shots < 1) {
    throw std::invalid_argument("record needs shots >= 1");
  }
  for (int v = 0; v < r; ++v) {
    if (record.counts.row(v).sum() != record.shots) {
      throw std::invalid_argument("count rows must sum to the shot count");
    }
  }
  const Eigen::MatrixXd frequencies =
      record.counts.cast<double>() / static_cast<double>(record.shots);
  return frequencies * gamma.t.transpose();
}

Eigen::MatrixXcd ReconstructState(const MeasurementDesign& design,
                                  const Eigen::MatrixXd& estimates) {
  CheckFeasible(design);
  const int d = design.axis_set.dim;
  const int r = static_cast<int>(design.axis_set.axes.size());
  if (estimates.rows() != r || estimates.cols() != d) {
    throw DimensionMismatchError("estimate table shape does not match design");
  }
  Eigen::VectorXcd coeffs(d * d);
  for (int ell = 0; ell < d; ++ell) {
    coeffs.segment(ell * ell, 2 * ell + 1) = SolveDegree(
        design.blocks[ell], estimates.col(ell).cast<std::complex<double>>());
  }
  const Eigen::MatrixXcd state = AssembleFromBasis(d, coeffs);
  // Hermitian up to roundoff already; make it exact.
  return 0.5 * (state + state.adjoint());
}

Eigen::MatrixXcd MleProject(const Eigen::MatrixXcd& estimate) {
  if (estimate.rows() != estimate.cols() || estimate.rows() < 2) {
    throw std::invalid_argument("projection needs a square matrix of d >= 2");
  }
  if ((estimate - estimate.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("projection needs a Hermitian estimate");
  }
  if (std::abs(estimate.trace().real() - 1.0) > 1e-6) {
    throw std::invalid_argument("projection needs a unit-trace estimate");
  }
  const int d = static_cast<int>(estimate.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (estimate + estimate.adjoint()));
  Eigen::VectorXd lambda = solver.eigenvalues();  // ascending

  // Zero the most negative eigenvalue and push its mass uniformly onto the
  // survivors, repeating until the smallest survivor is nonnegative.  This
  // is the Frobenius-nearest point of the spectral simplex.
  int zeroed = 0;
  double carried = 0.0;
  while (zeroed < d - 1 &&
         lambda(zeroed) + carried / (d - zeroed) < 0.0) {
    carried += lambda(zeroed);
    lambda(zeroed) = 0.0;
    ++zeroed;
  }
  const double shift = carried / (d - zeroed);
  for (int j = zeroed; j < d; ++j) lambda(j) += shift;

  const Eigen::MatrixXcd projected = solver.eigenvectors() *
                                     lambda.asDiagonal() *
                                     solver.eigenvectors().adjoint();
  return 0.5 * (projected + projected.adjoint());
}

Eigen::MatrixXcd NoiseMatrix(const MeasurementDesign& design, int ell) {
  CheckFeasible(design);
  if (ell < 0 || ell >= design.axis_set.dim) {
    throw std::invalid_argument("noise degree must satisfy 0 <= ell <= d-1");
  }
  const MeasurementBlock& block = design.blocks[ell];
  const Eigen::VectorXd weights =
      (block.pinv.adjoint() * block.pinv).diagonal().real();
  const Eigen::MatrixXcd noise =
      block.matrix.adjoint() * weights.asDiagonal() * block.matrix;
  return 0.5 * (noise + noise.adjoint());
}

ChiVector BuildChiVector(const MeasurementDesign& design) {
  CheckFeasible(design);
  const int d = design.axis_set.dim;
  const std::vector<Eigen::MatrixXcd> noise = AllNoiseMatrices(design);

  ChiVector chi;
  chi.dim = d;
  chi.per_degree.resize(d);
  for (int L = 0; L < d; ++L) {
    chi.per_degree[L] = Eigen::VectorXcd::Zero(2 * L + 1);
  }
  for (int L = 0; L < d; ++L) {
    Eigen::VectorXcd& out = chi.per_degree[L];
    for (int ell = 0; ell < d; ++ell) {
      for (int m = -ell; m <= ell; ++m) {
        for (int mp = -ell; mp <= ell; ++mp) {
          const int M = m + mp;
          if (std::abs(M) > L) continue;
          const double g = ProductCoefficient(d, ell, mp, ell, m, L, M);
          if (g == 0.0) continue;
          const double sign = (mp % 2 == 0) ? 1.0 : -1.0;
          out(L + M) +=
              std::conj(sign * noise[ell](ell - mp, ell + m)) * g;
        }
      }
    }
  }
  return chi;
}

double ExactError(const MeasurementDesign& design,
                  const Eigen::MatrixXcd& rho, std::int64_t shots) {
  CheckFeasible(design);
  CheckState(rho, design.axis_set.dim);
  if (shots < 1) {
    throw std::invalid_argument("exact error needs shots >= 1");
  }
  const std::vector<Eigen::MatrixXcd> noise = AllNoiseMatrices(design);
  const ChiVector chi = BuildChiVector(design);
  const Eigen::VectorXcd coeffs = ExpandInBasis(rho);
  return FinishError(
      ErrorSquaredFromCoefficients(coeffs, noise, chi, shots));
}

double ExactErrorFromVariances(const MeasurementDesign& design,
                               const Eigen::MatrixXd& variances,
                               std::int64_t shots) {
  CheckFeasible(design);
  const int d = design.axis_set.dim;
  const int r = static_cast<int>(design.axis_set.axes.size());
  if (variances.rows() != r || variances.cols() != d) {
    throw DimensionMismatchError("variance table shape does not match design");
  }
  if (shots < 1) {
    throw std::invalid_argument("exact error needs shots >= 1");
  }
  double total = 0.0;
  for (int ell = 0; ell < d; ++ell) {
    const MeasurementBlock& block = design.blocks[ell];
    const Eigen::VectorXd weights =
        (block.pinv.adjoint() * block.pinv).diagonal().real();
    for (int v = 0; v < r; ++v) {
      const double var = variances(v, ell);
      if (var < -1e-12) {
        throw std::invalid_argument("variances must be nonnegative");
      }
      total += weights(v) * std::max(var, 0.0);
    }
  }
  return FinishError(total / static_cast<double>(shots));
}

SigmaStarResult SigmaStar(const MeasurementDesign& design,
                          std::int64_t shots) {
  CheckFeasible(design);
  if (shots < 1) {
    throw std::invalid_argument("sigma* needs shots >= 1");
  }
  const int d = design.axis_set.dim;
  const std::vector<Eigen::MatrixXcd> noise = AllNoiseMatrices(design);
  const ChiVector chi = BuildChiVector(design);

  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(d * d);
  coeffs(0) = 1.0 / std::sqrt(static_cast<double>(d));
  for (int ell = 1; ell < d; ++ell) {
    coeffs.segment(ell * ell, 2 * ell + 1) =
        0.5 * noise[ell].ldlt().solve(chi.per_degree[ell]);
  }

  SigmaStarResult result;
  const Eigen::MatrixXcd state = AssembleFromBasis(d, coeffs);
  result.state = 0.5 * (state + state.adjoint());
  result.error = FinishError(
      ErrorSquaredFromCoefficients(coeffs, noise, chi, shots));
  return result;
}

}  // namespace spintomo
