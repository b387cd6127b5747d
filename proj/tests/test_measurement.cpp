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

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "oracles.hpp"
#include "spintomo/polarization.hpp"

namespace {

using oracles::AngleSampler;
using spintomo::Axis;
using spintomo::AxisSet;
using spintomo::BuildMeasurementBlock;
using spintomo::BuildMeasurementDesign;
using spintomo::CoefficientIndex;
using spintomo::FullMeasurementMatrix;
using spintomo::MeasurementBlock;
using spintomo::MeasurementDesign;
using spintomo::NormalizedAxis;

constexpr double kPi = std::numbers::pi;

using oracles::RandomAxisSet;

// Multiset of every block singular value of the set, sorted descending.
std::vector<double> CollectBlockSpectrum(const AxisSet& set) {
  std::vector<double> sigma;
  for (int ell = 0; ell < set.dim; ++ell) {
    const MeasurementBlock block = BuildMeasurementBlock(set, ell);
    for (int k = 0; k < block.singular_values.size(); ++k) {
      sigma.push_back(block.singular_values(k));
    }
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  return sigma;
}

}  // namespace

TEST_CASE("axis normalization folds angles onto the canonical ranges") {
  const Axis plain = NormalizedAxis(0.3, 0.5);
  CHECK(plain.alpha == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(plain.beta == doctest::Approx(0.5).epsilon(1e-14));

  const Axis wrapped = NormalizedAxis(0.3 + 2.0 * kPi, 0.5);
  CHECK(wrapped.alpha == doctest::Approx(0.3).epsilon(1e-12));

  // A negative polar angle names the direction mirrored through the z axis.
  const Axis folded = NormalizedAxis(0.4, -0.2);
  CHECK(folded.beta == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(folded.alpha == doctest::Approx(0.4 + kPi).epsilon(1e-12));

  const Axis south = NormalizedAxis(1.0, kPi);
  CHECK(south.beta == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(south.alpha == doctest::Approx(1.0).epsilon(1e-14));

  // Normalization must preserve the physical direction.
  AngleSampler rng(811u);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = rng.Uniform(-15.0, 15.0);
    const double beta = rng.Uniform(-15.0, 15.0);
    const Axis axis = NormalizedAxis(alpha, beta);
    CHECK(axis.alpha >= 0.0);
    CHECK(axis.alpha < 2.0 * kPi);
    CHECK(axis.beta >= 0.0);
    CHECK(axis.beta <= kPi);
    const Eigen::Vector3d raw = oracles::DirectionVector(alpha, beta);
    const Eigen::Vector3d canon =
        oracles::DirectionVector(axis.alpha, axis.beta);
    CHECK((raw - canon).norm() < 1e-12);
  }

  CHECK_THROWS_AS(NormalizedAxis(std::nan(""), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(
      NormalizedAxis(0.0, std::numeric_limits<double>::infinity()),
      std::invalid_argument);
}

TEST_CASE("degree-0 block is a ones column with singular value sqrt(r)") {
  AngleSampler rng(391u);
  for (int r : {1, 3, 7}) {
    const AxisSet set = RandomAxisSet(rng, 4, r);
    const MeasurementBlock block = BuildMeasurementBlock(set, 0);
    REQUIRE(block.matrix.rows() == r);
    REQUIRE(block.matrix.cols() == 1);
    for (int v = 0; v < r; ++v) {
      CHECK(std::abs(block.matrix(v, 0) - 1.0) < 1e-15);
    }
    REQUIRE(block.singular_values.size() == 1);
    CHECK(block.singular_values(0) ==
          doctest::Approx(std::sqrt(double(r))).epsilon(1e-14));
    CHECK(block.rank == 1);
  }
}

TEST_CASE("block rows are rescaled spherical harmonics with unit norm") {
  const int d = 5;
  AngleSampler rng(4107u);
  const AxisSet set = RandomAxisSet(rng, d, 6);
  for (int ell = 0; ell < d; ++ell) {
    const MeasurementBlock block = BuildMeasurementBlock(set, ell);
    for (int v = 0; v < 6; ++v) {
      const Axis& axis = set.axes[v];
      for (int m = -ell; m <= ell; ++m) {
        const std::complex<double> expected =
            std::sqrt(4.0 * kPi / (2 * ell + 1)) *
            oracles::SphericalY(ell, m, axis.beta, axis.alpha);
        CHECK(std::abs(block.matrix(v, ell + m) - expected) < 1e-12);
      }
      CHECK(block.matrix.row(v).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("full measurement matrix mirrors the blocks") {
  AngleSampler rng(77u);
  for (int d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      const int r = 2 * d - 1 + trial % 3;
      const AxisSet set = RandomAxisSet(rng, d, r);
      const Eigen::MatrixXcd full = FullMeasurementMatrix(set);
      REQUIRE(full.rows() == r * d);
      REQUIRE(full.cols() == d * d);

      // Row (v, ell) carries the degree-ell block row of axis v in the
      // columns of that degree, and nothing anywhere else.
      for (int v = 0; v < r; ++v) {
        for (int ell = 0; ell < d; ++ell) {
          CHECK(full.row(v * d + ell).norm() ==
                doctest::Approx(1.0).epsilon(1e-12));
          for (int other = 0; other < d; ++other) {
            if (other == ell) continue;
            for (int m = -other; m <= other; ++m) {
              CHECK(std::abs(full(v * d + ell,
                                  CoefficientIndex(other, m))) == 0.0);
            }
          }
        }
      }

      // Block-diagonal structure: the full spectrum is the multiset union
      // of the block spectra.
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(full);
      const Eigen::VectorXd full_sigma = svd.singularValues();
      const std::vector<double> union_sigma = CollectBlockSpectrum(set);
      REQUIRE(static_cast<int>(union_sigma.size()) ==
              std::min<int>(r * d, d * d));
      for (int k = 0; k < full_sigma.size(); ++k) {
        CHECK(std::abs(full_sigma(k) - union_sigma[k]) < 1e-10);
      }
    }
  }
}

TEST_CASE("axes confined to one plane cannot resolve the top degrees") {
  AngleSampler rng(2026u);
  for (int d = 2; d <= 5; ++d) {
    AxisSet set;
    set.dim = d;
    for (int i = 0; i < 3 * d; ++i) {
      set.axes.push_back(Axis{rng.Uniform(0.0, 2.0 * kPi), kPi / 2.0});
    }
    // At beta = pi/2 the row entries with ell + m odd vanish identically,
    // so every degree ell >= 1 loses ell of its 2 ell + 1 columns.
    for (int ell = 1; ell < d; ++ell) {
      const MeasurementBlock block = BuildMeasurementBlock(set, ell);
      CHECK(block.rank == ell + 1);
    }
    const MeasurementDesign design = BuildMeasurementDesign(set);
    CHECK_FALSE(design.feasible);
    CHECK(std::isinf(design.total_s2));
    CHECK(std::isinf(design.epsilon2));
    CHECK(design.s2[0] == doctest::Approx(1.0 / (3 * d)).epsilon(1e-13));
    for (int ell = 1; ell < d; ++ell) CHECK(std::isinf(design.s2[ell]));
  }

  // One axis can never span the operator space of a qudit.
  AxisSet lone;
  lone.dim = 2;
  lone.axes.push_back(Axis{0.7, 1.1});
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(FullMeasurementMatrix(lone));
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) > 1e-12) ++rank;
  }
  CHECK(rank == 2);
}

TEST_CASE("random axis counts straddle the feasibility threshold") {
  AngleSampler rng(515u);
  for (int d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 5; ++trial) {
      const AxisSet enough = RandomAxisSet(rng, d, 2 * d - 1);
      CHECK(BuildMeasurementDesign(enough).feasible);

      // One axis short: the top block has at most 2d-2 rows.
      const AxisSet short_set = RandomAxisSet(rng, d, 2 * d - 2);
      const MeasurementDesign short_design = BuildMeasurementDesign(short_set);
      CHECK_FALSE(short_design.feasible);
      CHECK(std::isinf(short_design.s2[d - 1]));
    }
    // A single degree is resolvable with 2 ell + 1 generic axes.
    for (int ell = 1; ell < d; ++ell) {
      const AxisSet set = RandomAxisSet(rng, d, 2 * ell + 1);
      CHECK(BuildMeasurementBlock(set, ell).rank == 2 * ell + 1);
    }
  }
}

TEST_CASE("scales of the qubit coordinate-axes design match hand values") {
  AxisSet set;
  set.dim = 2;
  set.axes.push_back(Axis{0.0, 0.0});            // z
  set.axes.push_back(Axis{0.0, kPi / 2.0});      // x
  set.axes.push_back(Axis{kPi / 2.0, kPi / 2.0});  // y
  const MeasurementDesign design = BuildMeasurementDesign(set);
  REQUIRE(design.feasible);
  // Degree 1: the three rows form a matrix with orthonormal columns, so all
  // three singular values are 1 and S_{V1}^2 = 3.  Degree 0: S_{V0}^2 = 1/3.
  CHECK(design.s2[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(design.s2[1] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(design.total_s2 == doctest::Approx(10.0 / 3.0).epsilon(1e-13));
  // Gamma_1 = 1/sqrt(2) for a qubit, so eps^2 = 3/2 < (10/3)/2.
  CHECK(design.epsilon2 == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(design.epsilon2 < 0.5 * design.total_s2);
}

TEST_CASE("every feasible design obeys the quantum-scale bound") {
  AngleSampler rng(909u);
  for (int d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      const AxisSet set = RandomAxisSet(rng, d, 2 * d - 1 + trial);
      const MeasurementDesign design = BuildMeasurementDesign(set);
      if (!design.feasible) continue;
      CHECK(design.epsilon2 < 0.5 * design.total_s2);
      CHECK(design.total_s2 > 0.0);
      CHECK(design.s2[0] ==
            doctest::Approx(1.0 / double(set.axes.size())).epsilon(1e-13));
    }
  }
}

TEST_CASE("a global rotation of the axis set leaves all scales unchanged") {
  AngleSampler rng(6161u);
  const int d = 4;
  const AxisSet set = RandomAxisSet(rng, d, 2 * d - 1);
  const MeasurementDesign before = BuildMeasurementDesign(set);

  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Matrix3d rot = oracles::RotationMatrix3(
        rng.Uniform(0.0, 2.0 * kPi), rng.Uniform(0.0, kPi),
        rng.Uniform(0.0, 2.0 * kPi));
    AxisSet rotated;
    rotated.dim = d;
    for (const Axis& axis : set.axes) {
      const Eigen::Vector3d n =
          rot * oracles::DirectionVector(axis.alpha, axis.beta);
      const auto [alpha, beta] = oracles::DirectionAngles(n);
      rotated.axes.push_back(Axis{alpha, beta});
    }
    const MeasurementDesign after = BuildMeasurementDesign(rotated);
    for (int ell = 0; ell < d; ++ell) {
      const Eigen::VectorXd& sa = before.blocks[ell].singular_values;
      const Eigen::VectorXd& sb = after.blocks[ell].singular_values;
      REQUIRE(sa.size() == sb.size());
      for (int k = 0; k < sa.size(); ++k) {
        CHECK(std::abs(sa(k) - sb(k)) < 1e-9);
      }
    }
    CHECK(after.total_s2 ==
          doctest::Approx(before.total_s2).epsilon(1e-9));
    CHECK(after.epsilon2 ==
          doctest::Approx(before.epsilon2).epsilon(1e-9));
  }
}

TEST_CASE("appending an axis never increases any block scale") {
  AngleSampler rng(2718u);
  const int d = 4;
  for (int trial = 0; trial < 30; ++trial) {
    AxisSet set = RandomAxisSet(rng, d, 2 * d - 1);
    const MeasurementDesign before = BuildMeasurementDesign(set);
    // Either a fresh random axis or a duplicate of an existing one.
    if (trial % 3 == 0) {
      set.axes.push_back(set.axes[trial % set.axes.size()]);
    } else {
      set.axes.push_back(Axis{rng.Uniform(0.0, 2.0 * kPi),
                              std::acos(rng.Uniform(-1.0, 1.0))});
    }
    const MeasurementDesign after = BuildMeasurementDesign(set);
    for (int ell = 0; ell < d; ++ell) {
      if (std::isinf(before.s2[ell])) continue;
      CHECK(after.s2[ell] <= before.s2[ell] + 1e-12);
    }
    if (before.feasible) CHECK(after.feasible);
  }
}

TEST_CASE("block pseudoinverse satisfies the Moore-Penrose identities") {
  AngleSampler rng(12013u);
  const int d = 4;

  // Full-rank case: pinv is a left inverse.
  const AxisSet set = RandomAxisSet(rng, d, 2 * d - 1);
  for (int ell = 0; ell < d; ++ell) {
    const MeasurementBlock block = BuildMeasurementBlock(set, ell);
    const int cols = 2 * ell + 1;
    CHECK((block.pinv * block.matrix -
           Eigen::MatrixXcd::Identity(cols, cols))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }

  // Rank-deficient case: the defining identities still hold.
  AxisSet planar;
  planar.dim = d;
  for (int i = 0; i < 2 * d; ++i) {
    planar.axes.push_back(Axis{rng.Uniform(0.0, 2.0 * kPi), kPi / 2.0});
  }
  const MeasurementBlock block = BuildMeasurementBlock(planar, d - 1);
  CHECK((block.matrix * block.pinv * block.matrix - block.matrix)
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((block.pinv * block.matrix * block.pinv - block.pinv)
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("measurement construction is deterministic") {
  AngleSampler rng_a(33550336u);
  AngleSampler rng_b(33550336u);
  const AxisSet set_a = RandomAxisSet(rng_a, 5, 11);
  const AxisSet set_b = RandomAxisSet(rng_b, 5, 11);
  const MeasurementDesign da = BuildMeasurementDesign(set_a);
  const MeasurementDesign db = BuildMeasurementDesign(set_b);
  CHECK(da.total_s2 == db.total_s2);
  CHECK(da.epsilon2 == db.epsilon2);
  for (int ell = 0; ell < 5; ++ell) {
    CHECK(da.blocks[ell].matrix == db.blocks[ell].matrix);
    CHECK(da.blocks[ell].singular_values == db.blocks[ell].singular_values);
  }
}

TEST_CASE("measurement layer rejects malformed input") {
  AxisSet set;
  set.dim = 3;
  set.axes.push_back(Axis{0.0, 1.0});
  CHECK_THROWS_AS(BuildMeasurementBlock(set, -1), std::invalid_argument);
  CHECK_THROWS_AS(BuildMeasurementBlock(set, 3), std::invalid_argument);

  AxisSet empty;
  empty.dim = 3;
  CHECK_THROWS_AS(BuildMeasurementDesign(empty), std::invalid_argument);

  AxisSet tiny;
  tiny.dim = 1;
  tiny.axes.push_back(Axis{0.0, 0.0});
  CHECK_THROWS_AS(FullMeasurementMatrix(tiny), std::invalid_argument);
}
