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

#ifndef SPINTOMO_OPTIMIZE_HPP_
#define SPINTOMO_OPTIMIZE_HPP_

#include <cstdint>
#include <vector>

#include "spintomo/measurement.hpp"

// Axis-set search layer.
//
// Good measurement designs are found, not derived: sample axis sets
// uniformly from the sphere, score each by its quantum error scale, and
// optionally polish winners with a derivative-free local search.  This
// header provides the pieces of that protocol plus two studies built on it:
//
//   * the measurement-adjusted sweep, tracing how the best achievable
//     eps_V^2 |V| falls as extra axes are allowed, and
//   * the equal-azimuth single-polar-angle family (a classic construction
//     for degree-complete sampling), whose one free angle is scanned and
//     refined to its optimum.
//
// All sampling is substream-seeded (see rng.hpp), and candidate evaluation
// parallelizes with a deterministic (score, candidate-index) reduction, so
// results are identical across thread counts.

namespace spintomo {

// Knobs of the randomized search.
struct SearchConfig {
  int dim = 0;                //
  int axis_count = 0;         // r, where an operation does not fix it
  int candidates = 1000;      // random restarts per sweep step
  int local_iters = 0;        // simplex iterations (0 = skip local search)
  std::uint64_t seed = 0;     // master seed
  double time_budget = 0.0;   // seconds; <= 0 means no budget
};

// `count` axes drawn i.i.d. from the uniform sphere measure (azimuth
// uniform, cosine of the polar angle uniform), axis i from substream i of
// the seed.  Throws std::invalid_argument for count < 1 or dim < 2.
AxisSet RandomAxes(int dim, int count, std::uint64_t seed);

// Derivative-free local minimization of the quantum error scale over the
// 2r angle parameters: a Nelder-Mead simplex with reflection, expansion,
// and contraction, angles renormalized onto their canonical ranges after
// every move, and infeasible candidates scored +infinity.  Runs at most
// config.local_iters iterations (a default proportional to r when 0) and
// returns the improved set, or the input unchanged when nothing better was
// found.  If `trace` is given it receives the best score after every
// iteration (a non-increasing sequence).  Throws std::invalid_argument
// when the initial set has fewer than 2d-1 axes.
AxisSet OptimizeAxes(const AxisSet& initial, const SearchConfig& config,
                     std::vector<double>* trace = nullptr);

// Result of the measurement-adjusted sweep.  Entry k describes p =
// p_values[k] extra axes (|V| = 2d-1+p): best_axes[k] is the best set found
// at that size and beta_tilde[k] the running best of the score
// eps_V^2 * |V| over all steps so far - an empirical, certified
// non-increasing upper bound on the measurement-adjusted error scale.  A
// time budget may truncate the sweep; the completed prefix is returned.
struct BetaSweepResult {
  int dim = 0;
  std::vector<int> p_values;
  std::vector<double> beta_tilde;
  std::vector<AxisSet> best_axes;
};

// Runs the sweep for p = 0..p_max.  Each step's candidate pool nests the
// previous winner (a slice of candidates extend it by one random axis, the
// rest are fresh random sets), every candidate is scored - after an
// optional local polish of config.local_iters simplex steps - and the best
// (score, index) wins.  Deterministic for fixed seed whenever no time
// budget is set.  Throws std::invalid_argument for dim < 2, p_max < 0, or
// candidates < 1.
BetaSweepResult BetaSweep(int dim, int p_max, const SearchConfig& config);

// The equal-azimuth family: 2d-1 axes at azimuths 2 pi k/(2d-1), all at
// polar angle theta.  Feasible for generic theta, never at theta = pi/2
// (coplanar).  Throws std::invalid_argument unless 0 <= theta <= pi.
AxisSet NewtonYoungAxes(int dim, double theta);

// Scan of the family's quantum error scale over a polar-angle grid.
// eps_theta[k] = eps_V at theta_grid[k] (+infinity where infeasible);
// theta_opt refines the best grid point by golden-section search between
// its neighbors.
struct ThetaScan {
  int dim = 0;
  std::vector<double> theta_grid;
  std::vector<double> eps_theta;
  double theta_opt = 0.0;
};

// Throws std::invalid_argument on an empty grid or dim < 2.
ThetaScan ScanTheta(int dim, const std::vector<double>& grid);

}  // namespace spintomo

#endif  // SPINTOMO_OPTIMIZE_HPP_
