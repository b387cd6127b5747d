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

#include "spintomo/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "spintomo/parallel.hpp"
#include "spintomo/rng.hpp"

namespace spintomo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Fraction of a sweep step's candidate pool that extends the previous
// winner instead of starting fresh, with a small floor so thin pools still
// explore both kinds.
constexpr int kExtensionFloor = 8;
constexpr int kExtensionDivisor = 4;

// Nelder-Mead shape coefficients (the standard choices) and the initial
// per-coordinate displacement in radians used to seed the simplex.
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kSimplexStep = 0.25;

// The figure of merit everywhere in this file: squared quantum error scale
// of the design, +infinity when any degree block is rank deficient.
double DesignScore(const AxisSet& axes) {
  return BuildMeasurementDesign(axes).epsilon2;
}

// Interleaved angle parameters <-> axis set.  Parameters are unconstrained
// during the search; folding back onto canonical ranges happens here.
AxisSet ParamsToAxes(int dim, const std::vector<double>& params) {
  AxisSet axes;
  axes.dim = dim;
  axes.axes.resize(params.size() / 2);
  for (std::size_t i = 0; i < axes.axes.size(); ++i) {
    axes.axes[i] = NormalizedAxis(params[2 * i], params[2 * i + 1]);
  }
  return axes;
}

class StopWatch {
 public:
  explicit StopWatch(double budget_seconds) : budget_(budget_seconds) {
    start_ = std::chrono::steady_clock::now();
  }

  // False when no budget is set.
  bool Expired() const {
    if (budget_ <= 0.0) return false;
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(now - start_).count() > budget_;
  }

 private:
  double budget_ = 0.0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

AxisSet RandomAxes(int dim, int count, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("axis sampling needs dim >= 2");
  if (count < 1) throw std::invalid_argument("axis sampling needs count >= 1");
  AxisSet axes;
  axes.dim = dim;
  axes.axes.resize(count);
  for (int i = 0; i < count; ++i) {
    // One substream per axis keeps sampling order-independent: axis i is
    // the same no matter how many axes surround it.
    SplitMix64 gen = Substream(seed, static_cast<std::uint64_t>(i));
    const double alpha = 2.0 * kPi * gen.UniformDouble();
    const double beta = std::acos(1.0 - 2.0 * gen.UniformDouble());
    axes.axes[i] = NormalizedAxis(alpha, beta);
  }
  return axes;
}

AxisSet OptimizeAxes(const AxisSet& initial, const SearchConfig& config,
                     std::vector<double>* trace) {
  const int dim = initial.dim;
  const int count = static_cast<int>(initial.axes.size());
  if (dim < 2) throw std::invalid_argument("axis search needs dim >= 2");
  if (count < 2 * dim - 1) {
    throw std::invalid_argument(
        "axis search needs at least 2*dim - 1 axes to reach feasibility");
  }
  if (config.dim != 0 && config.dim != dim) {
    throw DimensionMismatchError("search config dim disagrees with axis set");
  }
  const int n = 2 * count;
  const int max_iters = config.local_iters > 0 ? config.local_iters : 120 * count;

  // Simplex of n+1 vertices: the initial point plus one step along each
  // coordinate.
  std::vector<std::vector<double>> vertex(n + 1, std::vector<double>(n));
  for (int i = 0; i < count; ++i) {
    vertex[0][2 * i] = initial.axes[i].alpha;
    vertex[0][2 * i + 1] = initial.axes[i].beta;
  }
  for (int j = 1; j <= n; ++j) {
    vertex[j] = vertex[0];
    vertex[j][j - 1] += kSimplexStep;
  }
  std::vector<double> value(n + 1);
  for (int j = 0; j <= n; ++j) value[j] = DesignScore(ParamsToAxes(dim, vertex[j]));
  const double initial_score = value[0];

  std::vector<int> order(n + 1);
  auto Sort = [&]() {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return value[a] < value[b];
    });
  };
  Sort();
  if (trace != nullptr) trace->push_back(value[order[0]]);

  std::vector<double> centroid(n), candidate(n), second(n);
  for (int iter = 0; iter < max_iters; ++iter) {
    const int best = order[0];
    const int worst = order[n];
    const int next_worst = order[n - 1];
    if (value[worst] - value[best] <=
        1e-12 * std::max(1.0, std::abs(value[best]))) {
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int j = 0; j <= n; ++j) {
      if (j == worst) continue;
      for (int k = 0; k < n; ++k) centroid[k] += vertex[j][k];
    }
    for (int k = 0; k < n; ++k) centroid[k] /= n;

    auto Blend = [&](std::vector<double>& out, double coeff) {
      for (int k = 0; k < n; ++k) {
        out[k] = centroid[k] + coeff * (centroid[k] - vertex[worst][k]);
      }
    };

    Blend(candidate, kReflect);
    const double reflected = DesignScore(ParamsToAxes(dim, candidate));
    bool shrink = false;
    if (reflected < value[order[0]]) {
      Blend(second, kExpand);
      const double expanded = DesignScore(ParamsToAxes(dim, second));
      if (expanded < reflected) {
        vertex[worst] = second;
        value[worst] = expanded;
      } else {
        vertex[worst] = candidate;
        value[worst] = reflected;
      }
    } else if (reflected < value[next_worst]) {
      vertex[worst] = candidate;
      value[worst] = reflected;
    } else if (reflected < value[worst]) {
      Blend(second, kContract);
      const double contracted = DesignScore(ParamsToAxes(dim, second));
      if (contracted <= reflected) {
        vertex[worst] = second;
        value[worst] = contracted;
      } else {
        shrink = true;
      }
    } else {
      Blend(second, -kContract);
      const double contracted = DesignScore(ParamsToAxes(dim, second));
      if (contracted < value[worst]) {
        vertex[worst] = second;
        value[worst] = contracted;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (int j = 0; j <= n; ++j) {
        if (j == order[0]) continue;
        for (int k = 0; k < n; ++k) {
          vertex[j][k] =
              vertex[order[0]][k] + kShrink * (vertex[j][k] - vertex[order[0]][k]);
        }
        value[j] = DesignScore(ParamsToAxes(dim, vertex[j]));
      }
    }
    Sort();
    if (trace != nullptr) trace->push_back(value[order[0]]);
  }

  if (value[order[0]] < initial_score) return ParamsToAxes(dim, vertex[order[0]]);
  return initial;
}

BetaSweepResult BetaSweep(int dim, int p_max, const SearchConfig& config) {
  if (dim < 2) throw std::invalid_argument("sweep needs dim >= 2");
  if (p_max < 0) throw std::invalid_argument("sweep needs p_max >= 0");
  if (config.candidates < 1) {
    throw std::invalid_argument("sweep needs at least one candidate per step");
  }
  const int base_count = 2 * dim - 1;
  const int candidates = config.candidates;
  StopWatch watch(config.time_budget);

  BetaSweepResult result;
  result.dim = dim;
  AxisSet previous_best;
  double running_best = kInf;

  for (int p = 0; p <= p_max; ++p) {
    if (watch.Expired()) break;
    const int count = base_count + p;
    // A slice of the pool extends the previous winner by one fresh axis;
    // the remainder restarts from scratch.  Nesting keeps the sweep from
    // ever losing ground to sampling luck at larger pools.
    const int extensions =
        previous_best.axes.empty()
            ? 0
            : std::min(candidates,
                       std::max(kExtensionFloor, candidates / kExtensionDivisor));

    std::vector<double> score(candidates, kInf);
    std::vector<AxisSet> pool(candidates);
    ParallelFor(candidates, [&](int c) {
      if (watch.Expired()) return;  // leaves the slot at +inf
      SplitMix64 sub = Substream(
          config.seed, static_cast<std::uint64_t>(p) * candidates + c);
      const std::uint64_t derived = sub();
      AxisSet cand;
      if (c < extensions) {
        cand = previous_best;
        cand.axes.push_back(RandomAxes(dim, 1, derived).axes[0]);
      } else {
        cand = RandomAxes(dim, count, derived);
      }
      if (config.local_iters > 0 && !watch.Expired()) {
        SearchConfig polish = config;
        polish.dim = dim;
        cand = OptimizeAxes(cand, polish);
      }
      pool[c] = std::move(cand);
      score[c] = DesignScore(pool[c]);
    });

    int best_index = -1;
    double best_score = kInf;
    for (int c = 0; c < candidates; ++c) {
      if (score[c] < best_score) {
        best_score = score[c];
        best_index = c;
      }
    }
    if (best_index < 0) break;  // every candidate infeasible or budget-skipped

    running_best = std::min(running_best, best_score * count);
    result.p_values.push_back(p);
    result.beta_tilde.push_back(running_best);
    result.best_axes.push_back(pool[best_index]);
    previous_best = std::move(pool[best_index]);
  }
  return result;
}

AxisSet NewtonYoungAxes(int dim, double theta) {
  if (dim < 2) throw std::invalid_argument("axis family needs dim >= 2");
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi) {
    throw std::invalid_argument("polar angle must lie in [0, pi]");
  }
  const int count = 2 * dim - 1;
  AxisSet axes;
  axes.dim = dim;
  axes.axes.resize(count);
  for (int k = 0; k < count; ++k) {
    axes.axes[k] = NormalizedAxis(2.0 * kPi * k / count, theta);
  }
  return axes;
}

ThetaScan ScanTheta(int dim, const std::vector<double>& grid) {
  if (dim < 2) throw std::invalid_argument("theta scan needs dim >= 2");
  if (grid.empty()) throw std::invalid_argument("theta scan needs a grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || grid[k] < 0.0 || grid[k] > kPi) {
      throw std::invalid_argument("grid angles must lie in [0, pi]");
    }
    if (k > 0 && grid[k] <= grid[k - 1]) {
      throw std::invalid_argument("grid angles must be strictly increasing");
    }
  }

  ThetaScan scan;
  scan.dim = dim;
  scan.theta_grid = grid;
  scan.eps_theta.assign(grid.size(), kInf);
  ParallelFor(static_cast<int>(grid.size()), [&](int k) {
    scan.eps_theta[k] = std::sqrt(DesignScore(NewtonYoungAxes(dim, grid[k])));
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (scan.eps_theta[k] < scan.eps_theta[best]) best = k;
  }
  scan.theta_opt = grid[best];
  if (!std::isfinite(scan.eps_theta[best])) return scan;  // nothing to refine

  // Golden-section refinement between the best grid point's neighbors.
  double lo = best > 0 ? grid[best - 1] : grid[best];
  double hi = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  if (hi <= lo) return scan;
  auto Eval = [&](double theta) {
    return DesignScore(NewtonYoungAxes(dim, theta));
  };
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double left = hi - ratio * (hi - lo);
  double right = lo + ratio * (hi - lo);
  double f_left = Eval(left);
  double f_right = Eval(right);
  for (int iter = 0; iter < 60; ++iter) {
    if (f_left < f_right) {
      hi = right;
      right = left;
      f_right = f_left;
      left = hi - ratio * (hi - lo);
      f_left = Eval(left);
    } else {
      lo = left;
      left = right;
      f_left = f_right;
      right = lo + ratio * (hi - lo);
      f_right = Eval(right);
    }
  }
  scan.theta_opt = 0.5 * (lo + hi);
  return scan;
}

}  // namespace spintomo
