// Copyright 2026 The lazypca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lazypca/core.hpp"
#include "lazypca/model.hpp"

// Brute-force ground truth on lattices small enough to enumerate. The
// geometry and energies here are computed directly from their definitions
// and do not reuse the sampler code paths.
namespace lazypca::oracle {

inline constexpr std::size_t kMaxSites = 12;
inline constexpr std::size_t kMaxStates = std::size_t{1} << 18;
/// Dense transition matrices are limited further (kMaxMatrixStates^2 doubles).
inline constexpr std::size_t kMaxMatrixStates = std::size_t{1} << 11;

struct SmallInstance {
  LevelImage observed;
  PriorParams prior;
  NoiseModel noise;
  double beta = 1.0;
  PcaParams pca;

  Dims dims() const noexcept { return observed.dims(); }
  unsigned levels() const noexcept { return observed.levels(); }
  /// levels^sites; throws TooLarge past kMaxStates or kMaxSites.
  std::size_t state_count() const;
};

/// State k encodes site i's level as base-`levels` digit i (site 0 lowest).
LevelImage decode_state(const SmallInstance& inst, std::size_t k);
std::size_t encode_state(const SmallInstance& inst, std::span<const Level> levels);

struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // row-major
  double operator()(std::size_t r, std::size_t c) const { return values[r * n + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values[r * n + c]; }
};

/// log of the unnormalized posterior weight:
///   sum over unordered neighbor pairs of 2 beta J [x_i = x_j]
///   - (1 / (2 sigma^2)) sum_i (lum(g_i) - lum(x_i))^2.
/// Its single-site conditionals are exactly the sampler exponent E_i(s).
double posterior_log_weight(const SmallInstance& inst, std::span<const Level> x);

/// Normalized posterior over every configuration.
std::vector<double> enumerate_posterior(const SmallInstance& inst);

/// Exact conditional of the posterior at `site` given the rest of `x`,
/// obtained by varying x_site in the enumerated weights.
std::vector<double> exact_conditional(const SmallInstance& inst, std::span<const Level> x, std::size_t site);

/// -beta * H~(x, w) for the symmetric pair Hamiltonian of the chosen PCA kernel:
///   c * [ beta J sum_{i, j~i} [x_i = w_j] - (d(x) + d(w)) / 2 ] - beta q ||x - w||_0
/// with c = 1 (consistent kernel) or c = 2 (full kernel), d = data misfit.
double pca_pair_log_weight(const SmallInstance& inst, std::span<const Level> x, std::span<const Level> w);

/// Transition matrix of the lazy PCA as a product of per-site factors.
DenseMatrix pca_transition_matrix(const SmallInstance& inst);

/// max over (x, w) of |H~(x, w) - H~(w, x)| in log-weight units.
double max_pair_asymmetry(const SmallInstance& inst);

/// Z_x / Z. Throws if the pair Hamiltonian is not symmetric to 1e-12.
std::vector<double> pca_stationary_closed_form(const SmallInstance& inst);

struct StationaryResult {
  std::vector<double> distribution;
  double residual = 0.0;  // max |pi P - pi|
  std::size_t iterations = 0;
};

/// Power iteration pi <- pi P from uniform until max |pi P - pi| <= tolerance.
StationaryResult stationary_by_power_iteration(const DenseMatrix& transition, double tolerance = 1e-12,
                                               std::size_t max_iterations = 100000);

/// Builds the single-site update matrix at `site` from a conditional
/// distribution supplied by the caller (so implementation kernels can be
/// checked against enumerate_posterior).
using ConditionalFn = std::function<std::vector<double>(const LevelImage& x, std::size_t site)>;
DenseMatrix site_update_matrix(const SmallInstance& inst, std::size_t site, const ConditionalFn& conditional);

/// row vector times matrix
std::vector<double> apply_left(std::span<const double> row, const DenseMatrix& m);

/// max over (x, w) of |pi(x) P(x, w) - pi(w) P(w, x)|.
double detailed_balance_error(std::span<const double> pi, const DenseMatrix& p);

/// (1/2) sum |p_i - q_i|
double tv_distance(std::span<const double> p, std::span<const double> q);

}  // namespace lazypca::oracle
