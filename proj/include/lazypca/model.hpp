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
#include <vector>

#include "lazypca/core.hpp"

namespace lazypca {

enum class Neighborhood { Moore8 };

struct PriorParams {
  double coupling = 1.0 / 3.0;  // J > 0
  Neighborhood neighborhood = Neighborhood::Moore8;
  void validate() const;
};

/// Additive Gaussian noise on the luminance scale. Samplers assume mean 0.
struct NoiseModel {
  double mean = 0.0;
  double sigma = 0.25;
  void validate() const;
};

/// Piecewise-constant inverse temperature: beta0 + increment * floor(t / period).
struct AnnealSchedule {
  double beta0 = 1.25;
  double increment = 0.25;
  std::uint32_t period = 250;
  std::uint32_t total_steps = 1000;
  void validate() const;
};

double beta_at(const AnnealSchedule& schedule, std::uint32_t step);

/// How the lazy PCA lifts the posterior into a pair Hamiltonian.
///
/// Consistent: per-site exponent E_i(s)/2 - beta*q*[s != x_i]. The symmetric
/// pair Hamiltonian has the posterior Hamiltonian on its diagonal, so the
/// stationary measure tends to the posterior as q grows.
///
/// Full: per-site exponent E_i(s) - beta*q*[s != x_i]. Same exponent as the
/// Gibbs sampler; its large-q limit is the normalized square of the posterior.
enum class PcaKernel { Consistent, Full };

struct PcaParams {
  double inertia = 0.51;  // q >= 0
  double norm_exponent = 0.0;  // p, convention 0^0 = 0; only p = 0 is supported
  PcaKernel kernel = PcaKernel::Consistent;
  void validate() const;
};

/// V(z, w) = -J if z == w, +J otherwise.
inline double pair_potential(Level z, Level w, double coupling) noexcept {
  return z == w ? -coupling : coupling;
}

/// Sum over sites of V over each site's neighbors; every unordered pair
/// contributes twice.
double prior_energy(const LevelImage& x, const PriorParams& prior);

/// Prior written as -sum_i sum_{j~i} 2J([x_i = x_j] - 1). Differs from
/// prior_energy by a configuration-independent constant.
double prior_energy_indicator_form(const LevelImage& x, const PriorParams& prior);

/// (1 / (2 sigma^2)) * sum_i (lum(g_i) - lum(x_i))^2.
double data_misfit(const LevelImage& x, const LevelImage& g, const NoiseModel& noise);

/// H_g(x) = prior_energy(x) + data_misfit(x, g) / beta.
double posterior_energy(const LevelImage& x, const LevelImage& g, const PriorParams& prior,
                        const NoiseModel& noise, double beta);

/// Precomputed pieces of the per-site exponent
///   E_i(s) = 2 beta J n_i(s) - (lum(g_i) - lum(s))^2 / (2 sigma^2),
/// n_i(s) = number of neighbors j of i with x_j = s. Shared by both samplers.
class SiteScorer {
 public:
  /// `observed == nullptr` selects the prior-only path (no data term).
  SiteScorer(const NeighborTable& table, unsigned levels, const LevelImage* observed, const PriorParams& prior,
             const NoiseModel& noise);

  unsigned levels() const noexcept { return levels_; }

  /// Writes E_i(s) for every level s into `scores` (size levels()). `counts`
  /// is scratch of the same size. Neighbor values are read from `state`.
  /// Pure; safe to call concurrently.
  void scores(std::span<const Level> state, std::size_t site, double beta, std::span<double> scores,
              std::span<std::uint32_t> counts) const;

 private:
  const NeighborTable& table_;
  const LevelImage* observed_;
  unsigned levels_;
  double coupling_;
  std::vector<double> misfit_;  // misfit_[g * levels + s]
};

/// Convenience wrapper returning E_i(s) for all s.
std::vector<double> local_site_scores(const LevelImage& x, const LevelImage& g, std::size_t site,
                                      const PriorParams& prior, const NoiseModel& noise, double beta);

/// Normalized softmax of `scores`, computed after subtracting the maximum.
std::vector<double> softmax(std::span<const double> scores);

/// Inverse-CDF draw over ascending level index. `weights` need not be
/// normalized; returns the first s whose cumulative weight exceeds u * total.
unsigned sample_index(std::span<const double> weights, double u) noexcept;

}  // namespace lazypca
