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

#include "lazypca/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lazypca {

void PriorParams::validate() const {
  if (!(coupling > 0.0) || !std::isfinite(coupling)) fail("coupling J must be positive and finite");
}

void NoiseModel::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("noise sigma must be positive and finite");
  if (mean != 0.0) fail("only zero-mean noise is supported");
}

void AnnealSchedule::validate() const {
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) fail("schedule beta0 must be positive");
  if (!(increment >= 0.0) || !std::isfinite(increment)) fail("schedule increment must be nonnegative");
  if (period == 0) fail("schedule period must be positive");
}

double beta_at(const AnnealSchedule& schedule, std::uint32_t step) {
  if (step >= schedule.total_steps)
    fail("step " + std::to_string(step) + " outside schedule of " + std::to_string(schedule.total_steps) + " steps");
  return schedule.beta0 + schedule.increment * static_cast<double>(step / schedule.period);
}

void PcaParams::validate() const {
  if (!(inertia >= 0.0) || !std::isfinite(inertia)) fail("PCA inertia q must be nonnegative and finite");
  if (norm_exponent != 0.0) fail("only the L0 inertial norm (p = 0) is supported");
}

double prior_energy(const LevelImage& x, const PriorParams& prior) {
  const NeighborTable table(x.dims());
  double energy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::uint32_t j : table.of(i)) energy += pair_potential(x[j], x[i], prior.coupling);
  return energy;
}

double prior_energy_indicator_form(const LevelImage& x, const PriorParams& prior) {
  const NeighborTable table(x.dims());
  double energy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::uint32_t j : table.of(i)) energy -= 2.0 * prior.coupling * ((x[i] == x[j] ? 1.0 : 0.0) - 1.0);
  return energy;
}

double data_misfit(const LevelImage& x, const LevelImage& g, const NoiseModel& noise) {
  require_same_shape(x, g, "data_misfit");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = g.luminance(i) - x.luminance(i);
    sum += r * r;
  }
  return sum / (2.0 * noise.sigma * noise.sigma);
}

double posterior_energy(const LevelImage& x, const LevelImage& g, const PriorParams& prior, const NoiseModel& noise,
                        double beta) {
  require_same_shape(x, g, "posterior_energy");
  if (!(beta > 0.0)) fail("posterior_energy: beta must be positive");
  return prior_energy(x, prior) + data_misfit(x, g, noise) / beta;
}

SiteScorer::SiteScorer(const NeighborTable& table, unsigned levels, const LevelImage* observed,
                       const PriorParams& prior, const NoiseModel& noise)
    : table_(table), observed_(observed), levels_(levels), coupling_(prior.coupling) {
  if (levels_ == 0) fail("SiteScorer: levels must be positive");
  if (observed_ == nullptr) return;
  if (observed_->dims() != table.dims()) fail("observation does not match lattice dimensions");
  if (observed_->levels() != levels_) fail("observation level count does not match");
  misfit_.resize(static_cast<std::size_t>(levels_) * levels_);
  const double scale = 1.0 / (2.0 * noise.sigma * noise.sigma);
  for (unsigned gv = 0; gv < levels_; ++gv)
    for (unsigned s = 0; s < levels_; ++s) {
      const double r = LevelImage::level_luminance(gv, levels_) - LevelImage::level_luminance(s, levels_);
      misfit_[gv * levels_ + s] = scale * r * r;
    }
}

void SiteScorer::scores(std::span<const Level> state, std::size_t site, double beta, std::span<double> out,
                        std::span<std::uint32_t> counts) const {
  const std::size_t levels = out.size();
  std::fill(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(levels), 0U);
  for (std::uint32_t j : table_.of(site)) ++counts[state[j]];
  const double weight = 2.0 * beta * coupling_;
  if (observed_ == nullptr) {
    for (std::size_t s = 0; s < levels; ++s) out[s] = weight * counts[s];
    return;
  }
  const double* misfit = misfit_.data() + static_cast<std::size_t>((*observed_)[site]) * levels_;
  for (std::size_t s = 0; s < levels; ++s) out[s] = weight * counts[s] - misfit[s];
}

std::vector<double> local_site_scores(const LevelImage& x, const LevelImage& g, std::size_t site,
                                      const PriorParams& prior, const NoiseModel& noise, double beta) {
  require_same_shape(x, g, "local_site_scores");
  if (site >= x.size()) fail("local_site_scores: site index out of range");
  const NeighborTable table(x.dims());
  const SiteScorer scorer(table, g.levels(), &g, prior, noise);
  std::vector<double> out(x.levels());
  std::vector<std::uint32_t> counts(x.levels());
  scorer.scores(x.data(), site, beta, out, counts);
  return out;
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> p(scores.begin(), scores.end());
  if (p.empty()) return p;
  const double top = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (double& v : p) total += (v = std::exp(v - top));
  for (double& v : p) v /= total;
  return p;
}

unsigned sample_index(std::span<const double> weights, double u) noexcept {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = u * total;
  double cumulative = 0.0;
  unsigned last_positive = 0;
  for (unsigned s = 0; s < weights.size(); ++s) {
    if (weights[s] <= 0.0) continue;
    cumulative += weights[s];
    last_positive = s;
    if (target < cumulative) return s;
  }
  return last_positive;
}

}  // namespace lazypca
