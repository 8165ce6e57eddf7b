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

#include "lazypca/samplers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

namespace lazypca {

namespace {

void check_pair(const LevelImage& x, const LevelImage& g) { require_same_shape(x, g, "sampler"); }

// Prior energy with a prebuilt table; same sum as prior_energy().
double prior_energy_with(const NeighborTable& table, std::span<const Level> x, double coupling) {
  double energy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::uint32_t j : table.of(i)) energy += pair_potential(x[j], x[i], coupling);
  return energy;
}

}  // namespace

Kernel::Kernel(const LevelImage& observed, const PriorParams& prior, const NoiseModel& noise)
    : observed_(observed), table_(observed.dims()), scorer_(table_, observed.levels(), &observed_, prior, noise) {}

std::size_t gibbs_sweep_in_place(LevelImage& x, const SiteScorer& scorer, double beta, std::uint64_t seed,
                                 Stage stage, std::uint32_t step) {
  const unsigned levels = scorer.levels();
  std::vector<double> weights(levels);
  std::vector<std::uint32_t> counts(levels);
  auto data = x.mutable_data();
  std::size_t changed = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    scorer.scores(data, i, beta, weights, counts);
    const double top = *std::max_element(weights.begin(), weights.end());
    for (double& w : weights) w = std::exp(w - top);
    const double u = RngStream(seed, stage, step, static_cast<std::uint32_t>(i)).uniform();
    const auto next = static_cast<Level>(sample_index(weights, u));
    if (next != data[i]) {
      data[i] = next;
      ++changed;
    }
  }
  return changed;
}

std::size_t pca_step_into(const LevelImage& from, LevelImage& to, const SiteScorer& scorer, const PcaParams& pca,
                          double beta, std::uint64_t seed, std::uint32_t step, WorkerPool& pool) {
  if (to.dims() != from.dims() || to.levels() != from.levels()) to = from;
  const unsigned levels = scorer.levels();
  const double scale = pca.kernel == PcaKernel::Consistent ? 0.5 : 1.0;
  const double inertia = beta * pca.inertia;
  const auto old_state = from.data();
  auto new_state = to.mutable_data();
  std::atomic<std::size_t> changed{0};

  pool.parallel_for(old_state.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> weights(levels);
    std::vector<std::uint32_t> counts(levels);
    std::size_t local_changed = 0;
    for (std::size_t i = begin; i < end; ++i) {
      scorer.scores(old_state, i, beta, weights, counts);
      const Level current = old_state[i];
      for (unsigned s = 0; s < levels; ++s) {
        weights[s] *= scale;
        if (s != current) weights[s] -= inertia;
      }
      const double top = *std::max_element(weights.begin(), weights.end());
      for (double& w : weights) w = std::exp(w - top);
      const double u = RngStream(seed, Stage::Pca, step, static_cast<std::uint32_t>(i)).uniform();
      const auto next = static_cast<Level>(sample_index(weights, u));
      new_state[i] = next;
      if (next != current) ++local_changed;
    }
    changed.fetch_add(local_changed, std::memory_order_relaxed);
  });
  return changed.load();
}

ChainState gibbs_sweep(const ChainState& state, const LevelImage& g, const PriorParams& prior,
                       const NoiseModel& noise) {
  check_pair(state.current, g);
  const double beta = beta_at(state.schedule, state.step);
  const Kernel kernel(g, prior, noise);
  ChainState next = state;
  gibbs_sweep_in_place(next.current, kernel.scorer(), beta, state.seed, Stage::Gibbs, state.step);
  ++next.step;
  return next;
}

ChainState pca_step(const ChainState& state, const LevelImage& g, const PriorParams& prior, const NoiseModel& noise,
                    const PcaParams& pca, WorkerPool& pool) {
  check_pair(state.current, g);
  pca.validate();
  const double beta = beta_at(state.schedule, state.step);
  const Kernel kernel(g, prior, noise);
  ChainState next = state;
  pca_step_into(state.current, next.current, kernel.scorer(), pca, beta, state.seed, state.step, pool);
  ++next.step;
  return next;
}

ChainState pca_step(const ChainState& state, const LevelImage& g, const PriorParams& prior, const NoiseModel& noise,
                    const PcaParams& pca) {
  WorkerPool pool(1);
  return pca_step(state, g, prior, noise, pca, pool);
}

ChainResult run_chain(const LevelImage& initial, const LevelImage& g, const PriorParams& prior,
                      const NoiseModel& noise, const AnnealSchedule& schedule, const ChainOptions& options) {
  check_pair(initial, g);
  prior.validate();
  noise.validate();
  schedule.validate();
  if (options.method == Method::Pca) {
    if (!options.pca) fail("method pca requires PCA parameters");
    options.pca->validate();
  }

  const Kernel kernel(g, prior, noise);
  WorkerPool pool(options.method == Method::Pca ? options.threads : 1);
  ChainResult result{initial, {}};
  result.trace.reserve(schedule.total_steps);
  LevelImage scratch = initial;

  for (std::uint32_t t = 0; t < schedule.total_steps; ++t) {
    const double beta = beta_at(schedule, t);
    std::size_t changed = 0;
    if (options.method == Method::Gibbs) {
      changed = gibbs_sweep_in_place(result.final_image, kernel.scorer(), beta, options.seed, Stage::Gibbs, t);
    } else {
      changed = pca_step_into(result.final_image, scratch, kernel.scorer(), *options.pca, beta, options.seed, t, pool);
      std::swap(result.final_image, scratch);
    }
    const auto state = result.final_image.data();
    const double energy = beta * prior_energy_with(kernel.table(), state, prior.coupling) +
                          data_misfit(result.final_image, g, noise);
    result.trace.push_back({t, beta, changed, energy});
    if (options.on_step) options.on_step(t + 1, result.final_image);
  }
  return result;
}

}  // namespace lazypca
