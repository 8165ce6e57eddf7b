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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lazypca/core.hpp"
#include "lazypca/model.hpp"
#include "lazypca/rng.hpp"
#include "lazypca/worker_pool.hpp"

namespace lazypca {

struct ChainState {
  LevelImage current;
  std::uint32_t step = 0;
  std::uint64_t seed = 0;
  AnnealSchedule schedule;
};

struct TransitionRecord {
  std::uint32_t step = 0;
  double beta = 0.0;
  std::size_t changed_sites = 0;
  double beta_posterior_energy = 0.0;  // beta * H_g of the new state
};

enum class Method { Gibbs, Pca };

/// Everything a single kernel application needs besides the state.
/// Holds references; the observation and parameters must outlive it.
class Kernel {
 public:
  Kernel(const LevelImage& observed, const PriorParams& prior, const NoiseModel& noise);

  const LevelImage& observed() const noexcept { return observed_; }
  const NeighborTable& table() const noexcept { return table_; }
  const SiteScorer& scorer() const noexcept { return scorer_; }

 private:
  const LevelImage& observed_;
  NeighborTable table_;
  SiteScorer scorer_;
};

/// One systematic sweep in column-major order; each site is resampled from
/// softmax(E_i) against the partially updated configuration. Returns the
/// number of sites whose level changed. Does not advance any step counter.
std::size_t gibbs_sweep_in_place(LevelImage& x, const SiteScorer& scorer, double beta,
                                 std::uint64_t seed, Stage stage, std::uint32_t step);

/// Lazy PCA step: every site is drawn independently from the old
/// configuration `from` into `to` (double buffer). Returns changed count.
std::size_t pca_step_into(const LevelImage& from, LevelImage& to, const SiteScorer& scorer,
                          const PcaParams& pca, double beta, std::uint64_t seed, std::uint32_t step,
                          WorkerPool& pool);

ChainState gibbs_sweep(const ChainState& state, const LevelImage& g, const PriorParams& prior,
                       const NoiseModel& noise);

ChainState pca_step(const ChainState& state, const LevelImage& g, const PriorParams& prior,
                    const NoiseModel& noise, const PcaParams& pca, WorkerPool& pool);
ChainState pca_step(const ChainState& state, const LevelImage& g, const PriorParams& prior,
                    const NoiseModel& noise, const PcaParams& pca);

struct ChainResult {
  LevelImage final_image;
  std::vector<TransitionRecord> trace;
};

struct ChainOptions {
  Method method = Method::Gibbs;
  std::optional<PcaParams> pca;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Called after each step with the new state when set.
  std::function<void(std::uint32_t step, const LevelImage&)> on_step;
};

/// Runs schedule.total_steps steps from `initial` with beta = beta_at(t) at
/// step t and returns the last state plus the per-step trace.
ChainResult run_chain(const LevelImage& initial, const LevelImage& g, const PriorParams& prior,
                      const NoiseModel& noise, const AnnealSchedule& schedule,
                      const ChainOptions& options);

}  // namespace lazypca
