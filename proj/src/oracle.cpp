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

#include "lazypca/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lazypca::oracle {

namespace {

// Unordered adjacent pairs (i < j) at Chebyshev distance 1, by direct scan.
std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(Dims dims) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t n = dims.sites();
  const auto row = [&](std::size_t i) { return static_cast<long>(i % dims.height); };
  const auto col = [&](std::size_t i) { return static_cast<long>(i / dims.height); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::max(std::labs(row(i) - row(j)), std::labs(col(i) - col(j))) == 1) pairs.emplace_back(i, j);
  return pairs;
}

double lum(unsigned level, unsigned levels) { return levels < 2 ? 0.0 : double(level) / double(levels - 1); }

double site_misfit(const SmallInstance& inst, std::size_t i, unsigned s) {
  const double r = lum(inst.observed[i], inst.levels()) - lum(s, inst.levels());
  return r * r / (2.0 * inst.noise.sigma * inst.noise.sigma);
}

double lifting_factor(const SmallInstance& inst) { return inst.pca.kernel == PcaKernel::Consistent ? 1.0 : 2.0; }

void require_matrix_size(std::size_t states) {
  if (states > kMaxMatrixStates)
    throw Error(ErrorKind::TooLarge, "oracle: " + std::to_string(states) + " states exceed the dense matrix limit");
}

}  // namespace

std::size_t SmallInstance::state_count() const {
  const std::size_t sites = observed.size();
  if (sites > kMaxSites) throw Error(ErrorKind::TooLarge, "oracle: more than 12 sites");
  std::size_t states = 1;
  for (std::size_t i = 0; i < sites; ++i) {
    states *= levels();
    if (states > kMaxStates) throw Error(ErrorKind::TooLarge, "oracle: state space exceeds 2^18");
  }
  return states;
}

LevelImage decode_state(const SmallInstance& inst, std::size_t k) {
  std::vector<Level> data(inst.observed.size());
  for (auto& v : data) {
    v = static_cast<Level>(k % inst.levels());
    k /= inst.levels();
  }
  return LevelImage(inst.dims(), inst.levels(), std::move(data));
}

std::size_t encode_state(const SmallInstance& inst, std::span<const Level> levels) {
  std::size_t k = 0;
  for (std::size_t i = levels.size(); i-- > 0;) k = k * inst.levels() + levels[i];
  return k;
}

double posterior_log_weight(const SmallInstance& inst, std::span<const Level> x) {
  double agree = 0.0;
  for (auto [i, j] : adjacent_pairs(inst.dims()))
    if (x[i] == x[j]) agree += 1.0;
  double misfit = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) misfit += site_misfit(inst, i, x[i]);
  return 2.0 * inst.beta * inst.prior.coupling * agree - misfit;
}

std::vector<double> enumerate_posterior(const SmallInstance& inst) {
  const std::size_t states = inst.state_count();
  const auto pairs = adjacent_pairs(inst.dims());
  std::vector<double> logw(states);
  for (std::size_t k = 0; k < states; ++k) {
    const LevelImage x = decode_state(inst, k);
    double agree = 0.0;
    for (auto [i, j] : pairs)
      if (x[i] == x[j]) agree += 1.0;
    double misfit = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) misfit += site_misfit(inst, i, x[i]);
    logw[k] = 2.0 * inst.beta * inst.prior.coupling * agree - misfit;
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double& v : logw) total += (v = std::exp(v - top));
  for (double& v : logw) v /= total;
  return logw;
}

std::vector<double> exact_conditional(const SmallInstance& inst, std::span<const Level> x, std::size_t site) {
  std::vector<Level> y(x.begin(), x.end());
  std::vector<double> logw(inst.levels());
  for (unsigned s = 0; s < inst.levels(); ++s) {
    y[site] = static_cast<Level>(s);
    logw[s] = posterior_log_weight(inst, y);
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double& v : logw) total += (v = std::exp(v - top));
  for (double& v : logw) v /= total;
  return logw;
}

namespace {

double pair_log_weight(const SmallInstance& inst, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                       std::span<const Level> x, std::span<const Level> w) {
  const double c = lifting_factor(inst);
  double cross = 0.0;
  for (auto [i, j] : pairs) {
    if (x[i] == w[j]) cross += 1.0;
    if (x[j] == w[i]) cross += 1.0;
  }
  double misfit = 0.0;
  double moved = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    misfit += site_misfit(inst, i, x[i]) + site_misfit(inst, i, w[i]);
    if (x[i] != w[i]) moved += 1.0;
  }
  return c * (inst.beta * inst.prior.coupling * cross - 0.5 * misfit) - inst.beta * inst.pca.inertia * moved;
}

}  // namespace

double pca_pair_log_weight(const SmallInstance& inst, std::span<const Level> x, std::span<const Level> w) {
  return pair_log_weight(inst, adjacent_pairs(inst.dims()), x, w);
}

DenseMatrix pca_transition_matrix(const SmallInstance& inst) {
  if (inst.pca.norm_exponent != 0.0) fail("oracle: only p = 0 is supported");
  const std::size_t states = inst.state_count();
  require_matrix_size(states);
  const std::size_t n = inst.observed.size();
  const unsigned levels = inst.levels();
  const double c = lifting_factor(inst);
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (auto [i, j] : adjacent_pairs(inst.dims())) {
    nbrs[i].push_back(j);
    nbrs[j].push_back(i);
  }

  DenseMatrix m{states, std::vector<double>(states * states)};
  std::vector<double> factor(n * levels);
  for (std::size_t a = 0; a < states; ++a) {
    const LevelImage x = decode_state(inst, a);
    for (std::size_t i = 0; i < n; ++i) {
      double* f = factor.data() + i * levels;
      for (unsigned s = 0; s < levels; ++s) {
        double agree = 0.0;
        for (std::size_t j : nbrs[i])
          if (x[j] == s) agree += 1.0;
        const double inertial = s != x[i] ? inst.beta * inst.pca.inertia : 0.0;
        f[s] = c * (inst.beta * inst.prior.coupling * agree - 0.5 * site_misfit(inst, i, s)) - inertial;
      }
      const double top = *std::max_element(f, f + levels);
      double total = 0.0;
      for (unsigned s = 0; s < levels; ++s) total += (f[s] = std::exp(f[s] - top));
      for (unsigned s = 0; s < levels; ++s) f[s] /= total;
    }
    for (std::size_t b = 0; b < states; ++b) {
      std::size_t k = b;
      double p = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        p *= factor[i * levels + k % levels];
        k /= levels;
      }
      m(a, b) = p;
    }
  }
  return m;
}

double max_pair_asymmetry(const SmallInstance& inst) {
  const std::size_t states = inst.state_count();
  require_matrix_size(states);
  std::vector<LevelImage> decoded;
  decoded.reserve(states);
  for (std::size_t k = 0; k < states; ++k) decoded.push_back(decode_state(inst, k));
  const auto pairs = adjacent_pairs(inst.dims());
  double worst = 0.0;
  for (std::size_t a = 0; a < states; ++a)
    for (std::size_t b = a + 1; b < states; ++b) {
      const double ab = pair_log_weight(inst, pairs, decoded[a].data(), decoded[b].data());
      const double ba = pair_log_weight(inst, pairs, decoded[b].data(), decoded[a].data());
      worst = std::max(worst, std::abs(ab - ba));
    }
  return worst;
}

std::vector<double> pca_stationary_closed_form(const SmallInstance& inst) {
  const std::size_t states = inst.state_count();
  require_matrix_size(states);
  std::vector<LevelImage> decoded;
  decoded.reserve(states);
  for (std::size_t k = 0; k < states; ++k) decoded.push_back(decode_state(inst, k));
  const auto pairs = adjacent_pairs(inst.dims());

  std::vector<double> logw(states * states);
  double worst = 0.0;
  for (std::size_t a = 0; a < states; ++a)
    for (std::size_t b = 0; b < states; ++b)
      logw[a * states + b] = pair_log_weight(inst, pairs, decoded[a].data(), decoded[b].data());
  for (std::size_t a = 0; a < states; ++a)
    for (std::size_t b = a + 1; b < states; ++b)
      worst = std::max(worst, std::abs(logw[a * states + b] - logw[b * states + a]));
  if (worst > 1e-12) fail("oracle: pair Hamiltonian is not symmetric (max deviation " + std::to_string(worst) + ")");

  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> z(states, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < states; ++a) {
    for (std::size_t b = 0; b < states; ++b) z[a] += std::exp(logw[a * states + b] - top);
    total += z[a];
  }
  for (double& v : z) v /= total;
  return z;
}

std::vector<double> apply_left(std::span<const double> row, const DenseMatrix& m) {
  std::vector<double> out(m.n, 0.0);
  for (std::size_t a = 0; a < m.n; ++a) {
    const double ra = row[a];
    const double* mrow = m.values.data() + a * m.n;
    for (std::size_t b = 0; b < m.n; ++b) out[b] += ra * mrow[b];
  }
  return out;
}

StationaryResult stationary_by_power_iteration(const DenseMatrix& transition, double tolerance,
                                               std::size_t max_iterations) {
  StationaryResult result;
  result.distribution.assign(transition.n, 1.0 / static_cast<double>(transition.n));
  for (result.iterations = 0; result.iterations < max_iterations; ++result.iterations) {
    std::vector<double> next = apply_left(result.distribution, transition);
    double total = 0.0;
    for (double v : next) total += v;
    double residual = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] /= total;
      residual = std::max(residual, std::abs(next[i] - result.distribution[i]));
    }
    result.distribution = std::move(next);
    result.residual = residual;
    if (residual <= tolerance) break;
  }
  return result;
}

DenseMatrix site_update_matrix(const SmallInstance& inst, std::size_t site, const ConditionalFn& conditional) {
  const std::size_t states = inst.state_count();
  require_matrix_size(states);
  DenseMatrix m{states, std::vector<double>(states * states, 0.0)};
  for (std::size_t a = 0; a < states; ++a) {
    LevelImage x = decode_state(inst, a);
    const std::vector<double> p = conditional(x, site);
    std::vector<Level> y(x.data().begin(), x.data().end());
    for (unsigned s = 0; s < inst.levels(); ++s) {
      y[site] = static_cast<Level>(s);
      m(a, encode_state(inst, y)) += p[s];
    }
  }
  return m;
}

double detailed_balance_error(std::span<const double> pi, const DenseMatrix& p) {
  double worst = 0.0;
  for (std::size_t a = 0; a < p.n; ++a)
    for (std::size_t b = a + 1; b < p.n; ++b) worst = std::max(worst, std::abs(pi[a] * p(a, b) - pi[b] * p(b, a)));
  return worst;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) fail("tv_distance: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

}  // namespace lazypca::oracle
