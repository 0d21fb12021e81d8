#include "regen/iid_extremes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "regen/errors.hpp"
#include "regen/parallel.hpp"
#include "regen/stats.hpp"

namespace regen {

double sample_via_inverse(const RealFn& rate_inv, double u) {
  if (!(u >= 0.0)) throw DomainError("sample_via_inverse: exponential variate must be >= 0");
  return rate_inv(u);
}

double sample_via_inverse(const RateEnvelope& env, double u) {
  if (!(u >= 0.0)) throw DomainError("sample_via_inverse: exponential variate must be >= 0");
  if (u < env.min_level()) throw DomainError("sample_via_inverse: variate below R0(x0)");
  return env.rate_inv(u);
}

Sampler exponential_sampler() {
  return [](Philox& rng) { return rng.exponential(); };
}

Sampler constant_sampler(double value) {
  return [value](Philox&) { return value; };
}

Sampler inverse_sampler(RateEnvelope env) {
  return [env = std::move(env)](Philox& rng) { return sample_via_inverse(env, rng.exponential()); };
}

std::vector<long> geometric_index_grid(long n_max, double grid_ratio) {
  if (n_max < 1) throw DomainError("index grid: n_max must be >= 1");
  if (!(grid_ratio > 1.0)) throw DomainError("index grid: ratio must exceed 1");
  std::vector<long> grid;
  for (double g = 1.0;; g *= grid_ratio) {
    const long n = static_cast<long>(std::ceil(g - 1e-9));
    if (n >= n_max) break;
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  grid.push_back(n_max);
  return grid;
}

MaxSeries running_max_series(const Sampler& sampler, long n_max, double grid_ratio,
                             std::uint64_t seed, std::uint64_t stream) {
  const auto grid = geometric_index_grid(n_max, grid_ratio);
  Philox rng(seed, stream);
  MaxSeries series;
  series.checkpoints.reserve(grid.size());
  double z = -std::numeric_limits<double>::infinity();
  long drawn = 0;
  for (long target : grid) {
    for (; drawn < target; ++drawn) z = std::max(z, sampler(rng));
    series.checkpoints.push_back({target, z});
  }
  return series;
}

NormalizedStats maxima_stats(const RateEnvelope& env, double n, double z) {
  if (!(n > 0.0)) throw DomainError("maxima_stats: n must be positive");
  return centred_stats(env, std::log(n), n, z);
}

namespace {

std::vector<NormalizedStats> series_stats(const RateEnvelope& env, const MaxSeries& series) {
  std::vector<NormalizedStats> out;
  const double floor_level = env.min_level();
  for (const auto& cp : series.checkpoints) {
    const double n = static_cast<double>(cp.n);
    if (!(n > std::numbers::e) || !(std::log(n) > floor_level)) continue;
    out.push_back(maxima_stats(env, n, cp.z));
  }
  if (out.empty()) throw DomainError("maxima statistics: no checkpoint beyond the valid region");
  return out;
}

}  // namespace

std::vector<NormalizedStats> lemma1_stats(const RateEnvelope& env, const MaxSeries& series) {
  return series_stats(env, series);
}

std::vector<NormalizedStats> lattice_stats(const RateEnvelope& env, const MaxSeries& series) {
  for (const auto& cp : series.checkpoints) {
    if (!(cp.z >= 0.0) || cp.z != std::floor(cp.z)) {
      throw DomainError("lattice_stats: maxima must be nonnegative integers");
    }
  }
  return series_stats(env, series);
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double centred_exponential_max_cdf(long n, double x) {
  if (n < 1) throw DomainError("centred_exponential_max_cdf: n must be >= 1");
  const double nn = static_cast<double>(n);
  if (x <= -std::log(nn)) return 0.0;
  return std::exp(nn * std::log1p(-std::exp(-x) / nn));
}

GumbelCheck gumbel_check(long n, long replicas, std::uint64_t seed) {
  if (n < 1 || replicas < 1) throw DomainError("gumbel_check: n and replicas must be positive");
  GumbelCheck out;
  out.centred_maxima.resize(static_cast<std::size_t>(replicas));
  const double log_n = std::log(static_cast<double>(n));
  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t i) {
    Philox rng(seed, i);
    double z = 0.0;
    for (long k = 0; k < n; ++k) z = std::max(z, rng.exponential());
    out.centred_maxima[i] = z - log_n;
  });
  out.ks_distance = ks_distance(out.centred_maxima, gumbel_cdf);
  return out;
}

}  // namespace regen
