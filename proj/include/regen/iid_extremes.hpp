#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "regen/envelope.hpp"
#include "regen/rng.hpp"

namespace regen {

// Draws one variate from an owned generator stream.
using Sampler = std::function<double(Philox&)>;

struct MaxCheckpoint {
  long n = 0;
  double z = 0.0;  // max of the first n draws
};

// Running maximum z_n = max_{i<=n} xi_i recorded on the index grid
// n_j = ceil(g^j) (deduplicated), always closed by n_max itself.
struct MaxSeries {
  std::vector<MaxCheckpoint> checkpoints;
};

// R^{-1}(u) for a standard exponential u; the output then has log-tail R.
double sample_via_inverse(const RealFn& rate_inv, double u);
double sample_via_inverse(const RateEnvelope& env, double u);

Sampler exponential_sampler();
Sampler constant_sampler(double value);
// Inverse-rate representation over the envelope: env.rate_inv(Exp(1)).
Sampler inverse_sampler(RateEnvelope env);

// Checkpoint indices ceil(g^j) up to n_max, plus n_max.
std::vector<long> geometric_index_grid(long n_max, double grid_ratio);

// Single pass over n_max draws from stream (seed, stream); O(log n_max) memory.
MaxSeries running_max_series(const Sampler& sampler, long n_max, double grid_ratio,
                             std::uint64_t seed, std::uint64_t stream = 0);

// Statistics of the i.i.d. maximum at index n with a(n) = R0^{-1}(log n):
// s2 = r0(a(n)) (z - a(n)) / L2(n), s3 the same over L3(n).
NormalizedStats maxima_stats(const RateEnvelope& env, double n, double z);

// maxima_stats at every checkpoint where it is defined (n > e and
// log n > R0(x0)); earlier checkpoints are skipped. Throws DomainError if no
// checkpoint qualifies.
std::vector<NormalizedStats> lemma1_stats(const RateEnvelope& env, const MaxSeries& series);

// Same contract for integer-valued samples; rejects non-integer or negative
// maxima with DomainError. The +-1 rounding of lattice maxima is left inside
// the statistic, which is harmless when r0 stays bounded.
std::vector<NormalizedStats> lattice_stats(const RateEnvelope& env, const MaxSeries& series);

// Standard Gumbel CDF exp(-e^{-x}).
double gumbel_cdf(double x);

// Exact CDF of max of n unit exponentials minus log n: (1 - e^{-x}/n)^n.
double centred_exponential_max_cdf(long n, double x);

struct GumbelCheck {
  double ks_distance = 0.0;
  std::vector<double> centred_maxima;  // z_n^e - log n, one per replica
};

// KS distance between the law of z_n^e - log n (replica i on stream (seed, i))
// and the Gumbel law.
GumbelCheck gumbel_check(long n, long replicas, std::uint64_t seed);

}  // namespace regen
