#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regen/envelope.hpp"
#include "regen/regen_core.hpp"
#include "regen/rng.hpp"

namespace regen {

// Linear growth with immigration: birth rate lambda n + a, death rate mu n,
// rho = lambda / mu < 1.
class BDSpec {
 public:
  BDSpec(double lambda, double mu, double a);

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  double a() const noexcept { return a_; }
  double rho() const noexcept { return lambda_ / mu_; }
  double a_over_lambda() const noexcept { return a_ / lambda_; }
  double birth(long n) const noexcept { return lambda_ * static_cast<double>(n) + a_; }
  double death(long n) const noexcept { return mu_ * static_cast<double>(n); }

 private:
  double lambda_;
  double mu_;
  double a_;
};

struct Stationary {
  std::vector<double> theta;  // theta_0..theta_kmax
  double p0 = 0.0;            // from the full series, not the truncation
  std::vector<double> p;      // p_k = theta_k p0
  long terms_summed = 0;
};

Stationary stationary(const BDSpec& spec, long k_max);

// E T_k = 1 / (a p0).
double bd_alpha_T(const BDSpec& spec);

// P(X-bar(T_1) > n) = 1 / sum_{k<=n} alpha_k, alpha_k = prod_{i<=k} mu_i / lambda_i.
// Linear-domain compensated sum up to n = 50, log domain beyond.
double q_exact(const BDSpec& spec, long n);
double log_q_exact(const BDSpec& spec, long n);

struct RichardsonOptions {
  int max_level = 20;        // largest n = 2^max_level
  double tolerance = 1e-6;   // bound on |last - previous| extrapolant
};

struct ConstantEstimate {
  double value = 0.0;
  double error = 0.0;  // difference of the last two order-2 extrapolants
};

// C = lim n^{a/lambda} prod_{i<=n} (1 - 1/(1 + i lambda/a)), from g(n) at
// n = 2^j evaluated in log domain, order-2 Richardson in 1/n. Throws
// ConvergenceError when the extrapolants disagree by more than the tolerance.
ConstantEstimate c_constant(const BDSpec& spec, const RichardsonOptions& opts = {});

// Same limit through the harmonic split
//   log beta_n = -sum y_i + sum (log(1 - y_i) + y_i),   y_i = 1/(1 + i lambda/a),
// extrapolating the exponent before exponentiating.
ConstantEstimate c_constant_harmonic(const BDSpec& spec, const RichardsonOptions& opts = {});

// ((1/rho - 1) / C) rho^{n+1} n^{a/lambda}
double q_asymptotic(const BDSpec& spec, long n);
double log_q_asymptotic(const BDSpec& spec, long n);
// Same with a precomputed C, for tables.
double log_q_asymptotic(const BDSpec& spec, long n, double C);

// R0(x) = -x log rho - (a/lambda) log x, r0(x) = -log rho - a/(lambda x),
// x0 = -a/(lambda log rho), numeric inverse; r1_bound is the largest
// |-log q(n) - R0(n)| over n in [1, 300].
RateEnvelope bd_envelope(const BDSpec& spec);

// R0 and R1 = -log q(n) - R0(n) as plain functions (no threshold check).
double bd_rate0(const BDSpec& spec, double x);
double bd_rate1(const BDSpec& spec, long n);

// One return-to-zero cycle: Exp(a) idle wait at 0, then jumps until 0 is hit
// again. Records carry the within-cycle running maximum.
void bd_cycle(const BDSpec& spec, Philox& rng, CycleTrace& out);

class BDModel final : public CycleModel {
 public:
  explicit BDModel(BDSpec spec) : spec_(spec) {}
  void next_cycle(Philox& rng, CycleTrace& out) const override { bd_cycle(spec_, rng, out); }
  std::string name() const override { return "bd"; }
  const BDSpec& spec() const noexcept { return spec_; }

 private:
  BDSpec spec_;
};

struct Corollary3Stat {
  double t = 0.0;
  double u2 = 0.0;  // (X log(1/rho) - log t) / L2(t), limsup 1 + a/lambda
  double u3 = 0.0;  // (X log(1/rho) - log t - (a/lambda) L2(t)) / L3(t), liminf -1
};

Corollary3Stat corollary3_stat(const BDSpec& spec, double t, double xbar);
std::vector<Corollary3Stat> corollary3_stats(const MaxPath& path, const BDSpec& spec);

// Exact E[first passage time from `from` to n] via the skip-free passage sums.
double expected_hitting_time(const BDSpec& spec, long n, long from = 0);

// Scale C^{-1} (1/rho - 1) rho^n n^{a/lambda} applied to hitting times of n.
double hitting_time_scale(const BDSpec& spec, long n);

struct HittingOptions {
  long initial_state = 0;
  double event_budget = 1e9;  // cap on projected jump count over all replicas
};

struct HittingSample {
  std::vector<double> raw;
  std::vector<double> scaled;
  double scale = 0.0;
  double limit_rate = 0.0;  // a p0
  double mean_scaled = 0.0;
  double ks_distance = 0.0;  // against 1 - exp(-a p0 x)
};

// Replica i simulates from the initial state on stream (seed, i) until n is
// first visited. Throws BudgetError when the projected work exceeds the cap.
HittingSample hitting_time_stat(const BDSpec& spec, long n, long replicas, std::uint64_t seed,
                                const HittingOptions& opts = {});

}  // namespace regen
