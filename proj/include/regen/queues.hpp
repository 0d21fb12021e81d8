#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "regen/envelope.hpp"
#include "regen/regen_core.hpp"
#include "regen/rng.hpp"

namespace regen {

// Positive random variables used for interarrival and service times.
struct Exponential {
  double rate = 1.0;
};
struct Deterministic {
  double value = 1.0;
};
struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};
struct Erlang {
  int shape = 1;
  double rate = 1.0;
};
// Weibull(shape k, scale s); its MGF has no closed form and goes through quadrature.
struct Weibull {
  double shape = 1.0;
  double scale = 1.0;
};

using Distribution = std::variant<Exponential, Deterministic, Uniform, Erlang, Weibull>;

void validate(const Distribution& d);
double sample(const Distribution& d, Philox& rng);
double mean(const Distribution& d);
std::string describe(const Distribution& d);

// sup{s : E exp(sX) < inf}; +inf when the MGF is entire.
double mgf_abscissa(const Distribution& d);

// E exp(sX) in closed form, or nullopt when none is known. Returns +inf
// at or beyond the abscissa.
std::optional<double> mgf_closed_form(const Distribution& d, double s);

// E exp(sX) by adaptive Gauss-Kronrod quadrature of the density (tolerance
// 1e-12); deterministic laws are evaluated directly. +inf beyond the abscissa.
double mgf_quadrature(const Distribution& d, double s);

// Closed form when available, quadrature otherwise.
double mgf(const Distribution& d, double s);

// GI/G/1 queue: interarrival zeta (mean a), service eta (mean b), rho = b/a < 1.
class GiG1Spec {
 public:
  GiG1Spec(Distribution interarrival, Distribution service);

  const Distribution& interarrival() const noexcept { return interarrival_; }
  const Distribution& service() const noexcept { return service_; }
  double rho() const noexcept { return rho_; }

 private:
  Distribution interarrival_;
  Distribution service_;
  double rho_;
};

// M/M/m queue: Poisson(lambda) arrivals, Exp(mu) service, m servers,
// rho = lambda / (m mu) < 1.
class MMmSpec {
 public:
  MMmSpec(double lambda, double mu, int servers);

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  int servers() const noexcept { return servers_; }
  double rho() const noexcept { return lambda_ / (servers_ * mu_); }

 private:
  double lambda_;
  double mu_;
  int servers_;
};

inline constexpr long kMaxCycleEvents = 1'000'000'000;

struct LindleyCycle {
  CycleSample sample;
  long customers = 0;             // customers served in the cycle
  double service_total = 0.0;     // sum of their service times
  std::vector<CycleRecord> records;
  std::vector<double> waits;      // W_0..W_{customers-1}, filled on request
};

// One waiting-time cycle: W_0 = 0 at the cycle start, then
// W_k = max(0, W_{k-1} + eta_{k-1} - zeta_k) until the first k >= 1 with
// W_k = 0. Duration is the sum of the k interarrival gaps; the maximum is
// max_{i<k} W_i.
void lindley_cycle(const GiG1Spec& spec, Philox& rng, LindleyCycle& out, bool keep_waits = false);

struct CustomerPath {
  std::vector<double> arrival_times;  // t_0 = 0 < t_1 < ...
  std::vector<double> waits;          // W_0 = 0, W_1, ...
};

// Customers 0..n of a GI/G/1 queue started empty.
CustomerPath gig1_customer_path(const GiG1Spec& spec, long customers, Philox& rng);

struct CramerRoot {
  double gamma = 0.0;
  double tilted_mean = 0.0;  // E (eta - zeta) exp(gamma (eta - zeta)), finite
  int evaluations = 0;
};

// Positive root of E exp(gamma (eta - zeta)) = 1. Throws NoRootError when
// the expectation stays at or below 1 over the searchable range.
CramerRoot cramer_gamma(const Distribution& interarrival, const Distribution& service);
CramerRoot cramer_gamma(const GiG1Spec& spec);

// Unique positive root of e^x = 1 + x / rho for rho in (0, 1).
double x_rho_root(double rho);

// E T for GI/G/1 cycles when it has a closed form: a / (1 - rho) for
// Poisson arrivals.
std::optional<double> gig1_alpha_T(const GiG1Spec& spec);

// R0(x) = gamma x with gamma from cramer_gamma.
RateEnvelope gig1_envelope(const GiG1Spec& spec);

// CTMC cycle of the queue length started at 1 customer: birth lambda, death
// min(k, m) mu; the busy period ends at 0 and the following Exp(lambda) idle
// gap closes the cycle.
void mmm_cycle(const MMmSpec& spec, Philox& rng, CycleTrace& out);

// Stationary probability of an empty system.
double mmm_p0(const MMmSpec& spec);

// E T = 1 / (lambda p0): cycles start at arrivals to an empty system.
double mmm_alpha_T(const MMmSpec& spec);

// log P(Q-bar(T_1) > n), exact.
double mmm_log_tail(const MMmSpec& spec, long n);

// R0(x) = -x log rho; r1_bound from the exact tail over n in [0, 300].
RateEnvelope mmm_envelope(const MMmSpec& spec);

class GiG1Model final : public CycleModel {
 public:
  explicit GiG1Model(GiG1Spec spec) : spec_(std::move(spec)) {}
  void next_cycle(Philox& rng, CycleTrace& out) const override;
  std::string name() const override { return "gig1"; }
  const GiG1Spec& spec() const noexcept { return spec_; }

 private:
  GiG1Spec spec_;
};

class MMmModel final : public CycleModel {
 public:
  explicit MMmModel(MMmSpec spec) : spec_(spec) {}
  void next_cycle(Philox& rng, CycleTrace& out) const override { mmm_cycle(spec_, rng, out); }
  std::string name() const override { return "mmm"; }
  const MMmSpec& spec() const noexcept { return spec_; }

 private:
  MMmSpec spec_;
};

}  // namespace regen
