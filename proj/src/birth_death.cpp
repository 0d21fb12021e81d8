#include "regen/birth_death.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "regen/errors.hpp"
#include "regen/ladder.hpp"
#include "regen/parallel.hpp"
#include "regen/stats.hpp"

namespace regen {
namespace {

constexpr long kLinearTailLimit = 50;
constexpr long kMaxCycleJumps = 1'000'000'000;

// Order-2 Richardson extrapolation of s(2^j) ~ L + c1/n + c2/n^2.
ConstantEstimate richardson(const std::vector<double>& seq, double tolerance) {
  if (seq.size() < 4) throw ConvergenceError("richardson: need at least four terms");
  std::vector<double> level1(seq.size() - 1);
  for (std::size_t j = 1; j < seq.size(); ++j) level1[j - 1] = 2.0 * seq[j] - seq[j - 1];
  std::vector<double> level2(level1.size() - 1);
  for (std::size_t j = 1; j < level1.size(); ++j) {
    level2[j - 1] = (4.0 * level1[j] - level1[j - 1]) / 3.0;
  }
  ConstantEstimate est;
  est.value = level2.back();
  est.error = std::abs(level2.back() - level2[level2.size() - 2]);
  if (!(est.error <= tolerance)) {
    throw ConvergenceError("richardson: successive extrapolants differ by " +
                           std::to_string(est.error));
  }
  return est;
}

void check_options(const RichardsonOptions& opts) {
  if (opts.max_level < 3 || opts.max_level > 40) {
    throw DomainError("richardson options: max_level must lie in [3, 40]");
  }
}

}  // namespace

BDSpec::BDSpec(double lambda, double mu, double a) : lambda_(lambda), mu_(mu), a_(a) {
  if (!(lambda > 0) || !(mu > 0) || !(a > 0) || !std::isfinite(lambda + mu + a)) {
    throw ModelError("birth-death: lambda, mu, a must be positive and finite");
  }
  if (!(rho() < 1.0)) throw ModelError("birth-death: rho = lambda/mu must be < 1");
}

Stationary stationary(const BDSpec& spec, long k_max) {
  if (k_max < 0) throw DomainError("stationary: k_max must be >= 0");
  Stationary out;
  out.theta.push_back(1.0);
  CompensatedSum total;
  total.add(1.0);
  double theta = 1.0;
  const double rho = spec.rho();
  for (long k = 1;; ++k) {
    theta *= spec.birth(k - 1) / spec.death(k);
    if (k <= k_max) out.theta.push_back(theta);
    total.add(theta);
    // theta_{j+1}/theta_j -> rho and is bounded by max(rho, next ratio)
    const double next_ratio = spec.birth(k) / spec.death(k + 1);
    const double r = std::max(rho, next_ratio);
    if (k >= k_max && r < 1.0 && theta * r / (1.0 - r) < 1e-18 * total.value()) {
      out.terms_summed = k + 1;
      break;
    }
    if (k > 100'000'000) throw ConvergenceError("stationary: series did not converge");
  }
  out.p0 = 1.0 / total.value();
  out.p.reserve(out.theta.size());
  for (double t : out.theta) out.p.push_back(t * out.p0);
  return out;
}

double bd_alpha_T(const BDSpec& spec) { return 1.0 / (spec.a() * stationary(spec, 0).p0); }

double log_q_exact(const BDSpec& spec, long n) {
  if (n < 0) throw DomainError("q_exact: n must be >= 0");
  // alpha_k = beta_k / rho^k
  const double c = spec.a_over_lambda();
  const double log_inv_rho = -std::log(spec.rho());
  return log_ladder_tail(
      [=](long i) { return -std::log1p(c / static_cast<double>(i)) + log_inv_rho; }, n);
}

double q_exact(const BDSpec& spec, long n) {
  if (n < 0) throw DomainError("q_exact: n must be >= 0");
  if (n > kLinearTailLimit) return std::exp(log_q_exact(spec, n));
  CompensatedSum denom;
  double alpha = 1.0;
  denom.add(alpha);
  for (long k = 1; k <= n; ++k) {
    alpha *= spec.death(k) / spec.birth(k);
    denom.add(alpha);
  }
  return 1.0 / denom.value();
}

ConstantEstimate c_constant(const BDSpec& spec, const RichardsonOptions& opts) {
  check_options(opts);
  const double c = spec.a_over_lambda();
  std::vector<double> g;
  CompensatedSum log_beta;
  long i = 0;
  for (int j = 0; j <= opts.max_level; ++j) {
    const long n = 1L << j;
    for (++i; i <= n; ++i) log_beta.add(-std::log1p(c / static_cast<double>(i)));
    --i;
    g.push_back(std::exp(c * std::log(static_cast<double>(n)) + log_beta.value()));
  }
  return richardson(g, opts.tolerance);
}

ConstantEstimate c_constant_harmonic(const BDSpec& spec, const RichardsonOptions& opts) {
  check_options(opts);
  const double c = spec.a_over_lambda();
  const double inv_c = 1.0 / c;  // lambda / a
  std::vector<double> exponent;
  CompensatedSum harmonic;
  CompensatedSum remainder;
  long i = 0;
  for (int j = 0; j <= opts.max_level; ++j) {
    const long n = 1L << j;
    for (++i; i <= n; ++i) {
      const double y = 1.0 / (1.0 + static_cast<double>(i) * inv_c);
      harmonic.add(y);
      remainder.add(std::log1p(-y) + y);
    }
    --i;
    exponent.push_back(c * std::log(static_cast<double>(n)) - harmonic.value() +
                       remainder.value());
  }
  auto est = richardson(exponent, opts.tolerance);
  const double value = std::exp(est.value);
  est.error *= value;
  est.value = value;
  return est;
}

double log_q_asymptotic(const BDSpec& spec, long n) {
  return log_q_asymptotic(spec, n, c_constant(spec).value);
}

double log_q_asymptotic(const BDSpec& spec, long n, double C) {
  if (n < 1) throw DomainError("q_asymptotic: n must be >= 1");
  if (!(C > 0.0)) throw DomainError("q_asymptotic: C must be positive");
  const double rho = spec.rho();
  return std::log(1.0 / rho - 1.0) - std::log(C) + static_cast<double>(n + 1) * std::log(rho) +
         spec.a_over_lambda() * std::log(static_cast<double>(n));
}

double q_asymptotic(const BDSpec& spec, long n) { return std::exp(log_q_asymptotic(spec, n)); }

double bd_rate0(const BDSpec& spec, double x) {
  return -x * std::log(spec.rho()) - spec.a_over_lambda() * std::log(x);
}

double bd_rate1(const BDSpec& spec, long n) {
  return -log_q_exact(spec, n) - bd_rate0(spec, static_cast<double>(n));
}

RateEnvelope bd_envelope(const BDSpec& spec) {
  const double log_rho = std::log(spec.rho());
  const double c = spec.a_over_lambda();
  const double x0 = -c / log_rho;
  double bound = 0.0;
  const auto tails = log_ladder_tails(
      [=](long i) { return -std::log1p(c / static_cast<double>(i)) - log_rho; }, 300);
  for (long n = 1; n <= 300; ++n) {
    bound = std::max(bound, std::abs(-tails[static_cast<std::size_t>(n)] -
                                     bd_rate0(spec, static_cast<double>(n))));
  }
  return numeric_envelope([=](double x) { return -x * log_rho - c * std::log(x); },
                          [=](double x) { return -log_rho - c / x; }, 0.0, x0, bound);
}

void bd_cycle(const BDSpec& spec, Philox& rng, CycleTrace& out) {
  out.records.clear();
  out.records.push_back({0.0, 0.0});
  double t = rng.exponential(spec.a());
  long state = 1;
  long top = 1;
  out.records.push_back({t, 1.0});
  for (long jumps = 0; state > 0; ++jumps) {
    if (jumps >= kMaxCycleJumps) throw CycleOverflow("birth-death cycle exceeded the event cap");
    const double up = spec.birth(state);
    const double total = up + spec.death(state);
    t += rng.exponential(total);
    if (rng.uniform() * total < up) {
      ++state;
      if (state > top) {
        top = state;
        out.records.push_back({t, static_cast<double>(state)});
      }
    } else {
      --state;
    }
  }
  out.sample = {t, static_cast<double>(top)};
}

Corollary3Stat corollary3_stat(const BDSpec& spec, double t, double xbar) {
  if (!(t > std::exp(std::numbers::e))) throw DomainError("corollary3_stat: requires t > e^e");
  const double L2 = l2(t);
  const double L3 = l3(t);
  const double centred = xbar * -std::log(spec.rho()) - std::log(t);
  return {t, centred / L2, (centred - spec.a_over_lambda() * L2) / L3};
}

std::vector<Corollary3Stat> corollary3_stats(const MaxPath& path, const BDSpec& spec) {
  std::vector<Corollary3Stat> out;
  out.reserve(path.checkpoints.size());
  for (const auto& cp : path.checkpoints) out.push_back(corollary3_stat(spec, cp.t, cp.xbar));
  return out;
}

double expected_hitting_time(const BDSpec& spec, long n, long from) {
  if (from < 0 || n <= from) throw DomainError("expected_hitting_time: need 0 <= from < n");
  // E[k -> k+1] = sum_{j<=k} theta_j / (lambda_k theta_k); work with theta_j/theta_k.
  CompensatedSum total;
  double ratio_sum = 0.0;  // sum_{j<=k} theta_j / theta_k
  for (long k = 0; k < n; ++k) {
    ratio_sum = (k == 0) ? 1.0 : 1.0 + ratio_sum * spec.death(k) / spec.birth(k - 1);
    if (k >= from) total.add(ratio_sum / spec.birth(k));
  }
  return total.value();
}

double hitting_time_scale(const BDSpec& spec, long n) {
  if (n < 1) throw DomainError("hitting_time_scale: n must be >= 1");
  const double rho = spec.rho();
  const double C = c_constant(spec).value;
  return std::exp(std::log(1.0 / rho - 1.0) - std::log(C) + static_cast<double>(n) * std::log(rho) +
                  spec.a_over_lambda() * std::log(static_cast<double>(n)));
}

HittingSample hitting_time_stat(const BDSpec& spec, long n, long replicas, std::uint64_t seed,
                                const HittingOptions& opts) {
  if (n < 2) throw DomainError("hitting_time_stat: n must be >= 2");
  if (replicas < 1) throw DomainError("hitting_time_stat: replicas must be >= 1");
  if (opts.initial_state < 0 || opts.initial_state >= n) {
    throw DomainError("hitting_time_stat: initial state must lie in [0, n)");
  }
  const double mean_time = expected_hitting_time(spec, n, opts.initial_state);
  const double max_rate = spec.birth(n) + spec.death(n);
  const double projected = static_cast<double>(replicas) * mean_time * max_rate;
  if (!(projected <= opts.event_budget)) {
    throw BudgetError("hitting_time_stat: projected " + std::to_string(projected) +
                      " events exceed the budget");
  }

  HittingSample out;
  out.raw.resize(static_cast<std::size_t>(replicas));
  parallel_for(out.raw.size(), [&](std::size_t r) {
    Philox rng(seed, r);
    long state = opts.initial_state;
    double t = 0.0;
    while (state < n) {
      const double up = spec.birth(state);
      const double total = up + spec.death(state);
      t += rng.exponential(total);
      if (rng.uniform() * total < up) {
        ++state;
      } else {
        --state;
      }
    }
    out.raw[r] = t;
  });

  out.scale = hitting_time_scale(spec, n);
  out.limit_rate = spec.a() * stationary(spec, 0).p0;
  out.scaled.reserve(out.raw.size());
  for (double t : out.raw) out.scaled.push_back(t * out.scale);
  out.mean_scaled = mean(out.scaled);
  const double rate = out.limit_rate;
  out.ks_distance = ks_distance(out.scaled, [rate](double x) {
    return x <= 0.0 ? 0.0 : -std::expm1(-rate * x);
  });
  return out;
}

}  // namespace regen
