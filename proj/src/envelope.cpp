#include "regen/envelope.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "regen/errors.hpp"
#include "regen/stats.hpp"

namespace regen {
namespace {

constexpr int kMaxBisections = 400;
constexpr int kMaxBracketDoublings = 1100;

// Log of the largest finite double.
const double kLogMax = std::log(std::numeric_limits<double>::max());

}  // namespace

double generalized_inverse(const RealFn& h, double y, Interval bracket, double rel_tol) {
  if (!(bracket.hi > bracket.lo)) throw DomainError("generalized_inverse: empty bracket");
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (h(lo) > y) return lo;
  if (!(h(hi) > y)) {
    throw BracketError("generalized_inverse: function never exceeds " + std::to_string(y) +
                       " on the bracket");
  }
  const double tol = rel_tol * bracket.width();
  // h(lo) <= y < h(hi)
  for (int i = 0; i < kMaxBisections && hi - lo > tol; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (h(mid) > y) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

RateEnvelope linear_envelope(double slope, double r1_bound) {
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw DomainError("linear_envelope: slope must be positive and finite");
  }
  RateEnvelope env;
  env.rate = [slope](double x) {
    if (x < 0.0) throw DomainError("linear envelope evaluated below x0 = 0");
    return slope * x;
  };
  env.rate_deriv = [slope](double x) {
    if (x < 0.0) throw DomainError("linear envelope evaluated below x0 = 0");
    return slope;
  };
  env.rate_inv = [slope](double y) {
    if (y < 0.0) throw DomainError("linear envelope inverse evaluated below R0(x0) = 0");
    return y / slope;
  };
  env.kappa = 0.0;
  env.x0 = 0.0;
  env.r1_bound = r1_bound;
  return env;
}

RateEnvelope numeric_envelope(RealFn rate, RealFn rate_deriv, double kappa, double x0,
                              double r1_bound) {
  RateEnvelope env;
  const double floor_level = rate(x0);
  env.rate = [rate, x0](double x) {
    if (x < x0) throw DomainError("envelope evaluated below its threshold x0");
    return rate(x);
  };
  env.rate_deriv = [rate_deriv, x0](double x) {
    if (x < x0) throw DomainError("envelope derivative evaluated below its threshold x0");
    return rate_deriv(x);
  };
  env.rate_inv = [rate, x0, floor_level](double y) {
    if (y < floor_level) throw DomainError("envelope inverse evaluated below R0(x0)");
    double step = std::max(1.0, std::abs(x0));
    double hi = x0 + step;
    for (int i = 0; !(rate(hi) > y); ++i) {
      if (i == kMaxBracketDoublings || !std::isfinite(hi)) {
        throw BracketError("envelope inverse: R0 does not reach the requested level");
      }
      step *= 2.0;
      hi = x0 + step;
    }
    // Bisect to the last representable midpoint.
    return generalized_inverse(rate, y, {x0, hi}, 0.0);
  };
  env.kappa = kappa;
  env.x0 = x0;
  env.r1_bound = r1_bound;
  return env;
}

double a0_of_t(const RateEnvelope& env, double alpha_T, double t) {
  if (!(alpha_T > 0.0) || !(t > 0.0)) throw DomainError("a0_of_t: t and alpha_T must be positive");
  const double level = std::log(t / alpha_T);
  if (!(level > env.min_level())) {
    throw DomainError("a0_of_t: log(t/alpha_T) is below the envelope's valid region");
  }
  return env.rate_inv(level);
}

double l2(double t) {
  if (!(t > std::numbers::e)) throw DomainError("l2: requires t > e");
  return std::log(std::log(t));
}

double l3(double t) {
  if (!(t > std::numbers::e)) throw DomainError("l3: requires t > e^e");
  const double inner = std::log(std::log(t));
  if (!(inner > 1.0)) throw DomainError("l3: requires t > e^e");
  return std::log(inner);
}

NormalizedStats centred_stats(const RateEnvelope& env, double log_level, double scale,
                              double value) {
  if (!(scale > std::numbers::e)) throw DomainError("normalized statistics require t > e");
  if (!(log_level > env.min_level())) {
    throw DomainError("normalized statistics: centering level below the valid region");
  }
  const double centre = env.rate_inv(log_level);
  NormalizedStats out;
  out.t = scale;
  out.deviation = env.rate_deriv(centre) * (value - centre);
  const double L2 = std::log(std::log(scale));
  out.s2 = out.deviation / L2;
  // L3 > 0 exactly when L2 > 1
  out.s3 = L2 > 1.0 ? out.deviation / std::log(L2) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

NormalizedStats normalized_stats(const RateEnvelope& env, double alpha_T, double t, double xbar) {
  if (!(alpha_T > 0.0) || !(t > 0.0)) {
    throw DomainError("normalized_stats: t and alpha_T must be positive");
  }
  return centred_stats(env, std::log(t / alpha_T), t, xbar);
}

RegularVariationReport check_regular_variation(const RealFn& f, double kappa,
                                               std::span<const double> t_grid,
                                               std::span<const double> x_grid) {
  RegularVariationReport report;
  for (double t : t_grid) {
    const double ft = f(t);
    if (!(ft > 0.0)) throw DomainError("check_regular_variation: f must be positive on the grid");
    for (double x : x_grid) {
      const double ftx = f(t * x);
      if (!(ftx > 0.0)) {
        throw DomainError("check_regular_variation: f must be positive on the grid");
      }
      const double dev = std::abs(ftx / (ft * std::pow(x, kappa)) - 1.0);
      if (dev >= report.max_deviation) {
        report.max_deviation = dev;
        report.worst_t = t;
        report.worst_x = x;
      }
    }
  }
  return report;
}

LogPowerSum log_lemma5_sum(double p, double b, long n) {
  if (!(p > 1.0)) throw DomainError("lemma5_sum: requires p > 1");
  if (n < 1) throw DomainError("lemma5_sum: requires n >= 1");
  const double log_p = std::log(p);
  // The last term dominates; factor it out and sum the ratios backwards.
  const double log_last = static_cast<double>(n) * log_p - b * std::log(static_cast<double>(n));
  CompensatedSum acc;
  for (long k = n; k >= 1; --k) {
    const double log_term = static_cast<double>(k) * log_p - b * std::log(static_cast<double>(k));
    acc.add(std::exp(log_term - log_last));
  }
  LogPowerSum out;
  out.log_exact = log_last + std::log(acc.value());
  out.log_asymptotic = static_cast<double>(n + 1) * log_p - std::log(p - 1.0) -
                       b * std::log(static_cast<double>(n));
  return out;
}

PowerSum lemma5_sum(double p, double b, long n) {
  if (!(p > 1.0)) throw DomainError("lemma5_sum: requires p > 1");
  if (n < 1) throw DomainError("lemma5_sum: requires n >= 1");
  if (static_cast<double>(n + 1) * std::log(p) >= kLogMax) {
    throw OverflowError("lemma5_sum: p^(n+1) overflows; use log_lemma5_sum");
  }
  CompensatedSum acc;
  double power = 1.0;
  for (long k = 1; k <= n; ++k) {
    power *= p;
    acc.add(power / std::pow(static_cast<double>(k), b));
  }
  PowerSum out;
  out.exact = acc.value();
  out.asymptotic = power * p / ((p - 1.0) * std::pow(static_cast<double>(n), b));
  if (!std::isfinite(out.exact) || !std::isfinite(out.asymptotic)) {
    throw OverflowError("lemma5_sum: result overflows; use log_lemma5_sum");
  }
  return out;
}

GrowthReport check_growth_conditions(const RateEnvelope& env, std::span<const double> x_grid) {
  GrowthReport report;
  for (double x : x_grid) {
    if (!(x > std::numbers::e) || !(x >= env.min_level())) {
      throw DomainError("check_growth_conditions: grid point outside the valid region");
    }
    const double r = env.rate_deriv(env.rate_inv(x));
    report.grid.push_back(x);
    report.ratio_log.push_back(r / std::log(x));
    report.ratio_loglog.push_back(r / std::log(std::log(x)));
  }
  const auto nonincreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[i - 1] * (1.0 + 1e-12)) return false;
    }
    return v.size() >= 2;
  };
  report.o_log_ok = nonincreasing(report.ratio_log);
  report.o_loglog_ok = nonincreasing(report.ratio_loglog);
  return report;
}

std::vector<double> log_grid(double lo_exp, double hi_exp, int per_decade) {
  if (per_decade < 1 || hi_exp < lo_exp) throw DomainError("log_grid: bad arguments");
  std::vector<double> out;
  const int steps = static_cast<int>(std::lround((hi_exp - lo_exp) * per_decade));
  for (int i = 0; i <= steps; ++i) {
    out.push_back(std::pow(10.0, lo_exp + static_cast<double>(i) / per_decade));
  }
  return out;
}

}  // namespace regen
