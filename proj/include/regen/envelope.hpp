#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace regen {

using RealFn = std::function<double(double)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
};

// inf{x in bracket : h(x) > y} for nondecreasing h, by bisection.
//
// The result is accurate to rel_tol * bracket.width() in x. Throws
// BracketError when h never exceeds y on the bracket. If h(lo) > y already,
// lo is returned.
double generalized_inverse(const RealFn& h, double y, Interval bracket, double rel_tol = 1e-10);

// Smooth part R0 of a log-tail R = R0 + R1 with |R1| <= r1_bound.
//
// R0 is strictly increasing and differentiable on [x0, inf), its derivative
// r0 is positive there, and (R0^{-1})' is regularly varying with index kappa.
// Every evaluation below x0 (or below R0(x0) for the inverse) is refused.
struct RateEnvelope {
  RealFn rate;        // R0
  RealFn rate_deriv;  // r0 = R0'
  RealFn rate_inv;    // R0^{-1}
  double kappa = 0.0;
  double x0 = 0.0;
  double r1_bound = 0.0;

  // (R0^{-1})'(y) = 1 / r0(R0^{-1}(y))
  double inverse_deriv(double y) const { return 1.0 / rate_deriv(rate_inv(y)); }
  double min_level() const { return rate(x0); }
};

// R0(x) = slope * x on [0, inf); covers exponential and geometric tails.
RateEnvelope linear_envelope(double slope, double r1_bound = 0.0);

// Envelope from R0 and r0 with the inverse evaluated numerically by
// generalized_inverse over an expanding bracket anchored at x0.
RateEnvelope numeric_envelope(RealFn rate, RealFn rate_deriv, double kappa, double x0,
                              double r1_bound = 0.0);

// Centering A0(t) = R0^{-1}(log(t / alpha_T)); requires log(t/alpha_T) > R0(x0).
double a0_of_t(const RateEnvelope& env, double alpha_T, double t);

// log log t (t > e) and log log log t (t > e^e).
double l2(double t);
double l3(double t);

struct NormalizedStats {
  double t = 0.0;
  double deviation = 0.0;  // r0(A0(t)) * (xbar - A0(t))
  double s2 = 0.0;         // deviation / L2(t)
  double s3 = 0.0;         // deviation / L3(t); NaN when t <= e^e
};

// Running-maximum statistics at horizon t. Requires t > e; s3 is only
// defined past e^e and is reported as NaN below it.
NormalizedStats normalized_stats(const RateEnvelope& env, double alpha_T, double t, double xbar);

// Same statistics with an explicit centering level log_level = R0(centre),
// shared by the i.i.d. (level log n) and sampled-time (log(alpha n/alpha_T))
// variants. `scale` is the L2/L3 argument (t or n).
NormalizedStats centred_stats(const RateEnvelope& env, double log_level, double scale, double value);

struct RegularVariationReport {
  double max_deviation = 0.0;
  double worst_t = 0.0;
  double worst_x = 0.0;
};

// max over the grid of |f(t x) / (f(t) x^kappa) - 1|.
RegularVariationReport check_regular_variation(const RealFn& f, double kappa,
                                               std::span<const double> t_grid,
                                               std::span<const double> x_grid);

struct PowerSum {
  double exact = 0.0;       // sum_{k=1}^n p^k / k^b
  double asymptotic = 0.0;  // p^{n+1} / ((p - 1) n^b)
  double ratio() const noexcept { return exact / asymptotic; }
};

// Throws OverflowError when p^{n+1} leaves the double range; use the log form.
PowerSum lemma5_sum(double p, double b, long n);

struct LogPowerSum {
  double log_exact = 0.0;
  double log_asymptotic = 0.0;
  double ratio() const { return std::exp(log_exact - log_asymptotic); }
};

// Same quantities as natural logarithms; safe for any n.
LogPowerSum log_lemma5_sum(double p, double b, long n);

struct GrowthReport {
  std::vector<double> grid;
  std::vector<double> ratio_log;     // r0(R0^{-1}(x)) / log x
  std::vector<double> ratio_loglog;  // r0(R0^{-1}(x)) / log log x
  bool o_log_ok = false;             // ratio_log nonincreasing on the grid
  bool o_loglog_ok = false;          // ratio_loglog nonincreasing on the grid
};

// Finite-grid diagnostic for r0(R0^{-1}(x)) = o(log x) and o(log log x),
// the growth conditions required for lattice-valued processes. The grid must
// lie above max(e, R0(x0)).
GrowthReport check_growth_conditions(const RateEnvelope& env, std::span<const double> x_grid);

// Logarithmically spaced grid 10^lo_exp .. 10^hi_exp with `per_decade` points per decade.
std::vector<double> log_grid(double lo_exp, double hi_exp, int per_decade);

}  // namespace regen
