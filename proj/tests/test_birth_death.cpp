#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "regen/birth_death.hpp"
#include "regen/envelope.hpp"
#include "regen/errors.hpp"
#include "regen/regen_core.hpp"

using namespace regen;

namespace {

const BDSpec kBase(0.5, 1.0, 0.5);

// sum_{k<=n} alpha_k, alpha_k = prod_{i<=k} mu i / (lambda i + a), in long double
long double alpha_sum(const BDSpec& s, long n) {
  long double term = 1.0L, total = 1.0L;
  for (long i = 1; i <= n; ++i) {
    term *= static_cast<long double>(s.mu()) * i / (static_cast<long double>(s.lambda()) * i + s.a());
    total += term;
  }
  return total;
}

}  // namespace

TEST_CASE("stationary law of the base spec is geometric") {
  const auto st = stationary(kBase, 40);
  CHECK(st.theta[0] == 1.0);
  CHECK(st.p0 == doctest::Approx(0.5).epsilon(1e-14));
  for (long k = 0; k <= 40; ++k) {
    CHECK(st.p[k] == doctest::Approx(std::ldexp(1.0, -static_cast<int>(k) - 1)).epsilon(1e-13));
  }
  for (const auto& spec : {kBase, BDSpec(0.3, 1.0, 2.0), BDSpec(0.9, 1.0, 0.1)}) {
    const auto s = stationary(spec, 5000);
    double total = 0.0;
    for (double p : s.p) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(bd_alpha_T(kBase) == doctest::Approx(4.0));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(BDSpec(1.0, 1.0, 0.5), ModelError);
  CHECK_THROWS_AS(BDSpec(0.5, 1.0, 0.0), ModelError);
  CHECK_THROWS_AS(BDSpec(-0.5, 1.0, 1.0), ModelError);
}

TEST_CASE("exact cycle-max tail") {
  CHECK(q_exact(kBase, 0) == 1.0);
  // alpha_k = 2^k/(k+1): 1/(1 + 1 + 4/3)
  CHECK(q_exact(kBase, 2) == doctest::Approx(3.0 / 10.0).epsilon(1e-15));
  for (const auto& spec : {kBase, BDSpec(0.5, 1.0, 1.0), BDSpec(0.2, 0.7, 3.0)}) {
    double prev = 2.0;
    for (long n = 0; n <= 300; ++n) {
      const double lq = log_q_exact(spec, n);
      CHECK(lq < prev);
      prev = lq;
      if (n <= 60) {
        const double oracle = static_cast<double>(-std::log(alpha_sum(spec, n)));
        CHECK(lq == doctest::Approx(oracle).epsilon(1e-13));
        CHECK(std::log(q_exact(spec, n)) == doctest::Approx(oracle).epsilon(1e-13));
      }
    }
  }
  CHECK(std::isfinite(log_q_exact(kBase, 100000)));
}

TEST_CASE("constant C against closed forms") {
  // prod_{i<=n} i/(i+c) ~ Gamma(1+c) n^{-c}
  const auto c1 = c_constant(kBase);
  CHECK(c1.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(c1.error < 1e-6);
  CHECK(c_constant(BDSpec(0.5, 1.0, 1.0)).value == doctest::Approx(2.0).epsilon(1e-6));
  for (double c : {0.5, 1.0, 2.0, 3.5}) {
    const BDSpec spec(0.5, 1.0, 0.5 * c);
    const double direct = c_constant(spec).value;
    const double harmonic = c_constant_harmonic(spec).value;
    CHECK(direct == doctest::Approx(std::tgamma(1.0 + c)).epsilon(1e-6));
    CHECK(harmonic == doctest::Approx(direct).epsilon(1e-8));
  }
  CHECK_THROWS_AS(c_constant(kBase, {3, 1e-15}), ConvergenceError);
  CHECK_THROWS_AS(c_constant(kBase, {2, 1e-6}), DomainError);
}

TEST_CASE("asymptotic tail") {
  for (long n : {1L, 5L, 30L}) {
    CHECK(q_asymptotic(kBase, n) ==
          doctest::Approx(n * std::ldexp(1.0, -static_cast<int>(n) - 1)).epsilon(1e-6));
  }
  const double c = c_constant(kBase).value;
  for (long n = 40; n <= 200; ++n) {
    const double ratio = std::exp(log_q_exact(kBase, n) - log_q_asymptotic(kBase, n, c));
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 1.1);
  }
  for (double a : {0.25, 0.5, 1.0}) {
    const BDSpec spec(0.5, 1.0, a);
    CHECK(std::exp(log_q_exact(spec, 200) - log_q_asymptotic(spec, 200)) ==
          doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("envelope and R1") {
  const auto env = bd_envelope(kBase);
  CHECK(env.x0 == doctest::Approx(1.0 / std::numbers::ln2));
  CHECK(env.rate(10.0) == doctest::Approx(10.0 * std::numbers::ln2 - std::log(10.0)));
  CHECK(env.rate_inv(env.rate(50.0)) == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(env.rate_deriv(4.0) == doctest::Approx(std::numbers::ln2 - 0.25));
  CHECK(std::abs(bd_rate1(kBase, 300) - std::numbers::ln2) < 0.05);
  double lo = 1e300, hi = -1e300;
  for (long n = 100; n <= 300; ++n) {
    lo = std::min(lo, bd_rate1(kBase, n));
    hi = std::max(hi, bd_rate1(kBase, n));
  }
  CHECK(hi - lo < 0.1);
  CHECK(env.r1_bound >= hi);
  CHECK(env.r1_bound < 1.5);
}

TEST_CASE("return-to-zero cycles") {
  const BDModel model(kBase);
  Philox rng(5, 0);
  CycleTrace tr;
  const int cycles = 1000000;
  std::vector<long> above(9, 0);
  double duration = 0.0;
  for (int i = 0; i < cycles; ++i) {
    model.next_cycle(rng, tr);
    REQUIRE(tr.sample.cycle_max >= 1.0);
    if (i < 100000) duration += tr.sample.duration;
    for (long n = 1; n <= 8; ++n) above[n] += tr.sample.cycle_max > n;
  }
  CHECK(duration / 100000 == doctest::Approx(4.0).epsilon(0.03));
  for (long n = 1; n <= 8; ++n) {
    const double q = q_exact(kBase, n);
    const double se = std::sqrt(q * (1 - q) / cycles);
    CHECK(std::abs(static_cast<double>(above[n]) / cycles - q) < 3.0 * se);
  }
}

TEST_CASE("occupation of a long trajectory matches the stationary law") {
  // time-weighted occupation over 1e7 jumps, sigma from 100 batch means
  const auto st = stationary(kBase, 10);
  Philox rng(6, 0);
  const int batches = 100;
  const long per_batch = 100000;
  std::vector<std::vector<double>> freq(batches, std::vector<double>(11, 0.0));
  long x = 0;
  for (int b = 0; b < batches; ++b) {
    double elapsed = 0.0;
    for (long e = 0; e < per_batch; ++e) {
      const double up = kBase.birth(x), down = kBase.death(x);
      const double dt = rng.exponential() / (up + down);
      elapsed += dt;
      if (x <= 10) freq[b][x] += dt;
      x += (rng.uniform() * (up + down) < up) ? 1 : -1;
    }
    for (auto& f : freq[b]) f /= elapsed;
  }
  for (int k = 0; k <= 10; ++k) {
    double m = 0.0, v = 0.0;
    for (int b = 0; b < batches; ++b) m += freq[b][k];
    m /= batches;
    for (int b = 0; b < batches; ++b) v += (freq[b][k] - m) * (freq[b][k] - m);
    const double se = std::sqrt(v / (batches - 1) / batches);
    CHECK(std::abs(m - st.p[k]) < 3.0 * se);
  }
}

TEST_CASE("corollary 3 statistics") {
  const double c = kBase.a_over_lambda();
  const double log_inv_rho = std::log(1.0 / kBase.rho());
  for (double t : {100.0, 1e4, 1e7, 1e12}) {
    const double x = (std::log(t) + c * l2(t)) / log_inv_rho;
    const auto s = corollary3_stat(kBase, t, x);
    CHECK(s.u2 == doctest::Approx(c).epsilon(1e-12));
    CHECK(s.u3 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(corollary3_stat(kBase, 10.0, 3.0), DomainError);

  // against the envelope route, with A = A0(t) and s2 = r0(A)(X - A)/L2(t):
  //   u2 - s2 = ((a/lambda)(X - A)/A + (a/lambda) log A - log alpha_T) / L2(t)
  const auto env = bd_envelope(kBase);
  const double alpha_T = bd_alpha_T(kBase);
  const auto run = run_cycles(BDModel(kBase), 1e7, {}, 11);
  const auto u = corollary3_stats(run.path, kBase);
  const auto s = theorem1_trace(run.path, env, alpha_T);
  REQUIRE(u.size() == s.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    REQUIRE(u[i].t == s[i].t);
    const double x = run.path.checkpoints[run.path.checkpoints.size() - u.size() + i].xbar;
    const double A = a0_of_t(env, alpha_T, u[i].t);
    const double gap = (c * (x - A) / A + c * std::log(A) - std::log(alpha_T)) / l2(u[i].t);
    CHECK(u[i].u2 - s[i].s2 == doctest::Approx(gap).epsilon(1e-9));
  }
  // on the centering curve the gap creeps up toward a/lambda, not 0
  double prev = -1.0;
  for (double t : {1e7, 1e20, 1e100, 1e300}) {
    const double A = a0_of_t(env, alpha_T, t);
    const double gap = (c * std::log(A) - std::log(alpha_T)) / l2(t);
    CHECK(gap > prev);
    CHECK(gap < c);
    prev = gap;
  }
  CHECK(prev > 0.75);
}

TEST_CASE("expected hitting times") {
  CHECK(expected_hitting_time(kBase, 1) == doctest::Approx(2.0));  // Exp(a) from 0
  // from 0 to 2: 1/a + E[1 -> 2], E[1 -> 2] = (1 + mu_1 E[0 -> 1]) / lambda_1
  CHECK(expected_hitting_time(kBase, 2) == doctest::Approx(2.0 + (1.0 + 1.0 * 2.0) / 1.0));
  CHECK_THROWS_AS(expected_hitting_time(kBase, 5, 5), DomainError);
  CHECK(expected_hitting_time(kBase, 12) > expected_hitting_time(kBase, 8));
  CHECK(hitting_time_scale(kBase, 12) == doctest::Approx(12.0 / 4096.0).epsilon(1e-6));
}

TEST_CASE("hitting-time samples") {
  const auto h8 = hitting_time_stat(kBase, 8, 400, 3);
  const auto h12 = hitting_time_stat(kBase, 12, 400, 3);
  CHECK(h8.raw.size() == 400);
  double m8 = 0.0, m12 = 0.0;
  for (double t : h8.raw) m8 += t;
  for (double t : h12.raw) m12 += t;
  CHECK(m12 > m8);
  CHECK(h12.limit_rate == doctest::Approx(0.25));
  CHECK(h12.scale == doctest::Approx(12.0 / 4096.0).epsilon(1e-6));
  for (std::size_t i = 0; i < h12.raw.size(); ++i) CHECK(h12.scaled[i] == h12.raw[i] * h12.scale);

  // simulated mean against the exact passage sum
  const auto h6 = hitting_time_stat(kBase, 6, 4000, 4);
  double m6 = 0.0, v6 = 0.0;
  for (double t : h6.raw) m6 += t;
  m6 /= 4000;
  for (double t : h6.raw) v6 += (t - m6) * (t - m6);
  CHECK(std::abs(m6 - expected_hitting_time(kBase, 6)) < 4.0 * std::sqrt(v6 / 4000 / 3999));

  HittingOptions from3;
  from3.initial_state = 3;
  const auto h = hitting_time_stat(kBase, 6, 2000, 4, from3);
  double mh = 0.0;
  for (double t : h.raw) mh += t;
  CHECK(mh / 2000 == doctest::Approx(expected_hitting_time(kBase, 6, 3)).epsilon(0.1));

  // identical seeds reproduce the sample
  CHECK(hitting_time_stat(kBase, 8, 400, 3).raw == h8.raw);
  CHECK_THROWS_AS(hitting_time_stat(kBase, 25, 2000, 1), BudgetError);
  CHECK_THROWS_AS(hitting_time_stat(kBase, 1, 10, 1), DomainError);
}
