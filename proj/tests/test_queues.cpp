#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "regen/errors.hpp"
#include "regen/queues.hpp"
#include "regen/stats.hpp"

using namespace regen;

TEST_CASE("Lindley cycle with deterministic gaps") {
  const GiG1Spec spec(Deterministic{2.0}, Deterministic{1.0});
  Philox rng(1, 0);
  LindleyCycle c;
  lindley_cycle(spec, rng, c, true);
  CHECK(c.customers == 1);
  CHECK(c.sample.cycle_max == 0.0);
  CHECK(c.sample.duration == 2.0);
  CHECK(c.waits == std::vector<double>{0.0});
}

TEST_CASE("Lindley cycles: nonnegative waits and idle time") {
  const GiG1Spec spec(Uniform{0.0, 2.0}, Erlang{2, 4.0});
  Philox rng(2, 0);
  LindleyCycle c;
  for (int i = 0; i < 20000; ++i) {
    lindley_cycle(spec, rng, c, true);
    REQUIRE(c.waits.size() == static_cast<std::size_t>(c.customers));
    CHECK(c.waits.front() == 0.0);
    double hi = 0.0;
    for (double w : c.waits) {
      REQUIRE(w >= 0.0);
      hi = std::max(hi, w);
    }
    CHECK(c.sample.cycle_max == hi);
    // the server idles at the end of every cycle
    CHECK(c.sample.duration >= c.service_total);
  }
}

TEST_CASE("M/M/1 waiting-time cycles: tail slope and customers per cycle") {
  const GiG1Spec spec(Exponential{0.5}, Exponential{1.0});
  Philox rng(3, 0);
  LindleyCycle c;
  const int cycles = 1000000;
  std::vector<double> maxima(cycles);
  double customers = 0.0;
  for (int i = 0; i < cycles; ++i) {
    lindley_cycle(spec, rng, c);
    maxima[i] = c.sample.cycle_max;
    customers += c.customers;
  }
  CHECK(customers / cycles == doctest::Approx(2.0).epsilon(0.02));
  std::vector<double> levels;
  for (double x = 2; x <= 16; x += 1) levels.push_back(x);
  const auto fit = fit_log_tail(maxima, levels);
  MESSAGE("slope " << fit.slope);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("Cramer root") {
  CHECK(cramer_gamma(Exponential{0.5}, Exponential{1.0}).gamma ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(cramer_gamma(Exponential{0.25}, Exponential{1.0}).gamma ==
        doctest::Approx(0.75).epsilon(1e-10));
  // M/D/1: e^g = 1 + g / rho
  CHECK(cramer_gamma(Exponential{0.5}, Deterministic{1.0}).gamma ==
        doctest::Approx(x_rho_root(0.5)).epsilon(1e-12));
  CHECK(cramer_gamma(Exponential{0.8}, Deterministic{1.0}).gamma ==
        doctest::Approx(x_rho_root(0.8)).epsilon(1e-12));
  // reference values from an independent scipy brentq on quad-integrated MGFs
  CHECK(cramer_gamma(Exponential{0.5}, Weibull{2.0, 0.5}).gamma ==
        doctest::Approx(3.8097548124883507).epsilon(1e-9));
  CHECK(cramer_gamma(Uniform{0.0, 2.0}, Erlang{2, 4.0}).gamma ==
        doctest::Approx(2.0336867597994677).epsilon(1e-9));

  const auto r = cramer_gamma(Exponential{0.5}, Exponential{1.0});
  CHECK(r.tilted_mean > 0.0);
  CHECK(std::isfinite(r.tilted_mean));

  CHECK_THROWS_AS(cramer_gamma(Deterministic{1.0}, Deterministic{0.5}), NoRootError);
  CHECK_THROWS_AS(GiG1Spec(Exponential{1.0}, Exponential{0.5}), ModelError);
}

TEST_CASE("x_rho root") {
  for (double rho : {0.1, 0.5, 0.9, 0.999}) {
    const double x = x_rho_root(rho);
    CHECK(x > 0.0);
    CHECK(std::exp(x) == doctest::Approx(1.0 + x / rho).epsilon(1e-12));
    // unique positive root: the sign of e^x - 1 - x/rho changes once
    int changes = 0;
    double prev = -1.0;
    for (double y = 1e-4 * x; y < 20.0 * x + 5.0; y += 1e-3 * x) {
      const double f = std::expm1(y) - y / rho;
      if ((f > 0) != (prev > 0)) ++changes;
      prev = f;
    }
    CHECK(changes == 1);
  }
  CHECK(x_rho_root(0.999) < 0.01);
  CHECK_THROWS_AS(x_rho_root(1.0), DomainError);
  CHECK_THROWS_AS(x_rho_root(0.0), DomainError);
}

TEST_CASE("MGF quadrature agrees with closed forms") {
  const std::vector<Distribution> laws{Exponential{2.0}, Uniform{0.5, 3.0}, Erlang{3, 1.5},
                                       Deterministic{1.25}};
  for (const auto& d : laws) {
    const double top = std::min(mgf_abscissa(d), 3.0);
    for (double s = -2.0; s < top - 0.05; s += 0.25) {
      const auto closed = mgf_closed_form(d, s);
      REQUIRE(closed.has_value());
      CHECK(mgf_quadrature(d, s) == doctest::Approx(*closed).epsilon(1e-10));
    }
  }
  CHECK(mgf_abscissa(Exponential{2.0}) == 2.0);
  CHECK(std::isinf(mgf(Exponential{2.0}, 2.5)));
  CHECK_FALSE(mgf_closed_form(Weibull{2.0, 1.0}, 0.3).has_value());
  // Weibull with shape 1 is exponential
  CHECK(mgf(Weibull{1.0, 0.5}, 1.0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("distribution validation and means") {
  CHECK(mean(Erlang{3, 1.5}) == 2.0);
  CHECK(mean(Weibull{1.0, 2.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(validate(Distribution{Exponential{-1.0}}), ModelError);
  CHECK_THROWS_AS(validate(Distribution{Uniform{2.0, 1.0}}), ModelError);
  CHECK_THROWS_AS(validate(Distribution{Erlang{0, 1.0}}), ModelError);
}

TEST_CASE("GI/G/1 envelope and alpha_T") {
  const GiG1Spec mm1(Exponential{0.5}, Exponential{1.0});
  const auto env = gig1_envelope(mm1);
  CHECK(env.rate(4.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(env.rate_inv(2.0) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(*gig1_alpha_T(mm1) == doctest::Approx(4.0));
  CHECK_FALSE(gig1_alpha_T(GiG1Spec(Uniform{0.0, 2.0}, Erlang{2, 4.0})).has_value());
}

TEST_CASE("M/M/m exact tail and constants") {
  const MMmSpec one(0.5, 1.0, 1);
  for (long n = 0; n <= 40; ++n) {
    // gambler's ruin from 1 with up/down odds 1:2
    const double oracle = -std::log(std::ldexp(1.0, static_cast<int>(n + 1)) - 1.0);
    CHECK(mmm_log_tail(one, n) == doctest::Approx(oracle).epsilon(1e-12));
  }
  const MMmSpec two(1.0, 1.0, 2);
  CHECK(mmm_p0(two) == doctest::Approx(1.0 / 3.0));
  CHECK(mmm_alpha_T(two) == doctest::Approx(3.0));
  CHECK(mmm_alpha_T(one) == doctest::Approx(4.0));
  for (const auto& spec : {one, two}) {
    const double slope = mmm_log_tail(spec, 100) - mmm_log_tail(spec, 101);
    CHECK(slope == doctest::Approx(std::numbers::ln2).epsilon(1e-9));
    const auto env = mmm_envelope(spec);
    CHECK(env.rate(10.0) == doctest::Approx(10.0 * std::numbers::ln2));
    CHECK(env.r1_bound < 2.0);
  }
  CHECK_THROWS_AS(MMmSpec(3.0, 1.0, 2), ModelError);
  CHECK_THROWS_AS(MMmSpec(0.5, 1.0, 0), ModelError);
}

TEST_CASE("M/M/m simulated cycle maxima decay at rate log(1/rho)") {
  for (int m : {1, 2}) {
    const MMmSpec spec(0.5 * m, 1.0, m);
    const MMmModel model(spec);
    Philox rng(40 + m, 0);
    CycleTrace tr;
    const int cycles = 1000000;
    std::vector<double> maxima(cycles);
    double duration = 0.0;
    for (int i = 0; i < cycles; ++i) {
      model.next_cycle(rng, tr);
      maxima[i] = tr.sample.cycle_max;
      duration += tr.sample.duration;
      REQUIRE(tr.records.front().value == 1.0);
    }
    std::vector<double> levels;
    for (double x = 1.5; x <= 12.5; x += 1.0) levels.push_back(x);
    const auto fit = fit_log_tail(maxima, levels);
    MESSAGE("m = " << m << " slope " << fit.slope);
    CHECK(fit.slope == doctest::Approx(std::numbers::ln2).epsilon(0.05));
    CHECK(duration / cycles == doctest::Approx(mmm_alpha_T(spec)).epsilon(0.02));
    // empirical tail against the exact ladder formula
    for (long n = 1; n <= 6; ++n) {
      long above = 0;
      for (double x : maxima) above += x > n;
      const double p = std::exp(mmm_log_tail(spec, n));
      const double se = std::sqrt(p * (1 - p) / cycles);
      CHECK(std::abs(static_cast<double>(above) / cycles - p) < 4.0 * se);
    }
  }
}
