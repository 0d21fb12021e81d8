#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "regen/rng.hpp"
#include "regen/stats.hpp"

using regen::Philox;
using regen::detail::philox4x32_10;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}) ==
        A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                      A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                      A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same seed and stream reproduce the same bits") {
  Philox a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());
}

TEST_CASE("streams and seeds give distinct sequences") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 64; ++s) {
    firsts.insert(Philox(1, s)());
    firsts.insert(Philox(s + 2, 0)());
  }
  CHECK(firsts.size() == 128);
}

TEST_CASE("uniform stays in the open unit interval and is flat") {
  Philox rng(3, 0);
  std::vector<double> u(200000);
  for (auto& x : u) {
    x = rng.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
  }
  const double ks = regen::ks_distance(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(ks < regen::ks_critical_99(u.size()));
}

TEST_CASE("exponential variates have the requested mean") {
  Philox rng(5, 1);
  regen::CompensatedSum s;
  const int n = 400000;
  for (int i = 0; i < n; ++i) s.add(rng.exponential(2.0));
  // sd of the mean is 0.5/sqrt(n) ~ 8e-4
  CHECK(s.value() / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("works as a standard uniform random bit generator") {
  Philox rng(9, 0);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  std::shuffle(v.begin(), v.end(), rng);
  std::sort(v.begin(), v.end());
  CHECK(v == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
}
