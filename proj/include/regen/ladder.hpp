#pragma once

#include <functional>
#include <vector>

namespace regen {

// Skip-free chain on {0, 1, 2, ...} with birth rates b_i and death rates d_i.
// For a cycle that leaves 0 through state 1, the cycle maximum exceeds n with
// probability
//   q(n) = 1 / sum_{k=0}^{n} alpha_k,   alpha_k = prod_{i=1}^{k} d_i / b_i,
// the gambler's-ruin probability of reaching n + 1 before 0 from 1.
//
// `log_ratio(i)` returns log(d_i / b_i). The sum is accumulated in log
// domain so n may be arbitrarily large.
double log_ladder_tail(const std::function<double(long)>& log_ratio, long n);

// log q(0..n_max) in a single pass.
std::vector<double> log_ladder_tails(const std::function<double(long)>& log_ratio, long n_max);

}  // namespace regen
