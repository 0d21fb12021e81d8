#include "regen/ladder.hpp"

#include <cmath>

#include "regen/errors.hpp"

namespace regen {

std::vector<double> log_ladder_tails(const std::function<double(long)>& log_ratio, long n_max) {
  if (n_max < 0) throw DomainError("ladder tail: n must be >= 0");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max + 1));
  // Running log alpha_k and log sum_{j<=k} alpha_j, kept as a scaled
  // compensated sum: total = exp(scale) * (sum + comp).
  double log_alpha = 0.0;
  double scale = 0.0;
  double sum = 1.0;
  double comp = 0.0;
  out.push_back(0.0);
  for (long k = 1; k <= n_max; ++k) {
    log_alpha += log_ratio(k);
    if (log_alpha > scale) {
      const double shrink = std::exp(scale - log_alpha);
      sum *= shrink;
      comp *= shrink;
      scale = log_alpha;
    }
    const double term = std::exp(log_alpha - scale);
    const double t = sum + term;
    comp += (std::abs(sum) >= term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    out.push_back(-(scale + std::log(sum + comp)));
  }
  return out;
}

double log_ladder_tail(const std::function<double(long)>& log_ratio, long n) {
  return log_ladder_tails(log_ratio, n).back();
}

}  // namespace regen
