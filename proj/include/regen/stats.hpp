#pragma once

#include <functional>
#include <span>
#include <vector>

namespace regen {

// Kahan-Babuska (Neumaier) compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// sup_x |F_m(x) - F(x)| over the sorted sample; the input is copied.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);

// sup_x |F_m(x) - G_k(x)| between two empirical laws.
double ks_distance_two_sample(std::span<const double> a, std::span<const double> b);

// Approximate 99% one-sample KS critical value, 1.63/sqrt(m).
double ks_critical_99(std::size_t m);

struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> levels;
  std::vector<double> survival;  // empirical P(Y > level)
};

// Least-squares fit of -log P(Y > x) against x over the given levels.
// Levels whose empirical survival is zero are rejected with DomainError.
TailFit fit_log_tail(std::span<const double> sample, std::span<const double> levels);

double median(std::vector<double> values);

double mean(std::span<const double> values);

}  // namespace regen
