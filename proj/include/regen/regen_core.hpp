#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regen/envelope.hpp"
#include "regen/rng.hpp"

namespace regen {

// One regeneration cycle: its duration T_k and its maximum Y_k.
struct CycleSample {
  double duration = 0.0;
  double cycle_max = 0.0;
};

// Running-maximum record inside a cycle: from `offset` (model time since the
// cycle start) the process has reached `value`. Records are increasing in
// both fields.
struct CycleRecord {
  double offset = 0.0;
  double value = 0.0;
};

struct CycleTrace {
  CycleSample sample;
  std::vector<CycleRecord> records;  // empty for opaque generators
};

// Generator of i.i.d. regeneration cycles. Implementations are immutable and
// may be shared between threads; all randomness comes from the caller's stream.
class CycleModel {
 public:
  virtual ~CycleModel() = default;

  // Overwrites `out` with the next cycle.
  virtual void next_cycle(Philox& rng, CycleTrace& out) const = 0;

  // True when next_cycle fills the within-cycle running-maximum records.
  virtual bool exposes_path() const { return true; }

  virtual std::string name() const = 0;
};

// Cycles of fixed duration whose maximum `level` is reached at the cycle start.
class DeterministicModel final : public CycleModel {
 public:
  DeterministicModel(double duration, double level);
  void next_cycle(Philox& rng, CycleTrace& out) const override;
  std::string name() const override { return "deterministic"; }

 private:
  double duration_;
  double level_;
};

// Hides the within-cycle path of another model, forcing the bracket mode.
class OpaqueModel final : public CycleModel {
 public:
  explicit OpaqueModel(const CycleModel& inner) : inner_(inner) {}
  void next_cycle(Philox& rng, CycleTrace& out) const override;
  bool exposes_path() const override { return false; }
  std::string name() const override { return inner_.name() + "-opaque"; }

 private:
  const CycleModel& inner_;
};

struct TimeGrid {
  double t_min = 100.0;
  double ratio = 1.05;
};

// t_j = t_min * ratio^j for t_j <= t_max, closed by t_max itself.
std::vector<double> geometric_time_grid(const TimeGrid& grid, double t_max);

struct PathCheckpoint {
  double t = 0.0;
  double xbar = 0.0;    // sup_{s<t} X(s); equals z_lower in bracket mode
  long n_cycles = 0;    // N(t) = max{k : S_k <= t}
  double z_lower = 0.0;  // Z_{N(t)}, -inf when N(t) = 0
  double z_upper = 0.0;  // Z_{N(t)+1}
};

struct MaxPath {
  std::vector<PathCheckpoint> checkpoints;
  bool exact = true;  // false when recorded in bracket mode
};

struct RunSummary {
  long total_cycles = 0;
  double elapsed = 0.0;  // S_K at the end of the run
  double alpha_hat = 0.0;
  double mean_cycle_max = 0.0;
};

struct RunResult {
  MaxPath path;
  RunSummary summary;
};

// Streams cycles from stream (seed, stream) until S_k > t_max, recording the
// running maximum at every grid time. Exact X-bar is recorded when the model
// exposes its path; otherwise xbar = Z_{N(t)} and path.exact is false.
RunResult run_cycles(const CycleModel& model, double t_max, const TimeGrid& grid,
                     std::uint64_t seed, std::uint64_t stream = 0);

// Empirical mean cycle duration over a burn-in of `cycles` cycles.
double estimate_alpha_T(const CycleModel& model, long cycles, std::uint64_t seed,
                        std::uint64_t stream = 0);

// Normalized statistics per checkpoint with A0(t) = R0^{-1}(log(t/alpha_T)).
// Every checkpoint must satisfy t > e^e and log(t/alpha_T) > R0(x0).
std::vector<NormalizedStats> theorem1_trace(const MaxPath& path, const RateEnvelope& env,
                                            double alpha_T);

struct SampledStat {
  long n = 0;
  double xbar = 0.0;  // max_{0<=i<=n} X_i
  NormalizedStats stats;
};

// Statistics of a process observed at event times t_0 = 0 < t_1 < ... with
// values X_i, centred at A(n) = R0^{-1}(log(alpha n / alpha_T)). Evaluated at
// every index in `at` (ascending, each < size of the data); indices where the
// statistic is undefined must not be requested.
std::vector<SampledStat> proposition1_trace(std::span<const double> event_times,
                                            std::span<const double> event_values,
                                            const RateEnvelope& env, double alpha,
                                            double alpha_T, std::span<const long> at);

}  // namespace regen
