#include "regen/regen_core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

#include "regen/errors.hpp"
#include "regen/stats.hpp"

namespace regen {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

DeterministicModel::DeterministicModel(double duration, double level)
    : duration_(duration), level_(level) {
  if (!(duration > 0.0)) throw ModelError("deterministic model: duration must be positive");
}

void DeterministicModel::next_cycle(Philox&, CycleTrace& out) const {
  out.sample = {duration_, level_};
  out.records.assign(1, {0.0, level_});
}

void OpaqueModel::next_cycle(Philox& rng, CycleTrace& out) const {
  inner_.next_cycle(rng, out);
  out.records.clear();
}

std::vector<double> geometric_time_grid(const TimeGrid& grid, double t_max) {
  if (!(grid.t_min > 0.0) || !(grid.ratio > 1.0) || !(t_max > grid.t_min)) {
    throw DomainError("time grid: need t_max > t_min > 0 and ratio > 1");
  }
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double t = grid.t_min * std::pow(grid.ratio, j);
    if (t >= t_max) break;
    out.push_back(t);
  }
  out.push_back(t_max);
  return out;
}

RunResult run_cycles(const CycleModel& model, double t_max, const TimeGrid& grid,
                     std::uint64_t seed, std::uint64_t stream) {
  const auto times = geometric_time_grid(grid, t_max);
  const bool exact = model.exposes_path();
  Philox rng(seed, stream);
  RunResult result;
  result.path.exact = exact;
  result.path.checkpoints.reserve(times.size());

  CycleTrace trace;
  CompensatedSum max_sum;
  double start = 0.0;        // S_k of the current cycle
  double completed = kNegInf;  // Z_k over completed cycles
  long cycles = 0;
  std::size_t next = 0;

  while (start <= t_max) {
    model.next_cycle(rng, trace);
    const double duration = trace.sample.duration;
    if (!(duration > 0.0)) throw ModelError(model.name() + ": cycle with nonpositive duration");
    const double end = start + duration;
    const double with_current = std::max(completed, trace.sample.cycle_max);

    // Grid times inside [start, end): N(t) = cycles, partial current cycle.
    std::size_t record = 0;
    double partial = completed;
    for (; next < times.size() && times[next] < end; ++next) {
      const double t = times[next];
      PathCheckpoint cp;
      cp.t = t;
      cp.n_cycles = cycles;
      cp.z_lower = completed;
      cp.z_upper = with_current;
      if (exact) {
        while (record < trace.records.size() && start + trace.records[record].offset < t) {
          partial = std::max(partial, trace.records[record].value);
          ++record;
        }
        cp.xbar = partial;
      } else {
        cp.xbar = completed;
      }
      assert(cp.z_lower <= cp.xbar && cp.xbar <= cp.z_upper);
      assert(result.path.checkpoints.empty() || result.path.checkpoints.back().xbar <= cp.xbar);
      result.path.checkpoints.push_back(cp);
    }

    completed = with_current;
    max_sum.add(trace.sample.cycle_max);
    start = end;
    ++cycles;
  }

  result.summary.total_cycles = cycles;
  result.summary.elapsed = start;
  result.summary.alpha_hat = start / static_cast<double>(cycles);
  result.summary.mean_cycle_max = max_sum.value() / static_cast<double>(cycles);
  return result;
}

double estimate_alpha_T(const CycleModel& model, long cycles, std::uint64_t seed,
                        std::uint64_t stream) {
  if (cycles < 1) throw DomainError("estimate_alpha_T: need at least one cycle");
  Philox rng(seed, stream);
  CycleTrace trace;
  CompensatedSum total;
  for (long k = 0; k < cycles; ++k) {
    model.next_cycle(rng, trace);
    total.add(trace.sample.duration);
  }
  return total.value() / static_cast<double>(cycles);
}

std::vector<NormalizedStats> theorem1_trace(const MaxPath& path, const RateEnvelope& env,
                                            double alpha_T) {
  const double ee = std::exp(std::numbers::e);
  std::vector<NormalizedStats> out;
  out.reserve(path.checkpoints.size());
  for (const auto& cp : path.checkpoints) {
    if (!(cp.t > ee)) throw DomainError("theorem1_trace: checkpoint at or below e^e");
    out.push_back(normalized_stats(env, alpha_T, cp.t, cp.xbar));
  }
  return out;
}

std::vector<SampledStat> proposition1_trace(std::span<const double> event_times,
                                            std::span<const double> event_values,
                                            const RateEnvelope& env, double alpha,
                                            double alpha_T, std::span<const long> at) {
  if (event_times.size() != event_values.size() || event_times.empty()) {
    throw DomainError("proposition1_trace: times and values must be nonempty and aligned");
  }
  if (!(alpha > 0.0) || !(alpha_T > 0.0)) {
    throw DomainError("proposition1_trace: alpha and alpha_T must be positive");
  }
  for (std::size_t i = 1; i < event_times.size(); ++i) {
    if (!(event_times[i] > event_times[i - 1])) {
      throw DomainError("proposition1_trace: event times must be strictly increasing");
    }
  }
  std::vector<SampledStat> out;
  out.reserve(at.size());
  double running = kNegInf;
  std::size_t scanned = 0;
  long previous = -1;
  for (long n : at) {
    if (n <= previous || n < 0 || static_cast<std::size_t>(n) >= event_values.size()) {
      throw DomainError("proposition1_trace: indices must be ascending and within the data");
    }
    for (; scanned <= static_cast<std::size_t>(n); ++scanned) {
      running = std::max(running, event_values[scanned]);
    }
    const double nn = static_cast<double>(n);
    SampledStat s;
    s.n = n;
    s.xbar = running;
    s.stats = centred_stats(env, std::log(alpha * nn / alpha_T), nn, running);
    out.push_back(s);
    previous = n;
  }
  return out;
}

}  // namespace regen
