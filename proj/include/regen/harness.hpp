#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "regen/birth_death.hpp"
#include "regen/envelope.hpp"
#include "regen/queues.hpp"
#include "regen/regen_core.hpp"

namespace regen::harness {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

enum class ExitCode : int { ok = 0, failure = 1, config = 2, numeric = 3, budget = 4 };

// Maps an in-flight exception to the documented exit code.
ExitCode classify(const std::exception& e);

// "exp:RATE", "det:VALUE", "uniform:LO:HI", "erlang:K:RATE", "weibull:K:SCALE"
Distribution parse_distribution(const std::string& text);

struct ModelConfig {
  std::string kind = "bd";  // gig1 | mmm | bd | det
  std::string interarrival = "exp:0.5";
  std::string service = "exp:1";
  double lambda = 0.5;
  double mu = 1.0;
  double a = 0.5;
  int servers = 1;
  double duration = 1.0;  // det
  double level = 0.0;     // det
};

struct ExperimentConfig {
  ModelConfig model;
  double t_max = 1e5;
  TimeGrid grid;
  long replicas = 1;
  long n_min = 0;
  long n_max = 200;
  long n = 12;  // hittime target level
  long initial_state = 0;
  double event_budget = 1e9;
  std::uint64_t master_seed = kDefaultSeed;
  std::string format = "csv";  // csv | json
};

// Validated model with its envelope and alpha_T.
struct ResolvedModel {
  std::unique_ptr<CycleModel> model;
  RateEnvelope envelope;
  double alpha_T = 0.0;
  std::string alpha_route;
  std::optional<BDSpec> bd;
  nlohmann::json params;
};

// Re-validates every model invariant; throws ConfigError on bad input.
void validate(const ExperimentConfig& cfg);
ResolvedModel resolve(const ModelConfig& model, std::uint64_t seed);

std::string format_double(double x);

// Each command writes its primary output to `out` and returns the summary
// document (also the whole output when format is json).
nlohmann::json cmd_tail(const ExperimentConfig& cfg, std::ostream& out);
nlohmann::json cmd_simulate(const ExperimentConfig& cfg, std::ostream& out);
nlohmann::json cmd_hittime(const ExperimentConfig& cfg, std::ostream& out);
nlohmann::json cmd_constants(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace regen::harness
