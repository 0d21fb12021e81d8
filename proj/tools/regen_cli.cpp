// regen_cli: tail tables, simulation campaigns, hitting-time samples and
// model constants for the built-in regenerative models.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "regen/errors.hpp"
#include "regen/harness.hpp"

namespace h = regen::harness;

namespace {

void add_model_options(CLI::App& app, h::ModelConfig& m) {
  app.add_option("--model", m.kind, "gig1 | mmm | bd | det")->capture_default_str();
  app.add_option("--interarrival", m.interarrival, "gig1 interarrival law, e.g. exp:0.5")
      ->capture_default_str();
  app.add_option("--service", m.service, "gig1 service law, e.g. exp:1 or det:1")
      ->capture_default_str();
  app.add_option("--lambda", m.lambda, "arrival / per-capita birth rate")->capture_default_str();
  app.add_option("--mu", m.mu, "service / per-capita death rate")->capture_default_str();
  app.add_option("--a", m.a, "bd immigration rate")->capture_default_str();
  app.add_option("--servers", m.servers, "mmm server count")->capture_default_str();
  app.add_option("--duration", m.duration, "det cycle length")->capture_default_str();
  app.add_option("--level", m.level, "det cycle maximum")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Running-maximum normalisation experiments for regenerative processes"};
  app.set_config("--config", "", "TOML config file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  h::ExperimentConfig cfg;
  std::string output;
  std::string summary_path;
  int threads = 0;
  add_model_options(app, cfg.model);
  app.add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  app.add_option("-o,--output", output, "output file (default stdout)");
  app.add_option("--summary", summary_path, "also write the JSON summary here");
  app.add_option("--format", cfg.format, "csv | json")->capture_default_str();
  app.add_option("--threads", threads, "worker cap (sets REGEN_THREADS)");

  auto* tail = app.add_subcommand("tail", "exact vs asymptotic cycle-maximum tail table");
  tail->add_option("--n-min", cfg.n_min)->capture_default_str();
  tail->add_option("--n-max", cfg.n_max)->capture_default_str();

  long sim_replicas = 1;
  auto* simulate = app.add_subcommand("simulate", "running-maximum statistics on a time grid");
  simulate->add_option("--t-max", cfg.t_max)->capture_default_str();
  simulate->add_option("--t-min", cfg.grid.t_min)->capture_default_str();
  simulate->add_option("--grid-ratio", cfg.grid.ratio)->capture_default_str();
  simulate->add_option("--replicas", sim_replicas, "seeds seed, seed+1, ...")
      ->capture_default_str();

  long hit_replicas = 2000;
  auto* hittime = app.add_subcommand("hittime", "scaled first-passage times of level n (bd)");
  hittime->add_option("--n", cfg.n)->capture_default_str();
  hittime->add_option("--replicas", hit_replicas)->capture_default_str();
  hittime->add_option("--initial-state", cfg.initial_state)->capture_default_str();
  hittime->add_option("--event-budget", cfg.event_budget)->capture_default_str();

  auto* constants = app.add_subcommand("constants", "model constants as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(h::ExitCode::config);
  }

  if (threads > 0) setenv("REGEN_THREADS", std::to_string(threads).c_str(), 1);

  try {
    std::ofstream file;
    if (!output.empty()) {
      file.open(output);
      if (!file) throw regen::ConfigError("cannot open output file " + output);
    }
    std::ostream& out = output.empty() ? std::cout : file;

    nlohmann::json summary;
    if (tail->parsed()) {
      summary = h::cmd_tail(cfg, out);
    } else if (simulate->parsed()) {
      cfg.replicas = sim_replicas;
      summary = h::cmd_simulate(cfg, out);
    } else if (hittime->parsed()) {
      cfg.replicas = hit_replicas;
      summary = h::cmd_hittime(cfg, out);
    } else if (constants->parsed()) {
      summary = h::cmd_constants(cfg, out);
    }
    if (!summary_path.empty()) {
      std::ofstream js(summary_path);
      if (!js) throw regen::ConfigError("cannot open summary file " + summary_path);
      js << summary.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(h::classify(e));
  }
  return 0;
}
