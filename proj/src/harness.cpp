#include "regen/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "regen/errors.hpp"
#include "regen/parallel.hpp"
#include "regen/stats.hpp"

namespace regen::harness {
namespace {

using nlohmann::json;

constexpr std::uint64_t kBurnInStream = std::numeric_limits<std::uint64_t>::max();
constexpr long kBurnInCycles = 10'000;
constexpr double kS3Floor = 1e3;  // min-s3 is taken over t >= 1e3

double parse_number(const std::string& field, const std::string& whole) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw ConfigError("bad number '" + field + "' in distribution '" + whole + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string piece;
  std::istringstream is(text);
  while (std::getline(is, piece, sep)) parts.push_back(piece);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

json constant(double value, const std::string& route) {
  return json{{"value", value}, {"route", route}};
}

// NaN and infinities are not valid JSON numbers.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void require_bd(const ResolvedModel& rm, const std::string& command) {
  if (!rm.bd) throw ConfigError(command + " is only defined for the birth-death model");
}

struct SeedRun {
  std::uint64_t seed = 0;
  RunResult run;
  std::vector<NormalizedStats> stats;
  std::vector<Corollary3Stat> bd_stats;
};

}  // namespace

ExitCode classify(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ModelError*>(&e) ||
      dynamic_cast<const DomainError*>(&e)) {
    return ExitCode::config;
  }
  if (dynamic_cast<const NoRootError*>(&e) || dynamic_cast<const ConvergenceError*>(&e) ||
      dynamic_cast<const BracketError*>(&e) || dynamic_cast<const OverflowError*>(&e)) {
    return ExitCode::numeric;
  }
  if (dynamic_cast<const BudgetError*>(&e) || dynamic_cast<const CycleOverflow*>(&e)) {
    return ExitCode::budget;
  }
  return ExitCode::failure;
}

Distribution parse_distribution(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw ConfigError("empty distribution");
  const std::string& kind = parts[0];
  auto arity = [&](std::size_t n) {
    if (parts.size() != n + 1) {
      throw ConfigError("distribution '" + text + "' expects " + std::to_string(n) +
                        " parameter(s)");
    }
  };
  Distribution d;
  if (kind == "exp") {
    arity(1);
    d = Exponential{parse_number(parts[1], text)};
  } else if (kind == "det") {
    arity(1);
    d = Deterministic{parse_number(parts[1], text)};
  } else if (kind == "uniform") {
    arity(2);
    d = Uniform{parse_number(parts[1], text), parse_number(parts[2], text)};
  } else if (kind == "erlang") {
    arity(2);
    const double k = parse_number(parts[1], text);
    if (k != std::floor(k) || k < 1 || k > 1e6) throw ConfigError("erlang shape must be a positive integer");
    d = Erlang{static_cast<int>(k), parse_number(parts[2], text)};
  } else if (kind == "weibull") {
    arity(2);
    d = Weibull{parse_number(parts[1], text), parse_number(parts[2], text)};
  } else {
    throw ConfigError("unknown distribution '" + kind + "'");
  }
  try {
    regen::validate(d);
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  return d;
}

void validate(const ExperimentConfig& cfg) {
  const auto& k = cfg.model.kind;
  if (k != "gig1" && k != "mmm" && k != "bd" && k != "det") {
    throw ConfigError("unknown model '" + k + "' (gig1, mmm, bd, det)");
  }
  if (cfg.replicas < 1) throw ConfigError("replicas must be >= 1");
  if (!(cfg.grid.ratio > 1.0)) throw ConfigError("grid ratio g must be > 1");
  if (!(cfg.grid.t_min > std::exp(std::numbers::e))) throw ConfigError("t_min must exceed e^e");
  if (!(cfg.t_max > cfg.grid.t_min)) throw ConfigError("t_max must exceed t_min");
  if (cfg.n_min < 0 || cfg.n_max < cfg.n_min) throw ConfigError("need 0 <= n_min <= n_max");
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
  if (!(cfg.event_budget > 0)) throw ConfigError("event budget must be positive");
}

ResolvedModel resolve(const ModelConfig& m, std::uint64_t seed) {
  ResolvedModel rm;
  try {
    if (m.kind == "gig1") {
      GiG1Spec spec(parse_distribution(m.interarrival), parse_distribution(m.service));
      rm.envelope = gig1_envelope(spec);
      rm.params = {{"interarrival", describe(spec.interarrival())},
                   {"service", describe(spec.service())}};
      auto model = std::make_unique<GiG1Model>(spec);
      if (auto closed = gig1_alpha_T(spec)) {
        rm.alpha_T = *closed;
        rm.alpha_route = "a/(1-rho), Poisson arrivals";
      } else {
        rm.alpha_T = estimate_alpha_T(*model, kBurnInCycles, seed, kBurnInStream);
        rm.alpha_route = "burn-in mean of 10000 cycles";
      }
      rm.model = std::move(model);
    } else if (m.kind == "mmm") {
      MMmSpec spec(m.lambda, m.mu, m.servers);
      rm.envelope = mmm_envelope(spec);
      rm.alpha_T = mmm_alpha_T(spec);
      rm.alpha_route = "1/(lambda p0)";
      rm.params = {{"lambda", m.lambda}, {"mu", m.mu}, {"servers", m.servers}};
      rm.model = std::make_unique<MMmModel>(spec);
    } else if (m.kind == "bd") {
      BDSpec spec(m.lambda, m.mu, m.a);
      rm.envelope = bd_envelope(spec);
      rm.alpha_T = bd_alpha_T(spec);
      rm.alpha_route = "1/(a p0)";
      rm.params = {{"lambda", m.lambda}, {"mu", m.mu}, {"a", m.a}};
      rm.bd = spec;
      rm.model = std::make_unique<BDModel>(spec);
    } else if (m.kind == "det") {
      rm.model = std::make_unique<DeterministicModel>(m.duration, m.level);
      rm.envelope = linear_envelope(1.0);
      rm.alpha_T = m.duration;
      rm.alpha_route = "cycle duration";
      rm.params = {{"duration", m.duration}, {"level", m.level}};
    } else {
      throw ConfigError("unknown model '" + m.kind + "'");
    }
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  return rm;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json cmd_tail(const ExperimentConfig& cfg, std::ostream& out) {
  validate(cfg);
  const auto rm = resolve(cfg.model, cfg.master_seed);
  const bool mmm = cfg.model.kind == "mmm";
  if (!mmm && !rm.bd) throw ConfigError("tail needs an exact tail formula (bd or mmm)");

  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  double prev_log_q = 0.0;
  const double C = rm.bd ? c_constant(*rm.bd).value : 0.0;
  for (long n = cfg.n_min; n <= cfg.n_max; ++n) {
    const double x = static_cast<double>(n);
    double log_q = 0.0;
    double log_qa = std::numeric_limits<double>::quiet_NaN();
    double r0 = std::numeric_limits<double>::quiet_NaN();
    if (rm.bd) {
      log_q = log_q_exact(*rm.bd, n);
      if (n >= 1) {
        log_qa = log_q_asymptotic(*rm.bd, n, C);
        r0 = bd_rate0(*rm.bd, x);
      }
    } else {
      const MMmSpec spec(cfg.model.lambda, cfg.model.mu, cfg.model.servers);
      log_q = mmm_log_tail(spec, n);
      r0 = -x * std::log(spec.rho());
      log_qa = -r0;
    }
    const double ratio = std::exp(log_q - log_qa);
    if (std::isfinite(ratio)) worst = std::max(worst, std::abs(ratio - 1.0));
    const double q = rm.bd ? q_exact(*rm.bd, n) : std::exp(log_q);
    std::vector<double> row{x, q, std::exp(log_qa), ratio, r0, -log_q - r0};
    if (mmm) {
      if (n > cfg.n_min) rows.back().push_back(prev_log_q - log_q);
      prev_log_q = log_q;
    }
    rows.push_back(std::move(row));
  }
  if (mmm) {
    const MMmSpec spec(cfg.model.lambda, cfg.model.mu, cfg.model.servers);
    rows.back().push_back(prev_log_q - mmm_log_tail(spec, cfg.n_max + 1));
  }

  json summary{{"model", cfg.model.kind},
               {"params", rm.params},
               {"constants", {{"r1_bound", rm.envelope.r1_bound}}},
               {"n_min", cfg.n_min},
               {"n_max", cfg.n_max},
               {"max_abs_ratio_minus_one", worst}};
  if (cfg.format == "json") {
    out << summary.dump(2) << '\n';
    return summary;
  }
  out << "n,q_exact,q_asymptotic,ratio,r0,r1" << (mmm ? ",slope" : "") << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << (i == 0 ? std::to_string(static_cast<long>(row[i])) : format_double(row[i]));
    }
    out << '\n';
  }
  return summary;
}

json cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
  validate(cfg);
  const auto rm = resolve(cfg.model, cfg.master_seed);
  std::vector<SeedRun> runs(static_cast<std::size_t>(cfg.replicas));
  parallel_for(runs.size(), [&](std::size_t i) {
    auto& r = runs[i];
    r.seed = cfg.master_seed + i;
    r.run = run_cycles(*rm.model, cfg.t_max, cfg.grid, r.seed, 0);
    r.stats.reserve(r.run.path.checkpoints.size());
    for (const auto& cp : r.run.path.checkpoints) {
      r.stats.push_back(normalized_stats(rm.envelope, rm.alpha_T, cp.t, cp.xbar));
    }
    if (rm.bd) r.bd_stats = corollary3_stats(r.run.path, *rm.bd);
  });

  json seeds = json::array();
  std::vector<double> max_s2, min_s3, max_u2;
  for (const auto& r : runs) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    double hi_u2 = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < r.stats.size(); ++j) {
      hi = std::max(hi, r.stats[j].s2);
      if (r.stats[j].t >= kS3Floor) lo = std::min(lo, r.stats[j].s3);
      if (rm.bd) hi_u2 = std::max(hi_u2, r.bd_stats[j].u2);
    }
    max_s2.push_back(hi);
    min_s3.push_back(lo);
    json entry{{"seed", r.seed},
               {"total_cycles", r.run.summary.total_cycles},
               {"alpha_hat", r.run.summary.alpha_hat},
               {"max_s2", number_or_null(hi)},
               {"min_s3", number_or_null(lo)}};
    if (rm.bd) {
      max_u2.push_back(hi_u2);
      entry["max_u2"] = number_or_null(hi_u2);
    }
    seeds.push_back(entry);
  }

  json summary{{"model", cfg.model.kind},
               {"params", rm.params},
               {"constants",
                {{"alpha_T", constant(rm.alpha_T, rm.alpha_route)},
                 {"r1_bound", rm.envelope.r1_bound}}},
               {"t_max", cfg.t_max},
               {"grid", {{"t_min", cfg.grid.t_min}, {"ratio", cfg.grid.ratio}}},
               {"exact_path", rm.model->exposes_path()},
               {"seeds", seeds},
               {"median_max_s2", number_or_null(median(max_s2))},
               {"median_min_s3", number_or_null(median(min_s3))}};
  if (rm.bd) summary["median_max_u2"] = number_or_null(median(max_u2));
  if (cfg.format == "json") {
    out << summary.dump(2) << '\n';
    return summary;
  }

  out << "seed,t,xbar,n_cycles,s2,s3" << (rm.bd ? ",u2,u3" : "") << '\n';
  for (const auto& r : runs) {  // seeds ascend, checkpoints ascend in t
    const auto& cps = r.run.path.checkpoints;
    for (std::size_t j = 0; j < cps.size(); ++j) {
      out << r.seed << ',' << format_double(cps[j].t) << ',' << format_double(cps[j].xbar) << ','
          << cps[j].n_cycles << ',' << format_double(r.stats[j].s2) << ','
          << format_double(r.stats[j].s3);
      if (rm.bd) {
        out << ',' << format_double(r.bd_stats[j].u2) << ',' << format_double(r.bd_stats[j].u3);
      }
      out << '\n';
    }
  }
  return summary;
}

json cmd_hittime(const ExperimentConfig& cfg, std::ostream& out) {
  validate(cfg);
  const auto rm = resolve(cfg.model, cfg.master_seed);
  require_bd(rm, "hittime");
  const auto& spec = *rm.bd;
  HittingOptions opts;
  opts.initial_state = cfg.initial_state;
  opts.event_budget = cfg.event_budget;
  const auto sample = hitting_time_stat(spec, cfg.n, cfg.replicas, cfg.master_seed, opts);
  const double exact_mean =
      expected_hitting_time(spec, cfg.n, cfg.initial_state) * sample.scale;

  json summary{{"model", cfg.model.kind},
               {"params", rm.params},
               {"constants",
                {{"C", constant(c_constant(spec).value, "Richardson order 2, n = 2^j <= 2^20")},
                 {"p0", constant(stationary(spec, 0).p0, "stationary series")},
                 {"a_p0", constant(sample.limit_rate, "a p0")},
                 {"scale", constant(sample.scale, "C^-1 (1/rho - 1) rho^n n^(a/lambda)")},
                 {"exact_mean_scaled",
                  constant(exact_mean, "passage-time sums times scale")}}},
               {"n", cfg.n},
               {"replicas", cfg.replicas},
               {"seed", cfg.master_seed},
               {"initial_state", cfg.initial_state},
               {"ks_distance", sample.ks_distance},
               {"mean_scaled", sample.mean_scaled}};
  if (cfg.format == "json") {
    out << summary.dump(2) << '\n';
    return summary;
  }
  out << "seed,replica,raw_time,scaled_time\n";
  for (std::size_t i = 0; i < sample.raw.size(); ++i) {
    out << cfg.master_seed << ',' << i << ',' << format_double(sample.raw[i]) << ','
        << format_double(sample.scaled[i]) << '\n';
  }
  return summary;
}

json cmd_constants(const ExperimentConfig& cfg, std::ostream& out) {
  validate(cfg);
  const auto rm = resolve(cfg.model, cfg.master_seed);
  json c;
  c["alpha_T"] = constant(rm.alpha_T, rm.alpha_route);
  const auto& m = cfg.model;
  if (m.kind == "gig1") {
    GiG1Spec spec(parse_distribution(m.interarrival), parse_distribution(m.service));
    c["rho"] = constant(spec.rho(), "b/a");
    const auto root = cramer_gamma(spec);
    c["gamma"] = constant(root.gamma, "bisection on E exp(gamma(eta - zeta)) = 1");
    c["tilted_mean"] = constant(root.tilted_mean, "central difference of the MGF product");
    const auto* arr = std::get_if<Exponential>(&spec.interarrival());
    if (arr) {
      if (const auto* srv = std::get_if<Exponential>(&spec.service())) {
        c["gamma_closed_form"] = constant(srv->rate - arr->rate, "mu - lambda");
      } else if (const auto* det = std::get_if<Deterministic>(&spec.service())) {
        const double x = x_rho_root(spec.rho());
        c["x_rho"] = constant(x, "bisection on e^x = 1 + x/rho");
        c["gamma_closed_form"] = constant(x / det->value, "x_rho / d");
      }
    }
    c["x0"] = constant(rm.envelope.x0, "R0 linear");
  } else if (m.kind == "mmm") {
    MMmSpec spec(m.lambda, m.mu, m.servers);
    c["rho"] = constant(spec.rho(), "lambda/(m mu)");
    c["p0"] = constant(mmm_p0(spec), "stationary series");
    c["r0"] = constant(-std::log(spec.rho()), "-log rho");
    c["x0"] = constant(rm.envelope.x0, "R0 linear");
  } else if (m.kind == "bd") {
    const auto& spec = *rm.bd;
    c["rho"] = constant(spec.rho(), "lambda/mu");
    c["p0"] = constant(stationary(spec, 0).p0, "stationary series");
    const auto C = c_constant(spec);
    c["C"] = constant(C.value, "Richardson order 2 on n^(a/lambda) beta_n, n = 2^j <= 2^20");
    c["C"]["error"] = C.error;
    c["C_harmonic"] = constant(c_constant_harmonic(spec).value,
                               "Richardson on the harmonic split of log beta_n");
    c["x0"] = constant(rm.envelope.x0, "-a/(lambda log rho)");
  }
  json doc{{"model", m.kind}, {"params", rm.params}, {"constants", c}};
  out << doc.dump(2) << '\n';
  return doc;
}

}  // namespace regen::harness
