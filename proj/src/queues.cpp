#include "regen/queues.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "regen/errors.hpp"
#include "regen/ladder.hpp"

namespace regen {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// log density on the support; -inf outside it.
double log_pdf(const Distribution& d, double x) {
  return std::visit(
      Overloaded{
          [x](const Exponential& e) { return x < 0 ? -kInf : std::log(e.rate) - e.rate * x; },
          [](const Deterministic&) -> double {
            throw DomainError("deterministic law has no density");
          },
          [x](const Uniform& u) {
            return (x < u.lo || x > u.hi) ? -kInf : -std::log(u.hi - u.lo);
          },
          [x](const Erlang& e) {
            if (x <= 0) return -kInf;
            const double k = e.shape;
            return k * std::log(e.rate) + (k - 1) * std::log(x) - e.rate * x - std::lgamma(k);
          },
          [x](const Weibull& w) {
            if (x <= 0) return -kInf;
            const double z = x / w.scale;
            return std::log(w.shape / w.scale) + (w.shape - 1) * std::log(z) - std::pow(z, w.shape);
          }},
      d);
}

}  // namespace

void validate(const Distribution& d) {
  std::visit(Overloaded{[](const Exponential& e) {
                          if (!(e.rate > 0) || !std::isfinite(e.rate))
                            throw ModelError("exponential rate must be positive");
                        },
                        [](const Deterministic& v) {
                          if (!(v.value > 0) || !std::isfinite(v.value))
                            throw ModelError("deterministic value must be positive");
                        },
                        [](const Uniform& u) {
                          if (!(u.lo >= 0) || !(u.hi > u.lo) || !std::isfinite(u.hi))
                            throw ModelError("uniform law needs 0 <= lo < hi");
                        },
                        [](const Erlang& e) {
                          if (e.shape < 1 || !(e.rate > 0))
                            throw ModelError("erlang needs shape >= 1 and rate > 0");
                        },
                        [](const Weibull& w) {
                          if (!(w.shape > 0) || !(w.scale > 0))
                            throw ModelError("weibull shape and scale must be positive");
                        }},
             d);
}

double sample(const Distribution& d, Philox& rng) {
  return std::visit(
      Overloaded{[&](const Exponential& e) { return rng.exponential(e.rate); },
                 [](const Deterministic& v) { return v.value; },
                 [&](const Uniform& u) { return u.lo + (u.hi - u.lo) * rng.uniform(); },
                 [&](const Erlang& e) {
                   double total = 0.0;
                   for (int i = 0; i < e.shape; ++i) total += rng.exponential(e.rate);
                   return total;
                 },
                 [&](const Weibull& w) {
                   return w.scale * std::pow(rng.exponential(), 1.0 / w.shape);
                 }},
      d);
}

double mean(const Distribution& d) {
  return std::visit(Overloaded{[](const Exponential& e) { return 1.0 / e.rate; },
                               [](const Deterministic& v) { return v.value; },
                               [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                               [](const Erlang& e) { return e.shape / e.rate; },
                               [](const Weibull& w) {
                                 return w.scale * std::tgamma(1.0 + 1.0 / w.shape);
                               }},
                    d);
}

std::string describe(const Distribution& d) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{[&](const Exponential& e) { os << "exp:" << e.rate; },
                        [&](const Deterministic& v) { os << "det:" << v.value; },
                        [&](const Uniform& u) { os << "uniform:" << u.lo << ":" << u.hi; },
                        [&](const Erlang& e) { os << "erlang:" << e.shape << ":" << e.rate; },
                        [&](const Weibull& w) { os << "weibull:" << w.shape << ":" << w.scale; }},
             d);
  return os.str();
}

double mgf_abscissa(const Distribution& d) {
  return std::visit(Overloaded{[](const Exponential& e) { return e.rate; },
                               [](const Deterministic&) { return kInf; },
                               [](const Uniform&) { return kInf; },
                               [](const Erlang& e) { return e.rate; },
                               [](const Weibull& w) {
                                 if (w.shape > 1.0) return kInf;
                                 return w.shape == 1.0 ? 1.0 / w.scale : 0.0;
                               }},
                    d);
}

std::optional<double> mgf_closed_form(const Distribution& d, double s) {
  if (s >= mgf_abscissa(d)) return kInf;
  return std::visit(
      Overloaded{[s](const Exponential& e) -> std::optional<double> { return e.rate / (e.rate - s); },
                 [s](const Deterministic& v) -> std::optional<double> { return std::exp(s * v.value); },
                 [s](const Uniform& u) -> std::optional<double> {
                   if (s == 0.0) return 1.0;
                   return (std::exp(s * u.hi) - std::exp(s * u.lo)) / (s * (u.hi - u.lo));
                 },
                 [s](const Erlang& e) -> std::optional<double> {
                   return std::pow(e.rate / (e.rate - s), e.shape);
                 },
                 [](const Weibull&) -> std::optional<double> { return std::nullopt; }},
      d);
}

double mgf_quadrature(const Distribution& d, double s) {
  if (s >= mgf_abscissa(d)) return kInf;
  if (const auto* v = std::get_if<Deterministic>(&d)) return std::exp(s * v->value);
  const auto integrand = [&](double x) {
    const double lp = log_pdf(d, x);
    return std::isfinite(lp) ? std::exp(s * x + lp) : 0.0;
  };
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  double value = 0.0;
  if (const auto* u = std::get_if<Uniform>(&d)) {
    value = gauss_kronrod<double, 61>::integrate(integrand, u->lo, u->hi, 15, 1e-12, &error);
  } else {
    value = gauss_kronrod<double, 61>::integrate(integrand, 0.0, kInf, 15, 1e-12, &error);
  }
  // Non-convergence near the abscissa signals a divergent integral.
  if (!std::isfinite(value) || !(error <= 1e-6 * std::max(1.0, std::abs(value)))) return kInf;
  return value;
}

double mgf(const Distribution& d, double s) {
  if (auto closed = mgf_closed_form(d, s)) return *closed;
  return mgf_quadrature(d, s);
}

GiG1Spec::GiG1Spec(Distribution interarrival, Distribution service)
    : interarrival_(std::move(interarrival)), service_(std::move(service)) {
  validate(interarrival_);
  validate(service_);
  rho_ = mean(service_) / mean(interarrival_);
  if (!(rho_ < 1.0)) throw ModelError("GI/G/1: traffic intensity rho = b/a must be < 1");
}

MMmSpec::MMmSpec(double lambda, double mu, int servers)
    : lambda_(lambda), mu_(mu), servers_(servers) {
  if (!(lambda > 0) || !(mu > 0) || servers < 1) {
    throw ModelError("M/M/m: need lambda > 0, mu > 0, m >= 1");
  }
  if (!(rho() < 1.0)) throw ModelError("M/M/m: traffic intensity rho = lambda/(m mu) must be < 1");
}

namespace {

CycleSample lindley_core(const GiG1Spec& spec, Philox& rng, std::vector<CycleRecord>& records,
                         std::vector<double>* waits, long& customers, double& service_total) {
  records.clear();
  records.push_back({0.0, 0.0});
  if (waits) waits->assign(1, 0.0);
  double w = 0.0;
  double t = 0.0;
  double top = 0.0;
  customers = 0;
  service_total = 0.0;
  for (;;) {
    const double eta = sample(spec.service(), rng);
    const double zeta = sample(spec.interarrival(), rng);
    ++customers;
    service_total += eta;
    t += zeta;
    w = std::max(0.0, w + eta - zeta);
    if (w == 0.0) break;
    if (customers >= kMaxCycleEvents) {
      throw CycleOverflow("GI/G/1 cycle exceeded the customer cap; rho too close to 1?");
    }
    if (waits) waits->push_back(w);
    if (w > top) {
      top = w;
      records.push_back({t, w});
    }
  }
  return {t, top};
}

}  // namespace

void lindley_cycle(const GiG1Spec& spec, Philox& rng, LindleyCycle& out, bool keep_waits) {
  out.sample = lindley_core(spec, rng, out.records, keep_waits ? &out.waits : nullptr,
                            out.customers, out.service_total);
  if (!keep_waits) out.waits.clear();
}

void GiG1Model::next_cycle(Philox& rng, CycleTrace& out) const {
  long customers = 0;
  double service_total = 0.0;
  out.sample = lindley_core(spec_, rng, out.records, nullptr, customers, service_total);
}

CustomerPath gig1_customer_path(const GiG1Spec& spec, long customers, Philox& rng) {
  if (customers < 0) throw DomainError("gig1_customer_path: negative customer count");
  CustomerPath path;
  path.arrival_times.reserve(static_cast<std::size_t>(customers + 1));
  path.waits.reserve(static_cast<std::size_t>(customers + 1));
  path.arrival_times.push_back(0.0);
  path.waits.push_back(0.0);
  double t = 0.0;
  double w = 0.0;
  for (long i = 1; i <= customers; ++i) {
    const double eta = sample(spec.service(), rng);
    const double zeta = sample(spec.interarrival(), rng);
    t += zeta;
    w = std::max(0.0, w + eta - zeta);
    path.arrival_times.push_back(t);
    path.waits.push_back(w);
  }
  return path;
}

CramerRoot cramer_gamma(const Distribution& interarrival, const Distribution& service) {
  validate(interarrival);
  validate(service);
  CramerRoot root;
  const auto phi = [&](double g) {
    ++root.evaluations;
    const double up = mgf(service, g);
    if (!std::isfinite(up)) return kInf;
    return up * mgf(interarrival, -g);
  };
  const double abscissa = mgf_abscissa(service);
  double lo = 1e-6;
  if (lo >= abscissa || !(phi(lo) < 1.0)) {
    throw NoRootError("cramer_gamma: E exp(g(eta - zeta)) >= 1 near 0 (rho >= 1?)");
  }
  double hi = lo;
  for (;;) {
    double next = 2.0 * hi;
    if (next >= abscissa) {
      // Probe just inside the boundary of the MGF domain.
      next = abscissa * (1.0 - 1e-12);
      if (!(phi(next) > 1.0)) {
        throw NoRootError("cramer_gamma: expectation stays below 1 up to the MGF boundary");
      }
      hi = next;
      break;
    }
    if (next > 1e8) throw NoRootError("cramer_gamma: no root below 1e8");
    hi = next;
    if (phi(next) > 1.0) break;
    lo = next;
  }
  // phi(lo) <= 1 < phi(hi)
  while (hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (phi(mid) > 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  root.gamma = 0.5 * (lo + hi);
  const double h = 1e-5 * root.gamma;
  if (!(root.gamma + h < abscissa)) throw NoRootError("cramer_gamma: root on the MGF boundary");
  root.tilted_mean = (phi(root.gamma + h) - phi(root.gamma - h)) / (2.0 * h);
  if (!std::isfinite(root.tilted_mean)) {
    throw NoRootError("cramer_gamma: tilted mean is not finite at the root");
  }
  return root;
}

CramerRoot cramer_gamma(const GiG1Spec& spec) {
  return cramer_gamma(spec.interarrival(), spec.service());
}

double x_rho_root(double rho) {
  if (!(rho > 0.0) || !(rho < 1.0)) throw DomainError("x_rho_root: rho must lie in (0, 1)");
  const auto f = [rho](double x) { return std::expm1(x) - x / rho; };
  // f < 0 just right of 0 since f'(0) = 1 - 1/rho < 0; f(2/rho) > 0.
  double lo = 1e-9 * (1.0 / rho - 1.0);
  while (!(f(lo) < 0.0)) lo *= 0.5;
  double hi = 2.0 / rho;
  while (hi - lo > 1e-15 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> gig1_alpha_T(const GiG1Spec& spec) {
  if (std::holds_alternative<Exponential>(spec.interarrival())) {
    return mean(spec.interarrival()) / (1.0 - spec.rho());
  }
  return std::nullopt;
}

RateEnvelope gig1_envelope(const GiG1Spec& spec) {
  // The tail constant is not known in closed form; r1_bound stays 0.
  return linear_envelope(cramer_gamma(spec).gamma);
}

void mmm_cycle(const MMmSpec& spec, Philox& rng, CycleTrace& out) {
  out.records.clear();
  out.records.push_back({0.0, 1.0});
  const double lambda = spec.lambda();
  const double mu = spec.mu();
  const long m = spec.servers();
  long state = 1;
  long top = 1;
  double t = 0.0;
  for (long events = 0; state > 0; ++events) {
    if (events >= kMaxCycleEvents) throw CycleOverflow("M/M/m cycle exceeded the event cap");
    const double total = lambda + static_cast<double>(std::min(state, m)) * mu;
    t += rng.exponential(total);
    if (rng.uniform() * total < lambda) {
      ++state;
      if (state > top) {
        top = state;
        out.records.push_back({t, static_cast<double>(state)});
      }
    } else {
      --state;
    }
  }
  out.sample = {t + rng.exponential(lambda), static_cast<double>(top)};
}

double mmm_p0(const MMmSpec& spec) {
  const double offered = spec.lambda() / spec.mu();  // m rho
  const int m = spec.servers();
  double term = 1.0;
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    total += term;
    term *= offered / (k + 1);
  }
  // term = (m rho)^m / m!
  total += term / (1.0 - spec.rho());
  return 1.0 / total;
}

double mmm_alpha_T(const MMmSpec& spec) { return 1.0 / (spec.lambda() * mmm_p0(spec)); }

double mmm_log_tail(const MMmSpec& spec, long n) {
  const double lambda = spec.lambda();
  const double mu = spec.mu();
  const long m = spec.servers();
  return log_ladder_tail(
      [=](long i) { return std::log(static_cast<double>(std::min(i, m)) * mu / lambda); }, n);
}

RateEnvelope mmm_envelope(const MMmSpec& spec) {
  const double slope = -std::log(spec.rho());
  const double lambda = spec.lambda();
  const double mu = spec.mu();
  const long m = spec.servers();
  const auto tails = log_ladder_tails(
      [=](long i) { return std::log(static_cast<double>(std::min(i, m)) * mu / lambda); }, 300);
  double bound = 0.0;
  for (std::size_t n = 0; n < tails.size(); ++n) {
    bound = std::max(bound, std::abs(-tails[n] - slope * static_cast<double>(n)));
  }
  return linear_envelope(slope, bound);
}

}  // namespace regen
