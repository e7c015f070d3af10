#include "sburgers/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "sburgers/error.hpp"
#include "sburgers/paracalc.hpp"
#include "sburgers/parallel.hpp"
#include "sburgers/rng.hpp"

namespace sburgers {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ContractError("initial_field: bad " + what + " '" + s + "'");
  }
}

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, with series near 0.
double phi1(double z) { return std::abs(z) < 1e-8 ? 1.0 + 0.5 * z : std::expm1(z) / z; }
double phi2(double z) {
  if (std::abs(z) < 1e-3) return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
  return (std::expm1(z) - z) / (z * z);
}

void check_finite(const SpectralField& f, double t, const char* name) {
  for (const Complex& c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DivergenceError(t, l2_norm(f), std::string(name) + ": non-finite value");
    }
  }
}

}  // namespace

std::string to_string(Integrator integrator) { return integrator == Integrator::kEtd1 ? "etd1" : "etdrk2"; }

Integrator parse_integrator(const std::string& name) {
  if (name == "etd1") return Integrator::kEtd1;
  if (name == "etdrk2") return Integrator::kEtdRk2;
  throw ContractError("unknown integrator '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(nu > 0.0)) throw ContractError("nu must be positive");
  if (!(dt > 0.0)) throw ContractError("dt must be positive");
  if (!(kappa > 0.0 && kappa < 0.5)) throw ContractError("kappa must lie in (0, 1/2)");
  if (!(tau > 0.0)) throw ContractError("tau must be positive");
  if (!(t_end >= 0.0)) throw ContractError("t_end must be non-negative");
  if (!(divergence_threshold > 0.0)) throw ContractError("divergence threshold must be positive");
}

SpectralField initial_field(const GridPtr& grid, const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty() || parts[0] == "zero") return SpectralField(grid);
  if (parts[0] == "sin" || parts[0] == "cos") {
    const double amp = parts.size() > 1 ? parse_double(parts[1], "amplitude") : 1.0;
    const int mode = parts.size() > 2 ? static_cast<int>(parse_double(parts[2], "mode")) : 1;
    if (mode < 1 || mode > grid->max_mode()) throw ContractError("initial_field: mode outside band");
    SpectralField f(grid);
    f.set_mode(mode, parts[0] == "sin" ? Complex(0.0, -0.5 * amp) : Complex(0.5 * amp, 0.0));
    return f;
  }
  if (parts[0] == "random") {
    if (parts.size() < 2) throw ContractError("initial_field: random needs a seed");
    const auto seed = static_cast<std::uint64_t>(parse_double(parts[1], "seed"));
    const double amp = parts.size() > 2 ? parse_double(parts[2], "amplitude") : 1.0;
    const double s = parts.size() > 3 ? parse_double(parts[3], "regularity") : 1.0;
    SpectralField f = random_regular_field(grid, s, 0.25, seed, 0x7e7a);
    const double norm = l2_norm(f);
    if (norm > 0.0) f *= amp / norm;
    return f;
  }
  throw ContractError("initial_field: unknown spec '" + spec + "'");
}

SpectralField etd_step(const SpectralField& u, const Nonlinearity& nonlinear, double nu, double dt,
                       Integrator integrator) {
  const int kmax = u.grid().max_mode();
  const SpectralField n0 = nonlinear(u);
  SpectralField a(u.grid_ptr());
  {
    auto dst = a.coeffs();
    auto src = u.coeffs();
    auto nl = n0.coeffs();
    for (int k = 0; k <= kmax; ++k) {
      const auto i = static_cast<std::size_t>(k);
      const double z = -nu * k * k * dt;
      dst[i] = std::exp(z) * src[i] + dt * phi1(z) * nl[i];
    }
  }
  if (integrator == Integrator::kEtd1) return a;
  const SpectralField n1 = nonlinear(a);
  auto dst = a.coeffs();
  auto nl0 = n0.coeffs();
  auto nl1 = n1.coeffs();
  for (int k = 0; k <= kmax; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double z = -nu * k * k * dt;
    dst[i] += dt * phi2(z) * (nl1[i] - nl0[i]);
  }
  return a;
}

SpectralField step_Y(const SpectralField& Y, const SpectralField& X, const SpectralField* zeta, double nu, double dt,
                     double t, Integrator integrator) {
  require_same_grid(Y, X);
  if (!(dt > 0.0)) throw ContractError("step_Y: dt must be positive");
  if (!Y.is_mean_zero() || !X.is_mean_zero()) throw ContractError("step_Y: fields must be mean-zero");
  const SpectralField forcing = zeta ? zeta->mean_free() : SpectralField(Y.grid_ptr());
  const Nonlinearity rhs = [&](const SpectralField& y) {
    SpectralField out = dx(product(2.0 * y + X, X));
    out *= -0.5;
    out += forcing;
    return out;
  };
  SpectralField next = etd_step(Y, rhs, nu, dt, integrator);
  check_finite(next, t + dt, "step_Y");
  return next;
}

SpectralField step_w(const SpectralField& w, const SpectralField& X, const SpectralField& Y, double nu, double dt,
                     double t, Integrator integrator) {
  require_same_grid(w, X);
  require_same_grid(w, Y);
  if (!(dt > 0.0)) throw ContractError("step_w: dt must be positive");
  if (!w.is_mean_zero()) throw ContractError("step_w: w must be mean-zero");
  const SpectralField y2 = product(Y, Y);
  const SpectralField drift = 2.0 * (X + Y);
  const Nonlinearity rhs = [&](const SpectralField& u) {
    SpectralField out = dx(product(u, u + drift) + y2);
    out *= -0.5;
    return out;
  };
  SpectralField next = etd_step(w, rhs, nu, dt, integrator);
  check_finite(next, t + dt, "step_w");
  return next;
}

SpectralField step_galerkin(double n, const SpectralField& wn, const SpectralField& Xn, const SpectralField& Yn,
                            double nu, double dt, double t, Integrator integrator) {
  if (!(n > 0.0)) throw ContractError("step_galerkin: cutoff must be positive");
  return step_w(wn, Xn, Yn, nu, dt, t, integrator);
}

double schedule_level(int i, double tau) { return std::pow(static_cast<double>(i) + 1.0, tau); }

Schedule Schedule::start(double theta_in_norm, double tau) {
  if (!(theta_in_norm >= 0.0)) throw ContractError("schedule: negative initial norm");
  if (!(tau > 0.0)) throw ContractError("schedule: tau must be positive");
  Schedule s;
  s.tau = tau;
  s.i0 = static_cast<int>(std::floor(theta_in_norm));
  s.index = s.i0;
  s.stopping_times.assign(static_cast<std::size_t>(s.i0) + 1, 0.0);
  s.levels.push_back(std::pow(1.0 + std::ceil(theta_in_norm), tau));
  return s;
}

Schedule update_schedule(Schedule schedule, double w_norm, double t) {
  if (t < schedule.last_time) throw ContractError("update_schedule: time must be non-decreasing");
  schedule.last_time = t;
  while (w_norm >= schedule.index + 1.0) {
    ++schedule.index;
    schedule.stopping_times.push_back(t);
    schedule.levels.push_back(std::pow(1.0 + w_norm, schedule.tau));
  }
  return schedule;
}

HighLow split_high_low(const SpectralField& w, const SpectralField& Q, double lambda, const CutoffProfile& profile) {
  SpectralField qh = project_high(Q, lambda, profile);
  SpectralField wh = dx(paraproduct(w, qh));
  wh *= -0.5;
  SpectralField wl = w - wh;
  return {std::move(qh), std::move(wh), std::move(wl)};
}

SpectralField w_sharp(const SpectralField& w, const SpectralField& Q) {
  SpectralField corr = dx(paraproduct(w, Q));
  corr *= 0.5;
  return w + corr;
}

SpectralField synth_zeta(std::uint64_t seed, double kappa, const GridPtr& grid, std::uint64_t step) {
  if (!(kappa > 0.0 && kappa < 0.5)) throw ContractError("synth_zeta: kappa must lie in (0, 1/2)");
  SpectralField z(grid);
  const double expo = 1.5 - 3.0 * kappa;
  const auto modes = static_cast<std::uint64_t>(grid->n_modes());
  for (int k = 1; k <= grid->max_mode(); ++k) {
    StreamRng rng(seed ^ 0x5a5a5a5a5a5a5a5aULL, step * modes + static_cast<std::uint64_t>(k));
    const double sd = std::pow(static_cast<double>(k), expo) * std::sqrt(0.5);
    const double a = rng.normal();
    const double b = rng.normal();
    z.set_mode(k, Complex(sd * a, sd * b));
  }
  return z;
}

BurgersRun::BurgersRun(const SolverConfig& config, std::uint64_t seed, std::optional<double> galerkin_n, bool noise_on)
    : config_(config),
      grid_(Grid::make(config.n_grid, config.nu)),
      galerkin_n_(galerkin_n),
      noise_on_(noise_on),
      noise_(grid_, seed, config.nu),
      y_(grid_),
      w_(grid_),
      tracker_(config.kappa) {
  config_.validate();
  if (galerkin_n_ && !(*galerkin_n_ > 0.0)) throw ContractError("Galerkin cutoff must be positive");
  w_ = initial_field(grid_, config_.theta_init).mean_free();
  if (galerkin_n_) w_ = project_low(w_, *galerkin_n_);
  schedule_ = Schedule::start(l2_norm(w_), config_.tau);
}

SpectralField BurgersRun::X() const {
  if (!noise_on_) return SpectralField(grid_);
  SpectralField x = noise_.X();
  return galerkin_n_ ? project_low(x, *galerkin_n_) : x;
}

SpectralField BurgersRun::Q() const {
  if (!noise_on_) return SpectralField(grid_);
  SpectralField q = noise_.Q();
  return galerkin_n_ ? project_low(q, *galerkin_n_) : q;
}

void BurgersRun::step() {
  const double dt = config_.dt;
  const SpectralField x = X();
  std::optional<SpectralField> zeta;
  if (config_.zeta_on) zeta = synth_zeta(config_.zeta_seed, config_.kappa, grid_, steps_);
  SpectralField y_next = step_Y(y_, x, zeta ? &*zeta : nullptr, config_.nu, dt, t_, config_.integrator);
  SpectralField w_next = step_w(w_, x, y_, config_.nu, dt, t_, config_.integrator);
  if (noise_on_) noise_.step(dt);
  y_ = std::move(y_next);
  w_ = std::move(w_next);
  ++steps_;
  t_ = static_cast<double>(steps_) * dt;
  const double norm = l2_norm(w_);
  if (!std::isfinite(norm) || norm > config_.divergence_threshold) {
    throw DivergenceError(t_, norm, "w left the divergence sentinel");
  }
  schedule_ = update_schedule(std::move(schedule_), norm, t_);
}

void BurgersRun::run(const std::function<void(const BurgersRun&)>& on_step) {
  const auto total = static_cast<std::uint64_t>(std::llround(config_.t_end / config_.dt));
  while (steps_ < total) {
    step();
    if (on_step) on_step(*this);
  }
}

DiagnosticRecord BurgersRun::diagnostics() {
  const SpectralField x = X();
  const double lambda = schedule_.lambda();
  const HighLow hl = split_high_low(w_, Q(), lambda);
  const double wlow2 = l2_norm(hl.w_low) * l2_norm(hl.w_low);

  tracker_.record_X(x);
  tracker_.record_Y(y_);
  const EnhancedNoise en = enhanced_noise(x, t_, config_.nu, lambda, config_.kappa);
  tracker_.record_theta2(en.theta2);

  double deriv = std::nan("");
  if (last_wlow_ && t_ > last_wlow_->first) deriv = (wlow2 - last_wlow_->second) / (t_ - last_wlow_->first);
  last_wlow_ = std::make_pair(t_, wlow2);

  return DiagnosticRecord{t_,
                          l2_norm(w_),
                          std::sqrt(wlow2),
                          homogeneous_sobolev_norm(hl.w_low, 1.0),
                          sobolev_norm(hl.w_high, 1.0 - 2.0 * config_.kappa),
                          lambda,
                          en.r_lambda,
                          tracker_.N(),
                          deriv};
}

GalerkinReport galerkin_convergence(const SolverConfig& config, const std::vector<std::uint64_t>& seeds,
                                    const std::vector<double>& levels, int threads) {
  if (levels.size() < 2) throw ContractError("galerkin_convergence: need at least two levels");
  GalerkinReport report;
  report.levels = levels;
  report.distance.assign(seeds.size(), std::vector<double>(levels.size(), 0.0));
  report.decreasing.assign(seeds.size(), false);

  std::vector<double> cutoffs;
  for (double n : levels) {
    cutoffs.push_back(n);
    cutoffs.push_back(2.0 * n);
  }
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  const auto slot = [&](double n) {
    return static_cast<std::size_t>(std::lower_bound(cutoffs.begin(), cutoffs.end(), n) - cutoffs.begin());
  };

  std::vector<std::uint8_t> decreasing(seeds.size(), 0);
  parallel_for(seeds.size(), threads, [&](std::size_t s) {
    std::vector<BurgersRun> runs;
    runs.reserve(cutoffs.size());
    for (double n : cutoffs) runs.emplace_back(config, seeds[s], n);
    const auto total = static_cast<std::uint64_t>(std::llround(config.t_end / config.dt));
    std::vector<double> acc(levels.size(), 0.0);
    for (std::uint64_t step = 0; step < total; ++step) {
      for (auto& r : runs) r.step();
      for (std::size_t i = 0; i < levels.size(); ++i) {
        const double d = l2_norm(runs[slot(levels[i])].w() - runs[slot(2.0 * levels[i])].w());
        acc[i] += d * d * config.dt;
      }
    }
    bool dec = true;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      report.distance[s][i] = std::sqrt(acc[i]);
      if (i > 0 && !(report.distance[s][i] < report.distance[s][i - 1])) dec = false;
    }
    decreasing[s] = dec ? 1 : 0;
  });
  for (std::size_t s = 0; s < seeds.size(); ++s) report.decreasing[s] = decreasing[s] != 0;
  return report;
}

}  // namespace sburgers
