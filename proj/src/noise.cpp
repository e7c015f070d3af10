#include "sburgers/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sburgers/error.hpp"
#include "sburgers/paracalc.hpp"
#include "sburgers/parallel.hpp"

namespace sburgers {

namespace {

// -expm1(-x) = 1 - e^{-x}, accurate for small x and exact 1 at x = inf.
double one_minus_exp(double x) { return std::isinf(x) ? 1.0 : -std::expm1(-x); }

}  // namespace

OUNoiseState::OUNoiseState(GridPtr grid, std::uint64_t seed, double nu)
    : grid_(std::move(grid)), nu_(nu), seed_(seed) {
  if (!grid_) throw ContractError("OUNoiseState: null grid");
  if (!(nu > 0.0)) throw ContractError("OUNoiseState: nu must be positive");
  const auto modes = static_cast<std::size_t>(grid_->n_modes());
  f_.assign(modes, Complex{});
  q_.assign(modes, Complex{});
  streams_.reserve(modes);
  for (std::size_t m = 0; m < modes; ++m) streams_.emplace_back(seed, m);
}

SpectralField OUNoiseState::X() const { return SpectralField(grid_, f_); }
SpectralField OUNoiseState::Q() const { return SpectralField(grid_, q_); }

void OUNoiseState::step(double dt) {
  if (!(dt > 0.0)) throw ContractError("ou_step: dt must be positive");
  const int kmax = grid_->max_mode();
  for (int m = 1; m <= kmax; ++m) {
    const double rate = nu_ * m * m;
    const double decay = std::exp(-rate * dt);
    const auto idx = static_cast<std::size_t>(m);
    const Complex x_start = f_[idx];
    q_[idx] = decay * q_[idx] + 2.0 * x_start * (one_minus_exp(rate * dt) / rate);
    const double sd = std::sqrt(0.5 * ou_increment_variance(m, nu_, dt));
    auto& rng = streams_[idx];
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    f_[idx] = decay * x_start + Complex(sd * z1, sd * z2);
  }
  t_ += dt;
}

void OUNoiseState::set_F(std::span<const Complex> modes) {
  if (modes.size() != f_.size()) throw ContractError("set_F: wrong number of modes");
  if (modes[0] != Complex{}) throw ContractError("set_F: mode 0 must vanish");
  std::copy(modes.begin(), modes.end(), f_.begin());
  f_.back() = Complex{};
}

OUNoiseState ou_step(OUNoiseState state, double dt) {
  state.step(dt);
  return state;
}

double ou_increment_variance(int m, double nu, double dt) {
  if (m == 0) return 0.0;
  const double am = std::abs(static_cast<double>(m));
  return one_minus_exp(2.0 * nu * am * am * dt) / (2.0 * nu * am);
}

double ou_covariance(int m, double nu, double t) { return ou_increment_variance(m, nu, t); }

double renorm_constant(double lambda, double t, double nu, const CutoffProfile& profile) {
  if (!(lambda >= 1.0)) throw ContractError("renorm_constant: lambda must be >= 1");
  if (!(nu > 0.0)) throw ContractError("renorm_constant: nu must be positive");
  if (t < 0.0) throw ContractError("renorm_constant: t must be non-negative");
  double sum = 0.0;
  const int kmax = static_cast<int>(std::ceil(lambda));
  for (int k = 1; k <= kmax; ++k) {
    const double kk = k;
    const double l = profile.low(kk / lambda);
    if (l == 0.0) continue;
    sum += l * l * one_minus_exp(2.0 * nu * kk * kk * t) / (2.0 * nu) * kk / (1.0 + nu * kk * kk);
  }
  return 2.0 * sum;
}

EnhancedNoise enhanced_noise(const SpectralField& X, double t, double nu, double lambda, double kappa,
                             const CutoffProfile& profile) {
  if (!(lambda >= 1.0)) throw ContractError("enhanced_noise: lambda must be >= 1");
  if (!(kappa > 0.0 && kappa < 0.5)) throw ContractError("enhanced_noise: kappa must lie in (0, 1/2)");
  SpectralField theta1 = dx(project_low(X, lambda, profile));
  SpectralField p = inverse_helmholtz(theta1, nu);
  const double r = renorm_constant(lambda, t, nu, profile);
  SpectralField theta2 = resonant(theta1, p);
  theta2.add_constant(-r);
  return EnhancedNoise{std::move(theta1), std::move(p), std::move(theta2), lambda, t, kappa, r};
}

EnhancedNoise enhanced_noise(const OUNoiseState& state, double lambda, double kappa, const CutoffProfile& profile) {
  return enhanced_noise(state.X(), state.time(), state.nu(), lambda, kappa, profile);
}

void NoiseNormTracker::record_X(const SpectralField& X) { sup_x_ = std::max(sup_x_, holder_norm(X, -kappa_)); }
void NoiseNormTracker::record_Y(const SpectralField& Y) { sup_y_ = std::max(sup_y_, holder_norm(Y, 2.0 * kappa_)); }
void NoiseNormTracker::record_theta2(const SpectralField& theta2) {
  sup_theta2_ = std::max(sup_theta2_, holder_norm(theta2, -2.0 * kappa_));
}

NoiseNorms noise_norms(std::span<const SpectralField> x_traj, std::span<const SpectralField> y_traj,
                       std::span<const SpectralField> theta2_samples, double kappa) {
  if (x_traj.empty() || y_traj.empty()) throw ContractError("noise_norms: empty trajectory");
  NoiseNormTracker tracker(kappa);
  for (const auto& x : x_traj) tracker.record_X(x);
  for (const auto& y : y_traj) tracker.record_Y(y);
  for (const auto& th : theta2_samples) tracker.record_theta2(th);
  return {tracker.L(), tracker.N()};
}

McStats mc_stats(std::span<const double> samples) {
  McStats s;
  s.samples = samples.size();
  if (samples.empty()) return s;
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(samples.size() - 1);
    s.std_err = std::sqrt(var / static_cast<double>(samples.size()));
  }
  return s;
}

std::vector<OuCovarianceRow> ou_covariance_mc(const GridPtr& grid, std::span<const int> modes, double t,
                                              std::size_t samples, std::uint64_t seed0, int threads) {
  if (!(t >= 0.0)) throw ContractError("ou_covariance_mc: t must be non-negative");
  for (int m : modes) {
    if (m == 0 || std::abs(m) > grid->max_mode()) throw ContractError("ou_covariance_mc: mode outside band");
  }
  std::vector<std::vector<double>> values(modes.size(), std::vector<double>(samples));
  parallel_for(samples, threads, [&](std::size_t s) {
    OUNoiseState state(grid, seed0 + s);
    if (t > 0.0) state.step(t);
    const SpectralField x = state.X();
    for (std::size_t i = 0; i < modes.size(); ++i) {
      values[i][s] = (x.mode(modes[i]) * x.mode(-modes[i])).real();
    }
  });
  std::vector<OuCovarianceRow> rows;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const McStats st = mc_stats(values[i]);
    rows.push_back({modes[i], t, samples, st.mean, ou_covariance(modes[i], grid->nu(), t), st.std_err});
  }
  return rows;
}

std::vector<WickRow> wick_identity_mc(const GridPtr& grid, std::span<const double> lambdas, std::span<const double> times,
                                      std::size_t samples, std::uint64_t seed0, int threads) {
  const double nu = grid->nu();
  std::vector<WickRow> rows;
  for (double t : times) {
    if (!(t >= 0.0)) throw ContractError("wick_identity_mc: t must be non-negative");
    std::vector<std::vector<double>> values(lambdas.size(), std::vector<double>(samples));
    parallel_for(samples, threads, [&](std::size_t s) {
      OUNoiseState state(grid, seed0 + s);
      if (t > 0.0) state.step(t);
      const SpectralField x = state.X();
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        SpectralField theta1 = dx(project_low(x, lambdas[i]));
        SpectralField p = inverse_helmholtz(theta1, nu);
        values[i][s] = resonant(theta1, p).mean();
      }
    });
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const McStats st = mc_stats(values[i]);
      rows.push_back({lambdas[i], t, samples, st.mean, renorm_constant(lambdas[i], t, nu), st.std_err});
    }
  }
  return rows;
}

std::vector<LogBoundRow> renorm_log_bound(std::span<const double> lambdas, std::span<const double> times, double nu) {
  std::vector<LogBoundRow> rows;
  for (double lambda : lambdas) {
    if (!(lambda > 1.0)) throw ContractError("renorm_log_bound: lambda must exceed 1");
    double best = 0.0;
    for (double t : times) best = std::max(best, renorm_constant(lambda, t, nu) / std::log(lambda));
    rows.push_back({lambda, best});
  }
  return rows;
}

EnhancementConvergenceReport enhancement_convergence(const EnhancementConvergenceConfig& config) {
  if (config.n_max < 2) throw ContractError("enhancement_convergence: need at least two levels");
  if (config.seeds.empty()) throw ContractError("enhancement_convergence: no seeds");
  if (!(config.t > 0.0)) throw ContractError("enhancement_convergence: t must be positive");
  const GridPtr grid = Grid::make(config.n_points, config.nu);

  EnhancementConvergenceReport report;
  for (int n = 1; n <= config.n_max; ++n) report.lambdas.push_back(std::pow(n + 1.0, config.tau));
  const std::size_t pairs = static_cast<std::size_t>(config.n_max - 1);
  const std::size_t nseeds = config.seeds.size();
  report.differences.assign(pairs, std::vector<double>(nseeds));

  parallel_for(nseeds, config.threads, [&](std::size_t s) {
    OUNoiseState state(grid, config.seeds[s], config.nu);
    state.step(config.t);
    const SpectralField x = state.X();
    std::vector<SpectralField> theta2;
    theta2.reserve(report.lambdas.size());
    for (double lambda : report.lambdas) {
      theta2.push_back(enhanced_noise(x, config.t, config.nu, lambda, config.kappa).theta2);
    }
    for (std::size_t n = 0; n < pairs; ++n) {
      report.differences[n][s] = besov_norm(theta2[n] - theta2[n + 1], -config.kappa, config.p, config.p);
    }
  });

  std::vector<double> logx;
  std::vector<double> logy;
  for (std::size_t n = 0; n < pairs; ++n) {
    std::vector<double> d = report.differences[n];
    std::sort(d.begin(), d.end());
    const std::size_t mid = d.size() / 2;
    const double median = d.size() % 2 == 1 ? d[mid] : 0.5 * (d[mid - 1] + d[mid]);
    report.medians.push_back(median);
    report.means.push_back(std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size()));
    if (median > 0.0) {
      logx.push_back(std::log(report.lambdas[n]));
      logy.push_back(std::log(median));
    }
  }
  if (logx.size() >= 2) {
    const double mx = std::accumulate(logx.begin(), logx.end(), 0.0) / static_cast<double>(logx.size());
    const double my = std::accumulate(logy.begin(), logy.end(), 0.0) / static_cast<double>(logy.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < logx.size(); ++i) {
      sxy += (logx[i] - mx) * (logy[i] - my);
      sxx += (logx[i] - mx) * (logx[i] - mx);
    }
    report.fitted_exponent = sxy / sxx;
  }
  report.predicted_exponent = -config.kappa / 8.0;
  return report;
}

}  // namespace sburgers
