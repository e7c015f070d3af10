// Exact per-mode Ornstein-Uhlenbeck simulation of the stochastic convolution X,
// the auxiliary field Q, the renormalization constant r_lambda(t) and the
// enhanced noise (Theta1, Theta2) built from them.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sburgers/rng.hpp"
#include "sburgers/spectral.hpp"

namespace sburgers {

/// Mode values F(t, m) of X and Q_m of Q for 0 < m <= max_mode; index 0 and the
/// Nyquist slot stay zero. Single owner: each state carries its own streams.
class OUNoiseState {
 public:
  OUNoiseState(GridPtr grid, std::uint64_t seed, double nu);
  OUNoiseState(GridPtr grid, std::uint64_t seed) : OUNoiseState(grid, seed, grid->nu()) {}

  double time() const noexcept { return t_; }
  double nu() const noexcept { return nu_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  std::span<const Complex> F() const noexcept { return f_; }
  std::span<const Complex> Q_modes() const noexcept { return q_; }

  /// X(t) = sum_{m != 0} F(t, m) e_m.
  SpectralField X() const;
  /// Q(t), solving (d_t - nu d_xx) Q = 2X, Q(0) = 0.
  SpectralField Q() const;

  /// Exact-in-law advance of F by dt; Q advanced with X frozen at the step start.
  void step(double dt);

  /// Overwrites F (tests and deterministic surrogates). Mode 0 must be zero.
  void set_F(std::span<const Complex> modes);

 private:
  GridPtr grid_;
  double t_ = 0.0;
  double nu_;
  std::uint64_t seed_;
  std::vector<Complex> f_;
  std::vector<Complex> q_;
  std::vector<StreamRng> streams_;
};

/// Returns a copy of `state` advanced by dt; dt <= 0 is a ContractError.
OUNoiseState ou_step(OUNoiseState state, double dt);

/// E|G_m|^2 of the OU innovation over a step dt: (1 - e^{-2 nu m^2 dt}) / (2 nu |m|).
double ou_increment_variance(int m, double nu, double dt);
/// E[F(t, m) F(t, -m)] started from F(0) = 0; same closed form with dt = t.
double ou_covariance(int m, double nu, double t);

/// r_lambda(t) = sum_{k != 0} l(|k|/lambda)^2 (1 - e^{-2 nu k^2 t}) / (2 nu) (1 + nu k^2)^{-1} |k|.
double renorm_constant(double lambda, double t, double nu, const CutoffProfile& profile = {});

struct EnhancedNoise {
  SpectralField theta1;    // d_x L_lambda X
  SpectralField p_lambda;  // (1 - nu d_xx)^{-1} d_x L_lambda X
  SpectralField theta2;    // theta1 o P^lambda - r_lambda(t)
  double lambda;
  double t;
  double kappa;
  double r_lambda;
};

/// Enhanced noise of X at cutoff lambda; requires lambda >= 1, kappa in (0, 1/2).
EnhancedNoise enhanced_noise(const SpectralField& X, double t, double nu, double lambda, double kappa,
                             const CutoffProfile& profile = {});
EnhancedNoise enhanced_noise(const OUNoiseState& state, double lambda, double kappa, const CutoffProfile& profile = {});

// ---------------------------------------------------------------------------
// Sup-norm bookkeeping

/// Running L_t = 1 + sup ||X||_{C^-kappa} + sup ||Y||_{C^{2 kappa}} and
/// N_t = L_t + sup ||Theta2||_{C^{-2 kappa}} over all recorded samples.
class NoiseNormTracker {
 public:
  explicit NoiseNormTracker(double kappa) : kappa_(kappa) {}

  void record_X(const SpectralField& X);
  void record_Y(const SpectralField& Y);
  void record_theta2(const SpectralField& theta2);

  double L() const noexcept { return 1.0 + sup_x_ + sup_y_; }
  double N() const noexcept { return L() + sup_theta2_; }
  double kappa() const noexcept { return kappa_; }

 private:
  double kappa_;
  double sup_x_ = 0.0;
  double sup_y_ = 0.0;
  double sup_theta2_ = 0.0;
};

struct NoiseNorms {
  double L;
  double N;
};

/// (L_t, N_t) from sampled trajectories; empty X or Y trajectory is a ContractError.
NoiseNorms noise_norms(std::span<const SpectralField> x_traj, std::span<const SpectralField> y_traj,
                       std::span<const SpectralField> theta2_samples, double kappa);

// ---------------------------------------------------------------------------
// Monte Carlo checks

struct McStats {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t samples = 0;
};

/// Mean and standard error of a sample.
McStats mc_stats(std::span<const double> samples);

struct OuCovarianceRow {
  int mode;
  double t;
  std::size_t samples;
  double mc_mean;
  double expected;
  double std_err;
};

/// Per-mode MC estimate of E[F(t,m) F(t,-m)] over `samples` independent streams.
std::vector<OuCovarianceRow> ou_covariance_mc(const GridPtr& grid, std::span<const int> modes, double t,
                                              std::size_t samples, std::uint64_t seed0, int threads = 1);

struct WickRow {
  double lambda;
  double t;
  std::size_t samples;
  double mc_mean;   // mean of the spatial average of theta1 o P^lambda
  double r_lambda;  // renorm_constant(lambda, t)
  double std_err;
};

/// MC test of E[d_x L_lambda X o P^lambda] = r_lambda(t) for every (lambda, t) pair.
std::vector<WickRow> wick_identity_mc(const GridPtr& grid, std::span<const double> lambdas, std::span<const double> times,
                                      std::size_t samples, std::uint64_t seed0, int threads = 1);

struct LogBoundRow {
  double lambda;
  double sup_ratio;  // max over times of r_lambda(t) / ln(lambda)
};

std::vector<LogBoundRow> renorm_log_bound(std::span<const double> lambdas, std::span<const double> times, double nu);

struct EnhancementConvergenceConfig {
  std::vector<std::uint64_t> seeds;
  double kappa = 0.2;
  double tau = 3.0;  // lambda^n = (n + 1)^tau
  int n_max = 6;     // levels n = 1 .. n_max
  int n_points = 512;
  double nu = 1.0;
  double t = 1.0;
  double p = 2.0;  // B^{-kappa}_{p,p}
  int threads = 1;
};

struct EnhancementConvergenceReport {
  std::vector<double> lambdas;                   // lambda^1 .. lambda^n_max
  std::vector<std::vector<double>> differences;  // [n - 1][seed index], n = 1 .. n_max - 1
  std::vector<double> medians;
  std::vector<double> means;
  double fitted_exponent = 0.0;    // slope of log median vs log lambda^n
  double predicted_exponent = 0.0;  // -kappa / 8
};

/// Coupled (common-stream) estimate of ||Theta2(lambda^n) - Theta2(lambda^{n+1})||_{B^{-kappa}_{p,p}}.
EnhancementConvergenceReport enhancement_convergence(const EnhancementConvergenceConfig& config);

}  // namespace sburgers
