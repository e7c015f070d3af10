// Time stepping of the remainder equations for Y and w (and the Galerkin
// system w^n), the adaptive cutoff schedule, the high/low splitting of w and
// per-sample energy diagnostics.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sburgers/noise.hpp"
#include "sburgers/spectral.hpp"

namespace sburgers {

enum class Integrator {
  kEtd1,    // exp(L dt) u + phi1(L dt) dt N(u)
  kEtdRk2,  // Cox-Matthews two-stage exponential Runge-Kutta
};

std::string to_string(Integrator integrator);
Integrator parse_integrator(const std::string& name);

struct SolverConfig {
  double nu = 1.0;
  double dt = 1e-4;
  double kappa = 1.0 / 200.0;
  double tau = 3.0;
  double t_end = 0.5;
  int n_grid = 256;
  bool zeta_on = false;
  std::uint64_t zeta_seed = 0;
  /// See initial_field.
  std::string theta_init = "sin:1:1";
  Integrator integrator = Integrator::kEtd1;
  double divergence_threshold = 1e6;

  void validate() const;
};

/// Mean-zero field from a description: "zero", "sin[:amp[:mode]]",
/// "cos[:amp[:mode]]" or "random:seed[:amp[:s]]" (L^2 norm amp, |c_k| ~ |k|^{-s-3/4}).
SpectralField initial_field(const GridPtr& grid, const std::string& spec);

// ---------------------------------------------------------------------------
// Exponential integrators

using Nonlinearity = std::function<SpectralField(const SpectralField&)>;

/// One step of du/dt = nu d_xx u + nonlinear(u).
SpectralField etd_step(const SpectralField& u, const Nonlinearity& nonlinear, double nu, double dt,
                       Integrator integrator = Integrator::kEtd1);

/// Y' for dY/dt = nu Y_xx - (1/2) d_x(2 Y X + X^2) + P_{!=0} zeta with X, zeta frozen.
/// `t` labels divergence errors only.
SpectralField step_Y(const SpectralField& Y, const SpectralField& X, const SpectralField* zeta, double nu, double dt,
                     double t = 0.0, Integrator integrator = Integrator::kEtd1);

/// w' for dw/dt = nu w_xx - (1/2) d_x(w^2 + 2 w Y + 2 w X + Y^2) with X, Y frozen.
SpectralField step_w(const SpectralField& w, const SpectralField& X, const SpectralField& Y, double nu, double dt,
                     double t = 0.0, Integrator integrator = Integrator::kEtd1);

/// Galerkin step: step_w with X^n = L_n X and Y^n supplied by the caller.
SpectralField step_galerkin(double n, const SpectralField& wn, const SpectralField& Xn, const SpectralField& Yn,
                            double nu, double dt, double t = 0.0, Integrator integrator = Integrator::kEtd1);

// ---------------------------------------------------------------------------
// Stopping-time schedule

/// lambda^i = (i + 1)^tau.
double schedule_level(int i, double tau);

struct Schedule {
  std::vector<double> stopping_times;  // T_0 .. T_i
  std::vector<double> levels;          // lambda on [T_j, T_{j+1})
  int i0 = 0;
  int index = 0;  // current i
  double tau = 3.0;
  double last_time = 0.0;

  static Schedule start(double theta_in_norm, double tau);
  double lambda() const { return levels.back(); }
};

/// Records every integer threshold i + 1 that ||w||_{L^2} has reached by time t.
Schedule update_schedule(Schedule schedule, double w_norm, double t);

// ---------------------------------------------------------------------------
// Decompositions

struct HighLow {
  SpectralField q_high;
  SpectralField w_high;
  SpectralField w_low;
};

/// Q^H = H_lambda Q, w_high = -(1/2) d_x(w < Q^H), w_low = w - w_high.
HighLow split_high_low(const SpectralField& w, const SpectralField& Q, double lambda,
                       const CutoffProfile& profile = {});

/// w_sharp = w + (1/2) d_x(w < Q).
SpectralField w_sharp(const SpectralField& w, const SpectralField& Q);

/// Zeta at solver step `step`: Gaussian, std |k|^{3/2 - 3 kappa} on mode k, constant over the step.
SpectralField synth_zeta(std::uint64_t seed, double kappa, const GridPtr& grid, std::uint64_t step);

// ---------------------------------------------------------------------------
// Coupled runs

struct DiagnosticRecord {
  double t;
  double w_l2;
  double w_low_l2;
  double w_low_h1;     // homogeneous H^1
  double w_high_norm;  // H^{1 - 2 kappa}
  double lambda;
  double r_lambda;
  double noise_N;
  double dwlow2_dt;  // backward difference of ||w_low||^2 against the previous sample
};

/// Full system (galerkin_n = nullopt) or the Galerkin system with cutoff n,
/// driven by the OU stream of `seed`.
class BurgersRun {
 public:
  BurgersRun(const SolverConfig& config, std::uint64_t seed, std::optional<double> galerkin_n = std::nullopt,
             bool noise_on = true);

  /// Advances one dt; throws DivergenceError on blow-up.
  void step();
  /// Steps until t >= t_end (within half a step), calling `on_step` after each step.
  void run(const std::function<void(const BurgersRun&)>& on_step = {});

  /// Computes the diagnostic record at the current time and updates the
  /// running noise norms.
  DiagnosticRecord diagnostics();

  double time() const noexcept { return t_; }
  std::uint64_t steps() const noexcept { return steps_; }
  const SpectralField& w() const noexcept { return w_; }
  const SpectralField& Y() const noexcept { return y_; }
  SpectralField X() const;
  SpectralField Q() const;
  const Schedule& schedule() const noexcept { return schedule_; }
  const SolverConfig& config() const noexcept { return config_; }
  const GridPtr& grid() const noexcept { return grid_; }
  const NoiseNormTracker& noise_norms() const noexcept { return tracker_; }

 private:
  SolverConfig config_;
  GridPtr grid_;
  std::optional<double> galerkin_n_;
  bool noise_on_;
  OUNoiseState noise_;
  SpectralField y_;
  SpectralField w_;
  Schedule schedule_;
  NoiseNormTracker tracker_;
  double t_ = 0.0;
  std::uint64_t steps_ = 0;
  std::optional<std::pair<double, double>> last_wlow_;  // (t, ||w_low||^2)
};

struct GalerkinReport {
  std::vector<double> levels;                 // n
  std::vector<std::vector<double>> distance;  // [seed][level]: ||w^n - w^{2n}||_{L^2(0,T;L^2)}
  std::vector<bool> decreasing;               // per seed
};

/// Coupled-seed study of ||w^n - w^{2n}|| over the given levels.
GalerkinReport galerkin_convergence(const SolverConfig& config, const std::vector<std::uint64_t>& seeds,
                                    const std::vector<double>& levels, int threads = 1);

}  // namespace sburgers
