// Fourier grid, Littlewood-Paley blocks, Besov/Sobolev norms and mode-wise
// multipliers on the unit torus.
//
// Conventions:
//   * A real field is stored by its Fourier-series coefficients c_k for
//     k = 0 .. N/2; negative modes follow from c_{-k} = conj(c_k).
//   * The Nyquist coefficient c_{N/2} is always zero, so the retained band is
//     |k| <= N/2 - 1 (max_mode()).
//   * Symbols carry no 2*pi: d/dx acts as i*k, the Laplacian as -k^2.
//   * Grid points are x_j = j / N and f(x_j) = sum_k c_k exp(2 pi i k j / N).
#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace sburgers {

using Complex = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Smooth bump pieces shared by the Littlewood-Paley and cutoff profiles.
namespace profile {
/// psi(s) = phi(s) / (phi(s) + phi(1 - s)), phi(s) = exp(-1/s) on s > 0.
/// Equals 0 for s <= 0, 1 for s >= 1, C-infinity in between.
double smoothstep(double s);
/// Low-pass profile: 1 on |xi| <= 3/4, 0 on |xi| >= 4/3.
double chi(double xi);
/// Annulus profile rho(xi) = chi(xi / 2) - chi(xi); support 3/4 <= |xi| <= 8/3.
double rho(double xi);
}  // namespace profile

/// Dyadic partition of unity evaluated on the grid modes 0..N/2-1.
///
/// Block -1 is chi, blocks 0..j_max-1 are rho(2^-j k). The last block j_max
/// collects the remaining tail 1 - chi(2^-j_max k) so that the blocks sum to
/// one on every retained mode.
class LPPartition {
 public:
  explicit LPPartition(int n_points);

  int j_max() const noexcept { return j_max_; }
  int num_blocks() const noexcept { return j_max_ + 2; }
  int max_mode() const noexcept { return max_mode_; }

  /// Weight of block j on mode |k|; j in [-1, j_max].
  double weight(int j, int k) const;
  std::span<const double> block(int j) const;
  /// Weight of S_i = sum_{-1 <= l <= i-1} Delta_l on mode |k| (S_i = 0 for i <= -1).
  double low_weight(int i, int k) const;

 private:
  int j_max_;
  int max_mode_;
  std::vector<std::vector<double>> weights_;  // [j + 1][k]
};

/// Complementary smooth cutoffs h (high) and l = 1 - h (low):
/// h(r) = 0 for r <= 1/2, h(r) = 1 for r >= 1, h(r) = psi(2r - 1) between.
class CutoffProfile {
 public:
  double high(double r) const;
  double low(double r) const { return 1.0 - high(r); }
};

/// Periodic grid on [0,1) with N points. Immutable; owns FFT plans for the
/// base size and the 3/2-padded size used for dealiased products.
class Grid {
 public:
  static GridPtr make(int n_points, double nu = 1.0);

  int n_points() const noexcept { return n_; }
  int n_modes() const noexcept { return n_ / 2 + 1; }
  int max_mode() const noexcept { return n_ / 2 - 1; }
  int padded_points() const noexcept { return padded_; }
  double nu() const noexcept { return nu_; }
  const LPPartition& partition() const noexcept { return partition_; }

  /// Half-spectrum (n_modes) to N grid values.
  void to_physical(std::span<const Complex> coeffs, std::span<double> values) const;
  /// N grid values to half-spectrum; Nyquist coefficient is dropped.
  void to_spectral(std::span<const double> values, std::span<Complex> coeffs) const;
  /// Half-spectrum (n_modes) to padded_points() values.
  void to_padded_physical(std::span<const Complex> coeffs, std::span<double> values) const;
  /// padded_points() values to the retained half-spectrum (n_modes).
  void from_padded_physical(std::span<const double> values, std::span<Complex> coeffs) const;

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

 private:
  Grid(int n_points, double nu);
  struct Plans;
  int n_;
  int padded_;
  double nu_;
  LPPartition partition_;
  std::unique_ptr<Plans> plans_;
};

/// Real periodic field stored by its non-negative Fourier modes.
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, std::vector<Complex> half_coeffs);

  static SpectralField from_values(GridPtr grid, std::span<const double> values);
  /// Field whose value at x is fn(x) sampled on the grid.
  static SpectralField from_function(GridPtr grid, const std::function<double(double)>& fn);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  /// Coefficient of mode k for any integer k; zero outside the retained band.
  Complex mode(int k) const;
  /// Sets mode k (and implicitly -k). Mode 0 must be real; |k| must be retained.
  void set_mode(int k, Complex value);

  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }

  bool is_mean_zero() const noexcept { return coeffs_[0] == Complex{}; }
  double mean() const noexcept { return coeffs_[0].real(); }
  /// P_{!=0}: removes the spatial mean.
  SpectralField mean_free() const;

  std::vector<double> values() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  /// Adds a spatial constant (touches only mode 0).
  SpectralField& add_constant(double c);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

 private:
  GridPtr grid_;
  std::vector<Complex> coeffs_;
};

void require_same_grid(const SpectralField& a, const SpectralField& b);

// ---------------------------------------------------------------------------
// Littlewood-Paley operators and norms

/// Delta_j f, j in [-1, j_max]; throws IndexError otherwise.
SpectralField lp_block(const SpectralField& f, int j);
/// S_i f = sum_{-1 <= l <= i-1} Delta_l f (zero for i <= -1).
SpectralField low_sum(const SpectralField& f, int i);

/// Rectangle-rule L^p norm on the grid; p = kInfinity gives the grid sup.
double lp_norm(std::span<const double> values, double p);
double lp_norm(const SpectralField& f, double p);
/// Plancherel L^2 norm, sqrt(sum_k |c_k|^2).
double l2_norm(const SpectralField& f);

/// Block Besov norm || 2^{js} ||Delta_j f||_{L^p} ||_{l^q}; p, q in [1, inf].
double besov_norm_blocks(const SpectralField& f, double s, double p, double q);
/// Besov norm; for p = q = 2 this is the Plancherel H^s norm (sobolev_norm),
/// otherwise the block norm.
double besov_norm(const SpectralField& f, double s, double p, double q);
/// H^s via Plancherel: sqrt(|c_0|^2 + sum_{k != 0} |k|^{2s} |c_k|^2).
double sobolev_norm(const SpectralField& f, double s);
/// Homogeneous H^s: the k = 0 term dropped.
double homogeneous_sobolev_norm(const SpectralField& f, double s);
/// Hoelder-Besov C^s = B^s_{inf,inf} with grid-sup L^inf.
double holder_norm(const SpectralField& f, double s);

// ---------------------------------------------------------------------------
// Multipliers

using Symbol = std::function<Complex(int)>;

/// c_k <- symbol(k) c_k. The symbol must satisfy symbol(-k) = conj(symbol(k))
/// and be real at k = 0 when the mean is nonzero; otherwise ContractError.
SpectralField apply_multiplier(const SpectralField& f, const Symbol& symbol);
/// Real even symbol; skips the Hermitian check.
SpectralField apply_real_multiplier(const SpectralField& f, const std::function<double(int)>& symbol);

SpectralField dx(const SpectralField& f);
SpectralField dxx(const SpectralField& f);
/// P_t = exp(nu t d_xx).
SpectralField heat_semigroup(const SpectralField& f, double nu, double t);
/// Lambda^gamma, symbol |k|^gamma (mode 0 mapped to 0 for gamma != 0).
SpectralField fractional_derivative(const SpectralField& f, double gamma);
/// (1 - nu d_xx)^{-1}.
SpectralField inverse_helmholtz(const SpectralField& f, double nu);

// ---------------------------------------------------------------------------
// Smooth frequency projections

/// L_lambda f: c_k <- l(|k| / lambda) c_k.
SpectralField project_low(const SpectralField& f, double lambda, const CutoffProfile& profile = {});
/// H_lambda f = f - L_lambda f.
SpectralField project_high(const SpectralField& f, double lambda, const CutoffProfile& profile = {});

}  // namespace sburgers
