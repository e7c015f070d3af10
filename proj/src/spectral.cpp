#include "sburgers/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>

#include "sburgers/error.hpp"

namespace sburgers {

namespace profile {

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double chi(double xi) {
  constexpr double inner = 3.0 / 4.0;
  constexpr double outer = 4.0 / 3.0;
  const double r = std::abs(xi);
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  return 1.0 - smoothstep((r - inner) / (outer - inner));
}

double rho(double xi) { return chi(xi / 2.0) - chi(xi); }

}  // namespace profile

// ---------------------------------------------------------------------------
// LPPartition

LPPartition::LPPartition(int n_points) : max_mode_(n_points / 2 - 1) {
  // every full annulus rho(2^-j .) with j < j_max sits inside |k| < N/2
  j_max_ = std::countr_zero(static_cast<unsigned>(n_points / 2)) - 1;
  weights_.assign(static_cast<std::size_t>(num_blocks()),
                  std::vector<double>(static_cast<std::size_t>(max_mode_ + 1), 0.0));
  for (int k = 0; k <= max_mode_; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    weights_[0][kk] = profile::chi(k);
    for (int j = 0; j < j_max_; ++j) {
      weights_[static_cast<std::size_t>(j + 1)][kk] = profile::rho(std::ldexp(k, -j));
    }
    weights_[static_cast<std::size_t>(j_max_ + 1)][kk] = 1.0 - profile::chi(std::ldexp(k, -j_max_));
  }
}

double LPPartition::weight(int j, int k) const {
  k = std::abs(k);
  if (j < -1 || j > j_max_) throw IndexError("LP block index " + std::to_string(j) + " out of range");
  if (k > max_mode_) return 0.0;
  return weights_[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(k)];
}

std::span<const double> LPPartition::block(int j) const {
  if (j < -1 || j > j_max_) throw IndexError("LP block index " + std::to_string(j) + " out of range");
  return weights_[static_cast<std::size_t>(j + 1)];
}

double LPPartition::low_weight(int i, int k) const {
  double w = 0.0;
  for (int l = -1; l <= std::min(i - 1, j_max_); ++l) w += weight(l, k);
  return w;
}

double CutoffProfile::high(double r) const { return profile::smoothstep(2.0 * r - 1.0); }

// ---------------------------------------------------------------------------
// Grid

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Grid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  fftw_plan padded_forward = nullptr;
  fftw_plan padded_backward = nullptr;

  Plans(int n, int m) {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::vector<double> real(static_cast<std::size_t>(std::max(n, m)));
    std::vector<Complex> spec(static_cast<std::size_t>(std::max(n, m) / 2 + 1));
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    forward = fftw_plan_dft_r2c_1d(n, real.data(), c, flags);
    backward = fftw_plan_dft_c2r_1d(n, c, real.data(), flags);
    padded_forward = fftw_plan_dft_r2c_1d(m, real.data(), c, flags);
    padded_backward = fftw_plan_dft_c2r_1d(m, c, real.data(), flags);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_destroy_plan(padded_forward);
    fftw_destroy_plan(padded_backward);
  }
};

Grid::Grid(int n_points, double nu)
    : n_(n_points), padded_(3 * n_points / 2), nu_(nu), partition_(n_points),
      plans_(std::make_unique<Plans>(n_points, 3 * n_points / 2)) {}

Grid::~Grid() = default;

GridPtr Grid::make(int n_points, double nu) {
  if (n_points < 8 || !std::has_single_bit(static_cast<unsigned>(n_points))) {
    throw ContractError("grid size must be a power of two >= 8, got " + std::to_string(n_points));
  }
  if (!(nu > 0.0)) throw ContractError("viscosity must be positive");
  return GridPtr(new Grid(n_points, nu));
}

void Grid::to_physical(std::span<const Complex> coeffs, std::span<double> values) const {
  std::vector<Complex> scratch(coeffs.begin(), coeffs.end());
  scratch.back() = 0.0;
  fftw_execute_dft_c2r(plans_->backward, reinterpret_cast<fftw_complex*>(scratch.data()), values.data());
}

void Grid::to_spectral(std::span<const double> values, std::span<Complex> coeffs) const {
  std::vector<double> in(values.begin(), values.end());
  fftw_execute_dft_r2c(plans_->forward, in.data(), reinterpret_cast<fftw_complex*>(coeffs.data()));
  const double scale = 1.0 / n_;
  for (auto& c : coeffs) c *= scale;
  coeffs[0] = coeffs[0].real();
  coeffs.back() = 0.0;
}

void Grid::to_padded_physical(std::span<const Complex> coeffs, std::span<double> values) const {
  std::vector<Complex> scratch(static_cast<std::size_t>(padded_ / 2 + 1));
  std::copy_n(coeffs.begin(), max_mode() + 1, scratch.begin());
  fftw_execute_dft_c2r(plans_->padded_backward, reinterpret_cast<fftw_complex*>(scratch.data()), values.data());
}

void Grid::from_padded_physical(std::span<const double> values, std::span<Complex> coeffs) const {
  std::vector<double> in(values.begin(), values.end());
  std::vector<Complex> out(static_cast<std::size_t>(padded_ / 2 + 1));
  fftw_execute_dft_r2c(plans_->padded_forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / padded_;
  for (int k = 0; k <= max_mode(); ++k) coeffs[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k)] * scale;
  coeffs[0] = coeffs[0].real();
  coeffs[static_cast<std::size_t>(n_ / 2)] = 0.0;
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)), coeffs_(static_cast<std::size_t>(grid_->n_modes())) {}

SpectralField::SpectralField(GridPtr grid, std::vector<Complex> half_coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(half_coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(grid_->n_modes())) {
    throw ContractError("coefficient array has wrong length for grid");
  }
  if (coeffs_[0].imag() != 0.0) throw ContractError("mode 0 of a real field must be real");
  coeffs_.back() = 0.0;
}

SpectralField SpectralField::from_values(GridPtr grid, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(grid->n_points())) {
    throw ContractError("value array has wrong length for grid");
  }
  SpectralField f(grid);
  grid->to_spectral(values, f.coeffs_);
  return f;
}

SpectralField SpectralField::from_function(GridPtr grid, const std::function<double(double)>& fn) {
  const int n = grid->n_points();
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = fn(static_cast<double>(j) / n);
  return from_values(std::move(grid), v);
}

Complex SpectralField::mode(int k) const {
  const int a = std::abs(k);
  if (a > grid_->max_mode()) return {};
  const Complex c = coeffs_[static_cast<std::size_t>(a)];
  return k >= 0 ? c : std::conj(c);
}

void SpectralField::set_mode(int k, Complex value) {
  const int a = std::abs(k);
  if (a > grid_->max_mode()) throw IndexError("mode " + std::to_string(k) + " outside retained band");
  if (k == 0 && value.imag() != 0.0) throw ContractError("mode 0 of a real field must be real");
  coeffs_[static_cast<std::size_t>(a)] = k >= 0 ? value : std::conj(value);
}

SpectralField SpectralField::mean_free() const {
  SpectralField out = *this;
  out.coeffs_[0] = 0.0;
  return out;
}

std::vector<double> SpectralField::values() const {
  std::vector<double> v(static_cast<std::size_t>(grid_->n_points()));
  grid_->to_physical(coeffs_, v);
  return v;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (a.grid_ptr() != b.grid_ptr() && a.grid().n_points() != b.grid().n_points()) {
    throw ContractError("fields live on different grids");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField& SpectralField::add_constant(double c) {
  coeffs_[0] += c;
  return *this;
}

// ---------------------------------------------------------------------------
// LP operators and norms

SpectralField lp_block(const SpectralField& f, int j) {
  const auto w = f.grid().partition().block(j);
  SpectralField out(f.grid_ptr());
  auto src = f.coeffs();
  auto dst = out.coeffs();
  for (std::size_t k = 0; k < w.size(); ++k) dst[k] = w[k] * src[k];
  return out;
}

SpectralField low_sum(const SpectralField& f, int i) {
  const auto& part = f.grid().partition();
  SpectralField out(f.grid_ptr());
  if (i <= -1) return out;
  auto src = f.coeffs();
  auto dst = out.coeffs();
  for (int k = 0; k <= part.max_mode(); ++k) {
    dst[static_cast<std::size_t>(k)] = part.low_weight(i, k) * src[static_cast<std::size_t>(k)];
  }
  return out;
}

double lp_norm(std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw ContractError("L^p exponent must be in [1, inf]");
  if (values.empty()) return 0.0;
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (double v : values) acc += std::pow(std::abs(v), p);
  return std::pow(acc / static_cast<double>(values.size()), 1.0 / p);
}

double lp_norm(const SpectralField& f, double p) {
  if (p == 2.0) return l2_norm(f);
  const auto v = f.values();
  return lp_norm(v, p);
}

double l2_norm(const SpectralField& f) {
  auto c = f.coeffs();
  double acc = std::norm(c[0]);
  for (std::size_t k = 1; k < c.size(); ++k) acc += 2.0 * std::norm(c[k]);
  return std::sqrt(acc);
}

double besov_norm_blocks(const SpectralField& f, double s, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw ContractError("Besov exponents p, q must lie in [1, inf]");
  const auto& part = f.grid().partition();
  double acc = 0.0;
  for (int j = -1; j <= part.j_max(); ++j) {
    const double term = std::exp2(s * j) * lp_norm(lp_block(f, j), p);
    if (std::isinf(q)) {
      acc = std::max(acc, term);
    } else {
      acc += std::pow(term, q);
    }
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double besov_norm(const SpectralField& f, double s, double p, double q) {
  if (p == 2.0 && q == 2.0) return sobolev_norm(f, s);
  return besov_norm_blocks(f, s, p, q);
}

double sobolev_norm(const SpectralField& f, double s) {
  const double h = homogeneous_sobolev_norm(f, s);
  return std::sqrt(std::norm(f.coeffs()[0]) + h * h);
}

double homogeneous_sobolev_norm(const SpectralField& f, double s) {
  auto c = f.coeffs();
  double acc = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    acc += 2.0 * std::pow(static_cast<double>(k), 2.0 * s) * std::norm(c[k]);
  }
  return std::sqrt(acc);
}

double holder_norm(const SpectralField& f, double s) { return besov_norm_blocks(f, s, kInfinity, kInfinity); }

// ---------------------------------------------------------------------------
// Multipliers

SpectralField apply_multiplier(const SpectralField& f, const Symbol& symbol) {
  SpectralField out(f.grid_ptr());
  auto src = f.coeffs();
  auto dst = out.coeffs();
  const Complex s0 = symbol(0);
  const Complex y0 = s0 * src[0];
  if (std::abs(y0.imag()) > 1e-14 * std::max(1.0, std::abs(y0))) {
    throw ContractError("multiplier maps the mean to a non-real value");
  }
  dst[0] = y0.real();
  for (int k = 1; k <= f.grid().max_mode(); ++k) {
    const Complex sk = symbol(k);
    const Complex sm = symbol(-k);
    if (std::abs(sm - std::conj(sk)) > 1e-12 * std::max(1.0, std::abs(sk))) {
      throw ContractError("symbol is not Hermitian at mode " + std::to_string(k));
    }
    dst[static_cast<std::size_t>(k)] = sk * src[static_cast<std::size_t>(k)];
  }
  return out;
}

SpectralField apply_real_multiplier(const SpectralField& f, const std::function<double(int)>& symbol) {
  SpectralField out(f.grid_ptr());
  auto src = f.coeffs();
  auto dst = out.coeffs();
  for (int k = 0; k <= f.grid().max_mode(); ++k) {
    dst[static_cast<std::size_t>(k)] = symbol(k) * src[static_cast<std::size_t>(k)];
  }
  return out;
}

SpectralField dx(const SpectralField& f) {
  SpectralField out(f.grid_ptr());
  auto src = f.coeffs();
  auto dst = out.coeffs();
  for (int k = 1; k <= f.grid().max_mode(); ++k) {
    dst[static_cast<std::size_t>(k)] = Complex(0.0, k) * src[static_cast<std::size_t>(k)];
  }
  return out;
}

SpectralField dxx(const SpectralField& f) {
  return apply_real_multiplier(f, [](int k) { return -static_cast<double>(k) * k; });
}

SpectralField heat_semigroup(const SpectralField& f, double nu, double t) {
  return apply_real_multiplier(f, [nu, t](int k) { return std::exp(-nu * k * k * t); });
}

SpectralField fractional_derivative(const SpectralField& f, double gamma) {
  return apply_real_multiplier(f, [gamma](int k) {
    if (k == 0) return gamma == 0.0 ? 1.0 : 0.0;
    return std::pow(static_cast<double>(std::abs(k)), gamma);
  });
}

SpectralField inverse_helmholtz(const SpectralField& f, double nu) {
  return apply_real_multiplier(f, [nu](int k) { return 1.0 / (1.0 + nu * k * k); });
}

// ---------------------------------------------------------------------------
// Projections

SpectralField project_low(const SpectralField& f, double lambda, const CutoffProfile& profile) {
  if (!(lambda > 0.0)) throw ContractError("cutoff level must be positive");
  return apply_real_multiplier(f, [&](int k) { return profile.low(std::abs(k) / lambda); });
}

SpectralField project_high(const SpectralField& f, double lambda, const CutoffProfile& profile) {
  if (!(lambda > 0.0)) throw ContractError("cutoff level must be positive");
  return apply_real_multiplier(f, [&](int k) { return profile.high(std::abs(k) / lambda); });
}

}  // namespace sburgers
