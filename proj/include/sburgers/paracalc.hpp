// Bony paraproducts, resonant products and the commutators built on them.
// Every pointwise product is evaluated on the 3/2-padded grid and truncated
// back to the retained band, so quadratic terms carry no aliasing.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sburgers/spectral.hpp"

namespace sburgers {

/// Dealiased pointwise product f * g.
SpectralField product(const SpectralField& f, const SpectralField& g);

/// f < g = sum_{i >= -1} S_{i-1} f * Delta_i g.
SpectralField paraproduct(const SpectralField& f, const SpectralField& g);
/// f > g, defined as g < f.
inline SpectralField paraproduct_hi_lo(const SpectralField& f, const SpectralField& g) { return paraproduct(g, f); }
/// f o g = sum_{i >= -1} sum_{|j| <= 1} Delta_i f * Delta_{i+j} g.
SpectralField resonant(const SpectralField& f, const SpectralField& g);

/// The three Bony pieces of f * g computed in one pass.
struct BonyPieces {
  SpectralField lo_hi;     // f < g
  SpectralField hi_lo;     // f > g
  SpectralField resonant;  // f o g
};
BonyPieces bony_decompose(const SpectralField& f, const SpectralField& g);

/// R(f, g, h) = (f < g) o h - f (g o h).
SpectralField commutator_R(const SpectralField& f, const SpectralField& g, const SpectralField& h);

/// C(f, g) = sigma(D)(f < g) - f < sigma(D) g for a real even symbol sigma.
SpectralField commutator_C(const SpectralField& f, const SpectralField& g, const std::function<double(int)>& sigma);

/// C^<(w, Q) in its cancelled form (d_t - nu d_xx) w < Q - 2 nu (d_x w < d_x Q),
/// where heat_w supplies (d_t - nu d_xx) w.
SpectralField commutator_cprec(const SpectralField& w, const SpectralField& q, const SpectralField& heat_w, double nu);

// ---------------------------------------------------------------------------
// Bony / product estimate audit

enum class BonyEstimate { kBony1, kBony2, kBony3, kBony4, kBony5, kBony6, kBony7, kBony8, kProduct };

std::string to_string(BonyEstimate e);
const std::vector<BonyEstimate>& all_bony_estimates();

struct BonyAuditConfig {
  double alpha = 0.6;
  double beta = -0.4;
  double sigma1 = 0.3;  // product estimate exponents
  double sigma2 = 0.3;
  double p = 2.0;  // integrability of f in Bony 6-8
  double q = kInfinity;  // integrability of g in Bony 6-8
  std::vector<int> grid_sizes{64, 128, 256, 512};
  int trials = 100;
  std::uint64_t seed0 = 0;
  double margin = 0.25;  // extra decay of the random test spectra
  std::vector<BonyEstimate> estimates = all_bony_estimates();
  int threads = 1;
};

/// Returns the violated hypothesis for (estimate, config), or nullopt if the
/// exponents are admissible.
std::optional<std::string> bony_hypothesis_violation(BonyEstimate e, const BonyAuditConfig& config);

struct BonyAuditRow {
  BonyEstimate estimate;
  int n_points;
  std::uint64_t seed;
  double ratio;  // LHS / RHS
};

struct BonyAuditReport {
  std::vector<BonyAuditRow> rows;
  /// (estimate, reason) for every requested estimate outside its hypotheses.
  std::vector<std::pair<BonyEstimate, std::string>> rejected;

  /// Max ratio over seeds for one estimate at one grid size.
  double max_ratio(BonyEstimate e, int n_points) const;
};

/// Random real mean-zero field with |c_k| ~ |k|^{-s-1/2-margin}; mode k is drawn
/// from the (seed, k) stream, so coarser grids see the same low modes.
SpectralField random_regular_field(const GridPtr& grid, double s, double margin, std::uint64_t seed, std::uint64_t tag);

/// LHS / RHS of one estimate on a given pair of fields.
double bony_ratio(BonyEstimate e, const SpectralField& f, const SpectralField& g, const BonyAuditConfig& config);

/// Rejects the whole audit with ContractError when any requested estimate is
/// outside its hypotheses and `strict` is set; otherwise records it in
/// report.rejected and skips it.
BonyAuditReport bony_audit(const BonyAuditConfig& config, bool strict = false);

}  // namespace sburgers
