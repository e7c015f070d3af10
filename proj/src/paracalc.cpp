#include "sburgers/paracalc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "sburgers/error.hpp"
#include "sburgers/parallel.hpp"
#include "sburgers/rng.hpp"

namespace sburgers {

namespace {

using Values = std::vector<double>;

Values padded_values(const SpectralField& f) {
  Values v(static_cast<std::size_t>(f.grid().padded_points()));
  f.grid().to_padded_physical(f.coeffs(), v);
  return v;
}

SpectralField from_padded(const GridPtr& grid, const Values& v) {
  SpectralField out(grid);
  grid->from_padded_physical(v, out.coeffs());
  return out;
}

/// Padded-grid values of every LP block of f, index j + 1.
std::vector<Values> padded_blocks(const SpectralField& f) {
  const int jmax = f.grid().partition().j_max();
  std::vector<Values> blocks;
  blocks.reserve(static_cast<std::size_t>(jmax + 2));
  for (int j = -1; j <= jmax; ++j) blocks.push_back(padded_values(lp_block(f, j)));
  return blocks;
}

void accumulate_product(Values& acc, const Values& a, const Values& b) {
  for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += a[x] * b[x];
}

// f < g given padded blocks of both factors.
Values paraproduct_values(const std::vector<Values>& fb, const std::vector<Values>& gb) {
  const std::size_t m = fb.front().size();
  const int nb = static_cast<int>(fb.size());  // blocks -1 .. j_max
  Values acc(m, 0.0);
  Values low(m, 0.0);  // S_{i-1} f, built incrementally
  // term i uses S_{i-1} f = sum_{l <= i-2} Delta_l f, nonzero from i = 1
  for (int i = 1; i + 1 < nb; ++i) {
    const auto& add = fb[static_cast<std::size_t>(i - 2 + 1)];
    for (std::size_t x = 0; x < m; ++x) low[x] += add[x];
    accumulate_product(acc, low, gb[static_cast<std::size_t>(i + 1)]);
  }
  return acc;
}

Values resonant_values(const std::vector<Values>& fb, const std::vector<Values>& gb) {
  const std::size_t m = fb.front().size();
  const int nb = static_cast<int>(fb.size());
  Values acc(m, 0.0);
  for (int i = 0; i < nb; ++i) {
    for (int j = std::max(0, i - 1); j <= std::min(nb - 1, i + 1); ++j) {
      accumulate_product(acc, fb[static_cast<std::size_t>(i)], gb[static_cast<std::size_t>(j)]);
    }
  }
  return acc;
}

}  // namespace

SpectralField product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  Values a = padded_values(f);
  const Values b = padded_values(g);
  for (std::size_t x = 0; x < a.size(); ++x) a[x] *= b[x];
  return from_padded(f.grid_ptr(), a);
}

SpectralField paraproduct(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  return from_padded(f.grid_ptr(), paraproduct_values(padded_blocks(f), padded_blocks(g)));
}

SpectralField resonant(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  return from_padded(f.grid_ptr(), resonant_values(padded_blocks(f), padded_blocks(g)));
}

BonyPieces bony_decompose(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  const auto fb = padded_blocks(f);
  const auto gb = padded_blocks(g);
  return BonyPieces{from_padded(f.grid_ptr(), paraproduct_values(fb, gb)),
                    from_padded(f.grid_ptr(), paraproduct_values(gb, fb)),
                    from_padded(f.grid_ptr(), resonant_values(fb, gb))};
}

SpectralField commutator_R(const SpectralField& f, const SpectralField& g, const SpectralField& h) {
  return resonant(paraproduct(f, g), h) - product(f, resonant(g, h));
}

SpectralField commutator_C(const SpectralField& f, const SpectralField& g, const std::function<double(int)>& sigma) {
  return apply_real_multiplier(paraproduct(f, g), sigma) - paraproduct(f, apply_real_multiplier(g, sigma));
}

SpectralField commutator_cprec(const SpectralField& w, const SpectralField& q, const SpectralField& heat_w, double nu) {
  return paraproduct(heat_w, q) - (2.0 * nu) * paraproduct(dx(w), dx(q));
}

// ---------------------------------------------------------------------------
// Audit

std::string to_string(BonyEstimate e) {
  switch (e) {
    case BonyEstimate::kBony1: return "bony1";
    case BonyEstimate::kBony2: return "bony2";
    case BonyEstimate::kBony3: return "bony3";
    case BonyEstimate::kBony4: return "bony4";
    case BonyEstimate::kBony5: return "bony5";
    case BonyEstimate::kBony6: return "bony6";
    case BonyEstimate::kBony7: return "bony7";
    case BonyEstimate::kBony8: return "bony8";
    case BonyEstimate::kProduct: return "product";
  }
  return "unknown";
}

const std::vector<BonyEstimate>& all_bony_estimates() {
  static const std::vector<BonyEstimate> all{BonyEstimate::kBony1, BonyEstimate::kBony2, BonyEstimate::kBony3,
                                             BonyEstimate::kBony4, BonyEstimate::kBony5, BonyEstimate::kBony6,
                                             BonyEstimate::kBony7, BonyEstimate::kBony8, BonyEstimate::kProduct};
  return all;
}

namespace {

double inverse_exponent(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

double r_exponent(const BonyAuditConfig& c) {
  const double inv = inverse_exponent(c.p) + inverse_exponent(c.q);
  return inv == 0.0 ? kInfinity : 1.0 / inv;
}

// Regularities of the (f, g) test fields for each estimate.
std::pair<double, double> field_regularity(BonyEstimate e, const BonyAuditConfig& c) {
  switch (e) {
    case BonyEstimate::kBony1: return {0.0, c.beta};
    case BonyEstimate::kBony2: return {c.alpha, 0.0};
    case BonyEstimate::kBony3:
    case BonyEstimate::kBony4:
    case BonyEstimate::kBony5: return {c.alpha, c.beta};
    case BonyEstimate::kBony6: return {0.0, c.alpha};
    case BonyEstimate::kBony7:
    case BonyEstimate::kBony8: return {c.beta, c.alpha};
    case BonyEstimate::kProduct: return {c.sigma1, c.sigma2};
  }
  return {0.0, 0.0};
}

}  // namespace

std::optional<std::string> bony_hypothesis_violation(BonyEstimate e, const BonyAuditConfig& c) {
  const bool holder_ok = inverse_exponent(c.p) + inverse_exponent(c.q) <= 1.0;
  switch (e) {
    case BonyEstimate::kBony1:
      if (!(c.alpha > 0.0)) return "bony1 requires alpha > 0";
      break;
    case BonyEstimate::kBony2: break;
    case BonyEstimate::kBony3:
      if (!(c.alpha < 0.0)) return "bony3 requires alpha < 0";
      break;
    case BonyEstimate::kBony4:
      if (!(c.beta < 0.0)) return "bony4 requires beta < 0";
      break;
    case BonyEstimate::kBony5:
      if (!(c.alpha + c.beta > 0.0)) return "bony5 requires alpha + beta > 0";
      break;
    case BonyEstimate::kBony6:
      if (!holder_ok) return "bony6 requires 1/p + 1/q <= 1";
      break;
    case BonyEstimate::kBony7:
      if (!holder_ok) return "bony7 requires 1/p + 1/q <= 1";
      if (!(c.beta < 0.0)) return "bony7 requires beta < 0";
      break;
    case BonyEstimate::kBony8:
      if (!holder_ok) return "bony8 requires 1/p + 1/q <= 1";
      if (!(c.alpha + c.beta > 0.0)) return "bony8 requires alpha + beta > 0";
      break;
    case BonyEstimate::kProduct:
      if (!(c.sigma1 < 0.5 && c.sigma2 < 0.5)) return "product estimate requires sigma1, sigma2 < d/2 = 1/2";
      if (!(c.sigma1 + c.sigma2 > 0.0)) return "product estimate requires sigma1 + sigma2 > 0";
      break;
  }
  return std::nullopt;
}

SpectralField random_regular_field(const GridPtr& grid, double s, double margin, std::uint64_t seed, std::uint64_t tag) {
  SpectralField f(grid);
  auto c = f.coeffs();
  const double decay = s + 0.5 + margin;
  for (int k = 1; k <= grid->max_mode(); ++k) {
    StreamRng rng(seed, (tag << 32) + static_cast<std::uint64_t>(k));
    const double amp = std::pow(static_cast<double>(k), -decay) / std::sqrt(2.0);
    const double re = rng.normal();
    const double im = rng.normal();
    c[static_cast<std::size_t>(k)] = Complex(amp * re, amp * im);
  }
  return f;
}

double bony_ratio(BonyEstimate e, const SpectralField& f, const SpectralField& g, const BonyAuditConfig& c) {
  const double a = c.alpha;
  const double b = c.beta;
  const double r = r_exponent(c);
  double lhs = 0.0;
  double rhs = 1.0;
  switch (e) {
    case BonyEstimate::kBony1:
      lhs = sobolev_norm(paraproduct(f, g), b - a);
      rhs = l2_norm(f) * holder_norm(g, b);
      break;
    case BonyEstimate::kBony2:
      lhs = sobolev_norm(paraproduct_hi_lo(f, g), a);
      rhs = sobolev_norm(f, a) * lp_norm(g, kInfinity);
      break;
    case BonyEstimate::kBony3:
      lhs = sobolev_norm(paraproduct(f, g), a + b);
      rhs = sobolev_norm(f, a) * holder_norm(g, b);
      break;
    case BonyEstimate::kBony4:
      lhs = sobolev_norm(paraproduct_hi_lo(f, g), a + b);
      rhs = sobolev_norm(f, a) * holder_norm(g, b);
      break;
    case BonyEstimate::kBony5:
      lhs = sobolev_norm(resonant(f, g), a + b);
      rhs = sobolev_norm(f, a) * holder_norm(g, b);
      break;
    case BonyEstimate::kBony6:
      lhs = besov_norm_blocks(paraproduct(f, g), a, r, kInfinity);
      rhs = lp_norm(f, c.p) * besov_norm_blocks(g, a, c.q, kInfinity);
      break;
    case BonyEstimate::kBony7:
      lhs = besov_norm_blocks(paraproduct(f, g), a + b, r, kInfinity);
      rhs = besov_norm_blocks(f, b, c.p, kInfinity) * besov_norm_blocks(g, a, c.q, kInfinity);
      break;
    case BonyEstimate::kBony8:
      lhs = besov_norm_blocks(resonant(f, g), a + b, r, kInfinity);
      rhs = besov_norm_blocks(f, b, c.p, kInfinity) * besov_norm_blocks(g, a, c.q, kInfinity);
      break;
    case BonyEstimate::kProduct:
      lhs = homogeneous_sobolev_norm(product(f, g), c.sigma1 + c.sigma2 - 0.5);
      rhs = homogeneous_sobolev_norm(f, c.sigma1) * homogeneous_sobolev_norm(g, c.sigma2);
      break;
  }
  if (lhs == 0.0) return 0.0;
  return lhs / rhs;
}

double BonyAuditReport::max_ratio(BonyEstimate e, int n_points) const {
  double m = 0.0;
  for (const auto& row : rows) {
    if (row.estimate == e && row.n_points == n_points) m = std::max(m, row.ratio);
  }
  return m;
}

BonyAuditReport bony_audit(const BonyAuditConfig& config, bool strict) {
  if (config.trials < 0) throw ContractError("trials must be non-negative");
  BonyAuditReport report;
  std::vector<BonyEstimate> active;
  for (auto e : config.estimates) {
    if (auto why = bony_hypothesis_violation(e, config)) {
      if (strict) throw ContractError(*why);
      report.rejected.emplace_back(e, *why);
    } else {
      active.push_back(e);
    }
  }
  for (int n : config.grid_sizes) {
    const GridPtr grid = Grid::make(n);
    const std::size_t trials = static_cast<std::size_t>(config.trials);
    std::vector<std::vector<BonyAuditRow>> per_trial(trials);
    parallel_for(trials, config.threads, [&](std::size_t t) {
      const std::uint64_t seed = config.seed0 + t;
      for (auto e : active) {
        const auto [sf, sg] = field_regularity(e, config);
        const auto f = random_regular_field(grid, sf, config.margin, seed, 2 * static_cast<std::uint64_t>(e));
        const auto g = random_regular_field(grid, sg, config.margin, seed, 2 * static_cast<std::uint64_t>(e) + 1);
        per_trial[t].push_back({e, n, seed, bony_ratio(e, f, g, config)});
      }
    });
    for (auto& rows : per_trial) report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

}  // namespace sburgers
