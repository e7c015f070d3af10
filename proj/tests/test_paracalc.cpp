#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sburgers/error.hpp"
#include "sburgers/paracalc.hpp"
#include "test_util.hpp"

using namespace sburgers;
using testutil::random_field;
using testutil::to_spectrum;

TEST_CASE("paraproduct trivial cases") {
  const auto grid = Grid::make(64);
  const SpectralField g = random_field(grid, 1);
  CHECK(l2_norm(paraproduct(SpectralField(grid), g)) == 0.0);
  SpectralField c(grid);
  c.add_constant(2.0);
  CHECK(l2_norm(paraproduct(g, c)) <= 1e-15);
  CHECK(l2_norm(resonant(g, SpectralField(grid))) == 0.0);
  CHECK_THROWS_AS(paraproduct(g, SpectralField(Grid::make(32))), ContractError);
}

TEST_CASE("paraproduct and resonant product match the brute-force block sums at N = 64") {
  const auto grid = Grid::make(64);
  const oracle::Blocks blocks(64);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    SpectralField f = random_field(grid, seed, 0.5, 1);
    SpectralField g = random_field(grid, seed, 0.2, 2);
    f.add_constant(0.3);
    const auto of = to_spectrum(f);
    const auto og = to_spectrum(g);
    const auto para = oracle::paraproduct(of, og, blocks);
    const auto reso = oracle::resonant(of, og, blocks);
    CHECK(testutil::distance(paraproduct(f, g), para) <= 1e-12 * oracle::l2(para));
    CHECK(testutil::distance(resonant(f, g), reso) <= 1e-12 * oracle::l2(reso));
    const auto prod = oracle::product(of, og);
    CHECK(testutil::distance(product(f, g), prod) <= 1e-12 * oracle::l2(prod));
  }
}

TEST_CASE("resonant product of e_4 and e_5 is nonzero and matches the oracle") {
  const auto grid = Grid::make(64);
  const SpectralField f = testutil::single_mode(grid, 4);
  const SpectralField g = testutil::single_mode(grid, 5);
  const auto expected = oracle::resonant(to_spectrum(f), to_spectrum(g), oracle::Blocks(64));
  const SpectralField r = resonant(f, g);
  CHECK(l2_norm(r) > 0.1);
  CHECK(testutil::distance(r, expected) <= 1e-13);
}

TEST_CASE("Bony decomposition identity, symmetry and bilinearity") {
  const auto grid = Grid::make(256);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SpectralField f = random_field(grid, seed, -0.3, 1);
    const SpectralField g = random_field(grid, seed, 0.1, 2);
    const SpectralField fg = product(f, g);
    const BonyPieces p = bony_decompose(f, g);
    CHECK(l2_norm(fg - (p.lo_hi + p.hi_lo + p.resonant)) <= 1e-12 * l2_norm(fg));
    CHECK(testutil::max_abs_diff(paraproduct_hi_lo(f, g), paraproduct(g, f)) == 0.0);
    CHECK(testutil::max_abs_diff(p.hi_lo, paraproduct(g, f)) == 0.0);

    const SpectralField h = random_field(grid, seed + 100, 0.0, 3);
    const SpectralField lhs = paraproduct(2.0 * f + (-3.0) * h, g);
    const SpectralField rhs = 2.0 * paraproduct(f, g) + (-3.0) * paraproduct(h, g);
    CHECK(l2_norm(lhs - rhs) <= 1e-13 * l2_norm(rhs));
    const SpectralField rl = resonant(f, 2.0 * g + h);
    const SpectralField rr = 2.0 * resonant(f, g) + resonant(f, h);
    CHECK(l2_norm(rl - rr) <= 1e-13 * l2_norm(rr));
  }
}

TEST_CASE("commutator R vanishes on zero arguments and matches the brute-force composition") {
  const auto grid = Grid::make(64);
  const SpectralField f = random_field(grid, 1, 0.6, 1);
  const SpectralField g = random_field(grid, 2, 0.3, 2);
  const SpectralField h = random_field(grid, 3, -0.5, 3);
  const SpectralField zero(grid);
  CHECK(l2_norm(commutator_R(zero, g, h)) == 0.0);
  CHECK(l2_norm(commutator_R(f, g, zero)) == 0.0);
  CHECK(l2_norm(commutator_R(f, zero, h)) <= 1e-16);

  const oracle::Blocks b(64);
  const auto of = to_spectrum(f);
  const auto og = to_spectrum(g);
  const auto oh = to_spectrum(h);
  auto expected = oracle::resonant(oracle::paraproduct(of, og, b), oh, b);
  const auto second = oracle::product(of, oracle::resonant(og, oh, b));
  for (int k = -expected.K; k <= expected.K; ++k) expected.at(k) -= second.get(k);
  CHECK(testutil::distance(commutator_R(f, g, h), expected) <= 1e-12 * oracle::l2(expected));
}

TEST_CASE("commutator R estimate ratio stays finite across N") {
  const double a = 0.6, b = 0.3, c = -0.5, delta = 0.1;
  std::vector<double> ratios;
  for (int n : {64, 128, 256, 512}) {
    const auto grid = Grid::make(n);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SpectralField f = random_field(grid, seed, a, 1);
      const SpectralField g = random_field(grid, seed, b, 2);
      const SpectralField h = random_field(grid, seed, c, 3);
      const double lhs = sobolev_norm(commutator_R(f, g, h), a + b + c - delta);
      const double rhs = sobolev_norm(f, a) * holder_norm(g, b) * holder_norm(h, c);
      worst = std::max(worst, lhs / rhs);
    }
    ratios.push_back(worst);
  }
  for (double r : ratios) CHECK(std::isfinite(r));
  CHECK(ratios.back() <= 2.0 * ratios.front());
}

TEST_CASE("commutator C on a single-block g matches the hand evaluation") {
  // |k| = 11 sits on the plateau of block 3 (rho(11/8) = 1), so g = Delta_3 g and
  // f < g = S_2 f * g with S_2 = Delta_{-1} + Delta_0 + Delta_1.
  const auto grid = Grid::make(64);
  const oracle::Blocks blocks(64);
  REQUIRE(blocks.weight(3, 11) == 1.0);
  const SpectralField f = random_field(grid, 4, 0.5, 1);
  const SpectralField g = testutil::single_mode(grid, 11, Complex(0.3, -0.8));
  const auto sigma = [](int k) { return -1.0 / (50.0 + static_cast<double>(k) * k); };

  const auto of = to_spectrum(f);
  oracle::Spectrum expected(grid->max_mode());
  for (int m = -expected.K; m <= expected.K; ++m) {
    const double low = blocks.weight(-1, m) + blocks.weight(0, m) + blocks.weight(1, m);
    for (int s : {11, -11}) {
      const int k = m + s;
      if (std::abs(k) > expected.K) continue;
      expected.at(k) += (sigma(k) - sigma(s)) * low * of.get(m) * g.mode(s);
    }
  }
  const SpectralField got = commutator_C(f, g, sigma);
  CHECK(testutil::distance(got, expected) <= 1e-14 + 1e-12 * oracle::l2(expected));
  CHECK(l2_norm(commutator_C(SpectralField(grid), g, sigma)) == 0.0);
}

TEST_CASE("commutator C decays at least like 1/a for the shifted resolvent symbol") {
  const auto grid = Grid::make(64);
  const SpectralField f = random_field(grid, 7, 1.0, 1);
  const SpectralField g = random_field(grid, 8, 1.0, 2);
  const auto norm_at = [&](double a) {
    return l2_norm(commutator_C(f, g, [a](int k) { return -1.0 / (a + static_cast<double>(k) * k); }));
  };
  const double slope = std::log(norm_at(1e4) / norm_at(1e3)) / std::log(10.0);
  MESSAGE("two-point decay exponent of ||C_a|| in a: " << slope);
  CHECK(slope <= -1.0);
}

TEST_CASE("commutator C^< in cancelled form agrees with a centred time difference") {
  const double nu = 0.7;
  const auto grid = Grid::make(64);
  const SpectralField w0 = random_field(grid, 11, 1.5, 1);
  const SpectralField q0 = random_field(grid, 12, 1.5, 2);
  // w(t) = e^{-t} cos-rotated modes, Q(t) = e^{0.5 t} w-independent smooth field
  const auto w_at = [&](double t) {
    return apply_multiplier(w0, [t](int k) { return std::exp(Complex(-t, 0.3 * k * t)); });
  };
  const auto w_dt = [&](double t) {
    return apply_multiplier(w0, [t](int k) { return Complex(-1.0, 0.3 * k) * std::exp(Complex(-t, 0.3 * k * t)); });
  };
  const auto q_at = [&](double t) { return std::exp(0.5 * t) * apply_real_multiplier(q0, [t](int k) { return std::cos(0.1 * k * t); }); };
  const auto q_dt = [&](double t) {
    return apply_real_multiplier(q0, [t](int k) {
      return std::exp(0.5 * t) * (0.5 * std::cos(0.1 * k * t) - 0.1 * k * std::sin(0.1 * k * t));
    });
  };
  const double t = 0.4;
  const SpectralField w = w_at(t);
  const SpectralField q = q_at(t);
  const SpectralField heat_w = w_dt(t) - nu * dxx(w);
  const SpectralField cancelled = commutator_cprec(w, q, heat_w, nu);

  std::vector<double> errors;
  for (double h : {2e-3, 1e-3}) {
    const SpectralField dpara = (1.0 / (2.0 * h)) * (paraproduct(w_at(t + h), q_at(t + h)) - paraproduct(w_at(t - h), q_at(t - h)));
    const SpectralField heat_q = q_dt(t) - nu * dxx(q);
    const SpectralField defining = dpara - nu * dxx(paraproduct(w, q)) - paraproduct(w, heat_q);
    errors.push_back(l2_norm(defining - cancelled) / l2_norm(cancelled));
  }
  CHECK(errors[1] < 1e-5);
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.05));

  const SpectralField zero(grid);
  CHECK(l2_norm(commutator_cprec(zero, q, zero, nu)) == 0.0);
  CHECK(l2_norm(commutator_cprec(w, zero, heat_w, nu)) == 0.0);
}

TEST_CASE("Bony audit: zero field, hypothesis rejection, bounded constants") {
  const auto grid = Grid::make(64);
  BonyAuditConfig cfg;
  const SpectralField g = random_field(grid, 1, 0.0, 1);
  for (auto e : all_bony_estimates()) CHECK(bony_ratio(e, SpectralField(grid), g, cfg) == 0.0);

  BonyAuditConfig bad = cfg;
  bad.alpha = -0.1;
  bad.beta = 0.05;
  bad.estimates = {BonyEstimate::kBony5};
  CHECK_THROWS_AS(bony_audit(bad, true), ContractError);
  const auto rep = bony_audit(bad, false);
  REQUIRE(rep.rejected.size() == 1);
  CHECK(rep.rejected[0].second.find("alpha + beta > 0") != std::string::npos);
  CHECK(rep.rows.empty());
  CHECK(bony_hypothesis_violation(BonyEstimate::kBony3, cfg).has_value());

  BonyAuditConfig b5 = cfg;
  b5.estimates = {BonyEstimate::kBony5, BonyEstimate::kProduct};
  b5.trials = 20;
  const auto r5 = bony_audit(b5, true);
  for (auto e : b5.estimates) {
    double prev = 0.0;
    for (int n : b5.grid_sizes) {
      const double m = r5.max_ratio(e, n);
      CHECK(std::isfinite(m));
      CHECK(m > 0.0);
      if (prev > 0.0) CHECK(m <= 1.1 * prev);
      prev = m;
    }
  }
}

TEST_CASE("random regular fields share low modes across grid sizes") {
  const auto a = random_regular_field(Grid::make(64), 0.5, 0.25, 9, 4);
  const auto b = random_regular_field(Grid::make(256), 0.5, 0.25, 9, 4);
  for (int k = 0; k <= 31; ++k) CHECK(a.mode(k) == b.mode(k));
  CHECK(a.is_mean_zero());
}
