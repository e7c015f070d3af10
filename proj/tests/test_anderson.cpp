#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sburgers/anderson.hpp"
#include "sburgers/dynamics.hpp"
#include "sburgers/error.hpp"
#include "sburgers/paracalc.hpp"
#include "test_util.hpp"

using namespace sburgers;

namespace {

// ||(a - Delta + eta) f - g||_{L^2} with the dealiased pointwise product
double residual(const SpectralField& eta, const SpectralField& f, const SpectralField& g, double a) {
  SpectralField r = f;
  r *= a;
  r -= dxx(f);
  r += product(f, eta);
  r -= g;
  return l2_norm(r);
}

}  // namespace

TEST_CASE("lift") {
  const auto grid = Grid::make(64);
  const RoughPair zero = lift(SpectralField(grid), 0.7);
  CHECK(l2_norm(zero.eta) == 0.0);
  CHECK(zero.theta2.mean() == -0.7);
  CHECK(l2_norm(zero.theta2.mean_free()) == 0.0);

  const SpectralField e3 = testutil::single_mode(grid, 3);
  const RoughPair p = lift(e3, 0.0);
  oracle::Spectrum eta(grid->max_mode()), s(grid->max_mode());
  eta.at(3) = eta.at(-3) = 1.0;
  s.at(3) = s.at(-3) = -1.0 / 10.0;
  oracle::Spectrum expected = oracle::resonant(eta, s, oracle::Blocks(64));
  for (auto& v : expected.c) v = -v;
  CHECK(testutil::distance(p.theta2, expected) <= 1e-12);

  const SpectralField f = testutil::random_field(grid, 4, 1.0);
  SpectralField two = f;
  two *= 2.0;
  SpectralField four = lift(f, 0.0).theta2;
  four *= 4.0;
  CHECK(l2_norm(lift(two, 0.0).theta2 - four) <= 1e-12 * l2_norm(four));
}

TEST_CASE("paracontrolled function and product") {
  const auto grid = Grid::make(128);
  const SpectralField eta = testutil::random_field(grid, 1, 1.5);
  const SpectralField f = testutil::random_field(grid, 2, 1.5);
  const RoughPair th = lift(eta, 0.0);
  const ParacontrolledFn pf = paracontrolled(th, f);
  CHECK(pf.gamma == 0.9);
  CHECK(l2_norm(pf.f_sharp - (f - paraproduct(f, th.sigma.apply(eta)))) == 0.0);

  const SpectralField pointwise = product(f, eta);
  CHECK(l2_norm(paracontrolled_product(th, f) - pointwise) <= 1e-10 * l2_norm(pointwise));

  // a nonzero c adds c f
  const RoughPair shifted = lift(eta, 0.3);
  SpectralField cf = f;
  cf *= 0.3;
  CHECK(l2_norm(paracontrolled_product(shifted, f) - (pointwise + cf)) <= 1e-10 * l2_norm(pointwise));
}

TEST_CASE("resolvent with eta = 0 is the mode-wise division in one iteration") {
  const auto grid = Grid::make(64);
  const SpectralField g = testutil::random_field(grid, 3, 0.0);
  const ResolventResult res = resolvent_solve(lift(SpectralField(grid), 0.0), g, 10.0);
  CHECK(res.iterations == 1);
  for (int k = 0; k <= grid->max_mode(); ++k) {
    CHECK(std::abs(res.solution.f.mode(k) - g.mode(k) / (10.0 + k * k)) <= 1e-16);
  }
  CHECK_THROWS_AS(resolvent_solve(lift(SpectralField(grid), 0.0), g, 1.5), ContractError);
}

TEST_CASE("resolvent for eta = cos(2 pi x), a = 50, g = sin(4 pi x) against the dense solve") {
  const auto grid = Grid::make(128);
  const SpectralField eta = initial_field(grid, "cos:1:1");
  const SpectralField g = initial_field(grid, "sin:1:2");
  const ResolventResult res = resolvent_solve(lift(eta, 0.0), g, 50.0);
  CHECK(residual(eta, res.solution.f, g, 50.0) <= 1e-8);
  const auto dense = oracle::dense_resolvent(testutil::to_spectrum(eta), testutil::to_spectrum(g), 50.0);
  CHECK(testutil::distance(res.solution.f, dense) <= 1e-8);
  CHECK(res.trace.back().increment < 1e-12);
  CHECK(res.trace.back().residual <= 1e-8);
}

TEST_CASE("contraction factor is below one and decreasing in a") {
  const auto grid = Grid::make(128);
  const SpectralField eta = testutil::random_field(grid, 5, 1.0);
  const SpectralField g = testutil::random_field(grid, 6, 0.0);
  const RoughPair th = lift(eta, 0.0);
  std::vector<double> factors;
  for (double a : {20.0, 50.0, 200.0}) {
    const ResolventResult res = resolvent_solve(th, g, a);
    REQUIRE(res.trace.size() >= 3);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < res.trace.size(); ++i) {
      worst = std::max(worst, res.trace[i].increment / res.trace[i - 1].increment);
    }
    CHECK(worst < 1.0);
    factors.push_back(worst);
  }
  CHECK(factors[1] < factors[0]);
  CHECK(factors[2] < factors[1]);
}

TEST_CASE("grid refinement: N = 128 and N = 256 agree on shared modes") {
  std::vector<SpectralField> sols;
  for (int n : {128, 256}) {
    const auto grid = Grid::make(n);
    sols.push_back(resolvent_solve(lift(initial_field(grid, "cos:2:1"), 0.0), initial_field(grid, "sin:1:2"), 50.0)
                       .solution.f);
  }
  double diff = 0.0;
  for (int k = 0; k <= 63; ++k) diff = std::max(diff, std::abs(sols[0].mode(k) - sols[1].mode(k)));
  CHECK(diff <= 1e-8);
}

TEST_CASE("non-contraction and the adaptive threshold") {
  const auto grid = Grid::make(64);
  SpectralField eta = initial_field(grid, "cos:1:1");
  eta *= 40.0;
  const SpectralField g = initial_field(grid, "sin:1:2");
  const RoughPair th = lift(eta, 0.0);
  CHECK_THROWS_AS(resolvent_solve(th, g, 2.0, 1e-12, 200), NonContractionError);
  CHECK_THROWS_AS(resolvent_solve(th, g, 500.0, 1e-12, 2), NonContractionError);
  const ResolventResult res = find_threshold(th, g, 2.0);
  CHECK(res.a > 2.0);
  CHECK(residual(eta, res.solution.f, g, res.a) <= 1e-8);
}

TEST_CASE("quadratic form") {
  const auto grid = Grid::make(128);
  const SpectralField w = testutil::random_field(grid, 7, 1.5);
  const RoughPair none = lift(SpectralField(grid), 0.0);
  const double dw = l2_norm(dx(w));
  CHECK(resolvent_quadratic_form(none, w) == doctest::Approx(-dw * dw).epsilon(1e-15));

  const SpectralField eta = testutil::random_field(grid, 8, 1.5);
  const RoughPair th = lift(eta, 0.0);
  // quadrature of w w'' - eta w^2 on a grid fine enough to be exact for the band-limited integrand
  const auto fine = Grid::make(512);
  SpectralField wf(fine), ef(fine);
  for (int k = 1; k <= grid->max_mode(); ++k) {
    wf.set_mode(k, w.mode(k));
    ef.set_mode(k, eta.mode(k));
  }
  const auto wv = wf.values();
  const auto wxx = dxx(wf).values();
  const auto ev = ef.values();
  double quad = 0.0;
  for (std::size_t j = 0; j < wv.size(); ++j) quad += wv[j] * wxx[j] - ev[j] * wv[j] * wv[j];
  quad /= static_cast<double>(wv.size());
  CHECK(std::abs(resolvent_quadratic_form(th, w) - quad) <= 1e-10 * std::abs(quad));

  const SpectralField w2 = testutil::random_field(grid, 9, 1.5);
  const double lhs = resolvent_quadratic_form(th, w + w2) + resolvent_quadratic_form(th, w - w2);
  const double rhs = 2.0 * resolvent_quadratic_form(th, w) + 2.0 * resolvent_quadratic_form(th, w2);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
  CHECK_THROWS_AS(resolvent_quadratic_form(th, w, 1.0), ContractError);
}
