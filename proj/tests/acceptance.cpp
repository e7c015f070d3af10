// Acceptance criteria A1..A10. Usage: acceptance <id>; prints one PASS/FAIL line.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "sburgers/anderson.hpp"
#include "sburgers/dynamics.hpp"
#include "sburgers/noise.hpp"
#include "sburgers/parallel.hpp"
#include "sburgers/paracalc.hpp"
#include "test_util.hpp"

using namespace sburgers;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome a1() {
  const double lambdas[] = {8.0, 16.0, 32.0};
  const double times[] = {0.5, 1.0};
  const auto rows = wick_identity_mc(Grid::make(256, 1.0), lambdas, times, 2000, 0, threads());
  bool pass = rows.size() == 6;
  double worst = 0.0;
  for (const auto& r : rows) {
    const double z = std::abs(r.mc_mean - r.r_lambda) / r.std_err;
    worst = std::max(worst, z);
    pass = pass && z <= 3.0;
  }
  return {pass, "max |mean - r| / se = " + num(worst) + " (tol 3)"};
}

Outcome a2() {
  std::vector<double> lambdas;
  for (int e = 3; e <= 10; ++e) lambdas.push_back(std::ldexp(1.0, e));
  const double times[] = {0.1, 1.0, 10.0};
  double lo = kInfinity, hi = 0.0;
  for (const auto& r : renorm_log_bound(lambdas, times, 1.0)) {
    if (r.lambda < 16.0) continue;
    lo = std::min(lo, r.sup_ratio);
    hi = std::max(hi, r.sup_ratio);
  }
  return {hi / lo <= 2.0, "band max/min = " + num(hi / lo) + " (tol 2)"};
}

Outcome a3() {
  EnhancementConvergenceConfig c;
  c.seeds.resize(200);
  for (std::size_t i = 0; i < c.seeds.size(); ++i) c.seeds[i] = i;
  c.kappa = 0.2;
  c.tau = 3.0;
  c.n_max = 6;
  c.n_points = 512;
  c.threads = threads();
  const auto rep = enhancement_convergence(c);
  bool decreasing = true;
  std::ostringstream med;
  for (std::size_t i = 0; i < rep.medians.size(); ++i) {
    med << (i ? "," : "") << rep.medians[i];
    if (i > 0 && !(rep.medians[i] < rep.medians[i - 1])) decreasing = false;
  }
  return {decreasing && rep.fitted_exponent < 0.0,
          "medians " + med.str() + "; fitted exponent " + num(rep.fitted_exponent)};
}

Outcome a4() {
  struct Set {
    double alpha, beta;
  };
  bool pass = true;
  double worst_growth = -kInfinity;
  std::size_t audited = 0;
  for (const Set s : {Set{0.6, -0.4}, Set{-0.3, 0.5}}) {
    BonyAuditConfig c;
    c.alpha = s.alpha;
    c.beta = s.beta;
    c.trials = 100;
    c.grid_sizes = {64, 128, 256, 512};
    c.threads = threads();
    const auto rep = bony_audit(c, false);
    for (auto e : c.estimates) {
      bool present = false;
      for (const auto& r : rep.rows) {
        if (r.estimate != e) continue;
        present = true;
        pass = pass && std::isfinite(r.ratio);
      }
      if (!present) continue;
      ++audited;
      for (std::size_t i = 1; i < c.grid_sizes.size(); ++i) {
        const double g = rep.max_ratio(e, c.grid_sizes[i]) / rep.max_ratio(e, c.grid_sizes[i - 1]) - 1.0;
        worst_growth = std::max(worst_growth, g);
        pass = pass && g < 0.1;
      }
    }
  }
  return {pass && audited > 0,
          num(audited) + " estimate audits; worst per-doubling growth " + num(worst_growth)};
}

Outcome a5() {
  const auto grid = Grid::make(256);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double s = -0.5 + 1.5 * static_cast<double>(i % 7) / 6.0;
    const SpectralField f = testutil::random_field(grid, 2 * i, s, 0xa5);
    const SpectralField g = testutil::random_field(grid, 2 * i + 1, 1.0 - s, 0xa5);
    const SpectralField fg = product(f, g);
    const SpectralField sum = paraproduct(f, g) + paraproduct(g, f) + resonant(f, g);
    worst = std::max(worst, l2_norm(fg - sum) / l2_norm(fg));
  }
  return {worst <= 1e-12, "max relative defect " + num(worst) + " (tol 1e-12)"};
}

Outcome a6() {
  const int modes[] = {1, 3, 8};
  bool pass = true;
  double worst = 0.0;
  for (double t : {0.05, 0.5}) {
    for (const auto& r : ou_covariance_mc(Grid::make(32, 1.0), modes, t, 5000, 0, threads())) {
      const double z = std::abs(r.mc_mean - r.expected) / r.std_err;
      worst = std::max(worst, z);
      pass = pass && z <= 5.0;
    }
  }
  return {pass, "max |mc - expected| / se = " + num(worst) + " (tol 5)"};
}

SolverConfig deterministic(double dt) {
  SolverConfig c;
  c.nu = 0.1;
  c.dt = dt;
  c.t_end = 0.5;
  c.n_grid = 256;
  c.theta_init = "sin:1:1";
  c.integrator = Integrator::kEtdRk2;
  return c;
}

Outcome a7() {
  BurgersRun run(deterministic(1e-3), 0, std::nullopt, false);
  BurgersRun ref(deterministic(1e-5), 0, std::nullopt, false);
  run.run();
  ref.run();
  const double err = l2_norm(run.w() - ref.w());
  return {err <= 1e-6, "L2 error vs dt/100 reference " + num(err) + " (tol 1e-6)"};
}

Outcome a8() {
  SolverConfig c;
  c.n_grid = 512;
  c.t_end = 0.5;
  std::vector<std::uint64_t> seeds(10);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  const auto rep = galerkin_convergence(c, seeds, {8.0, 16.0, 32.0, 64.0}, threads());
  const auto ok = std::count(rep.decreasing.begin(), rep.decreasing.end(), true);
  return {ok >= 8, num(ok) + " of 10 seeds decreasing (need 8)"};
}

Outcome a9() {
  const auto grid = Grid::make(128);
  const double gamma = 0.9;
  double worst_res = 0.0, worst_dense = 0.0, worst_spread = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    SpectralField eta = testutil::random_field(grid, i, 1.0, 0xa9);
    eta *= 5.0 * static_cast<double>(i + 1) / 20.0 / lp_norm(eta, kInfinity);
    const SpectralField g = testutil::random_field(grid, 100 + i, 0.0, 0xa9);
    const RoughPair th = lift(eta, 0.0);
    std::vector<double> ratios;
    for (double a : {50.0, 100.0, 200.0}) {
      const auto res = resolvent_solve(th, g, a, 1e-12, 200, gamma);
      const SpectralField& f = res.solution.f;
      if (a == 50.0) {
        SpectralField r = f * a - dxx(f) + product(f, eta) - g;
        worst_res = std::max(worst_res, l2_norm(r));
        const auto dense = oracle::dense_resolvent(testutil::to_spectrum(eta), testutil::to_spectrum(g), a);
        worst_dense = std::max(worst_dense, testutil::distance(f, dense));
      }
      ratios.push_back(sobolev_norm(f, gamma) / (std::pow(a, gamma / 2.0 - 1.0) * l2_norm(g)));
    }
    worst_spread = std::max(worst_spread, *std::max_element(ratios.begin(), ratios.end()) /
                                              *std::min_element(ratios.begin(), ratios.end()));
  }
  const bool pass = worst_res <= 1e-8 && worst_dense <= 1e-8 && worst_spread <= 2.0;
  return {pass, "residual " + num(worst_res) + ", dense distance " + num(worst_dense) +
                    " (tol 1e-8); bound-shape spread " + num(worst_spread) + " (tol 2)"};
}

Outcome a10() {
  SolverConfig c;
  const int runs = 20;
  std::vector<std::vector<double>> per_run(runs);
  parallel_for(runs, threads(), [&](std::size_t s) {
    BurgersRun run(c, s);
    run.run();
    const DiagnosticRecord d = run.diagnostics();
    const HighLow hl = split_high_low(run.w(), run.Q(), run.schedule().lambda());
    for (double delta : {0.0, 0.1}) {
      const double num = sobolev_norm(hl.w_high, 1.0 - 2.0 * c.kappa - delta);
      const double den = std::pow(1.0 + d.w_l2, 1.0 - c.tau * delta) * std::pow(d.noise_N, c.kappa) *
                         std::pow(d.t, c.kappa / 4.0);
      per_run[s].push_back(num / den);
    }
  });
  bool pass = true;
  std::ostringstream out;
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> v;
    for (const auto& r : per_run) v.push_back(r[i]);
    const double mx = *std::max_element(v.begin(), v.end());
    const double spread = mx / median(v);
    bool finite = true;
    for (double x : v) finite = finite && std::isfinite(x);
    pass = pass && finite && spread <= 10.0;
    out << (i ? "; " : "") << "delta " << (i ? "0.1" : "0") << ": max/median " << spread;
  }
  return {pass, out.str() + " (tol 10)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<Outcome()>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}};
  if (argc != 2 || !criteria.count(argv[1])) {
    std::cerr << "usage: acceptance A1..A10\n";
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = criteria.at(argv[1])();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << argv[1] << ' ' << (o.pass ? "PASS" : "FAIL") << ": " << o.detail << " [" << secs << " s]\n";
  return o.pass ? 0 : 1;
}
