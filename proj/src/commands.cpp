#include "sburgers/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "sburgers/anderson.hpp"
#include "sburgers/csv.hpp"
#include "sburgers/dynamics.hpp"
#include "sburgers/error.hpp"
#include "sburgers/noise.hpp"
#include "sburgers/paracalc.hpp"

namespace sburgers {

namespace {

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

std::string out_path(const CommonOptions& opt, const std::string& file) {
  return (std::filesystem::path(opt.out) / file).string();
}

int finish(const CommonOptions& opt, const std::vector<Check>& checks, std::ostream& log) {
  CsvWriter csv(out_path(opt, "checks.csv"), {"check", "value", "tolerance", "pass"});
  bool all = true;
  for (const auto& c : checks) {
    csv.row({c.name, c.value, c.tolerance, std::int64_t{c.pass ? 1 : 0}});
    if (!c.pass) {
      all = false;
      log << "FAIL " << c.name << " value=" << format_double(c.value) << " tolerance=" << format_double(c.tolerance)
          << '\n';
    }
  }
  log << (all ? "all checks passed" : "some checks failed") << " (" << checks.size() << " checks)\n";
  return all ? kExitOk : kExitCheckFailed;
}

// Typed getters that turn module-level contract failures into usage errors
// naming the key.
int positive_int(const Config& c, const std::string& key, std::int64_t min = 1) {
  const auto v = c.get_int(key);
  if (v < min) throw UsageError(key, "'" + key + "' must be >= " + std::to_string(min));
  return static_cast<int>(v);
}

double positive_double(const Config& c, const std::string& key) {
  const double v = c.get_double(key);
  if (!(v > 0.0)) throw UsageError(key, "'" + key + "' must be positive");
  return v;
}

SolverConfig solver_config(const Config& c) {
  SolverConfig s;
  s.nu = positive_double(c, "nu");
  s.dt = positive_double(c, "dt");
  s.kappa = c.get_double("kappa");
  if (!(s.kappa > 0.0 && s.kappa < 0.5)) throw UsageError("kappa", "'kappa' must lie in (0, 1/2)");
  s.tau = positive_double(c, "tau");
  s.t_end = c.get_double("t_end");
  if (!(s.t_end >= 0.0)) throw UsageError("t_end", "'t_end' must be non-negative");
  s.n_grid = positive_int(c, "n_grid", 8);
  s.theta_init = c.get_string("theta_init");
  try {
    s.integrator = parse_integrator(c.get_string("integrator"));
  } catch (const ContractError& e) {
    throw UsageError("integrator", e.what());
  }
  return s;
}

const std::map<std::string, std::map<std::string, std::string>>& defaults() {
  static const std::map<std::string, std::map<std::string, std::string>> table{
      {"renorm-verify",
       {{"n_grid", "256"},
        {"nu", "1"},
        {"lambdas", "8,16,32"},
        {"times", "0.5,1"},
        {"samples", "2000"},
        {"sigma_tol", "3"},
        {"log_lambdas", "8,16,32,64,128,256,512,1024"},
        {"log_times", "0.1,1,10"},
        {"log_min_lambda", "16"},
        {"log_band", "2"}}},
      {"burgers-run",
       {{"nu", "1"},
        {"dt", "1e-4"},
        {"kappa", "0.005"},
        {"tau", "3"},
        {"t_end", "0.5"},
        {"n_grid", "256"},
        {"theta_init", "sin:1:1"},
        {"integrator", "etd1"},
        {"noise", "on"},
        {"zeta", "off"},
        {"zeta_seed", "0"},
        {"sample_every", "100"},
        {"galerkin_n", "0"},
        {"divergence_threshold", "1e6"},
        {"oracle", "off"},
        {"oracle_tol", "1e-6"}}},
      {"galerkin-converge",
       {{"nu", "1"},
        {"dt", "1e-4"},
        {"kappa", "0.005"},
        {"tau", "3"},
        {"t_end", "0.5"},
        {"n_grid", "512"},
        {"theta_init", "sin:1:1"},
        {"integrator", "etd1"},
        {"levels", "8,16,32,64"},
        {"seeds", "10"},
        {"min_decreasing", "8"}}},
      {"enhance-converge",
       {{"seeds", "200"},
        {"kappa", "0.2"},
        {"tau", "3"},
        {"n_max", "6"},
        {"n_grid", "512"},
        {"nu", "1"},
        {"t", "1"},
        {"p", "2"}}},
      {"bony-check",
       {{"alpha", "0.6"},
        {"beta", "-0.4"},
        {"sigma1", "0.3"},
        {"sigma2", "0.3"},
        {"p", "2"},
        {"q", "inf"},
        {"grid_sizes", "64,128,256,512"},
        {"trials", "100"},
        {"margin", "0.25"},
        {"estimates", "all"},
        {"growth_tol", "0.1"},
        {"strict", "off"}}},
      {"anderson-solve",
       {{"n_grid", "128"},
        {"a", "50"},
        {"tol", "1e-12"},
        {"max_iter", "200"},
        {"gamma", "0.9"},
        {"eta", "cos:1:1"},
        {"g", "sin:1:2"},
        {"c", "0"},
        {"sigma_sign", "-1"},
        {"sigma_nu", "1"},
        {"adaptive", "off"},
        {"residual_tol", "1e-8"}}},
  };
  return table;
}

SpectralField field_from_config(const Config& c, const std::string& key, const GridPtr& grid) {
  try {
    return initial_field(grid, c.get_string(key));
  } catch (const ContractError& e) {
    throw UsageError(key, e.what());
  }
}

// ---------------------------------------------------------------------------

int cmd_renorm_verify(const Config& c, const CommonOptions& opt, std::ostream& log) {
  const int n_grid = positive_int(c, "n_grid", 8);
  const double nu = positive_double(c, "nu");
  const auto lambdas = c.get_doubles("lambdas");
  const auto times = c.get_doubles("times");
  const auto samples = static_cast<std::size_t>(positive_int(c, "samples"));
  const double sigma_tol = positive_double(c, "sigma_tol");
  const auto log_lambdas = c.get_doubles("log_lambdas");
  const auto log_times = c.get_doubles("log_times");
  const double log_min = c.get_double("log_min_lambda");
  const double band = positive_double(c, "log_band");
  for (double l : lambdas) {
    if (!(l >= 1.0)) throw UsageError("lambdas", "every lambda must be >= 1");
  }
  for (double t : times) {
    if (!(t >= 0.0)) throw UsageError("times", "every time must be non-negative");
  }
  for (double l : log_lambdas) {
    if (!(l > 1.0)) throw UsageError("log_lambdas", "every lambda must exceed 1");
  }
  const GridPtr grid = Grid::make(n_grid, nu);

  std::vector<Check> checks;
  const auto wick = wick_identity_mc(grid, lambdas, times, samples, opt.seed, opt.threads);
  CsvWriter csv(out_path(opt, "renorm.csv"), {"lambda", "t", "n_samples", "mc_mean", "r_lambda", "std_err"});
  for (const auto& r : wick) {
    csv.row({r.lambda, r.t, static_cast<std::uint64_t>(r.samples), r.mc_mean, r.r_lambda, r.std_err});
    const double dev = std::abs(r.mc_mean - r.r_lambda);
    const double tol = r.std_err > 0.0 ? sigma_tol * r.std_err : 1e-12;
    checks.push_back({"wick lambda=" + format_double(r.lambda) + " t=" + format_double(r.t), dev, tol, dev <= tol});
  }

  const auto bound = renorm_log_bound(log_lambdas, log_times, nu);
  CsvWriter lcsv(out_path(opt, "logbound.csv"), {"lambda", "sup_ratio"});
  double lo = kInfinity;
  double hi = 0.0;
  for (const auto& r : bound) {
    lcsv.row({r.lambda, r.sup_ratio});
    if (r.lambda >= log_min) {
      lo = std::min(lo, r.sup_ratio);
      hi = std::max(hi, r.sup_ratio);
    }
  }
  if (hi > 0.0) {
    const double ratio = hi / lo;
    checks.push_back({"log bound band", ratio, band, ratio <= band});
  }
  return finish(opt, checks, log);
}

int cmd_burgers_run(const Config& c, const CommonOptions& opt, std::ostream& log) {
  SolverConfig s = solver_config(c);
  s.zeta_on = c.get_bool("zeta");
  s.zeta_seed = c.get_u64("zeta_seed");
  s.divergence_threshold = positive_double(c, "divergence_threshold");
  const bool noise = c.get_bool("noise");
  const int sample_every = positive_int(c, "sample_every");
  const double galerkin_n = c.get_double("galerkin_n");
  if (galerkin_n < 0.0) throw UsageError("galerkin_n", "'galerkin_n' must be >= 0 (0 disables the cutoff)");
  const bool oracle = c.get_bool("oracle");
  const double oracle_tol = positive_double(c, "oracle_tol");
  if (oracle && (noise || s.zeta_on)) throw UsageError("oracle", "the fine-step oracle needs noise=off and zeta=off");
  const std::optional<double> cutoff = galerkin_n > 0.0 ? std::optional<double>(galerkin_n) : std::nullopt;

  std::optional<BurgersRun> run;
  try {
    run.emplace(s, opt.seed, cutoff, noise);
  } catch (const ContractError& e) {
    throw UsageError("theta_init", e.what());
  }
  CsvWriter traj(out_path(opt, "trajectory.csv"), {"t", "w_l2", "w_low_l2", "w_low_h1", "w_high_norm", "lambda",
                                                   "r_lambda", "noise_N", "dwlow2_dt"});
  int status = kExitOk;
  try {
    run->run([&](const BurgersRun&) {
      if (run->steps() % static_cast<std::uint64_t>(sample_every) != 0) return;
      const DiagnosticRecord d = run->diagnostics();
      traj.row({d.t, d.w_l2, d.w_low_l2, d.w_low_h1, d.w_high_norm, d.lambda, d.r_lambda, d.noise_N, d.dwlow2_dt});
    });
  } catch (const DivergenceError& e) {
    log << "divergence at t=" << format_double(e.time()) << " norm=" << format_double(e.norm())
        << " last good t=" << format_double(std::max(0.0, e.time() - s.dt)) << '\n';
    status = kExitDivergence;
  }

  CsvWriter sched(out_path(opt, "schedule.csv"), {"i", "T_i", "lambda"});
  const Schedule& sc = run->schedule();
  for (std::size_t j = 0; j < sc.levels.size(); ++j) {
    const std::size_t i = static_cast<std::size_t>(sc.i0) + j;
    sched.row({static_cast<std::int64_t>(i), sc.stopping_times[i], sc.levels[j]});
  }
  if (status != kExitOk) return status;

  std::vector<Check> checks;
  if (oracle) {
    SolverConfig fine = s;
    fine.dt = s.dt / 100.0;
    BurgersRun ref(fine, opt.seed, cutoff, false);
    ref.run();
    const double err = l2_norm(run->w() - ref.w());
    checks.push_back({"fine-step oracle L2", err, oracle_tol, err <= oracle_tol});
  }
  log << "t=" << format_double(run->time()) << " ||w||=" << format_double(l2_norm(run->w())) << '\n';
  return finish(opt, checks, log);
}

int cmd_galerkin_converge(const Config& c, const CommonOptions& opt, std::ostream& log) {
  const SolverConfig s = solver_config(c);
  const auto levels = c.get_doubles("levels");
  if (levels.size() < 2) throw UsageError("levels", "'levels' needs at least two cutoffs");
  for (double n : levels) {
    if (!(n > 0.0)) throw UsageError("levels", "cutoffs must be positive");
  }
  const int nseeds = positive_int(c, "seeds");
  const int min_dec = positive_int(c, "min_decreasing", 0);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < nseeds; ++i) seeds.push_back(opt.seed + static_cast<std::uint64_t>(i));

  const GalerkinReport rep = galerkin_convergence(s, seeds, levels, opt.threads);
  CsvWriter csv(out_path(opt, "galerkin.csv"), {"seed", "n", "distance", "decreasing"});
  int count = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = 0; j < levels.size(); ++j) {
      csv.row({seeds[i], levels[j], rep.distance[i][j], std::int64_t{rep.decreasing[i] ? 1 : 0}});
    }
    if (rep.decreasing[i]) ++count;
  }
  return finish(opt, {{"seeds with decreasing distance", static_cast<double>(count), static_cast<double>(min_dec),
                       count >= min_dec}},
                log);
}

int cmd_enhance_converge(const Config& c, const CommonOptions& opt, std::ostream& log) {
  EnhancementConvergenceConfig ec;
  const int nseeds = positive_int(c, "seeds");
  for (int i = 0; i < nseeds; ++i) ec.seeds.push_back(opt.seed + static_cast<std::uint64_t>(i));
  ec.kappa = c.get_double("kappa");
  if (!(ec.kappa > 0.0 && ec.kappa < 0.5)) throw UsageError("kappa", "'kappa' must lie in (0, 1/2)");
  ec.tau = positive_double(c, "tau");
  ec.n_max = positive_int(c, "n_max", 2);
  ec.n_points = positive_int(c, "n_grid", 8);
  ec.nu = positive_double(c, "nu");
  ec.t = positive_double(c, "t");
  ec.p = c.get_double("p");
  if (!(ec.p >= 1.0)) throw UsageError("p", "'p' must be >= 1");
  ec.threads = opt.threads;

  const auto rep = enhancement_convergence(ec);
  CsvWriter csv(out_path(opt, "enhance.csv"), {"n", "lambda_n", "lambda_n1", "median", "mean"});
  std::vector<Check> checks;
  for (std::size_t n = 0; n < rep.medians.size(); ++n) {
    csv.row({static_cast<std::int64_t>(n + 1), rep.lambdas[n], rep.lambdas[n + 1], rep.medians[n], rep.means[n]});
    if (n > 0) {
      checks.push_back({"median decreasing n=" + std::to_string(n + 1), rep.medians[n], rep.medians[n - 1],
                        rep.medians[n] < rep.medians[n - 1]});
    }
  }
  checks.push_back({"fitted exponent negative", rep.fitted_exponent, 0.0, rep.fitted_exponent < 0.0});
  log << "fitted exponent " << format_double(rep.fitted_exponent) << ", predicted bound exponent "
      << format_double(rep.predicted_exponent) << '\n';
  return finish(opt, checks, log);
}

int cmd_bony_check(const Config& c, const CommonOptions& opt, std::ostream& log) {
  BonyAuditConfig bc;
  bc.alpha = c.get_double("alpha");
  bc.beta = c.get_double("beta");
  bc.sigma1 = c.get_double("sigma1");
  bc.sigma2 = c.get_double("sigma2");
  bc.p = c.get_double("p");
  bc.q = c.get_double("q");
  if (!(bc.p >= 1.0)) throw UsageError("p", "'p' must be >= 1");
  if (!(bc.q >= 1.0)) throw UsageError("q", "'q' must be >= 1");
  bc.grid_sizes.clear();
  for (auto n : c.get_ints("grid_sizes")) bc.grid_sizes.push_back(static_cast<int>(n));
  std::sort(bc.grid_sizes.begin(), bc.grid_sizes.end());
  if (bc.grid_sizes.empty()) throw UsageError("grid_sizes", "'grid_sizes' is empty");
  bc.trials = positive_int(c, "trials");
  bc.margin = positive_double(c, "margin");
  bc.seed0 = opt.seed;
  bc.threads = opt.threads;
  const auto names = c.get_strings("estimates");
  if (!(names.size() == 1 && names[0] == "all")) {
    bc.estimates.clear();
    for (const auto& name : names) {
      bool found = false;
      for (auto e : all_bony_estimates()) {
        if (to_string(e) == name) {
          bc.estimates.push_back(e);
          found = true;
        }
      }
      if (!found) throw UsageError("estimates", "unknown estimate '" + name + "'");
    }
  }
  const double growth_tol = c.get_double("growth_tol");
  const bool strict = c.get_bool("strict");

  BonyAuditReport rep;
  try {
    for (int n : bc.grid_sizes) Grid::make(n);
    rep = bony_audit(bc, strict);
  } catch (const ContractError& e) {
    throw UsageError(strict ? "strict" : "grid_sizes", e.what());
  }

  CsvWriter csv(out_path(opt, "bony.csv"), {"estimate", "n_points", "seed", "ratio"});
  for (const auto& r : rep.rows) csv.row({to_string(r.estimate), std::int64_t{r.n_points}, r.seed, r.ratio});
  CsvWriter rcsv(out_path(opt, "bony_rejected.csv"), {"estimate", "reason"});
  for (const auto& [e, why] : rep.rejected) {
    rcsv.row({to_string(e), why});
    log << "skipped " << to_string(e) << ": " << why << '\n';
  }

  std::vector<Check> checks;
  std::set<BonyEstimate> active;
  for (const auto& r : rep.rows) active.insert(r.estimate);
  for (auto e : active) {
    bool finite = true;
    for (const auto& r : rep.rows) {
      if (r.estimate == e && !std::isfinite(r.ratio)) finite = false;
    }
    checks.push_back({to_string(e) + " finite", finite ? 1.0 : 0.0, 1.0, finite});
    for (std::size_t i = 1; i < bc.grid_sizes.size(); ++i) {
      const int n0 = bc.grid_sizes[i - 1];
      const int n1 = bc.grid_sizes[i];
      const double doublings = std::log2(static_cast<double>(n1) / n0);
      const double g = std::pow(rep.max_ratio(e, n1) / rep.max_ratio(e, n0), 1.0 / doublings) - 1.0;
      checks.push_back({to_string(e) + " growth N=" + std::to_string(n0) + "->" + std::to_string(n1), g, growth_tol,
                        g < growth_tol});
    }
  }
  return finish(opt, checks, log);
}

int cmd_anderson_solve(const Config& c, const CommonOptions& opt, std::ostream& log) {
  const GridPtr grid = Grid::make(positive_int(c, "n_grid", 8));
  const double a = c.get_double("a");
  if (!(a >= 2.0)) throw UsageError("a", "'a' must be >= 2");
  const double tol = positive_double(c, "tol");
  const int max_iter = positive_int(c, "max_iter");
  const double gamma = c.get_double("gamma");
  const SpectralField eta = field_from_config(c, "eta", grid);
  const SpectralField g = field_from_config(c, "g", grid);
  const SigmaConvention sigma{c.get_double("sigma_sign"), positive_double(c, "sigma_nu")};
  const RoughPair theta = lift(eta, c.get_double("c"), sigma);
  const bool adaptive = c.get_bool("adaptive");
  const double residual_tol = positive_double(c, "residual_tol");

  std::vector<Check> checks;
  try {
    const ResolventResult res =
        adaptive ? find_threshold(theta, g, a, tol, max_iter, gamma) : resolvent_solve(theta, g, a, tol, max_iter, gamma);
    CsvWriter csv(out_path(opt, "anderson.csv"), {"iteration", "increment", "residual"});
    for (const auto& r : res.trace) csv.row({std::int64_t{r.iteration}, r.increment, r.residual});
    log << "converged at a=" << format_double(res.a) << " in " << res.iterations << " iteration(s)\n";
    const double resid = res.trace.back().residual;
    checks.push_back({"converged", static_cast<double>(res.iterations), static_cast<double>(max_iter), true});
    checks.push_back({"final residual", resid, residual_tol, resid <= residual_tol});
  } catch (const NonContractionError& e) {
    log << "no contraction at a=" << format_double(e.shift()) << " after " << e.iterations() << " iterations\n";
    checks.push_back({"converged", static_cast<double>(e.iterations()), static_cast<double>(max_iter), false});
  }
  return finish(opt, checks, log);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"renorm-verify",   "burgers-run", "galerkin-converge",
                                              "enhance-converge", "bony-check",  "anderson-solve"};
  return names;
}

Config default_config(const std::string& command) {
  const auto it = defaults().find(command);
  if (it == defaults().end()) throw UsageError("command", "unknown subcommand '" + command + "'");
  return Config(it->second);
}

Config resolve_config(const std::string& command, const CommonOptions& options) {
  Config cfg = default_config(command);
  std::set<std::string> allowed;
  for (const auto& [k, v] : cfg.entries()) allowed.insert(k);
  if (options.config_path) {
    const Config file = Config::from_file(*options.config_path);
    file.require_known(allowed);
    cfg.merge(file);
  }
  for (const auto& [k, v] : options.overrides) {
    if (!allowed.count(k)) throw UsageError(k, "unknown option '--" + k + "'");
    cfg.set(k, v);
  }
  return cfg;
}

int run_command(const std::string& command, const CommonOptions& options, std::ostream& log) {
  static const std::map<std::string, std::function<int(const Config&, const CommonOptions&, std::ostream&)>> table{
      {"renorm-verify", cmd_renorm_verify},         {"burgers-run", cmd_burgers_run},
      {"galerkin-converge", cmd_galerkin_converge}, {"enhance-converge", cmd_enhance_converge},
      {"bony-check", cmd_bony_check},               {"anderson-solve", cmd_anderson_solve},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw UsageError("command", "unknown subcommand '" + command + "'");
  if (options.threads < 1) throw UsageError("threads", "'--threads' must be >= 1");
  const Config cfg = resolve_config(command, options);
  write_manifest(options.out, Manifest{command, cfg.entries(), options.seed, options.threads});
  return it->second(cfg, options, log);
}

}  // namespace sburgers
