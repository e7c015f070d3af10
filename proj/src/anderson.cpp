#include "sburgers/anderson.hpp"

#include <cmath>

#include "sburgers/error.hpp"
#include "sburgers/paracalc.hpp"

namespace sburgers {

SpectralField SigmaConvention::apply(const SpectralField& f) const {
  const double s = sign;
  const double n = nu;
  return apply_real_multiplier(f, [s, n](int k) { return s / (1.0 + n * k * k); });
}

RoughPair lift(const SpectralField& eta, double c, const SigmaConvention& sigma) {
  SpectralField theta2 = resonant(eta, sigma.apply(eta));
  theta2 *= -1.0;
  theta2.add_constant(-c);
  return RoughPair{eta, std::move(theta2), -1.0, c, sigma};
}

ParacontrolledFn paracontrolled(const RoughPair& theta, const SpectralField& f, double gamma) {
  return ParacontrolledFn{f, f - paraproduct(f, theta.sigma.apply(theta.eta)), gamma};
}

SpectralField paracontrolled_product(const RoughPair& theta, const SpectralField& f) {
  require_same_grid(f, theta.eta);
  const SpectralField s_eta = theta.sigma.apply(theta.eta);
  const SpectralField f_sharp = f - paraproduct(f, s_eta);
  SpectralField out = paraproduct(f, theta.eta);
  out += paraproduct(theta.eta, f);
  out += resonant(f_sharp, theta.eta);
  out += commutator_R(f, s_eta, theta.eta);
  out -= product(f, theta.theta2);
  return out;
}

double inner(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v);
  auto a = u.coeffs();
  auto b = v.coeffs();
  double sum = (a[0] * std::conj(b[0])).real();
  for (std::size_t k = 1; k < a.size(); ++k) sum += 2.0 * (a[k] * std::conj(b[k])).real();
  return sum;
}

namespace {

SpectralField shifted_inverse(const SpectralField& f, double a) {
  return apply_real_multiplier(f, [a](int k) { return 1.0 / (a + static_cast<double>(k) * k); });
}

double residual(const RoughPair& theta, const SpectralField& f, const SpectralField& g, double a) {
  SpectralField r = a * f - dxx(f);
  r += paracontrolled_product(theta, f);
  r -= g;
  return l2_norm(r);
}

}  // namespace

ResolventResult resolvent_solve(const RoughPair& theta, const SpectralField& g, double a, double tol, int max_iter,
                                double gamma) {
  if (!(a >= 2.0)) throw ContractError("resolvent_solve: shift a must be >= 2");
  if (!(tol > 0.0)) throw ContractError("resolvent_solve: tol must be positive");
  if (max_iter < 1) throw ContractError("resolvent_solve: max_iter must be positive");
  require_same_grid(g, theta.eta);

  ResolventResult result{paracontrolled(theta, SpectralField(g.grid_ptr()), gamma), a, 0, {}};
  SpectralField f = shifted_inverse(g, a);
  for (int it = 1; it <= max_iter; ++it) {
    SpectralField next = shifted_inverse(g - paracontrolled_product(theta, f), a);
    const double inc = sobolev_norm(next - f, gamma);
    f = std::move(next);
    result.trace.push_back({it, inc, residual(theta, f, g, a)});
    if (!std::isfinite(inc)) break;
    if (inc < tol) {
      result.iterations = it;
      result.solution = paracontrolled(theta, f, gamma);
      return result;
    }
  }
  throw NonContractionError(a, max_iter, "resolvent_solve: fixed-point iteration did not contract");
}

ResolventResult find_threshold(const RoughPair& theta, const SpectralField& g, double a0, double tol, int max_iter,
                               double gamma) {
  if (!(a0 >= 2.0)) throw ContractError("find_threshold: starting shift must be >= 2");
  const double a_max = std::ldexp(a0, 10);
  for (double a = a0;; a *= 2.0) {
    try {
      return resolvent_solve(theta, g, a, tol, max_iter, gamma);
    } catch (const NonContractionError&) {
      if (a * 2.0 > a_max) throw;
    }
  }
}

double resolvent_quadratic_form(const RoughPair& theta, const SpectralField& w, double a) {
  if (!(a >= 2.0)) throw ContractError("resolvent_quadratic_form: shift a must be >= 2");
  return inner(w, dxx(w)) - inner(w, paracontrolled_product(theta, w));
}

}  // namespace sburgers
