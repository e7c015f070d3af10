// Paracontrolled resolvent of the Anderson-type operator Delta - eta.
//
// sigma(D) = sign * (1 - nu d_xx)^{-1}; the default (sign -1, nu 1) is the
// resolvent symbol -(1 - Delta)^{-1}. The lifted pair carries
// theta2 = -eta o sigma(D) eta - c, and the product of a paracontrolled f with
// eta is
//   f . eta = f < eta + f > eta + f_sharp o eta + R(f, sigma(D) eta, eta) - f theta2,
// which for smooth eta and c = 0 is the pointwise product.
#pragma once

#include <vector>

#include "sburgers/spectral.hpp"

namespace sburgers {

struct SigmaConvention {
  double sign = -1.0;
  double nu = 1.0;

  SpectralField apply(const SpectralField& f) const;
};

struct RoughPair {
  SpectralField eta;
  SpectralField theta2;
  double alpha = -1.0;
  double c = 0.0;
  SigmaConvention sigma{};
};

/// (eta, -resonant(eta, sigma(D) eta) - c).
RoughPair lift(const SpectralField& eta, double c, const SigmaConvention& sigma = {});

struct ParacontrolledFn {
  SpectralField f;
  SpectralField f_sharp;
  double gamma;
};

/// f_sharp = f - f < sigma(D) eta.
ParacontrolledFn paracontrolled(const RoughPair& theta, const SpectralField& f, double gamma = 0.9);

/// The extended product f . eta described above.
SpectralField paracontrolled_product(const RoughPair& theta, const SpectralField& f);

struct ResolventTraceRow {
  int iteration;
  double increment;  // H^gamma distance between successive iterates
  double residual;   // ||(a - Delta) f + f . eta - g||_{L^2}
};

struct ResolventResult {
  ParacontrolledFn solution;
  double a;
  int iterations;
  std::vector<ResolventTraceRow> trace;
};

/// Fixed point of f <- (g - f . eta) / (a + k^2), started from (a - Delta)^{-1} g.
/// Stops when the H^gamma increment drops below tol; a < 2 is a ContractError,
/// exhausting max_iter a NonContractionError.
ResolventResult resolvent_solve(const RoughPair& theta, const SpectralField& g, double a, double tol = 1e-12,
                                int max_iter = 200, double gamma = 0.9);

/// Doubles a from a0 (at most to 2^10 a0) until resolvent_solve converges.
ResolventResult find_threshold(const RoughPair& theta, const SpectralField& g, double a0, double tol = 1e-12,
                               int max_iter = 200, double gamma = 0.9);

/// <w, Delta w> - <w, w . eta> with the paracontrolled product; a >= 2 is only validated.
double resolvent_quadratic_form(const RoughPair& theta, const SpectralField& w, double a = 2.0);

/// Real L^2 inner product via Plancherel.
double inner(const SpectralField& u, const SpectralField& v);

}  // namespace sburgers
