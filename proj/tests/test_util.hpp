#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "oracles.hpp"
#include "sburgers/paracalc.hpp"
#include "sburgers/spectral.hpp"

namespace testutil {

inline oracle::Spectrum to_spectrum(const sburgers::SpectralField& f) {
  const int K = f.grid().max_mode();
  oracle::Spectrum s(K);
  for (int k = -K; k <= K; ++k) s.at(k) = f.mode(k);
  return s;
}

inline double distance(const sburgers::SpectralField& f, const oracle::Spectrum& s) {
  return oracle::l2_distance(to_spectrum(f), s);
}

inline sburgers::SpectralField single_mode(const sburgers::GridPtr& grid, int k, sburgers::Complex c = 1.0) {
  sburgers::SpectralField f(grid);
  f.set_mode(k, c);
  return f;
}

/// Smooth random field: |c_k| ~ |k|^{-s-3/4}, mean-zero.
inline sburgers::SpectralField random_field(const sburgers::GridPtr& grid, std::uint64_t seed, double s = 1.0,
                                            std::uint64_t tag = 0) {
  return sburgers::random_regular_field(grid, s, 0.25, seed, tag);
}

inline double max_abs_diff(const sburgers::SpectralField& a, const sburgers::SpectralField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.coeffs().size(); ++k) m = std::max(m, std::abs(a.coeffs()[k] - b.coeffs()[k]));
  return m;
}

}  // namespace testutil
