#pragma once

#include <complex>
#include <cstdint>

#include "eisenlab/arith.hpp"
#include "eisenlab/scaled.hpp"

namespace eisenlab {

// Everything needed to evaluate the completed spectral-parameter-T series
// pointwise: the completed-zeta phase, the first Fourier coefficient in
// scaled and in e^{-pi T/2}-absorbed form, and the sieved coefficient table.
struct SpectralContext {
  double T = 0.0;
  ScaledComplex theta_half;            // pi^{-s} Gamma(s) zeta(2s) at s = 1/2 + iT
  std::complex<double> mu;             // theta_half / |theta_half|, unit modulus
  ScaledComplex rho_star;              // (2/pi)^{1/2} / |theta_half|, real > 0
  std::complex<double> zeta_1_2iT;     // zeta(1 + 2iT)
  double rho_scaled = 0.0;             // rho_star * e^{-pi T/2}, an O(1) real
  DivisorTable table;                  // tau_{iT}(n) for n <= n_max

  // Construction diagnostics: deviation of |mu| from 1, and relative residual
  // of |rho_star|^2 / cosh(pi T) = (2/pi) / |zeta(1+2iT)|^2, which crosses the
  // Gamma/zeta route against the direct zeta route.
  double mu_norm_residual = 0.0;
  double coeff_identity_residual = 0.0;
};

// Builds the context at spectral parameter T > 0 with a coefficient table of
// size n_max.  Validates the unit-phase and first-coefficient identities and
// stores their residuals.
SpectralContext make_context(double T, std::int64_t n_max);

// Smallest n* for which the neglected Fourier tail past n* is certified
// < tol in absolute value, from the decay envelope of the Bessel profile past
// its turning point.  Never less than ceil((T + 10 T^{1/3}) / (2 pi y)).
std::int64_t truncation_index(double y, double T, double tol);

// E at x + iy by the Fourier expansion, truncated at certified tolerance tol.
// Exactly real by construction.  Throws std::invalid_argument if the context
// table cannot cover the required truncation index.
double eval_e_star(const SpectralContext& ctx, double x, double y, double tol);

// Building blocks of eval_e_star, exposed so quadratures over x at fixed y
// can batch the Bessel work:
//   E(x+iy) = constant_term(y) + sum_{n>=1} 2 coef[n-1] cos(2 pi n x).
// Returns the certified truncation index; coef is resized to it.
std::int64_t eval_profile(const SpectralContext& ctx, double y, double tol,
                          std::vector<double>& coef);
double eval_constant_term(const SpectralContext& ctx, double y);

}  // namespace eisenlab
