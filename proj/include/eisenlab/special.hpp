#pragma once

#include <complex>

#include "eisenlab/scaled.hpp"

namespace eisenlab {

// log Gamma(z).  Principal branch for Re z >= 0.5 (Lanczos); continued to the
// left half-plane through the reflection formula, evaluated in log space so
// exp(log_gamma(z)) == Gamma(z) for every non-pole z, also when |Im z| is
// large and Gamma itself would under/overflow.
std::complex<double> log_gamma(std::complex<double> z);

// Euler-Maclaurin tail controls for zeta().  The defaults hold ~1e-13
// relative error for |Im s| up to a few thousand; raising extra_terms is the
// built-in way to re-check a value with a finer truncation.
struct ZetaParams {
  int extra_terms = 32;     // cutoff N = ceil(|Im s|) + extra_terms
  int bernoulli_order = 8;  // number of B_{2k} corrections, 1..9
};

// Riemann zeta, Euler-Maclaurin.  Throws std::domain_error at the pole s = 1.
std::complex<double> zeta(std::complex<double> s, const ZetaParams& params = {});

// theta(s) = pi^{-s} Gamma(s) zeta(2s).  Scaled: |theta(1/2+iT)| decays like
// e^{-pi T/2}.  In normal form the mantissa is exactly the phase theta/|theta|.
ScaledComplex theta(std::complex<double> s);

// cosh(pi T) for T >= 0 without overflow.
ScaledComplex cosh_pi_scaled(double T);

// e^{pi T/2} K_{iT}(y) for T >= 0, y > 0.  The scaling removes the uniform
// e^{-pi T/2} decay of the modified Bessel function of imaginary order, so the
// result is an O(1) oscillating quantity below the turning point y = T and
// decays like exp(-(y sin a - T a)), a = arccos(T/y), above it.
//
// Absolute accuracy ~1e-10, relative ~1e-9 away from zeros.  Throws
// std::invalid_argument for T > t_max (accuracy model untested beyond it),
// T < 0, or y outside [1e-200, 1e12].
double bessel_k_scaled(double T, double y, double t_max = 5000.0);

// Mellin factor of the normalized Bessel profile V(y) = sqrt(y) K_{iT}(y)
// against y^{s-1} with the 2*pi-rescaled argument:
//
//   gamma_vt(T, s) = integral_0^inf V(2 pi y) y^{s-1} dy
//                  = 2^{-3/2} pi^{-s} Gamma((1/2+s+iT)/2) Gamma((1/2+s-iT)/2)
//
// Decays like e^{-pi T/2}; returned scaled.
ScaledComplex gamma_vt(double T, std::complex<double> s);

// Same for the squared profile:
//
//   gamma_vt2(T, s) = integral_0^inf V(2 pi y)^2 y^{s-1} dy
//                  = 2^{-2} pi^{-s} Gamma((1+s+2iT)/2) Gamma((1+s)/2)^2
//                    Gamma((1+s-2iT)/2) / Gamma(1+s)
//
// Decays like e^{-pi T}; returned scaled.  At s = 0 the value is
// (pi/4) |Gamma(1/2+iT)|^2 = pi^2 / (4 cosh(pi T)).
ScaledComplex gamma_vt2(double T, std::complex<double> s);

}  // namespace eisenlab
