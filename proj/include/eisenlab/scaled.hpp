#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace eisenlab {

// Complex number stored as mantissa * exp(log_scale).  Everything of size
// e^{pi T/2} (theta, rho*(1), cosh(pi T), the gamma_V factors) lives in this
// type; plain doubles overflow already near T = 450.
//
// Normal form: |mantissa| == 1, or mantissa == 0 with log_scale == 0.
struct ScaledComplex {
  std::complex<double> mantissa{0.0, 0.0};
  double log_scale = 0.0;

  ScaledComplex() = default;
  ScaledComplex(std::complex<double> m, double ls) : mantissa(m), log_scale(ls) {
    normalize();
  }

  static ScaledComplex from_double(std::complex<double> v) {
    return ScaledComplex(v, 0.0);
  }

  // exp(L) for complex L, without evaluating exp(Re L).
  static ScaledComplex from_log(std::complex<double> L) {
    return ScaledComplex(std::polar(1.0, L.imag()), L.real());
  }

  bool is_zero() const { return mantissa == std::complex<double>(0.0, 0.0); }

  void normalize() {
    if (mantissa == std::complex<double>(0.0, 0.0)) {
      log_scale = 0.0;
      return;
    }
    const double a = std::abs(mantissa);
    if (!std::isfinite(a)) throw std::domain_error("ScaledComplex: non-finite mantissa");
    mantissa /= a;
    log_scale += std::log(a);
  }

  // log|value|; -inf for zero.
  double abs_log() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return log_scale;  // |mantissa| == 1 in normal form
  }

  ScaledComplex conj() const {
    ScaledComplex r;
    r.mantissa = std::conj(mantissa);
    r.log_scale = log_scale;
    return r;
  }

  ScaledComplex operator*(const ScaledComplex& o) const {
    if (is_zero() || o.is_zero()) return ScaledComplex();
    return ScaledComplex(mantissa * o.mantissa, log_scale + o.log_scale);
  }

  ScaledComplex operator/(const ScaledComplex& o) const {
    if (o.is_zero()) throw std::domain_error("ScaledComplex: division by zero");
    if (is_zero()) return ScaledComplex();
    return ScaledComplex(mantissa / o.mantissa, log_scale - o.log_scale);
  }

  ScaledComplex operator+(const ScaledComplex& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    const ScaledComplex& hi = (log_scale >= o.log_scale) ? *this : o;
    const ScaledComplex& lo = (log_scale >= o.log_scale) ? o : *this;
    const double d = lo.log_scale - hi.log_scale;  // <= 0, exp never overflows
    return ScaledComplex(hi.mantissa + lo.mantissa * std::exp(d), hi.log_scale);
  }

  ScaledComplex operator-(const ScaledComplex& o) const {
    ScaledComplex neg = o;
    neg.mantissa = -neg.mantissa;
    return *this + neg;
  }

  // Value as plain complex, optionally with an extra power of e folded in.
  // Errors rather than silently overflowing.
  std::complex<double> to_complex(double extra_log = 0.0) const {
    if (is_zero()) return {0.0, 0.0};
    const double L = log_scale + extra_log;
    if (L > 700.0) throw std::overflow_error("ScaledComplex: scale too large for double");
    return mantissa * std::exp(L);  // underflow flushes to 0, that is fine
  }

  double to_real(double extra_log = 0.0) const { return to_complex(extra_log).real(); }
};

inline ScaledComplex scaled_real(double v) { return ScaledComplex::from_double({v, 0.0}); }

}  // namespace eisenlab
