#include "eisenlab/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "eisenlab/quadrature.hpp"

namespace eisenlab {

namespace {

using cd = std::complex<double>;

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLnPi = 1.1447298858494002;
constexpr double kHalfLn2Pi = 0.9189385332046727;

// log sin(pi z), branch chosen so exp() of it is exactly sin(pi z).
// For Im z >= 0 the factorization sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
// keeps every exponential bounded; the lower half-plane goes by conjugation.
cd log_sin_pi(cd z) {
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  const cd w = std::exp(cd(0.0, 2.0 * M_PI) * z);
  return cd(-kLn2, 0.5 * M_PI) - cd(0.0, M_PI) * z + std::log(1.0 - w);
}

}  // namespace

cd log_gamma(cd z) {
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return cd(kLnPi, 0.0) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  // Lanczos, g = 7, 9 coefficients.
  static const double c[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  const cd zm = z - 1.0;
  cd x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (zm + static_cast<double>(i));
  const cd t = zm + 7.5;
  return kHalfLn2Pi + (zm + 0.5) * std::log(t) - t + std::log(x);
}

cd zeta(cd s, const ZetaParams& params) {
  if (s == cd(1.0, 0.0)) throw std::domain_error("zeta: pole at s = 1");
  if (params.bernoulli_order < 1 || params.bernoulli_order > 9)
    throw std::invalid_argument("zeta: bernoulli_order must be in [1,9]");
  if (params.extra_terms < 1) throw std::invalid_argument("zeta: extra_terms must be >= 1");

  // B_{2k} / (2k)! for k = 1..9.
  static const double b2k_over_fact[9] = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -691.0 / 1307674368000.0,
      7.0 / 74724249600.0,
      -3617.0 / 10670622842880000.0,
      43867.0 / 5109094217170944000.0};

  const double n_cut = std::ceil(std::abs(s.imag())) + params.extra_terms;
  const long N = static_cast<long>(n_cut);

  // The truncation needs N >~ |Im s| for the Bernoulli tail to contract:
  // consecutive corrections shrink by roughly (|s| / 2 pi N)^2.
  cd sum(0.0, 0.0);
  for (long n = 1; n < N; ++n) {
    const double ln = std::log(static_cast<double>(n));
    sum += std::exp(-s * ln);
  }
  const double lnN = std::log(static_cast<double>(N));
  const cd NmS = std::exp(-s * lnN);  // N^{-s}
  sum += 0.5 * NmS;
  sum += NmS * static_cast<double>(N) / (s - 1.0);  // N^{1-s}/(s-1)

  // sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  cd prod = s;
  cd power = NmS / static_cast<double>(N);  // N^{-s-1}
  const double invN2 = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
  for (int k = 1; k <= params.bernoulli_order; ++k) {
    sum += b2k_over_fact[k - 1] * prod * power;
    if (k < params.bernoulli_order) {
      prod *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
      power *= invN2;
    }
  }
  return sum;
}

ScaledComplex theta(cd s) {
  const cd z2 = zeta(2.0 * s);
  const cd L = -s * kLnPi + log_gamma(s);
  return ScaledComplex::from_log(L) * ScaledComplex::from_double(z2);
}

ScaledComplex cosh_pi_scaled(double T) {
  const double a = std::abs(T);
  return ScaledComplex(cd(0.5 * (1.0 + std::exp(-2.0 * M_PI * a)), 0.0), M_PI * a);
}

ScaledComplex gamma_vt(double T, cd s) {
  const cd a = 0.5 * (cd(0.5, T) + s);
  const cd b = 0.5 * (cd(0.5, -T) + s);
  const cd L = -1.5 * kLn2 - s * kLnPi + log_gamma(a) + log_gamma(b);
  return ScaledComplex::from_log(L);
}

ScaledComplex gamma_vt2(double T, cd s) {
  const cd a = 0.5 * (cd(1.0, 2.0 * T) + s);
  const cd b = 0.5 * (cd(1.0, -2.0 * T) + s);
  const cd h = 0.5 * (cd(1.0, 0.0) + s);
  const cd L =
      -2.0 * kLn2 - s * kLnPi + log_gamma(a) + 2.0 * log_gamma(h) + log_gamma(b) - log_gamma(1.0 + s);
  return ScaledComplex::from_log(L);
}

// ---------------------------------------------------------------------------
// e^{pi T/2} K_{iT}(y) = Re integral_0^inf e^{i phi(u)} du,
// phi(u) = T u - y sinh u.
//
// The identity: shifting the contour to Im u = -pi/2 turns the integrand into
// e^{pi T/2} e^{iTt} e^{-y cosh t}, whose real part integrates to the scaled
// Bessel value, while the connecting vertical leg [0, -i pi/2] is purely
// imaginary.  All evaluation below deforms the same contour to steepest
// descent paths, so the scaling factor never appears as a floating-point
// number and no e^{+pi T/2} overflow or cancellation can occur.
// ---------------------------------------------------------------------------

namespace {

struct Phase {
  double T, ly;  // ly = log y
  // Rounding scale of the last eval: |e1| - |e2| cancellation means phi is
  // only known to ~eps times the largest intermediate.
  mutable double noise = 0.0;
  // phi, phi', phi'' at u via two complex exps.  y sinh(u) is assembled from
  // e^{u + log y} so that tiny y with large Re u never overflows on the way
  // to an O(1) product.
  void eval(cd u, cd& phi, cd& dphi, cd& d2phi) const {
    const cd e1 = std::exp(u + ly);
    const cd e2 = std::exp(-u + ly);
    const cd ysh = 0.5 * (e1 - e2);
    const cd ych = 0.5 * (e1 + e2);
    phi = T * u - ysh;
    dphi = T - ych;
    d2phi = -ysh;
    noise = std::numeric_limits<double>::epsilon() *
            (T * std::abs(u) + 0.5 * (std::abs(e1) + std::abs(e2)));
  }
};

// Solve phi(u) = target by Newton from a predictor.  Accepts when the u-step
// or the residual reaches rounding level; |target| can be ~1e5 so the
// residual floor scales with it.
cd phase_newton(const Phase& P, cd target, cd u, cd& dphi_out, cd& d2phi_out) {
  const double res_floor = 1e-13 * (1.0 + std::abs(target));
  cd phi, dphi, d2phi;
  cd best_u, best_dphi, best_d2phi;
  double best_r = std::numeric_limits<double>::infinity(), best_noise = 0.0;
  for (int it = 0; it < 20; ++it) {
    P.eval(u, phi, dphi, d2phi);
    const cd r = phi - target;
    if (std::abs(r) < best_r) {
      best_r = std::abs(r);
      best_u = u;
      best_dphi = dphi;
      best_d2phi = d2phi;
      best_noise = P.noise;
    }
    const cd du = r / dphi;
    u -= du;
    // Steps below res_floor/|phi'| only chase rounding noise in phi.
    const double du_floor = 1e-11 * (1.0 + std::abs(u)) + res_floor / std::abs(dphi);
    if (std::abs(du) < du_floor || std::abs(r) < res_floor) {
      dphi_out = dphi;
      d2phi_out = d2phi;
      return u;
    }
  }
  // Near the saddle the residual can sit at the rounding floor of eval while
  // the nominal tolerances stay out of reach; the best iterate is then the
  // path point to working precision.  A genuinely lost path leaves a
  // residual many orders larger.
  if (best_r < 20.0 * best_noise) {
    dphi_out = best_dphi;
    d2phi_out = best_d2phi;
    return best_u;
  }
  throw std::runtime_error("bessel_k_scaled: lost the saddle-point path");
}

// Oscillatory region y < T (and T large enough that the next saddle up the
// path, at distance q = sqrt(2 pi T), is beyond the truncation point).
// Saddle u0 = arccosh(T/y) on the real axis; with phi(u) = P0 + i q^2 the
// two-sided steepest path gives
//     value = Re( e^{i P0} h sum_k e^{-q_k^2} F(q_k) ),   F = 2iq / phi'(u(q)).
// The omitted connectors sit at height e^{-qmax^2}.
double regime_oscillatory(double T, double y, double u0, double P0) {
  const Phase P{T, std::log(y)};
  const double phi2 = std::sqrt((T - y) * (T + y));  // |phi''(u0)| = y sinh(u0)
  // Trapezoid step from strip analyticity: the image of the mirror saddle
  // sits at q = sqrt(2 P0) e^{i pi/4}, so the usable strip depth is
  // ~0.9 sqrt(P0); balance e^{d^2 - 2 pi d / h} ~ 1e-12.
  const double h = std::min(0.6, 2.0 * M_PI * 0.9 * std::sqrt(P0) / (27.0 + 0.81 * P0));
  const double qmax = 5.4;
  const int K = static_cast<int>(std::ceil(qmax / h));

  const cd dir = std::polar(1.0, -0.25 * M_PI);  // descent direction for q > 0
  const double uscale = std::sqrt(2.0 / phi2);
  const cd c1 = dir * uscale;
  const cd c2 = cd(0.0, T / (3.0 * phi2 * phi2));  // even in q: same both branches

  cd acc = uscale * dir;  // F(0) = sqrt(2/|phi''|) e^{-i pi/4}
  for (int sgn = -1; sgn <= 1; sgn += 2) {
    cd u_cur(u0, 0.0), dphi_cur(0.0, 0.0), d2phi_cur(-phi2, 0.0);
    double q_cur = 0.0;
    for (int k = 1; k <= K; ++k) {
      const double q = sgn * k * h;
      cd u_pred;
      if (k == 1) {
        u_pred = cd(u0, 0.0) + c1 * q + c2 * (q * q);
      } else {
        const double dq = q - q_cur;
        const cd up = 2.0 * cd(0.0, q_cur) / dphi_cur;
        const cd upp = (cd(0.0, 2.0) - up * up * d2phi_cur) / dphi_cur;
        u_pred = u_cur + up * dq + 0.5 * upp * (dq * dq);
      }
      const cd target(P0, q * q);
      u_cur = phase_newton(P, target, u_pred, dphi_cur, d2phi_cur);
      q_cur = q;
      const cd F = 2.0 * cd(0.0, q) / dphi_cur;
      acc += std::exp(-q * q) * F;
    }
  }
  const cd rot = std::polar(1.0, P0);
  return (rot * acc).real() * h;
}

// Monotone region y > T: saddle on the imaginary axis at -i theta0,
// theta0 = arccos(T/y), value e^{-p0}.  The leg [0, -i theta0] is purely
// imaginary; the descent path leaves the saddle in the +real direction with
// phi = i(p0 + q^2).  The half-line integral of e^{-q^2} F(q) goes through
// q = exp((pi/2) sinh w) so a plain trapezoid in w converges doubly
// exponentially at both ends.
double regime_decaying(double T, double y, double theta0, double p0) {
  const Phase P{T, std::log(y)};
  const double s0 = std::sin(theta0);
  const double F0 = std::sqrt(2.0 / (y * s0));
  const cd u_s(0.0, -theta0);
  const cd c2 = cd(0.0, -T / (3.0 * y * y * s0 * s0));

  const double hw = 0.12;
  const double w_lo = -3.6;
  const int n_w = 43;

  cd acc(0.0, 0.0);
  cd u_cur = u_s, dphi_cur(0.0, 0.0), d2phi_cur(0.0, y * s0);
  double q_cur = 0.0;
  bool have_newton = false;
  for (int k = 0; k < n_w; ++k) {
    const double w = w_lo + k * hw;
    const double q = std::exp(0.5 * M_PI * std::sinh(w));
    if (q * q > 46.0) break;
    const double jac = 0.5 * M_PI * std::cosh(w) * q;
    cd F;
    if (q < 1e-4) {
      // Series leg: Newton residuals are below rounding noise here.
      const cd u = u_s + F0 * q + c2 * (q * q);
      cd phi, dphi, d2phi;
      P.eval(u, phi, dphi, d2phi);
      F = 2.0 * cd(0.0, q) / dphi;
    } else {
      cd u_pred;
      if (!have_newton) {
        u_pred = u_s + F0 * q + c2 * (q * q);
      } else {
        const double dq = q - q_cur;
        const cd up = 2.0 * cd(0.0, q_cur) / dphi_cur;
        const cd upp = (cd(0.0, 2.0) - up * up * d2phi_cur) / dphi_cur;
        u_pred = u_cur + up * dq + 0.5 * upp * (dq * dq);
      }
      const cd target = cd(0.0, p0 + q * q);
      u_cur = phase_newton(P, target, u_pred, dphi_cur, d2phi_cur);
      q_cur = q;
      have_newton = true;
      F = 2.0 * cd(0.0, q) / dphi_cur;
    }
    acc += (hw * jac * std::exp(-q * q)) * F;
  }
  return std::exp(-p0) * acc.real();
}

// Transition band |y - T| small (and all of T < 12): integrate on the real
// axis with phase-tracked Gauss-Legendre panels, then push the tail into the
// lower half-plane where it decays.  All hyperbolics enter through
// y cosh(u) = (e^{u + log y} + e^{-u + log y})/2 so y down to 1e-200 is safe.
double regime_transition(double T, double y) {
  const double ly = std::log(y);
  const auto ycosh = [ly](double u) { return 0.5 * (std::exp(u + ly) + std::exp(-u + ly)); };
  const auto ysinh = [ly](double u) { return 0.5 * (std::exp(u + ly) - std::exp(-u + ly)); };
  // u with y cosh(u) = r, i.e. acosh(r/y), in log form.
  const auto inv_ycosh = [ly, y](double r) {
    return std::log(r + std::sqrt((r - y) * (r + y))) - ly;
  };

  const double M = std::max({1.5 * T, 1.5 * y, 25.0});
  const double X = inv_ycosh(M);
  const double ychX = M;
  const double yshX = std::sqrt((M - y) * (M + y));
  const GaussLegendre& g12 = gl_rule(12);

  std::vector<double> parts;
  parts.reserve(256);

  // Main leg [0, X]: panel width limited by local frequency |phi'| and by
  // curvature |phi''| so each panel sees a few radians at most.  Both are
  // increasing in u near the turning point, so they are sampled at the right
  // edge as well and the width shrunk to a fixed point.
  const auto panel_width = [&](double a, double upper) {
    double w = std::min(0.5, upper - a);
    for (int it = 0; it < 4; ++it) {
      const double freq = std::max(std::abs(T - ycosh(a)), std::abs(T - ycosh(a + w)));
      const double curv = std::max(ysinh(a), ysinh(a + w));
      w = std::min(w, std::min(6.0 / (freq + 1.0), 3.0 / std::sqrt(curv + 1.0)));
    }
    return w;
  };

  double a = 0.0;
  for (int guard = 0; a < X; ++guard) {
    if (guard > 200000) throw std::runtime_error("bessel_k_scaled: panel walk stalled");
    const double w = panel_width(a, X);
    double s = 0.0;
    for (std::size_t i = 0; i < g12.x.size(); ++i) {
      const double u = a + 0.5 * w * (g12.x[i] + 1.0);
      s += g12.w[i] * std::cos(T * u - ysinh(u));
    }
    parts.push_back(0.5 * w * s);
    a += w;
  }

  // Vertical leg u = X - i s, s in [0, c]:  |integrand| = e^{Ts - y cosh(X) sin s}
  // <= e^{-kappa s} with kappa = 0.8415 y cosh X - T > 0 by the choice of X.
  const double kappa = 0.8415 * ychX - T;
  const double c = std::min(1.0, 45.0 / kappa);
  double s_pos = 0.0;
  while (s_pos < c) {
    const double rate = std::abs(T - ychX * std::cos(s_pos)) + yshX * std::sin(s_pos) + 1.0;
    const double w = std::min(c - s_pos, 6.0 / rate);
    double re = 0.0;
    for (std::size_t i = 0; i < g12.x.size(); ++i) {
      const double s = s_pos + 0.5 * w * (g12.x[i] + 1.0);
      // e^{i phi(X - is)} = mag e^{i ph}; du = -i ds picks out mag sin(ph).
      const double mag = std::exp(T * s - ychX * std::sin(s));
      const double ph = T * X - yshX * std::cos(s);
      re += g12.w[i] * mag * std::sin(ph);
    }
    parts.push_back(0.5 * w * re);
    s_pos += w;
  }

  // Horizontal leg u = v - i at depth 1 (only needed when kappa <= 45;
  // otherwise the vertical leg already reached e^{-45} and the remainder is
  // below e^{-45}/27).
  if (c >= 1.0) {
    const double vend = inv_ycosh((T + 46.0) / 0.8415);
    const int n_pan = 12;
    const double wp = (vend - X) / n_pan;
    for (int p = 0; p < n_pan; ++p) {
      const double lo = X + p * wp;
      double re = 0.0;
      for (std::size_t i = 0; i < g12.x.size(); ++i) {
        const double v = lo + 0.5 * wp * (g12.x[i] + 1.0);
        // u = v - i:  phi = Tv - y sinh(v) cos(1) + i(y cosh(v) sin(1) - T)
        const double mag = std::exp(T - ycosh(v) * std::sin(1.0));
        const double ph = T * v - ysinh(v) * std::cos(1.0);
        re += g12.w[i] * mag * std::cos(ph);
      }
      parts.push_back(0.5 * wp * re);
    }
  }
  return pairwise_sum(parts);
}

}  // namespace

double bessel_k_scaled(double T, double y, double t_max) {
  if (!(T >= 0.0) || T > t_max)
    throw std::invalid_argument("bessel_k_scaled: T outside [0, t_max]");
  if (!(y >= 1e-200) || y > 1e12)
    throw std::invalid_argument("bessel_k_scaled: y outside [1e-200, 1e12]");

  if (y >= T) {
    const double theta0 = std::acos(std::min(1.0, T / y));
    const double p0 = y * (std::sin(theta0) - theta0 * std::cos(theta0));
    if (p0 > 730.0) return 0.0;  // e^{-p0} underflows
    if (p0 >= 0.5) return regime_decaying(T, y, theta0, p0);
    return regime_transition(T, y);
  }
  if (T >= 12.0) {
    const double u0 = std::acosh(T / y);
    const double P0 = T * u0 - std::sqrt((T - y) * (T + y));  // T u0 - y sinh(u0)
    // Below T ~ 12 the q-grid would reach the next saddle at sqrt(2 pi T);
    // those cases go through the transition contour instead.
    if (P0 >= 0.5) return regime_oscillatory(T, y, u0, P0);
  }
  return regime_transition(T, y);
}

}  // namespace eisenlab
