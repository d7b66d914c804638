#include "eisenlab/eisenstein.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eisenlab/errors.hpp"
#include "eisenlab/quadrature.hpp"
#include "eisenlab/special.hpp"

namespace eisenlab {

namespace {

// First-coefficient scale with the e^{-pi T/2} Bessel scaling absorbed:
// rho_star e^{-pi T/2} = (2/pi)^{1/2} ((1 + e^{-2 pi T})/2)^{1/2} / |zeta(1+2iT)|.
double rho_scaled_from_zeta(double T, std::complex<double> zeta_1_2iT) {
  return std::sqrt(2.0 / M_PI) * std::sqrt(0.5 * (1.0 + std::exp(-2.0 * M_PI * T))) /
         std::abs(zeta_1_2iT);
}

// Decay exponent of the Bessel profile past its turning point u = T.
double bessel_tail_exponent(double T, double u) {
  return std::sqrt((u - T) * (u + T)) - T * std::acos(std::min(1.0, T / u));
}

// Certified envelope of one Fourier term at frequency n, y fixed:
// |2 tau(n) n^{-1/2} rho_scaled sqrt(u) B(T,u)| with |tau(n)| <= d(n) < 2 sqrt(n)
// and B(T,u) <= 3 e^{-p0} / (u^2-T^2)^{1/4} past the turning point.
double tail_term_envelope(double rho_scaled, double T, double u) {
  const double p0 = bessel_tail_exponent(T, u);
  if (p0 > 700.0) return 0.0;
  return 12.0 * rho_scaled * std::sqrt(u) * std::exp(-p0) /
         std::pow((u - T) * (u + T), 0.25);
}

std::int64_t truncation_index_scaled(double rho_scaled, double y, double T, double tol) {
  if (!(y > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("truncation_index: y and tol must be positive");
  const double two_pi_y = 2.0 * M_PI * y;
  const std::int64_t n_floor = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil((T + 10.0 * std::cbrt(T)) / two_pi_y)));
  const std::int64_t n_limit = n_floor + 10'000'000;
  for (std::int64_t n = n_floor; n <= n_limit; ++n) {
    const double u = two_pi_y * static_cast<double>(n + 1);
    const double head = tail_term_envelope(rho_scaled, T, u);
    // Successive terms shrink by at least e^{-2 pi y p0'(u)}, p0' = sqrt(u^2-T^2)/u.
    const double ratio = std::exp(-two_pi_y * std::sqrt((u - T) * (u + T)) / u);
    if (head / (1.0 - ratio) < tol) return n;
  }
  throw capacity_error("truncation_index: tolerance unreachable within 1e7 terms");
}

}  // namespace

SpectralContext make_context(double T, std::int64_t n_max) {
  if (!(T > 0.0)) throw std::invalid_argument("make_context: T must be positive");
  if (n_max < 1) throw std::invalid_argument("make_context: n_max must be positive");

  const ScaledComplex theta_half = theta(std::complex<double>(0.5, T));
  const std::complex<double> mu = theta_half.mantissa;
  const std::complex<double> z1 = zeta(std::complex<double>(1.0, 2.0 * T));
  const ScaledComplex rho_star = ScaledComplex::from_log(
      std::complex<double>(0.5 * std::log(2.0 / M_PI) - theta_half.abs_log(), 0.0));
  const double rho_scaled = rho_scaled_from_zeta(T, z1);

  const double mu_res = std::abs(std::abs(mu) - 1.0);
  // |rho_star|^2 / cosh(pi T) vs (2/pi)/|zeta|^2, compared in log space.
  const double lhs_log = 2.0 * rho_star.abs_log() - cosh_pi_scaled(T).abs_log();
  const double rhs_log = std::log(2.0 / M_PI) - 2.0 * std::log(std::abs(z1));
  const double id_res = std::abs(lhs_log - rhs_log);

  return SpectralContext{T,          theta_half, mu,     rho_star, z1,
                         rho_scaled, build_table(n_max, T), mu_res, id_res};
}

std::int64_t truncation_index(double y, double T, double tol) {
  if (!(T >= 0.0)) throw std::invalid_argument("truncation_index: T must be >= 0");
  const double rho_scaled =
      T > 0.0 ? rho_scaled_from_zeta(T, zeta(std::complex<double>(1.0, 2.0 * T)))
              : 1.0;
  return truncation_index_scaled(rho_scaled, y, T, tol);
}

double eval_constant_term(const SpectralContext& ctx, double y) {
  if (!(y > 0.0)) throw std::invalid_argument("eval_constant_term: y must be positive");
  // mu y^{1/2+iT} + conj, kept manifestly real.
  return 2.0 * std::sqrt(y) * (ctx.mu * std::polar(1.0, ctx.T * std::log(y))).real();
}

std::int64_t eval_profile(const SpectralContext& ctx, double y, double tol,
                          std::vector<double>& coef) {
  if (!(y > 0.0)) throw std::invalid_argument("eval_profile: y must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("eval_profile: tol must be positive");
  const std::int64_t n_star = truncation_index_scaled(ctx.rho_scaled, y, ctx.T, tol);
  if (n_star > ctx.table.size())
    throw std::invalid_argument("eval_profile: context table too small for tolerance");

  const double two_pi_y = 2.0 * M_PI * y;
  coef.assign(static_cast<std::size_t>(n_star), 0.0);
  for (std::int64_t n = 1; n <= n_star; ++n) {
    const double u = two_pi_y * static_cast<double>(n);
    coef[static_cast<std::size_t>(n - 1)] = ctx.rho_scaled * ctx.table[n] /
                                            std::sqrt(static_cast<double>(n)) *
                                            std::sqrt(u) * bessel_k_scaled(ctx.T, u);
  }
  return n_star;
}

double eval_e_star(const SpectralContext& ctx, double x, double y, double tol) {
  std::vector<double> coef;
  const std::int64_t n_star = eval_profile(ctx, y, tol, coef);
  std::vector<double> terms(coef.size());
  for (std::int64_t n = 1; n <= n_star; ++n) {
    terms[static_cast<std::size_t>(n - 1)] =
        2.0 * std::cos(2.0 * M_PI * static_cast<double>(n) * x) *
        coef[static_cast<std::size_t>(n - 1)];
  }
  return eval_constant_term(ctx, y) + pairwise_sum(terms);
}

}  // namespace eisenlab
