#include "eisenlab/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eisenlab/csv.hpp"
#include "eisenlab/errors.hpp"
#include "eisenlab/parallel.hpp"
#include "eisenlab/quadrature.hpp"
#include "eisenlab/special.hpp"

namespace eisenlab {

namespace {

constexpr int kGlNodes = 6;

int y_panel_count(double T, double alpha, double beta, double factor) {
  const double raw = factor * T * std::log(beta / alpha);
  return std::max(4, static_cast<int>(std::ceil(raw)));
}

void validate_window(const TestWindow& window) {
  if (!(window.alpha > 0.0) || !(window.beta > window.alpha) || !(window.l2log > 0.0))
    throw std::invalid_argument("mellin: window must come from make_window");
}

}  // namespace

MellinTransform::MellinTransform(const SpectralContext& ctx, const TestWindow& window,
                                 double x, const MellinOptions& opt)
    : T_(ctx.T), opt_(opt) {
  validate_window(window);
  if (!(opt.point_tol > 0.0) || !(opt.y_panel_factor > 0.0) || !(opt.t_spacing > 0.0) ||
      !(opt.doubling_tol > 0.0))
    throw std::invalid_argument("mellin: quadrature options must be positive");

  const double span = std::log(window.beta / window.alpha);
  spacing_cap_ = M_PI / (16.0 * span);

  const int panels = y_panel_count(ctx.T, window.alpha, window.beta, opt.y_panel_factor);
  const auto build = [&](Fiber& fiber, int p) {
    const double va = std::log(window.alpha);
    const double h = span / p;
    const GaussLegendre& gl = gl_rule(kGlNodes);
    const std::size_t per = gl.x.size();
    fiber.v.assign(static_cast<std::size_t>(p) * per, 0.0);
    fiber.g.assign(fiber.v.size(), 0.0);
    parallel_chunks(p, [&](int panel) {
      for (std::size_t i = 0; i < per; ++i) {
        const double v = va + h * (panel + 0.5 * (gl.x[i] + 1.0));
        const double y = std::exp(v);
        const double psi = window.psi(y);
        const std::size_t j = static_cast<std::size_t>(panel) * per + i;
        fiber.v[j] = v;
        if (psi == 0.0) continue;
        fiber.g[j] = 0.5 * h * gl.w[i] * psi * eval_e_star(ctx, x, y, opt.point_tol);
      }
    });
  };
  build(coarse_, panels);
  build(fine_, 2 * panels);

  std::vector<double> abs_g(fine_.g.size());
  for (std::size_t j = 0; j < fine_.g.size(); ++j) abs_g[j] = std::abs(fine_.g[j]);
  mass_ = pairwise_sum(abs_g);
}

std::complex<double> MellinTransform::eval_on(const Fiber& fiber,
                                              std::complex<double> s) const {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < fiber.v.size(); ++j) {
    if (fiber.g[j] == 0.0) continue;
    const double v = fiber.v[j];
    acc += fiber.g[j] * std::exp(s.real() * v) *
           std::complex<double>(std::cos(s.imag() * v), std::sin(s.imag() * v));
  }
  return acc;
}

std::complex<double> MellinTransform::operator()(std::complex<double> s) const {
  if (!(std::abs(s.real()) <= 1.0))
    throw std::invalid_argument("mellin transform: |Re s| must be <= 1");
  const std::complex<double> fine = eval_on(fine_, s);
  const std::complex<double> coarse = eval_on(coarse_, s);
  if (std::abs(fine - coarse) > opt_.doubling_tol * (std::abs(fine) + 0.1 * mass_))
    throw tolerance_error("mellin transform: quadrature not doubling-stable");
  return fine;
}

double MellinTransform::f2(double t) const {
  return std::norm(eval_on(fine_, std::complex<double>(0.0, t)));
}

std::vector<double> MellinTransform::t_grid(double t_lo, double t_hi,
                                            double spacing_scale) const {
  std::vector<double> grid{t_lo};
  double t = t_lo;
  while (t < t_hi) {
    const double step = spacing_scale *
        std::min(spacing_cap_, opt_.t_spacing * std::sqrt(1.0 + std::abs(T_ - t)));
    t = std::min(t_hi, t + step);
    grid.push_back(t);
  }
  return grid;
}

double MellinTransform::integrate(double t_lo, double t_hi, bool coarse,
                                  double spacing_scale) const {
  if (!(t_hi >= t_lo) || !(t_lo >= 0.0))
    throw std::invalid_argument("mellin band: need 0 <= t_lo <= t_hi");
  const std::vector<double> grid = t_grid(t_lo, t_hi, spacing_scale);
  if (grid.size() < 2) return 0.0;
  const Fiber& fiber = coarse ? coarse_ : fine_;
  const std::size_t n = grid.size();
  const double sum = parallel_sum(n, 16, [&](std::size_t k) {
    const double left = (k == 0) ? grid[0] : grid[k - 1];
    const double right = (k + 1 == n) ? grid[n - 1] : grid[k + 1];
    const double w = 0.5 * (right - left);
    return w * std::norm(eval_on(fiber, std::complex<double>(0.0, grid[k])));
  });
  return sum / M_PI;
}

double MellinTransform::band(double t_lo, double t_hi) const {
  return integrate(t_lo, t_hi, false, 1.0);
}

std::int64_t MellinTransform::band_nodes(double t_lo, double t_hi) const {
  return static_cast<std::int64_t>(t_grid(t_lo, t_hi, 1.0).size());
}

std::complex<double> f_direct(const SpectralContext& ctx, const TestWindow& window,
                              double x, std::complex<double> s,
                              const MellinOptions& opt) {
  return MellinTransform(ctx, window, x, opt)(s);
}

std::complex<double> f0(const SpectralContext& ctx, const TestWindow& window,
                        double x, double t) {
  validate_window(window);
  const double T = ctx.T;
  if (!(std::abs(t) <= T - std::cbrt(T)))
    throw std::domain_error("f0: need |t| <= T - T^{1/3} (Stirling regime)");
  const double r = std::sqrt((T - t) * (T + t));

  const std::int64_t n_lo = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(r / (2.0 * M_PI * window.beta))));
  const std::int64_t n_hi =
      static_cast<std::int64_t>(std::ceil(r / (2.0 * M_PI * window.alpha)));
  if (n_hi > ctx.table.size())
    throw std::invalid_argument("f0: context table too small for the support range");

  std::complex<double> sum{0.0, 0.0};
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    const double w = window.psi(r / (2.0 * M_PI * static_cast<double>(n)));
    if (w == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    sum += ctx.table[n] / std::sqrt(static_cast<double>(n)) *
           2.0 * std::cos(2.0 * M_PI * static_cast<double>(n) * x) * w *
           std::polar(1.0, -t * ln);
  }
  const std::complex<double> scale =
      (ctx.rho_star * gamma_vt(T, std::complex<double>(0.0, t))).to_complex();
  return scale * sum;
}

ParsevalResult parseval_rhs(const SpectralContext& ctx, const TestWindow& window,
                            double x, const MellinOptions& opt) {
  const MellinTransform mt(ctx, window, x, opt);
  const double T = ctx.T;
  const double c = std::cbrt(T);

  const auto tail_probe = [&](double cut) {
    double peak = 0.0;
    for (double off : {0.0, 1.0, 2.0, 4.0}) peak = std::max(peak, mt.f2(cut + off * c));
    return peak * cut / M_PI;
  };

  // Start from the transition cut, then extend until the certificate passes:
  // the window's own Mellin tail (the constant term against psi) decays only
  // like exp(-2c sqrt(|t|-T)), so the certified cut sits far past T.
  double t_cut = T + 20.0 * c;
  double value = mt.band(0.0, t_cut);
  double tail = tail_probe(t_cut);
  int tries = 0;
  while (tail >= 1e-10 * std::abs(value) && tries < 60) {
    const double next = t_cut + std::max(25.0, 5.0 * c);
    value += mt.band(t_cut, next);
    t_cut = next;
    tail = tail_probe(t_cut);
    ++tries;
  }
  if (tail >= 1e-10 * std::abs(value))
    throw tolerance_error("parseval_rhs: spectral tail failed the decay certificate");

  ParsevalResult r;
  r.value = value;
  r.t_cut = t_cut;
  r.tail_bound = tail;
  r.t_nodes = mt.band_nodes(0.0, t_cut);
  r.y_nodes = mt.y_nodes();
  if (opt.estimate_error) {
    const double coarse_y = mt.integrate(0.0, t_cut, true, 1.0);
    const double dense_t = mt.integrate(0.0, t_cut, false, 0.5);
    r.estimated_error = std::abs(value - coarse_y) + std::abs(value - dense_t);
  }
  return r;
}

void SpectralLineProfile::dump_csv(const std::string& path) const {
  CsvWriter csv(path, {"t", "F2"});
  for (std::size_t k = 0; k < t_grid.size(); ++k) csv.row({t_grid[k], values[k]});
}

SpectralLineProfile line_profile(const SpectralContext& ctx, const TestWindow& window,
                                 double x, const MellinOptions& opt) {
  const MellinTransform mt(ctx, window, x, opt);
  const double T = ctx.T;
  const double t_end = T + 12.0 * std::cbrt(T);

  SpectralLineProfile profile;
  profile.T = T;

  // Positive half first; mirror afterwards (|F(-it)| = |F(it)| for real E).
  std::vector<double> pos;
  {
    double t = 0.0;
    pos.push_back(t);
    while (t < t_end) {
      const double step =
          std::min(M_PI / (16.0 * std::log(window.beta / window.alpha)),
                   opt.t_spacing * std::sqrt(1.0 + std::abs(T - t)));
      t = std::min(t_end, t + step);
      pos.push_back(t);
    }
  }
  std::vector<double> pos_vals(pos.size());
  parallel_chunks(static_cast<int>((pos.size() + 63) / 64), [&](int chunk) {
    const std::size_t lo = static_cast<std::size_t>(chunk) * 64;
    const std::size_t hi = std::min(pos.size(), lo + 64);
    for (std::size_t k = lo; k < hi; ++k) pos_vals[k] = mt.f2(pos[k]);
  });

  const double floor = (opt.point_tol * mt.mass()) * (opt.point_tol * mt.mass());
  for (double& v : pos_vals)
    if (v < floor) v = 0.0;

  profile.t_grid.reserve(2 * pos.size() - 1);
  profile.values.reserve(2 * pos.size() - 1);
  for (std::size_t k = pos.size(); k-- > 1;) {
    profile.t_grid.push_back(-pos[k]);
    profile.values.push_back(pos_vals[k]);
  }
  for (std::size_t k = 0; k < pos.size(); ++k) {
    profile.t_grid.push_back(pos[k]);
    profile.values.push_back(pos_vals[k]);
  }
  return profile;
}

double identity_3pi(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("identity_3pi: T must be positive");
  const std::complex<double> z1 = zeta(std::complex<double>(1.0, 2.0 * T));
  const std::complex<double> z2 = zeta(std::complex<double>(2.0, 0.0));
  const ScaledComplex th = theta(std::complex<double>(0.5, T));
  const ScaledComplex rho2 = ScaledComplex::from_log(
      std::complex<double>(std::log(2.0 / M_PI) - 2.0 * th.abs_log(), 0.0));
  const double lhs =
      std::norm(z1) / z2.real() * (rho2 * gamma_vt2(T, {0.0, 0.0})).to_real();
  return std::abs(lhs - 3.0 / M_PI);
}

double gamma_plancherel(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("gamma_plancherel: T must be positive");
  const ScaledComplex cosh_t = cosh_pi_scaled(T);
  const auto integrand = [&](double t) {
    const ScaledComplex g = gamma_vt(T, std::complex<double>(0.0, t));
    return (cosh_t * g * g.conj()).to_real();
  };

  // Graded panels: smooth non-oscillatory bump centered at t = T with
  // exponential decay past it; conjugate symmetry halves the range.
  const double t_end = T + 30.0;
  const GaussLegendre& gl = gl_rule(8);
  std::vector<double> edges{0.0};
  while (edges.back() < t_end) {
    const double width =
        std::min(3.0, 0.4 * std::sqrt(1.0 + std::abs(T - edges.back())));
    edges.push_back(std::min(t_end, edges.back() + width));
  }
  std::vector<double> partial(edges.size() - 1, 0.0);
  parallel_chunks(static_cast<int>(partial.size()), [&](int p) {
    const double a = edges[static_cast<std::size_t>(p)];
    const double b = edges[static_cast<std::size_t>(p) + 1];
    double s = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i)
      s += gl.w[i] * integrand(a + 0.5 * (b - a) * (gl.x[i] + 1.0));
    partial[static_cast<std::size_t>(p)] = 0.5 * (b - a) * s;
  });
  const double lhs = pairwise_sum(partial) / M_PI;  // two-sided /(2 pi)
  const double rhs = (cosh_t * gamma_vt2(T, {0.0, 0.0})).to_real();
  return std::abs(lhs - rhs) / rhs;
}

}  // namespace eisenlab
