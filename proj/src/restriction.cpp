#include "eisenlab/restriction.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eisenlab/errors.hpp"
#include "eisenlab/parallel.hpp"
#include "eisenlab/quadrature.hpp"

namespace eisenlab {

namespace {

constexpr int kGlNodes = 6;
constexpr std::int64_t kTransverseNodeCap = 10'000;

// |E|^2 oscillates with log-y frequency about 2T; this density keeps several
// panels per oscillation.
int y_panel_count(double T, double alpha, double beta, double factor) {
  const double raw = factor * T * std::log(beta / alpha);
  return std::max(4, static_cast<int>(std::ceil(raw)));
}

void validate_common(const TestWindow& window, const RestrictionOptions& opt) {
  if (!(window.alpha > 0.0) || !(window.beta > window.alpha))
    throw std::invalid_argument("restriction: window bounds must satisfy 0 < alpha < beta");
  if (!(window.l2log > 0.0))
    throw std::invalid_argument("restriction: window mass missing; build with make_window");
  if (!(opt.point_tol > 0.0) || !(opt.y_panel_factor > 0.0) || !(opt.x_density > 0.0))
    throw std::invalid_argument("restriction: quadrature options must be positive");
}

// Gauss-Legendre sweep in v = log y of psi^2 * fiber(y) where fiber is the
// transverse x-aggregate of E^2 at height y.  Node work is split by panel;
// the reduction tree is fixed, so results are worker-count independent.
template <class Fiber>
double window_sweep(const TestWindow& window, int panels, const Fiber& fiber) {
  const double va = std::log(window.alpha);
  const double vb = std::log(window.beta);
  const double h = (vb - va) / panels;
  const GaussLegendre& gl = gl_rule(kGlNodes);
  const std::size_t per = gl.x.size();
  const double sum = parallel_sum(
      static_cast<std::size_t>(panels) * per, per, [&](std::size_t j) {
        const std::size_t p = j / per;
        const std::size_t i = j % per;
        const double v = va + h * (static_cast<double>(p) + 0.5 * (gl.x[i] + 1.0));
        const double y = std::exp(v);
        const double psi = window.psi(y);
        if (psi == 0.0) return 0.0;
        return gl.w[i] * psi * psi * fiber(y);
      });
  return sum * 0.5 * h;
}

}  // namespace

double TestWindow::psi(double y) const {
  const double u = (2.0 * y - alpha - beta) / (beta - alpha);
  const double q = 1.0 - u * u;
  if (!(q > 0.0)) return 0.0;
  return std::exp(-1.0 / q);
}

TestWindow make_window(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > alpha))
    throw std::invalid_argument("make_window: need 0 < alpha < beta");
  TestWindow w;
  w.alpha = alpha;
  w.beta = beta;

  const double va = std::log(alpha);
  const double vb = std::log(beta);
  const GaussLegendre& gl = gl_rule(12);
  const auto mass = [&](int panels) {
    return integrate_panels(va, vb, panels, gl, [&](double v) {
      const double p = w.psi(std::exp(v));
      return p * p;
    });
  };

  int panels = 8;
  double value = mass(panels);
  bool settled = false;
  while (panels <= 2048) {
    const double next = mass(2 * panels);
    panels *= 2;
    const bool close = std::abs(next - value) <= 1e-11 * std::abs(next);
    value = next;
    if (close) {
      settled = true;
      break;
    }
  }
  if (!settled)
    throw tolerance_error("make_window: window mass did not stabilize under refinement");
  w.l2log = value;
  w.l2log_panels = panels;
  return w;
}

RestrictionResult i_psi(const SpectralContext& ctx, const TestWindow& window,
                        double x, const RestrictionOptions& opt) {
  validate_common(window, opt);
  const int panels = y_panel_count(ctx.T, window.alpha, window.beta, opt.y_panel_factor);
  const auto fiber = [&](double y) {
    const double e = eval_e_star(ctx, x, y, opt.point_tol);
    return e * e;
  };
  RestrictionResult r;
  r.value = window_sweep(window, panels, fiber);
  r.y_nodes = static_cast<std::int64_t>(panels) * kGlNodes;
  r.x_nodes = 1;
  if (opt.estimate_error) {
    const int half = std::max(4, panels / 2);
    r.estimated_error = std::abs(r.value - window_sweep(window, half, fiber));
  }
  return r;
}

RestrictionResult i_star(const SpectralContext& ctx, const GeodesicPatch& patch,
                         const RestrictionOptions& opt) {
  validate_common(patch.window, opt);
  if (!(patch.gamma > 0.0))
    throw std::invalid_argument("i_star: gamma must be positive");
  if (patch.T != ctx.T)
    throw std::invalid_argument("i_star: patch and context disagree on T");

  const double half_width = patch.gamma / patch.T;
  const std::int64_t m = static_cast<std::int64_t>(
      std::ceil(2.0 * std::max(8.0, patch.gamma) * opt.x_density));
  if (m + 1 > kTransverseNodeCap)
    throw capacity_error("i_star: transverse node count exceeds 10^4");
  const double dx = 2.0 * half_width / static_cast<double>(m);

  // One Bessel profile per height serves every transverse node.
  const auto fiber = [&](double y) {
    std::vector<double> coef;
    const std::int64_t n_star = eval_profile(ctx, y, opt.point_tol, coef);
    const double c0 = eval_constant_term(ctx, y);
    double acc = 0.0;
    for (std::int64_t k = 0; k <= m; ++k) {
      const double x = patch.x0 - half_width + static_cast<double>(k) * dx;
      double e = c0;
      for (std::int64_t n = 1; n <= n_star; ++n) {
        e += 2.0 * std::cos(2.0 * M_PI * static_cast<double>(n) * x) *
             coef[static_cast<std::size_t>(n - 1)];
      }
      const double wt = (k == 0 || k == m) ? 0.5 : 1.0;
      acc += wt * e * e;
    }
    return acc * dx;
  };

  const int panels =
      y_panel_count(ctx.T, patch.window.alpha, patch.window.beta, opt.y_panel_factor);
  RestrictionResult r;
  r.value = window_sweep(patch.window, panels, fiber);
  r.y_nodes = static_cast<std::int64_t>(panels) * kGlNodes;
  r.x_nodes = m + 1;
  if (opt.estimate_error) {
    const int half = std::max(4, panels / 2);
    r.estimated_error = std::abs(r.value - window_sweep(patch.window, half, fiber));
  }
  return r;
}

double m_psi_gamma(const GeodesicPatch& patch) {
  if (!(patch.gamma > 0.0) || !(patch.T > 0.0))
    throw std::invalid_argument("m_psi_gamma: gamma and T must be positive");
  if (!(patch.window.l2log > 0.0))
    throw std::invalid_argument("m_psi_gamma: window mass missing; build with make_window");
  return 2.0 * patch.gamma / patch.T * patch.window.l2log;
}

double que_ratio(const SpectralContext& ctx, const GeodesicPatch& patch,
                 const RestrictionOptions& opt) {
  const double main_term =
      3.0 / M_PI * std::log(0.25 + patch.T * patch.T) * m_psi_gamma(patch);
  return i_star(ctx, patch, opt).value / main_term;
}

}  // namespace eisenlab
