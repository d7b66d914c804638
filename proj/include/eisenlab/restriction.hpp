#pragma once

#include <cstdint>

#include "eisenlab/eisenstein.hpp"

namespace eisenlab {

// Smooth bump window supported on [alpha, beta] with its L^2(dy/y) mass.
struct TestWindow {
  double alpha = 1.0;
  double beta = 2.0;
  double l2log = 0.0;    // integral of psi^2 dy/y, stable to 1e-10 relative
  int l2log_panels = 0;  // log-y panel count at which the mass stabilized

  // psi(y) = exp(-1/(1-u^2)) with u = (2y-alpha-beta)/(beta-alpha); zero
  // outside [alpha, beta].
  double psi(double y) const;
};

// Vertical segment x = x0, alpha <= y <= beta, thickened to |x - x0| <= gamma/T.
struct GeodesicPatch {
  double x0 = 0.0;
  double gamma = 1.0;
  double T = 1.0;
  TestWindow window;
};

// Quadrature controls.  The log-y grid uses ceil(y_panel_factor * T *
// log(beta/alpha)) Gauss-Legendre panels (6 nodes each); the transverse grid
// is a uniform trapezoid with spacing <= (gamma/T) / (max(8, gamma) *
// x_density).  estimate_error repeats the sweep at half the y-panel count and
// reports the difference (estimated_error stays 0 when disabled).
struct RestrictionOptions {
  double point_tol = 1e-8;
  double y_panel_factor = 3.0;
  double x_density = 1.0;
  bool estimate_error = true;
};

struct RestrictionResult {
  double value = 0.0;
  double estimated_error = 0.0;
  std::int64_t y_nodes = 0;
  std::int64_t x_nodes = 0;
};

// Window with the default bump profile; l2log integrated in log y and refined
// by panel doubling until successive values agree to 1e-11 relative.
// Throws std::invalid_argument unless 0 < alpha < beta.
TestWindow make_window(double alpha, double beta);

// integral psi^2(y) E(x+iy)^2 dy/y over the window, Gauss-Legendre in log y.
RestrictionResult i_psi(const SpectralContext& ctx, const TestWindow& window,
                        double x, const RestrictionOptions& opt = {});

// Double integral of psi^2(y) E(x+iy)^2 dx dy/y over the thickened patch.
// Transverse trapezoid nodes are x0 - gamma/T + k*dx, k = 0..m, with
// m = ceil(2 * max(8, gamma) * x_density); throws capacity_error past 10^4
// nodes and std::invalid_argument if patch.T != ctx.T.
RestrictionResult i_star(const SpectralContext& ctx, const GeodesicPatch& patch,
                         const RestrictionOptions& opt = {});

// Patch mass (2 gamma / T) * l2log.
double m_psi_gamma(const GeodesicPatch& patch);

// i_star normalized by the first-moment prediction
// (3/pi) * log(1/4 + T^2) * m_psi_gamma; 1 is the conjectured limit.
double que_ratio(const SpectralContext& ctx, const GeodesicPatch& patch,
                 const RestrictionOptions& opt = {});

}  // namespace eisenlab
