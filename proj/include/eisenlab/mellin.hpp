#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "eisenlab/eisenstein.hpp"
#include "eisenlab/restriction.hpp"

namespace eisenlab {

// Controls for the spectral-side quadratures.  The y-grid reuses the
// restriction grid family (Gauss-Legendre panels in log y); the t-grid is a
// graded trapezoid with spacing t_spacing * sqrt(1 + |T - t|), dense at the
// |t| = T transition and capped so the fastest oscillation of |F(it)|^2
// (frequency log(beta/alpha)) keeps >= 16 nodes per period.
struct MellinOptions {
  double point_tol = 1e-8;
  double y_panel_factor = 3.0;
  double doubling_tol = 1e-6;  // transform doubling guard
  double t_spacing = 0.03;     // base spacing at the transition
  bool estimate_error = true;
};

struct ParsevalResult {
  double value = 0.0;
  double estimated_error = 0.0;
  std::int64_t t_nodes = 0;
  std::int64_t y_nodes = 0;
  double t_cut = 0.0;      // one-sided integration endpoint
  double tail_bound = 0.0; // certified bound on the dropped |t| > t_cut mass
};

// The transform F(s) = integral psi(y) y^s E(x+iy) dy/y held as quadrature
// fibers at two grid resolutions, so many s-values share the E evaluations.
class MellinTransform {
 public:
  MellinTransform(const SpectralContext& ctx, const TestWindow& window, double x,
                  const MellinOptions& opt = {});

  // F(s) on the fine grid for |Re s| <= 1.  Throws tolerance_error when the
  // half-resolution grid disagrees beyond doubling_tol (grid too coarse).
  std::complex<double> operator()(std::complex<double> s) const;

  // |F(it)|^2 on the fine grid, no doubling guard.
  double f2(double t) const;

  // (1/pi) integral of |F(it)|^2 over [t_lo, t_hi], t_hi >= t_lo >= 0; this is
  // the |t| in [t_lo, t_hi] share of the two-sided Parseval integral.
  double band(double t_lo, double t_hi) const;

  double mass() const { return mass_; }  // sum of |fiber weights|, an |F| scale
  double T() const { return T_; }
  std::int64_t y_nodes() const { return static_cast<std::int64_t>(fine_.v.size()); }
  std::int64_t band_nodes(double t_lo, double t_hi) const;
  const MellinOptions& options() const { return opt_; }

 private:
  struct Fiber {
    std::vector<double> v;  // log y at the quadrature nodes
    std::vector<double> g;  // weight * psi(y) * E(x+iy)
  };

  std::complex<double> eval_on(const Fiber& fiber, std::complex<double> s) const;
  double integrate(double t_lo, double t_hi, bool coarse, double spacing_scale) const;
  std::vector<double> t_grid(double t_lo, double t_hi, double spacing_scale) const;

  friend ParsevalResult parseval_rhs(const SpectralContext&, const TestWindow&,
                                     double, const MellinOptions&);

  Fiber coarse_;
  Fiber fine_;
  double T_ = 0.0;
  double mass_ = 0.0;
  double spacing_cap_ = 0.0;
  MellinOptions opt_;
};

// One-shot F(s) with the doubling guard.
std::complex<double> f_direct(const SpectralContext& ctx, const TestWindow& window,
                              double x, std::complex<double> s,
                              const MellinOptions& opt = {});

// Stirling-regime series form: rho*(1) gamma_vt(T, it) times the finite sum of
// tau_{iT}(n) pairs weighted by psi(sqrt(T^2-t^2) / (2 pi n)).  Requires
// |t| <= T - T^{1/3} (throws std::domain_error outside) and a context table
// covering n <= sqrt(T^2-t^2) / (2 pi alpha).
std::complex<double> f0(const SpectralContext& ctx, const TestWindow& window,
                        double x, double t);

// (1/2pi) integral |F(it)|^2 dt over |t| <= t_cut, graded trapezoid, with the
// dropped tail certified below 1e-10 of the total (tolerance_error otherwise).
ParsevalResult parseval_rhs(const SpectralContext& ctx, const TestWindow& window,
                            double x, const MellinOptions& opt = {});

// |F(it)|^2 sampled on the graded grid over [-t_end, t_end] with
// t_end = T + 12 T^{1/3}.  Values below the quadrature noise floor
// (point_tol * mass)^2 are reported as exactly 0.  Past the transition the
// profile decays like exp(-2c sqrt(|t| - T)) -- the Mellin tail of the window
// itself, carried by the constant term -- so at desk scale the far tail is
// small but measurable, not zero.
struct SpectralLineProfile {
  double T = 0.0;
  std::vector<double> t_grid;
  std::vector<double> values;
  void dump_csv(const std::string& path) const;  // header t,F2, 17 digits
};
SpectralLineProfile line_profile(const SpectralContext& ctx, const TestWindow& window,
                                 double x, const MellinOptions& opt = {});

// |LHS - 3/pi| for the closed-form constant identity
// (|zeta(1+2iT)|^2 / zeta(2)) |rho*(1)|^2 gamma_vt2(T, 0) = 3/pi.
double identity_3pi(double T);

// Relative residual of (1/2pi) integral |gamma_vt(T, it)|^2 dt = gamma_vt2(T, 0),
// both sides carried against cosh(pi T) in scaled arithmetic.
double gamma_plancherel(double T);

}  // namespace eisenlab
