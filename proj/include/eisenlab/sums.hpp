#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "eisenlab/arith.hpp"

namespace eisenlab {

// Correlation window driving the opened-route kernel.
//   annulus:   w1(v) = psi(|v|), psi the standard bump on [1/2,2].  Keeps the
//              frequency window away from 0; the transform changes sign.
//   selfconv:  w1 = g*g, g the standard bump on [-1,1].  The transform is the
//              square of a real even transform, hence >= 0, at the price of
//              the window reaching v = 0.
// A window supported away from 0 cannot have a nonnegative transform (a
// nonnegative integrable transform forces w1(0) = integral of it > 0), so the
// two properties are genuinely exclusive and both shapes are provided.
enum class W1Shape { annulus, selfconv };

// Cached direct- and transform-space tables for one correlation window.
// Transform convention: hat(xi) = integral w(v) e^{-2 pi i v xi} dv.  For the
// one-sided base bump hat_one = A - iB (cosine/sine transforms); the
// symmetrized annulus window has hat_sym = 2 A(|xi|), the self-convolution
// has hat_sym = A0(|xi|)^2 >= 0.  Transform sampled on 2^17 points of
// [0, 320] (annulus; [0,64] for selfconv), 4-point Lagrange interpolation,
// absolute error ~1e-9; zero is returned beyond the grid, where the envelope
// certifies |hat| < 1e-9 absolute.  envelope(xi) is the monotone suffix
// maximum of |hat|, extended past the grid by the fitted exp(-c sqrt(xi))
// bump-transform law (empirical fit, used only for tail certificates).
class W1Cache {
 public:
  explicit W1Cache(W1Shape shape);

  W1Shape shape() const { return shape_; }
  double hat_sym(double xi) const;
  std::complex<double> hat_one(double xi) const;  // annulus only
  double hat_zero() const { return hat0_; }       // hat_sym(0) = window mass
  double envelope(double xi) const;
  double direct(double v) const;    // w1(v)
  double bump_one(double v) const;  // annulus base bump on [1/2,2]
  double grid_max() const { return xi_max_; }

 private:
  double interp(const std::vector<double>& f, double xi) const;

  W1Shape shape_;
  double xi_max_ = 0.0;
  double step_ = 0.0;
  double hat0_ = 0.0;
  double decay_c_ = 1.0;  // fitted constant in exp(-c sqrt(xi))
  std::vector<double> a_;       // cosine transform samples
  std::vector<double> b_;       // sine transform samples (annulus)
  std::vector<double> suffix_;  // suffix max of |hat|
  std::vector<double> direct_;  // w1 samples on [0, 2]
};

// Lazily built singletons, one per shape.
const W1Cache& w1_cache(W1Shape shape);

// Standard block weight: the [1/2,2] bump raised to a positive power (every
// power is smooth and compactly supported; the family is the "different
// weight choices" knob in trend experiments).
struct BlockWeight {
  double power = 1.0;
  double operator()(double u) const;  // zero outside (1/2, 2)
  double integral() const;            // integral over (1/2,2) by quadrature
};

// Dyadic correlation block: center T, width delta, polynomial length
// N = sqrt(delta*T).  n2 stores the product delta*T exactly; n = sqrt(n2).
struct DyadicBlock {
  double delta = 1.0;
  double T = 1.0;
  double n2 = 1.0;
  double n = 1.0;
  W1Shape w1 = W1Shape::annulus;
};

// Validates 1 <= delta <= T and finiteness.  Throws std::invalid_argument.
DyadicBlock make_block(double delta, double T, W1Shape w1 = W1Shape::annulus);

// Windowed second moment of the twisted divisor polynomial
//   I = integral w1((T-t)/delta) |sum_n tau(n) e(nx) n^{-1/2-it} w2(n/N)|^2 dt
// computed two ways:
//   quadrature: direct t-quadrature of the square (panel count scales with
//     delta so every m/n interference frequency is resolved);
//   opened: exact opening of the square,
//     delta * sum_{m,n} c_m conj(c_n) hat_w1((delta/2pi) ln(n/m)),
//   an identity by Fourier inversion of the t-integral.
// diagonal is the m = n part of the opened route.  Requires
// table.size() >= 2*block.n; throws std::out_of_range otherwise.
struct IDeltaRoutes {
  double quadrature = 0.0;
  double opened = 0.0;
  double diagonal = 0.0;
  double rel_gap = 0.0;
};
IDeltaRoutes i_delta_routes(const DyadicBlock& block, double x,
                            const DivisorTable& table);

// The opened route alone (the production evaluator).
double i_delta(const DyadicBlock& block, double x, const DivisorTable& table);

// Mean-value envelope 2 sum_n (tau(n) w2(n/N))^2 n^{-1} (mass*delta + 2 pi n)
// with mass the w1 integral: the t-window has measure ~ mass*delta and the
// off-diagonal leakage per frequency is O(n).
double mv_envelope(const DyadicBlock& block, const DivisorTable& table);

// Diagonal second moment against its main term:
//   lhs  = sum_n tau(n)^2 w(n/N),
//   main = (|zeta(1+2iT)|^2 / zeta(2)) * wtilde1 * N log N,
// wtilde1 = integral of w.  in_regime reflects the asymptotic hypothesis
// log N >= (log T)^{2/3}; below T = 1/2 the zeta factor sits at its pole, so
// main is reported as 0 and rel_err as infinity (lhs stays valid).
struct DiagonalMain {
  double lhs = 0.0;
  double main = 0.0;
  double rel_err = 0.0;
  double wtilde1 = 0.0;
  bool in_regime = false;
};
DiagonalMain diagonal_main(double N, double T, const DivisorTable& table,
                           const BlockWeight& w = {});

// Weight supported on (Y, 2Y): the standard bump in (v-Y)/Y, raised to a
// positive power.
struct RangeWeight {
  double Y = 1.0;
  double power = 1.0;
  double operator()(double v) const;
};

// Shift-m correlation sum against its oscillatory main term:
//   brute = sum_n tau(n) tau(n+m) w(n),
//   main  = 2 Re[(|zeta(1+2iT)|^2/zeta(2)) sigma_{-1}(|m|)
//               * integral (v+m)^{-iT} v^{iT} w(v) dv],
//   err   = |brute - main|.
// Requires the whole shifted support inside the table; throws
// std::out_of_range otherwise, std::invalid_argument on m = 0.
struct ShiftedSum {
  double brute = 0.0;
  double main = 0.0;
  double err = 0.0;
};
ShiftedSum shifted_sum(std::int64_t m, double T, const RangeWeight& w,
                       const DivisorTable& table);

// Error-term envelope |m|^{7/64} T^{1/3} Y^{1/2} R^2 + T^{1/6} Y^{3/4} R^{1/2}
// with R = P + T|m|/Y.
double shifted_envelope(std::int64_t m, double T, double Y, double P);

// Off-diagonal main term
//   (|zeta(1+2iT)|^2/zeta(2)) (delta/N) sum_{h != 0} e(hx) sigma_{-1}(|h|)
//     * integral w2(y/N) (y/N)^{-1/2} w2((y+h)/N) ((y+h)/N)^{-1/2}
//                * hat_w1(-(delta/2pi) log((y+h)/y)) dy.
// The h-sum vanishes identically for |h| >= 3N/2 (empty weight overlap);
// h_max must cover everything the transform envelope cannot certify below
// 1e-12 of the |h| = 1 term, else std::invalid_argument.
double mt_od(const DyadicBlock& block, double x, std::int64_t h_max);

// Dyadic rational detector
//   Q(x, H) = H^{-1} sum_{h != 0} sigma_{-1}(|h|) e(hx) hat_w1(h/H)
// with the one-sided [1/2,2] bump (the only lemma-compatible positive-support
// choice here).  Two certified regimes: for H <= 2^13 the sum is taken
// directly to an envelope-certified cutoff (tail < 1e-10 absolute); for
// larger H it is evaluated through the exact Poisson form
//   sum_{a >= 1} [a^{-2} sum_nu w1(H(x - nu/a)) - hat_w1(0)/(aH)]
// truncated at an enumeration budget -- a depth-xi tail certificate must
// visit ~xi^2 H Farey points, so the certified tail grows to at most ~3e-8
// across H <= 2^30.  x is reduced mod 1 first, making period 1 bit-exact.
double q_sum(double x, double H);

// sum over H = 2^k <= H_max of |q_sum(x, H)|, k >= 0.  Optional rows receive
// (H, q_sum) pairs.  Requires 1 <= H_max <= 2^30.
double q_dyadic_scan(double x, double H_max,
                     std::vector<std::pair<double, double>>* rows = nullptr);

namespace detail {
// Test seam: evaluate one route regardless of the H-based switch.
double q_sum_route(double x, double H, bool poisson);

// Opened-route block correlation with the additive twist of index n taken
// from phase[n mod phase.size()] instead of e(2 pi i n x).  Entries must be
// unimodular; the all-ones table of length 1 reproduces i_delta at x = 0
// bit for bit.  Seam for the multiplicative (character) reconstruction of
// rational twists.
double i_delta_phased(const DyadicBlock& block,
                      const std::vector<std::complex<double>>& phase,
                      const DivisorTable& table);
}  // namespace detail

// Euler-product proxy E(T, x_cut) = (1/log x_cut) prod_{p <= x_cut}
// (1 + |tau(p)|/p) over primes.  Requires 100 <= x_cut <= 1e8.
double sieve_product(double T, double x_cut);

// Random verification of 18 t <= 8 + 11 t^2 - t^4 on [0,2]; the difference
// factors as (2-t)(t+4)(t-1)^2 >= 0, so the check must always pass.  Fixed
// internal seed; throws std::invalid_argument on samples < 1.
bool poly_ineq_check(std::int64_t samples);

}  // namespace eisenlab
