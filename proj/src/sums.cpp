#include "eisenlab/sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eisenlab/errors.hpp"
#include "eisenlab/parallel.hpp"
#include "eisenlab/quadrature.hpp"
#include "eisenlab/rng.hpp"
#include "eisenlab/special.hpp"

namespace eisenlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kZeta2 = kPi * kPi / 6.0;

// exp(-power/(1-t^2)) on (-1,1), zero outside.
double bump01(double t, double power) {
  const double s = 1.0 - t * t;
  if (!(s > 0.0)) return 0.0;
  return std::exp(-power / s);
}

// Standard bump on [1/2, 2].
double base_bump(double v) { return bump01((2.0 * v - 2.5) / 1.5, 1.0); }

// Standard even bump on [-1, 1].
double even_bump(double v) { return bump01(v, 1.0); }

// |zeta(1+2iT)|^2 / zeta(2); the shared main-term prefactor.
double zeta_prefactor(double T) {
  return std::norm(zeta(std::complex<double>(1.0, 2.0 * T))) / kZeta2;
}

struct TransformGrid {
  double xi_max = 0.0;
  int points = 0;     // samples at j*step, j = 0..points
  int panels = 0;     // quadrature panels over the window support
  double lo = 0.0;    // support of the transformed profile
  double hi = 0.0;
};

// Sample the cosine/sine transforms of `profile` on a uniform xi-grid by one
// fixed Gauss-Legendre rule shared across the grid; per-node phasors advance
// by rotation with periodic exact resets, so the whole table costs one
// complex multiply per (node, gridpoint).
void sample_transform(const TransformGrid& g, double (*profile)(double),
                      std::vector<double>* a, std::vector<double>* b) {
  const GaussLegendre& gl = gl_rule(12);
  const int nodes = g.panels * static_cast<int>(gl.x.size());
  std::vector<double> t(static_cast<std::size_t>(nodes));
  std::vector<double> coef(static_cast<std::size_t>(nodes));
  const double hpanel = (g.hi - g.lo) / g.panels;
  for (int p = 0; p < g.panels; ++p) {
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const std::size_t k = static_cast<std::size_t>(p) * gl.x.size() + i;
      t[k] = g.lo + hpanel * (p + 0.5 * (gl.x[i] + 1.0));
      coef[k] = 0.5 * hpanel * gl.w[i] * profile(t[k]);
    }
  }
  const double step = g.xi_max / g.points;
  std::vector<double> cre(t.size()), cim(t.size()), rre(t.size()), rim(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    rre[k] = std::cos(kTwoPi * t[k] * step);
    rim[k] = -std::sin(kTwoPi * t[k] * step);
  }
  a->assign(static_cast<std::size_t>(g.points) + 1, 0.0);
  b->assign(static_cast<std::size_t>(g.points) + 1, 0.0);
  for (int j = 0; j <= g.points; ++j) {
    if (j % 1024 == 0) {  // exact phasor reset: kills rotation drift
      const double xi = j * step;
      for (std::size_t k = 0; k < t.size(); ++k) {
        cre[k] = std::cos(kTwoPi * t[k] * xi);
        cim[k] = -std::sin(kTwoPi * t[k] * xi);
      }
    }
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      sa += coef[k] * cre[k];
      sb -= coef[k] * cim[k];
      const double re = cre[k] * rre[k] - cim[k] * rim[k];
      cim[k] = cre[k] * rim[k] + cim[k] * rre[k];
      cre[k] = re;
    }
    (*a)[static_cast<std::size_t>(j)] = sa;
    (*b)[static_cast<std::size_t>(j)] = sb;
  }
}

}  // namespace

W1Cache::W1Cache(W1Shape shape) : shape_(shape) {
  TransformGrid g;
  if (shape == W1Shape::annulus) {
    g = {320.0, 131072, 540, 0.5, 2.0};
    sample_transform(g, &base_bump, &a_, &b_);
  } else {
    // Even profile: transform is real (the sine half cancels), so integrate
    // the half-line and double the cosine part.
    g = {64.0, 32768, 120, 0.0, 1.0};
    sample_transform(g, &even_bump, &a_, &b_);
    for (auto& v : a_) v *= 2.0;
    b_.assign(a_.size(), 0.0);
  }
  xi_max_ = g.xi_max;
  step_ = g.xi_max / g.points;

  suffix_.resize(a_.size());
  double running = 0.0;
  for (std::size_t j = a_.size(); j-- > 0;) {
    const double mag = (shape == W1Shape::annulus)
                           ? 2.0 * std::hypot(a_[j], b_[j])
                           : a_[j] * a_[j];
    running = std::max(running, mag);
    suffix_[j] = running;
  }
  hat0_ = (shape == W1Shape::annulus) ? 2.0 * a_[0] : a_[0] * a_[0];

  // Fit the exp(-c sqrt(xi)) tail law on a clean mid-range decade.
  const double fa = (shape == W1Shape::annulus) ? 60.0 : 16.0;
  const double fb = (shape == W1Shape::annulus) ? 140.0 : 48.0;
  const std::size_t ja = static_cast<std::size_t>(fa / step_);
  const std::size_t jb = static_cast<std::size_t>(fb / step_);
  const double num = std::log(suffix_[ja]) - std::log(suffix_[jb]);
  decay_c_ = num / (std::sqrt(fb) - std::sqrt(fa));
  if (!(decay_c_ > 0.1)) decay_c_ = 0.1;

  // Direct-space table on [0, 2].
  const int m = 8192;
  direct_.resize(static_cast<std::size_t>(m) + 1);
  const GaussLegendre& gl = gl_rule(16);
  for (int j = 0; j <= m; ++j) {
    const double v = 2.0 * j / m;
    if (shape == W1Shape::annulus) {
      direct_[static_cast<std::size_t>(j)] = base_bump(v);
    } else {
      const double lo = std::max(-1.0, v - 1.0);
      direct_[static_cast<std::size_t>(j)] =
          (lo >= 1.0) ? 0.0
                      : integrate_panels(lo, 1.0, 8, gl, [v](double u) {
                          return even_bump(u) * even_bump(v - u);
                        });
    }
  }
}

double W1Cache::interp(const std::vector<double>& f, double xi) const {
  const double step = (&f == &direct_) ? 2.0 / 8192.0 : step_;
  const double p = xi / step;
  const auto last = static_cast<std::int64_t>(f.size()) - 1;
  if (p >= static_cast<double>(last)) return 0.0;
  std::int64_t j0 = static_cast<std::int64_t>(p) - 1;
  j0 = std::max<std::int64_t>(0, std::min(j0, last - 3));
  const double s = p - static_cast<double>(j0);
  const double l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  const std::size_t j = static_cast<std::size_t>(j0);
  return l0 * f[j] + l1 * f[j + 1] + l2 * f[j + 2] + l3 * f[j + 3];
}

double W1Cache::hat_sym(double xi) const {
  const double axi = std::abs(xi);
  if (axi >= xi_max_) return 0.0;
  const double av = interp(a_, axi);
  return (shape_ == W1Shape::annulus) ? 2.0 * av : av * av;
}

std::complex<double> W1Cache::hat_one(double xi) const {
  if (shape_ != W1Shape::annulus) {
    throw std::logic_error("one-sided transform is annulus-only");
  }
  const double axi = std::abs(xi);
  if (axi >= xi_max_) return {0.0, 0.0};
  const std::complex<double> v(interp(a_, axi), -interp(b_, axi));
  return xi < 0.0 ? std::conj(v) : v;
}

double W1Cache::envelope(double xi) const {
  if (!(xi > 0.0)) return suffix_[0];
  if (xi >= xi_max_) {
    return suffix_.back() *
           std::exp(-decay_c_ * (std::sqrt(xi) - std::sqrt(xi_max_)));
  }
  return suffix_[static_cast<std::size_t>(xi / step_)];
}

double W1Cache::direct(double v) const {
  const double av = std::abs(v);
  if (av >= 2.0) return 0.0;
  return interp(direct_, av);
}

double W1Cache::bump_one(double v) const {
  if (shape_ != W1Shape::annulus) {
    throw std::logic_error("one-sided bump is annulus-only");
  }
  if (!(v > 0.5 && v < 2.0)) return 0.0;
  return interp(direct_, v);
}

const W1Cache& w1_cache(W1Shape shape) {
  if (shape == W1Shape::annulus) {
    static const W1Cache cache(W1Shape::annulus);
    return cache;
  }
  static const W1Cache cache(W1Shape::selfconv);
  return cache;
}

double BlockWeight::operator()(double u) const {
  return bump01((2.0 * u - 2.5) / 1.5, power);
}

double BlockWeight::integral() const {
  return integrate_panels(0.5, 2.0, 16, gl_rule(16),
                          [this](double u) { return (*this)(u); });
}

double RangeWeight::operator()(double v) const {
  return bump01((2.0 * v - 3.0 * Y) / Y, power);
}

DyadicBlock make_block(double delta, double T, W1Shape w1) {
  if (!(std::isfinite(delta) && std::isfinite(T)) || delta < 1.0 || T < delta) {
    throw std::invalid_argument("block requires 1 <= delta <= T, finite");
  }
  const double cap = (w1 == W1Shape::annulus) ? 1024.0 : 256.0;
  if (delta > cap) {
    throw capacity_error("delta exceeds the correlation kernel table range");
  }
  DyadicBlock b;
  b.delta = delta;
  b.T = T;
  b.n2 = delta * T;
  b.n = std::sqrt(b.n2);
  b.w1 = w1;
  return b;
}

namespace {

// Shared Dirichlet-polynomial coefficients over the w2 support (N/2, 2N):
// amp = tau(n) w2(n/N) / sqrt(n), phase = 2 pi n x - T ln n.
struct BlockTerms {
  std::vector<std::int64_t> num;
  std::vector<double> amp;
  std::vector<double> logn;
  std::vector<double> cre;
  std::vector<double> cim;
};

BlockTerms block_terms(const DyadicBlock& block, double x,
                       const DivisorTable& table) {
  if (!std::isfinite(x)) throw std::invalid_argument("x must be finite");
  if (static_cast<double>(table.size()) < 2.0 * block.n) {
    throw std::out_of_range("divisor table shorter than 2N");
  }
  const BlockWeight w2{};
  const auto n0 = static_cast<std::int64_t>(block.n / 2.0) + 1;
  const auto n1 = static_cast<std::int64_t>(std::ceil(2.0 * block.n)) - 1;
  BlockTerms out;
  for (std::int64_t n = n0; n <= n1; ++n) {
    const double wn = w2(static_cast<double>(n) / block.n);
    if (wn == 0.0) continue;
    const double amp = table[n] * wn / std::sqrt(static_cast<double>(n));
    const double ln = std::log(static_cast<double>(n));
    const double phase = kTwoPi * static_cast<double>(n) * x - block.T * ln;
    out.num.push_back(n);
    out.amp.push_back(amp);
    out.logn.push_back(ln);
    out.cre.push_back(amp * std::cos(phase));
    out.cim.push_back(amp * std::sin(phase));
  }
  return out;
}

// Shared kernel pairing: diagonal mass and the hat-weighted cross terms.
struct OpenedParts {
  double diagonal;
  double opened;
};

OpenedParts opened_parts(const BlockTerms& terms, const DyadicBlock& block) {
  const W1Cache& wc = w1_cache(block.w1);
  const std::size_t count = terms.amp.size();
  const double scale = block.delta / kTwoPi;

  std::vector<double> sq(count);
  for (std::size_t i = 0; i < count; ++i) sq[i] = terms.amp[i] * terms.amp[i];
  const double diag = pairwise_sum(sq);

  const double off = parallel_sum(count, 16, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = i + 1; j < count; ++j) {
      const double kern = wc.hat_sym(scale * (terms.logn[j] - terms.logn[i]));
      acc += (terms.cre[i] * terms.cre[j] + terms.cim[i] * terms.cim[j]) * kern;
    }
    return acc;
  });

  OpenedParts out;
  out.diagonal = block.delta * wc.hat_zero() * diag;
  out.opened = out.diagonal + block.delta * 2.0 * off;
  return out;
}

double polynomial_square(const BlockTerms& terms, double t) {
  double sre = 0.0, sim = 0.0;
  for (std::size_t i = 0; i < terms.amp.size(); ++i) {
    // phase(t) = phase(T) + (T - t) ln n; cre/cim already carry phase(T).
    const double dt = t * terms.logn[i];
    const double c = std::cos(dt), s = std::sin(dt);
    sre += terms.cre[i] * c + terms.cim[i] * s;
    sim += terms.cim[i] * c - terms.cre[i] * s;
  }
  return sre * sre + sim * sim;
}

}  // namespace

IDeltaRoutes i_delta_routes(const DyadicBlock& block, double x,
                            const DivisorTable& table) {
  const W1Cache& wc = w1_cache(block.w1);
  const BlockTerms terms = block_terms(block, x, table);
  const OpenedParts parts = opened_parts(terms, block);

  IDeltaRoutes out;
  out.diagonal = parts.diagonal;
  out.opened = parts.opened;

  // Route A: t = T -+ delta*v, so |S|^2 is sampled at offsets delta*v where
  // the interference frequencies reach delta*ln 4 per unit v.
  const GaussLegendre& gl = gl_rule(12);
  if (block.w1 == W1Shape::annulus) {
    const int panels = std::max(16, static_cast<int>(std::ceil(0.4 * block.delta)));
    out.quadrature =
        block.delta *
        integrate_panels(0.5, 2.0, panels, gl, [&](double v) {
          return wc.direct(v) * (polynomial_square(terms, block.delta * v) +
                                 polynomial_square(terms, -block.delta * v));
        });
  } else {
    const int panels = std::max(64, static_cast<int>(std::ceil(1.0 * block.delta)));
    out.quadrature =
        block.delta *
        integrate_panels(-2.0, 2.0, panels, gl, [&](double v) {
          return wc.direct(v) * polynomial_square(terms, block.delta * v);
        });
  }
  out.rel_gap = std::abs(out.quadrature - out.opened) /
                std::max(std::abs(out.opened), 1e-300);
  return out;
}

double i_delta(const DyadicBlock& block, double x, const DivisorTable& table) {
  return opened_parts(block_terms(block, x, table), block).opened;
}

namespace detail {

double i_delta_phased(const DyadicBlock& block,
                      const std::vector<std::complex<double>>& phase,
                      const DivisorTable& table) {
  if (phase.empty()) {
    throw std::invalid_argument("phase table must be nonempty");
  }
  BlockTerms terms = block_terms(block, 0.0, table);
  const auto m = static_cast<std::int64_t>(phase.size());
  for (std::size_t i = 0; i < terms.amp.size(); ++i) {
    const std::complex<double>& p =
        phase[static_cast<std::size_t>(terms.num[i] % m)];
    const double re = terms.cre[i] * p.real() - terms.cim[i] * p.imag();
    const double im = terms.cre[i] * p.imag() + terms.cim[i] * p.real();
    terms.cre[i] = re;
    terms.cim[i] = im;
  }
  return opened_parts(terms, block).opened;
}

}  // namespace detail

double mv_envelope(const DyadicBlock& block, const DivisorTable& table) {
  const W1Cache& wc = w1_cache(block.w1);
  const BlockTerms terms = block_terms(block, 0.0, table);
  std::vector<double> parts(terms.amp.size());
  for (std::size_t i = 0; i < terms.amp.size(); ++i) {
    const double b2 = terms.amp[i] * terms.amp[i];
    const double n = std::exp(terms.logn[i]);
    parts[i] = b2 * (wc.hat_zero() * block.delta + kTwoPi * n);
  }
  return 2.0 * pairwise_sum(parts);
}

DiagonalMain diagonal_main(double N, double T, const DivisorTable& table,
                           const BlockWeight& w) {
  if (!(std::isfinite(N) && std::isfinite(T)) || N < 8.0 || T < 0.0) {
    throw std::invalid_argument("diagonal_main requires N >= 8, T >= 0");
  }
  if (static_cast<double>(table.size()) < 2.0 * N) {
    throw std::out_of_range("divisor table shorter than 2N");
  }
  DiagonalMain out;
  const auto n0 = static_cast<std::int64_t>(N / 2.0) + 1;
  const auto n1 = static_cast<std::int64_t>(std::ceil(2.0 * N)) - 1;
  std::vector<double> parts;
  parts.reserve(static_cast<std::size_t>(n1 - n0 + 1));
  for (std::int64_t n = n0; n <= n1; ++n) {
    const double tau = table[n];
    parts.push_back(tau * tau * w(static_cast<double>(n) / N));
  }
  out.lhs = pairwise_sum(parts);
  out.wtilde1 = w.integral();
  if (T < 0.5) {
    out.main = 0.0;
    out.rel_err = std::numeric_limits<double>::infinity();
    out.in_regime = false;
    return out;
  }
  out.main = zeta_prefactor(T) * out.wtilde1 * N * std::log(N);
  out.rel_err = std::abs(out.lhs / out.main - 1.0);
  const double hyp = (T > 1.0) ? std::pow(std::log(T), 2.0 / 3.0) : 0.0;
  out.in_regime = std::log(N) >= hyp;
  return out;
}

ShiftedSum shifted_sum(std::int64_t m, double T, const RangeWeight& w,
                       const DivisorTable& table) {
  if (m == 0) throw std::invalid_argument("shift m must be nonzero");
  if (!(std::isfinite(T)) || T < 0.5) {
    throw std::invalid_argument("shifted_sum requires T >= 1/2");
  }
  const double Y = w.Y;
  if (!(Y >= 2.0)) throw std::invalid_argument("weight support needs Y >= 2");
  const auto n0 = static_cast<std::int64_t>(Y) + 1;
  const auto n1 = static_cast<std::int64_t>(std::ceil(2.0 * Y)) - 1;
  if (n0 + m < 1 || n1 + m > table.size() || n1 > table.size()) {
    throw std::out_of_range("shifted support leaves the divisor table");
  }
  ShiftedSum out;
  std::vector<double> parts;
  parts.reserve(static_cast<std::size_t>(n1 - n0 + 1));
  for (std::int64_t n = n0; n <= n1; ++n) {
    parts.push_back(table[n] * table[n + m] * w(static_cast<double>(n)));
  }
  out.brute = pairwise_sum(parts);

  // Oscillatory factor e^{iT(ln v - ln(v+m))}: total phase travel <= T|m|/Y.
  const double md = static_cast<double>(m);
  const int panels = std::max(
      24, static_cast<int>(std::ceil(T * std::abs(md) / (4.0 * Y))));
  const GaussLegendre& gl = gl_rule(16);
  // Only the real part survives: the +-iT pair of main terms conjugate.
  const double ire = integrate_panels(Y, 2.0 * Y, panels, gl, [&](double v) {
    return w(v) * std::cos(T * (std::log(v) - std::log(v + md)));
  });
  out.main = 2.0 * zeta_prefactor(T) * sigma_minus1(m) * ire;
  out.err = std::abs(out.brute - out.main);
  return out;
}

double shifted_envelope(std::int64_t m, double T, double Y, double P) {
  const double am = std::abs(static_cast<double>(m));
  const double R = P + T * am / Y;
  return std::pow(am, 7.0 / 64.0) * std::cbrt(T) * std::sqrt(Y) * R * R +
         std::pow(T, 1.0 / 6.0) * std::pow(Y, 0.75) * std::sqrt(R);
}

double mt_od(const DyadicBlock& block, double x, std::int64_t h_max) {
  if (h_max < 1) throw std::invalid_argument("h_max must be >= 1");
  if (!std::isfinite(x)) throw std::invalid_argument("x must be finite");
  const W1Cache& wc = w1_cache(block.w1);
  const double N = block.n;
  const double D = block.delta;
  const BlockWeight w2{};
  const GaussLegendre& gl = gl_rule(12);

  // y-integral in u = y/N over the overlap of the two weight supports; the
  // kernel argument (D/2pi) ln(1 + h/(uN)) moves by ~0.35 D h/N across it.
  const auto kernel_integral = [&](std::int64_t h) -> double {
    const double r = static_cast<double>(h) / N;
    const double hi = 2.0 - r;
    if (hi <= 0.5) return 0.0;
    const int panels =
        std::max(16, static_cast<int>(std::ceil(0.35 * D * std::min(r, 1.5))));
    return N * integrate_panels(0.5, hi, panels, gl, [&](double u) {
             const double up = u + r;
             return w2(u) * w2(up) / std::sqrt(u * up) *
                    wc.hat_sym(D / kTwoPi * std::log(up / u));
           });
  };

  const auto h_stop =
      static_cast<std::int64_t>(std::ceil(1.5 * N));  // empty overlap beyond
  const double j1 = std::abs(kernel_integral(1));
  if (h_max < h_stop) {
    // Certify the dropped range against 1e-12 of the h = 1 term.
    double tail = 0.0;
    for (std::int64_t h = h_max + 1; h <= h_stop; ++h) {
      const double r = static_cast<double>(h) / N;
      const double xi = D / kTwoPi * std::log1p(r / 2.0);
      const double width = std::max(0.0, 1.5 - r) * N;
      tail += (1.0 + std::log(static_cast<double>(h))) * wc.envelope(xi) *
              width * 0.3;
    }
    if (tail >= 1e-12 * j1) {
      throw std::invalid_argument("h_max too small for the kernel tail");
    }
  }

  const auto h_used = std::min(h_max, h_stop);
  const double sum =
      parallel_sum(static_cast<std::size_t>(h_used), 8, [&](std::size_t i) {
        const auto h = static_cast<std::int64_t>(i) + 1;
        return sigma_minus1(h) * 2.0 *
               std::cos(kTwoPi * static_cast<double>(h) * x) *
               kernel_integral(h);
      });
  return zeta_prefactor(block.T) * (D / N) * sum;
}

namespace {

constexpr double kQDirectH = 8192.0;
constexpr double kQTailTol = 1e-10;
constexpr double kQBudget = 2e7;  // Poisson-side Farey-point budget

std::vector<double>& sigma_table() {
  static std::vector<double> table{0.0};
  return table;
}

void ensure_sigma(std::int64_t n) {
  auto& table = sigma_table();
  if (static_cast<std::int64_t>(table.size()) > n) return;
  table.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t d = 1; d <= n; ++d) {
    const double inv = 1.0 / static_cast<double>(d);
    for (std::int64_t k = d; k <= n; k += d) {
      table[static_cast<std::size_t>(k)] += inv;
    }
  }
}

// Certified bound on (1/H) sum_{h > xi H} sigma_{-1}(h) |hat(h/H)| via
// sum_{h <= X} sigma_{-1}(h) <= zeta(2) X on sqrt(2)-dyadic blocks.
double q_tail_direct(double xi, const W1Cache& wc) {
  double tail = 0.0;
  double lo = xi;
  for (int j = 0; j < 200; ++j) {
    const double env = wc.envelope(lo);
    tail += kZeta2 * lo * (std::sqrt(2.0) - 1.0) * env;
    if (env < 1e-22) break;
    lo *= std::sqrt(2.0);
  }
  return tail;
}

// Certified bound on the dropped Poisson terms sum_{a > xi H} |D_a|: each
// |D_a| <= (2.4/(aH)) envelope(a/H) (Euler-Maclaurin with the geometric
// harmonics folded into the 1.2 factor), summed over dyadic a-blocks.
double q_tail_poisson(double xi, double H, const W1Cache& wc) {
  double tail = 0.0;
  double lo = xi;
  for (int j = 0; j < 200; ++j) {
    const double env = wc.envelope(lo);
    tail += 2.4 * 0.7 * env / H;
    if (env < 1e-22) break;
    lo *= 2.0;
  }
  return tail;
}

double q_direct(double x, double H) {
  const W1Cache& wc = w1_cache(W1Shape::annulus);
  double xi = 8.0;
  while (xi < 4096.0 && q_tail_direct(xi, wc) > kQTailTol) xi *= 1.2;
  const auto h_cut = static_cast<std::int64_t>(std::ceil(xi * H));
  ensure_sigma(h_cut);
  const auto& sig = sigma_table();
  const double sum =
      parallel_sum(static_cast<std::size_t>(h_cut), 65536, [&](std::size_t i) {
        const double h = static_cast<double>(i + 1);
        const std::complex<double> hat = wc.hat_one(h / H);
        if (hat == std::complex<double>(0.0, 0.0)) return 0.0;
        const double ph = kTwoPi * h * x;
        return sig[i + 1] * (std::cos(ph) * hat.real() - std::sin(ph) * hat.imag());
      });
  return 2.0 * sum / H;
}

double q_poisson(double x, double H) {
  const W1Cache& wc = w1_cache(W1Shape::annulus);
  const double mass = wc.hat_one(0.0).real();
  double xi_s = std::sqrt(kQBudget / (0.75 * H));
  for (double xi = 2.0; xi < xi_s; xi *= 2.0) {
    if (q_tail_poisson(xi, H, wc) <= kQTailTol) {
      xi_s = xi;
      break;
    }
  }
  const auto a_max = static_cast<std::int64_t>(xi_s * H);
  return parallel_sum(static_cast<std::size_t>(a_max), 32768, [&](std::size_t i) {
    const double a = static_cast<double>(i + 1);
    const double ax = a * x;
    // (ax - nu) H / a lands in the bump support [1/2, 2].
    const double lo = std::ceil(ax - 2.0 * a / H);
    const double hi = std::floor(ax - 0.5 * a / H);
    double hits = 0.0;
    for (double nu = lo; nu <= hi; nu += 1.0) {
      hits += wc.bump_one((ax - nu) * H / a);
    }
    return hits / (a * a) - mass / (a * H);
  });
}

}  // namespace

namespace detail {
double q_sum_route(double x, double H, bool poisson) {
  const double xr = x - std::floor(x);
  return poisson ? q_poisson(xr, H) : q_direct(xr, H);
}
}  // namespace detail

double q_sum(double x, double H) {
  if (!(std::isfinite(x) && std::isfinite(H)) || H < 1.0) {
    throw std::invalid_argument("q_sum requires finite x and H >= 1");
  }
  const double xr = x - std::floor(x);
  return (H <= kQDirectH) ? q_direct(xr, H) : q_poisson(xr, H);
}

double q_dyadic_scan(double x, double H_max,
                     std::vector<std::pair<double, double>>* rows) {
  if (!(H_max >= 1.0 && H_max <= 1073741824.0)) {
    throw std::invalid_argument("H_max must lie in [1, 2^30]");
  }
  double total = 0.0;
  for (double H = 1.0; H <= H_max; H *= 2.0) {
    const double q = q_sum(x, H);
    if (rows != nullptr) rows->emplace_back(H, q);
    total += std::abs(q);
  }
  return total;
}

double sieve_product(double T, double x_cut) {
  if (!(std::isfinite(T) && std::isfinite(x_cut)) || x_cut < 100.0) {
    throw std::invalid_argument("sieve_product requires x_cut >= 100");
  }
  if (x_cut > 1e8) throw capacity_error("prime sieve capped at 1e8");
  const auto n = static_cast<std::int64_t>(x_cut);
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  double logsum = 0.0;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    for (std::int64_t k = p * p; k <= n; k += p) {
      composite[static_cast<std::size_t>(k)] = true;
    }
    const double tau = 2.0 * std::cos(T * std::log(static_cast<double>(p)));
    logsum += std::log1p(std::abs(tau) / static_cast<double>(p));
  }
  return std::exp(logsum) / std::log(x_cut);
}

bool poly_ineq_check(std::int64_t samples) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  Rng rng(0xB10C5EEDULL);
  for (std::int64_t i = 0; i < samples; ++i) {
    const double t = rng.uniform(0.0, 2.0);
    const double rhs = 8.0 + 11.0 * t * t - t * t * t * t;
    if (18.0 * t > rhs + 1e-12) return false;
  }
  return true;
}

}  // namespace eisenlab
