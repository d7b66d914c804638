#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace eisenlab {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration
// on P_n.  Deterministic (no libm-ordering pitfalls: pure polynomial loop).
struct GaussLegendre {
  explicit GaussLegendre(int n);
  std::vector<double> x;
  std::vector<double> w;
};

// Shared small rules so hot loops do not rebuild node tables.
const GaussLegendre& gl_rule(int n);  // n in {4,...,64}; cached, thread-safe

// Fixed-tree pairwise sum over a vector.  The tree shape depends only on the
// length, never on thread count, so reductions are bit-stable.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

// Integrate f over [a,b] split into `panels` equal panels with the given rule.
template <class F>
double integrate_panels(double a, double b, int panels, const GaussLegendre& gl, F&& f) {
  std::vector<double> partial(static_cast<std::size_t>(panels));
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    double s = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      s += gl.w[i] * f(lo + 0.5 * h * (gl.x[i] + 1.0));
    }
    partial[static_cast<std::size_t>(p)] = s * 0.5 * h;
  }
  return pairwise_sum(partial);
}

}  // namespace eisenlab
