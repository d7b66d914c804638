#include "eisenlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace eisenlab {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

GaussLegendre::GaussLegendre(int n) {
  if (n < 1 || n > 256) throw std::invalid_argument("GaussLegendre: order out of range");
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    x[0] = 0.0;
    w[0] = 2.0;
    return;
  }
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 0.0;
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      legendre(n, xi, p, dp);
      const double dx = p / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-14) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::runtime_error("GaussLegendre: Newton failed");
    legendre(n, xi, p, dp);
    x[static_cast<std::size_t>(n - 1 - i)] = xi;
    w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

const GaussLegendre& gl_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
  return it->second;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace eisenlab
