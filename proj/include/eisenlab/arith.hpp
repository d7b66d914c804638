#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace eisenlab {

// tau_{iT}(n) = sum_{ab=n} (a/b)^{iT}.  Real for all n, T (the a/b and b/a
// terms conjugate), bounded by the divisor count d(n).
double tau_it(std::int64_t n, double T);

// Immutable sieved table of tau_{iT}(n) for 1 <= n <= size().
class DivisorTable {
 public:
  DivisorTable(double T, std::vector<double> values);

  double spectral_t() const { return T_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()) - 1; }
  double operator[](std::int64_t n) const { return values_[static_cast<std::size_t>(n)]; }
  const std::vector<double>& raw() const { return values_; }

  // Binary round-trip: magic, version, T (8-byte float), N (8-byte int),
  // then N 8-byte floats, all little-endian.
  void dump(const std::string& path) const;
  static DivisorTable load(const std::string& path);

 private:
  double T_;
  std::vector<double> values_;  // index n; slot 0 unused
};

// Sieve all tau_{iT}(n), n <= N, in O(N log N): one complex rotation per
// divisor class, accumulated into fixed-size owner segments so the result is
// bit-identical for every worker count.  Throws capacity_error for N beyond
// the memory cap (1e8 entries).
DivisorTable build_table(std::int64_t N, double T);

// sigma_{-1}(h) = sum over d | |h| of 1/d.  Throws on h = 0.
double sigma_minus1(std::int64_t h);

// Z(s, T) = sum_n tau_{iT}(n)^2 / n^s and its closed form
// zeta(s-2iT) zeta(s+2iT) zeta(s)^2 / zeta(2s).
std::complex<double> z_formula(std::complex<double> s, double T);

// Partial sum over n <= N.  Requires Re s > 1 (divergent otherwise).
std::complex<double> z_series(std::complex<double> s, double T, std::int64_t N);

}  // namespace eisenlab
