#include "eisenlab/arith.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "eisenlab/errors.hpp"
#include "eisenlab/parallel.hpp"
#include "eisenlab/special.hpp"

namespace eisenlab {

namespace {

constexpr std::int64_t kMaxTableSize = 100'000'000;
constexpr std::int64_t kSegmentLen = 1 << 16;  // fixed: results never depend on workers
constexpr char kTableMagic[8] = {'E', 'L', 'D', 'T', 'A', 'B', '0', '1'};

}  // namespace

double tau_it(std::int64_t n, double T) {
  if (n < 1) throw std::invalid_argument("tau_it: n must be positive");
  double sum = 0.0;
  for (std::int64_t a = 1; a * a <= n; ++a) {
    if (n % a != 0) continue;
    const std::int64_t b = n / a;
    if (a == b)
      sum += 1.0;
    else
      sum += 2.0 * std::cos(T * (std::log(static_cast<double>(a)) -
                                 std::log(static_cast<double>(b))));
  }
  return sum;
}

DivisorTable::DivisorTable(double T, std::vector<double> values)
    : T_(T), values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("DivisorTable: empty");
  values_[0] = 0.0;
}

DivisorTable build_table(std::int64_t N, double T) {
  if (N < 1) throw std::invalid_argument("build_table: N must be positive");
  if (N > kMaxTableSize) throw capacity_error("build_table: N exceeds 1e8-entry cap");

  // S(n) = sum_{a | n} e^{2iT log a}; then tau_{iT}(n) = Re(e^{-iT log n} S(n)).
  std::vector<std::complex<double>> s(static_cast<std::size_t>(N) + 1, 0.0);
  const int segments = static_cast<int>((N + kSegmentLen - 1) / kSegmentLen);
  parallel_chunks(segments, [&](int seg) {
    const std::int64_t lo = 1 + static_cast<std::int64_t>(seg) * kSegmentLen;
    const std::int64_t hi = std::min<std::int64_t>(N, lo + kSegmentLen - 1);
    for (std::int64_t a = 1; a <= hi; ++a) {
      const std::complex<double> w =
          std::polar(1.0, 2.0 * T * std::log(static_cast<double>(a)));
      for (std::int64_t n = ((lo + a - 1) / a) * a; n <= hi; n += a)
        s[static_cast<std::size_t>(n)] += w;
    }
  });

  std::vector<double> values(static_cast<std::size_t>(N) + 1, 0.0);
  parallel_chunks(segments, [&](int seg) {
    const std::int64_t lo = 1 + static_cast<std::int64_t>(seg) * kSegmentLen;
    const std::int64_t hi = std::min<std::int64_t>(N, lo + kSegmentLen - 1);
    for (std::int64_t n = lo; n <= hi; ++n) {
      const double a = T * std::log(static_cast<double>(n));
      const std::complex<double>& v = s[static_cast<std::size_t>(n)];
      values[static_cast<std::size_t>(n)] = std::cos(a) * v.real() + std::sin(a) * v.imag();
    }
  });
  return DivisorTable(T, std::move(values));
}

void DivisorTable::dump(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("DivisorTable::dump: cannot open " + path);
  out.write(kTableMagic, sizeof(kTableMagic));
  const std::int64_t n = size();
  out.write(reinterpret_cast<const char*>(&T_), sizeof(T_));
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(values_.data() + 1),
            static_cast<std::streamsize>(n * sizeof(double)));
  if (!out) throw std::runtime_error("DivisorTable::dump: write failed for " + path);
}

DivisorTable DivisorTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("DivisorTable::load: cannot open " + path);
  char magic[8];
  double t = 0.0;
  std::int64_t n = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&t), sizeof(t));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || std::memcmp(magic, kTableMagic, sizeof(magic)) != 0)
    throw std::runtime_error("DivisorTable::load: bad header in " + path);
  if (n < 1 || n > kMaxTableSize)
    throw std::runtime_error("DivisorTable::load: implausible size in " + path);
  std::vector<double> values(static_cast<std::size_t>(n) + 1, 0.0);
  in.read(reinterpret_cast<char*>(values.data() + 1),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("DivisorTable::load: truncated data in " + path);
  return DivisorTable(t, std::move(values));
}

double sigma_minus1(std::int64_t h) {
  if (h == 0) throw std::invalid_argument("sigma_minus1: h must be nonzero");
  const std::int64_t m = std::abs(h);
  double sum = 0.0;
  for (std::int64_t d = 1; d * d <= m; ++d) {
    if (m % d != 0) continue;
    sum += 1.0 / static_cast<double>(d);
    if (d != m / d) sum += static_cast<double>(d) / static_cast<double>(m);
  }
  return sum;
}

std::complex<double> z_formula(std::complex<double> s, double T) {
  const std::complex<double> shift(0.0, 2.0 * T);
  const std::complex<double> zs = zeta(s);
  return zeta(s - shift) * zeta(s + shift) * zs * zs / zeta(2.0 * s);
}

std::complex<double> z_series(std::complex<double> s, double T, std::int64_t N) {
  if (!(s.real() > 1.0))
    throw std::invalid_argument("z_series: requires Re s > 1");
  const DivisorTable table = build_table(N, T);
  std::complex<double> sum = 0.0;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double tau = table[n];
    sum += tau * tau * std::exp(-s * std::log(static_cast<double>(n)));
  }
  return sum;
}

}  // namespace eisenlab
