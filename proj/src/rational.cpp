#include "eisenlab/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eisenlab/errors.hpp"

namespace eisenlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  std::int64_t r = 1 % mod;
  std::int64_t b = base % mod;
  while (exp > 0) {
    if (exp & 1) r = r * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return r;
}

// One cyclic factor of (Z/q)*: dlog[r] is the exponent of the generator at
// the residue r of the factor's prime-power modulus, -1 off the units.
struct CyclicFactor {
  std::int64_t modulus;
  std::int64_t order;
  std::vector<std::int64_t> dlog;
};

std::int64_t primitive_root(std::int64_t p) {
  std::vector<std::int64_t> prime_parts;
  std::int64_t m = p - 1;
  for (std::int64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      prime_parts.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) prime_parts.push_back(m);
  for (std::int64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (std::int64_t ell : prime_parts) {
      if (powmod(g, (p - 1) / ell, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found for prime modulus");
}

void append_odd_factor(std::int64_t p, int e,
                       std::vector<CyclicFactor>& factors) {
  std::int64_t pe = 1;
  for (int k = 0; k < e; ++k) pe *= p;
  std::int64_t g = primitive_root(p);
  // g stays primitive mod p^e unless g^(p-1) = 1 mod p^2; then g + p works.
  if (e > 1 && powmod(g, p - 1, p * p) == 1) g += p;
  CyclicFactor f;
  f.modulus = pe;
  f.order = pe / p * (p - 1);
  f.dlog.assign(static_cast<std::size_t>(pe), -1);
  std::int64_t r = 1;
  for (std::int64_t k = 0; k < f.order; ++k) {
    f.dlog[static_cast<std::size_t>(r)] = k;
    r = r * g % pe;
  }
  factors.push_back(std::move(f));
}

void append_two_factors(int e, std::vector<CyclicFactor>& factors) {
  if (e < 2) return;  // (Z/2)* is trivial
  const std::int64_t pe = std::int64_t{1} << e;
  if (e == 2) {
    CyclicFactor f2{4, 2, {-1, 0, -1, 1}};
    factors.push_back(std::move(f2));
    return;
  }
  // (Z/2^e)* = {+-1} x <5>: sign factor of order 2, then the 5-power part.
  CyclicFactor sign{pe, 2, std::vector<std::int64_t>(
                              static_cast<std::size_t>(pe), -1)};
  CyclicFactor five{pe, pe / 4, std::vector<std::int64_t>(
                                    static_cast<std::size_t>(pe), -1)};
  std::int64_t r = 1;
  for (std::int64_t k = 0; k < five.order; ++k) {
    sign.dlog[static_cast<std::size_t>(r)] = 0;
    five.dlog[static_cast<std::size_t>(r)] = k;
    sign.dlog[static_cast<std::size_t>(pe - r)] = 1;
    five.dlog[static_cast<std::size_t>(pe - r)] = k;
    r = r * 5 % pe;
  }
  factors.push_back(std::move(sign));
  factors.push_back(std::move(five));
}

std::vector<CyclicFactor> cyclic_factors(std::int64_t q) {
  std::vector<CyclicFactor> factors;
  std::int64_t m = q;
  int two = 0;
  while (m % 2 == 0) {
    ++two;
    m /= 2;
  }
  append_two_factors(two, factors);
  for (std::int64_t p = 3; p * p <= m; p += 2) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      ++e;
      m /= p;
    }
    append_odd_factor(p, e, factors);
  }
  if (m > 1) append_odd_factor(m, 1, factors);
  return factors;
}

std::complex<double> unit_phase(double turns) {
  const double a = kTwoPi * turns;
  return {std::cos(a), std::sin(a)};
}

}  // namespace

CharacterTable characters(std::int64_t q) {
  if (q < 1) throw std::invalid_argument("modulus must be positive");
  if (q > 1000) {
    throw capacity_error("dense character table capped at modulus 1000");
  }
  CharacterTable out;
  out.q = q;
  if (q == 1) {
    out.chars = {{std::complex<double>(1.0, 0.0)}};
    out.labels = {{}};
    return out;
  }

  const std::vector<CyclicFactor> factors = cyclic_factors(q);
  std::int64_t phi = 1;
  for (const CyclicFactor& f : factors) phi *= f.order;

  // Exponent tuple of every unit residue on the cyclic factors.  The unit
  // mask is separate: a trivial group (q = 2) has units with empty tuples.
  std::vector<char> is_unit(static_cast<std::size_t>(q), 0);
  std::vector<std::vector<std::int64_t>> expo(
      static_cast<std::size_t>(q));
  for (std::int64_t n = 0; n < q; ++n) {
    if (std::gcd(n, q) != 1) continue;
    is_unit[static_cast<std::size_t>(n)] = 1;
    auto& e = expo[static_cast<std::size_t>(n)];
    e.reserve(factors.size());
    for (const CyclicFactor& f : factors) {
      e.push_back(f.dlog[static_cast<std::size_t>(n % f.modulus)]);
    }
  }

  out.chars.reserve(static_cast<std::size_t>(phi));
  out.labels.reserve(static_cast<std::size_t>(phi));
  std::vector<int> label(factors.size(), 0);
  for (std::int64_t idx = 0; idx < phi; ++idx) {
    std::vector<std::complex<double>> row(static_cast<std::size_t>(q));
    for (std::int64_t n = 0; n < q; ++n) {
      if (!is_unit[static_cast<std::size_t>(n)]) continue;
      const auto& e = expo[static_cast<std::size_t>(n)];
      double turns = 0.0;
      for (std::size_t fj = 0; fj < factors.size(); ++fj) {
        const std::int64_t m = factors[fj].order;
        turns += static_cast<double>(label[fj] * e[fj] % m) /
                 static_cast<double>(m);
      }
      row[static_cast<std::size_t>(n)] = unit_phase(turns);
    }
    out.chars.push_back(std::move(row));
    out.labels.push_back(label);
    for (std::size_t fj = 0; fj < factors.size(); ++fj) {
      if (++label[fj] < factors[fj].order) break;
      label[fj] = 0;
    }
  }
  return out;
}

std::complex<double> gauss_sum(const std::vector<std::complex<double>>& chi,
                               std::int64_t q) {
  if (q < 1 || chi.size() != static_cast<std::size_t>(q)) {
    throw std::invalid_argument("character vector must have length q");
  }
  std::complex<double> acc = 0.0;
  for (std::int64_t n = 0; n < q; ++n) {
    acc += chi[static_cast<std::size_t>(n)] *
           unit_phase(static_cast<double>(n) / static_cast<double>(q));
  }
  return acc;
}

double change_of_basis_check(const std::vector<std::complex<double>>& c,
                             std::int64_t a, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("modulus must be positive");
  const std::int64_t am = ((a % q) + q) % q;
  if (std::gcd(am, q) != 1) {
    throw std::invalid_argument("a must be a unit mod q");
  }
  const auto len = static_cast<std::int64_t>(c.size());

  std::complex<double> lhs = 0.0;
  for (std::int64_t k = 0; k < len; ++k) {
    const std::int64_t n = k + 1;
    lhs += c[static_cast<std::size_t>(k)] *
           unit_phase(static_cast<double>(am * (n % q) % q) /
                      static_cast<double>(q));
  }

  std::complex<double> rhs = 0.0;
  for (std::int64_t d = 1; d <= q; ++d) {
    if (q % d) continue;
    const std::int64_t qp = q / d;
    const CharacterTable tab = characters(qp);
    const auto phi = static_cast<double>(tab.chars.size());
    std::complex<double> dsum = 0.0;
    for (const auto& chi : tab.chars) {
      std::complex<double> tau_bar = 0.0;
      for (std::int64_t n = 0; n < qp; ++n) {
        tau_bar += std::conj(chi[static_cast<std::size_t>(n)]) *
                   unit_phase(static_cast<double>(n) / static_cast<double>(qp));
      }
      std::complex<double> inner = 0.0;
      for (std::int64_t np = 1; d * np <= len; ++np) {
        inner += c[static_cast<std::size_t>(d * np - 1)] *
                 chi[static_cast<std::size_t>(np % qp)];
      }
      dsum += tau_bar * chi[static_cast<std::size_t>(am % qp)] * inner;
    }
    rhs += dsum / phi;
  }
  return std::abs(lhs - rhs);
}

double i_delta_rational(const DyadicBlock& block, std::int64_t a,
                        std::int64_t q, const DivisorTable& table) {
  if (q < 1) throw std::invalid_argument("modulus must be positive");
  if (q > 100) {
    throw capacity_error("rational twist modulus capped at 100");
  }
  const std::int64_t am = ((a % q) + q) % q;
  if (std::gcd(am, q) != 1) {
    throw std::invalid_argument("a must be a unit mod q");
  }

  // Reconstruct e(a r / q) for every residue class r through the divisor /
  // character expansion: with d = gcd(r, q) and q' = q/d,
  //   e(a r / q) = (1/phi(q')) sum_{chi mod q'} tau(conj chi) chi(a) chi(r/d).
  std::vector<std::complex<double>> phase(static_cast<std::size_t>(q));
  for (std::int64_t d = 1; d <= q; ++d) {
    if (q % d) continue;
    const std::int64_t qp = q / d;
    const CharacterTable tab = characters(qp);
    const auto phi = static_cast<double>(tab.chars.size());
    std::vector<std::complex<double>> tau_chi_a(tab.chars.size());
    for (std::size_t j = 0; j < tab.chars.size(); ++j) {
      std::complex<double> tau_bar = 0.0;
      for (std::int64_t n = 0; n < qp; ++n) {
        tau_bar += std::conj(tab.chars[j][static_cast<std::size_t>(n)]) *
                   unit_phase(static_cast<double>(n) / static_cast<double>(qp));
      }
      tau_chi_a[j] = tau_bar * tab.chars[j][static_cast<std::size_t>(am % qp)];
    }
    for (std::int64_t r = 0; r < q; ++r) {
      const std::int64_t dr = (r == 0) ? q : std::gcd(r, q);
      if (dr != d) continue;
      std::complex<double> acc = 0.0;
      for (std::size_t j = 0; j < tab.chars.size(); ++j) {
        acc += tau_chi_a[j] *
               tab.chars[j][static_cast<std::size_t>((r / d) % qp)];
      }
      phase[static_cast<std::size_t>(r)] = acc / phi;
    }
  }
  return detail::i_delta_phased(block, phase, table);
}

}  // namespace eisenlab
