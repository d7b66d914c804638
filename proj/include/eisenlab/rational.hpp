#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "eisenlab/arith.hpp"
#include "eisenlab/sums.hpp"

namespace eisenlab {

// Dense table of all phi(q) Dirichlet characters mod q, built from the CRT
// decomposition of (Z/q)* into cyclic factors with explicit generators and
// discrete logs (odd prime powers take a lifted primitive root; 2^e splits
// as {+-1} x <5>).  chars[i][n] is chi_i(n), zero where gcd(n, q) > 1;
// labels[i] holds the exponent of chi_i on each cyclic factor.
struct CharacterTable {
  std::int64_t q = 1;
  std::vector<std::vector<std::complex<double>>> chars;
  std::vector<std::vector<int>> labels;
};

// Requires 1 <= q <= 1000: the dense table costs phi(q) * q values, so the
// modulus is capped far below any guard a sparse representation could take.
CharacterTable characters(std::int64_t q);

// tau(chi) = sum_{n mod q} chi(n) e(n/q), the exact finite sum; chi must
// have length q.
std::complex<double> gauss_sum(const std::vector<std::complex<double>>& chi,
                               std::int64_t q);

// Two-sided evaluation of the additive-to-multiplicative conversion
//   sum_n c_n e(an/q)
//     = sum_{d | q} (1/phi(q/d)) sum_{chi mod q/d} tau(conj chi) chi(a)
//                   sum_n c_{dn} chi(n),
// an exact finite identity for gcd(a, q) = 1.  Entry k of c stands for the
// coefficient of n = k + 1.  Returns |LHS - RHS|, which stays within
// ~1e-12 per unit of l1 mass.
double change_of_basis_check(const std::vector<std::complex<double>>& c,
                             std::int64_t a, std::int64_t q);

// Opened-route block correlation at x = a/q with every additive twist
// e(an/q) rebuilt through the conversion above (one multiplicative
// reconstruction per residue class), so agreement with i_delta(block, a/q,
// table) certifies the identity at every index the block touches.  The
// match is exact up to rounding.  Note the a <-> q - a pair is NOT a
// symmetry of the one-sided block (the cross phases are odd in x for fixed
// spectral sign; measured gaps reach ~13%); only the period-1 shift
// a -> a + q leaves the value unchanged.  Requires gcd(a, q) = 1 and
// q <= 100.
double i_delta_rational(const DyadicBlock& block, std::int64_t a,
                        std::int64_t q, const DivisorTable& table);

}  // namespace eisenlab
