#pragma once
// Exact arithmetic helpers on top of GMP's mpq_class/mpz_class.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plgroup/error.hpp"

namespace plgroup {

using Rational = mpq_class;
using Integer = mpz_class;
using IntVec = std::vector<Integer>;

inline Rational make_rational(const Integer& n, const Integer& d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline Rational parse_rational(const std::string& s) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0)
    throw Error("ParseError", "not a rational: '" + s + "'");
  if (q.get_den() == 0) throw Error("ParseError", "zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Rational rpow(const Rational& q, long e) {
  Rational base = e < 0 ? Rational(1) / q : q;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), k);
  return make_rational(n, d);
}

inline Integer ipow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Non-negative residue of a modulo m > 0.
inline Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Prime factorization by trial division; inputs here are products of small
// generator numerators/denominators.
inline std::vector<std::pair<Integer, unsigned long>> factorize(Integer n) {
  std::vector<std::pair<Integer, unsigned long>> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    unsigned long e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline long to_long(const Integer& z) {
  if (!z.fits_slong_p()) throw Error("Overflow", "integer does not fit a machine word: " + z.get_str());
  return z.get_si();
}

}  // namespace plgroup
