#pragma once
// The pair (A, P): P a finitely generated subgroup of the positive rationals,
// A = Z[P] = Z[1/N], and the submodule IP.A = delta.A.

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plgroup/lattice.hpp"
#include "plgroup/rational.hpp"

namespace plgroup {

struct IPATerm {
  Rational p;  // a generator or the inverse of one
  Rational b;  // element of A
};

class SlopeGroup {
 public:
  SlopeGroup() = default;

  explicit SlopeGroup(std::vector<Rational> generators) : gens_(std::move(generators)) {
    if (gens_.empty()) throw Error("BadContext", "slope group needs at least one generator");
    n_ = 1;
    delta_ = 0;
    for (auto& g : gens_) {
      g.canonicalize();
      if (g <= 0 || g == 1) throw Error("BadContext", "generator must be positive and != 1: " + g.get_str());
      n_ *= g.get_num() * g.get_den();
      delta_ = gcd(delta_, g.get_num() - g.get_den());
    }
    for (const auto& [p, e] : factorize(n_)) primes_.push_back(p);
    IntMatrix rows;
    for (const auto& g : gens_) rows.push_back(*exponent_vector(g));
    ech_ = echelon(rows, primes_.size());
  }

  const std::vector<Rational>& generators() const { return gens_; }
  const std::vector<Integer>& prime_support() const { return primes_; }
  const Integer& N() const { return n_; }
  const Integer& delta() const { return delta_; }
  std::size_t rank() const { return ech_.rank(); }
  bool independent() const { return ech_.rank() == gens_.size(); }
  // Columns span the lattice of prime-exponent vectors of P.
  const IntMatrix& exponent_lattice_basis() const { return ech_.h; }

  bool in_A(const Rational& q) const {
    Integer d = q.get_den();
    for (const auto& p : primes_)
      while (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) d /= p;
    return d == 1;
  }

  bool in_P(const Rational& q) const {
    if (q <= 0) return false;
    auto v = exponent_vector(q);
    return v && solve_in_echelon(ech_, *v).has_value();
  }

  // Coordinates e with q = prod gen_i^e_i.
  IntVec p_exponents(const Rational& q) const {
    if (!independent()) throw Error("DependentGenerators", "generators are not a basis of P");
    auto v = q > 0 ? exponent_vector(q) : std::nullopt;
    auto x = v ? solve_in_echelon(ech_, *v) : std::nullopt;
    if (!x) throw Error("NotInP", "not in P: " + q.get_str());
    IntVec e(gens_.size(), 0);
    for (std::size_t i = 0; i < x->size(); ++i)
      for (std::size_t j = 0; j < gens_.size(); ++j) e[j] += (*x)[i] * ech_.u[i][j];
    return e;
  }

  Rational from_exponents(const IntVec& e) const {
    Rational r = 1;
    for (std::size_t i = 0; i < gens_.size(); ++i) r *= rpow(gens_[i], to_long(e[i]));
    return r;
  }

  // Integer basis of the relation lattice {x : prod gen_i^x_i = 1}.
  IntMatrix relation_basis() const {
    IntMatrix out;
    for (std::size_t i = ech_.rank(); i < gens_.size(); ++i) out.push_back(ech_.u[i]);
    return out;
  }

  bool in_IPA(const Rational& a) const {
    require_A(a);
    return in_A(a / Rational(delta_));
  }

  // Residue of a in A/(IP.A) = Z/delta: u * v^-1 mod delta for a = u/v.
  Integer coset(const Rational& a) const {
    require_A(a);
    if (delta_ == 1) return 0;
    Integer inv;
    Integer den = a.get_den();
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), delta_.get_mpz_t()) == 0)
      throw Error("UnsupportedContext", "denominator not invertible modulo delta");
    return mod(a.get_num() * inv, delta_);
  }

  // a = sum (p_i - 1) b_i with b_i in A; one term per generator with nonzero coefficient.
  std::vector<IPATerm> express_in_IPA(const Rational& a) const {
    if (!in_IPA(a)) throw Error("NotInIPA", "not in IP.A: " + a.get_str()).with("delta", delta_.get_str());
    std::vector<IPATerm> out;
    if (a == 0) return out;
    // Extended gcd over s_i = n_i - d_i, accumulated left to right.
    std::vector<Integer> c(gens_.size(), 0);
    Integer g = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      Integer s = gens_[i].get_num() - gens_[i].get_den();
      Integer ng, x, y;
      mpz_gcdext(ng.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), g.get_mpz_t(), s.get_mpz_t());
      for (std::size_t j = 0; j < i; ++j) c[j] *= x;
      c[i] = y;
      g = ng;
    }
    Rational a_over_delta = a / Rational(delta_);
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (c[i] == 0) continue;
      out.push_back({gens_[i], Rational(c[i] * gens_[i].get_den()) * a_over_delta});
    }
    return out;
  }

  bool in_aut_o(const Rational& s) const { return s > 0 && in_A(s) && in_A(1 / s); }

  // Minimal k >= 1 with (s^k - 1) b in IP.A.
  long q_b_order(const Rational& s, const Rational& b) const {
    if (!in_aut_o(s)) throw Error("NotInAutO", "not a positive unit of A: " + s.get_str());
    require_A(b);
    Rational sk = s;
    for (long k = 1;; ++k, sk *= s) {
      if (in_IPA((sk - 1) * b)) return k;
      if (k > delta_ * delta_ + 1) throw Error("Internal", "q_b_order did not terminate");
    }
  }

  // Orbits of the primes of N acting on Z/delta by multiplication.
  std::vector<std::vector<long>> interval_iso_classes() const {
    long d = to_long(delta_);
    std::vector<long> gen;
    for (const auto& p : primes_) gen.push_back(to_long(mod(p, delta_)));
    std::vector<int> seen(static_cast<std::size_t>(d), 0);
    std::vector<std::vector<long>> orbits;
    for (long r = 0; r < d; ++r) {
      if (seen[r]) continue;
      std::vector<long> orbit{r}, stack{r};
      seen[r] = 1;
      while (!stack.empty()) {
        long x = stack.back();
        stack.pop_back();
        for (long g : gen) {
          long y = (x * g) % d;
          if (!seen[y]) {
            seen[y] = 1;
            orbit.push_back(y);
            stack.push_back(y);
          }
        }
      }
      std::sort(orbit.begin(), orbit.end());
      orbits.push_back(orbit);
    }
    return orbits;
  }

  // A point of A within distance < tol of t (tol > 0); nearest on the grid Z/N^e.
  Rational near_point(const Rational& t, const Rational& tol) const {
    Integer scale = grid_scale(tol);
    Rational x = t * Rational(scale);
    Integer f = floor_of(x);
    if (x - Rational(f) > Rational(1, 2)) f += 1;
    return make_rational(f, scale);
  }

  // Nearest point of the coset c + delta.A to t on the grid delta/N^e with delta/N^e < tol.
  Rational near_point_in_coset(const Rational& c, const Rational& t, const Rational& tol) const {
    Integer scale = grid_scale(tol / Rational(delta_));
    Rational x = (t - c) / Rational(delta_) * Rational(scale);
    Integer f = floor_of(x);
    if (x - Rational(f) > Rational(1, 2)) f += 1;
    return c + Rational(delta_) * make_rational(f, scale);
  }

  // Some point of A strictly between lo < hi.
  Rational point_between(const Rational& lo, const Rational& hi) const {
    return near_point((lo + hi) / 2, (hi - lo) / 4);
  }

  // Smallest N^e with 1/N^e < tol.
  Integer grid_scale(const Rational& tol) const {
    Integer s = 1;
    while (Rational(1, 1) / Rational(s) >= tol) s *= n_;
    return s;
  }

  void require_A(const Rational& q) const {
    if (!in_A(q)) throw Error("NotInA", "not in A: " + q.get_str());
  }

  bool operator==(const SlopeGroup& o) const { return gens_ == o.gens_; }

 private:
  std::optional<IntVec> exponent_vector(const Rational& q) const {
    IntVec v(primes_.size(), 0);
    Integer num = q.get_num(), den = q.get_den();
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      const auto& p = primes_[i];
      while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) {
        num /= p;
        v[i] += 1;
      }
      while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) {
        den /= p;
        v[i] -= 1;
      }
    }
    if (num != 1 || den != 1) return std::nullopt;
    return v;
  }

  std::vector<Rational> gens_;
  std::vector<Integer> primes_;
  Integer n_ = 1;
  Integer delta_ = 1;
  Echelon ech_;
};

}  // namespace plgroup
