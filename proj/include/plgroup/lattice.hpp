#pragma once
// Integer row-echelon (Hermite-style) reduction with a unimodular transform,
// used for slope-exponent lattices and for subgroups of Z^2.

#include <cstddef>
#include <optional>
#include <vector>

#include "plgroup/rational.hpp"

namespace plgroup {

using IntMatrix = std::vector<IntVec>;

struct Echelon {
  IntMatrix h;  // h = u * input, rows [0, rank) nonzero in echelon form
  IntMatrix u;  // unimodular
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const { return pivot_cols.size(); }
};

inline Echelon echelon(const IntMatrix& rows, std::size_t ncols) {
  Echelon e;
  e.h = rows;
  const std::size_t m = rows.size();
  e.u.assign(m, IntVec(m, 0));
  for (std::size_t i = 0; i < m; ++i) e.u[i][i] = 1;
  auto sub = [&](std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t c = 0; c < ncols; ++c) e.h[dst][c] -= q * e.h[src][c];
    for (std::size_t c = 0; c < m; ++c) e.u[dst][c] -= q * e.u[src][c];
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < m; ++c) {
    // Euclid down column c until only row r is nonzero.
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (e.h[i][c] != 0 && (best == m || abs(e.h[i][c]) < abs(e.h[best][c]))) best = i;
      if (best == m) break;
      std::swap(e.h[r], e.h[best]);
      std::swap(e.u[r], e.u[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (e.h[i][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), e.h[i][c].get_mpz_t(), e.h[r][c].get_mpz_t());
        sub(i, r, q);
        if (e.h[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (e.h[r][c] == 0) continue;
    if (e.h[r][c] < 0) {
      for (auto& x : e.h[r]) x = -x;
      for (auto& x : e.u[r]) x = -x;
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), e.h[i][c].get_mpz_t(), e.h[r][c].get_mpz_t());
      if (q != 0) sub(i, r, q);
    }
    e.pivot_cols.push_back(c);
    ++r;
  }
  return e;
}

// Coefficients x with x * h[0..rank) = w, or nullopt when w is off the lattice.
inline std::optional<IntVec> solve_in_echelon(const Echelon& e, IntVec w) {
  IntVec x(e.rank(), 0);
  for (std::size_t i = 0; i < e.rank(); ++i) {
    std::size_t c = e.pivot_cols[i];
    if (!mpz_divisible_p(w[c].get_mpz_t(), e.h[i][c].get_mpz_t())) return std::nullopt;
    x[i] = w[c] / e.h[i][c];
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= x[i] * e.h[i][k];
  }
  for (const auto& v : w)
    if (v != 0) return std::nullopt;
  return x;
}

// Rank of the lattice spanned by the given integer vectors.
inline std::size_t lattice_rank(const IntMatrix& rows) {
  if (rows.empty()) return 0;
  return echelon(rows, rows.front().size()).rank();
}

}  // namespace plgroup
