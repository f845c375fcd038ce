// Independent reference computations used by the property suites.
#pragma once

#include "artifact/exact_linalg.hpp"

#include <functional>
#include <random>
#include <string>

namespace oracle {

using artifact::Int;
using artifact::IntMatrix;
using artifact::Rational;

// Laplace expansion; fine for the small sizes used here.
inline Int laplace_det(const IntMatrix& m) {
  std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Int total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    Int d = m(0, c) * laplace_det(minor);
    total += (c % 2 == 0) ? d : Int(-d);
  }
  return total;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Invariant factors from determinantal divisors: d_k = D_k / D_{k-1}, D_k = gcd of k-minors.
inline std::vector<Int> invariant_factors(const IntMatrix& m) {
  std::vector<Int> out;
  Int prev = 1;
  std::size_t kmax = std::min(m.rows(), m.cols());
  for (std::size_t k = 1; k <= kmax; ++k) {
    Int g = 0;
    for_each_subset(m.rows(), k, [&](const std::vector<std::size_t>& rows) {
      for_each_subset(m.cols(), k, [&](const std::vector<std::size_t>& cols) {
        IntMatrix sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
        g = gcd(g, laplace_det(sub));
      });
    });
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

inline IntMatrix random_int_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// Every x in (1/den)Z^n / Z^n with m x = t mod Z.
inline std::vector<std::vector<Rational>> congruence_grid(const IntMatrix& m, const std::vector<Rational>& t, long den) {
  std::size_t n = m.cols();
  std::vector<std::vector<Rational>> hits;
  std::vector<long> k(n, 0);
  while (true) {
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = Rational(k[i], den);
      x[i].canonicalize();
    }
    bool ok = true;
    for (std::size_t r = 0; r < m.rows() && ok; ++r) {
      Rational s = -t[r];
      for (std::size_t j = 0; j < n; ++j) s += Rational(m(r, j)) * x[j];
      s.canonicalize();
      ok = s.get_den() == 1;
    }
    if (ok) hits.push_back(x);
    std::size_t i = 0;
    while (i < n && ++k[i] == den) k[i++] = 0;
    if (i == n) break;
  }
  return hits;
}

}  // namespace oracle
