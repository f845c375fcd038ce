// Randomized property suites shared by the unit tests and the acceptance binary.
#pragma once

#include "artifact/intersections.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <sstream>

namespace suites {

using namespace artifact;

struct SuiteResult {
  bool ok = true;
  std::size_t cases = 0;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

inline SuiteResult snf_suite(std::size_t n_cases, unsigned seed = 20240611) {
  SuiteResult res;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dim(1, 5);
  for (std::size_t c = 0; c < n_cases; ++c) {
    IntMatrix m = oracle::random_int_matrix(rng, dim(rng), dim(rng), -6, 6);
    // sprinkle zero rows/cols and multiples to reach degenerate shapes
    if (c % 7 == 0 && m.rows() > 1)
      for (std::size_t j = 0; j < m.cols(); ++j) m(m.rows() - 1, j) = 2 * m(0, j);
    SmithForm sf = smith_normal_form(m);
    ++res.cases;
    if (sf.U * m * sf.V != sf.D) res.fail("U*m*V != D for " + m.to_string());
    Int du = oracle::laplace_det(sf.U), dv = oracle::laplace_det(sf.V);
    if (abs(du) != 1 || abs(dv) != 1) res.fail("non-unimodular transform for " + m.to_string());
    for (std::size_t i = 0; i < sf.D.rows(); ++i)
      for (std::size_t j = 0; j < sf.D.cols(); ++j)
        if (i != j && sf.D(i, j) != 0) res.fail("off-diagonal entry in D");
    auto d = sf.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      if (d[i] < 0) res.fail("negative invariant factor");
      if (d[i] == 0 && d[i + 1] != 0) res.fail("zero before nonzero on diagonal");
      if (d[i] != 0 && d[i + 1] % d[i] != 0) res.fail("divisibility chain broken for " + m.to_string());
    }
    auto ref = oracle::invariant_factors(m);
    for (std::size_t i = 0; i < d.size(); ++i) {
      Int expect = i < ref.size() ? ref[i] : Int(0);
      if (d[i] != expect) res.fail("invariant factors disagree with minors for " + m.to_string());
    }
  }
  return res;
}

inline Cyclotomic random_cyclotomic(std::mt19937& rng, unsigned n) {
  std::uniform_int_distribution<int> coef(-3, 3), den(1, 3), zero(0, 2);
  std::vector<Rational> c(euler_phi(n));
  for (auto& q : c)
    if (zero(rng)) q = Rational(coef(rng), den(rng));
  for (auto& q : c) q.canonicalize();
  return Cyclotomic(n, c);
}

inline SuiteResult cyclotomic_rank_nullity_suite(std::size_t n_cases, unsigned seed = 777) {
  SuiteResult res;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dim(1, 5), pick(0, 3);
  const unsigned conductors[] = {3, 4, 12, 5};
  for (std::size_t c = 0; c < n_cases; ++c) {
    std::size_t r = dim(rng), k = dim(rng);
    unsigned n = conductors[pick(rng)];
    CycMatrix m(r, k);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = random_cyclotomic(rng, n);
    // force rank deficiency in a third of the cases
    if (c % 3 == 0 && r > 1) {
      Cyclotomic a = random_cyclotomic(rng, n), b = random_cyclotomic(rng, n);
      for (std::size_t j = 0; j < k; ++j) m(r - 1, j) = a * m(0, j) + b * m(r / 2, j);
    }
    if (c % 5 == 0 && k > 1) {
      Cyclotomic a = random_cyclotomic(rng, n);
      for (std::size_t i = 0; i < r; ++i) m(i, k - 1) = a * m(i, 0);
    }
    ++res.cases;
    std::size_t rk = rank(m);
    auto ker = kernel_basis(m);
    if (rk + ker.size() != k) res.fail("rank + nullity != cols for " + m.to_string());
    for (const auto& v : ker) {
      auto img = m * v;
      for (const auto& x : img)
        if (!x.is_zero()) res.fail("kernel vector not annihilated");
    }
    if (!ker.empty()) {
      CycMatrix kb = CycMatrix::from_columns(ker, k);
      if (rank(kb) != ker.size()) res.fail("kernel basis dependent");
    }
    // transpose has the same rank
    if (rank(m.transpose()) != rk) res.fail("row rank != column rank");
  }
  return res;
}

inline SuiteResult congruence_suite(std::size_t n_cases, unsigned seed = 4242) {
  SuiteResult res;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dim(2, 3), tnum(0, 3), tden(1, 2);
  for (std::size_t c = 0; c < n_cases; ++c) {
    std::size_t n = dim(rng);
    IntMatrix m = oracle::random_int_matrix(rng, n, n, -2, 2);
    if (c % 4 == 3)
      for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = m(0, j);  // singular case
    Int det = oracle::laplace_det(m);
    if (abs(det) > 8) {
      --c;
      continue;
    }
    std::vector<Rational> t(n);
    long tl = 1;
    for (auto& x : t) {
      int d = tden(rng);
      x = Rational(tnum(rng), d);
      x.canonicalize();
      tl = std::lcm(tl, d);
    }
    ++res.cases;
    auto sol = solve_congruence(m, t);
    long den = det == 0 ? 12 : tl * Int(abs(det)).get_si();
    auto grid = oracle::congruence_grid(m, t, den);
    if (!sol) {
      if (det != 0 || !grid.empty()) res.fail("reported insoluble but grid has solutions: " + m.to_string());
      continue;
    }
    // each basepoint solves the system and directions lie in the kernel
    for (const auto& b : sol->basepoints) {
      for (std::size_t r = 0; r < n; ++r) {
        Rational s = -t[r];
        for (std::size_t j = 0; j < n; ++j) s += Rational(m(r, j)) * b[j];
        if (!is_integer(s)) res.fail("basepoint does not solve system");
      }
    }
    if (!(m * sol->directions).is_zero_matrix()) res.fail("direction not in kernel");
    // components are distinct
    for (std::size_t i = 0; i < sol->basepoints.size(); ++i)
      for (std::size_t j = i + 1; j < sol->basepoints.size(); ++j)
        if (same_coset(sol->basepoints[i], sol->basepoints[j], sol->directions)) res.fail("duplicate component");
    if (det != 0) {
      if (sol->basepoints.size() != grid.size()) res.fail("count mismatch vs grid for " + m.to_string());
      for (const auto& g : grid) {
        bool found = false;
        for (const auto& b : sol->basepoints) found = found || b == g;
        if (!found) res.fail("grid solution missing");
      }
    } else {
      for (const auto& g : grid) {
        bool found = false;
        for (const auto& b : sol->basepoints) found = found || same_coset(b, g, sol->directions);
        if (!found) res.fail("grid solution not covered by a component for " + m.to_string());
      }
    }
  }
  return res;
}

inline bool saturated(const IntMatrix& m) {
  for (const auto& d : smith_normal_form(m).diagonal())
    if (d != 1) return false;
  return true;
}

inline std::vector<RatVec> sorted_points(const std::vector<IntersectionPoint>& pts) {
  std::vector<RatVec> out;
  for (const auto& p : pts) out.push_back(reduce_mod_one(p.point));
  std::sort(out.begin(), out.end());
  return out;
}

// Level piece at t = 0 against a t-slab over [-1/4, 1/4] in T^6 x S^1 (trivial monodromy),
// checked against exhaustive enumeration of the congruence system over the grid (1/(|det| den))^6.
inline SuiteResult intersection_suite(std::size_t n_cases, unsigned seed = 1357) {
  SuiteResult res;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dim(1, 3), half(0, 1), small(-1, 1);
  const TorusModel T = TorusModel::standard(2);
  const RealAffineMap id{IntMatrix::identity(6), RatVec(6)};
  while (res.cases < n_cases) {
    const std::size_t da = dim(rng), db = 6 - da;
    IntMatrix Da = oracle::random_int_matrix(rng, 6, da, -1, 1), Db = oracle::random_int_matrix(rng, 6, db, -1, 1);
    if (!saturated(Da) || !saturated(Db)) continue;
    IntMatrix D = hstack(Da, Db);
    Int det = oracle::laplace_det(D);
    if (det == 0 || abs(det) > 4) continue;
    RatVec base_a(6), base_b(6);
    long den = abs(det) <= 2 ? 2 : 1;
    for (auto& q : base_a) q = Rational(den == 2 ? half(rng) : 0, 2);
    for (auto& q : base_b) q = Rational(den == 2 ? half(rng) : 0, 2);
    for (auto& q : base_a) q.canonicalize();
    for (auto& q : base_b) q.canonicalize();
    AffinePiece a = AffinePiece::level(0, base_a, Da), b = AffinePiece::t_slab(Rational(-1, 4), Rational(1, 4), base_b, RatVec(6), Db);
    ++res.cases;
    const std::string tag = " (case " + std::to_string(res.cases) + ")";
    std::vector<IntersectionPoint> pts;
    try {
      pts = intersection_points(T, id, a, b);
    } catch (const std::exception& e) {
      res.fail(std::string("unexpected failure: ") + e.what() + tag);
      continue;
    }
    // oracle: Da sa - Db sb = base_b - base_a mod Z^6
    IntMatrix Dm = D;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = da; j < 6; ++j) Dm(i, j) = -D(i, j);
    RatVec c(6);
    for (std::size_t i = 0; i < 6; ++i) c[i] = base_b[i] - base_a[i];
    auto hits = oracle::congruence_grid(Dm, c, Int(abs(det)).get_si() * den);
    std::vector<RatVec> expect;
    for (const auto& x : hits) {
      RatVec p = base_a;
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < da; ++j) p[i] += Rational(Da(i, j)) * x[j];
      expect.push_back(reduce_mod_one(p));
    }
    std::sort(expect.begin(), expect.end());
    if (sorted_points(pts) != expect) res.fail("intersection points disagree with enumeration" + tag);
    // sign oracle: 7x7 frame (0; Da) then (dt; 0), (0; Db)
    IntMatrix frame(7, 7);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < da; ++j) frame(i + 1, j) = Da(i, j);
    frame(0, da) = 1;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < db; ++j) frame(i + 1, da + 1 + j) = Db(i, j);
    int s = sgn(oracle::laplace_det(frame)) * T.orientation_sign();
    long total = 0;
    for (const auto& p : pts) {
      if (p.sign != s) res.fail("sign disagrees with the frame determinant" + tag);
      total += p.sign;
    }
    AffineCycle A{"a", {a}}, B{"b", {b}};
    long swapped = intersection_number(T, id, B, A);
    if (swapped != ((da * (7 - da)) % 2 ? -total : total)) res.fail("antisymmetry" + tag);
    AffineCycle Bt = B;
    for (auto& q : Bt.pieces[0].base) q += small(rng);
    if (intersection_number(T, id, A, Bt) != total) res.fail("translation by a lattice vector" + tag);
    // simultaneous automorphism in SL_6(Z)
    IntMatrix g = IntMatrix::identity(6);
    for (int step = 0; step < 6; ++step) {
      std::size_t i = rng() % 6, j = rng() % 6;
      if (i == j) continue;
      IntMatrix e = IntMatrix::identity(6);
      e(i, j) = small(rng);
      g = e * g;
    }
    MTMap h{1, RealAffineMap{g, RatVec(6)}};
    if (intersection_number(T, id, image(A, h), image(B, h)) != total) res.fail("lattice automorphism" + tag);
  }
  return res;
}

}  // namespace suites
