#include "artifact/mt_cohomology.hpp"
#include "doctest.h"
#include "fixtures.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace artifact;

namespace {

struct Entry {
  int k, a;
};
const std::vector<Entry> kEntries{{1, 3}, {1, 6}, {2, 4}, {3, 4}};

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

TorusMappingTorus make(int k, int a) {
  auto S = fx::setup(k, a);
  return TorusMappingTorus(S.T, S.F);
}

}  // namespace

TEST_CASE("exterior algebra helpers") {
  CHECK(ext::masks(6, 2).size() == 15);
  CHECK(ext::masks(6, 2)[0] == 0b11u);
  CHECK(ext::masks(6, 2)[1] == 0b101u);
  CHECK(ext::reorder_sign(0b10, 0b01) == -1);
  CHECK(ext::reorder_sign(0b01, 0b10) == 1);
  CHECK(ext::reorder_sign(0b11, 0b01) == 0);
  CHECK(ext::reorder_sign(0b100, 0b011) == 1);
  // e1 ^ e2 = - e2 ^ e1
  CycVec e1(6), e2(6);
  e1[0] = 1;
  e2[1] = 1;
  CycVec w = ext::wedge(6, 1, e1, 1, e2), v = ext::wedge(6, 1, e2, 1, e1);
  CHECK(w[0] == Cyclotomic(1));
  CHECK(v[0] == Cyclotomic(-1));
  // determinant of the induced map on the top degree
  CycMatrix g = to_cyc_matrix(IntMatrix::from_rows({{2, 1, 0}, {1, 1, 0}, {0, 0, 3}}));
  CHECK(ext::induced(g, 3)(0, 0) == determinant(g));
}

TEST_CASE("monomial labels and conjugation") {
  CHECK(ComplexForms::monomial_label(0b1111) == "dz_{11b22b}");
  CHECK(ComplexForms::monomial_label(0b010101) == "dz_{123}");
  auto [m, s] = ComplexForms::conjugate(0b0011);  // conj dz1 ^ dz1b = dz1b ^ dz1 = -dz_{11b}
  CHECK(m == 0b0011u);
  CHECK(s == -1);
  auto [m2, s2] = ComplexForms::conjugate(0b1001);  // dz_{12b} -> dz_{1b2}
  CHECK(m2 == 0b0110u);
  CHECK(s2 == 1);
}

TEST_CASE("generator pullbacks agree from lattice and complex data") {
  for (auto [k, a] : kEntries) {
    auto S = fx::setup(k, a);
    ComplexForms forms(S.T);
    std::vector<SesquilinearAffineMap> maps{compose(fx::f(), fx::rot(a), S.T), fx::xi(), fx::eta()};
    for (const auto& g : maps) CHECK(forms.pullback_generators(realify(g, S.T)) == ComplexForms::pullback_generators(g));
  }
}

TEST_CASE("integral of the volume form is the covolume") {
  for (int k : {1, 2, 3}) {
    ComplexForms forms(TorusModel::standard(k));
    CHECK(forms.top_integral() * forms.volume_form()[0] == TorusModel::standard(k).covolume());
  }
}

TEST_CASE("pullback_on_pq examples") {
  TorusModel T = TorusModel::standard(2);
  auto F = compose(fx::f(), fx::rot(4), T);
  PullbackAction a = pullback_on_pq(F, 1, 1);
  CHECK_FALSE(a.conjugating);
  // restrict to <dz_{11b}, dz_{12b} - dz_{1b2}, dz_{22b}>
  auto idx = [&](const std::string& l) {
    return static_cast<std::size_t>(std::find(a.col_labels.begin(), a.col_labels.end(), l) - a.col_labels.begin());
  };
  std::size_t i11 = idx("dz_{11b}"), i12 = idx("dz_{12b}"), i21 = idx("dz_{1b2}"), i22 = idx("dz_{22b}");
  auto image = [&](const CycVec& v) { return a.matrix * v; };
  auto vec = [&](Cyclotomic x, Cyclotomic y, Cyclotomic z) {
    CycVec v(a.col_labels.size());
    v[i11] = x;
    v[i12] = y;
    v[i21] = -y;
    v[i22] = z;
    return v;
  };
  auto coords = [&](const CycVec& v) { return std::vector<Cyclotomic>{v[i11], v[i12], v[i22]}; };
  CHECK(coords(image(vec(1, 0, 0))) == std::vector<Cyclotomic>{1, 0, 0});
  CHECK(coords(image(vec(0, 1, 0))) == std::vector<Cyclotomic>{-2, 1, 0});
  CHECK(coords(image(vec(0, 0, 1))) == std::vector<Cyclotomic>{1, -1, 1});
  // F acts trivially on (3,0)
  for (auto [k, aa] : kEntries) {
    TorusModel Tk = TorusModel::standard(k);
    PullbackAction h = pullback_on_pq(compose(fx::f(), fx::rot(aa), Tk), 3, 0);
    CHECK(h.matrix == CycMatrix::identity(1));
  }
  PullbackAction id = pullback_on_pq(SesquilinearAffineMap::identity(), 2, 1);
  CHECK(id.matrix == CycMatrix::identity(id.matrix.rows()));
  PullbackAction e = pullback_on_pq(fx::eta(), 1, 1);
  CHECK(e.conjugating);
  CHECK(e.src_p == 1);
}

TEST_CASE("K and C bases") {
  auto M13 = make(1, 3);
  CHECK(as_set(M13.mt.K_labels(2)) ==
        std::set<std::string>{"i dz_{11b}", "i dz_{33b}", "Re dz_{12b}", "Re dz_{13b}", "Im dz_{13b}"});
  auto M24 = make(2, 4);
  CHECK(as_set(M24.mt.K_labels(3)) ==
        std::set<std::string>{"Re dz_{123}", "Im dz_{123}", "Re dz_{123b}", "Im dz_{123b}"});
  CHECK(as_set(M24.mt.C_labels(2)) == std::set<std::string>{"Re dz_{12b}", "i dz_{22b}", "i dz_{33b}"});
  for (auto [k, a] : kEntries) {
    auto M = make(k, a);
    CHECK(M.mt.K(1).empty());
    CHECK(M.mt.C(1).empty());
    CHECK(M.mt.C(0).size() == 1);
    CHECK(M.mt.betti()[1] == 1);
    CHECK(M.mt.betti()[0] == 1);
  }
  CHECK(M24.mt.betti()[3] == 7);
}

TEST_CASE("Betti vectors of the four mapping tori") {
  // dim K^m + dim C^{m-1} from the listed bases
  CHECK(make(1, 3).mt.betti() == std::vector<std::size_t>{1, 1, 5, 7, 7, 5, 1, 1});
  CHECK(make(1, 6).mt.betti() == std::vector<std::size_t>{1, 1, 3, 5, 5, 3, 1, 1});
  CHECK(make(2, 4).mt.betti() == std::vector<std::size_t>{1, 1, 3, 7, 7, 3, 1, 1});
  CHECK(make(3, 4).mt.betti() == std::vector<std::size_t>{1, 1, 3, 7, 7, 3, 1, 1});
}

TEST_CASE("mapping torus algebra properties") {
  for (auto [k, a] : kEntries) {
    auto M = make(k, a);
    const auto& alg = M.mt.algebra();
    std::string why;
    CHECK_MESSAGE(alg.check_graded_commutative(&why), why);
    CHECK_MESSAGE(alg.check_associative(7, &why), why);
    CHECK_MESSAGE(alg.check_unit(&why), why);
    CHECK(alg.betti_palindromic());
    for (unsigned m = 0; m <= 6; ++m) CHECK(M.mt.K(m).size() == M.mt.C(m).size());
    // Poincare duality: the pairing is nondegenerate
    for (int d = 0; d <= 7; ++d) CHECK(rank(alg.pairing_matrix(d)) == alg.dim(d));
    CHECK(alg.integrate(M.volume_class()) == M.forms.torus().covolume());
  }
}

TEST_CASE("pullback respects wedge on random monomial pairs") {
  std::mt19937 rng(7);
  for (auto [k, a] : kEntries) {
    TorusModel T = TorusModel::standard(k);
    for (const auto& g : {compose(fx::f(), fx::rot(a), T), fx::xi(), fx::eta()}) {
      CycMatrix G = ComplexForms::pullback_generators(g);
      for (int trial = 0; trial < 10; ++trial) {
        unsigned p = rng() % 4, q = rng() % (7 - p);
        if (p + q > 6) continue;
        const auto& mp = ext::masks(6, p);
        const auto& mq = ext::masks(6, q);
        std::size_t i = rng() % mp.size(), j = rng() % mq.size();
        CycVec x(mp.size()), y(mq.size());
        x[i] = 1;
        y[j] = 1;
        CycVec lhs = ext::induced(G, p + q) * ext::wedge(6, p, x, q, y);
        CycVec rhs = ext::wedge(6, p, ext::induced(G, p) * x, q, ext::induced(G, q) * y);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("symmetry actions on the mapping tori") {
  for (auto [k, a] : kEntries) {
    auto M = make(k, a);
    auto kap = group_action_on_H(M, "kappa", SymmetryKind::Reversing, fx::eta());
    auto iot = group_action_on_H(M, "iota", SymmetryKind::Commuting, fx::xi());
    for (unsigned m = 0; m <= 7; ++m) {
      const std::size_t d = M.mt.algebra().dim(static_cast<int>(m));
      CHECK(kap.blocks[m] * kap.blocks[m] == CycMatrix::identity(d));
      CHECK(iot.blocks[m] * iot.blocks[m] == CycMatrix::identity(d));
      CHECK(kap.blocks[m] * iot.blocks[m] == iot.blocks[m] * kap.blocks[m]);
    }
    auto id = group_action_on_H(M, "id", SymmetryKind::Commuting, SesquilinearAffineMap::identity());
    for (unsigned m = 0; m <= 7; ++m) CHECK(id.blocks[m] == CycMatrix::identity(M.mt.algebra().dim(static_cast<int>(m))));
    CHECK(invariants({}, M.mt, 3).size() == M.mt.algebra().dim(3));
    // kappa preserves phi
    CycVec phi = M.phi_class();
    CHECK(kap.blocks[3] * phi == phi);
    CHECK(iot.blocks[3] * phi == phi);
  }
  // kappa on K^3(M_{1,a}): Re dz_123 fixed, Im dz_123 negated
  auto M13 = make(1, 3);
  auto kap = group_action_on_H(M13, "kappa", SymmetryKind::Reversing, fx::eta());
  const auto& L = M13.mt.K_labels(3);
  auto re = std::find(L.begin(), L.end(), "Re dz_{123}") - L.begin();
  auto im = std::find(L.begin(), L.end(), "Im dz_{123}") - L.begin();
  CycVec e_re = M13.mt.algebra().basis_vector(3, re), e_im = M13.mt.algebra().basis_vector(3, im);
  CHECK(kap.blocks[3] * e_re == e_re);
  CycVec minus_im = e_im;
  for (auto& c : minus_im) c = -c;
  CHECK(kap.blocks[3] * e_im == minus_im);

  auto M24 = make(2, 4);
  auto k24 = group_action_on_H(M24, "kappa", SymmetryKind::Reversing, fx::eta());
  CHECK(invariants({k24}, M24.mt, 2).empty());
  CHECK(invariants({k24}, M24.mt, 3).size() == 5);
  auto T = TorusModel::standard(2);
  auto j1 = group_action_on_H(M24, "j1", SymmetryKind::Commuting, fx::zeta_shift(T, Cyclotomic(Rational(1, 2))));
  auto j2 = group_action_on_H(M24, "j2", SymmetryKind::Commuting,
                              fx::zeta_shift(T, Cyclotomic::imag_unit() * Cyclotomic(Rational(1, 2))));
  CHECK(invariants({k24, j1, j2}, M24.mt, 3).size() == 5);
}

TEST_CASE("a generator that does not preserve the image is rejected") {
  // F = diag(2,1) shear-free fiber model with a swap that does not commute
  CycMatrix F = to_cyc_matrix(IntMatrix::from_rows({{1, 1}, {0, 1}}));
  MappingTorusCohomology mt(standard_fiber(2, F));
  CycMatrix swap = to_cyc_matrix(IntMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK_THROWS_AS(mt.action(1, swap, 2), IllDefined);
}

TEST_CASE("first homology") {
  CHECK(h1_integer(fx::setup(1, 3).F).to_string() == "Z + Z3^3");
  CHECK(h1_integer(fx::setup(1, 6).F).to_string() == "Z + Z3");
  CHECK(h1_integer(fx::setup(2, 4).F).to_string() == "Z + Z2^4");
  CHECK(h1_integer(RealAffineMap::identity()).to_string() == "Z^7");

  auto S = fx::setup(1, 3);
  H1ModP q = h1_modp_quotient_invariants(S.F, reversing_lift(S.Eta, S.F), 3);
  CHECK(q.labels == std::vector<std::string>{"c_0", "c_{1,1}", "c_{2,1}", "c_{3,1}"});
  // c0 -> -c0, c11 -> -c11 + c21, c21 -> c21, c31 -> -c31
  CHECK(q.action == std::vector<std::vector<long>>{{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 2}});
  CHECK(q.fixed_string() == "<c_{2,1}>");
  H1ModP full = h1_modp_quotient_invariants(S.F, commuting_lift(RealAffineMap::identity()), 3);
  CHECK(full.fixed.size() == 4);
}

TEST_CASE("h1 tensor Z_p against direct mod-p rank") {
  std::mt19937 rng(11);
  auto rank_mod_p = [](std::vector<std::vector<long>> a, long p) {
    std::size_t r = 0, n = a.size(), m = a[0].size();
    for (std::size_t c = 0; c < m && r < n; ++c) {
      std::size_t s = r;
      while (s < n && a[s][c] % p == 0) ++s;
      if (s == n) continue;
      std::swap(a[s], a[r]);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == r) continue;
        long f = a[i][c], g = a[r][c];
        for (std::size_t j = 0; j < m; ++j) a[i][j] = ((a[i][j] * g - f * a[r][j]) % p + p) % p;
      }
      ++r;
    }
    return r;
  };
  for (int trial = 0; trial < 60; ++trial) {
    const long p = std::vector<long>{2, 3, 5}[trial % 3];
    IntMatrix M = IntMatrix::identity(4);
    std::vector<std::vector<long>> d(4, std::vector<long>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        long v = static_cast<long>(rng() % 7) - 3;
        M(i, j) = v;
        d[i][j] = ((v - (i == j)) % p + p) % p;
      }
    RealAffineMap F{M, RatVec(4)};
    AbelianGroup g = h1_integer(F);
    std::size_t dim = g.free_rank;
    for (const auto& t : g.torsion)
      if (t % p == 0) ++dim;
    CHECK(dim == 4 - rank_mod_p(d, p) + 1);
  }
}
