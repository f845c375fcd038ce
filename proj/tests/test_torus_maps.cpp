#include "doctest.h"
#include "fixtures.hpp"

#include <random>

using namespace artifact;

TEST_CASE("realify examples on the square torus") {
  TorusModel T = TorusModel::standard(2);
  RealAffineMap x = realify(fx::xi(), T);
  IntMatrix d(6, 6);
  for (int i = 0; i < 6; ++i) d(i, i) = i < 4 ? -1 : 1;
  CHECK(x.M == d);
  RealAffineMap r = realify(fx::rot(4), T);
  IntMatrix rm(6, 6);
  rm(0, 1) = -1, rm(1, 0) = 1, rm(2, 3) = -1, rm(3, 2) = 1, rm(4, 4) = -1, rm(5, 5) = -1;
  CHECK(r.M == rm);
  RealAffineMap fr = realify(fx::f(), T);
  IntMatrix fm = IntMatrix::identity(6);
  fm(2, 0) = -1, fm(3, 1) = -1;
  CHECK(fr.M == fm);
  // rotation by zeta_3 does not preserve Z<1,i>
  CHECK_THROWS_AS(realify(fx::rot(3), T), NonIntegral);
}

TEST_CASE("torus orientation and covolume") {
  CHECK(TorusModel::standard(1).orientation_sign() == 1);
  CHECK(TorusModel::standard(2).orientation_sign() == 1);
  CHECK(TorusModel::standard(3).orientation_sign() == -1);
  CHECK(TorusModel::standard(2).covolume() == Cyclotomic(1));
  CHECK(TorusModel::standard(3).covolume() == Cyclotomic(2));
  // (sqrt3/2)^3
  CHECK(TorusModel::standard(1).covolume() == Cyclotomic(Rational(3, 8)) * Cyclotomic::sqrt3());
}

TEST_CASE("realify is functorial on catalog maps") {
  for (int k : {1, 2, 3}) {
    TorusModel T = TorusModel::standard(k);
    std::vector<SesquilinearAffineMap> maps{fx::f(), fx::xi(), fx::eta(), fx::rot(k == 1 ? 3 : 4)};
    if (k == 1) maps.push_back(fx::rot(6));
    if (k > 1) {
      maps.push_back(fx::zeta_shift(T, Rational(1, 2)));
      maps.push_back(fx::zeta_shift(T, Cyclotomic::imag_unit() * Cyclotomic(Rational(1, 2))));
    }
    for (const auto& g : maps)
      for (const auto& h : maps) CHECK(realify(compose(g, h, T), T) == realify(g, T) * realify(h, T));
  }
}

TEST_CASE("fixed loci of torus maps") {
  TorusModel T = TorusModel::standard(2);
  auto eta = fixed_locus(realify(fx::eta(), T));
  CHECK(eta.size() == 2);
  for (const auto& c : eta) CHECK(c.dimension() == 3);
  auto xi = fixed_locus(realify(fx::xi(), T));
  CHECK(xi.size() == 16);
  for (const auto& c : xi) CHECK(c.dimension() == 2);
  RealAffineMap tr = RealAffineMap::identity();
  tr.t[4] = Rational(1, 2);
  CHECK(fixed_locus(tr).empty());

  for (int k : {2, 3}) {
    auto s = fx::setup(k, 4);
    CHECK(fixed_locus(s.Eta * s.F).size() == (k == 2 ? 2u : 4u));
  }
}

TEST_CASE("fixed subtori are pointwise fixed and disjoint") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(-5, 5);
  for (int k : {1, 2, 3}) {
    auto s = fx::setup(k, k == 1 ? 3 : 4);
    for (const RealAffineMap& g : {s.Xi, s.Eta, s.Eta * s.F, s.Xi * s.Eta * s.F}) {
      auto comps = fixed_locus(g);
      for (std::size_t i = 0; i < comps.size(); ++i) {
        for (int trial = 0; trial < 3; ++trial) {
          RatVec p = comps[i].basepoint;
          for (std::size_t c = 0; c < comps[i].dimension(); ++c) {
            Rational w(num(rng), 7);
            w.canonicalize();
            for (std::size_t r = 0; r < 6; ++r) p[r] += w * Rational(comps[i].directions(r, c));
          }
          p = reduce_mod_one(p);
          CHECK(g.apply(p) == p);
        }
        for (std::size_t j = i + 1; j < comps.size(); ++j) CHECK_FALSE(intersects(comps[i], comps[j]));
      }
    }
  }
}

TEST_CASE("component counts survive conjugation by a lattice automorphism") {
  auto s = fx::setup(2, 4);
  RealAffineMap c = realify(fx::f(), s.T) * realify(fx::rot(4), s.T);
  c.t[0] = Rational(1, 3);
  for (const RealAffineMap& g : {s.Xi, s.Eta, s.Eta * s.F}) CHECK(fixed_locus(c * g * c.inverse()).size() == fixed_locus(g).size());
}

TEST_CASE("iota components in the mapping tori") {
  for (int a : {3, 6}) {
    auto s = fx::setup(1, a);
    auto comps = mapping_torus_fixed_components(commuting_lift(s.Xi), s.F);
    REQUIRE(comps.size() == 4);
    int non_torus = 0;
    for (const auto& c : comps) {
      CHECK(c.level == Level::Spans);
      CHECK(c.dimension() == 3);
      if (c.return_matrix != IntMatrix::identity(2)) {
        ++non_torus;
        CHECK(c.orbit_length == 1);
        // r_a^{-2} is a rotation of order 3 on C/Gamma_1
        CHECK(power(c.return_matrix, 3) == IntMatrix::identity(2));
      }
    }
    CHECK(non_torus == 1);
  }
  auto s = fx::setup(2, 4);
  auto comps = mapping_torus_fixed_components(commuting_lift(s.Xi), s.F);
  REQUIRE(comps.size() == 10);
  int minus = 0;
  for (const auto& c : comps) {
    if (c.return_matrix == IntMatrix::identity(2) * Int(-1)) {
      ++minus;
      CHECK(c.orbit_length == 1);
      CHECK(c.description == "mapping torus of -Id");
    } else {
      CHECK(c.orbit_length == 2);
      CHECK(c.return_matrix == IntMatrix::identity(2));
    }
  }
  CHECK(minus == 4);
}

TEST_CASE("kappa fixed components and action on iota components") {
  auto s = fx::setup(2, 4);
  MTMap kappa = reversing_lift(s.Eta, s.F);
  CHECK(descends(kappa, s.F));
  auto kc = mapping_torus_fixed_components(kappa, s.F);
  REQUIRE(kc.size() == 4);
  int zero = 0;
  for (const auto& c : kc) zero += c.level == Level::Zero;
  CHECK(zero == 2);
  auto same = mapping_torus_fixed_components(SymmetryKind::Reversing, fx::eta(), compose(fx::f(), fx::rot(4), s.T), s.T);
  CHECK(same.size() == 4);

  auto ic = mapping_torus_fixed_components(commuting_lift(s.Xi), s.F);
  auto rep = permutation_report(symmetry_on_components(kappa, ic, s.F));
  int fixed = 0, fixed_minus = 0, swapped_minus = 0;
  for (std::size_t i = 0; i < ic.size(); ++i) {
    CHECK(rep.perm[rep.perm[i]] == i);
    bool minus = ic[i].orbit_length == 1;
    if (rep.perm[i] == i) {
      ++fixed;
      fixed_minus += minus;
      CHECK(rep.theta_sign[i] == -1);
    } else {
      swapped_minus += minus;
    }
  }
  // two of the preserved components and one swapped pair are mapping tori of -Id
  CHECK(fixed == 4);
  CHECK(fixed_minus == 2);
  CHECK(swapped_minus == 2);

  auto s1 = fx::setup(1, 3);
  auto ic1 = mapping_torus_fixed_components(commuting_lift(s1.Xi), s1.F);
  auto rep1 = permutation_report(symmetry_on_components(reversing_lift(s1.Eta, s1.F), ic1, s1.F));
  for (std::size_t i = 0; i < ic1.size(); ++i) CHECK(rep1.perm[i] == i);
  auto id = permutation_report(symmetry_on_components(MTMap{1, RealAffineMap::identity()}, ic, s.F));
  for (std::size_t i = 0; i < ic.size(); ++i) CHECK(id.perm[i] == i);
}

TEST_CASE("commutation failures are reported") {
  auto s = fx::setup(2, 4);
  CHECK_THROWS_AS(mapping_torus_fixed_components(commuting_lift(s.Eta), s.F), CommutationFailure);
  CHECK_THROWS_AS(mapping_torus_fixed_components(MTMap{-1, s.Xi}, s.F), CommutationFailure);
}

TEST_CASE("group generated by kappa and the two shifts has order 8") {
  auto s = fx::setup(2, 4);
  MTMap kappa = reversing_lift(s.Eta, s.F);
  MTMap j1 = commuting_lift(realify(fx::zeta_shift(s.T, Rational(1, 2)), s.T));
  MTMap j2 = commuting_lift(realify(fx::zeta_shift(s.T, Cyclotomic::imag_unit() * Cyclotomic(Rational(1, 2))), s.T));
  CHECK(descends(j1, s.F));
  CHECK(descends(j2, s.F));
  CHECK(group_closure({kappa, j1, j2}).size() == 8);
  CHECK(group_closure({kappa, commuting_lift(s.Xi)}).size() == 4);
}
