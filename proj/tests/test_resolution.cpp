#include "artifact/resolution.hpp"
#include "doctest.h"
#include "builds.hpp"

using namespace artifact;

namespace {

using fx::built;
using fx::x1;
using fx::y;
using fx::z;

std::vector<std::size_t> bvec(std::size_t b2, std::size_t b3) { return {1, 0, b2, b3, b3, b2, 0, 1}; }

std::vector<std::string> gram_diagonal(const GramReport& g) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < g.gram.size(); ++i) out.push_back(g.gram[i][i].to_string());
  return out;
}

// the product rules of the resolution, checked component by component
void check_rules(const ResolvedAlgebra& R) {
  const auto& A = R.algebra();
  std::string why;
  CHECK_MESSAGE(A.check_graded_commutative(&why), why);
  CHECK_MESSAGE(A.check_associative(3, &why), why);
  CHECK(A.betti_palindromic());
  for (std::size_t j = 0; j < R.components().size(); ++j) {
    const auto& L = R.components()[j];
    CycVec x = R.from_component(j, 2, {Cyclotomic(1)});
    CycVec expect = R.from_base(4, R.gysin(j, 0, {Cyclotomic(1)}));
    for (auto& c : expect) c *= Cyclotomic(-2);
    if (L.genus != 1) {
      CycVec w = R.from_component(j, 4, L.omega);
      for (std::size_t i = 0; i < w.size(); ++i) expect[i] += Cyclotomic(4 - 4 * L.genus) * w[i];
    }
    CHECK(A.multiply(2, x, 2, x) == expect);
    for (std::size_t k = j + 1; k < R.components().size(); ++k)
      CHECK(A.multiply(2, x, 2, R.from_component(k, 2, {Cyclotomic(1)})) == A.zero(4));
  }
  // pairing at s = 0 is -3 times the total volume
  SymPoly vol;
  for (const auto& L : R.components()) vol = vol + SymPoly(L.volume);
  SymPoly at0 = pont_pairing(R, pontryagin(R)).substitute(R.parameter(), SymPoly(0));
  CHECK(at0 == vol * Cyclotomic(-3));
}

}  // namespace

TEST_CASE("symbolic determinant and coordinates") {
  SymPoly s = SymPoly::var("s");
  SymMatrix m{{s, SymPoly(1)}, {SymPoly(1), s}};
  CHECK(sym_determinant(m) == s * s - 1);
  SymMatrix d{{SymPoly(2), SymPoly(0), SymPoly(0)}, {SymPoly(0), s, SymPoly(0)}, {SymPoly(0), SymPoly(0), s + 1}};
  CHECK(sym_determinant(d) == s * (s + 1) * 2);
  CHECK(sym_determinant({}) == SymPoly(1));
  SymVec v{s, s * 2};
  CHECK(sym_coordinates({{1, 2}}, v) == SymVec{s});
  CHECK_THROWS(sym_coordinates({{1, 0}}, v));
}

TEST_CASE("cohomology of a surface times a circle") {
  for (unsigned g : {1u, 2u, 3u}) {
    auto P = PieceCohomology::surface_circle(g);
    const auto& A = P.algebra();
    CHECK(A.betti() == std::vector<std::size_t>{1, 2 * g + 1, 2 * g + 1, 1});
    std::string why;
    CHECK_MESSAGE(A.check_graded_commutative(&why), why);
    CHECK_MESSAGE(A.check_associative(3, &why), why);
    CHECK(A.labels(2)[0] == "omega");
    CHECK(A.labels(1).back() == "e");
    CycVec omega(A.dim(2)), e(A.dim(1));
    omega[0] = 1;
    e.back() = 1;
    CHECK(A.integrate(A.multiply(2, omega, 1, e)) == Cyclotomic(1));
    // the pairing H^1 x H^2 is perfect
    CHECK(rank(A.pairing_matrix(1)) == 2 * g + 1);
  }
}

TEST_CASE("one-step resolutions: Betti numbers and ring rules") {
  struct Row {
    int k, a;
    std::size_t b2, b3, zb2, zb3;
  };
  for (Row r : {Row{1, 3, 3, 11, 0, 0}, Row{1, 6, 2, 10, 0, 0}, Row{2, 4, 4, 17, 4, 9}, Row{3, 4, 8, 29, 8, 13}}) {
    CAPTURE(r.k);
    CAPTURE(r.a);
    auto b = built(r.k, r.a);
    auto X = x1(b);
    CHECK(X.betti() == bvec(r.b2, r.b3));
    check_rules(X);
    if (r.zb2) {
      auto Z = z(b);
      CHECK(Z.betti() == bvec(r.zb2, r.zb3));
      check_rules(Z);
    }
  }
}

TEST_CASE("one-step resolutions: components, p1, pairing and Gram") {
  auto b13 = built(1, 3);
  auto X13 = x1(b13);
  REQUIRE(X13.components().size() == 2);
  for (const auto& L : X13.components()) {
    CHECK(L.volume == Cyclotomic(3));
    CHECK(X13.base().algebra.labels(4).size() > 0);
    CHECK(X13.format(4, X13.from_base(4, L.thom)) == "-4/3*sqrt3*delta*(Im dz_{123})");
  }
  CycVec p = pontryagin(X13);
  CHECK(X13.format(4, p) == "8*sqrt3*delta*(Im dz_{123})");
  CHECK(pont_pairing(X13, p) == SymPoly(-18));
  auto g = h2_gram(X13);
  CHECK(g.negative_definite_at_zero);
  CHECK(gram_diagonal(g) == std::vector<std::string>{"-3/8*sqrt3", "-6", "-6"});

  auto X16 = x1(built(1, 6));
  CHECK(X16.format(4, pontryagin(X16)) == "8*sqrt3*delta*(Im dz_{123})");
  CHECK(pont_pairing(X16, pontryagin(X16)) == SymPoly(-18));
  CHECK(gram_diagonal(h2_gram(X16)) == std::vector<std::string>{"-6", "-6"});

  auto b24 = built(2, 4);
  auto X24 = x1(b24);
  CHECK(X24.format(4, pontryagin(X24)) == "12*delta*(Im dz_{123})");
  CHECK(pont_pairing(X24, pontryagin(X24)) == SymPoly(-24));
  CHECK(gram_diagonal(h2_gram(X24)) == std::vector<std::string>(4, "-4"));
  std::vector<std::string> thoms;
  for (const auto& L : X24.components()) {
    CHECK(L.volume == Cyclotomic(2));
    thoms.push_back(X24.base().algebra.format(4, L.thom));
  }
  CHECK(thoms == std::vector<std::string>{"-delta*(Im dz_{123}) + delta*(Im dz_{123b})",
                                          "-delta*(Im dz_{123}) + delta*(Im dz_{123b})",
                                          "-delta*(Im dz_{123}) - delta*(Im dz_{123b})",
                                          "-delta*(Im dz_{123}) - delta*(Im dz_{123b})"});
  auto Z24 = z(b24);
  CHECK(Z24.format(4, pontryagin(Z24)) == "24*delta*(Im dz_{123})");
  CHECK(pont_pairing(Z24, pontryagin(Z24)) == SymPoly(-12));
  CHECK(gram_diagonal(h2_gram(Z24)) == std::vector<std::string>(4, "-2"));
  for (const auto& L : Z24.components()) CHECK(L.volume == Cyclotomic(1));

  auto b34 = built(3, 4);
  auto X34 = x1(b34);
  CHECK(X34.format(4, pontryagin(X34)) == "12*delta*(Im dz_{123})");
  CHECK(pont_pairing(X34, pontryagin(X34)) == SymPoly(-48));
  CHECK(gram_diagonal(h2_gram(X34)) == std::vector<std::string>(8, "-4"));
  auto Z34 = z(b34);
  CHECK(Z34.format(4, pontryagin(Z34)) == "24*delta*(Im dz_{123})");
  CHECK(pont_pairing(Z34, pontryagin(Z34)) == SymPoly(-24));
  CHECK(gram_diagonal(h2_gram(Z34)) == std::vector<std::string>(8, "-2"));
}

TEST_CASE("phi class of a resolution is linear in the parameter") {
  auto X = x1(built(2, 4));
  SymPoly s = SymPoly::var("s");
  const SymVec& phi = X.phi();
  for (std::size_t j = 0; j < X.components().size(); ++j) {
    SymVec part(X.components()[j].cohomology.dim(1));
    for (std::size_t k = 0; k < part.size(); ++k) part[k] = phi[X.offset(j, 3) + k];
    for (std::size_t k = 0; k < part.size(); ++k) CHECK(part[k] == X.components()[j].theta[k] * s * Cyclotomic(-1));
  }
  for (std::size_t i = 0; i < X.base().algebra.dim(3); ++i) CHECK(phi[i].degree_in("s") == 0);
}

TEST_CASE("format and parse round trip") {
  auto X = x1(built(2, 4));
  for (int d = 0; d <= 7; ++d)
    for (std::size_t i = 0; i < X.algebra().dim(d); ++i) {
      CycVec e(X.algebra().dim(d));
      e[i] = Cyclotomic(Rational(-3, 2));
      if (i + 1 < e.size()) e[i + 1] = Cyclotomic::sqrt3();
      CHECK(X.parse(d, X.format(d, e)) == e);
    }
  CHECK(X.parse(4, "12*delta*(Im dz_{123})") == pontryagin(X));
  CHECK_THROWS(X.parse(4, "12*nonsense"));
}

TEST_CASE("resolution of M/iota") {
  auto b13 = built(1, 3);
  auto Y13 = y(b13);
  CHECK(Y13.betti() == std::vector<std::size_t>{1, 1, 7, 15, 15, 7, 1, 1});
  std::vector<std::string> vols, thoms;
  for (const auto& L : Y13.components()) {
    vols.push_back(L.volume.to_string());
    thoms.push_back(Y13.base().algebra.format(4, L.thom));
  }
  CHECK(vols == std::vector<std::string>{"1/2*sqrt3", "3*sqrt3", "3/2*sqrt3", "3*sqrt3"});
  CHECK(thoms == std::vector<std::string>{"-2/3*dz_{11b22b}", "-4*dz_{11b22b}", "-2*dz_{11b22b}", "-4*dz_{11b22b}"});
  CHECK(Y13.format(4, pontryagin(Y13)) == "32*dz_{11b22b}");

  auto Y24 = y(built(2, 4));
  CHECK(Y24.betti() == std::vector<std::size_t>{1, 1, 13, 29, 29, 13, 1, 1});
  CHECK(Y24.components().size() == 10);
  int ones = 0;
  for (const auto& L : Y24.components()) ones += L.volume == Cyclotomic(1);
  CHECK(ones == 4);
  CHECK(Y24.format(4, pontryagin(Y24)) == "24*dz_{11b22b}");
  std::string why;
  CHECK_MESSAGE(Y24.algebra().check_graded_commutative(&why), why);
}

TEST_CASE("two-step resolutions") {
  auto b13 = built(1, 3);
  auto Y13 = y(b13);
  auto X13 = resolve_second(b13.M, Y13, b13.iota, b13.kappa, "X2", {});
  CHECK(X13.betti() == bvec(2, 25));
  REQUIRE(X13.components().size() == 2);
  for (const auto& K : X13.components()) {
    CHECK(K.genus == 3);
    CHECK(K.volume == Cyclotomic(3));
    CHECK(X13.base().algebra.format(4, K.thom) == "-8/3*sqrt3*delta*(Im dz_{123})");
  }
  CycVec p = pontryagin_second(Y13, X13);
  CHECK(X13.format(4, p) == "32*dz_{11b22b} + 16*sqrt3*delta*(Im dz_{123}) - 8*omega*y_1 - 8*omega*y_2");
  CHECK(pont_pairing(X13, p).to_string() == "-18 - 12*sqrt3 - 48*s2*y_1 - 48*s2*y_2");
  auto g13 = h2_gram(X13);
  CHECK(g13.negative_definite_at_zero);
  CHECK(gram_diagonal(g13) == std::vector<std::string>{"-6 - 48*s2*y_1", "-6 - 48*s2*y_2"});
  check_rules(X13);

  auto b16 = built(1, 6);
  auto X16 = resolve_second(b16.M, y(b16), b16.iota, b16.kappa, "X2", {});
  CHECK(X16.betti() == bvec(2, 25));

  auto b24 = built(2, 4);
  auto Y24 = y(b24);
  auto X24 = resolve_second(b24.M, Y24, b24.iota, b24.kappa, "X2", {});
  CHECK(X24.betti() == bvec(7, 46));
  REQUIRE(X24.components().size() == 4);
  for (const auto& K : X24.components()) {
    CHECK(K.genus == 3);
    CHECK(K.volume == Cyclotomic(2));
  }
  CycVec p24 = pontryagin_second(Y24, X24);
  CHECK(X24.format(4, p24) ==
        "24*dz_{11b22b} + 24*delta*(Im dz_{123}) - 8*omega*y_1 - 8*omega*y_2 - 8*omega*y_3 - 8*omega*y_4");
  CHECK(pont_pairing(X24, p24).to_string() == "-48 - 32*s2*y_1 - 32*s2*y_2 - 32*s2*y_3 - 32*s2*y_4");
  auto g24 = h2_gram(X24);
  CHECK(g24.negative_definite_at_zero);
  CHECK(gram_diagonal(g24) == std::vector<std::string>{"-4", "-4", "-2", "-4 - 32*s2*y_1", "-4 - 32*s2*y_2",
                                                       "-4 - 32*s2*y_3", "-4 - 32*s2*y_4"});
  // off-diagonal entries vanish
  for (std::size_t i = 0; i < g24.gram.size(); ++i)
    for (std::size_t j = 0; j < g24.gram.size(); ++j)
      if (i != j) CHECK(g24.gram[i][j].is_zero());
  check_rules(X24);
}

TEST_CASE("negative definiteness test") {
  CHECK(negative_definite(CycMatrix::from_rows({{-2, 1}, {1, -2}})));
  CHECK_FALSE(negative_definite(CycMatrix::from_rows({{-1, 2}, {2, -1}})));
  CHECK(negative_definite(CycMatrix::from_rows({{-Cyclotomic::sqrt3()}})));
  CHECK_FALSE(negative_definite(CycMatrix::from_rows({{0}})));
}

TEST_CASE("condition on b3") {
  CHECK(check_p3(17, true));
  CHECK(check_p3(46, true));
  CHECK_FALSE(check_p3(1, true));
  CHECK_FALSE(check_p3(17, false));
}
