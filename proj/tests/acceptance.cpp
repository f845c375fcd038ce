// One line per acceptance criterion; exit status 1 if any criterion fails.
#include "artifact/catalog.hpp"
#include "property_suites.hpp"

#include <algorithm>
#include <functional>
#include <iostream>

using namespace artifact;

namespace {

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) failures.push_back(what + ": got " + str(got) + ", want " + str(want));
  }
  static std::string str(const std::string& s) { return s; }
  static std::string str(const char* s) { return s; }
  static std::string str(const Rational& q) { return to_string(q); }
  template <class T>
  static std::string str(const T& x) {
    return std::to_string(x);
  }
};

int failed = 0;

void criterion(int n, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  std::string line = (c.failures.empty() ? "PASS " : "FAIL ") + std::to_string(n) + " " + title;
  if (!c.failures.empty()) {
    ++failed;
    line += " :: ";
    for (std::size_t i = 0; i < c.failures.size(); ++i) line += (i ? "; " : "") + c.failures[i];
  }
  std::cout << line << std::endl;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

int main() {
  const Catalog cat = Catalog::load(Catalog::default_path());
  Pipeline p(cat);
  const std::vector<std::string> table = {"X1_1_3", "X1_1_6", "X1_2_4", "X1_3_4", "Z_2_4",
                                          "Z_3_4",  "X2_1_3", "X2_1_6", "X2_2_4"};

  criterion(1, "Betti pairs of the nine resolutions", [&](Check& c) {
    const std::vector<std::pair<std::size_t, std::size_t>> want = {{3, 11}, {2, 10}, {4, 17}, {8, 29}, {4, 9},
                                                                   {8, 13}, {2, 25}, {2, 25}, {7, 46}};
    for (std::size_t i = 0; i < table.size(); ++i) {
      auto b = p.algebra(table[i]).betti();
      c.equal(b[2], want[i].first, table[i] + " b2");
      c.equal(b[3], want[i].second, table[i] + " b3");
      c.expect(b == std::vector<std::size_t>{1, 0, b[2], b[3], b[3], b[2], 0, 1}, table[i] + " full Betti vector");
    }
  });

  criterion(2, "H_1 of M_{1,3}, M_{1,6}, M_{2,4}", [&](Check& c) {
    c.equal(h1_integer(p.mapping_torus("M_1_3").F).to_string(), "Z + Z3^3", "M_1_3");
    c.equal(h1_integer(p.mapping_torus("M_1_6").F).to_string(), "Z + Z3", "M_1_6");
    c.equal(h1_integer(p.mapping_torus("M_2_4").F).to_string(), "Z + Z2^4", "M_2_4");
  });

  criterion(3, "mod-3 kappa-invariants of H_1(M_{1,3}; Z_3)", [&](Check& c) {
    auto inv = h1_modp_quotient_invariants(p.mapping_torus("M_1_3").F, cat.family("M_1_3").symmetries.at("kappa"), 3);
    c.equal(inv.fixed.size(), std::size_t(1), "dimension");
    c.equal(inv.fixed_string(), "<c_{2,1}>", "span");
  });

  criterion(4, "fixed loci, singular loci and the kappa-permutation", [&](Check& c) {
    for (const char* m : {"M_1_3", "M_1_6"}) {
      auto comps = mapping_torus_fixed_components(cat.family(m).symmetries.at("iota"), p.mapping_torus(m).F);
      c.equal(comps.size(), std::size_t(4), std::string(m) + " Fix(iota)");
      long non_torus = std::count_if(comps.begin(), comps.end(), [](const FixedComponent& x) {
        return x.return_matrix != IntMatrix::identity(x.return_matrix.rows());
      });
      c.equal(non_torus, 1L, std::string(m) + " non-torus components");
    }
    auto comps = mapping_torus_fixed_components(cat.family("M_2_4").symmetries.at("iota"), p.mapping_torus("M_2_4").F);
    c.equal(comps.size(), std::size_t(10), "M_2_4 Fix(iota)");
    long minus = std::count_if(comps.begin(), comps.end(),
                               [](const FixedComponent& x) { return x.description == "mapping torus of -Id"; });
    c.equal(minus, 4L, "M_2_4 mapping tori of -Id");
    const std::vector<std::pair<const char*, std::size_t>> sing = {{"X1_1_3", 2}, {"X1_1_6", 2}, {"X1_2_4", 4},
                                                                   {"Z_2_4", 4},  {"X1_3_4", 8}, {"Z_3_4", 8}};
    for (auto [n, k] : sing) c.equal(p.algebra(n).components().size(), k, std::string(n) + " singular components");
    c.equal(fixed_locus_report(p, "M_2_4").summary.at("fix_iota_kappa_permutation"), "(L5 L8)(L6 L9)(L7 L10)",
            "kappa on Fix(iota) of M_2_4");
  });

  criterion(5, "Pontryagin classes and their pairing with the G2 form", [&](Check& c) {
    const std::vector<std::string> want = {
        "8*sqrt3*delta*(Im dz_{123})",
        "8*sqrt3*delta*(Im dz_{123})",
        "12*delta*(Im dz_{123})",
        "12*delta*(Im dz_{123})",
        "24*delta*(Im dz_{123})",
        "24*delta*(Im dz_{123})",
        "14*dz_{11b22b} + 16*sqrt3*delta*(Im dz_{123}) - 8*omega*y_1 - 8*omega*y_2",
        "14*dz_{11b22b} + 16*sqrt3*delta*(Im dz_{123}) - 8*omega*y_1 - 8*omega*y_2",
        "24*dz_{11b22b} + 24*delta*(Im dz_{123}) - 8*omega*y_1 - 8*omega*y_2 - 8*omega*y_3 - 8*omega*y_4"};
    for (std::size_t i = 0; i < table.size(); ++i) {
      EntryReport e = run_entry(p, table[i], section::p1);
      c.equal(e.p1, want[i], table[i] + " p1");
      c.equal(e.computed.at("p1_pairing_sign"), "negative", table[i] + " pairing sign");
    }
    c.equal(run_entry(p, "X1_2_4", section::p1).p1_pairing, "-24", "X1_2_4 pairing");
  });

  criterion(6, "quadratic form on H^2 at s = 0", [&](Check& c) {
    for (const auto& n : table) c.expect(h2_gram(p.algebra(n)).negative_definite_at_zero, n + " negative definite");
    EntryReport e = run_entry(p, "X1_1_3", section::gram);
    c.expect(sorted(e.gram_diagonal) == sorted({"-6", "-6", "-3/8*sqrt3"}), "X1_1_3 diagonal");
    auto g = h2_gram(p.algebra("X1_1_3")).at_zero;
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j)
        if (i != j) c.expect(g(i, j).is_zero(), "X1_1_3 off-diagonal entry");
  });

  criterion(7, "intersection signs and linking numbers", [&](Check& c) {
    LinkingReport z = run_linking(p, "z24");
    c.expect(z.boundary_ok, "z24 boundary");
    c.equal(z.intersections.size(), std::size_t(4), "z24 targets");
    for (const auto& is : z.intersections) {
      int want = is.target.rfind("N_1", 0) == 0 ? -1 : 1;
      c.expect(!is.signs.empty(), is.target + " meets C");
      for (int s : is.signs) c.expect(s == want, is.target + " sign");
    }
    c.equal(z.lk, Rational(-2), "lk over M_{2,4}/<j1,j2>");
    c.equal(run_linking(p, "x34").lk, Rational(0), "lk in M_{3,4}");
  });

  criterion(8, "formality verdicts", [&](Check& c) {
    for (const char* m : {"M_1_3", "M_1_6", "M_2_4", "M_3_4", "Y_1_3", "Y_1_6", "Y_2_4"}) {
      EntryReport e = run_entry(p, m, section::formality);
      c.expect(e.formality.verdict == Verdict::NonFormal, std::string(m) + " non-formal by the eigenvalue criterion");
      c.equal(e.computed.at("bfm_multiplicity"), "3", std::string(m) + " multiplicity");
    }
    for (const char* n : {"X1_1_3", "X1_1_6", "X2_1_3", "X2_1_6"})
      c.expect(low_b2_formality(p.algebra(n)).verdict == Verdict::Formal, std::string(n) + " low b2");
    for (const char* n : {"X1_3_4", "X2_2_4"}) {
      const ResolvedAlgebra& alg = p.algebra(n);
      NamedE4 named = named_e4(alg);
      B8Space b8 = b8_kernel(named.space);
      if (std::string(n) == "X1_3_4") {
        const LinkingCase& lc = cat.linking_case("x34");
        std::vector<std::pair<MTMap, Rational>> avg;
        for (const auto& g : group_closure({cat.family(lc.family).symmetries.at("kappa")})) avg.push_back({g, lc.weight});
        named.oracle.links = level_linking_data(p.mapping_torus(lc.family), alg, avg);
      }
      auto t = bianchi_massey(named.space, b8, named.oracle);
      c.expect(!t.values.empty(), std::string(n) + " B8 nonempty");
      for (const auto& v : t.values) c.expect(v == 0, std::string(n) + " F vanishes");
    }
    Rational lk = run_linking(p, "z24").lk;
    c.expect(triple_massey_from_linking(lk).nonvanishing, "Z_2_4 triple Massey product");
    c.expect(formality_of(p, "Z_3_4").verdict == Verdict::NonFormal, "Z_3_4 via the double cover");
    const std::vector<Verdict> column = {Verdict::Formal,    Verdict::Formal,    Verdict::Formal,
                                         Verdict::Formal,    Verdict::NonFormal, Verdict::NonFormal,
                                         Verdict::Formal,    Verdict::Formal,    Verdict::Formal};
    for (std::size_t i = 0; i < table.size(); ++i)
      c.expect(formality_of(p, table[i]).verdict == column[i], table[i] + " verdict");
  });

  criterion(9, "property suites", [&](Check& c) {
    for (auto r : {suites::snf_suite(500), suites::cyclotomic_rank_nullity_suite(500), suites::congruence_suite(200),
                   suites::intersection_suite(100)})
      c.expect(r.ok, r.detail);
    std::vector<const GradedAlgebra*> algebras;
    for (const char* m : {"M_1_3", "M_1_6", "M_2_4", "M_3_4"}) algebras.push_back(&p.mapping_torus(m).mt.algebra());
    for (const auto& e : cat.entries())
      if (e.kind != "mapping-torus") algebras.push_back(&p.algebra(e.name).algebra());
    for (const GradedAlgebra* a : algebras) {
      std::string why;
      c.expect(a->betti_palindromic(), "palindromic Betti numbers");
      c.expect(a->check_graded_commutative(&why), why);
      c.expect(a->check_associative(7, &why), why);
    }
  });

  return failed == 0 ? 0 : 1;
}
