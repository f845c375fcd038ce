#pragma once

#include "artifact/intersections.hpp"
#include "artifact/resolution.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace artifact {

struct OracleGap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Verdict { Formal, NonFormal, Inconclusive };
std::string to_string(Verdict v);

struct FormalityCertificate {
  Verdict verdict = Verdict::Inconclusive;
  std::string witness_kind;  // "eigenvalue multiplicity", "Massey value", "F table", "b2 duality"
  std::string witness;
  std::vector<std::string> notes;
};

// F^* on H^n of the fiber for n = 0..m; non-formal when K^n = 0 for 1 <= n <= m-1 and 1 is a
// root of multiplicity >= 2 of the minimal polynomial on H^m.
FormalityCertificate bfm_check(const std::vector<CycMatrix>& fstar, int m);
// F^* on H^0..H^m of the torus fiber of M
std::vector<CycMatrix> torus_fiber_action(const TorusMappingTorus& M, int m);
// restriction to the forms fixed by the linear part of xi (for free quotients by translates of xi)
std::vector<CycMatrix> invariant_fiber_action(const TorusMappingTorus& M, const RealAffineMap& xi, int m);
// fiber of Y~: T^6/xi resolved; H^2 gains one class per fixed torus of xi, permuted by F
std::vector<CycMatrix> resolved_fiber_action(const TorusMappingTorus& M, const RealAffineMap& xi);

// Monomials in the degree-2 generators.
struct SymMonomialBasis {
  std::vector<std::string> labels;
  std::vector<std::array<std::size_t, 2>> sym2;  // i <= j
  std::vector<std::array<std::size_t, 4>> sym4;  // sorted

  explicit SymMonomialBasis(std::vector<std::string> generator_labels = {});
  std::size_t n() const { return labels.size(); }
  std::size_t index2(std::size_t i, std::size_t j) const;
  std::size_t index4(std::array<std::size_t, 4> m) const;
  std::string sym2_string(const CycVec& v) const;
  std::string sym4_string(const CycVec& v) const;

 private:
  std::map<std::array<std::size_t, 4>, std::size_t> index4_;
};

// product of two quadratic forms in Sym^2 coordinates
CycVec quadratic_product(const SymMonomialBasis& b, const CycVec& p, const CycVec& q);

struct E4Space {
  SymMonomialBasis mono;
  std::vector<CycVec> generators;   // degree-2 classes in the algebra's coordinates
  std::vector<CycVec> basis;        // Sym^2 coordinates
  std::vector<std::string> names;
  std::vector<std::string> groups;  // used by the reducer: same non-"N" group pairs are kept
};

// kernel of Sym^2 H^2 -> H^4, echelonized
E4Space e4_kernel(const GradedAlgebra& A, const std::vector<CycVec>& generators, const std::vector<std::string>& labels);
E4Space e4_kernel(const GradedAlgebra& A);
CycVec wedge_of(const GradedAlgebra& A, const E4Space& e, const CycVec& sym2);
// replace the basis by named elements; throws unless they form a basis of the same space
E4Space with_basis(const E4Space& e, const std::vector<CycVec>& basis, const std::vector<std::string>& names,
                   const std::vector<std::string>& groups);
// coefficient vector of x_i^2 - x_j^2, x_i x_j, ... in Sym^2 coordinates
CycVec sym2_element(const SymMonomialBasis& b, const std::vector<std::pair<Cyclotomic, std::array<std::size_t, 2>>>& terms);

// Sym^2(E^4): pairs (a, b), a <= b
struct PairBasis {
  std::size_t n = 0;
  std::vector<std::array<std::size_t, 2>> pairs;
  explicit PairBasis(std::size_t n = 0);
  std::size_t index(std::size_t a, std::size_t b) const;
};

CycVec full_symmetrization(const E4Space& e, const CycVec& x);  // x in Sym^2(E^4) coordinates
CycMatrix symmetrization_matrix(const E4Space& e);               // Sym^4 x Sym^2(E^4)

struct B8Space {
  PairBasis pairs;
  std::vector<CycVec> basis;
};
B8Space b8_kernel(const E4Space& e);

// Coordinates of x modulo the pairs that involve group "N" or two different groups.
struct Reduced {
  std::vector<std::array<std::size_t, 2>> kept;
  CycVec coeffs;
  std::string to_string(const E4Space& e) const;
};
Reduced reduce_b8(const E4Space& e, const PairBasis& pairs, const CycVec& x);

// gamma-support model. For a product element alpha^2 vanishes and gamma = 0; for the other
// elements alpha^2 = sum_r w_r tau_r^2 and gamma(e) ^ tau_r^2 = 0 unless w_r != 0.
struct OracleElement {
  bool product = false;
  std::map<std::size_t, Rational> weights;  // component -> w_r
};

// lk_M(sum W_j N_j, sum T_j N_j) = value
struct LinkingDatum {
  std::map<std::size_t, Rational> chain, target;
  Rational lk;
  std::string label;
};

struct PairingOracle {
  std::vector<OracleElement> elements;  // aligned with the E^4 basis
  std::vector<LinkingDatum> links;
  Rational scale = 8;  // integral over the resolution = scale * lk
  std::map<std::size_t, Rational> closed_shift;  // gamma(e) -> gamma(e) + c with <c, tau_r^2> = shift
  std::vector<std::string> conventions;
};

// n_ij = x_i x_j for vanishing products and m_rj = c x_r^2 - x_j^2 when x_j^2 = c x_r^2 (r the first
// generator with that square up to scale), together with their support model.
struct NamedE4 {
  E4Space space;
  PairingOracle oracle;
};
NamedE4 named_e4(const ResolvedAlgebra& alg);

// lk(N_c - N_d, N_b - N_q) for four distinct parallel components in one level, using a straight
// cobordism from N_d to N_c; keys are the H^2 indices of the exceptional classes
std::vector<LinkingDatum> level_linking_data(const TorusMappingTorus& M, const ResolvedAlgebra& alg,
                                             const std::vector<std::pair<MTMap, Rational>>& averaging);

struct BianchiMasseyTable {
  std::vector<Rational> values;  // F on each B^8 basis vector
  FormalityCertificate certificate;
};
// requires b1 = 0 of the underlying manifold (checked by the caller through the algebra)
BianchiMasseyTable bianchi_massey(const E4Space& e, const B8Space& b8, const PairingOracle& oracle);

struct MasseyFromLinking {
  Rational value;
  bool nonvanishing = false;
  std::string hypothesis;
};
MasseyFromLinking triple_massey_from_linking(const Rational& lk, const std::string& hypothesis = "");
FormalityCertificate massey_certificate(const MasseyFromLinking& m);

// b2 <= 3 and some [phi~_s] making H^2 -> H^5 an isomorphism (s = 0, 1/10, 1/100; other symbols set to 1)
FormalityCertificate low_b2_formality(const ResolvedAlgebra& alg);

}  // namespace artifact
