#pragma once

#include "artifact/graded_algebra.hpp"
#include "artifact/mt_cohomology.hpp"
#include "artifact/torus_maps.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace artifact {

// Cohomology of one fixed piece: a flat torus, the mapping torus of a torus
// automorphism, or Sigma_g x S^1.
class PieceCohomology {
 public:
  enum class Kind { Torus, MappingTorus, SurfaceCircle };

  static PieceCohomology torus(const std::vector<std::string>& gens);
  // monodromy given as the pullback on fiber generators (column i = F^* g_i)
  static PieceCohomology mapping_torus(const CycMatrix& monodromy, const std::vector<std::string>& gens);
  // basis 1; a_i, b_i, e; omega, a_i^e, b_i^e; omega^e with a_i b_i = omega and integral of omega^e = 1
  static PieceCohomology surface_circle(unsigned genus);

  Kind kind() const { return kind_; }
  unsigned genus() const { return genus_; }
  const GradedAlgebra& algebra() const { return alg_; }
  GradedAlgebra& algebra() { return alg_; }

  // class of an m-form on the torus, or of an invariant fiber form
  CycVec class_of_form(unsigned m, const CycVec& form) const;
  // class of delta*(form) for an m-form on the fiber (mapping tori only)
  CycVec class_of_delta(unsigned m, const CycVec& form) const;
  // pullback along (tau, w) -> (eps tau + c, g w) from target; columns = images of target's basis
  CycMatrix pullback_from(const PieceCohomology& target, int eps, const CycMatrix& gen_pullback, unsigned m) const;

 private:
  Kind kind_ = Kind::Torus;
  unsigned n_ = 0, genus_ = 1;
  std::shared_ptr<const MappingTorusCohomology> mt_;
  GradedAlgebra alg_;
};

using SymMatrix = std::vector<SymVec>;
SymVec operator*(const CycMatrix& m, const SymVec& v);
// coordinates of a symbolic vector in a sub-basis; throws if outside the span
SymVec sym_coordinates(const std::vector<CycVec>& basis, const SymVec& x);
SymPoly sym_determinant(const SymMatrix& m);

// H^*(X) of an orbifold, seen inside an ambient algebra (H^*(M), or H^*(Y~) for a second stage).
struct OrbifoldBase {
  std::string name;
  GradedAlgebra algebra;
  std::vector<std::vector<CycVec>> ambient;  // per degree, basis in ambient coordinates
  std::size_t group_order = 1;
  SymVec phi;  // [phi] in H^3
  std::vector<std::vector<std::string>> display_labels;
  std::vector<CycMatrix> to_display;  // per degree: display coordinates of the basis
};

struct ComponentLabel {
  std::string id;
  Rational t;
  RatVec point;
  int theta_sign = 1;  // theta = sign * dt on components that run along t
};

// A connected component L of the singular locus of X, or of the fixed locus of a lifted involution.
struct SingularComponent {
  std::string id;
  int genus = 1;
  GradedAlgebra cohomology;              // H^*(L)
  std::vector<CycMatrix> restriction;    // [d]: H^d(X) -> H^d(L)
  CycVec thom;                           // PD[L] in H^4(X)
  SymVec theta;                          // class in H^1(L)
  CycVec omega;                          // unit area class in H^2(L); empty in genus 1
  Cyclotomic volume;                     // integral of phi over L
  std::string description;

  // geometry behind the component (first stage only)
  std::optional<FixedComponent> piece;
  std::shared_ptr<const PieceCohomology> piece_cohomology;
  std::vector<std::vector<CycVec>> piece_basis;  // basis of H^*(L) inside H^*(piece)
  std::size_t stabilizer_set = 1, stabilizer_point = 1;
};

// H^*(X~) = H^*(X) + sum_j H^{*-2}(L_j) x_j with the products of the resolution.
class ResolvedAlgebra {
 public:
  ResolvedAlgebra(OrbifoldBase base, std::vector<SingularComponent> comps, std::string parameter,
                  std::string symbol = "x");

  const std::string& name() const { return base_.name; }
  const GradedAlgebra& algebra() const { return alg_; }
  const OrbifoldBase& base() const { return base_; }
  const std::vector<SingularComponent>& components() const { return comps_; }
  const std::string& parameter() const { return parameter_; }
  const std::string& symbol() const { return symbol_; }
  std::vector<std::size_t> betti() const { return alg_.betti(); }

  std::size_t offset(std::size_t j, int d) const;  // start of the gamma x_j block in H^d
  CycVec from_base(int d, const CycVec& x) const;
  CycVec from_component(std::size_t j, int d, const CycVec& gamma) const;
  CycVec base_part(int d, const CycVec& x) const;
  CycVec component_part(std::size_t j, int d, const CycVec& x) const;
  // push-forward H^k(L_j) -> H^{k+4}(X)
  CycVec gysin(std::size_t j, int k, const CycVec& beta) const;

  // [phi~_t] = rho^*[phi] - s sum_j [theta_j] x_j
  const SymVec& phi() const { return phi_; }

  const std::vector<std::string>& display_labels(int d) const { return display_labels_.at(d); }
  const CycMatrix& to_display(int d) const { return to_display_.at(d); }
  std::string format(int d, const CycVec& x) const;
  std::string format(int d, const SymVec& x) const;
  // inverse of format on sums of display labels with cyclotomic coefficients
  CycVec parse(int d, const std::string& text) const;

 private:
  OrbifoldBase base_;
  std::vector<SingularComponent> comps_;
  std::string parameter_, symbol_;
  GradedAlgebra alg_;
  std::vector<std::vector<std::size_t>> offsets_;  // [j][d]
  SymVec phi_;
  std::vector<std::vector<std::string>> display_labels_;
  std::vector<CycMatrix> to_display_;
};

// H^*(M)^G with integral (1/|G|) integral_M.
OrbifoldBase orbifold_base(const TorusMappingTorus& M, const std::vector<MTMap>& group, const std::string& name);

// Singular components of M/G (assumed Z_2 isotropy along 3-dimensional strata). Labels, when given,
// name components by a point they contain; otherwise components are numbered in discovery order.
std::vector<SingularComponent> orbifold_components(const TorusMappingTorus& M, const std::vector<MTMap>& group,
                                                   const OrbifoldBase& base, const std::vector<ComponentLabel>& labels,
                                                   const std::string& prefix = "L");

ResolvedAlgebra resolve_orbifold(const TorusMappingTorus& M, const std::vector<MTMap>& group, const std::string& name,
                                 const std::vector<ComponentLabel>& labels, const std::string& parameter = "s",
                                 const std::string& prefix = "L");

// Action on H^*(Y~) of the lift of kappa, where Y~ resolves M/<iota> (per degree).
std::vector<CycMatrix> lifted_action(const TorusMappingTorus& M, const ResolvedAlgebra& Ytilde, const MTMap& kappa);

// Resolution of Y~/kappa~ along the components of Fix(kappa~), strict transforms of
// (Fix(kappa) u Fix(iota kappa))/iota, each of the form Sigma_g x S^1.
ResolvedAlgebra resolve_second(const TorusMappingTorus& M, const ResolvedAlgebra& Ytilde, const MTMap& iota,
                               const MTMap& kappa, const std::string& name, const std::vector<ComponentLabel>& labels,
                               const std::string& parameter = "s2");

// p1(X~) = rho^* p1(X) + sum_j (-3 PD[L_j] + (4 - 4 g_j) omega_j x_j)
CycVec pontryagin(const ResolvedAlgebra& alg, const CycVec& base_p1);
CycVec pontryagin(const ResolvedAlgebra& alg);  // base term zero
// p1 of the second stage: the first stage's class restricted to the invariants plus the new terms
CycVec pontryagin_second(const ResolvedAlgebra& first, const ResolvedAlgebra& second);
SymPoly pont_pairing(const ResolvedAlgebra& alg, const CycVec& p1);

struct GramReport {
  SymMatrix gram;                  // integral of a b phi~ over H^2
  CycMatrix at_zero;               // all deformation parameters set to 0
  bool negative_definite_at_zero = false;
  std::vector<SymPoly> leading_minors;  // (-1)^k det of the k x k leading block
};
GramReport h2_gram(const ResolvedAlgebra& alg);
bool negative_definite(const CycMatrix& m);

// true when a finite pi_1 and b3 > 1 rule out a locally trivial fibration over a 3-manifold
bool check_p3(std::size_t b3, bool pi1_finite);

}  // namespace artifact
