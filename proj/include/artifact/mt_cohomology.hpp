#pragma once

#include "artifact/graded_algebra.hpp"
#include "artifact/torus_maps.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace artifact {

struct IllDefined : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exterior algebra on n generators; a monomial is a bitmask, and degree-m forms are
// coordinate vectors over the degree-m monomials listed in lexicographic order.
namespace ext {

const std::vector<unsigned>& masks(unsigned n, unsigned m);
std::size_t index_of(unsigned n, unsigned mask);
int reorder_sign(unsigned a, unsigned b);  // g_a ^ g_b = sign * g_{a|b}; 0 on overlap
CycVec wedge(unsigned n, unsigned a, const CycVec& x, unsigned b, const CycVec& y);
// Pullback on degree m. images is n_src x n_tgt, column i = pullback of target generator i.
CycMatrix induced(const CycMatrix& images, unsigned m);
std::size_t binomial(unsigned n, unsigned k);

}  // namespace ext

// Forms on T^6 written in dz1, dz1b, dz2, dz2b, dz3, dz3b (bits 0..5).
class ComplexForms {
 public:
  explicit ComplexForms(TorusModel torus);

  const TorusModel& torus() const { return torus_; }
  static std::string monomial_label(unsigned mask);  // e.g. "dz_{12b}"
  static std::pair<unsigned, unsigned> bidegree(unsigned mask);
  // conj(dz_S) = sign * dz_{S'}
  static std::pair<unsigned, int> conjugate(unsigned mask);
  static CycVec conjugate(unsigned m, const CycVec& form);

  // Real basis of degree-m forms: {Re w, Im w} for non-self-conjugate monomials w (the
  // lexicographically smaller of w, conj w), and w or i w for self-conjugate ones.
  const CycMatrix& real_basis(unsigned m) const { return real_basis_[m]; }
  const std::vector<std::string>& real_labels(unsigned m) const { return real_labels_[m]; }

  CycMatrix pullback_generators(const RealAffineMap& g) const;
  static CycMatrix pullback_generators(const SesquilinearAffineMap& g);
  // restriction of the six generators to a subtorus: d x 6
  CycMatrix restriction_generators(const IntMatrix& directions) const;
  Cyclotomic top_integral() const;  // integral over T^6 of dz_{1 1b 2 2b 3 3b}
  // volume form dx1 dy1 dx2 dy2 dx3 dy3 in monomial coordinates
  CycVec volume_form() const;

 private:
  TorusModel torus_;
  CycMatrix W_;  // generator k = sum_l W(k,l) du_l
  std::vector<CycMatrix> real_basis_;
  std::vector<std::vector<std::string>> real_labels_;
};

struct PullbackAction {
  unsigned p = 0, q = 0;          // bidegree of the forms being pulled back
  unsigned src_p = 0, src_q = 0;  // bidegree of the result
  bool conjugating = false;
  CycMatrix matrix;               // columns: images of the (p,q) monomials
  std::vector<std::string> row_labels, col_labels;
};

PullbackAction pullback_on_pq(const SesquilinearAffineMap& map, unsigned p, unsigned q);

struct FiberModel {
  unsigned n = 0;
  CycMatrix monodromy;                         // n x n: column i = F^* g_i
  std::vector<CycMatrix> preferred;            // per degree; empty means standard monomials
  std::vector<std::vector<std::string>> preferred_labels;
  Cyclotomic top_integral = 1;                 // integral over the fiber of the top monomial
};

FiberModel standard_fiber(unsigned n, const CycMatrix& monodromy, const std::string& prefix = "dw");
FiberModel complex_fiber(const ComplexForms& forms, const RealAffineMap& F);

// H^m(N_F) = K^m + delta* C^{m-1}, K/C the kernel/cokernel of F^* - Id on fiber forms.
class MappingTorusCohomology {
 public:
  explicit MappingTorusCohomology(FiberModel fiber);

  const FiberModel& fiber() const { return fiber_; }
  unsigned fiber_dim() const { return fiber_.n; }
  const CycMatrix& pullback(unsigned m) const { return pull_[m]; }
  const std::vector<CycVec>& K(unsigned m) const { return K_[m]; }
  const std::vector<CycVec>& C(unsigned m) const { return C_[m]; }
  const std::vector<std::string>& K_labels(unsigned m) const { return K_labels_[m]; }
  const std::vector<std::string>& C_labels(unsigned m) const { return C_labels_[m]; }
  const GradedAlgebra& algebra() const { return alg_; }
  std::vector<std::size_t> betti() const { return alg_.betti(); }
  std::size_t k_dim(unsigned m) const { return m <= fiber_.n ? K_[m].size() : 0; }
  std::size_t c_dim(int m) const { return m >= 0 && static_cast<unsigned>(m) <= fiber_.n ? C_[m].size() : 0; }

  // coordinates in H^m of an invariant m-form
  CycVec class_of_K(unsigned m, const CycVec& form) const;
  // coordinates in H^{m+1} of delta*(form) for an m-form
  CycVec class_of_delta(unsigned m, const CycVec& form) const;
  // C-coefficients of an m-form modulo the image of F^* - Id
  CycVec project_C(unsigned m, const CycVec& form) const;
  // the m-form behind basis element i of H^m and whether it sits behind delta*
  std::pair<bool, CycVec> representative(unsigned m, std::size_t i) const;

  // Action on H^m of a map (t,p) -> (eps t, g p) with the given generator pullback.
  CycMatrix action(int eps, const CycMatrix& gen_pullback, unsigned m) const;
  // Same for a map from this mapping torus to target; columns are images of target's basis.
  CycMatrix pullback_from(const MappingTorusCohomology& target, int eps, const CycMatrix& gen_pullback,
                          unsigned m) const;

 private:
  FiberModel fiber_;
  std::vector<CycMatrix> pull_;
  std::vector<std::vector<CycVec>> K_, C_;
  std::vector<std::vector<std::string>> K_labels_, C_labels_;
  std::vector<CycMatrix> K_inv_, C_inv_;  // coordinate extractors
  std::vector<std::size_t> image_rank_;
  GradedAlgebra alg_;
};

struct KmCm {
  std::vector<std::string> K, C;
};
KmCm km_cm(const MappingTorusCohomology& mt, unsigned m);
std::vector<std::size_t> mapping_torus_betti(const MappingTorusCohomology& mt);

// Cohomology of the mapping torus of F on T^6 with the real monomial conventions.
struct TorusMappingTorus {
  ComplexForms forms;
  RealAffineMap F;
  MappingTorusCohomology mt;

  TorusMappingTorus(const TorusModel& torus, const RealAffineMap& F);
  // action of a symmetry on H^m
  CycMatrix action(const MTMap& h, unsigned m) const;
  // class [Re dz_123] + delta*(average of omega_t) of the G2 form
  CycVec phi_class() const;
  // delta*(volume form): integrates to the covolume
  CycVec volume_class() const;
};

struct InducedGroupAction {
  std::string label;
  std::vector<CycMatrix> blocks;  // per degree, on the K + delta*C basis
};

InducedGroupAction group_action_on_H(const TorusMappingTorus& M, const std::string& label, const MTMap& h);
InducedGroupAction group_action_on_H(const TorusMappingTorus& M, const std::string& label, SymmetryKind kind,
                                     const SesquilinearAffineMap& gen);
std::vector<CycVec> invariants(const std::vector<InducedGroupAction>& actions, const MappingTorusCohomology& mt, unsigned m);

AbelianGroup h1_integer(const RealAffineMap& F);

struct H1ModP {
  long p = 0;
  std::vector<std::string> labels;           // c_0 then fiber generators c_{j,1}, c_{j,2}
  std::vector<std::vector<long>> action;     // rows; column i = image of basis vector i
  std::vector<std::vector<long>> fixed;      // basis of the invariant subspace
  std::string fixed_string() const;
};

// Invariants of a symmetry on H_1(N_F; Z_p). The loop c_0 runs along t through the base point 0 at the
// level fixed by the symmetry (t = 0 for commuting maps, t = 1/2 for reversing ones).
H1ModP h1_modp_quotient_invariants(const RealAffineMap& F, const MTMap& h, long p);

}  // namespace artifact
