#pragma once

#include "artifact/exact_linalg.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace artifact {

struct NonIntegral : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CommutationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInvariant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using RatVec = std::vector<Rational>;
using CycVec = std::vector<Cyclotomic>;

struct ComplexLattice {
  Cyclotomic w1, w2;
};

// C^3 modulo a product of three planar lattices. Lattice coordinates are
// (u0,u1) for z1 = u0 w1 + u1 w2, then likewise for z2 and z3.
struct TorusModel {
  std::string name;
  std::array<ComplexLattice, 3> lattices;

  // k = 1, 2, 3 as in the catalog: hexagonal, square, and the index-2 sublattice in the first factor
  static TorusModel standard(int k);

  CycMatrix complex_basis() const;  // 3 x 6, column l = l-th lattice vector
  // 6 x 6 real matrix (rows x1,y1,x2,y2,x3,y3), columns the lattice vectors
  CycMatrix real_frame() const;
  int orientation_sign() const;
  Cyclotomic covolume() const;

  CycVec to_complex(const RatVec& u) const;
  RatVec to_lattice(const CycVec& z) const;  // throws NonIntegral if not rational
};

// z -> A z + B conj(z) + c, with c stored in lattice coordinates.
struct SesquilinearAffineMap {
  CycMatrix A = CycMatrix::identity(3);
  CycMatrix B = CycMatrix(3, 3);
  RatVec t = RatVec(6);

  static SesquilinearAffineMap identity() { return {}; }
  static SesquilinearAffineMap linear(CycMatrix a, CycMatrix b) { return {std::move(a), std::move(b), RatVec(6)}; }
  bool holomorphic() const { return B.is_zero_matrix(); }
  bool antiholomorphic() const { return A.is_zero_matrix(); }
};

SesquilinearAffineMap compose(const SesquilinearAffineMap& g, const SesquilinearAffineMap& h, const TorusModel& torus);
SesquilinearAffineMap translation_by(const CycVec& c, const TorusModel& torus);

struct RealAffineMap {
  IntMatrix M = IntMatrix::identity(6);
  RatVec t = RatVec(6);

  static RealAffineMap identity(std::size_t n = 6) { return {IntMatrix::identity(n), RatVec(n)}; }
  std::size_t dim() const { return M.rows(); }
  RatVec apply(const RatVec& x) const;  // reduced mod Z
  RatVec apply_linear(const RatVec& v) const;
  RealAffineMap inverse() const;
  std::string to_string() const;

  friend RealAffineMap operator*(const RealAffineMap& a, const RealAffineMap& b);  // a after b
  friend bool operator==(const RealAffineMap& a, const RealAffineMap& b);
  friend bool operator!=(const RealAffineMap& a, const RealAffineMap& b) { return !(a == b); }
};

RealAffineMap realify(const SesquilinearAffineMap& map, const TorusModel& torus);
RealAffineMap power(const RealAffineMap& g, long k);  // negative k allowed

struct AffineSubtorus {
  RatVec basepoint;
  IntMatrix directions;                  // n x d, saturated
  std::optional<RationalMatrix> orientation;

  std::size_t dimension() const { return directions.cols(); }
  std::size_t ambient_dim() const { return basepoint.size(); }
  bool contains(const RatVec& x) const;
  bool same_as(const AffineSubtorus& o) const;
  bool parallel_to(const AffineSubtorus& o) const;
  AffineSubtorus image(const RealAffineMap& g) const;
  // v - directions * r in Z^n; requires v in span(directions) + Z^n
  RatVec coordinates_of(const RatVec& v) const;
  std::string to_string() const;
};

bool intersects(const AffineSubtorus& a, const AffineSubtorus& b);
std::vector<AffineSubtorus> fixed_locus(const RealAffineMap& g);

// A map of R x T^6 of the form (t, p) -> (eps t, g p). On the mapping torus with
// (t, p) ~ (t + 1, F p) it descends when g F = F^eps g.
struct MTMap {
  int eps = 1;
  RealAffineMap g;

  friend MTMap operator*(const MTMap& a, const MTMap& b) { return {a.eps * b.eps, a.g * b.g}; }
  friend bool operator==(const MTMap& a, const MTMap& b) { return a.eps == b.eps && a.g == b.g; }
};

bool descends(const MTMap& h, const RealAffineMap& F);
// Descent normalizes the lift: maps differing by the deck shift (t,p)->(t+1,F^{-1}p) are equal on M.
MTMap commuting_lift(const RealAffineMap& inner);
MTMap reversing_lift(const RealAffineMap& inner, const RealAffineMap& F);  // [t,p] -> [1-t, inner p]
std::vector<MTMap> group_closure(const std::vector<MTMap>& gens, std::size_t limit = 256);

enum class Level { Zero, Half, Spans };
std::string to_string(Level l);

// A connected component of a fixed set in the mapping torus.
//  Level::Zero / Half: the slice {t} x fiber, a T^3.
//  Level::Spans: q(R x fiber); fiber is the t = 0 representative of an orbit of length s
//  under F, and the component is the mapping torus of w -> R w + r0 with period s.
struct FixedComponent {
  std::string id;
  Level level = Level::Zero;
  AffineSubtorus fiber;
  std::vector<AffineSubtorus> orbit;  // Spans only: fiber, F fiber, ..., F^{s-1} fiber
  int orbit_length = 1;
  IntMatrix return_matrix;
  RatVec return_shift;
  int genus = 1;
  std::string description;

  std::size_t dimension() const { return level == Level::Spans ? fiber.dimension() + 1 : fiber.dimension(); }
  // whether the point (t, p) with t in [0,1) lies on the component
  bool contains(const Rational& t, const RatVec& p) const;
};

std::vector<FixedComponent> mapping_torus_fixed_components(const MTMap& h, const RealAffineMap& F);

enum class SymmetryKind { Commuting, Reversing };
std::vector<FixedComponent> mapping_torus_fixed_components(SymmetryKind kind, const SesquilinearAffineMap& inner,
                                                           const SesquilinearAffineMap& F, const TorusModel& torus);

// How a symmetry carries one component onto another, in the component's own coordinates:
// w -> lin w + shift on the fiber and tau -> eps tau + const on the circle.
struct ComponentImage {
  std::size_t target = 0;
  int eps = 1;
  IntMatrix lin;
  RatVec shift;
};

std::vector<ComponentImage> symmetry_on_components(const MTMap& h, const std::vector<FixedComponent>& comps,
                                                   const RealAffineMap& F);

struct PermutationReport {
  std::vector<std::size_t> perm;
  std::vector<int> theta_sign;  // for components mapped to themselves: eps; 0 when swapped
  std::string cycles(const std::vector<FixedComponent>& comps) const;
};
PermutationReport permutation_report(const std::vector<ComponentImage>& images);

}  // namespace artifact
