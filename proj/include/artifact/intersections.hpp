#pragma once

#include "artifact/torus_maps.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace artifact {

struct NotTransverse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Oriented affine piece in the mapping torus R x T^6 / (t, z) ~ (t + 1, F z): the points
// (t + r dt, base + r velocity + D s) with s in R^d and, for a swept piece, r in [r0, r1].
// Coordinates are t followed by the six lattice coordinates; the orientation is
// sign * (sweep vector, columns of D).
struct AffinePiece {
  Rational t;
  RatVec base = RatVec(6);
  IntMatrix directions = IntMatrix(6, 0);
  bool swept = false;
  Rational r0, r1, dt;
  RatVec velocity = RatVec(6);
  int sign = 1;

  static AffinePiece level(const Rational& t, RatVec base, IntMatrix directions, int sign = 1);
  // t-slab: r is the time itself on [t0, t1]; base is the fiber point at time t0
  static AffinePiece t_slab(const Rational& t0, const Rational& t1, RatVec base, RatVec velocity, IntMatrix directions,
                            int sign = 1);
  // parameter slab inside the level t: base moves by r velocity for r in [0, 1]
  static AffinePiece level_slab(const Rational& t, RatVec base, RatVec velocity, IntMatrix directions, int sign = 1);

  std::size_t dimension() const { return directions.cols() + (swept ? 1 : 0); }
  std::pair<Rational, Rational> t_range() const;
  RationalMatrix frame() const;  // 7 x dimension, oriented
  AffinePiece face(bool end) const;  // level piece at r1 (end) or r0
  std::string to_string() const;
};

// formal sum of oriented pieces (signs live in the pieces)
struct AffineCycle {
  std::string name;
  std::vector<AffinePiece> pieces;

  AffineCycle operator-() const;
  friend AffineCycle operator+(AffineCycle a, const AffineCycle& b);
};

struct Cobordism {
  std::vector<AffinePiece> pieces;
  AffineCycle boundary;  // as declared by whoever built the slabs
};

struct IntersectionPoint {
  Rational t;
  RatVec point;
  int sign = 0;
};

// image of the piece under (t, p) -> (eps t, g p)
AffinePiece image(const AffinePiece& p, const MTMap& h);
AffineCycle image(const AffineCycle& c, const MTMap& h);
Cobordism image(const Cobordism& c, const MTMap& h);
// the same piece described from the chart t + n
AffinePiece shifted(const AffinePiece& p, long n, const RealAffineMap& F);

// Transverse intersection of two pieces of complementary dimension; signs compare the frame
// (T a, T b) with the ambient orientation (dt, x1, y1, x2, y2, x3, y3).
std::vector<IntersectionPoint> intersection_points(const TorusModel& T, const RealAffineMap& F, const AffinePiece& a,
                                                   const AffinePiece& b);
std::vector<IntersectionPoint> intersection_points(const TorusModel& T, const RealAffineMap& F, const AffineCycle& a,
                                                   const AffineCycle& b);
long intersection_number(const TorusModel& T, const RealAffineMap& F, const AffineCycle& a, const AffineCycle& b);

// Boundary of the slabs with the outward-normal-first orientation, interior faces cancelled.
AffineCycle geometric_boundary(const Cobordism& c, const RealAffineMap& F);
// homology class in the level t: Pluecker coordinates of the oriented direction lattices
std::vector<Int> level_class(const AffineCycle& c, const RealAffineMap& F, const Rational& t);
bool boundary_class_check(const Cobordism& c, const AffineCycle& target, const RealAffineMap& F, const Rational& t);
// whether the declared boundary agrees piece by piece with the geometric one
bool boundary_matches(const Cobordism& c, const RealAffineMap& F);

// scale * sum_g w_g #(g(C) . target): the linking number computed from a primitive averaged
// over the given maps.
Rational linking_number(const TorusModel& T, const RealAffineMap& F, const Cobordism& c, const AffineCycle& target,
                        const std::vector<std::pair<MTMap, Rational>>& averaging, const Rational& scale = 1);

// +1 / -1 as Re(dz_123) is positive / negative on the oriented 3-frame, 0 if it vanishes
int calibrated_sign(const TorusModel& T, const IntMatrix& directions);

}  // namespace artifact
