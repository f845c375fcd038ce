// Hand-built maps shared by the unit tests (independent of the catalog file).
#pragma once

#include "artifact/torus_maps.hpp"

namespace fx {

using namespace artifact;

inline Cyclotomic u(int a, long k = 1) { return Cyclotomic::zeta(a, k); }

inline SesquilinearAffineMap rot(int a) {
  CycMatrix A(3, 3);
  A(0, 0) = u(a);
  A(1, 1) = u(a);
  A(2, 2) = u(a, -2);
  return SesquilinearAffineMap::linear(A, CycMatrix(3, 3));
}

inline SesquilinearAffineMap f() {
  CycMatrix A = CycMatrix::identity(3);
  A(1, 0) = -1;
  return SesquilinearAffineMap::linear(A, CycMatrix(3, 3));
}

inline SesquilinearAffineMap xi() {
  CycMatrix A(3, 3);
  A(0, 0) = -1;
  A(1, 1) = -1;
  A(2, 2) = 1;
  return SesquilinearAffineMap::linear(A, CycMatrix(3, 3));
}

inline SesquilinearAffineMap eta() {
  CycMatrix B(3, 3);
  B(0, 0) = -1;
  B(1, 0) = 1;
  B(1, 1) = 1;
  B(2, 2) = -1;
  return SesquilinearAffineMap::linear(CycMatrix(3, 3), B);
}

inline SesquilinearAffineMap zeta_shift(const TorusModel& T, const Cyclotomic& c) {
  SesquilinearAffineMap m = xi();
  m.t = T.to_lattice({0, 0, c});
  return m;
}

struct Setup {
  TorusModel T;
  RealAffineMap F, Xi, Eta;
};

inline Setup setup(int k, int a) {
  TorusModel T = TorusModel::standard(k);
  return {T, realify(compose(f(), rot(a), T), T), realify(xi(), T), realify(eta(), T)};
}

}  // namespace fx
