// Mapping tori and their quotients built directly from the fixtures.
#pragma once

#include "artifact/resolution.hpp"
#include "fixtures.hpp"

namespace fx {

struct Built {
  TorusMappingTorus M;
  MTMap kappa, iota, j1, j2;
};

inline Built built(int k, int a) {
  auto S = setup(k, a);
  TorusMappingTorus M(S.T, S.F);
  Built b{M, reversing_lift(S.Eta, S.F), commuting_lift(S.Xi), {}, {}};
  if (k >= 2) {  // the half shifts are lattice-rational only on the square torus
    b.j1 = commuting_lift(realify(zeta_shift(S.T, Rational(1, 2)), S.T));
    b.j2 = commuting_lift(realify(zeta_shift(S.T, Cyclotomic::imag_unit() * Cyclotomic(Rational(1, 2))), S.T));
  }
  return b;
}

inline ResolvedAlgebra x1(const Built& b) { return resolve_orbifold(b.M, group_closure({b.kappa}), "X1", {}); }
inline ResolvedAlgebra z(const Built& b) { return resolve_orbifold(b.M, group_closure({b.kappa, b.j1, b.j2}), "Z", {}); }
inline ResolvedAlgebra y(const Built& b) { return resolve_orbifold(b.M, group_closure({b.iota}), "Y", {}, "s1"); }
inline ResolvedAlgebra x2(const Built& b) { return resolve_second(b.M, y(b), b.iota, b.kappa, "X2", {}); }

}  // namespace fx
