#include "artifact/torus_maps.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace artifact {

namespace {

Cyclotomic im(const Cyclotomic& z) { return z.imag_part(); }

CycMatrix conj(const CycMatrix& m) {
  CycMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j).conj();
  return c;
}

CycVec conj(const CycVec& v) {
  CycVec c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i].conj();
  return c;
}

CycVec add(CycVec a, const CycVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

RatVec sub(RatVec a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

IntMatrix rational_to_int(const RationalMatrix& m, const char* what) {
  try {
    return to_int_matrix(m);
  } catch (const std::domain_error&) {
    throw NonIntegral(what);
  }
}

}  // namespace

// ---------------------------------------------------------------- TorusModel

TorusModel TorusModel::standard(int k) {
  Cyclotomic one(1), i = Cyclotomic::imag_unit(), w = Cyclotomic::zeta(3);
  ComplexLattice g1{one, w}, g2{one, i}, g3{one + i, one - i};
  switch (k) {
    case 1: return {"T6_1", {g1, g1, g1}};
    case 2: return {"T6_2", {g2, g2, g2}};
    case 3: return {"T6_3", {g3, g2, g2}};
  }
  throw std::invalid_argument("TorusModel::standard: k must be 1, 2 or 3");
}

CycMatrix TorusModel::complex_basis() const {
  CycMatrix z(3, 6);
  for (std::size_t j = 0; j < 3; ++j) {
    z(j, 2 * j) = lattices[j].w1;
    z(j, 2 * j + 1) = lattices[j].w2;
  }
  return z;
}

CycMatrix TorusModel::real_frame() const {
  CycMatrix r(6, 6);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto& L = lattices[j];
    r(2 * j, 2 * j) = L.w1.real_part();
    r(2 * j + 1, 2 * j) = L.w1.imag_part();
    r(2 * j, 2 * j + 1) = L.w2.real_part();
    r(2 * j + 1, 2 * j + 1) = L.w2.imag_part();
  }
  return r;
}

int TorusModel::orientation_sign() const { return determinant(real_frame()).real_sign(); }

Cyclotomic TorusModel::covolume() const {
  Cyclotomic d = determinant(real_frame());
  return d.real_sign() < 0 ? -d : d;
}

CycVec TorusModel::to_complex(const RatVec& u) const {
  CycVec z(3);
  for (std::size_t j = 0; j < 3; ++j) z[j] = Cyclotomic(u[2 * j]) * lattices[j].w1 + Cyclotomic(u[2 * j + 1]) * lattices[j].w2;
  return z;
}

RatVec TorusModel::to_lattice(const CycVec& z) const {
  RatVec u(6);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto& L = lattices[j];
    Cyclotomic x = im(L.w2.conj() * z[j]) / im(L.w2.conj() * L.w1);
    Cyclotomic y = im(L.w1.conj() * z[j]) / im(L.w1.conj() * L.w2);
    if (!x.is_rational() || !y.is_rational()) throw NonIntegral("point has irrational lattice coordinates");
    u[2 * j] = x.rational_value();
    u[2 * j + 1] = y.rational_value();
  }
  return u;
}

// ---------------------------------------------------------------- sesquilinear maps

SesquilinearAffineMap compose(const SesquilinearAffineMap& g, const SesquilinearAffineMap& h, const TorusModel& torus) {
  SesquilinearAffineMap r;
  r.A = g.A * h.A + g.B * conj(h.B);
  r.B = g.A * h.B + g.B * conj(h.A);
  CycVec ch = torus.to_complex(h.t), cg = torus.to_complex(g.t);
  CycVec c = add(add(g.A * ch, g.B * conj(ch)), cg);
  r.t = torus.to_lattice(c);
  return r;
}

SesquilinearAffineMap translation_by(const CycVec& c, const TorusModel& torus) {
  SesquilinearAffineMap m;
  m.t = torus.to_lattice(c);
  return m;
}

RealAffineMap realify(const SesquilinearAffineMap& map, const TorusModel& torus) {
  CycMatrix Z = torus.complex_basis();
  RationalMatrix M(6, 6);
  for (std::size_t l = 0; l < 6; ++l) {
    CycVec b = Z.column(l);
    CycVec img = add(map.A * b, map.B * conj(b));
    RatVec u = torus.to_lattice(img);
    for (std::size_t i = 0; i < 6; ++i) M(i, l) = u[i];
  }
  RealAffineMap r;
  r.M = rational_to_int(M, "map does not preserve the lattice");
  r.t = reduce_mod_one(map.t);
  return r;
}

// ---------------------------------------------------------------- real affine maps

RatVec RealAffineMap::apply_linear(const RatVec& v) const {
  RatVec out(v.size());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0) out[i] += Rational(M(i, j)) * v[j];
  return out;
}

RatVec RealAffineMap::apply(const RatVec& x) const {
  RatVec y = apply_linear(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += t[i];
  return reduce_mod_one(std::move(y));
}

RealAffineMap RealAffineMap::inverse() const {
  auto inv = inverse_matrix(to_rational_matrix(M));
  if (!inv) throw std::domain_error("RealAffineMap::inverse: singular");
  RealAffineMap r;
  r.M = rational_to_int(*inv, "inverse is not integral");
  r.t = r.apply_linear(t);
  for (auto& x : r.t) x = -x;
  r.t = reduce_mod_one(r.t);
  return r;
}

RealAffineMap operator*(const RealAffineMap& a, const RealAffineMap& b) {
  RealAffineMap r;
  r.M = a.M * b.M;
  r.t = a.apply_linear(b.t);
  for (std::size_t i = 0; i < r.t.size(); ++i) r.t[i] += a.t[i];
  r.t = reduce_mod_one(r.t);
  return r;
}

bool operator==(const RealAffineMap& a, const RealAffineMap& b) {
  if (a.M != b.M) return false;
  for (std::size_t i = 0; i < a.t.size(); ++i)
    if (!is_integer(a.t[i] - b.t[i])) return false;
  return true;
}

std::string RealAffineMap::to_string() const {
  std::ostringstream os;
  os << "M=" << M.to_string() << " t=(";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << artifact::to_string(t[i]);
  os << ")";
  return os.str();
}

RealAffineMap power(const RealAffineMap& g, long k) {
  RealAffineMap base = k < 0 ? g.inverse() : g;
  RealAffineMap r = RealAffineMap::identity(g.dim());
  for (long i = 0; i < std::labs(k); ++i) r = base * r;
  return r;
}

// ---------------------------------------------------------------- subtori

bool AffineSubtorus::contains(const RatVec& x) const { return same_coset(x, basepoint, directions); }

bool AffineSubtorus::parallel_to(const AffineSubtorus& o) const {
  if (dimension() != o.dimension()) return false;
  if (dimension() == 0) return true;
  return rank(to_rational_matrix(hstack(directions, o.directions))) == dimension();
}

bool AffineSubtorus::same_as(const AffineSubtorus& o) const { return parallel_to(o) && contains(o.basepoint); }

AffineSubtorus AffineSubtorus::image(const RealAffineMap& g) const {
  AffineSubtorus s;
  s.basepoint = g.apply(basepoint);
  s.directions = g.M * directions;
  if (orientation) s.orientation = to_rational_matrix(g.M) * *orientation;
  return s;
}

RatVec AffineSubtorus::coordinates_of(const RatVec& v) const {
  std::size_t n = v.size(), d = dimension();
  RatVec r(d);
  if (d == 0) {
    for (const auto& x : v)
      if (!is_integer(x)) throw std::domain_error("coordinates_of: vector not in the subtorus");
    return r;
  }
  SmithForm sf = smith_normal_form(directions);
  if (sf.rank() != d) throw std::domain_error("coordinates_of: directions not of full rank");
  auto diag = sf.diagonal();
  RatVec w(d);
  for (std::size_t i = 0; i < n; ++i) {
    Rational ui = 0;
    for (std::size_t j = 0; j < n; ++j) ui += Rational(sf.U(i, j)) * v[j];
    if (i < d)
      w[i] = ui / Rational(diag[i]);
    else if (!is_integer(ui))
      throw std::domain_error("coordinates_of: vector not in the subtorus");
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r[i] += Rational(sf.V(i, j)) * w[j];
  return r;
}

std::string AffineSubtorus::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < basepoint.size(); ++i) os << (i ? "," : "") << artifact::to_string(basepoint[i]);
  os << ") + span" << directions.transpose().to_string();
  return os.str();
}

bool intersects(const AffineSubtorus& a, const AffineSubtorus& b) {
  return same_coset(a.basepoint, b.basepoint, hstack(a.directions, b.directions));
}

std::vector<AffineSubtorus> fixed_locus(const RealAffineMap& g) {
  std::size_t n = g.dim();
  IntMatrix m = g.M - IntMatrix::identity(n);
  RatVec rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -g.t[i];
  auto sol = solve_congruence(m, rhs);
  std::vector<AffineSubtorus> out;
  if (!sol) return out;
  for (auto& p : sol->basepoints) out.push_back({p, sol->directions, std::nullopt});
  return out;
}

// ---------------------------------------------------------------- mapping tori

bool descends(const MTMap& h, const RealAffineMap& F) {
  RealAffineMap Fe = h.eps > 0 ? F : F.inverse();
  return h.g * F == Fe * h.g;
}

MTMap commuting_lift(const RealAffineMap& inner) { return {1, inner}; }

MTMap reversing_lift(const RealAffineMap& inner, const RealAffineMap& F) { return {-1, F.inverse() * inner}; }

std::vector<MTMap> group_closure(const std::vector<MTMap>& gens, std::size_t limit) {
  std::size_t n = gens.empty() ? 6 : gens[0].g.dim();
  std::vector<MTMap> elems{{1, RealAffineMap::identity(n)}};
  std::deque<std::size_t> todo{0};
  while (!todo.empty()) {
    MTMap cur = elems[todo.front()];
    todo.pop_front();
    for (const auto& s : gens) {
      MTMap nxt = s * cur;
      if (std::find(elems.begin(), elems.end(), nxt) != elems.end()) continue;
      if (elems.size() >= limit) throw std::runtime_error("group_closure: group too large");
      elems.push_back(nxt);
      todo.push_back(elems.size() - 1);
    }
  }
  return elems;
}

std::string to_string(Level l) {
  switch (l) {
    case Level::Zero: return "t=0";
    case Level::Half: return "t=1/2";
    case Level::Spans: return "spans t";
  }
  return "?";
}

bool FixedComponent::contains(const Rational& t, const RatVec& p) const {
  switch (level) {
    case Level::Zero: return t == 0 && fiber.contains(p);
    case Level::Half: return t == Rational(1, 2) && fiber.contains(p);
    case Level::Spans:
      for (const auto& o : orbit)
        if (o.contains(p)) return true;
      return false;
  }
  return false;
}

namespace {

// integer matrix G with D2 G = L D1 (both saturated of the same rank)
IntMatrix transfer_matrix(const IntMatrix& L, const IntMatrix& D1, const IntMatrix& D2) {
  RationalMatrix target = to_rational_matrix(L * D1), D = to_rational_matrix(D2);
  RationalMatrix G(D2.cols(), D1.cols());
  for (std::size_t c = 0; c < D1.cols(); ++c) {
    auto sol = solve_linear(D, target.column(c));
    if (!sol) throw NotInvariant("image direction outside the target subtorus");
    for (std::size_t r = 0; r < D2.cols(); ++r) G(r, c) = (*sol)[r];
  }
  return rational_to_int(G, "transfer matrix not integral");
}

std::string describe_return(const IntMatrix& R) {
  std::size_t d = R.rows();
  if (R == IntMatrix::identity(d)) return "T^" + std::to_string(d + 1);
  IntMatrix minus = IntMatrix::identity(d) * Int(-1);
  if (R == minus) return "mapping torus of -Id";
  return "mapping torus of " + R.to_string();
}

FixedComponent level_component(const AffineSubtorus& s, Level level) {
  FixedComponent c;
  c.level = level;
  c.fiber = s;
  c.return_matrix = IntMatrix::identity(s.dimension());
  c.return_shift = RatVec(s.dimension());
  c.description = "T^" + std::to_string(s.dimension()) + " at " + to_string(level);
  return c;
}

}  // namespace

std::vector<FixedComponent> mapping_torus_fixed_components(const MTMap& h, const RealAffineMap& F) {
  if (!descends(h, F)) throw CommutationFailure("symmetry does not descend to the mapping torus");
  std::vector<FixedComponent> out;
  if (h.eps < 0) {
    for (const auto& s : fixed_locus(h.g)) out.push_back(level_component(s, Level::Zero));
    for (const auto& s : fixed_locus(F * h.g)) out.push_back(level_component(s, Level::Half));
  } else {
    auto subs = fixed_locus(h.g);
    std::size_t n = subs.size();
    std::vector<std::size_t> next(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      AffineSubtorus img = subs[i].image(F);
      for (std::size_t j = 0; j < n; ++j)
        if (img.same_as(subs[j])) next[i] = j;
      if (next[i] == n) throw CommutationFailure("monodromy does not permute the fixed subtori");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i]) continue;
      FixedComponent c;
      c.level = Level::Spans;
      c.fiber = subs[i];
      for (std::size_t j = i; !seen[j]; j = next[j]) {
        seen[j] = true;
        c.orbit.push_back(c.orbit.empty() ? subs[i] : c.orbit.back().image(F));
      }
      c.orbit_length = static_cast<int>(c.orbit.size());
      RealAffineMap Fs = power(F, c.orbit_length);
      c.return_matrix = transfer_matrix(Fs.M, c.fiber.directions, c.fiber.directions);
      c.return_shift = c.fiber.coordinates_of(sub(Fs.apply(c.fiber.basepoint), c.fiber.basepoint));
      c.description = describe_return(c.return_matrix);
      out.push_back(std::move(c));
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = "C" + std::to_string(i + 1);
  return out;
}

std::vector<FixedComponent> mapping_torus_fixed_components(SymmetryKind kind, const SesquilinearAffineMap& inner,
                                                           const SesquilinearAffineMap& F, const TorusModel& torus) {
  RealAffineMap f = realify(F, torus), g = realify(inner, torus);
  MTMap h = kind == SymmetryKind::Commuting ? commuting_lift(g) : reversing_lift(g, f);
  return mapping_torus_fixed_components(h, f);
}

std::vector<ComponentImage> symmetry_on_components(const MTMap& h, const std::vector<FixedComponent>& comps,
                                                   const RealAffineMap& F) {
  std::vector<ComponentImage> out;
  for (const auto& c : comps) {
    ComponentImage im;
    im.eps = h.eps;
    bool found = false;
    if (c.level == Level::Spans) {
      AffineSubtorus img = c.fiber.image(h.g);
      for (std::size_t j = 0; j < comps.size() && !found; ++j) {
        if (comps[j].level != Level::Spans) continue;
        for (std::size_t i = 0; i < comps[j].orbit.size() && !found; ++i) {
          if (!img.same_as(comps[j].orbit[i])) continue;
          RealAffineMap m = power(F, -static_cast<long>(i)) * h.g;
          const auto& tgt = comps[j].fiber;
          im.target = j;
          im.lin = transfer_matrix(m.M, c.fiber.directions, tgt.directions);
          im.shift = tgt.coordinates_of(sub(m.apply(c.fiber.basepoint), tgt.basepoint));
          found = true;
        }
      }
    } else {
      RealAffineMap m = (c.level == Level::Half && h.eps < 0) ? F * h.g : h.g;
      AffineSubtorus img = c.fiber.image(m);
      for (std::size_t j = 0; j < comps.size() && !found; ++j) {
        if (comps[j].level != c.level || !img.same_as(comps[j].fiber)) continue;
        const auto& tgt = comps[j].fiber;
        im.target = j;
        im.lin = transfer_matrix(m.M, c.fiber.directions, tgt.directions);
        im.shift = tgt.coordinates_of(sub(m.apply(c.fiber.basepoint), tgt.basepoint));
        found = true;
      }
    }
    if (!found) throw NotInvariant("symmetry does not permute the components (" + c.id + ")");
    out.push_back(std::move(im));
  }
  return out;
}

PermutationReport permutation_report(const std::vector<ComponentImage>& images) {
  PermutationReport r;
  for (std::size_t i = 0; i < images.size(); ++i) {
    r.perm.push_back(images[i].target);
    r.theta_sign.push_back(images[i].target == i ? images[i].eps : 0);
  }
  return r;
}

std::string PermutationReport::cycles(const std::vector<FixedComponent>& comps) const {
  std::string s;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i] || perm[i] == i) continue;
    s += "(";
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      s += (j == i ? "" : " ") + comps[j].id;
    }
    s += ")";
  }
  return s.empty() ? "()" : s;
}

}  // namespace artifact
