#include "artifact/intersections.hpp"

#include <algorithm>
#include <map>

namespace artifact {

namespace {

RatVec add(RatVec a, const RatVec& b, const Rational& c = 1) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
  return a;
}

int sign_of(const Rational& q) { return sgn(q); }

Int ceil_rational(const Rational& q) { return -floor_rational(-q); }

IntMatrix apply_linear(const IntMatrix& M, const IntMatrix& D) { return M * D; }

RatVec apply_linear(const IntMatrix& M, const RatVec& v) { return to_rational_matrix(M) * v; }

// integer Pluecker vector of the oriented columns
std::vector<Int> pluecker(const IntMatrix& D) {
  const std::size_t n = D.rows(), d = D.cols();
  std::vector<Int> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.end() - static_cast<long>(d), pick.end(), true);
  do {
    IntMatrix minor(d, d);
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) {
        for (std::size_t j = 0; j < d; ++j) minor(r, j) = D(i, j);
        ++r;
      }
    out.push_back(d == 0 ? Int(1) : determinant(minor));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return out;
}

// corners of the r-box
std::vector<RatVec> box_corners(const std::vector<std::pair<Rational, Rational>>& box) {
  std::vector<RatVec> out{RatVec()};
  for (const auto& [lo, hi] : box) {
    std::vector<RatVec> next;
    for (const auto& c : out)
      for (const auto& v : {lo, hi}) {
        RatVec e = c;
        e.push_back(v);
        next.push_back(e);
      }
    out = next;
  }
  return out;
}

Rational dot(const RatVec& a, const RatVec& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Does {x : A x = b} meet the box (A of rank < #unknowns, at most two unknowns)?
bool affine_set_meets_box(const RationalMatrix& A, const RatVec& b,
                          const std::vector<std::pair<Rational, Rational>>& box) {
  if (!solve_linear(A, b)) return false;
  // every equation of a consistent rank <= 1 system is a multiple of a single one
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Rational lo, hi;
    bool first = true;
    for (const auto& c : box_corners(box)) {
      Rational v = dot(A.row(i), c);
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
    if (b[i] < lo || b[i] > hi) return false;
  }
  return true;
}

void solve_pair(const TorusModel& T, const AffinePiece& a, const AffinePiece& b, std::vector<IntersectionPoint>& out) {
  const std::size_t da = a.directions.cols(), db = b.directions.cols(), m = da + db;
  IntMatrix D(6, m);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < da; ++j) D(i, j) = a.directions(i, j);
    for (std::size_t j = 0; j < db; ++j) D(i, da + j) = -b.directions(i, j);
  }
  // unknown sweep parameters
  std::vector<RatVec> w;  // fiber contribution of each r to the right-hand side
  std::vector<std::pair<Rational, Rational>> box;
  RatVec tcoef;
  if (a.swept) {
    RatVec v = a.velocity;
    for (auto& x : v) x = -x;
    w.push_back(v);
    box.push_back({a.r0, a.r1});
    tcoef.push_back(a.dt);
  }
  if (b.swept) {
    w.push_back(b.velocity);
    box.push_back({b.r0, b.r1});
    tcoef.push_back(-b.dt);
  }
  const std::size_t nr = w.size();
  const Rational trhs = b.t - a.t;
  bool t_free = std::all_of(tcoef.begin(), tcoef.end(), [](const Rational& q) { return q == 0; });
  if (t_free && trhs != 0) return;

  RatVec c0 = add(b.base, a.base, -1);
  SmithForm snf = smith_normal_form(D);
  const std::size_t k = snf.rank();
  RationalMatrix U = to_rational_matrix(snf.U);
  RatVec Uc0 = U * c0;
  std::vector<RatVec> Uw;
  for (const auto& x : w) Uw.push_back(U * x);

  // integer values taken by the constrained rows over the box
  std::vector<std::size_t> rows;
  std::vector<std::pair<Int, Int>> ranges;
  for (std::size_t i = k; i < 6; ++i) {
    RatVec coef(nr);
    for (std::size_t j = 0; j < nr; ++j) coef[j] = Uw[j][i];
    Rational lo, hi;
    bool first = true;
    for (const auto& c : box_corners(box)) {
      Rational v = Uc0[i] + dot(coef, c);
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
    Int a0 = ceil_rational(lo), a1 = floor_rational(hi);
    if (a0 > a1) return;
    rows.push_back(i);
    ranges.push_back({a0, a1});
  }

  RationalMatrix frame = hstack(a.frame(), b.frame());
  Rational det = frame.rows() == frame.cols() ? determinant(frame) : Rational(0);
  const int sgn_det = sign_of(det) * T.orientation_sign();

  std::vector<Int> kv(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) kv[i] = ranges[i].first;
  while (true) {
    // linear system in r: constrained rows and the t equation
    const std::size_t neq = rows.size() + (t_free ? 0 : 1);
    RationalMatrix A(neq, nr);
    RatVec rhs(neq);
    for (std::size_t e = 0; e < rows.size(); ++e) {
      for (std::size_t j = 0; j < nr; ++j) A(e, j) = Uw[j][rows[e]];
      rhs[e] = Rational(kv[e]) - Uc0[rows[e]];
    }
    if (!t_free) {
      for (std::size_t j = 0; j < nr; ++j) A(neq - 1, j) = tcoef[j];
      rhs[neq - 1] = trhs;
    }
    std::optional<RatVec> r;
    bool consistent = true;
    if (nr == 0) {
      for (std::size_t e = 0; e < neq; ++e) consistent = consistent && rhs[e] == 0;
      if (consistent) r = RatVec();
    } else if (rank(A) < nr) {
      if (affine_set_meets_box(A, rhs, box))
        throw NotTransverse("a positive-dimensional family of intersection points: " + a.to_string() + " and " +
                            b.to_string());
    } else {
      r = solve_linear(A, rhs);
    }
    if (r) {
      bool inside = true, on_edge = false;
      for (std::size_t j = 0; j < nr; ++j) {
        if ((*r)[j] < box[j].first || (*r)[j] > box[j].second) inside = false;
        if ((*r)[j] == box[j].first || (*r)[j] == box[j].second) on_edge = true;
      }
      if (inside) {
        if (k < m) throw NotTransverse("intersection contains a subtorus: " + a.to_string() + " and " + b.to_string());
        if (on_edge) throw NotTransverse("intersection on the boundary of a slab");
        if (sgn_det == 0) throw NotTransverse("frames are dependent at an intersection point");
        RatVec c = c0;
        for (std::size_t j = 0; j < nr; ++j) c = add(c, w[j], (*r)[j]);
        RatVec Uc = U * c;
        // y_i = (Uc_i + j_i) / d_i, S = V y
        std::vector<Int> d = snf.diagonal();
        std::vector<Int> idx(k, 0);
        while (true) {
          RatVec y(m);
          for (std::size_t i = 0; i < k; ++i) y[i] = (Uc[i] + Rational(idx[i])) / Rational(abs(d[i])) * sgn(d[i]);
          RatVec S = to_rational_matrix(snf.V) * y;
          RatVec sa(S.begin(), S.begin() + static_cast<long>(da));
          Rational ra = a.swept ? (*r)[0] : Rational(0);
          RatVec p = add(a.base, a.velocity, ra);
          p = add(p, to_rational_matrix(a.directions) * sa);
          out.push_back({a.t + ra * a.dt, reduce_mod_one(p), sgn_det});
          std::size_t pos = 0;
          while (pos < k && ++idx[pos] == abs(d[pos])) idx[pos++] = 0;
          if (pos == k) break;
        }
      }
    }
    std::size_t pos = 0;
    while (pos < kv.size() && ++kv[pos] > ranges[pos].second) {
      kv[pos] = ranges[pos].first;
      ++pos;
    }
    if (pos == kv.size()) break;
  }
}

bool same_oriented_piece(const AffinePiece& a, const AffinePiece& b) {
  if (a.swept || b.swept || a.t != b.t || a.directions.cols() != b.directions.cols()) return false;
  AffineSubtorus sa{a.base, a.directions, std::nullopt}, sb{b.base, b.directions, std::nullopt};
  if (!sa.same_as(sb)) return false;
  auto pa = pluecker(a.directions), pb = pluecker(b.directions);
  for (auto& x : pa) x *= a.sign;
  for (auto& x : pb) x *= b.sign;
  return pa == pb;
}

// piece moved to the chart containing the level t (level pieces only)
AffinePiece to_level(const AffinePiece& p, const RealAffineMap& F, const Rational& t) {
  if (p.swept) throw std::invalid_argument("to_level: swept piece");
  Rational n = t - p.t;
  if (!is_integer(n)) throw std::invalid_argument("to_level: piece not in the level t = " + to_string(t));
  return shifted(p, n.get_num().get_si(), F);
}

}  // namespace

AffinePiece AffinePiece::level(const Rational& t, RatVec base, IntMatrix directions, int sign) {
  AffinePiece p;
  p.t = t;
  p.base = std::move(base);
  p.directions = std::move(directions);
  p.sign = sign;
  return p;
}

AffinePiece AffinePiece::t_slab(const Rational& t0, const Rational& t1, RatVec base, RatVec velocity,
                                IntMatrix directions, int sign) {
  AffinePiece p = level(t0, std::move(base), std::move(directions), sign);
  p.swept = true;
  p.r0 = 0;
  p.r1 = t1 - t0;
  p.dt = 1;
  p.velocity = std::move(velocity);
  return p;
}

AffinePiece AffinePiece::level_slab(const Rational& t, RatVec base, RatVec velocity, IntMatrix directions, int sign) {
  AffinePiece p = level(t, std::move(base), std::move(directions), sign);
  p.swept = true;
  p.r0 = 0;
  p.r1 = 1;
  p.dt = 0;
  p.velocity = std::move(velocity);
  return p;
}

std::pair<Rational, Rational> AffinePiece::t_range() const {
  if (!swept) return {t, t};
  Rational a = t + r0 * dt, b = t + r1 * dt;
  return {std::min(a, b), std::max(a, b)};
}

RationalMatrix AffinePiece::frame() const {
  RationalMatrix f(7, dimension());
  std::size_t c = 0;
  if (swept) {
    f(0, 0) = dt;
    for (std::size_t i = 0; i < 6; ++i) f(i + 1, 0) = velocity[i];
    c = 1;
  }
  for (std::size_t j = 0; j < directions.cols(); ++j)
    for (std::size_t i = 0; i < 6; ++i) f(i + 1, c + j) = Rational(directions(i, j));
  return f * Rational(sign);
}

AffinePiece AffinePiece::face(bool end) const {
  if (!swept) throw std::invalid_argument("face: not a swept piece");
  Rational r = end ? r1 : r0;
  return level(t + r * dt, reduce_mod_one(add(base, velocity, r)), directions, end ? sign : -sign);
}

std::string AffinePiece::to_string() const {
  std::string s = (sign < 0 ? "-" : "") + std::string("[t=") + artifact::to_string(t);
  AffineSubtorus sub{base, directions, std::nullopt};
  s += " " + sub.to_string();
  if (swept) {
    s += " swept r in [" + artifact::to_string(r0) + "," + artifact::to_string(r1) + "] dt=" + artifact::to_string(dt);
    s += " v=(";
    for (std::size_t i = 0; i < velocity.size(); ++i) s += (i ? "," : "") + artifact::to_string(velocity[i]);
    s += ")";
  }
  return s + "]";
}

AffineCycle AffineCycle::operator-() const {
  AffineCycle c = *this;
  c.name = "-" + name;
  for (auto& p : c.pieces) p.sign = -p.sign;
  return c;
}

AffineCycle operator+(AffineCycle a, const AffineCycle& b) {
  a.name = a.name + " + " + b.name;
  a.pieces.insert(a.pieces.end(), b.pieces.begin(), b.pieces.end());
  return a;
}

AffinePiece image(const AffinePiece& p, const MTMap& h) {
  AffinePiece q = p;
  q.t = p.t * h.eps;
  q.dt = p.dt * h.eps;
  q.base = h.g.apply(p.base);
  q.velocity = apply_linear(h.g.M, p.velocity);
  q.directions = apply_linear(h.g.M, p.directions);
  return q;
}

AffineCycle image(const AffineCycle& c, const MTMap& h) {
  AffineCycle out{c.name, {}};
  for (const auto& p : c.pieces) out.pieces.push_back(image(p, h));
  return out;
}

Cobordism image(const Cobordism& c, const MTMap& h) {
  Cobordism out;
  for (const auto& p : c.pieces) out.pieces.push_back(image(p, h));
  out.boundary = image(c.boundary, h);
  return out;
}

AffinePiece shifted(const AffinePiece& p, long n, const RealAffineMap& F) {
  RealAffineMap Fn = power(F, n);
  AffinePiece q = p;
  q.t = p.t + Rational(n);
  q.base = Fn.apply(p.base);
  q.velocity = apply_linear(Fn.M, p.velocity);
  q.directions = apply_linear(Fn.M, p.directions);
  return q;
}

std::vector<IntersectionPoint> intersection_points(const TorusModel& T, const RealAffineMap& F, const AffinePiece& a,
                                                   const AffinePiece& b) {
  if (a.dimension() + b.dimension() != 7)
    throw std::invalid_argument("intersection_points: dimensions " + std::to_string(a.dimension()) + " and " +
                                std::to_string(b.dimension()) + " are not complementary");
  auto [alo, ahi] = a.t_range();
  auto [blo, bhi] = b.t_range();
  std::vector<IntersectionPoint> out;
  const long nlo = floor_rational(alo - bhi).get_si(), nhi = ceil_rational(ahi - blo).get_si();
  for (long n = nlo; n <= nhi; ++n) {
    if (blo + n > ahi || bhi + n < alo) continue;
    solve_pair(T, a, shifted(b, n, F), out);
  }
  return out;
}

std::vector<IntersectionPoint> intersection_points(const TorusModel& T, const RealAffineMap& F, const AffineCycle& a,
                                                   const AffineCycle& b) {
  std::vector<IntersectionPoint> out;
  for (const auto& p : a.pieces)
    for (const auto& q : b.pieces) {
      auto pts = intersection_points(T, F, p, q);
      out.insert(out.end(), pts.begin(), pts.end());
    }
  return out;
}

long intersection_number(const TorusModel& T, const RealAffineMap& F, const AffineCycle& a, const AffineCycle& b) {
  long s = 0;
  for (const auto& p : intersection_points(T, F, a, b)) s += p.sign;
  return s;
}

AffineCycle geometric_boundary(const Cobordism& c, const RealAffineMap& F) {
  std::vector<AffinePiece> faces;
  for (const auto& p : c.pieces) {
    faces.push_back(p.face(false));
    faces.push_back(p.face(true));
  }
  // cancel interior faces: equal supports with opposite orientations, possibly in shifted charts
  std::vector<bool> dead(faces.size(), false);
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (std::size_t j = i + 1; j < faces.size() && !dead[i]; ++j) {
      if (dead[j]) continue;
      Rational n = faces[i].t - faces[j].t;
      if (!is_integer(n)) continue;
      AffinePiece fj = shifted(faces[j], n.get_num().get_si(), F);
      fj.sign = -fj.sign;
      if (same_oriented_piece(faces[i], fj)) dead[i] = dead[j] = true;
    }
  AffineCycle out{"boundary", {}};
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (!dead[i]) out.pieces.push_back(faces[i]);
  return out;
}

std::vector<Int> level_class(const AffineCycle& c, const RealAffineMap& F, const Rational& t) {
  std::vector<Int> sum;
  for (const auto& p : c.pieces) {
    AffinePiece q = to_level(p, F, t);
    auto v = pluecker(q.directions);
    if (sum.empty()) sum.assign(v.size(), Int(0));
    if (v.size() != sum.size()) throw std::invalid_argument("level_class: mixed dimensions");
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i] * q.sign;
  }
  return sum;
}

bool boundary_class_check(const Cobordism& c, const AffineCycle& target, const RealAffineMap& F, const Rational& t) {
  auto a = level_class(geometric_boundary(c, F), F, t), b = level_class(target, F, t);
  if (a.empty()) a.assign(b.size(), Int(0));
  if (b.empty()) b.assign(a.size(), Int(0));
  return a == b;
}

bool boundary_matches(const Cobordism& c, const RealAffineMap& F) {
  AffineCycle g = geometric_boundary(c, F);
  if (g.pieces.size() != c.boundary.pieces.size()) return false;
  std::vector<bool> used(g.pieces.size(), false);
  for (const auto& d : c.boundary.pieces) {
    bool found = false;
    for (std::size_t i = 0; i < g.pieces.size() && !found; ++i) {
      if (used[i]) continue;
      Rational n = d.t - g.pieces[i].t;
      if (!is_integer(n)) continue;
      if (same_oriented_piece(d, shifted(g.pieces[i], n.get_num().get_si(), F))) used[i] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

Rational linking_number(const TorusModel& T, const RealAffineMap& F, const Cobordism& c, const AffineCycle& target,
                        const std::vector<std::pair<MTMap, Rational>>& averaging, const Rational& scale) {
  Rational total;
  AffineCycle body{"C", c.pieces};
  for (const auto& [g, w] : averaging) total += w * Rational(intersection_number(T, F, image(body, g), target));
  return scale * total;
}

int calibrated_sign(const TorusModel& T, const IntMatrix& directions) {
  if (directions.cols() != 3) throw std::invalid_argument("calibrated_sign: expected a 3-frame");
  CycMatrix Z = T.complex_basis() * to_cyc_matrix(directions);
  Cyclotomic re = determinant(Z).real_part();
  return re.is_zero() ? 0 : re.real_sign();
}

}  // namespace artifact
