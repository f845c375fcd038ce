#include "artifact/resolution.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace artifact {

namespace {

std::vector<unsigned> bit_list(unsigned mask) {
  std::vector<unsigned> out;
  for (unsigned b = 0; mask >> b; ++b)
    if ((mask >> b) & 1u) out.push_back(b);
  return out;
}

std::vector<std::vector<std::string>> monomial_labels(const std::vector<std::string>& gens) {
  const unsigned n = static_cast<unsigned>(gens.size());
  std::vector<std::vector<std::string>> out(n + 1);
  for (unsigned m = 0; m <= n; ++m)
    for (unsigned mask : ext::masks(n, m)) {
      if (!mask) {
        out[m].push_back("1");
        continue;
      }
      std::string s;
      for (unsigned b : bit_list(mask)) s += (s.empty() ? "" : "^") + gens[b];
      out[m].push_back(s);
    }
  return out;
}

GradedAlgebra relabel(const GradedAlgebra& src, std::vector<std::vector<std::string>> labels) {
  GradedAlgebra out(std::move(labels));
  out.fill_products([&](int a, std::size_t i, int b, std::size_t j) { return src.product(a, i, b, j); });
  out.set_integral(src.integral());
  return out;
}

CycVec scaled(CycVec v, const Cyclotomic& c) {
  for (auto& x : v) x *= c;
  return v;
}

void add_to(CycVec& a, const CycVec& b, const Cyclotomic& c = 1) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!b[k].is_zero()) a[k] += c * b[k];
}

SymVec to_sym(const CycVec& v) { return SymVec(v.begin(), v.end()); }

CycVec constant_part(const SymVec& v) {
  CycVec out;
  for (const auto& p : v) out.push_back(p.constant_term());
  return out;
}

CycVec coordinates_or_throw(const std::vector<CycVec>& basis, const CycVec& x, const char* what) {
  auto c = GradedAlgebra::coordinates(basis, x);
  if (!c) throw std::domain_error(what);
  return *c;
}

GradedAlgebra scaled_integral(GradedAlgebra alg, const Cyclotomic& c) {
  alg.set_integral(scaled(alg.integral(), c));
  return alg;
}

bool is_identity_map(const MTMap& h) { return h.eps == 1 && h.g == RealAffineMap::identity(h.g.dim()); }

bool same_piece(const FixedComponent& a, const FixedComponent& b) {
  if (a.level != b.level) return false;
  if (a.level != Level::Spans) return a.fiber.same_as(b.fiber);
  for (const auto& o : b.orbit)
    if (a.fiber.same_as(o)) return true;
  return false;
}

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};

// dx_j / dy_j for unit directions on a square factor, dw_c otherwise
std::vector<std::string> direction_labels(const TorusModel& T, const IntMatrix& D) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < D.cols(); ++c) {
    std::string name = "dw" + std::to_string(c + 1);
    std::size_t nz = 0, at = 0;
    for (std::size_t r = 0; r < D.rows(); ++r)
      if (D(r, c) != 0) {
        ++nz;
        at = r;
      }
    if (nz == 1 && D(at, c) == 1) {
      const auto& L = T.lattices[at / 2];
      if (L.w1 == Cyclotomic(1) && L.w2 == Cyclotomic::imag_unit())
        name = std::string(at % 2 ? "dy" : "dx") + std::to_string(at / 2 + 1);
    }
    out.push_back(name);
  }
  return out;
}

PieceCohomology piece_cohomology(const TorusModel& T, const FixedComponent& c) {
  auto gens = direction_labels(T, c.fiber.directions);
  if (c.level != Level::Spans) return PieceCohomology::torus(gens);
  return PieceCohomology::mapping_torus(to_cyc_matrix(c.return_matrix.transpose()), gens);
}

// restriction of a class of H^m(M) to a fixed piece
CycVec restrict_to_piece(const TorusMappingTorus& M, const FixedComponent& c, const PieceCohomology& P, unsigned m,
                         const CycVec& h) {
  CycVec out = P.algebra().zero(static_cast<int>(m));
  CycMatrix R = M.forms.restriction_generators(c.fiber.directions);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].is_zero()) continue;
    auto [is_delta, form] = M.mt.representative(m, i);
    if (!is_delta) {
      if (m > R.rows()) continue;
      add_to(out, P.class_of_form(m, ext::induced(R, m) * form), h[i]);
      continue;
    }
    if (c.level != Level::Spans) continue;  // dt vanishes on a level set
    const unsigned mm = m - 1;
    if (mm > R.rows()) continue;
    CycVec sum(ext::binomial(static_cast<unsigned>(R.rows()), mm));
    for (int j = 0; j < c.orbit_length; ++j) {
      CycMatrix G = R * M.forms.pullback_generators(power(M.F, -j));
      add_to(sum, ext::induced(G, mm) * form);
    }
    add_to(out, P.class_of_delta(mm, sum), h[i]);
  }
  return out;
}

CycVec ambient_vector(const OrbifoldBase& base, int d, const CycVec& x) {
  CycVec out(base.ambient[d].empty() ? 0 : base.ambient[d][0].size());
  if (base.ambient[d].empty()) return out;
  for (std::size_t i = 0; i < x.size(); ++i) add_to(out, base.ambient[d][i], x[i]);
  return out;
}

bool integral_vector(const RatVec& v) {
  for (const auto& x : v)
    if (!is_integer(x)) return false;
  return true;
}

bool is_identity(const IntMatrix& m) { return m == IntMatrix::identity(m.rows()); }

// Orient a component by phi; returns the volume.
Cyclotomic orient_by_phi(SingularComponent& L, const SymVec& base_phi) {
  CycVec phi = L.restriction[3] * constant_part(base_phi);
  Cyclotomic v = L.cohomology.integrate(phi);
  if (v.is_zero()) throw std::domain_error("component " + L.id + " is not calibrated by phi");
  if (v.real_sign() < 0) {
    L.cohomology.set_integral(scaled(L.cohomology.integral(), -1));
    v = -v;
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------- pieces

PieceCohomology PieceCohomology::torus(const std::vector<std::string>& gens) {
  PieceCohomology p;
  p.kind_ = Kind::Torus;
  p.n_ = static_cast<unsigned>(gens.size());
  const unsigned n = p.n_;
  p.alg_ = GradedAlgebra(monomial_labels(gens));
  p.alg_.fill_products([n](int a, std::size_t i, int b, std::size_t j) {
    CycVec x(ext::binomial(n, a)), y(ext::binomial(n, b));
    x[i] = 1;
    y[j] = 1;
    return ext::wedge(n, a, x, b, y);
  });
  p.alg_.set_integral({Cyclotomic(1)});
  return p;
}

PieceCohomology PieceCohomology::mapping_torus(const CycMatrix& monodromy, const std::vector<std::string>& gens) {
  PieceCohomology p;
  p.kind_ = Kind::MappingTorus;
  p.n_ = static_cast<unsigned>(gens.size());
  FiberModel f;
  f.n = p.n_;
  f.monodromy = monodromy;
  f.preferred_labels = monomial_labels(gens);
  for (unsigned m = 0; m <= f.n; ++m) f.preferred.push_back(CycMatrix::identity(ext::binomial(f.n, m)));
  auto mt = std::make_shared<MappingTorusCohomology>(f);
  auto labels = std::vector<std::vector<std::string>>(mt->algebra().top() + 1);
  for (int d = 0; d <= mt->algebra().top(); ++d)
    for (const auto& l : mt->algebra().labels(d)) {
      if (l.rfind("delta*(", 0) == 0) {
        std::string inner = l.substr(7, l.size() - 8);
        labels[d].push_back(inner == "1" ? "dt" : inner.find_first_of(" +-") == std::string::npos
                                                        ? "dt^" + inner
                                                        : "dt^(" + inner + ")");
      } else {
        labels[d].push_back(l);
      }
    }
  p.alg_ = relabel(mt->algebra(), labels);
  p.mt_ = std::move(mt);
  return p;
}

PieceCohomology PieceCohomology::surface_circle(unsigned genus) {
  PieceCohomology p;
  p.kind_ = Kind::SurfaceCircle;
  p.genus_ = genus;
  const unsigned g = genus;
  // surface classes: 0 = 1, 1..g = a_i, g+1..2g = b_i, 2g+1 = omega
  auto sdeg = [g](unsigned s) { return s == 0 ? 0 : s <= 2 * g ? 1 : 2; };
  std::vector<std::vector<std::pair<unsigned, unsigned>>> elems(4);  // (surface class, e power)
  std::vector<std::vector<std::string>> labels(4);
  auto sname = [g](unsigned s) -> std::string {
    if (s == 0) return "1";
    if (s <= g) return "a" + std::to_string(s);
    if (s <= 2 * g) return "b" + std::to_string(s - g);
    return "omega";
  };
  for (unsigned e = 0; e <= 1; ++e)
    for (unsigned s = 0; s <= 2 * g + 1; ++s) {
      unsigned d = sdeg(s) + e;
      elems[d].push_back({s, e});
      labels[d].push_back(e == 0 ? sname(s) : (s == 0 ? "e" : sname(s) + "^e"));
    }
  // order: degree 1 as a_i, b_i, e; degree 2 as omega, a_i^e, b_i^e
  for (int d = 0; d <= 3; ++d) {
    std::vector<std::size_t> idx(elems[d].size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return elems[d][x].second < elems[d][y].second;
    });
    if (d == 2)
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return (elems[d][x].first == 2 * g + 1) > (elems[d][y].first == 2 * g + 1);
      });
    std::vector<std::pair<unsigned, unsigned>> ne;
    std::vector<std::string> nl;
    for (auto k : idx) {
      ne.push_back(elems[d][k]);
      nl.push_back(labels[d][k]);
    }
    elems[d] = ne;
    labels[d] = nl;
  }
  p.alg_ = GradedAlgebra(labels);
  auto surface_product = [g](unsigned x, unsigned y) -> std::pair<unsigned, int> {
    if (x == 0) return {y, 1};
    if (y == 0) return {x, 1};
    if (x >= 1 && x <= g && y == x + g) return {2 * g + 1, 1};
    if (y >= 1 && y <= g && x == y + g) return {2 * g + 1, -1};
    return {0, 0};
  };
  p.alg_.fill_products([=](int a, std::size_t i, int b, std::size_t j) {
    CycVec out(a + b <= 3 ? elems[a + b].size() : 0);
    auto [s1, e1] = elems[a][i];
    auto [s2, e2] = elems[b][j];
    if (e1 + e2 > 1) return out;
    auto [s, sign] = surface_product(s1, s2);
    if (sign == 0) return out;
    if (e1 && sdeg(s2) % 2) sign = -sign;
    for (std::size_t k = 0; k < elems[a + b].size(); ++k)
      if (elems[a + b][k] == std::make_pair(s, e1 + e2)) out[k] = sign;
    return out;
  });
  p.alg_.set_integral({Cyclotomic(1)});
  return p;
}

CycVec PieceCohomology::class_of_form(unsigned m, const CycVec& form) const {
  switch (kind_) {
    case Kind::Torus: return form;
    case Kind::MappingTorus: return mt_->class_of_K(m, form);
    default: throw std::logic_error("class_of_form: not a torus or mapping torus");
  }
}

CycVec PieceCohomology::class_of_delta(unsigned m, const CycVec& form) const {
  if (kind_ != Kind::MappingTorus) throw std::logic_error("class_of_delta: not a mapping torus");
  return mt_->class_of_delta(m, form);
}

CycMatrix PieceCohomology::pullback_from(const PieceCohomology& target, int eps, const CycMatrix& gen_pullback,
                                         unsigned m) const {
  if (target.kind_ != kind_) throw std::invalid_argument("pullback_from: pieces of different kinds");
  switch (kind_) {
    case Kind::Torus: return m <= n_ ? ext::induced(gen_pullback, m) : CycMatrix(0, 0);
    case Kind::MappingTorus: return mt_->pullback_from(*target.mt_, eps, gen_pullback, m);
    default: throw std::logic_error("pullback_from: unsupported piece");
  }
}

// ---------------------------------------------------------------- symbolic helpers

SymVec operator*(const CycMatrix& m, const SymVec& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matrix times symbolic vector: shape mismatch");
  SymVec out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero() && !v[c].is_zero()) out[r] += SymPoly(m(r, c)) * v[c];
  return out;
}

SymVec sym_coordinates(const std::vector<CycVec>& basis, const SymVec& x) {
  std::map<SymPoly::Monomial, CycVec> parts;
  for (std::size_t k = 0; k < x.size(); ++k)
    for (const auto& [mono, c] : x[k].terms()) {
      auto& v = parts[mono];
      if (v.empty()) v.resize(x.size());
      v[k] = c;
    }
  SymVec out(basis.size());
  for (const auto& [mono, v] : parts) {
    CycVec c = coordinates_or_throw(basis, v, "sym_coordinates: vector outside the span");
    SymPoly mp(1);
    for (const auto& [name, e] : mono)
      for (unsigned t = 0; t < e; ++t) mp *= SymPoly::var(name);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero()) out[i] += SymPoly(c[i]) * mp;
  }
  return out;
}

SymPoly sym_determinant(const SymMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return SymPoly(1);
  if (n > 20) throw std::invalid_argument("sym_determinant: matrix too large");
  // expansion over column subsets, rows taken in order
  std::vector<SymPoly> f(std::size_t(1) << n);
  f[0] = SymPoly(1);
  for (std::size_t mask = 0; mask < f.size(); ++mask) {
    if (f[mask].is_zero()) continue;
    const std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row == n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if ((mask >> c) & 1u) continue;
      if (m[row][c].is_zero()) continue;
      const int above = __builtin_popcountll(mask >> c);
      SymPoly t = f[mask] * m[row][c];
      if (above % 2) t = -t;
      f[mask | (std::size_t(1) << c)] += t;
    }
  }
  return f.back();
}

// ---------------------------------------------------------------- resolved algebra

ResolvedAlgebra::ResolvedAlgebra(OrbifoldBase base, std::vector<SingularComponent> comps, std::string parameter,
                                 std::string symbol)
    : base_(std::move(base)), comps_(std::move(comps)), parameter_(std::move(parameter)), symbol_(std::move(symbol)) {
  const GradedAlgebra& X = base_.algebra;
  const int top = X.top();
  for (std::size_t j = 0; j < comps_.size(); ++j)
    if (comps_[j].thom.empty()) comps_[j].thom = gysin(j, 0, CycVec{Cyclotomic(1)});

  std::vector<std::vector<std::string>> labels(top + 1);
  offsets_.assign(comps_.size(), std::vector<std::size_t>(top + 1, 0));
  for (int d = 0; d <= top; ++d) {
    labels[d] = X.labels(d);
    for (std::size_t j = 0; j < comps_.size(); ++j) {
      offsets_[j][d] = labels[d].size();
      const std::string x = symbol_ + "_" + std::to_string(j + 1);
      const GradedAlgebra& L = comps_[j].cohomology;
      if (d < 2 || d - 2 > L.top()) continue;
      for (const auto& g : L.labels(d - 2))
        labels[d].push_back(g == "1" ? x : (g.find_first_of(" +") == std::string::npos ? g : "(" + g + ")") + "*" + x);
    }
  }
  display_labels_.resize(top + 1);
  to_display_.resize(top + 1);
  for (int d = 0; d <= top; ++d) {
    display_labels_[d] = base_.display_labels[d];
    const std::size_t nb = display_labels_[d].size();
    for (std::size_t k = X.dim(d); k < labels[d].size(); ++k) display_labels_[d].push_back(labels[d][k]);
    CycMatrix T(display_labels_[d].size(), labels[d].size());
    for (std::size_t r = 0; r < nb; ++r)
      for (std::size_t c = 0; c < X.dim(d); ++c) T(r, c) = base_.to_display[d](r, c);
    for (std::size_t k = X.dim(d); k < labels[d].size(); ++k) T(nb + k - X.dim(d), k) = 1;
    to_display_[d] = T;
  }

  alg_ = GradedAlgebra(labels);
  // locate a basis element: component index (npos for the base) and index within its block
  auto locate = [&](int d, std::size_t i) -> std::pair<std::size_t, std::size_t> {
    if (i < X.dim(d)) return {std::size_t(-1), i};
    for (std::size_t j = comps_.size(); j-- > 0;)
      if (i >= offsets_[j][d]) return {j, i - offsets_[j][d]};
    throw std::logic_error("locate: bad index");
  };
  alg_.fill_products([&](int a, std::size_t i, int b, std::size_t k) {
    const int d = a + b;
    auto [ja, ia] = locate(a, i);
    auto [jb, ib] = locate(b, k);
    const std::size_t none = std::size_t(-1);
    if (ja == none && jb == none) return from_base(d, X.product(a, ia, b, ib));
    if (ja == none || jb == none) {
      // a . (gamma x) = (a|_L gamma) x and (gamma x) . b = (gamma b|_L) x
      const std::size_t j = ja == none ? jb : ja;
      const GradedAlgebra& L = comps_[j].cohomology;
      CycVec res;
      if (ja == none) {
        res = L.multiply(a, comps_[j].restriction[a] * X.basis_vector(a, ia), b - 2, L.basis_vector(b - 2, ib));
      } else {
        res = L.multiply(a - 2, L.basis_vector(a - 2, ia), b, comps_[j].restriction[b] * X.basis_vector(b, ib));
      }
      return from_component(j, d, res);
    }
    if (ja != jb) return alg_.zero(d);
    // (gamma x)(gamma' x) = -2 iota_*(gamma gamma') + (4 - 4g) (omega gamma gamma') x
    const auto& C = comps_[ja];
    const GradedAlgebra& L = C.cohomology;
    CycVec gg = L.multiply(a - 2, L.basis_vector(a - 2, ia), b - 2, L.basis_vector(b - 2, ib));
    CycVec out = from_base(d, scaled(gysin(ja, a + b - 4, gg), -2));
    if (C.genus != 1 && d - 2 <= L.top()) {
      CycVec og = L.multiply(2, C.omega, a + b - 4, gg);
      add_to(out, from_component(ja, d, og), Cyclotomic(4 - 4 * C.genus));
    }
    return out;
  });
  CycVec integral(alg_.dim(top));
  for (std::size_t i = 0; i < X.dim(top); ++i) integral[i] = X.integral()[i];
  alg_.set_integral(integral);

  phi_ = SymVec(alg_.dim(3));
  for (std::size_t i = 0; i < X.dim(3); ++i) phi_[i] = base_.phi[i];
  const SymPoly s = SymPoly::var(parameter_);
  for (std::size_t j = 0; j < comps_.size(); ++j)
    for (std::size_t k = 0; k < comps_[j].theta.size(); ++k) phi_[offsets_[j][3] + k] -= s * comps_[j].theta[k];
}

std::size_t ResolvedAlgebra::offset(std::size_t j, int d) const { return offsets_.at(j).at(d); }

CycVec ResolvedAlgebra::from_base(int d, const CycVec& x) const {
  std::size_t total = base_.algebra.dim(d);
  for (const auto& C : comps_) total += C.cohomology.dim(d - 2);
  CycVec out(total);
  std::copy(x.begin(), x.end(), out.begin());
  return out;
}

CycVec ResolvedAlgebra::from_component(std::size_t j, int d, const CycVec& gamma) const {
  CycVec out = from_base(d, CycVec());
  for (std::size_t k = 0; k < gamma.size(); ++k) out[offsets_[j][d] + k] = gamma[k];
  return out;
}

CycVec ResolvedAlgebra::base_part(int d, const CycVec& x) const {
  return CycVec(x.begin(), x.begin() + static_cast<long>(base_.algebra.dim(d)));
}

CycVec ResolvedAlgebra::component_part(std::size_t j, int d, const CycVec& x) const {
  auto b = x.begin() + static_cast<long>(offsets_[j][d]);
  return CycVec(b, b + static_cast<long>(comps_[j].cohomology.dim(d - 2)));
}

CycVec ResolvedAlgebra::gysin(std::size_t j, int k, const CycVec& beta) const {
  const GradedAlgebra& X = base_.algebra;
  const auto& C = comps_[j];
  const int e = 3 - k;
  CycVec values(X.dim(e));
  if (e >= 0)
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] = C.cohomology.integrate(C.cohomology.multiply(e, C.restriction[e] * X.basis_vector(e, i), k, beta));
  bool all_zero = std::all_of(values.begin(), values.end(), [](const Cyclotomic& c) { return c.is_zero(); });
  if (all_zero) return X.zero(k + 4);
  return X.dual_class(e, values);
}

std::string ResolvedAlgebra::format(int d, const CycVec& x) const {
  return combination_string(to_display_[d] * x, display_labels_[d]);
}

std::string ResolvedAlgebra::format(int d, const SymVec& x) const {
  return combination_string(to_display_[d] * x, display_labels_[d]);
}

CycVec ResolvedAlgebra::parse(int d, const std::string& text) const {
  const auto& labels = display_labels_[d];
  CycVec v(labels.size());
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return labels[a].size() > labels[b].size(); });
  auto skip = [&](std::size_t p) {
    while (p < text.size() && text[p] == ' ') ++p;
    return p;
  };
  // label at position p followed by the end or a term separator
  auto label_at = [&](std::size_t p) -> std::optional<std::size_t> {
    for (auto k : order) {
      const auto& l = labels[k];
      if (text.compare(p, l.size(), l) != 0) continue;
      std::size_t q = skip(p + l.size());
      if (q == text.size() || text[q] == '+' || text[q] == '-') return k;
    }
    return std::nullopt;
  };
  std::size_t pos = skip(0);
  if (text.substr(pos) == "0") return coordinates_or_throw({}, v, "");
  while (pos < text.size()) {
    Cyclotomic sign(1);
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') sign = -1;
      pos = skip(pos + 1);
    }
    Cyclotomic coef(1);
    auto k = label_at(pos);
    std::size_t lab_pos = pos;
    if (!k) {
      for (std::size_t q = pos + 1; q < text.size() && !k; ++q) {
        if (text[q] != '*') continue;
        auto kk = label_at(q + 1);
        if (!kk) continue;
        std::string c = text.substr(pos, q - pos);
        if (c.size() >= 2 && c.front() == '(' && c.back() == ')') c = c.substr(1, c.size() - 2);
        try {
          coef = parse_cyclotomic(c);
        } catch (const std::exception&) {
          continue;
        }
        k = kk;
        lab_pos = q + 1;
      }
    }
    if (!k) throw std::invalid_argument("parse: cannot read '" + text.substr(pos) + "'");
    v[*k] += sign * coef;
    pos = skip(lab_pos + labels[*k].size());
  }
  auto x = solve_linear(to_display_[d], v);
  if (!x) throw std::invalid_argument("parse: '" + text + "' is not a class in this basis");
  return *x;
}

// ---------------------------------------------------------------- first stage

OrbifoldBase orbifold_base(const TorusMappingTorus& M, const std::vector<MTMap>& group, const std::string& name) {
  OrbifoldBase b;
  b.name = name;
  b.group_order = group.size();
  const GradedAlgebra& H = M.mt.algebra();
  std::vector<std::vector<std::string>> labels(H.top() + 1);
  for (int d = 0; d <= H.top(); ++d) {
    std::vector<CycMatrix> mats;
    for (const auto& h : group)
      if (!is_identity_map(h)) mats.push_back(M.action(h, d));
    b.ambient.push_back(invariant_basis(H.dim(d), mats));
    for (const auto& v : b.ambient[d]) labels[d].push_back(combination_string(v, H.labels(d)));
    b.display_labels.push_back(H.labels(d));
    b.to_display.push_back(CycMatrix::from_columns(b.ambient[d], H.dim(d)));
  }
  b.algebra = scaled_integral(H.subalgebra(b.ambient, labels), Cyclotomic(Rational(1, static_cast<long>(group.size()))));
  b.phi = to_sym(coordinates_or_throw(b.ambient[3], M.phi_class(), "orbifold_base: phi is not invariant"));
  return b;
}

std::vector<SingularComponent> orbifold_components(const TorusMappingTorus& M, const std::vector<MTMap>& group,
                                                   const OrbifoldBase& base, const std::vector<ComponentLabel>& labels,
                                                   const std::string& prefix) {
  std::vector<FixedComponent> pieces;
  for (const auto& h : group) {
    if (is_identity_map(h)) continue;
    for (auto& c : mapping_torus_fixed_components(h, M.F)) {
      bool dup = false;
      for (const auto& p : pieces) dup = dup || same_piece(c, p);
      if (!dup) pieces.push_back(std::move(c));
    }
  }
  std::vector<std::vector<ComponentImage>> images;
  for (const auto& h : group) images.push_back(symmetry_on_components(h, pieces, M.F));
  UnionFind uf(pieces.size());
  for (const auto& im : images)
    for (std::size_t i = 0; i < pieces.size(); ++i) uf.unite(i, im[i].target);

  // representatives, in label order when labels are given
  std::vector<std::pair<std::string, std::size_t>> reps;
  std::vector<int> theta_signs;
  std::vector<bool> used(pieces.size(), false);
  if (!labels.empty()) {
    for (const auto& l : labels) {
      std::optional<std::size_t> at;
      for (std::size_t i = 0; i < pieces.size() && !at; ++i)
        if (pieces[i].contains(l.t, l.point)) at = i;
      if (!at) throw std::domain_error("component label " + l.id + " does not lie on the singular locus");
      if (used[uf.find(*at)]) throw std::domain_error("component label " + l.id + " repeats a component");
      used[uf.find(*at)] = true;
      reps.push_back({l.id, *at});
      theta_signs.push_back(l.theta_sign);
    }
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (!used[uf.find(i)]) throw std::domain_error("singular component through " + pieces[i].fiber.to_string() +
                                                     " has no label");
  } else {
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (!used[uf.find(i)]) {
        used[uf.find(i)] = true;
        reps.push_back({prefix + std::to_string(reps.size() + 1), i});
        theta_signs.push_back(1);
      }
  }

  std::vector<SingularComponent> out;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const std::size_t pi = reps[r].second;
    const FixedComponent& fc = pieces[pi];
    SingularComponent L;
    L.id = reps[r].first;
    L.piece = fc;
    auto P = std::make_shared<PieceCohomology>(piece_cohomology(M.forms.torus(), fc));
    const int top = P->algebra().top();

    std::vector<std::vector<CycMatrix>> stab(top + 1);
    for (std::size_t g = 0; g < group.size(); ++g) {
      const auto& im = images[g][pi];
      if (im.target != pi) continue;
      ++L.stabilizer_set;
      bool pointwise = is_identity(im.lin) && integral_vector(im.shift) && (fc.level != Level::Spans || im.eps == 1);
      if (pointwise) ++L.stabilizer_point;
      for (int d = 0; d <= top; ++d)
        stab[d].push_back(P->pullback_from(*P, im.eps, to_cyc_matrix(im.lin.transpose()), d));
    }
    --L.stabilizer_set;  // the identity was counted in the loop
    --L.stabilizer_point;
    if (L.stabilizer_point != 2) throw std::domain_error("component " + L.id + " does not have isotropy Z_2");

    std::vector<std::vector<std::string>> clabels(top + 1);
    for (int d = 0; d <= top; ++d) {
      L.piece_basis.push_back(invariant_basis(P->algebra().dim(d), stab[d]));
      for (const auto& v : L.piece_basis[d]) clabels[d].push_back(combination_string(v, P->algebra().labels(d)));
    }
    L.cohomology = scaled_integral(P->algebra().subalgebra(L.piece_basis, clabels),
                                   Cyclotomic(Rational(static_cast<long>(L.stabilizer_point),
                                                       static_cast<long>(L.stabilizer_set))));
    for (int d = 0; d <= base.algebra.top(); ++d) {
      CycMatrix R(L.cohomology.dim(d), base.algebra.dim(d));
      if (d <= top)
        for (std::size_t i = 0; i < base.algebra.dim(d); ++i) {
          CycVec h = restrict_to_piece(M, fc, *P, d, base.ambient[d][i]);
          CycVec c = coordinates_or_throw(L.piece_basis[d], h, "restriction leaves the invariant classes");
          for (std::size_t k = 0; k < c.size(); ++k) R(k, i) = c[k];
        }
      L.restriction.push_back(R);
    }
    L.volume = orient_by_phi(L, base.phi);

    // theta: +-dt along t, a formal closed 1-form on level tori
    L.theta = SymVec(L.cohomology.dim(1));
    if (fc.level == Level::Spans) {
      CycVec dt = coordinates_or_throw(L.piece_basis[1], P->class_of_delta(0, {Cyclotomic(1)}), "dt not invariant");
      for (std::size_t k = 0; k < dt.size(); ++k) L.theta[k] = SymPoly(dt[k] * Cyclotomic(theta_signs[r]));
    } else {
      for (std::size_t k = 0; k < L.theta.size(); ++k)
        L.theta[k] = SymPoly::var("theta_" + L.id + "_" + std::to_string(k + 1));
    }
    L.genus = 1;
    L.description = to_string(fc.level) + " " + fc.fiber.to_string();
    L.piece_cohomology = P;
    out.push_back(std::move(L));
  }
  return out;
}

ResolvedAlgebra resolve_orbifold(const TorusMappingTorus& M, const std::vector<MTMap>& group, const std::string& name,
                                 const std::vector<ComponentLabel>& labels, const std::string& parameter,
                                 const std::string& prefix) {
  OrbifoldBase base = orbifold_base(M, group, name);
  auto comps = orbifold_components(M, group, base, labels, prefix);
  return ResolvedAlgebra(std::move(base), std::move(comps), parameter, "x");
}

// ---------------------------------------------------------------- second stage

std::vector<CycMatrix> lifted_action(const TorusMappingTorus& M, const ResolvedAlgebra& Yt, const MTMap& kappa) {
  const OrbifoldBase& B = Yt.base();
  const auto& comps = Yt.components();
  std::vector<FixedComponent> pieces;
  for (const auto& c : comps) {
    if (!c.piece) throw std::invalid_argument("lifted_action: components carry no geometry");
    pieces.push_back(*c.piece);
  }
  auto images = symmetry_on_components(kappa, pieces, M.F);
  // sign of theta_j = theta_sign * dt
  auto theta_sign = [&](std::size_t j) {
    const auto& C = comps[j];
    CycVec dt = C.piece_cohomology->class_of_delta(0, {Cyclotomic(1)});
    CycVec c = coordinates_or_throw(C.piece_basis[1], dt, "dt not invariant");
    for (std::size_t k = 0; k < c.size(); ++k)
      if (!c[k].is_zero()) return (C.theta[k].constant_term() / c[k]).real_sign();
    throw std::logic_error("theta has no dt part");
  };

  std::vector<CycMatrix> out;
  const GradedAlgebra& A = Yt.algebra();
  for (int d = 0; d <= A.top(); ++d) {
    CycMatrix K(A.dim(d), A.dim(d));
    CycMatrix act = M.action(kappa, d);
    for (std::size_t i = 0; i < B.algebra.dim(d); ++i) {
      CycVec c = coordinates_or_throw(B.ambient[d], act * B.ambient[d][i], "lifted_action: base not preserved");
      for (std::size_t r = 0; r < c.size(); ++r) K(r, i) = c[r];
    }
    if (d >= 2)
      for (std::size_t j = 0; j < comps.size(); ++j) {
        if (d - 2 > comps[j].cohomology.top()) continue;
        const auto& im = images[j];
        const std::size_t k = im.target;
        const int sigma = theta_sign(k) * im.eps * theta_sign(j);
        const auto& Pj = *comps[j].piece_cohomology;
        const auto& Pk = *comps[k].piece_cohomology;
        CycMatrix pull = Pj.pullback_from(Pk, im.eps, to_cyc_matrix(im.lin.transpose()), d - 2);
        const auto& bk = comps[k].piece_basis[d - 2];
        for (std::size_t q = 0; q < bk.size(); ++q) {
          CycVec c = coordinates_or_throw(comps[j].piece_basis[d - 2], pull * bk[q], "lifted_action: component classes");
          for (std::size_t r = 0; r < c.size(); ++r) K(Yt.offset(j, d) + r, Yt.offset(k, d) + q) = c[r] * Cyclotomic(sigma);
        }
      }
    out.push_back(K);
  }
  return out;
}

namespace {

// Level piece with fiber spanned by u1, u2 in the z1 z2 directions and v in the z3 direction.
struct SplitFrame {
  IntMatrix frame;  // 6 x 3: u1 u2 v
  int sign = 1;     // orientation of (u1, u2, v) relative to phi
};

IntMatrix int_kernel(const IntMatrix& A) {
  SmithForm sf = smith_normal_form(A);
  std::size_t r = sf.rank();
  IntMatrix K(A.cols(), A.cols() - r);
  for (std::size_t j = r; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.cols(); ++i) K(i, j - r) = sf.V(i, j);
  return K;
}

IntMatrix select_rows(const IntMatrix& D, std::size_t from, std::size_t to) {
  IntMatrix out(to - from, D.cols());
  for (std::size_t i = from; i < to; ++i)
    for (std::size_t j = 0; j < D.cols(); ++j) out(i - from, j) = D(i, j);
  return out;
}

SplitFrame split_frame(const FixedComponent& c) {
  const IntMatrix& D = c.fiber.directions;
  if (D.cols() != 3) throw std::domain_error("split_frame: expected a 3-torus");
  IntMatrix k12 = int_kernel(select_rows(D, 4, 6)), k3 = int_kernel(select_rows(D, 0, 4));
  if (k12.cols() != 2 || k3.cols() != 1) throw std::domain_error("split_frame: fiber is not a product");
  IntMatrix X(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    X(i, 0) = k12(i, 0);
    X(i, 1) = k12(i, 1);
    X(i, 2) = k3(i, 0);
  }
  Int det = determinant(X);
  if (det != 1 && det != -1) throw std::domain_error("split_frame: fiber is not a product of T^2 and S^1");
  SplitFrame f;
  f.frame = D * X;
  // canonical direction of the circle
  for (std::size_t i = 0; i < 6; ++i)
    if (f.frame(i, 2) != 0) {
      if (f.frame(i, 2) < 0)
        for (std::size_t r = 0; r < 6; ++r) f.frame(r, 2) = -f.frame(r, 2);
      break;
    }
  return f;
}

// a class on M restricted to a level T^3 in the given frame, as monomial coordinates
CycVec restrict_level(const TorusMappingTorus& M, const IntMatrix& frame, Level level, unsigned m, const CycVec& h) {
  FixedComponent fc;
  fc.level = level;
  fc.fiber.basepoint = RatVec(6);
  fc.fiber.directions = frame;
  PieceCohomology P = PieceCohomology::torus({"u1", "u2", "v"});
  return restrict_to_piece(M, fc, P, m, h);
}

}  // namespace

ResolvedAlgebra resolve_second(const TorusMappingTorus& M, const ResolvedAlgebra& Yt, const MTMap& iota,
                               const MTMap& kappa, const std::string& name, const std::vector<ComponentLabel>& labels,
                               const std::string& parameter) {
  const GradedAlgebra& A = Yt.algebra();
  auto act = lifted_action(M, Yt, kappa);

  OrbifoldBase base;
  base.name = name;
  base.group_order = 2;
  std::vector<std::vector<std::string>> blabels(A.top() + 1);
  for (int d = 0; d <= A.top(); ++d) {
    base.ambient.push_back(invariant_basis(A.dim(d), {act[d]}));
    for (const auto& v : base.ambient[d]) blabels[d].push_back(combination_string(v, A.labels(d)));
    base.display_labels.push_back(Yt.display_labels(d));
    base.to_display.push_back(Yt.to_display(d) * CycMatrix::from_columns(base.ambient[d], A.dim(d)));
  }
  base.algebra = scaled_integral(A.subalgebra(base.ambient, blabels), Cyclotomic(Rational(1, 2)));
  base.phi = sym_coordinates(base.ambient[3], Yt.phi());

  // pieces of Fix(kappa) and Fix(iota kappa), grouped by intersection
  std::vector<FixedComponent> pieces;
  for (const MTMap& h : {kappa, iota * kappa})
    for (auto& c : mapping_torus_fixed_components(h, M.F)) {
      if (c.level == Level::Spans) throw std::domain_error("resolve_second: expected level fixed sets");
      pieces.push_back(std::move(c));
    }
  UnionFind uf(pieces.size());
  std::size_t edges_total = 0;
  std::vector<std::size_t> edges(pieces.size(), 0);
  for (std::size_t a = 0; a < pieces.size(); ++a)
    for (std::size_t b = a + 1; b < pieces.size(); ++b) {
      if (pieces[a].level != pieces[b].level || !intersects(pieces[a].fiber, pieces[b].fiber)) continue;
      uf.unite(a, b);
      const auto& A1 = pieces[a].fiber;
      const auto& B1 = pieces[b].fiber;
      IntMatrix sys(6, A1.dimension() + B1.dimension());
      for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < A1.dimension(); ++j) sys(i, j) = A1.directions(i, j);
        for (std::size_t j = 0; j < B1.dimension(); ++j) sys(i, A1.dimension() + j) = -B1.directions(i, j);
      }
      RatVec rhs(6);
      for (std::size_t i = 0; i < 6; ++i) rhs[i] = B1.basepoint[i] - A1.basepoint[i];
      auto fam = solve_congruence(sys, rhs);
      edges[a] += fam ? fam->basepoints.size() : 0;
      ++edges_total;
    }

  std::vector<std::vector<std::size_t>> groups;
  {
    std::map<std::size_t, std::size_t> at;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      auto r = uf.find(i);
      if (!at.count(r)) {
        at[r] = groups.size();
        groups.emplace_back();
      }
      groups[at[r]].push_back(i);
    }
  }
  // order by labels
  std::vector<std::pair<std::string, std::size_t>> order;
  if (!labels.empty()) {
    std::vector<bool> used(groups.size(), false);
    for (const auto& l : labels) {
      std::optional<std::size_t> g;
      for (std::size_t k = 0; k < groups.size() && !g; ++k)
        for (auto i : groups[k])
          if (pieces[i].contains(l.t, l.point)) g = k;
      if (!g || used[*g]) throw std::domain_error("fixed component label " + l.id + " does not match");
      used[*g] = true;
      order.push_back({l.id, *g});
    }
    if (order.size() != groups.size()) throw std::domain_error("fixed components without labels");
  } else {
    for (std::size_t k = 0; k < groups.size(); ++k) order.push_back({"K" + std::to_string(k + 1), k});
  }

  const OrbifoldBase& Yb = Yt.base();
  std::vector<SingularComponent> comps;
  for (std::size_t p = 0; p < order.size(); ++p) {
    const auto& grp = groups[order[p].second];
    std::size_t e = 0;
    for (auto i : grp) e += edges[i];
    const long genus = static_cast<long>(e) - static_cast<long>(grp.size()) + 1;
    if (genus < 1) throw std::domain_error("resolve_second: unexpected fixed surface");
    SingularComponent K;
    K.id = order[p].first;
    K.genus = static_cast<int>(genus);
    PieceCohomology S = PieceCohomology::surface_circle(static_cast<unsigned>(genus));
    K.cohomology = S.algebra();
    const std::size_t idx_omega = 0, idx_top = 0;
    std::vector<SplitFrame> frames;
    for (auto i : grp) {
      SplitFrame f = split_frame(pieces[i]);
      CycVec top = restrict_level(M, f.frame, pieces[i].level, 3, M.phi_class());
      f.sign = top[0].real_sign();
      frames.push_back(f);
    }
    // restriction of base classes: the x-part vanishes on K, the rest through the pieces
    for (int d = 0; d <= base.algebra.top(); ++d) {
      CycMatrix R(K.cohomology.dim(d), base.algebra.dim(d));
      for (std::size_t i = 0; i < base.algebra.dim(d) && d <= 3; ++i) {
        if (d == 1) break;
        CycVec y = Yt.base_part(d, base.ambient[d][i]);
        CycVec h = ambient_vector(Yb, d, y);
        Cyclotomic value;
        for (std::size_t q = 0; q < grp.size(); ++q) {
          CycVec r = restrict_level(M, frames[q].frame, pieces[grp[q]].level, d, h);
          if (d == 0) {
            value = r[0];
            break;
          }
          // u1^u2 is the first degree-2 monomial; the top monomial is the only one in degree 3
          value += Cyclotomic(Rational(frames[q].sign, 2)) * r[0];
        }
        R(d == 2 ? idx_omega : idx_top, i) = value;
      }
      K.restriction.push_back(R);
    }
    Cyclotomic vol;
    for (std::size_t q = 0; q < grp.size(); ++q) {
      CycVec top = restrict_level(M, frames[q].frame, pieces[grp[q]].level, 3, M.phi_class());
      vol += Cyclotomic(Rational(frames[q].sign, 2)) * top[0];
    }
    K.volume = vol;
    K.omega = K.cohomology.basis_vector(2, idx_omega);
    K.theta = SymVec(K.cohomology.dim(1));
    const auto& l1 = K.cohomology.labels(1);
    const std::size_t ie = static_cast<std::size_t>(std::find(l1.begin(), l1.end(), "e") - l1.begin());
    K.theta[ie] = SymPoly::var("y_" + std::to_string(p + 1)) * SymPoly(vol);
    K.description = "Sigma_" + std::to_string(genus) + " x S^1 from " + std::to_string(grp.size()) + " pieces at t = " +
                    to_string(pieces[grp[0]].level);
    comps.push_back(std::move(K));
  }
  (void)edges_total;
  return ResolvedAlgebra(std::move(base), std::move(comps), parameter, "y");
}

// ---------------------------------------------------------------- characteristic classes

CycVec pontryagin(const ResolvedAlgebra& alg, const CycVec& base_p1) {
  CycVec v = alg.from_base(4, base_p1);
  for (std::size_t j = 0; j < alg.components().size(); ++j) {
    const auto& C = alg.components()[j];
    add_to(v, alg.from_base(4, C.thom), Cyclotomic(-3));
    if (C.genus != 1) add_to(v, alg.from_component(j, 4, C.omega), Cyclotomic(4 - 4 * C.genus));
  }
  return v;
}

CycVec pontryagin(const ResolvedAlgebra& alg) { return pontryagin(alg, alg.base().algebra.zero(4)); }

CycVec pontryagin_second(const ResolvedAlgebra& first, const ResolvedAlgebra& second) {
  CycVec p = pontryagin(first);
  return pontryagin(second, coordinates_or_throw(second.base().ambient[4], p, "p1 of the first stage is not invariant"));
}

SymPoly pont_pairing(const ResolvedAlgebra& alg, const CycVec& p1) {
  const auto& A = alg.algebra();
  return A.integrate(A.multiply(4, to_sym(p1), 3, alg.phi()));
}

bool negative_definite(const CycMatrix& m) {
  CycMatrix a = m;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k).is_zero() || !a(k, k).is_real() || a(k, k).real_sign() >= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      Cyclotomic f = a(i, k) / a(k, k);
      if (f.is_zero()) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

GramReport h2_gram(const ResolvedAlgebra& alg) {
  const auto& A = alg.algebra();
  const std::size_t n = A.dim(2);
  GramReport r;
  r.gram.assign(n, SymVec(n));
  r.at_zero = CycMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      SymVec ab = to_sym(A.product(2, i, 2, j));
      SymPoly g = A.integrate(A.multiply(4, ab, 3, alg.phi()));
      r.gram[i][j] = r.gram[j][i] = g;
      r.at_zero(i, j) = r.at_zero(j, i) = g.constant_term();
    }
  r.negative_definite_at_zero = negative_definite(r.at_zero);
  for (std::size_t k = 1; k <= n; ++k) {
    SymMatrix block(k, SymVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) block[i][j] = r.gram[i][j];
    SymPoly d = sym_determinant(block);
    r.leading_minors.push_back(k % 2 ? -d : d);
  }
  return r;
}

bool check_p3(std::size_t b3, bool pi1_finite) { return pi1_finite && b3 > 1; }

}  // namespace artifact
