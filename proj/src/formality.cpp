#include "artifact/formality.hpp"

#include <algorithm>
#include <sstream>

namespace artifact {

namespace {

bool all_rational(const CycMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_rational()) return false;
  return true;
}

RationalMatrix rational_part(const CycMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).rational_value();
  return r;
}

CycVec lift(const RatVec& v) {
  CycVec out;
  for (const auto& q : v) out.push_back(Cyclotomic(q));
  return out;
}

RatVec rational_vector(const CycVec& v, const char* what) {
  RatVec out;
  for (const auto& c : v) {
    if (!c.is_rational()) throw std::invalid_argument(std::string(what) + ": coefficients must be rational");
    out.push_back(c.rational_value());
  }
  return out;
}

std::vector<CycVec> kernel(const CycMatrix& m) {
  std::vector<CycVec> out;
  if (all_rational(m)) {
    for (const auto& v : kernel_basis(rational_part(m))) out.push_back(lift(v));
    return out;
  }
  return kernel_basis(m);
}

std::size_t matrix_rank(const CycMatrix& m) { return all_rational(m) ? rank(rational_part(m)) : rank(m); }

CycMatrix columns(const std::vector<CycVec>& cols, std::size_t rows) {
  CycMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  return m;
}

// F^* restricted to an invariant subspace, in the coordinates of its basis
CycMatrix restrict_to(const CycMatrix& f, const std::vector<CycVec>& basis) {
  CycMatrix r(basis.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    auto c = GradedAlgebra::coordinates(basis, f * basis[j]);
    if (!c) throw std::logic_error("restrict_to: subspace is not invariant");
    for (std::size_t i = 0; i < basis.size(); ++i) r(i, j) = (*c)[i];
  }
  return r;
}

std::string cyc_list(const CycVec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Formal:
      return "formal";
    case Verdict::NonFormal:
      return "non-formal";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

FormalityCertificate bfm_check(const std::vector<CycMatrix>& fstar, int m) {
  FormalityCertificate c;
  c.witness_kind = "eigenvalue multiplicity";
  if (m < 2 || static_cast<std::size_t>(m) >= fstar.size()) throw std::invalid_argument("bfm_check: need F^* on H^0..H^m, m >= 2");
  for (int n = 1; n < m; ++n) {
    const CycMatrix& f = fstar[n];
    std::size_t k = f.cols() - matrix_rank(f - CycMatrix::identity(f.rows()));
    if (k != 0) {
      c.witness = "K^" + std::to_string(n) + " has dimension " + std::to_string(k);
      return c;
    }
  }
  std::size_t r = eigenvalue_multiplicity(fstar[m], Cyclotomic(1));
  c.witness = "eigenvalue 1 of F^* on H^" + std::to_string(m) + " has multiplicity " + std::to_string(r);
  if (r >= 2) c.verdict = Verdict::NonFormal;
  return c;
}

std::vector<CycMatrix> torus_fiber_action(const TorusMappingTorus& M, int m) {
  CycMatrix g = M.forms.pullback_generators(M.F);
  std::vector<CycMatrix> out;
  for (int n = 0; n <= m; ++n) out.push_back(ext::induced(g, static_cast<unsigned>(n)));
  return out;
}

std::vector<CycMatrix> invariant_fiber_action(const TorusMappingTorus& M, const RealAffineMap& xi, int m) {
  CycMatrix g = M.forms.pullback_generators(M.F), x = M.forms.pullback_generators(xi);
  std::vector<CycMatrix> out;
  for (int n = 0; n <= m; ++n) {
    CycMatrix xn = ext::induced(x, static_cast<unsigned>(n));
    auto basis = invariant_basis(xn.rows(), {xn});
    out.push_back(restrict_to(ext::induced(g, static_cast<unsigned>(n)), basis));
  }
  return out;
}

std::vector<CycMatrix> resolved_fiber_action(const TorusMappingTorus& M, const RealAffineMap& xi) {
  auto out = invariant_fiber_action(M, xi, 2);
  auto fix = fixed_locus(xi);
  CycMatrix perm(fix.size(), fix.size());
  for (std::size_t i = 0; i < fix.size(); ++i) {
    AffineSubtorus img = fix[i].image(M.F);
    std::size_t hits = 0;
    for (std::size_t j = 0; j < fix.size(); ++j)
      if (fix[j].same_as(img)) perm(j, i) = 1, ++hits;
    if (hits != 1) throw std::logic_error("resolved_fiber_action: F does not permute the fixed tori");
  }
  const CycMatrix& h2 = out[2];
  CycMatrix block(h2.rows() + fix.size(), h2.cols() + fix.size());
  for (std::size_t i = 0; i < h2.rows(); ++i)
    for (std::size_t j = 0; j < h2.cols(); ++j) block(i, j) = h2(i, j);
  for (std::size_t i = 0; i < fix.size(); ++i)
    for (std::size_t j = 0; j < fix.size(); ++j) block(h2.rows() + i, h2.cols() + j) = perm(i, j);
  out[2] = block;
  return out;
}

// ---------------------------------------------------------------- monomials

SymMonomialBasis::SymMonomialBasis(std::vector<std::string> generator_labels) : labels(std::move(generator_labels)) {
  const std::size_t k = labels.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) sym2.push_back({i, j});
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b)
      for (std::size_t c = b; c < k; ++c)
        for (std::size_t d = c; d < k; ++d) {
          index4_[{a, b, c, d}] = sym4.size();
          sym4.push_back({a, b, c, d});
        }
}

std::size_t SymMonomialBasis::index2(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // rows before i hold n, n-1, ..., n-i+1 entries
  return i * n() - i * (i - 1) / 2 + (j - i);
}

std::size_t SymMonomialBasis::index4(std::array<std::size_t, 4> m) const {
  std::sort(m.begin(), m.end());
  return index4_.at(m);
}

std::string SymMonomialBasis::sym2_string(const CycVec& v) const {
  std::vector<std::string> names;
  for (const auto& [i, j] : sym2) names.push_back(i == j ? labels[i] + "^2" : labels[i] + "*" + labels[j]);
  return combination_string(v, names);
}

std::string SymMonomialBasis::sym4_string(const CycVec& v) const {
  std::vector<std::string> names;
  for (const auto& m : sym4) {
    std::string s;
    for (std::size_t a = 0; a < 4;) {
      std::size_t b = a;
      while (b < 4 && m[b] == m[a]) ++b;
      s += (s.empty() ? "" : "*") + labels[m[a]] + (b - a > 1 ? "^" + std::to_string(b - a) : "");
      a = b;
    }
    names.push_back(s);
  }
  return combination_string(v, names);
}

CycVec quadratic_product(const SymMonomialBasis& b, const CycVec& p, const CycVec& q) {
  CycVec out(b.sym4.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x].is_zero()) continue;
    for (std::size_t y = 0; y < q.size(); ++y) {
      if (q[y].is_zero()) continue;
      out[b.index4({b.sym2[x][0], b.sym2[x][1], b.sym2[y][0], b.sym2[y][1]})] += p[x] * q[y];
    }
  }
  return out;
}

CycVec sym2_element(const SymMonomialBasis& b, const std::vector<std::pair<Cyclotomic, std::array<std::size_t, 2>>>& terms) {
  CycVec v(b.sym2.size());
  for (const auto& [c, ij] : terms) v[b.index2(ij[0], ij[1])] += c;
  return v;
}

// ---------------------------------------------------------------- E^4

CycVec wedge_of(const GradedAlgebra& A, const E4Space& e, const CycVec& x) {
  CycVec out = A.zero(4);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].is_zero()) continue;
    const auto& [i, j] = e.mono.sym2[k];
    CycVec p = A.multiply(2, e.generators[i], 2, e.generators[j]);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += x[k] * p[r];
  }
  return out;
}

E4Space e4_kernel(const GradedAlgebra& A, const std::vector<CycVec>& generators, const std::vector<std::string>& labels) {
  E4Space e;
  e.mono = SymMonomialBasis(labels);
  e.generators = generators;
  std::vector<CycVec> cols;
  for (std::size_t k = 0; k < e.mono.sym2.size(); ++k) {
    CycVec unit(e.mono.sym2.size());
    unit[k] = 1;
    cols.push_back(wedge_of(A, e, unit));
  }
  e.basis = kernel(columns(cols, A.dim(4)));
  for (std::size_t i = 0; i < e.basis.size(); ++i) {
    e.names.push_back("e" + std::to_string(i + 1));
    e.groups.push_back("E");
  }
  return e;
}

E4Space e4_kernel(const GradedAlgebra& A) {
  std::vector<CycVec> gens;
  for (std::size_t i = 0; i < A.dim(2); ++i) gens.push_back(A.basis_vector(2, i));
  return e4_kernel(A, gens, A.labels(2));
}

E4Space with_basis(const E4Space& e, const std::vector<CycVec>& basis, const std::vector<std::string>& names,
                   const std::vector<std::string>& groups) {
  if (basis.size() != e.basis.size() || names.size() != basis.size() || groups.size() != basis.size())
    throw std::invalid_argument("with_basis: expected " + std::to_string(e.basis.size()) + " elements");
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!GradedAlgebra::coordinates(e.basis, basis[i]))
      throw std::invalid_argument("with_basis: " + names[i] + " is not in E^4");
  if (matrix_rank(columns(basis, e.mono.sym2.size())) != basis.size())
    throw std::invalid_argument("with_basis: elements are linearly dependent");
  E4Space out = e;
  out.basis = basis;
  out.names = names;
  out.groups = groups;
  return out;
}

// ---------------------------------------------------------------- Sym^2(E^4) and B^8

PairBasis::PairBasis(std::size_t n_) : n(n_) {
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) pairs.push_back({a, b});
}

std::size_t PairBasis::index(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  return a * n - a * (a - 1) / 2 + (b - a);
}

CycVec full_symmetrization(const E4Space& e, const CycVec& x) {
  PairBasis pb(e.basis.size());
  CycVec out(e.mono.sym4.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].is_zero()) continue;
    CycVec p = quadratic_product(e.mono, e.basis[pb.pairs[k][0]], e.basis[pb.pairs[k][1]]);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += x[k] * p[r];
  }
  return out;
}

CycMatrix symmetrization_matrix(const E4Space& e) {
  PairBasis pb(e.basis.size());
  std::vector<CycVec> cols;
  for (const auto& [a, b] : pb.pairs) cols.push_back(quadratic_product(e.mono, e.basis[a], e.basis[b]));
  return columns(cols, e.mono.sym4.size());
}

B8Space b8_kernel(const E4Space& e) {
  B8Space b{PairBasis(e.basis.size()), {}};
  if (e.basis.empty()) return b;
  b.basis = kernel(symmetrization_matrix(e));
  return b;
}

Reduced reduce_b8(const E4Space& e, const PairBasis& pairs, const CycVec& x) {
  Reduced r;
  for (std::size_t k = 0; k < pairs.pairs.size(); ++k) {
    const auto& [a, b] = pairs.pairs[k];
    if (e.groups[a] == "N" || e.groups[a] != e.groups[b]) continue;
    r.kept.push_back({a, b});
    r.coeffs.push_back(x[k]);
  }
  return r;
}

std::string Reduced::to_string(const E4Space& e) const {
  std::vector<std::string> names;
  for (const auto& [a, b] : kept) names.push_back(e.names[a] + "." + e.names[b]);
  std::string s = combination_string(coeffs, names);
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------- Bianchi-Massey tensor

namespace {

struct SymbolTable {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;  // (element, component)
  explicit SymbolTable(const PairingOracle& o) {
    for (std::size_t e = 0; e < o.elements.size(); ++e)
      if (!o.elements[e].product)
        for (const auto& [r, w] : o.elements[e].weights) index[{e, r}] = index.size();
  }
};

// [gamma(e) ^ alpha^2(e')] as a linear form in the symbols, plus its constant from closed shifts
void add_value(const PairingOracle& o, const SymbolTable& sym, std::size_t e, std::size_t e2, const Rational& c, RatVec& row,
               Rational& constant) {
  const auto& E = o.elements[e];
  const auto& E2 = o.elements[e2];
  if (E.product || E2.product) return;
  for (const auto& [r, w] : E2.weights) {
    auto it = sym.index.find({e, r});
    if (it != sym.index.end()) row[it->second] += c * w;
  }
  auto sh = o.closed_shift.find(e);
  if (sh != o.closed_shift.end())
    for (const auto& [r, w] : E2.weights) constant += c * w * sh->second;
}

struct Relations {
  std::vector<RatVec> rows;
  std::vector<Rational> values;
};

Relations linking_relations(const PairingOracle& o, const SymbolTable& sym) {
  Relations rel;
  // primitive of sum W_j tau_j^2 as a combination of the gamma(e)
  std::vector<std::size_t> comps;
  for (const auto& E : o.elements)
    for (const auto& [r, w] : E.weights) comps.push_back(r);
  std::sort(comps.begin(), comps.end());
  comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
  auto pos = [&](std::size_t r) { return static_cast<std::size_t>(std::lower_bound(comps.begin(), comps.end(), r) - comps.begin()); };
  RationalMatrix W(comps.size(), o.elements.size());
  for (std::size_t e = 0; e < o.elements.size(); ++e)
    if (!o.elements[e].product)
      for (const auto& [r, w] : o.elements[e].weights) W(pos(r), e) = w;
  for (const auto& link : o.links) {
    RatVec target(comps.size());
    for (const auto& [r, w] : link.chain) {
      if (!std::binary_search(comps.begin(), comps.end(), r)) throw OracleGap("linking datum " + link.label + " uses an unknown component");
      target[pos(r)] = w;
    }
    auto c = solve_linear(W, target);
    if (!c) throw OracleGap("linking datum " + link.label + ": chain is not a boundary of the chosen primitives");
    RatVec row(sym.index.size());
    for (std::size_t e = 0; e < o.elements.size(); ++e) {
      if ((*c)[e] == 0) continue;
      for (const auto& [r, t] : link.target) {
        auto it = sym.index.find({e, r});
        if (it != sym.index.end()) row[it->second] += (*c)[e] * t;
      }
    }
    rel.rows.push_back(row);
    rel.values.push_back(o.scale * link.lk);
  }
  return rel;
}

Rational evaluate(const RatVec& f, const Rational& constant, const Relations& rel, const std::string& what) {
  bool zero = std::all_of(f.begin(), f.end(), [](const Rational& q) { return q == 0; });
  if (zero) return constant;
  if (rel.rows.empty()) throw OracleGap(what + ": no linking data");
  RationalMatrix R(f.size(), rel.rows.size());
  for (std::size_t k = 0; k < rel.rows.size(); ++k)
    for (std::size_t i = 0; i < f.size(); ++i) R(i, k) = rel.rows[k][i];
  auto y = solve_linear(R, f);
  if (!y) throw OracleGap(what + ": value is not determined by the linking data");
  Rational v = constant;
  for (std::size_t k = 0; k < y->size(); ++k) v += (*y)[k] * rel.values[k];
  return v;
}

}  // namespace

BianchiMasseyTable bianchi_massey(const E4Space& e, const B8Space& b8, const PairingOracle& oracle) {
  if (oracle.elements.size() != e.basis.size()) throw OracleGap("oracle does not cover the E^4 basis");
  SymbolTable sym(oracle);
  Relations rel = linking_relations(oracle, sym);
  BianchiMasseyTable out;
  bool symmetric = true, nonzero = false;
  std::ostringstream table;
  for (std::size_t k = 0; k < b8.basis.size(); ++k) {
    RatVec x = rational_vector(b8.basis[k], "bianchi_massey");
    RatVec f(sym.index.size()), g(sym.index.size());
    Rational cf, cg;
    for (std::size_t p = 0; p < x.size(); ++p) {
      if (x[p] == 0) continue;
      const auto& [a, b] = b8.pairs.pairs[p];
      add_value(oracle, sym, a, b, x[p], f, cf);
      add_value(oracle, sym, b, a, x[p], g, cg);
    }
    const std::string what = "B8 basis vector " + std::to_string(k + 1);
    Rational v = evaluate(f, cf, rel, what);
    Rational w = evaluate(g, cg, rel, what + " (swapped)");
    if (v != w) symmetric = false;
    if (v != 0) nonzero = true;
    out.values.push_back(v);
    table << (k ? " " : "") << to_string(v);
  }
  auto& c = out.certificate;
  c.witness_kind = "F table";
  c.witness = "F on " + std::to_string(b8.basis.size()) + " basis vectors of B8: [" + table.str() + "]";
  c.notes = oracle.conventions;
  if (!symmetric) {
    c.notes.push_back("F is not symmetric under swapping the factors");
    c.verdict = Verdict::Inconclusive;
  } else {
    c.verdict = nonzero ? Verdict::NonFormal : Verdict::Formal;
  }
  return out;
}

NamedE4 named_e4(const ResolvedAlgebra& alg) {
  const GradedAlgebra& A = alg.algebra();
  const std::size_t n = A.dim(2);
  std::vector<CycVec> gens;
  for (std::size_t i = 0; i < n; ++i) gens.push_back(A.basis_vector(2, i));
  E4Space kernel_space = e4_kernel(A, gens, A.labels(2));
  const SymMonomialBasis& mono = kernel_space.mono;

  std::vector<CycVec> basis;
  std::vector<std::string> names, groups;
  PairingOracle oracle;
  auto name = [](char c, std::size_t i, std::size_t j) {
    return std::string(1, c) + "_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      CycVec p = A.multiply(2, gens[i], 2, gens[j]);
      if (!std::all_of(p.begin(), p.end(), [](const Cyclotomic& c) { return c.is_zero(); })) continue;
      basis.push_back(sym2_element(mono, {{Cyclotomic(1), {i, j}}}));
      names.push_back(name('n', i, j));
      groups.push_back("N");
      oracle.elements.push_back({true, {}});
    }
  // classes of generators with proportional nonzero squares; the root has the smallest leading coefficient
  std::vector<CycVec> squares;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> lead;
  for (std::size_t i = 0; i < n; ++i) {
    squares.push_back(A.multiply(2, gens[i], 2, gens[i]));
    const CycVec& s = squares.back();
    auto it = std::find_if(s.begin(), s.end(), [](const Cyclotomic& c) { return !c.is_zero(); });
    lead.push_back(static_cast<std::size_t>(it - s.begin()));
    if (it == s.end()) continue;
    auto same = std::find_if(classes.begin(), classes.end(), [&](const std::vector<std::size_t>& cl) {
      std::size_t r = cl[0];
      if (lead[r] != lead[i]) return false;
      Cyclotomic c = s[lead[i]] / squares[r][lead[i]];
      for (std::size_t x = 0; x < s.size(); ++x)
        if (s[x] != c * squares[r][x]) return false;
      return c.is_rational();
    });
    if (same == classes.end())
      classes.push_back({i});
    else
      same->push_back(i);
  }
  for (const auto& cl : classes) {
    std::size_t r = cl[0];
    for (std::size_t i : cl) {
      const Cyclotomic &a = squares[i][lead[i]], &b = squares[r][lead[r]];
      if (a.is_rational() && b.is_rational() && abs(a.rational_value()) < abs(b.rational_value())) r = i;
    }
    for (std::size_t i : cl) {
      if (i == r) continue;
      Cyclotomic c = squares[i][lead[i]] / squares[r][lead[r]];
      basis.push_back(sym2_element(mono, {{c, {r, r}}, {Cyclotomic(-1), {i, i}}}));
      names.push_back(name('m', r, i));
      groups.push_back("M" + std::to_string(r + 1));
      oracle.elements.push_back({false, {{r, c.rational_value()}, {i, Rational(-1)}}});
    }
  }
  oracle.conventions = {"gamma(n_ij) = 0", "gamma(m_rj) ^ tau_q^2 = 0 for q not in {r, j}",
                        "integral of gamma ^ alpha^2 = " + to_string(oracle.scale) + " * lk"};
  return {with_basis(kernel_space, basis, names, groups), oracle};
}

std::vector<LinkingDatum> level_linking_data(const TorusMappingTorus& M, const ResolvedAlgebra& alg,
                                             const std::vector<std::pair<MTMap, Rational>>& averaging) {
  const TorusModel& T = M.forms.torus();
  struct Comp {
    std::size_t key;
    std::string id;
    AffinePiece piece;
  };
  std::vector<std::vector<Comp>> levels;
  for (std::size_t j = 0; j < alg.components().size(); ++j) {
    const auto& L = alg.components()[j];
    if (!L.piece || L.piece->level == Level::Spans) continue;
    Rational t = L.piece->level == Level::Zero ? Rational(0) : Rational(1, 2);
    const IntMatrix& d = L.piece->fiber.directions;
    Comp c{alg.offset(j, 2), L.id, AffinePiece::level(t, L.piece->fiber.basepoint, d, calibrated_sign(T, d))};
    auto same = std::find_if(levels.begin(), levels.end(), [&](const std::vector<Comp>& g) {
      return g[0].piece.t == t && g[0].piece.directions == d;
    });
    if (same == levels.end())
      levels.push_back({c});
    else
      same->push_back(c);
  }
  std::vector<LinkingDatum> out;
  for (const auto& g : levels) {
    for (std::size_t a = 0; a < g.size(); ++a)
      for (std::size_t b = a + 1; b < g.size(); ++b)
        for (std::size_t c = b + 1; c < g.size(); ++c)
          for (std::size_t e = c + 1; e < g.size(); ++e)
            for (auto [x, y, u, w] : {std::array{a, b, c, e}, std::array{a, c, b, e}, std::array{a, e, b, c},
                                       std::array{c, e, a, b}, std::array{b, e, a, c}, std::array{b, c, a, e}}) {
            const Comp &Nc = g[y], &Nd = g[x], &Nb = g[u], &Nq = g[w];
            RatVec v(Nc.piece.base.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = Nc.piece.base[i] - Nd.piece.base[i];
            std::string chain = Nc.id + " - " + Nd.id, target = Nb.id + " - " + Nq.id;
            AffinePiece minusNd = Nd.piece, minusNq = Nq.piece;
            minusNd.sign = -minusNd.sign;
            minusNq.sign = -minusNq.sign;
            Cobordism C{{AffinePiece::level_slab(Nd.piece.t, Nd.piece.base, v, Nd.piece.directions, Nd.piece.sign)},
                        {chain, {Nc.piece, minusNd}}};
            if (!boundary_matches(C, M.F)) throw std::logic_error("level_linking_data: bad cobordism for " + chain);
            LinkingDatum l;
            l.chain = {{Nc.key, Rational(1)}, {Nd.key, Rational(-1)}};
            l.target = {{Nb.key, Rational(1)}, {Nq.key, Rational(-1)}};
            l.lk = linking_number(T, M.F, C, AffineCycle{target, {Nb.piece, minusNq}}, averaging);
            l.label = "lk(" + chain + ", " + target + ")";
            out.push_back(l);
          }
  }
  return out;
}

MasseyFromLinking triple_massey_from_linking(const Rational& lk, const std::string& hypothesis) {
  return {Rational(8) * lk, lk != 0, hypothesis};
}

FormalityCertificate massey_certificate(const MasseyFromLinking& m) {
  FormalityCertificate c;
  c.witness_kind = "Massey value";
  c.witness = "pairing of the triple Massey product with tau_1 - tau_2 = " + to_string(m.value);
  if (!m.hypothesis.empty()) c.notes.push_back(m.hypothesis);
  c.verdict = m.nonvanishing ? Verdict::NonFormal : Verdict::Inconclusive;
  return c;
}

FormalityCertificate low_b2_formality(const ResolvedAlgebra& alg) {
  FormalityCertificate c;
  c.witness_kind = "b2 duality";
  const GradedAlgebra& A = alg.algebra();
  if (A.dim(1) != 0) {
    c.witness = "b1 = " + std::to_string(A.dim(1));
    return c;
  }
  const std::size_t b2 = A.dim(2);
  if (b2 > 3) {
    c.witness = "b2 = " + std::to_string(b2) + " > 3";
    return c;
  }
  for (const Rational& s : {Rational(0), Rational(1, 10), Rational(1, 100)}) {
    CycVec phi;
    for (SymPoly p : alg.phi()) {
      for (const auto& v : p.variables()) p = p.substitute(v, v == alg.parameter() ? SymPoly(Cyclotomic(s)) : SymPoly(1));
      phi.push_back(p.constant_term());
    }
    std::vector<CycVec> cols;
    for (std::size_t i = 0; i < b2; ++i) cols.push_back(A.multiply(2, A.basis_vector(2, i), 3, phi));
    if (matrix_rank(columns(cols, A.dim(5))) == b2) {
      c.verdict = Verdict::Formal;
      c.witness = "b2 = " + std::to_string(b2) + " and [phi~] at " + alg.parameter() + " = " + to_string(s) +
                  " gives an isomorphism H^2 -> H^5";
      return c;
    }
  }
  c.witness = "no tested [phi~] gives an isomorphism H^2 -> H^5";
  return c;
}

}  // namespace artifact
