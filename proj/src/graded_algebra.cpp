#include "artifact/graded_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace artifact {

// ---------------------------------------------------------------- SymPoly

SymPoly::SymPoly(const Cyclotomic& c) {
  if (!c.is_zero()) terms_[{}] = c;
}

SymPoly SymPoly::var(const std::string& name) {
  SymPoly p;
  p.terms_[{{name, 1u}}] = Cyclotomic(1);
  return p;
}

void SymPoly::add_term(const Monomial& m, const Cyclotomic& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool SymPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Cyclotomic SymPoly::constant_term() const {
  auto it = terms_.find({});
  return it == terms_.end() ? Cyclotomic(0) : it->second;
}

std::set<std::string> SymPoly::variables() const {
  std::set<std::string> v;
  for (const auto& [m, c] : terms_)
    for (const auto& [name, e] : m) v.insert(name);
  return v;
}

unsigned SymPoly::degree_in(const std::string& v) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& [name, e] : m)
      if (name == v) d = std::max(d, e);
  return d;
}

SymPoly SymPoly::coefficient(const std::string& v, unsigned k) const {
  SymPoly out;
  for (const auto& [m, c] : terms_) {
    unsigned e = 0;
    Monomial rest;
    for (const auto& term : m) {
      if (term.first == v)
        e = term.second;
      else
        rest.push_back(term);
    }
    if (e == k) out.add_term(rest, c);
  }
  return out;
}

SymPoly SymPoly::substitute(const std::string& v, const SymPoly& value) const {
  SymPoly out;
  for (unsigned k = 0; k <= degree_in(v); ++k) {
    SymPoly c = coefficient(v, k);
    if (c.is_zero()) continue;
    SymPoly pw(1);
    for (unsigned i = 0; i < k; ++i) pw *= value;
    out += c * pw;
  }
  return out;
}

SymPoly SymPoly::operator-() const {
  SymPoly r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

SymPoly& SymPoly::operator+=(const SymPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SymPoly& SymPoly::operator*=(const SymPoly& o) {
  SymPoly r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      std::map<std::string, unsigned> e;
      for (const auto& [n, k] : m1) e[n] += k;
      for (const auto& [n, k] : m2) e[n] += k;
      r.add_term(Monomial(e.begin(), e.end()), c1 * c2);
    }
  return *this = std::move(r);
}

namespace {

bool compound(const std::string& s) {
  return s.find(" + ") != std::string::npos || s.find(" - ") != std::string::npos;
}

std::string scaled(const std::string& coef, const std::string& what) {
  if (what.empty()) return coef;
  if (coef == "1") return what;
  if (coef == "-1") return "-" + what;
  if (compound(coef)) return "(" + coef + ")*" + what;
  return coef + "*" + what;
}

std::string join_terms(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i][0] == '-')
      s += " - " + parts[i].substr(1);
    else
      s += " + " + parts[i];
  }
  return s;
}

}  // namespace

std::string SymPoly::to_string() const {
  std::vector<std::string> parts;
  for (const auto& [m, c] : terms_) {
    std::string mono;
    for (const auto& [n, e] : m) mono += (mono.empty() ? "" : "*") + n + (e > 1 ? "^" + std::to_string(e) : "");
    parts.push_back(scaled(c.to_string(), mono));
  }
  return join_terms(parts);
}

std::string combination_string(const std::vector<std::string>& coeffs, const std::vector<std::string>& labels) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == "0") continue;
    std::string l = labels[i];
    if (compound(l)) l = "(" + l + ")";
    parts.push_back(scaled(coeffs[i], l));
  }
  return join_terms(parts);
}

std::string combination_string(const CycVec& coeffs, const std::vector<std::string>& labels) {
  std::vector<std::string> c;
  for (const auto& x : coeffs) c.push_back(x.to_string());
  return combination_string(c, labels);
}

std::string combination_string(const SymVec& coeffs, const std::vector<std::string>& labels) {
  std::vector<std::string> c;
  for (const auto& x : coeffs) c.push_back(x.to_string());
  return combination_string(c, labels);
}

// ---------------------------------------------------------------- GradedAlgebra

GradedAlgebra::GradedAlgebra(std::vector<std::vector<std::string>> labels) : labels_(std::move(labels)) {
  std::size_t n = labels_.size();
  table_.assign(n, std::vector<std::vector<CycVec>>(n));
  integral_.assign(n ? labels_.back().size() : 0, Cyclotomic(0));
}

std::vector<std::size_t> GradedAlgebra::betti() const {
  std::vector<std::size_t> b;
  for (const auto& l : labels_) b.push_back(l.size());
  return b;
}

void GradedAlgebra::fill_products(const ProductFn& fn) {
  for (int a = 0; a <= top(); ++a)
    for (int b = 0; a + b <= top(); ++b) {
      auto& cell = table_[a][b];
      cell.assign(dim(a) * dim(b), CycVec());
      for (std::size_t i = 0; i < dim(a); ++i)
        for (std::size_t j = 0; j < dim(b); ++j) {
          CycVec v = fn(a, i, b, j);
          if (v.size() != dim(a + b)) throw std::logic_error("fill_products: wrong product dimension");
          cell[i * dim(b) + j] = std::move(v);
        }
    }
}

const CycVec& GradedAlgebra::product(int a, std::size_t i, int b, std::size_t j) const {
  return table_.at(a).at(b).at(i * dim(b) + j);
}

CycVec GradedAlgebra::multiply(int a, const CycVec& x, int b, const CycVec& y) const {
  CycVec out(dim(a + b));
  if (a + b > top()) return out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j].is_zero()) continue;
      const CycVec& p = product(a, i, b, j);
      Cyclotomic c = x[i] * y[j];
      for (std::size_t k = 0; k < p.size(); ++k)
        if (!p[k].is_zero()) out[k] += c * p[k];
    }
  }
  return out;
}

SymVec GradedAlgebra::multiply(int a, const SymVec& x, int b, const SymVec& y) const {
  SymVec out(dim(a + b));
  if (a + b > top()) return out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j].is_zero()) continue;
      const CycVec& p = product(a, i, b, j);
      SymPoly c = x[i] * y[j];
      for (std::size_t k = 0; k < p.size(); ++k)
        if (!p[k].is_zero()) out[k] += c * SymPoly(p[k]);
    }
  }
  return out;
}

Cyclotomic GradedAlgebra::integrate(const CycVec& x) const {
  Cyclotomic s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) s += x[i] * integral_[i];
  return s;
}

SymPoly GradedAlgebra::integrate(const SymVec& x) const {
  SymPoly s;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * SymPoly(integral_[i]);
  return s;
}

CycVec GradedAlgebra::basis_vector(int d, std::size_t i) const {
  CycVec v(dim(d));
  v.at(i) = 1;
  return v;
}

CycMatrix GradedAlgebra::pairing_matrix(int d) const {
  CycMatrix m(dim(d), dim(top() - d));
  for (std::size_t i = 0; i < dim(d); ++i)
    for (std::size_t j = 0; j < dim(top() - d); ++j) m(i, j) = integrate(product(d, i, top() - d, j));
  return m;
}

CycVec GradedAlgebra::dual_class(int d, const CycVec& values) const {
  auto sol = solve_linear(pairing_matrix(d), values);
  if (!sol) throw std::domain_error("dual_class: pairing is degenerate or values inconsistent");
  if (rank(pairing_matrix(d)) != dim(top() - d)) throw std::domain_error("dual_class: pairing is degenerate");
  return *sol;
}

std::optional<CycVec> GradedAlgebra::coordinates(const std::vector<CycVec>& basis, const CycVec& x) {
  if (basis.empty()) {
    for (const auto& c : x)
      if (!c.is_zero()) return std::nullopt;
    return CycVec();
  }
  return solve_linear(CycMatrix::from_columns(basis, x.size()), x);
}

GradedAlgebra GradedAlgebra::subalgebra(const std::vector<std::vector<CycVec>>& bases,
                                        std::vector<std::vector<std::string>> labels) const {
  GradedAlgebra sub(std::move(labels));
  for (int d = 0; d <= top(); ++d)
    if (sub.dim(d) != bases[d].size()) throw std::invalid_argument("subalgebra: label count mismatch");
  // a left inverse per degree turns ambient vectors into sub-coordinates
  std::vector<CycMatrix> cols(top() + 1);
  for (int d = 0; d <= top(); ++d) cols[d] = CycMatrix::from_columns(bases[d], dim(d));
  sub.fill_products([&](int a, std::size_t i, int b, std::size_t j) {
    CycVec v = multiply(a, bases[a][i], b, bases[b][j]);
    if (bases[a + b].empty()) {
      for (const auto& c : v)
        if (!c.is_zero()) throw std::domain_error("subalgebra: not closed under products");
      return CycVec();
    }
    auto x = solve_linear(cols[a + b], v);
    if (!x) throw std::domain_error("subalgebra: not closed under products");
    return *x;
  });
  CycVec f(sub.dim(top()));
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = integrate(bases[top()][i]);
  sub.set_integral(f);
  return sub;
}

bool GradedAlgebra::check_graded_commutative(std::string* why) const {
  for (int a = 0; a <= top(); ++a)
    for (int b = a; a + b <= top(); ++b)
      for (std::size_t i = 0; i < dim(a); ++i)
        for (std::size_t j = 0; j < dim(b); ++j) {
          CycVec x = product(a, i, b, j), y = product(b, j, a, i);
          if ((a * b) % 2)
            for (auto& c : y) c = -c;
          if (x != y) {
            if (why) *why = "graded commutativity fails for " + labels_[a][i] + " * " + labels_[b][j];
            return false;
          }
        }
  return true;
}

bool GradedAlgebra::check_associative(int max_degree, std::string* why) const {
  for (int a = 1; a <= max_degree; ++a)
    for (int b = 1; b <= max_degree; ++b)
      for (int c = 1; c <= max_degree; ++c) {
        if (a + b + c > top()) continue;
        for (std::size_t i = 0; i < dim(a); ++i)
          for (std::size_t j = 0; j < dim(b); ++j) {
            const CycVec& ab = product(a, i, b, j);
            for (std::size_t k = 0; k < dim(c); ++k) {
              CycVec lhs = multiply(a + b, ab, c, basis_vector(c, k));
              CycVec rhs = multiply(a, basis_vector(a, i), b + c, product(b, j, c, k));
              if (lhs != rhs) {
                if (why) *why = "associativity fails for " + labels_[a][i] + ", " + labels_[b][j] + ", " + labels_[c][k];
                return false;
              }
            }
          }
      }
  return true;
}

bool GradedAlgebra::check_unit(std::string* why) const {
  if (dim(0) != 1) {
    if (why) *why = "H^0 is not one-dimensional";
    return false;
  }
  for (int d = 0; d <= top(); ++d)
    for (std::size_t i = 0; i < dim(d); ++i)
      if (product(0, 0, d, i) != basis_vector(d, i) || product(d, i, 0, 0) != basis_vector(d, i)) {
        if (why) *why = "unit fails on " + labels_[d][i];
        return false;
      }
  return true;
}

bool GradedAlgebra::betti_palindromic() const {
  auto b = betti();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] != b[b.size() - 1 - i]) return false;
  return true;
}

std::vector<CycVec> invariant_basis(std::size_t n, const std::vector<CycMatrix>& actions) {
  if (actions.empty()) {
    std::vector<CycVec> all;
    for (std::size_t i = 0; i < n; ++i) {
      CycVec e(n);
      e[i] = 1;
      all.push_back(e);
    }
    return all;
  }
  CycMatrix stacked(n * actions.size(), n);
  for (std::size_t g = 0; g < actions.size(); ++g)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) stacked(g * n + i, j) = actions[g](i, j) - Cyclotomic(i == j ? 1 : 0);
  return kernel_basis(stacked);
}

}  // namespace artifact
