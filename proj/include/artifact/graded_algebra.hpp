#pragma once

#include "artifact/exact_linalg.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace artifact {

using CycVec = std::vector<Cyclotomic>;

// Multivariate polynomial with cyclotomic coefficients in named commuting symbols
// (the deformation parameters s, s1, s2 and the positive pairings y_j).
class SymPoly {
 public:
  using Monomial = std::vector<std::pair<std::string, unsigned>>;  // sorted by name

  SymPoly() = default;
  SymPoly(const Cyclotomic& c);  // NOLINT(google-explicit-constructor)
  SymPoly(long c) : SymPoly(Cyclotomic(c)) {}  // NOLINT(google-explicit-constructor)
  static SymPoly var(const std::string& name);

  const std::map<Monomial, Cyclotomic>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Cyclotomic constant_term() const;
  std::set<std::string> variables() const;
  unsigned degree_in(const std::string& v) const;
  // coefficient of v^k as a polynomial in the other symbols
  SymPoly coefficient(const std::string& v, unsigned k) const;
  SymPoly substitute(const std::string& v, const SymPoly& value) const;
  SymPoly evaluate_zero(const std::string& v) const { return coefficient(v, 0); }
  std::string to_string() const;

  SymPoly operator-() const;
  SymPoly& operator+=(const SymPoly& o);
  SymPoly& operator-=(const SymPoly& o);
  SymPoly& operator*=(const SymPoly& o);
  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator*(SymPoly a, const SymPoly& b) { return a *= b; }
  friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const SymPoly& a, const SymPoly& b) { return !(a == b); }

 private:
  void add_term(const Monomial& m, const Cyclotomic& c);
  std::map<Monomial, Cyclotomic> terms_;
};

inline bool is_zero(const SymPoly& p) { return p.is_zero(); }
inline std::string scalar_string(const SymPoly& p) { return p.to_string(); }

using SymVec = std::vector<SymPoly>;

// "c1*l1 + c2*l2", dropping zero terms and unit coefficients.
std::string combination_string(const std::vector<std::string>& coeffs, const std::vector<std::string>& labels);
std::string combination_string(const CycVec& coeffs, const std::vector<std::string>& labels);
std::string combination_string(const SymVec& coeffs, const std::vector<std::string>& labels);

// Finite-dimensional graded-commutative algebra over Q(zeta) with a chosen basis in
// each degree, dense structure constants and an integration functional on the top degree.
class GradedAlgebra {
 public:
  GradedAlgebra() = default;
  explicit GradedAlgebra(std::vector<std::vector<std::string>> labels);

  int top() const { return static_cast<int>(labels_.size()) - 1; }
  std::size_t dim(int d) const { return d < 0 || d > top() ? 0 : labels_[d].size(); }
  const std::vector<std::string>& labels(int d) const { return labels_.at(d); }
  std::vector<std::size_t> betti() const;

  using ProductFn = std::function<CycVec(int, std::size_t, int, std::size_t)>;
  void fill_products(const ProductFn& fn);
  const CycVec& product(int a, std::size_t i, int b, std::size_t j) const;
  CycVec multiply(int a, const CycVec& x, int b, const CycVec& y) const;
  SymVec multiply(int a, const SymVec& x, int b, const SymVec& y) const;

  void set_integral(CycVec f) { integral_ = std::move(f); }
  const CycVec& integral() const { return integral_; }
  Cyclotomic integrate(const CycVec& x) const;
  SymPoly integrate(const SymVec& x) const;

  CycVec basis_vector(int d, std::size_t i) const;
  CycVec zero(int d) const { return CycVec(dim(d)); }
  // M(i,j) = integral of e_i (degree d) times e_j (degree top - d)
  CycMatrix pairing_matrix(int d) const;
  // class c of degree top - d with integral(e_i c) = values[i] for the degree-d basis
  CycVec dual_class(int d, const CycVec& values) const;

  // Subalgebra spanned by the given vectors (per degree); throws if not closed.
  GradedAlgebra subalgebra(const std::vector<std::vector<CycVec>>& bases, std::vector<std::vector<std::string>> labels) const;
  // coordinates of x (degree d) in a sub-basis; nullopt if outside the span
  static std::optional<CycVec> coordinates(const std::vector<CycVec>& basis, const CycVec& x);

  std::string format(int d, const CycVec& x) const { return combination_string(x, labels(d)); }
  std::string format(int d, const SymVec& x) const { return combination_string(x, labels(d)); }

  // Property checks; on failure, a short description is written to why.
  bool check_graded_commutative(std::string* why = nullptr) const;
  bool check_associative(int max_degree, std::string* why = nullptr) const;
  bool check_unit(std::string* why = nullptr) const;
  bool betti_palindromic() const;

 private:
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<std::vector<CycVec>>> table_;  // [a][b][i * dim(b) + j]
  CycVec integral_;
};

// Basis of the common fixed space of the given square matrices (echelonized).
std::vector<CycVec> invariant_basis(std::size_t n, const std::vector<CycMatrix>& actions);

}  // namespace artifact
