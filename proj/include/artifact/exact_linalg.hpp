#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace artifact {

using Int = mpz_class;
using Rational = mpq_class;

std::string to_string(const Rational& q);
std::string to_string(const Int& z);
Rational parse_rational(std::string_view s);

// Element of Q(zeta_n), stored as a polynomial in zeta_n of degree < phi(n).
// Binary operations between different conductors lift both sides to the lcm.
class Cyclotomic {
 public:
  Cyclotomic();
  Cyclotomic(long v);  // NOLINT(google-explicit-constructor)
  Cyclotomic(const Rational& q, unsigned n = 1);  // NOLINT
  Cyclotomic(unsigned n, std::vector<Rational> coeffs);

  static Cyclotomic zeta(unsigned n, long k = 1);
  // sqrt(3) and i, both living in Q(zeta_12)
  static Cyclotomic sqrt3();
  static Cyclotomic imag_unit();

  unsigned conductor() const { return n_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  Cyclotomic embed(unsigned m) const;
  Cyclotomic conj() const;
  Cyclotomic inverse() const;
  Cyclotomic real_part() const;
  Cyclotomic imag_part() const;

  bool is_zero() const;
  bool is_rational() const;
  bool is_real() const;
  Rational rational_value() const;
  // sign of a real element; throws if the element is not real
  int real_sign() const;
  double approx_real() const;
  double approx_imag() const;

  std::string to_string() const;

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  Cyclotomic& operator/=(const Cyclotomic& o);
  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

 private:
  unsigned n_ = 1;
  std::vector<Rational> c_;
};

unsigned euler_phi(unsigned n);
// integer coefficients of the n-th cyclotomic polynomial, low degree first
const std::vector<Int>& cyclotomic_polynomial(unsigned n);
// Accepts sums of terms like "3/8*sqrt3", "-i", "2*zeta12^5", "1/2*i*sqrt3",
// or an explicit coefficient list "[12: c0, c1, c2, c3]".
Cyclotomic parse_cyclotomic(std::string_view s);

// ---------------------------------------------------------------- scalars

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const Cyclotomic& c) { return c.is_zero(); }
inline bool is_zero(const Int& z) { return sgn(z) == 0; }
inline Rational inverse(const Rational& q) { return 1 / q; }
inline Cyclotomic inverse(const Cyclotomic& c) { return c.inverse(); }
inline std::string scalar_string(const Rational& q) { return to_string(q); }
inline std::string scalar_string(const Cyclotomic& c) { return c.to_string(); }
inline std::string scalar_string(const Int& z) { return to_string(z); }

// ---------------------------------------------------------------- matrices

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c) {}
  Matrix(std::size_t r, std::size_t c, std::vector<T> entries) : r_(r), c_(c), a_(std::move(entries)) {
    if (a_.size() != r * c) throw std::invalid_argument("Matrix: entry count mismatch");
  }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows[0].size() : 0;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("Matrix: ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  const std::vector<T>& entries() const { return a_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero_matrix() const {
    for (const auto& x : a_)
      if (!is_zero(x)) return false;
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix p(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (is_zero(x)) continue;
        for (std::size_t j = 0; j < b.c_; ++j) p(i, j) += x * b(k, j);
      }
    return p;
  }
  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    if (a.c_ != v.size()) throw std::invalid_argument("Matrix: shape mismatch in product");
    std::vector<T> out(a.r_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k)
        if (!is_zero(a(i, k)) && !is_zero(v[k])) out[i] += a(i, k) * v[k];
    return out;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < r_; ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < c_; ++j) s += (j ? ", " : "") + scalar_string((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }

 private:
  void check_same(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("Matrix: shape mismatch");
  }
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> a_;
};

using RationalMatrix = Matrix<Rational>;
using CycMatrix = Matrix<Cyclotomic>;
using IntMatrix = Matrix<Int>;

template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
  Matrix<T> m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

template <class T>
Matrix<T> power(const Matrix<T>& m, long k) {
  if (k < 0) throw std::invalid_argument("power: negative exponent");
  Matrix<T> r = Matrix<T>::identity(m.rows()), b = m;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

// Reduced row echelon form over a field; returns pivot columns.
template <class T>
std::vector<std::size_t> rref_in_place(Matrix<T>& m) {
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && is_zero(m(p, col))) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    T inv = inverse(m(row, col));
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      T f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!is_zero(m(row, j))) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

std::size_t bareiss_rank(const RationalMatrix& m);

template <class T>
std::size_t rank(const Matrix<T>& m) {
  Matrix<T> w = m;
  return rref_in_place(w).size();
}
template <>
inline std::size_t rank(const RationalMatrix& m) {
  return bareiss_rank(m);
}

// Echelonized basis of the right kernel (one vector per free column).
template <class T>
std::vector<std::vector<T>> kernel_basis(const Matrix<T>& m) {
  Matrix<T> w = m;
  auto piv = rref_in_place(w);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    std::vector<T> v(m.cols());
    v[f] = T(1);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -w(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Fraction-free elimination for rational input.
template <>
std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m);

// Standard basis vectors completing the column space to the whole target.
template <class T>
std::vector<std::vector<T>> cokernel_basis(const Matrix<T>& m) {
  std::vector<std::vector<T>> reps;
  Matrix<T> acc = m;
  std::size_t r = rank(acc);
  for (std::size_t i = 0; i < m.rows() && r < m.rows(); ++i) {
    Matrix<T> e(m.rows(), 1);
    e(i, 0) = T(1);
    Matrix<T> trial = hstack(acc, e);
    std::size_t r2 = rank(trial);
    if (r2 > r) {
      std::vector<T> v(m.rows());
      v[i] = T(1);
      reps.push_back(std::move(v));
      acc = std::move(trial);
      r = r2;
    }
  }
  return reps;
}

// Solve m x = b; nullopt when inconsistent. Returns one particular solution.
template <class T>
std::optional<std::vector<T>> solve_linear(const Matrix<T>& m, const std::vector<T>& b) {
  Matrix<T> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto piv = rref_in_place(aug);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  std::vector<T> x(m.cols());
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, m.cols());
  return x;
}

template <class T>
std::optional<Matrix<T>> inverse_matrix(const Matrix<T>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  std::size_t n = m.rows();
  Matrix<T> aug = hstack(m, Matrix<T>::identity(n));
  auto piv = rref_in_place(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

template <class T>
T determinant(Matrix<T> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  std::size_t n = m.rows();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(m(p, c))) ++p;
    if (p == n) return T(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    T inv = inverse(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      T f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

Int determinant(const IntMatrix& m);

// ---------------------------------------------------------------- polynomials

// Dense univariate polynomial, coefficients low degree first, trailing zeros trimmed.
template <class T>
struct Poly {
  std::vector<T> c;

  std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }
  bool is_zero_poly() const { return c.empty(); }
  void trim() {
    while (!c.empty() && is_zero(c.back())) c.pop_back();
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }

  std::string to_string(const std::string& var = "x") const {
    if (c.empty()) return "0";
    std::string s;
    for (std::size_t k = c.size(); k-- > 0;) {
      if (is_zero(c[k])) continue;
      std::string coef = scalar_string(c[k]);
      if (!s.empty()) s += " + ";
      if (k == 0)
        s += coef;
      else {
        if (coef != "1") s += "(" + coef + ")*";
        s += var + (k > 1 ? "^" + std::to_string(k) : "");
      }
    }
    return s;
  }
};

// remainder and quotient after dividing by the monic (x - root)
template <class T>
std::pair<Poly<T>, T> divide_linear(const Poly<T>& p, const T& root) {
  Poly<T> q;
  if (p.c.empty()) return {q, T(0)};
  q.c.assign(p.c.size() - 1, T(0));
  T carry(0);
  for (std::size_t k = p.c.size(); k-- > 0;) {
    T v = p.c[k] + carry * root;
    if (k == 0) return {q, v};
    q.c[k - 1] = v;
    carry = v;
  }
  return {q, T(0)};
}

template <class T>
Matrix<T> evaluate(const Poly<T>& p, const Matrix<T>& m) {
  std::size_t n = m.rows();
  Matrix<T> acc(n, n);
  for (std::size_t k = p.c.size(); k-- > 0;) {
    acc = acc * m;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += p.c[k];
  }
  return acc;
}

// Monic annihilating polynomial of least degree, via Krylov dependence of I, A, A^2, ...
template <class T>
Poly<T> minimal_polynomial(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("minimal_polynomial: not square");
  std::size_t n = m.rows();
  std::vector<Matrix<T>> powers{Matrix<T>::identity(n)};
  for (std::size_t k = 1; k <= n; ++k) {
    powers.push_back(powers.back() * m);
    // columns: vec(A^0..A^{k-1}); rhs: vec(A^k)
    Matrix<T> sys(n * n, k);
    std::vector<T> rhs(n * n);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t e = 0; e < n * n; ++e) sys(e, j) = powers[j].entries()[e];
    for (std::size_t e = 0; e < n * n; ++e) rhs[e] = powers[k].entries()[e];
    auto sol = solve_linear(sys, rhs);
    if (sol) {
      Poly<T> p;
      p.c.resize(k + 1);
      for (std::size_t j = 0; j < k; ++j) p.c[j] = -(*sol)[j];
      p.c[k] = T(1);
      return p;
    }
  }
  throw std::logic_error("minimal_polynomial: no dependence found");
}

template <class T>
std::size_t root_multiplicity(Poly<T> p, const T& root) {
  std::size_t mult = 0;
  while (!p.c.empty()) {
    auto [q, r] = divide_linear(p, root);
    if (!is_zero(r)) break;
    p = std::move(q);
    ++mult;
  }
  return mult;
}

template <class T>
std::size_t eigenvalue_multiplicity(const Matrix<T>& m, const T& lambda) {
  return root_multiplicity(minimal_polynomial(m), lambda);
}

// ---------------------------------------------------------------- integer lattices

struct SmithForm {
  IntMatrix U, D, V;  // U * m * V = D
  std::vector<Int> diagonal() const;
  std::size_t rank() const;
};

SmithForm smith_normal_form(const IntMatrix& m);

struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // d1 | d2 | ..., each > 1

  std::string to_string() const;
  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.free_rank == b.free_rank && a.torsion == b.torsion;
  }
};

// Z^rows / image(m)
AbelianGroup cokernel_group(const IntMatrix& m);
AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b);

// Solutions of m x = t (mod Z^rows), x taken mod Z^cols.
struct AffineSolutionFamily {
  std::vector<std::vector<Rational>> basepoints;  // each reduced to [0,1)
  IntMatrix directions;                            // cols x d, integral, saturated

  std::size_t dimension() const { return directions.cols(); }
};

std::optional<AffineSolutionFamily> solve_congruence(const IntMatrix& m, const std::vector<Rational>& t);

// Reduce every coordinate into [0,1).
std::vector<Rational> reduce_mod_one(std::vector<Rational> v);
Rational frac(const Rational& q);
Int floor_rational(const Rational& q);
bool is_integer(const Rational& q);

// Whether x - y lies in span_R(directions) + Z^n.
bool same_coset(const std::vector<Rational>& x, const std::vector<Rational>& y, const IntMatrix& directions);

IntMatrix to_int_matrix(const RationalMatrix& m);
RationalMatrix to_rational_matrix(const IntMatrix& m);
CycMatrix to_cyc_matrix(const RationalMatrix& m);
CycMatrix to_cyc_matrix(const IntMatrix& m);

// Fixed subspace dimension of an involution (or any matrix) over F_p, with basis.
std::vector<std::vector<long>> fixed_subspace_mod_p(const std::vector<std::vector<long>>& action, long p);

}  // namespace artifact
