#include "artifact/exact_linalg.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace artifact {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}
std::string to_string(const Int& z) { return z.get_str(); }

Rational parse_rational(std::string_view s) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty()) throw std::invalid_argument("parse_rational: empty input");
  if (t[0] == '+') t.erase(0, 1);
  Rational q;
  if (q.set_str(t, 10) != 0) throw std::invalid_argument("parse_rational: bad number '" + t + "'");
  if (q.get_den() == 0) throw std::invalid_argument("parse_rational: zero denominator");
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- cyclotomic polynomials

unsigned euler_phi(unsigned n) {
  unsigned r = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    r -= r / p;
  }
  if (n > 1) r -= r / n;
  return r;
}

namespace {

using IntPoly = std::vector<Int>;

// exact quotient of a by the monic b
IntPoly divide_exact(IntPoly a, const IntPoly& b) {
  std::size_t db = b.size() - 1;
  IntPoly q(a.size() - db, 0);
  for (std::size_t k = a.size(); k-- > db;) {
    Int lead = a[k];
    q[k - db] = lead;
    if (lead == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= lead * b[j];
  }
  return q;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const std::vector<Int>& cyclotomic_polynomial(unsigned n) {
  if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
  static std::map<unsigned, IntPoly> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  IntPoly p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (unsigned d = 1; d < n; ++d)
    if (n % d == 0) p = divide_exact(p, cyclotomic_polynomial(d));
  std::lock_guard<std::mutex> lock(cache_mutex());
  return cache.emplace(n, std::move(p)).first->second;
}

namespace {

using QPoly = std::vector<Rational>;

void trim(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

// reduce a polynomial in zeta_n modulo Phi_n, padded to phi(n) coefficients
QPoly reduce(QPoly p, unsigned n) {
  const IntPoly& f = cyclotomic_polynomial(n);
  std::size_t d = f.size() - 1;
  for (std::size_t k = p.size(); k-- > d;) {
    if (sgn(p[k]) == 0) continue;
    Rational lead = p[k];
    for (std::size_t j = 0; j <= d; ++j) p[k - d + j] -= lead * f[j];
  }
  p.resize(d);
  return p;
}

std::pair<QPoly, QPoly> divmod(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  Rational lead_inv = 1 / b.back();
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    Rational c = a.back() * lead_inv;
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (sgn(b[j]) != 0) r[i + j] += a[i] * b[j];
  }
  return r;
}

QPoly sub(QPoly a, const QPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

unsigned lcm_u(unsigned a, unsigned b) { return a / std::gcd(a, b) * b; }

}  // namespace

Cyclotomic::Cyclotomic() : n_(1), c_(1, Rational(0)) {}
Cyclotomic::Cyclotomic(long v) : n_(1), c_(1, Rational(v)) {}
Cyclotomic::Cyclotomic(const Rational& q, unsigned n) : n_(n), c_(euler_phi(n), Rational(0)) {
  c_[0] = q;
  c_[0].canonicalize();
}
Cyclotomic::Cyclotomic(unsigned n, std::vector<Rational> coeffs) : n_(n) {
  if (n == 0) throw std::invalid_argument("Cyclotomic: conductor must be positive");
  c_ = reduce(std::move(coeffs), n);
}

Cyclotomic Cyclotomic::zeta(unsigned n, long k) {
  long e = ((k % static_cast<long>(n)) + n) % n;
  QPoly p(static_cast<std::size_t>(e) + 1);
  p[static_cast<std::size_t>(e)] = 1;
  return Cyclotomic(n, std::move(p));
}

Cyclotomic Cyclotomic::sqrt3() { return zeta(12, 1) * Cyclotomic(2) - zeta(12, 3); }
Cyclotomic Cyclotomic::imag_unit() { return zeta(12, 3); }

Cyclotomic Cyclotomic::embed(unsigned m) const {
  if (m % n_ != 0) throw std::invalid_argument("Cyclotomic::embed: conductor does not divide target");
  if (m == n_) return *this;
  unsigned step = m / n_;
  QPoly p(c_.size() * step + 1);
  for (std::size_t k = 0; k < c_.size(); ++k) p[k * step] = c_[k];
  return Cyclotomic(m, std::move(p));
}

Cyclotomic Cyclotomic::conj() const {
  QPoly p(n_);
  for (std::size_t k = 0; k < c_.size(); ++k) p[(n_ - k) % n_] += c_[k];
  return Cyclotomic(n_, std::move(p));
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::domain_error("Cyclotomic: inverse of zero");
  const IntPoly& fi = cyclotomic_polynomial(n_);
  QPoly r0(fi.begin(), fi.end()), r1 = c_;
  trim(r1);
  QPoly s0, s1{Rational(1)};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    QPoly s2 = sub(s0, mul(q, s1));
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 is a nonzero constant since Phi_n is irreducible
  Rational inv = 1 / r0[0];
  for (auto& x : s0) x *= inv;
  return Cyclotomic(n_, std::move(s0));
}

Cyclotomic Cyclotomic::real_part() const { return (*this + conj()) * Cyclotomic(Rational(1, 2)); }

Cyclotomic Cyclotomic::imag_part() const {
  return (*this - conj()) * Cyclotomic(Rational(1, 2)) * imag_unit().conj();
}

bool Cyclotomic::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool Cyclotomic::is_rational() const {
  for (std::size_t k = 1; k < c_.size(); ++k)
    if (sgn(c_[k]) != 0) return false;
  return true;
}

bool Cyclotomic::is_real() const { return *this == conj(); }

Rational Cyclotomic::rational_value() const {
  if (!is_rational()) throw std::domain_error("Cyclotomic: not rational: " + to_string());
  return c_.empty() ? Rational(0) : c_[0];
}

int Cyclotomic::real_sign() const {
  if (!is_real()) throw std::domain_error("Cyclotomic::real_sign: not real: " + to_string());
  if (is_zero()) return 0;
  if (is_rational()) return sgn(c_[0]);
  if (12 % n_ == 0) {
    // a + b*sqrt3 with rational a, b
    Cyclotomic x = embed(12);
    const auto& v = x.coeffs();
    Rational a = v[0] + v[2] / 2, b = v[1] / 2;
    int sa = sgn(a), sb = sgn(b);
    if (sa == sb || sb == 0) return sa;
    if (sa == 0) return sb;
    // compare a^2 with 3 b^2
    int cmp = sgn(a * a - 3 * b * b);
    return cmp > 0 ? sa : sb;
  }
  // numeric evaluation with growing precision; the value is known to be nonzero
  Rational l1 = 0;
  for (const auto& q : c_) l1 += abs(q);
  for (mpfr_prec_t prec = 128; prec <= 1 << 16; prec *= 2) {
    mpfr_t pi, acc, term, ang, qv;
    mpfr_inits2(prec, pi, acc, term, ang, qv, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_set_zero(acc, 1);
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (sgn(c_[k]) == 0) continue;
      mpfr_mul_ui(ang, pi, static_cast<unsigned long>(2 * k), MPFR_RNDN);
      mpfr_div_ui(ang, ang, n_, MPFR_RNDN);
      mpfr_cos(term, ang, MPFR_RNDN);
      mpfr_set_q(qv, c_[k].get_mpq_t(), MPFR_RNDN);
      mpfr_mul(term, term, qv, MPFR_RNDN);
      mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    // crude error bound: (|c|_1 + 1) * n * 2^(16 - prec)
    mpfr_set_q(qv, Rational(l1 + 1).get_mpq_t(), MPFR_RNDU);
    mpfr_mul_ui(qv, qv, n_ + 1, MPFR_RNDU);
    mpfr_mul_2si(qv, qv, 16 - static_cast<long>(prec), MPFR_RNDU);
    int s = 0;
    if (mpfr_cmpabs(acc, qv) > 0) s = mpfr_sgn(acc);
    mpfr_clears(pi, acc, term, ang, qv, static_cast<mpfr_ptr>(nullptr));
    if (s != 0) return s;
  }
  throw std::runtime_error("Cyclotomic::real_sign: precision exhausted");
}

double Cyclotomic::approx_real() const {
  const double tau = 2.0 * std::acos(-1.0);
  double s = 0;
  for (std::size_t k = 0; k < c_.size(); ++k) s += c_[k].get_d() * std::cos(tau * double(k) / n_);
  return s;
}

double Cyclotomic::approx_imag() const {
  const double tau = 2.0 * std::acos(-1.0);
  double s = 0;
  for (std::size_t k = 0; k < c_.size(); ++k) s += c_[k].get_d() * std::sin(tau * double(k) / n_);
  return s;
}

namespace {

void append_term(std::string& out, const Rational& c, const std::string& unit) {
  if (sgn(c) == 0) return;
  Rational a = abs(c);
  std::string body;
  if (unit.empty())
    body = a.get_str();
  else if (a == 1)
    body = unit;
  else
    body = a.get_str() + "*" + unit;
  if (out.empty())
    out = (sgn(c) < 0 ? "-" : "") + body;
  else
    out += (sgn(c) < 0 ? " - " : " + ") + body;
}

}  // namespace

std::string Cyclotomic::to_string() const {
  if (is_rational()) return c_.empty() ? "0" : c_[0].get_str();
  std::string out;
  if (12 % n_ == 0) {
    Cyclotomic e = embed(12);
    const auto& x = e.coeffs();
    Rational d = x[2] / 2, a = x[0] + d, b = x[1] / 2, c = x[3] + b;
    append_term(out, a, "");
    append_term(out, b, "sqrt3");
    append_term(out, c, "i");
    append_term(out, d, "i*sqrt3");
    return out;
  }
  for (std::size_t k = 0; k < c_.size(); ++k)
    append_term(out, c_[k], k == 0 ? "" : "zeta" + std::to_string(n_) + (k > 1 ? "^" + std::to_string(k) : ""));
  return out;
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  unsigned m = lcm_u(n_, o.n_);
  if (m != n_) *this = embed(m);
  if (o.n_ == m) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  } else {
    Cyclotomic e = o.embed(m);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += e.c_[k];
  }
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) { return *this += -o; }

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  unsigned m = lcm_u(n_, o.n_);
  Cyclotomic a = embed(m), b = o.embed(m);
  if (m == 1) {
    c_[0] = a.c_[0] * b.c_[0];
    return *this;
  }
  *this = Cyclotomic(m, mul(a.c_, b.c_));
  return *this;
}

Cyclotomic& Cyclotomic::operator/=(const Cyclotomic& o) { return *this *= o.inverse(); }

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.n_ == b.n_) return a.c_ == b.c_;
  unsigned m = lcm_u(a.n_, b.n_);
  return a.embed(m).c_ == b.embed(m).c_;
}

// ---------------------------------------------------------------- parsing

namespace {

struct CycParser {
  std::string s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char ch) {
    skip();
    if (pos < s.size() && s[pos] == ch) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("parse_cyclotomic: " + why + " in '" + s + "'");
  }
  unsigned number() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected integer");
    return static_cast<unsigned>(std::stoul(s.substr(start, pos - start)));
  }
  Rational rational() {
    skip();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
    return parse_rational(s.substr(start, pos - start));
  }
  Cyclotomic factor() {
    skip();
    if (eat_word("sqrt3")) return Cyclotomic::sqrt3();
    if (eat_word("zeta")) {
      unsigned n = number();
      long k = 1;
      if (eat('^')) k = static_cast<long>(number());
      return Cyclotomic::zeta(n, k);
    }
    if (eat_word("i")) return Cyclotomic::imag_unit();
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) return Cyclotomic(rational());
    if (eat('(')) {
      Cyclotomic v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    fail("unexpected token");
  }
  Cyclotomic term() {
    Cyclotomic v = factor();
    while (eat('*')) v *= factor();
    return v;
  }
  Cyclotomic sum() {
    skip();
    Cyclotomic acc;
    bool first = true;
    while (true) {
      int sign = 1;
      if (eat('-'))
        sign = -1;
      else if (!eat('+') && !first)
        break;
      Cyclotomic t = term();
      acc += sign > 0 ? t : -t;
      first = false;
      skip();
      if (pos >= s.size() || s[pos] == ')') break;
    }
    return acc;
  }
  Cyclotomic list() {
    unsigned n = number();
    if (!eat(':')) fail("expected ':'");
    std::vector<Rational> c;
    do {
      c.push_back(rational());
    } while (eat(','));
    if (!eat(']')) fail("expected ']'");
    return Cyclotomic(n, std::move(c));
  }
};

}  // namespace

Cyclotomic parse_cyclotomic(std::string_view sv) {
  CycParser p{std::string(sv)};
  Cyclotomic v = p.eat('[') ? p.list() : p.sum();
  p.skip();
  if (p.pos != p.s.size()) p.fail("trailing characters");
  return v;
}

// ---------------------------------------------------------------- rational elimination

namespace {

// Integer rows, each row scaled by the lcm of its denominators.
IntMatrix clear_denominators(const RationalMatrix& m) {
  IntMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) l = lcm(l, Int(m(i, j).get_den()));
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  return a;
}

// Fraction-free forward elimination; returns pivot columns, echelon form left in a.
std::vector<std::size_t> bareiss_echelon(IntMatrix& a) {
  std::vector<std::size_t> piv;
  Int prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    for (std::size_t i = row + 1; i < a.rows(); ++i) {
      for (std::size_t j = col + 1; j < a.cols(); ++j) {
        a(i, j) = a(row, col) * a(i, j) - a(i, col) * a(row, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      a(i, col) = 0;
    }
    prev = a(row, col);
    piv.push_back(col);
    ++row;
  }
  return piv;
}

}  // namespace

std::size_t bareiss_rank(const RationalMatrix& m) {
  IntMatrix a = clear_denominators(m);
  return bareiss_echelon(a).size();
}

template <>
std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m) {
  IntMatrix a = clear_denominators(m);
  auto piv = bareiss_echelon(a);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    std::vector<Rational> v(m.cols());
    v[f] = 1;
    for (std::size_t r = piv.size(); r-- > 0;) {
      Rational s = 0;
      for (std::size_t j = piv[r] + 1; j < m.cols(); ++j)
        if (a(r, j) != 0 && sgn(v[j]) != 0) s += Rational(a(r, j)) * v[j];
      v[piv[r]] = -s / Rational(a(r, piv[r]));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------- Smith normal form

std::vector<Int> SmithForm::diagonal() const {
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
  return d;
}

std::size_t SmithForm::rank() const {
  std::size_t r = 0;
  for (const auto& x : diagonal())
    if (x != 0) ++r;
  return r;
}

namespace {

void swap_rows(IntMatrix& a, std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(k, j));
}
void swap_cols(IntMatrix& a, std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, k));
}
// row_i += f * row_k
void add_row(IntMatrix& a, std::size_t i, std::size_t k, const Int& f) {
  for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += f * a(k, j);
}
void add_col(IntMatrix& a, std::size_t i, std::size_t k, const Int& f) {
  for (std::size_t r = 0; r < a.rows(); ++r) a(r, i) += f * a(r, k);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  std::size_t R = m.rows(), C = m.cols();
  SmithForm sf{IntMatrix::identity(R), m, IntMatrix::identity(C)};
  IntMatrix &U = sf.U, &D = sf.D, &V = sf.V;
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    // smallest nonzero entry of the trailing block
    bool found = false;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (D(i, j) != 0 && (!found || abs(D(i, j)) < abs(D(bi, bj)))) {
          found = true;
          bi = i;
          bj = j;
        }
    if (!found) break;
    swap_rows(D, t, bi);
    swap_rows(U, t, bi);
    swap_cols(D, t, bj);
    swap_cols(V, t, bj);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (D(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        add_row(D, i, t, -q);
        add_row(U, i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (D(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        add_col(D, j, t, -q);
        add_col(V, j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) {
        // move the smallest remainder onto the diagonal and repeat
        std::size_t si = t, sj = t;
        for (std::size_t i = t + 1; i < R; ++i)
          if (D(i, t) != 0 && abs(D(i, t)) < abs(D(si, sj))) si = i, sj = t;
        for (std::size_t j = t + 1; j < C; ++j)
          if (D(t, j) != 0 && abs(D(t, j)) < abs(D(si, sj))) si = t, sj = j;
        swap_rows(D, t, si);
        swap_rows(U, t, si);
        swap_cols(D, t, sj);
        swap_cols(V, t, sj);
        continue;
      }
      // divisibility of the remaining block
      bool divides = true;
      for (std::size_t i = t + 1; i < R && divides; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
            add_row(D, t, i, 1);
            add_row(U, t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (D(t, t) < 0) {
      add_row(D, t, t, -2);
      add_row(U, t, t, -2);
    }
  }
  return sf;
}

std::string AbelianGroup::to_string() const {
  std::string s;
  if (free_rank > 0) s = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
  std::vector<std::pair<Int, int>> runs;
  for (const auto& d : torsion) {
    if (!runs.empty() && runs.back().first == d)
      ++runs.back().second;
    else
      runs.push_back({d, 1});
  }
  for (const auto& [d, k] : runs) {
    if (!s.empty()) s += " + ";
    s += "Z" + d.get_str() + (k > 1 ? "^" + std::to_string(k) : "");
  }
  return s.empty() ? "0" : s;
}

AbelianGroup cokernel_group(const IntMatrix& m) {
  SmithForm sf = smith_normal_form(m);
  AbelianGroup g;
  std::size_t r = 0;
  for (const auto& d : sf.diagonal()) {
    if (d == 0) continue;
    ++r;
    if (abs(d) > 1) g.torsion.push_back(abs(d));
  }
  g.free_rank = m.rows() - r;
  return g;
}

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
  std::size_t n = a.torsion.size() + b.torsion.size();
  IntMatrix m(n, n);
  std::size_t k = 0;
  for (const auto& d : a.torsion) m(k, k) = d, ++k;
  for (const auto& d : b.torsion) m(k, k) = d, ++k;
  AbelianGroup g = cokernel_group(m);
  g.free_rank += a.free_rank + b.free_rank;
  return g;
}

// ---------------------------------------------------------------- congruences

Rational frac(const Rational& q) { return q - Rational(floor_rational(q)); }

Int floor_rational(const Rational& q) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::vector<Rational> reduce_mod_one(std::vector<Rational> v) {
  for (auto& x : v) x = frac(x);
  return v;
}

std::optional<AffineSolutionFamily> solve_congruence(const IntMatrix& m, const std::vector<Rational>& t) {
  if (t.size() != m.rows()) throw std::invalid_argument("solve_congruence: size mismatch");
  SmithForm sf = smith_normal_form(m);
  std::size_t R = m.rows(), C = m.cols(), r = sf.rank();
  // U m V = D, so with x = V y the system reads D y = U t mod Z
  std::vector<Rational> u(R);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < R; ++j)
      if (sf.U(i, j) != 0) u[i] += Rational(sf.U(i, j)) * t[j];
  for (std::size_t i = r; i < R; ++i)
    if (!is_integer(u[i])) return std::nullopt;

  AffineSolutionFamily fam;
  fam.directions = IntMatrix(C, C - r);
  for (std::size_t j = r; j < C; ++j)
    for (std::size_t i = 0; i < C; ++i) fam.directions(i, j - r) = sf.V(i, j);

  std::vector<Int> d = sf.diagonal();
  std::vector<Int> idx(r, 0);
  while (true) {
    std::vector<Rational> y(C);
    for (std::size_t i = 0; i < r; ++i) y[i] = (u[i] + Rational(idx[i])) / Rational(d[i]);
    std::vector<Rational> x(C);
    for (std::size_t i = 0; i < C; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if (sf.V(i, j) != 0) x[i] += Rational(sf.V(i, j)) * y[j];
    fam.basepoints.push_back(reduce_mod_one(std::move(x)));
    std::size_t k = 0;
    while (k < r) {
      if (++idx[k] < d[k]) break;
      idx[k] = 0;
      ++k;
    }
    if (k == r) break;
  }
  return fam;
}

bool same_coset(const std::vector<Rational>& x, const std::vector<Rational>& y, const IntMatrix& directions) {
  std::size_t n = x.size();
  if (directions.cols() == 0) {
    for (std::size_t i = 0; i < n; ++i)
      if (!is_integer(x[i] - y[i])) return false;
    return true;
  }
  SmithForm sf = smith_normal_form(directions);
  std::size_t r = sf.rank();
  for (std::size_t i = r; i < n; ++i) {
    Rational w = 0;
    for (std::size_t j = 0; j < n; ++j) w += Rational(sf.U(i, j)) * (x[j] - y[j]);
    if (!is_integer(w)) return false;
  }
  return true;
}

IntMatrix to_int_matrix(const RationalMatrix& m) {
  IntMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integer(m(i, j))) throw std::domain_error("to_int_matrix: non-integral entry");
      a(i, j) = m(i, j).get_num();
    }
  return a;
}

RationalMatrix to_rational_matrix(const IntMatrix& m) {
  RationalMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = Rational(m(i, j));
  return a;
}

CycMatrix to_cyc_matrix(const RationalMatrix& m) {
  CycMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = Cyclotomic(m(i, j));
  return a;
}

CycMatrix to_cyc_matrix(const IntMatrix& m) { return to_cyc_matrix(to_rational_matrix(m)); }

std::vector<std::vector<long>> fixed_subspace_mod_p(const std::vector<std::vector<long>>& action, long p) {
  std::size_t n = action.size();
  auto md = [p](long v) { return ((v % p) + p) % p; };
  auto inv = [&](long a) {
    long r = 1, b = md(a), e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  std::vector<std::vector<long>> a(n, std::vector<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = md(action[i][j] - (i == j ? 1 : 0));
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t q = row;
    while (q < n && a[q][col] == 0) ++q;
    if (q == n) continue;
    std::swap(a[q], a[row]);
    long iv = inv(a[row][col]);
    for (auto& x : a[row]) x = x * iv % p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || a[i][col] == 0) continue;
      long f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) a[i][j] = md(a[i][j] - f * a[row][j]);
    }
    piv.push_back(col);
    ++row;
  }
  std::vector<bool> is_piv(n, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<long>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<long> v(n, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = md(-a[r][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace artifact
