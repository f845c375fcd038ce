#include "artifact/mt_cohomology.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace artifact {

namespace ext {

namespace {

struct Tables {
  std::vector<std::vector<unsigned>> by_degree;
  std::vector<std::size_t> index;
};

const Tables& tables(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, Tables> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n > 16) throw std::invalid_argument("ext: too many generators");
  Tables t;
  t.by_degree.resize(n + 1);
  t.index.assign(std::size_t(1) << n, 0);
  std::vector<std::vector<unsigned>> lists(n + 1);
  for (unsigned mask = 0; mask < (1u << n); ++mask) lists[__builtin_popcount(mask)].push_back(mask);
  for (unsigned m = 0; m <= n; ++m) {
    auto& L = lists[m];
    // lexicographic on the sorted list of set bits
    auto bits = [](unsigned x) {
      std::vector<unsigned> b;
      for (unsigned i = 0; x; ++i, x >>= 1)
        if (x & 1u) b.push_back(i);
      return b;
    };
    std::sort(L.begin(), L.end(), [&](unsigned a, unsigned b) { return bits(a) < bits(b); });
    for (std::size_t i = 0; i < L.size(); ++i) t.index[L[i]] = i;
    t.by_degree[m] = L;
  }
  return cache.emplace(n, std::move(t)).first->second;
}

}  // namespace

const std::vector<unsigned>& masks(unsigned n, unsigned m) { return tables(n).by_degree.at(m); }
std::size_t index_of(unsigned n, unsigned mask) { return tables(n).index.at(mask); }

int reorder_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  unsigned inversions = 0;
  for (unsigned i = 0; i < 32; ++i)
    if (a >> i & 1u) inversions += __builtin_popcount(b & ((1u << i) - 1u));
  return inversions % 2 ? -1 : 1;
}

std::size_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

CycVec wedge(unsigned n, unsigned a, const CycVec& x, unsigned b, const CycVec& y) {
  if (a + b > n) return {};
  const auto& ma = masks(n, a);
  const auto& mb = masks(n, b);
  CycVec out(binomial(n, a + b));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j].is_zero()) continue;
      int s = reorder_sign(ma[i], mb[j]);
      if (s == 0) continue;
      Cyclotomic c = x[i] * y[j];
      std::size_t k = index_of(n, ma[i] | mb[j]);
      if (s > 0)
        out[k] += c;
      else
        out[k] -= c;
    }
  }
  return out;
}

CycMatrix induced(const CycMatrix& images, unsigned m) {
  const unsigned ns = static_cast<unsigned>(images.rows());
  const unsigned nt = static_cast<unsigned>(images.cols());
  const auto& tm = masks(nt, m);
  CycMatrix out(binomial(ns, m), tm.size());
  std::vector<CycVec> gen(nt);
  for (unsigned i = 0; i < nt; ++i) gen[i] = images.column(i);
  for (std::size_t c = 0; c < tm.size(); ++c) {
    CycVec acc{Cyclotomic(1)};
    unsigned deg = 0;
    for (unsigned i = 0; i < nt; ++i) {
      if (!(tm[c] >> i & 1u)) continue;
      acc = wedge(ns, deg, acc, 1, gen[i]);
      ++deg;
    }
    for (std::size_t r = 0; r < acc.size(); ++r) out(r, c) = acc[r];
  }
  return out;
}

}  // namespace ext

// ---------------------------------------------------------------- forms on T^6

namespace {

CycMatrix generator_frame(const TorusModel& torus) {
  CycMatrix W(6, 6);
  for (unsigned j = 0; j < 3; ++j) {
    W(2 * j, 2 * j) = torus.lattices[j].w1;
    W(2 * j, 2 * j + 1) = torus.lattices[j].w2;
    W(2 * j + 1, 2 * j) = torus.lattices[j].w1.conj();
    W(2 * j + 1, 2 * j + 1) = torus.lattices[j].w2.conj();
  }
  return W;
}

std::vector<unsigned> bit_list(unsigned mask) {
  std::vector<unsigned> b;
  for (unsigned i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) b.push_back(i);
  return b;
}

CycMatrix inverse_or_throw(const CycMatrix& m, const char* what) {
  auto inv = inverse_matrix(m);
  if (!inv) throw std::logic_error(what);
  return *inv;
}

}  // namespace

ComplexForms::ComplexForms(TorusModel torus) : torus_(std::move(torus)), W_(generator_frame(torus_)) {
  const Cyclotomic i = Cyclotomic::imag_unit();
  const Cyclotomic half(Rational(1, 2));
  real_basis_.resize(7);
  real_labels_.resize(7);
  for (unsigned m = 0; m <= 6; ++m) {
    const auto& ms = ext::masks(6, m);
    std::vector<CycVec> cols;
    auto& labels = real_labels_[m];
    for (std::size_t k = 0; k < ms.size(); ++k) {
      auto [cm, sigma] = conjugate(ms[k]);
      std::size_t kc = ext::index_of(6, cm);
      CycVec v(ms.size());
      std::string name = monomial_label(ms[k]);
      if (kc == k) {
        if (sigma > 0) {
          v[k] = 1;
          labels.push_back(name);
        } else {
          v[k] = i;
          labels.push_back("i " + name);
        }
        cols.push_back(v);
      } else if (k < kc) {
        CycVec re(ms.size()), im(ms.size());
        re[k] = half;
        re[kc] = half * Cyclotomic(sigma);
        Cyclotomic inv2i = (Cyclotomic(2) * i).inverse();
        im[k] = inv2i;
        im[kc] = -inv2i * Cyclotomic(sigma);
        cols.push_back(re);
        labels.push_back("Re " + name);
        cols.push_back(im);
        labels.push_back("Im " + name);
      }
    }
    real_basis_[m] = CycMatrix::from_columns(cols, ms.size());
  }
}

std::string ComplexForms::monomial_label(unsigned mask) {
  if (mask == 0) return "1";
  std::string s = "dz_{";
  for (unsigned b : bit_list(mask)) {
    s += std::to_string(b / 2 + 1);
    if (b % 2) s += "b";
  }
  return s + "}";
}

std::pair<unsigned, unsigned> ComplexForms::bidegree(unsigned mask) {
  unsigned p = 0, q = 0;
  for (unsigned b : bit_list(mask)) (b % 2 ? q : p)++;
  return {p, q};
}

std::pair<unsigned, int> ComplexForms::conjugate(unsigned mask) {
  std::vector<unsigned> sw;
  for (unsigned b : bit_list(mask)) sw.push_back(b ^ 1u);
  unsigned inv = 0;
  for (std::size_t a = 0; a < sw.size(); ++a)
    for (std::size_t b = a + 1; b < sw.size(); ++b)
      if (sw[a] > sw[b]) ++inv;
  unsigned out = 0;
  for (unsigned b : sw) out |= 1u << b;
  return {out, inv % 2 ? -1 : 1};
}

CycVec ComplexForms::conjugate(unsigned m, const CycVec& form) {
  const auto& ms = ext::masks(6, m);
  CycVec out(form.size());
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (form[k].is_zero()) continue;
    auto [cm, sigma] = conjugate(ms[k]);
    out[ext::index_of(6, cm)] += form[k].conj() * Cyclotomic(sigma);
  }
  return out;
}

CycMatrix ComplexForms::pullback_generators(const RealAffineMap& g) const {
  // g^*(du) = M^T du in lattice coordinates, conjugated into the complex generators
  CycMatrix WT = W_.transpose();
  CycMatrix WinvT = inverse_or_throw(WT, "ComplexForms: degenerate lattice");
  return WinvT * to_cyc_matrix(g.M).transpose() * WT;
}

CycMatrix ComplexForms::pullback_generators(const SesquilinearAffineMap& g) {
  CycMatrix P(6, 6);
  for (unsigned j = 0; j < 3; ++j)
    for (unsigned k = 0; k < 3; ++k) {
      P(2 * k, 2 * j) = g.A(j, k);
      P(2 * k + 1, 2 * j) = g.B(j, k);
      P(2 * k, 2 * j + 1) = g.B(j, k).conj();
      P(2 * k + 1, 2 * j + 1) = g.A(j, k).conj();
    }
  return P;
}

CycMatrix ComplexForms::restriction_generators(const IntMatrix& directions) const {
  return (W_ * to_cyc_matrix(directions)).transpose();
}

Cyclotomic ComplexForms::top_integral() const {
  return determinant(W_) * Cyclotomic(torus_.orientation_sign());
}

CycVec ComplexForms::volume_form() const {
  const Cyclotomic half_i = Cyclotomic::imag_unit() * Cyclotomic(Rational(1, 2));
  CycVec v(1);
  v[0] = half_i * half_i * half_i;
  return v;
}

PullbackAction pullback_on_pq(const SesquilinearAffineMap& map, unsigned p, unsigned q) {
  PullbackAction out;
  out.p = p;
  out.q = q;
  if (map.holomorphic()) {
    out.src_p = p;
    out.src_q = q;
  } else if (map.antiholomorphic()) {
    out.src_p = q;
    out.src_q = p;
    out.conjugating = true;
  } else {
    throw std::invalid_argument("pullback_on_pq: map is neither holomorphic nor antiholomorphic");
  }
  const unsigned m = p + q;
  CycMatrix full = ext::induced(ComplexForms::pullback_generators(map), m);
  std::vector<std::size_t> cols, rows;
  const auto& ms = ext::masks(6, m);
  for (std::size_t k = 0; k < ms.size(); ++k) {
    auto bd = ComplexForms::bidegree(ms[k]);
    if (bd == std::make_pair(p, q)) {
      cols.push_back(k);
      out.col_labels.push_back(ComplexForms::monomial_label(ms[k]));
    }
    if (bd == std::make_pair(out.src_p, out.src_q)) {
      rows.push_back(k);
      out.row_labels.push_back(ComplexForms::monomial_label(ms[k]));
    }
  }
  out.matrix = CycMatrix(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out.matrix(r, c) = full(rows[r], cols[c]);
  return out;
}

// ---------------------------------------------------------------- mapping torus

FiberModel standard_fiber(unsigned n, const CycMatrix& monodromy, const std::string& prefix) {
  FiberModel f;
  f.n = n;
  f.monodromy = monodromy;
  f.preferred.resize(n + 1);
  f.preferred_labels.resize(n + 1);
  for (unsigned m = 0; m <= n; ++m) {
    const auto& ms = ext::masks(n, m);
    f.preferred[m] = CycMatrix::identity(ms.size());
    for (unsigned mask : ms) {
      if (mask == 0) {
        f.preferred_labels[m].push_back("1");
        continue;
      }
      std::string s = prefix + "_{";
      for (unsigned b : bit_list(mask)) s += std::to_string(b + 1);
      f.preferred_labels[m].push_back(s + "}");
    }
  }
  return f;
}

FiberModel complex_fiber(const ComplexForms& forms, const RealAffineMap& F) {
  FiberModel f;
  f.n = 6;
  f.monodromy = forms.pullback_generators(F);
  for (unsigned m = 0; m <= 6; ++m) {
    f.preferred.push_back(forms.real_basis(m));
    f.preferred_labels.push_back(forms.real_labels(m));
  }
  f.top_integral = forms.top_integral();
  return f;
}

MappingTorusCohomology::MappingTorusCohomology(FiberModel fiber) : fiber_(std::move(fiber)) {
  const unsigned n = fiber_.n;
  if (fiber_.preferred.size() != n + 1) {
    FiberModel std_model = standard_fiber(n, fiber_.monodromy);
    fiber_.preferred = std_model.preferred;
    fiber_.preferred_labels = std_model.preferred_labels;
  }
  pull_.resize(n + 1);
  K_.resize(n + 1);
  C_.resize(n + 1);
  K_labels_.resize(n + 1);
  C_labels_.resize(n + 1);
  K_inv_.resize(n + 1);
  C_inv_.resize(n + 1);
  image_rank_.resize(n + 1);

  for (unsigned m = 0; m <= n; ++m) {
    const std::size_t N = ext::binomial(n, m);
    pull_[m] = ext::induced(fiber_.monodromy, m);
    const CycMatrix& P = fiber_.preferred[m];
    CycMatrix Pinv = inverse_or_throw(P, "MappingTorusCohomology: singular preferred basis");
    CycMatrix D = Pinv * pull_[m] * P - CycMatrix::identity(N);
    for (const auto& v : kernel_basis(D)) {
      K_[m].push_back(P * v);
      K_labels_[m].push_back(combination_string(v, fiber_.preferred_labels[m]));
    }
    for (const auto& v : cokernel_basis(D)) {
      C_[m].push_back(P * v);
      C_labels_[m].push_back(combination_string(v, fiber_.preferred_labels[m]));
    }

    // C-extractor: [independent image columns | C reps]^{-1}, keep the C rows
    CycMatrix img = pull_[m] - CycMatrix::identity(N);
    CycMatrix work = img;
    auto piv = rref_in_place(work);
    image_rank_[m] = piv.size();
    std::vector<CycVec> cols;
    for (auto p : piv) cols.push_back(img.column(p));
    for (const auto& c : C_[m]) cols.push_back(c);
    if (cols.size() != N) throw std::logic_error("MappingTorusCohomology: image and cokernel do not span");
    CycMatrix Q = inverse_or_throw(CycMatrix::from_columns(cols, N), "MappingTorusCohomology: singular C frame");
    C_inv_[m] = Q;

    // K-extractor: K basis completed by standard vectors
    std::vector<CycVec> kcols = K_[m];
    for (std::size_t e = 0; e < N && kcols.size() < N; ++e) {
      CycVec v(N);
      v[e] = 1;
      auto trial = kcols;
      trial.push_back(v);
      if (rank(CycMatrix::from_columns(trial, N)) == trial.size()) kcols = std::move(trial);
    }
    K_inv_[m] = inverse_or_throw(CycMatrix::from_columns(kcols, N), "MappingTorusCohomology: singular K frame");
  }

  std::vector<std::vector<std::string>> labels(n + 2);
  for (unsigned d = 0; d <= n + 1; ++d) {
    if (d <= n) labels[d] = K_labels_[d];
    if (d >= 1)
      for (const auto& c : C_labels_[d - 1]) labels[d].push_back("delta*(" + c + ")");
  }
  alg_ = GradedAlgebra(labels);
  alg_.fill_products([&](int a, std::size_t i, int b, std::size_t j) {
    auto [da, x] = representative(a, i);
    auto [db, y] = representative(b, j);
    const unsigned ua = static_cast<unsigned>(a), ub = static_cast<unsigned>(b);
    if (da && db) return alg_.zero(a + b);
    if (!da && !db) return class_of_K(ua + ub, ext::wedge(n, ua, x, ub, y));
    if (!da) {
      CycVec v = class_of_delta(ua + ub - 1, ext::wedge(n, ua, x, ub - 1, y));
      if (a % 2)
        for (auto& c : v) c = -c;
      return v;
    }
    return class_of_delta(ua + ub - 1, ext::wedge(n, ua - 1, x, ub, y));
  });
  CycVec integral(alg_.dim(n + 1));
  for (std::size_t j = 0; j < C_[n].size(); ++j) integral[j] = C_[n][j][0] * fiber_.top_integral;
  alg_.set_integral(integral);
}

CycVec MappingTorusCohomology::class_of_K(unsigned m, const CycVec& form) const {
  CycVec out(alg_.dim(m));
  if (m > fiber_.n) return out;
  CycVec coords = K_inv_[m] * form;
  for (std::size_t i = K_[m].size(); i < coords.size(); ++i)
    if (!coords[i].is_zero()) throw IllDefined("class_of_K: form is not monodromy invariant");
  for (std::size_t i = 0; i < K_[m].size(); ++i) out[i] = coords[i];
  return out;
}

CycVec MappingTorusCohomology::project_C(unsigned m, const CycVec& form) const {
  CycVec coords = C_inv_[m] * form;
  return CycVec(coords.begin() + static_cast<long>(image_rank_[m]), coords.end());
}

CycVec MappingTorusCohomology::class_of_delta(unsigned m, const CycVec& form) const {
  CycVec out(alg_.dim(m + 1));
  CycVec c = project_C(m, form);
  const std::size_t off = k_dim(m + 1);
  for (std::size_t i = 0; i < c.size(); ++i) out[off + i] = c[i];
  return out;
}

std::pair<bool, CycVec> MappingTorusCohomology::representative(unsigned m, std::size_t i) const {
  if (i < k_dim(m)) return {false, K_[m][i]};
  i -= k_dim(m);
  if (m == 0 || i >= c_dim(static_cast<int>(m) - 1)) throw std::out_of_range("representative");
  return {true, C_[m - 1][i]};
}

CycMatrix MappingTorusCohomology::action(int eps, const CycMatrix& gen_pullback, unsigned m) const {
  return pullback_from(*this, eps, gen_pullback, m);
}

CycMatrix MappingTorusCohomology::pullback_from(const MappingTorusCohomology& target, int eps,
                                                const CycMatrix& gen_pullback, unsigned m) const {
  if (target.fiber_.n != fiber_.n) throw std::invalid_argument("pullback_from: fiber dimensions differ");
  const std::size_t d = alg_.dim(m), dt = target.alg_.dim(m);
  CycMatrix out(d, dt);
  if (m <= fiber_.n) {
    CycMatrix G = ext::induced(gen_pullback, m);
    for (std::size_t i = 0; i < target.K_[m].size(); ++i) {
      CycVec v = class_of_K(m, G * target.K_[m][i]);
      for (std::size_t r = 0; r < d; ++r) out(r, i) = v[r];
    }
  }
  if (m >= 1 && m - 1 <= fiber_.n) {
    const unsigned mm = m - 1;
    CycMatrix G = ext::induced(gen_pullback, mm);
    const std::size_t N = target.pull_[mm].rows();
    CycMatrix img = target.pull_[mm] - CycMatrix::identity(N);
    for (std::size_t c = 0; c < N; ++c)
      for (const auto& x : project_C(mm, G * img.column(c)))
        if (!x.is_zero()) throw IllDefined("action: generator does not preserve the image of F^* - Id");
    const std::size_t off = target.k_dim(m);
    for (std::size_t j = 0; j < target.C_[mm].size(); ++j) {
      CycVec v = class_of_delta(mm, G * target.C_[mm][j]);
      for (std::size_t r = 0; r < d; ++r) out(r, off + j) = eps > 0 ? v[r] : -v[r];
    }
  }
  return out;
}

KmCm km_cm(const MappingTorusCohomology& mt, unsigned m) { return {mt.K_labels(m), mt.C_labels(m)}; }

std::vector<std::size_t> mapping_torus_betti(const MappingTorusCohomology& mt) { return mt.betti(); }

// ---------------------------------------------------------------- T^6 mapping tori

TorusMappingTorus::TorusMappingTorus(const TorusModel& torus, const RealAffineMap& f)
    : forms(torus), F(f), mt(complex_fiber(forms, f)) {}

CycMatrix TorusMappingTorus::action(const MTMap& h, unsigned m) const {
  return mt.action(h.eps, forms.pullback_generators(h.g), m);
}

CycVec TorusMappingTorus::phi_class() const {
  const Cyclotomic i = Cyclotomic::imag_unit();
  const Cyclotomic half(Rational(1, 2));
  auto idx3 = ext::index_of(6, 0b010101u);
  CycVec psi(ext::binomial(6, 3));
  // Re dz_123 = (dz_123 + conj)/2
  psi[idx3] = half;
  auto [cm, sigma] = ComplexForms::conjugate(0b010101u);
  psi[ext::index_of(6, cm)] += half * Cyclotomic(sigma);
  // average over t in [0,1] of omega_t
  CycVec omega(ext::binomial(6, 2));
  const Cyclotomic hi = half * i;
  omega[ext::index_of(6, 0b000011u)] = hi * Cyclotomic(Rational(4, 3));
  omega[ext::index_of(6, 0b001100u)] = hi;
  omega[ext::index_of(6, 0b110000u)] = hi;
  omega[ext::index_of(6, 0b001001u)] = hi * half;   // dz_{1 2b}
  omega[ext::index_of(6, 0b000110u)] = -hi * half;  // dz_{1b 2}
  CycVec a = mt.class_of_K(3, psi);
  CycVec b = mt.class_of_delta(2, omega);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

CycVec TorusMappingTorus::volume_class() const { return mt.class_of_delta(6, forms.volume_form()); }

InducedGroupAction group_action_on_H(const TorusMappingTorus& M, const std::string& label, const MTMap& h) {
  InducedGroupAction a;
  a.label = label;
  for (unsigned m = 0; m <= 7; ++m) a.blocks.push_back(M.action(h, m));
  return a;
}

InducedGroupAction group_action_on_H(const TorusMappingTorus& M, const std::string& label, SymmetryKind kind,
                                     const SesquilinearAffineMap& gen) {
  RealAffineMap g = realify(gen, M.forms.torus());
  MTMap h = kind == SymmetryKind::Commuting ? commuting_lift(g) : reversing_lift(g, M.F);
  if (!descends(h, M.F)) throw CommutationFailure("group_action_on_H: generator does not descend");
  return group_action_on_H(M, label, h);
}

std::vector<CycVec> invariants(const std::vector<InducedGroupAction>& actions, const MappingTorusCohomology& mt,
                               unsigned m) {
  std::vector<CycMatrix> mats;
  for (const auto& a : actions) mats.push_back(a.blocks.at(m));
  return invariant_basis(mt.algebra().dim(m), mats);
}

AbelianGroup h1_integer(const RealAffineMap& F) {
  AbelianGroup z;
  z.free_rank = 1;
  return direct_sum(z, cokernel_group(F.M - IntMatrix::identity(F.dim())));
}

// ---------------------------------------------------------------- H_1 mod p

namespace {

long mod(long a, long p) { return ((a % p) + p) % p; }

long inv_mod(long a, long p) {
  long r = 1, b = mod(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// solve A x = b over F_p (A given by columns); nullopt if inconsistent
std::optional<std::vector<long>> solve_mod_p(const std::vector<std::vector<long>>& cols, std::vector<long> b, long p) {
  const std::size_t n = b.size(), k = cols.size();
  std::vector<std::vector<long>> a(n, std::vector<long>(k + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) a[r][c] = mod(cols[c][r], p);
    a[r][k] = mod(b[r], p);
  }
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t c = 0; c < k && row < n; ++c) {
    std::size_t sel = row;
    while (sel < n && a[sel][c] == 0) ++sel;
    if (sel == n) continue;
    std::swap(a[sel], a[row]);
    long iv = inv_mod(a[row][c], p);
    for (auto& x : a[row]) x = x * iv % p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || a[r][c] == 0) continue;
      long f = a[r][c];
      for (std::size_t cc = 0; cc <= k; ++cc) a[r][cc] = mod(a[r][cc] - f * a[row][cc], p);
    }
    piv.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < n; ++r)
    if (a[r][k] != 0) return std::nullopt;
  std::vector<long> x(k);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = a[i][k];
  return x;
}

long to_long_mod(const Int& z, long p) {
  Int r = z % p;
  if (r < 0) r += p;
  return r.get_si();
}

bool fixes_origin(const RealAffineMap& g) {
  for (const auto& x : g.t)
    if (!is_integer(x)) return false;
  return true;
}

}  // namespace

std::string H1ModP::fixed_string() const {
  std::vector<std::string> parts;
  for (const auto& v : fixed) {
    std::vector<std::string> coeffs;
    for (long c : v) coeffs.push_back(std::to_string(c));
    parts.push_back(combination_string(coeffs, labels));
  }
  std::string s = "<";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
  return s + ">";
}

H1ModP h1_modp_quotient_invariants(const RealAffineMap& F, const MTMap& h, long p) {
  const std::size_t n = F.dim();
  H1ModP out;
  out.p = p;
  std::vector<std::vector<long>> image;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<long> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = mod(to_long_mod(F.M(r, c), p) - (r == c ? 1 : 0), p);
    image.push_back(col);
  }
  // greedy standard vectors independent modulo the image
  std::vector<std::vector<long>> span = image, basis;
  std::vector<std::size_t> basis_index;
  // first coordinates of each factor first, so the basis prefers the loops c_{j,1}
  std::vector<std::size_t> order;
  for (std::size_t l = 0; l < n; l += 2) order.push_back(l);
  for (std::size_t l = 1; l < n; l += 2) order.push_back(l);
  for (std::size_t l : order) {
    std::vector<long> e(n);
    e[l] = 1;
    if (solve_mod_p(span, e, p)) continue;
    span.push_back(e);
    basis.push_back(e);
    basis_index.push_back(l);
  }
  out.labels.push_back("c_0");
  for (auto l : basis_index)
    out.labels.push_back("c_{" + std::to_string(l / 2 + 1) + "," + std::to_string(l % 2 + 1) + "}");

  RealAffineMap level = h.eps > 0 ? h.g : F * h.g;
  if (!fixes_origin(level) || !fixes_origin(F))
    throw std::invalid_argument("h1_modp_quotient_invariants: base point not fixed");
  auto coords = [&](const std::vector<long>& v) {
    std::vector<std::vector<long>> cols = image;
    for (const auto& b : basis) cols.push_back(b);
    auto x = solve_mod_p(cols, v, p);
    if (!x) throw std::logic_error("h1 mod p: quotient basis does not span");
    return std::vector<long>(x->begin() + static_cast<long>(image.size()), x->end());
  };
  const std::size_t d = basis.size() + 1;
  out.action.assign(d, std::vector<long>(d));
  out.action[0][0] = mod(h.eps, p);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::vector<long> img(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) img[r] = mod(img[r] + to_long_mod(level.M(r, c), p) * basis[i][c], p);
    auto x = coords(img);
    for (std::size_t r = 0; r < x.size(); ++r) out.action[r + 1][i + 1] = x[r];
  }
  out.fixed = fixed_subspace_mod_p(out.action, p);
  return out;
}

}  // namespace artifact
