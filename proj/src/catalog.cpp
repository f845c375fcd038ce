#include "artifact/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace artifact {

using nlohmann::json;

namespace {

std::string str(const json& j, const char* key, const std::string& fallback = "") {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw CatalogError(std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::vector<std::string> strings(const json& j, const char* key) {
  std::vector<std::string> out;
  if (j.contains(key))
    for (const auto& x : j.at(key)) out.push_back(x.get<std::string>());
  return out;
}

Cyclotomic cyc(const json& j) { return parse_cyclotomic(j.get<std::string>()); }
Rational rat(const json& j) { return parse_rational(j.get<std::string>()); }

CycMatrix cyc_matrix(const json& rows) {
  if (rows.size() != 3) throw CatalogError("maps need 3 x 3 matrices");
  CycMatrix m(3, 3);
  for (std::size_t r = 0; r < 3; ++r) {
    if (rows[r].size() != 3) throw CatalogError("maps need 3 x 3 matrices");
    for (std::size_t c = 0; c < 3; ++c) m(r, c) = cyc(rows[r][c]);
  }
  return m;
}

RatVec rat_vec(const json& j) {
  RatVec v;
  for (const auto& x : j) v.push_back(rat(x));
  if (v.size() != 6) throw CatalogError("points have six lattice coordinates");
  return v;
}

IntMatrix columns(const json& j) {
  IntMatrix m(6, j.size());
  for (std::size_t c = 0; c < j.size(); ++c) {
    if (j[c].size() != 6) throw CatalogError("direction columns have six entries");
    for (std::size_t r = 0; r < 6; ++r) m(r, c) = Int(j[c][r].get<long>());
  }
  return m;
}

PieceSpec piece(const json& j) {
  PieceSpec p;
  p.label = str(j, "label");
  std::string type = str(j, "type");
  int sign = j.value("sign", 1);
  IntMatrix d = columns(j.at("directions"));
  if (type == "level") {
    p.piece = AffinePiece::level(rat(j.at("t")), rat_vec(j.at("base")), d, sign);
  } else if (type == "t_slab") {
    p.piece = AffinePiece::t_slab(rat(j.at("t0")), rat(j.at("t1")), rat_vec(j.at("base")), rat_vec(j.at("velocity")), d,
                                  sign);
  } else if (type == "level_slab") {
    p.piece = AffinePiece::level_slab(rat(j.at("t")), rat_vec(j.at("base")), rat_vec(j.at("velocity")), d, sign);
  } else {
    throw CatalogError("unknown piece type '" + type + "'");
  }
  return p;
}

std::vector<PieceSpec> pieces(const json& j, const char* key) {
  std::vector<PieceSpec> out;
  if (j.contains(key))
    for (const auto& x : j.at(key)) out.push_back(piece(x));
  return out;
}

std::map<std::string, Expected> expectations(const json& j) {
  std::map<std::string, Expected> out;
  if (!j.contains("expected")) return out;
  for (const auto& [k, v] : j.at("expected").items()) {
    Expected e{str(v, "value"), str(v, "ref")};
    if (e.ref.empty()) throw CatalogError("expected value '" + k + "' has no reference");
    out[k] = e;
  }
  return out;
}

std::vector<ComponentLabel> labels_of(const json& all, const std::string& key) {
  std::vector<ComponentLabel> out;
  if (key.empty()) return out;
  if (!all.contains(key)) throw CatalogError("unknown label set '" + key + "'");
  for (const auto& l : all.at(key)) out.push_back({str(l, "id"), rat(l.at("t")), rat_vec(l.at("point")), l.value("theta", 1)});
  return out;
}

}  // namespace

std::string Catalog::default_path() {
  if (const char* env = std::getenv("ARTIFACT_CATALOG")) return env;
  return std::string(ARTIFACT_DATA_DIR) + "/catalog.json";
}

Catalog Catalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CatalogError(std::string("malformed catalog: ") + e.what());
  }
  return from_json(j);
}

Catalog Catalog::from_json(const json& j) {
  Catalog c;
  try {
    c.version_ = j.at("version").get<int>();
    std::map<std::string, TorusModel> tori;
    for (const auto& [name, t] : j.at("tori").items()) {
      TorusModel T;
      T.name = name;
      const auto& L = t.at("lattices");
      if (L.size() != 3) throw CatalogError("a torus needs three planar lattices");
      for (std::size_t i = 0; i < 3; ++i) T.lattices[i] = {cyc(L[i][0]), cyc(L[i][1])};
      tori[name] = T;
    }
    const json& maps = j.at("maps");
    const json labels = j.value("labels", json::object());

    for (const auto& f : j.at("families")) {
      Family fam;
      fam.name = str(f, "name");
      fam.display = str(f, "display", fam.name);
      fam.k = f.at("k").get<int>();
      fam.a = f.at("a").get<int>();
      auto t = tori.find(str(f, "torus"));
      if (t == tori.end()) throw CatalogError("unknown torus for " + fam.name);
      fam.torus = t->second;
      auto get_map = [&](const std::string& name) {
        if (!maps.contains(name)) throw CatalogError("unknown map '" + name + "'");
        const json& m = maps.at(name);
        SesquilinearAffineMap s = SesquilinearAffineMap::linear(
            m.contains("A") ? cyc_matrix(m.at("A")) : CycMatrix(3, 3), m.contains("B") ? cyc_matrix(m.at("B")) : CycMatrix(3, 3));
        if (m.contains("t")) {
          CycVec z;
          for (const auto& x : m.at("t")) z.push_back(cyc(x));
          s.t = fam.torus.to_lattice(z);
        }
        fam.maps[name] = s;
        return s;
      };
      auto comp = strings(f, "F");
      if (comp.empty()) throw CatalogError(fam.name + ": F needs at least one map");
      fam.F = get_map(comp.back());
      for (std::size_t i = comp.size() - 1; i-- > 0;) fam.F = compose(get_map(comp[i]), fam.F, fam.torus);
      RealAffineMap F = realify(fam.F, fam.torus);
      for (const auto& [sym, spec] : f.at("symmetries").items()) {
        RealAffineMap g = realify(get_map(str(spec, "map")), fam.torus);
        std::string kind = str(spec, "kind");
        if (kind == "commuting")
          fam.symmetries[sym] = commuting_lift(g);
        else if (kind == "reversing")
          fam.symmetries[sym] = reversing_lift(g, F);
        else
          throw CatalogError("unknown symmetry kind '" + kind + "'");
        if (!descends(fam.symmetries[sym], F)) throw CatalogError(fam.name + ": " + sym + " does not descend");
      }
      fam.expected = expectations(f);
      c.families_.push_back(std::move(fam));
    }

    std::set<std::string> seen;
    for (const auto& e : j.at("entries")) {
      CatalogEntry en;
      en.name = str(e, "name");
      if (!seen.insert(en.name).second) throw CatalogError("duplicate entry " + en.name);
      en.display = str(e, "display", en.name);
      en.kind = str(e, "kind");
      en.family = str(e, "family");
      c.family(en.family);
      en.group = strings(e, "group");
      for (const auto& g : en.group)
        if (!c.family(en.family).symmetries.count(g)) throw CatalogError(en.name + ": unknown symmetry " + g);
      en.parameter = str(e, "parameter", "s");
      en.from = str(e, "from");
      en.labels = labels_of(labels, str(e, "labels"));
      en.pi1 = str(e, "pi1");
      en.covering_notes = strings(e, "covering");
      en.formality = str(e, "formality");
      en.formality_input = str(e, "formality_input");
      en.domination = str(e, "domination");
      en.expected = expectations(e);
      en.in_table = e.value("table", false);
      static const std::set<std::string> kinds = {"mapping-torus", "first-resolution", "one-step", "two-step"};
      if (!kinds.count(en.kind)) throw CatalogError(en.name + ": unknown kind " + en.kind);
      if (en.kind == "two-step" && !seen.count(en.from)) throw CatalogError(en.name + ": 'from' must name an earlier entry");
      c.entries_.push_back(std::move(en));
    }

    for (const auto& l : j.value("linking", json::array())) {
      LinkingCase lc;
      lc.name = str(l, "name");
      lc.family = str(l, "family");
      c.family(lc.family);
      lc.kind = str(l, "kind");
      lc.entry = str(l, "entry");
      lc.body = pieces(l, "body");
      lc.boundary = pieces(l, "boundary");
      lc.targets = pieces(l, "targets");
      if (l.contains("class_check")) {
        const json& cc = l.at("class_check");
        lc.class_t = rat(cc.at("t"));
        lc.class_images = strings(cc, "images");
        lc.class_target = pieces(cc, "target");
      }
      lc.averaging = strings(l, "averaging");
      lc.weight = l.contains("weight") ? rat(l.at("weight")) : Rational(1);
      lc.scale = l.contains("scale") ? rat(l.at("scale")) : Rational(1);
      lc.hypothesis = str(l, "hypothesis");
      lc.expected = expectations(l);
      if (lc.kind != "cobordism" && lc.kind != "level") throw CatalogError(lc.name + ": unknown linking kind");
      c.linking_.push_back(std::move(lc));
    }
  } catch (const json::exception& e) {
    throw CatalogError(std::string("malformed catalog: ") + e.what());
  } catch (const UnknownEntry& e) {
    throw CatalogError(e.what());
  }
  return c;
}

const Family& Catalog::family(const std::string& name) const {
  for (const auto& f : families_)
    if (f.name == name) return f;
  throw UnknownEntry("unknown family '" + name + "'");
}

const CatalogEntry& Catalog::entry(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  throw UnknownEntry("unknown entry '" + name + "'");
}

const LinkingCase& Catalog::linking_case(const std::string& name) const {
  for (const auto& l : linking_)
    if (l.name == name) return l;
  throw UnknownEntry("unknown linking case '" + name + "'");
}

std::vector<std::string> Catalog::table_names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (e.in_table) out.push_back(e.name);
  return out;
}

// ---- pipeline

const TorusMappingTorus& Pipeline::mapping_torus(const std::string& family) {
  auto& slot = tori_[family];
  if (!slot) {
    const Family& f = cat_.family(family);
    slot = std::make_unique<TorusMappingTorus>(f.torus, realify(f.F, f.torus));
  }
  return *slot;
}

RealAffineMap Pipeline::fiber_map(const std::string& family, const std::string& map) {
  const Family& f = cat_.family(family);
  auto it = f.maps.find(map);
  if (it == f.maps.end()) throw UnknownEntry(family + " has no map '" + map + "'");
  return realify(it->second, f.torus);
}

std::vector<MTMap> Pipeline::group(const CatalogEntry& e) {
  std::vector<MTMap> gens;
  for (const auto& g : e.group) gens.push_back(cat_.family(e.family).symmetries.at(g));
  return group_closure(gens);
}

const ResolvedAlgebra& Pipeline::algebra(const std::string& name) {
  auto& slot = algebras_[name];
  if (slot) return *slot;
  const CatalogEntry& e = cat_.entry(name);
  const Family& f = cat_.family(e.family);
  const TorusMappingTorus& M = mapping_torus(e.family);
  if (e.kind == "first-resolution" || e.kind == "one-step") {
    slot = std::make_unique<ResolvedAlgebra>(
        resolve_orbifold(M, group(e), e.name, e.labels, e.parameter, e.kind == "one-step" ? "N" : "L"));
  } else if (e.kind == "two-step") {
    const ResolvedAlgebra& Y = algebra(e.from);
    slot = std::make_unique<ResolvedAlgebra>(
        resolve_second(M, Y, f.symmetries.at("iota"), f.symmetries.at("kappa"), e.name, e.labels, e.parameter));
  } else {
    algebras_.erase(name);
    throw UnknownEntry(name + " is a mapping torus, not a resolution");
  }
  return *slot;
}

// ---- reports

namespace {

std::string betti_pair(const std::vector<std::size_t>& b) {
  return "(" + std::to_string(b.at(2)) + "," + std::to_string(b.at(3)) + ")";
}

std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(", ", pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(s.substr(pos, next - pos));
    pos = next + 2;
  }
  return out;
}

// compared as multisets: the order of the basis is not part of the claim
const std::set<std::string> multiset_keys = {"gram_diagonal", "component_volumes"};

bool same_value(const std::string& key, const std::string& a, const std::string& b) {
  if (a == b) return true;
  if (!multiset_keys.count(key)) return false;
  auto x = split_list(a), y = split_list(b);
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

std::vector<Regression> diff(const std::map<std::string, Expected>& expected,
                             const std::map<std::string, std::string>& computed,
                             const std::function<bool(const std::string&)>& wanted) {
  std::vector<Regression> out;
  for (const auto& [k, e] : expected) {
    if (!wanted(k)) continue;
    auto it = computed.find(k);
    std::string got = it == computed.end() ? "<not computed>" : it->second;
    if (!same_value(k, e.value, got)) out.push_back({k, e.value, got, e.ref});
  }
  return out;
}

std::string sign_string(const Cyclotomic& c) {
  if (c.is_zero()) return "zero";
  CycMatrix m(1, 1);
  m(0, 0) = c;
  if (negative_definite(m)) return "negative";
  m(0, 0) = -c;
  return negative_definite(m) ? "positive" : "non-real";
}

std::string verdict_word(Verdict v) {
  switch (v) {
    case Verdict::Formal: return "yes";
    case Verdict::NonFormal: return "no";
    default: return "inconclusive";
  }
}

Verdict verdict_from(const std::string& s) {
  for (Verdict v : {Verdict::Formal, Verdict::NonFormal, Verdict::Inconclusive})
    if (to_string(v) == s) return v;
  throw CatalogError("unknown verdict '" + s + "'");
}

std::string volume_list(const CatalogEntry& e, const ResolvedAlgebra& alg) {
  std::vector<std::string> out;
  if (e.labels.empty()) {
    for (const auto& L : alg.components()) out.push_back(L.volume.to_string());
    std::sort(out.begin(), out.end());
    return join(out);
  }
  for (const auto& l : e.labels)
    for (const auto& L : alg.components())
      if (L.id == l.id) out.push_back(L.id + ": " + L.volume.to_string());
  return join(out);
}

std::vector<std::pair<MTMap, Rational>> averaging_of(const Family& f, const std::vector<std::string>& gens,
                                                    const Rational& weight) {
  std::vector<MTMap> g;
  for (const auto& n : gens) {
    auto it = f.symmetries.find(n);
    if (it == f.symmetries.end()) throw CatalogError(f.name + " has no symmetry '" + n + "'");
    g.push_back(it->second);
  }
  std::vector<std::pair<MTMap, Rational>> out;
  for (const auto& h : group_closure(g)) out.push_back({h, weight});
  return out;
}

json h1_json(const AbelianGroup& g) {
  json t = json::array();
  for (const auto& d : g.torsion) t.push_back(d.get_si());
  return {{"rank", g.free_rank}, {"torsion", t}};
}

AbelianGroup h1_from(const json& j) {
  AbelianGroup g;
  g.free_rank = j.at("rank").get<std::size_t>();
  for (const auto& d : j.at("torsion")) g.torsion.push_back(Int(d.get<long>()));
  return g;
}

std::vector<FixedComponent> labelled(std::vector<FixedComponent> comps, const std::vector<ComponentLabel>& labels) {
  if (labels.empty()) return comps;
  std::vector<FixedComponent> out;
  for (const auto& l : labels) {
    auto it = std::find_if(comps.begin(), comps.end(), [&](const FixedComponent& c) { return c.contains(l.t, l.point); });
    if (it == comps.end()) throw CatalogError("label " + l.id + " lies on no component");
    FixedComponent c = *it;
    c.id = l.id;
    out.push_back(c);
  }
  if (out.size() != comps.size()) throw CatalogError("labels do not cover every component");
  return out;
}

}  // namespace

json regressions_json(const std::vector<Regression>& r) {
  json out = json::array();
  for (const auto& x : r)
    out.push_back({{"field", x.field}, {"expected", x.expected}, {"computed", x.computed}, {"ref", x.ref}});
  return out;
}

namespace {
std::vector<Regression> regressions_from(const json& j) {
  std::vector<Regression> out;
  for (const auto& x : j) out.push_back({x.at("field"), x.at("expected"), x.at("computed"), x.at("ref")});
  return out;
}
}  // namespace

// ---- fixed loci

FixedLocusReport fixed_locus_report(Pipeline& p, const std::string& name) {
  const CatalogEntry& e = p.catalog().entry(name);
  const Family& f = p.catalog().family(e.family);
  FixedLocusReport r;
  r.name = name;
  if (e.kind == "mapping-torus") {
    const RealAffineMap& F = p.mapping_torus(e.family).F;
    auto comps = labelled(mapping_torus_fixed_components(f.symmetries.at("iota"), F), e.labels);
    int non_torus = 0;
    for (const auto& c : comps) {
      bool torus = c.return_matrix == IntMatrix::identity(c.return_matrix.rows());
      non_torus += !torus;
      r.lines.push_back("Fix(iota) " + c.id + ": " + c.description + " through " + c.fiber.to_string());
    }
    r.summary["fix_iota_components"] = std::to_string(comps.size());
    r.summary["fix_iota_non_torus"] = std::to_string(non_torus);
    auto perm = permutation_report(symmetry_on_components(f.symmetries.at("kappa"), comps, F));
    r.summary["fix_iota_kappa_permutation"] = perm.cycles(comps);
    auto kfix = mapping_torus_fixed_components(f.symmetries.at("kappa"), F);
    r.summary["fix_kappa_components"] = std::to_string(kfix.size());
    for (const auto& c : kfix) r.lines.push_back("Fix(kappa) " + c.id + ": " + c.description + " through " + c.fiber.to_string());
  } else {
    const ResolvedAlgebra& alg = p.algebra(name);
    for (const auto& L : alg.components())
      r.lines.push_back(L.id + ": genus " + std::to_string(L.genus) + ", volume " + L.volume.to_string() +
                        (L.description.empty() ? "" : ", " + L.description));
    r.summary["singular_components"] = std::to_string(alg.components().size());
    r.summary["component_volumes"] = volume_list(e, alg);
  }
  r.regressions = diff(e.expected, r.summary, [](const std::string& k) { return key_in_sections(k, section::fixed); });
  return r;
}

json FixedLocusReport::to_json() const {
  return {{"entry", name}, {"components", lines}, {"summary", summary}, {"regressions", regressions_json(regressions)}};
}

// ---- H_1

H1Report h1_report(Pipeline& p, const std::string& name, long mod_p) {
  const CatalogEntry& e = p.catalog().entry(name);
  const Family& f = p.catalog().family(e.family);
  H1Report r;
  r.name = name;
  r.of = f.name;
  const RealAffineMap& F = p.mapping_torus(e.family).F;
  r.h1 = h1_integer(F);
  r.p = mod_p;
  std::map<std::string, std::string> computed{{"h1", r.h1.to_string()}};
  if (mod_p > 1) {
    for (const auto& [sym, h] : f.symmetries) {
      std::string v;
      try {
        v = h1_modp_quotient_invariants(F, h, mod_p).fixed_string();
      } catch (const std::exception& ex) {
        v = std::string("n/a (") + ex.what() + ")";
      }
      r.invariants.push_back({sym, v});
      computed["h1_mod" + std::to_string(mod_p) + "_" + sym] = v;
    }
  }
  r.regressions = diff(e.expected, computed, [&](const std::string& k) {
    return k == "h1" || (mod_p > 1 && k.rfind("h1_mod" + std::to_string(mod_p) + "_", 0) == 0);
  });
  return r;
}

json H1Report::to_json() const {
  json j{{"entry", name}, {"of", of}, {"h1", h1_json(h1)}, {"h1_string", h1.to_string()}};
  if (p > 1) {
    json inv = json::object();
    for (const auto& [k, v] : invariants) inv[k] = v;
    j["mod"] = p;
    j["invariants"] = inv;
  }
  j["regressions"] = regressions_json(regressions);
  return j;
}

// ---- linking

LinkingReport run_linking(Pipeline& p, const std::string& name) {
  const LinkingCase& lc = p.catalog().linking_case(name);
  const Family& f = p.catalog().family(lc.family);
  const TorusMappingTorus& M = p.mapping_torus(lc.family);
  auto averaging = averaging_of(f, lc.averaging, lc.weight);
  LinkingReport r;
  r.name = name;
  std::map<std::string, std::string> computed;
  if (lc.kind == "cobordism") {
    Cobordism C;
    for (const auto& s : lc.body) C.pieces.push_back(s.piece);
    C.boundary.name = "boundary";
    for (const auto& s : lc.boundary) C.boundary.pieces.push_back(s.piece);
    AffineCycle target{"target", {}};
    for (const auto& s : lc.targets) target.pieces.push_back(s.piece);
    r.boundary_ok = boundary_matches(C, M.F);
    if (!lc.class_target.empty()) {
      Cobordism all{C.pieces, {}};
      for (const auto& g : lc.class_images) {
        Cobordism im = image(C, f.symmetries.at(g));
        all.pieces.insert(all.pieces.end(), im.pieces.begin(), im.pieces.end());
      }
      AffineCycle ct{"class", {}};
      for (const auto& s : lc.class_target) ct.pieces.push_back(s.piece);
      r.boundary_ok = r.boundary_ok && boundary_class_check(all, ct, M.F, lc.class_t);
    }
    r.lk = linking_number(f.torus, M.F, C, target, averaging, lc.scale);
    AffineCycle body{"C", C.pieces};
    std::vector<std::string> signs, counts;
    for (const auto& s : lc.targets) {
      IntersectionSummary is;
      is.target = s.label;
      AffinePiece unit = s.piece;  // the component with its own orientation, not its weight in the target
      unit.sign = 1;
      for (const auto& pt : intersection_points(f.torus, M.F, body, AffineCycle{s.label, {unit}})) {
        is.signs.push_back(pt.sign);
        std::string c = "t=" + to_string(pt.t) + " (";
        for (std::size_t i = 0; i < pt.point.size(); ++i) c += (i ? ", " : "") + to_string(pt.point[i]);
        is.coordinates.push_back(c + ")");
      }
      is.points = is.signs.size();
      std::set<int> distinct(is.signs.begin(), is.signs.end());
      std::string sg = distinct.size() == 1 ? (*distinct.begin() > 0 ? "+1" : "-1") : distinct.empty() ? "none" : "mixed";
      signs.push_back(s.label + ": " + sg);
      counts.push_back(s.label + ": " + std::to_string(is.points));
      r.intersections.push_back(is);
    }
    computed["intersection_signs"] = join(signs);
    computed["intersection_points"] = join(counts);
    computed["lk"] = to_string(r.lk);
  } else {
    const ResolvedAlgebra& alg = p.algebra(lc.entry);
    auto data = level_linking_data(M, alg, averaging);
    if (data.empty()) throw CatalogError(name + ": no level linking data");
    std::set<Rational> distinct;
    for (const auto& d : data) {
      r.values.push_back({d.label, d.lk});
      distinct.insert(d.lk);
    }
    r.lk = data.front().lk;
    computed["lk"] = distinct.size() == 1 ? to_string(r.lk) : "mixed";
  }
  computed["boundary"] = r.boundary_ok ? "true" : "false";
  r.regressions = diff(lc.expected, computed, [](const std::string&) { return true; });
  if (!r.boundary_ok) r.regressions.push_back({"boundary", "true", "false", "declared boundary of the cobordism"});
  return r;
}

json LinkingReport::to_json() const {
  json j{{"case", name}, {"lk", to_string(lk)}, {"boundary_ok", boundary_ok}};
  if (!values.empty()) {
    json v = json::array();
    for (const auto& [label, x] : values) v.push_back({{"label", label}, {"lk", to_string(x)}});
    j["data"] = v;
  }
  if (!intersections.empty()) {
    json v = json::array();
    for (const auto& is : intersections)
      v.push_back({{"target", is.target}, {"points", is.points}, {"signs", is.signs}, {"coordinates", is.coordinates}});
    j["intersections"] = v;
  }
  j["regressions"] = regressions_json(regressions);
  return j;
}

// ---- formality

FormalityCertificate formality_of(Pipeline& p, const std::string& name) {
  const CatalogEntry& e = p.catalog().entry(name);
  const std::string& how = e.formality;
  if (how == "bfm") return bfm_check(torus_fiber_action(p.mapping_torus(e.family), 2), 2);
  if (how == "resolved-bfm") return bfm_check(resolved_fiber_action(p.mapping_torus(e.family), p.fiber_map(e.family, "xi")), 2);
  if (how == "low-b2") return low_b2_formality(p.algebra(name));
  if (how == "bianchi-massey") {
    const ResolvedAlgebra& alg = p.algebra(name);
    NamedE4 named = named_e4(alg);
    B8Space b8 = b8_kernel(named.space);
    if (!e.formality_input.empty()) {
      const LinkingCase& lc = p.catalog().linking_case(e.formality_input);
      named.oracle.links = level_linking_data(p.mapping_torus(e.family), alg,
                                              averaging_of(p.catalog().family(lc.family), lc.averaging, lc.weight));
    }
    try {
      return bianchi_massey(named.space, b8, named.oracle).certificate;
    } catch (const OracleGap& gap) {
      FormalityCertificate c;
      c.witness_kind = "F table";
      c.witness = std::string("missing linking data: ") + gap.what();
      return c;
    }
  }
  if (how == "massey") {
    const LinkingCase& lc = p.catalog().linking_case(e.formality_input);
    LinkingReport lr = run_linking(p, lc.name);
    auto c = massey_certificate(triple_massey_from_linking(lr.lk, lc.hypothesis));
    c.notes.push_back("lk from linking case " + lc.name + " = " + to_string(lr.lk));
    return c;
  }
  if (how == "dominated") {
    FormalityCertificate base = formality_of(p, e.formality_input);
    FormalityCertificate c;
    c.witness_kind = base.witness_kind;
    c.notes = base.notes;
    c.notes.push_back("nonzero-degree map: " + e.domination);
    // a formal source forces a formal target, so only non-formality of the target passes upward
    if (base.verdict == Verdict::NonFormal) {
      c.verdict = Verdict::NonFormal;
      c.witness = e.formality_input + " is not formal (" + base.witness + ")";
    } else {
      c.witness = e.formality_input + " is " + to_string(base.verdict) + "; nothing follows";
    }
    return c;
  }
  throw CatalogError(name + ": unknown formality recipe '" + how + "'");
}

// ---- entries

bool key_in_sections(const std::string& k, unsigned s) {
  if (k == "betti") return s & section::betti;
  if (k == "pi1" || k.rfind("h1", 0) == 0) return s & section::h1;
  if (k.rfind("p1", 0) == 0) return s & section::p1;
  if (k.rfind("gram", 0) == 0) return s & section::gram;
  if (k == "formal" || k == "bfm_multiplicity") return s & section::formality;
  if (k.rfind("fix_", 0) == 0 || k == "singular_components" || k == "component_volumes") return s & section::fixed;
  return s == section::all;
}

EntryReport run_entry(Pipeline& p, const std::string& name, unsigned sections) {
  const CatalogEntry& e = p.catalog().entry(name);
  const Family& f = p.catalog().family(e.family);
  EntryReport r;
  r.entry = e.name;
  r.display = e.display;
  r.kind = e.kind;
  r.pi1 = e.pi1;
  bool resolved = e.kind != "mapping-torus";
  const TorusMappingTorus& M = p.mapping_torus(e.family);

  if (sections & (section::betti | section::p1 | section::gram)) {
    r.b = resolved ? p.algebra(name).betti() : mapping_torus_betti(M.mt);
    r.computed["betti"] = betti_pair(r.b);
    r.p3 = check_p3(r.b.at(3), !e.pi1.empty());
  }
  if (sections & section::h1) {
    H1Report h = h1_report(p, name, 0);
    r.h1 = h.h1;
    r.h1_of = f.name;
    r.computed["h1"] = h.h1.to_string();
    r.computed["pi1"] = e.pi1;
    r.pi1_evidence.push_back("H_1(" + f.display + ") = " + h.h1.to_string());
    // mod-p invariants of the reversing symmetry for each prime in the torsion
    std::set<long> primes;
    for (const auto& d : h.h1.torsion) {
      long n = d.get_si();
      for (long q = 2; q <= n; ++q)
        if (n % q == 0) {
          primes.insert(q);
          while (n % q == 0) n /= q;
        }
    }
    for (long q : primes) {
      if (!f.symmetries.count("kappa")) break;
      std::string v = h1_modp_quotient_invariants(M.F, f.symmetries.at("kappa"), q).fixed_string();
      r.computed["h1_mod" + std::to_string(q) + "_kappa"] = v;
      r.pi1_evidence.push_back("kappa-invariants of H_1(" + f.display + "; Z_" + std::to_string(q) + "): " + v);
    }
    for (const auto& n : e.covering_notes) r.pi1_evidence.push_back(n);
  }
  if (resolved && (sections & section::p1)) {
    const ResolvedAlgebra& alg = p.algebra(name);
    CycVec p1 = e.kind == "two-step" ? pontryagin_second(p.algebra(e.from), alg) : pontryagin(alg);
    r.p1 = alg.format(4, p1);
    CycVec disp = alg.to_display(4) * p1;
    for (std::size_t i = 0; i < disp.size(); ++i)
      if (!disp[i].is_zero()) {
        r.p1_basis.push_back(alg.display_labels(4)[i]);
        r.p1_coeffs.push_back(disp[i].to_string());
      }
    SymPoly pairing = pont_pairing(alg, p1).substitute(alg.parameter(), SymPoly(0));
    r.p1_pairing = pairing.to_string();
    r.computed["p1"] = r.p1;
    r.computed["p1_pairing"] = r.p1_pairing;
    r.computed["p1_pairing_sign"] = pairing.is_constant() ? sign_string(pairing.constant_term()) : "undetermined";
  }
  if (resolved && (sections & section::gram)) {
    GramReport g = h2_gram(p.algebra(name));
    r.gram_negdef_at_0 = g.negative_definite_at_zero;
    for (std::size_t i = 0; i < g.at_zero.rows(); ++i) r.gram_diagonal.push_back(g.at_zero(i, i).to_string());
    r.computed["gram_negdef_at_0"] = r.gram_negdef_at_0 ? "true" : "false";
    r.computed["gram_diagonal"] = join(r.gram_diagonal);
  }
  if (sections & section::formality) {
    r.formality = formality_of(p, name);
    r.computed["formal"] = verdict_word(r.formality.verdict);
    if (e.formality == "bfm" || e.formality == "resolved-bfm") {
      auto act = e.formality == "bfm" ? torus_fiber_action(M, 2) : resolved_fiber_action(M, p.fiber_map(e.family, "xi"));
      r.computed["bfm_multiplicity"] = std::to_string(eigenvalue_multiplicity(act[2], Cyclotomic(1)));
    }
  }
  if (sections & section::fixed) {
    FixedLocusReport fl = fixed_locus_report(p, name);
    for (const auto& [k, v] : fl.summary) r.computed[k] = v;
    r.components = fl.lines;
    if (fl.summary.count("component_volumes")) r.component_volumes = fl.summary.at("component_volumes");
  }
  r.regressions = diff(e.expected, r.computed, [&](const std::string& k) { return key_in_sections(k, sections); });
  return r;
}

json EntryReport::to_json() const {
  json j;
  j["entry"] = entry;
  j["display"] = display;
  j["kind"] = kind;
  j["b"] = b;
  j["h1"] = h1_json(h1);
  j["h1_of"] = h1_of;
  j["pi1"] = {{"verdict", pi1}, {"evidence", pi1_evidence}};
  j["p1"] = {{"basis", p1_basis}, {"coeffs", p1_coeffs}, {"class", p1}};
  j["p1_pairing"] = p1_pairing;
  j["gram_negdef_at_0"] = gram_negdef_at_0;
  j["gram_diagonal"] = gram_diagonal;
  j["p3"] = p3;
  j["components"] = components;
  j["component_volumes"] = component_volumes;
  j["formality"] = {{"verdict", to_string(formality.verdict)},
                    {"witness", formality.witness},
                    {"witness_kind", formality.witness_kind},
                    {"notes", formality.notes}};
  j["computed"] = computed;
  j["regressions"] = regressions_json(regressions);
  return j;
}

std::size_t Report::regression_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.regressions.size();
  return n;
}

json Report::to_json() const {
  json e = json::array();
  for (const auto& x : entries) e.push_back(x.to_json());
  return {{"catalog_version", catalog_version}, {"entries", e}};
}

Report Report::from_json(const json& j) {
  Report r;
  r.catalog_version = j.at("catalog_version").get<int>();
  for (const auto& x : j.at("entries")) {
    EntryReport e;
    e.entry = x.at("entry");
    e.display = x.at("display");
    e.kind = x.at("kind");
    e.b = x.at("b").get<std::vector<std::size_t>>();
    e.h1 = h1_from(x.at("h1"));
    e.h1_of = x.at("h1_of");
    e.pi1 = x.at("pi1").at("verdict");
    e.pi1_evidence = x.at("pi1").at("evidence").get<std::vector<std::string>>();
    e.p1_basis = x.at("p1").at("basis").get<std::vector<std::string>>();
    e.p1_coeffs = x.at("p1").at("coeffs").get<std::vector<std::string>>();
    e.p1 = x.at("p1").at("class");
    e.p1_pairing = x.at("p1_pairing");
    e.gram_negdef_at_0 = x.at("gram_negdef_at_0");
    e.gram_diagonal = x.at("gram_diagonal").get<std::vector<std::string>>();
    e.p3 = x.at("p3");
    e.components = x.at("components").get<std::vector<std::string>>();
    e.component_volumes = x.at("component_volumes");
    const json& f = x.at("formality");
    e.formality.verdict = verdict_from(f.at("verdict"));
    e.formality.witness = f.at("witness");
    e.formality.witness_kind = f.at("witness_kind");
    e.formality.notes = f.at("notes").get<std::vector<std::string>>();
    e.computed = x.at("computed").get<std::map<std::string, std::string>>();
    e.regressions = regressions_from(x.at("regressions"));
    r.entries.push_back(std::move(e));
  }
  return r;
}

std::string Report::markdown() const {
  std::ostringstream o;
  o << "| Name | Fundamental group | (b2,b3) | Formal | p1 | pairing at s=0 | H^2 form negative definite | P3 | regressions |\n";
  o << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& e : entries) {
    std::string formal = e.computed.count("formal") ? e.computed.at("formal") : "";
    if (!formal.empty()) formal[0] = static_cast<char>(std::toupper(formal[0]));
    o << "| " << e.display << " | " << e.pi1 << " | " << (e.b.size() == 8 ? betti_pair(e.b) : "") << " | " << formal
      << " | " << e.p1 << " | " << e.p1_pairing << " | " << (e.gram_negdef_at_0 ? "yes" : "no") << " | "
      << (e.p3 ? "yes" : "no") << " | " << e.regressions.size() << " |\n";
  }
  bool any = false;
  for (const auto& e : entries)
    for (const auto& r : e.regressions) {
      if (!any) o << "\nRegressions:\n\n";
      any = true;
      o << "- " << e.entry << " " << r.field << ": expected `" << r.expected << "`, computed `" << r.computed << "` ("
        << r.ref << ")\n";
    }
  return o.str();
}

Report run_table(Pipeline& p, const std::vector<std::string>& names) {
  Report r;
  r.catalog_version = p.catalog().version();
  for (const auto& n : names) r.entries.push_back(run_entry(p, n));
  return r;
}

}  // namespace artifact
