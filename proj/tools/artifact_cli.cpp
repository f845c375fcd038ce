#include "artifact/catalog.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace artifact;
using nlohmann::json;

namespace {

struct Output {
  std::ostringstream text;
  std::vector<Regression> regressions;
};

void lines(std::ostream& o, const std::vector<std::string>& v) {
  for (const auto& s : v) o << s << "\n";
}

json entry_subset(const EntryReport& e, std::initializer_list<const char*> keys) {
  json full = e.to_json(), out{{"entry", e.entry}};
  for (const char* k : keys) out[k] = full.at(k);
  out["regressions"] = full.at("regressions");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohomology, linking and formality checks for a catalog of closed G2 resolutions"};
  app.require_subcommand(1);
  std::string format = "markdown", out_path, catalog_path = Catalog::default_path();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "markdown"}));
  app.add_option("--out", out_path, "write the output to this file");
  app.add_option("--catalog", catalog_path, "catalog file");

  std::string name;
  long mod_p = 0;
  auto* list = app.add_subcommand("list", "list catalog entries and linking cases");
  auto* table = app.add_subcommand("table", "run every table entry");
  auto* betti = app.add_subcommand("betti", "Betti numbers");
  auto* h1 = app.add_subcommand("h1", "H_1 of the underlying mapping torus");
  auto* fixed = app.add_subcommand("fixed-locus", "fixed loci and singular components");
  auto* pont = app.add_subcommand("pontryagin", "first Pontryagin class and its pairing with the G2 form");
  auto* gram = app.add_subcommand("gram", "quadratic form on H^2 at s = 0");
  auto* formality = app.add_subcommand("formality", "formality certificate");
  auto* linking = app.add_subcommand("linking", "linking number of a catalog case");
  for (auto* s : {betti, h1, fixed, pont, gram, formality}) s->add_option("name", name, "entry name")->required();
  linking->add_option("case", name, "linking case")->required();
  h1->add_option("--mod", mod_p, "also report invariants of the symmetries on H_1(M; Z_p)")->check(CLI::Range(2L, 1000L));
  for (auto* s : app.get_subcommands([](CLI::App*) { return true; })) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  bool as_json = format == "json";
  Output out;
  try {
    Catalog cat = Catalog::load(catalog_path);
    Pipeline p(cat);
    if (*list) {
      json j{{"entries", json::array()}, {"linking", json::array()}};
      for (const auto& e : cat.entries()) {
        j["entries"].push_back({{"name", e.name}, {"display", e.display}, {"kind", e.kind}, {"table", e.in_table}});
        if (!as_json) out.text << e.name << "\t" << e.kind << "\t" << e.display << "\n";
      }
      for (const auto& l : cat.linking_cases()) {
        j["linking"].push_back({{"name", l.name}, {"family", l.family}, {"kind", l.kind}});
        if (!as_json) out.text << l.name << "\tlinking\t" << l.family << "\n";
      }
      if (as_json) out.text << j.dump(2) << "\n";
    } else if (*table) {
      Report r = run_table(p, cat.table_names());
      for (const auto& e : r.entries) out.regressions.insert(out.regressions.end(), e.regressions.begin(), e.regressions.end());
      out.text << (as_json ? r.to_json().dump(2) + "\n" : r.markdown());
    } else if (*betti) {
      EntryReport e = run_entry(p, name, section::betti);
      out.regressions = e.regressions;
      if (as_json) {
        json j = entry_subset(e, {"b"});
        j["betti"] = e.computed.at("betti");
        out.text << j.dump(2) << "\n";
      } else {
        out.text << e.computed.at("betti") << "\nb:";
        for (auto b : e.b) out.text << " " << b;
        out.text << "\n";
      }
    } else if (*h1) {
      H1Report r = h1_report(p, name, mod_p);
      out.regressions = r.regressions;
      if (as_json) {
        out.text << r.to_json().dump(2) << "\n";
      } else {
        out.text << r.h1.to_string() << "\n";
        if (cat.entry(name).family != name) out.text << "of " << r.of << "\n";
        for (const auto& [g, v] : r.invariants) out.text << g << "-invariants mod " << r.p << ": " << v << "\n";
      }
    } else if (*fixed) {
      FixedLocusReport r = fixed_locus_report(p, name);
      out.regressions = r.regressions;
      if (as_json) {
        out.text << r.to_json().dump(2) << "\n";
      } else {
        lines(out.text, r.lines);
        for (const auto& [k, v] : r.summary) out.text << k << ": " << v << "\n";
      }
    } else if (*pont) {
      EntryReport e = run_entry(p, name, section::p1);
      out.regressions = e.regressions;
      std::string sign = e.computed.count("p1_pairing_sign") ? e.computed.at("p1_pairing_sign") : "";
      if (as_json) {
        json j = entry_subset(e, {"p1", "p1_pairing"});
        j["p1_pairing_sign"] = sign;
        out.text << j.dump(2) << "\n";
      } else {
        out.text << "p1 = " << e.p1 << "\npairing at s = 0: " << e.p1_pairing << " (" << sign << ")\n";
      }
    } else if (*gram) {
      EntryReport e = run_entry(p, name, section::gram);
      out.regressions = e.regressions;
      if (as_json) {
        out.text << entry_subset(e, {"gram_negdef_at_0", "gram_diagonal"}).dump(2) << "\n";
      } else {
        out.text << "negative definite at s = 0: " << (e.gram_negdef_at_0 ? "yes" : "no") << "\ndiagonal:";
        for (const auto& d : e.gram_diagonal) out.text << " " << d;
        out.text << "\n";
      }
    } else if (*formality) {
      EntryReport e = run_entry(p, name, section::formality);
      out.regressions = e.regressions;
      if (as_json) {
        out.text << entry_subset(e, {"formality"}).dump(2) << "\n";
      } else {
        out.text << to_string(e.formality.verdict) << ": " << e.formality.witness << "\n";
        lines(out.text, e.formality.notes);
      }
    } else if (*linking) {
      LinkingReport r = run_linking(p, name);
      out.regressions = r.regressions;
      out.text << (as_json ? r.to_json().dump(2) : to_string(r.lk)) << "\n";
    }
  } catch (const UnknownEntry& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (out_path.empty()) {
    std::cout << out.text.str();
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 1;
    }
    f << out.text.str();
  }
  for (const auto& r : out.regressions)
    std::cerr << "regression: " << r.field << ": expected " << r.expected << ", computed " << r.computed << " [" << r.ref
              << "]\n";
  return out.regressions.empty() ? 0 : 2;
}
