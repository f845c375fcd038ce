#pragma once

#include "artifact/formality.hpp"
#include "artifact/intersections.hpp"
#include "artifact/resolution.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace artifact {

struct UnknownEntry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Expected {
  std::string value;
  std::string ref;
};

struct Family {
  std::string name;  // M_1_3, ...
  std::string display;
  int k = 0, a = 0;
  TorusModel torus;
  std::map<std::string, SesquilinearAffineMap> maps;
  SesquilinearAffineMap F;
  std::map<std::string, MTMap> symmetries;  // kappa, iota, j1, j2
  std::map<std::string, Expected> expected;
  std::vector<ComponentLabel> iota_labels;  // names for the components of Fix(iota)
};

struct CatalogEntry {
  std::string name;     // X1_1_3, ...
  std::string display;  // X~^1_{1,3}
  std::string kind;     // mapping-torus, first-resolution, one-step, two-step
  std::string family;
  std::vector<std::string> group;  // generators of the quotient group
  std::string parameter = "s";
  std::string from;  // two-step: the first resolution it starts from
  std::vector<ComponentLabel> labels;
  std::string pi1;  // stored verdict, not computed
  std::vector<std::string> covering_notes;
  std::string formality;        // recipe: bfm, resolved-bfm, low-b2, bianchi-massey, massey, dominated
  std::string formality_input;  // linking case or dominating entry
  std::string domination;       // how the dominating entry maps onto this one
  std::map<std::string, Expected> expected;
  bool in_table = false;
};

// Explicit piece data for linking cases
struct PieceSpec {
  std::string label;
  AffinePiece piece;
};

struct LinkingCase {
  std::string name;
  std::string family;
  std::string kind;  // cobordism, level
  std::string entry;  // level: the resolved entry whose components are used
  std::vector<PieceSpec> body, boundary, targets;  // cobordism: target = sum of the target pieces
  std::vector<PieceSpec> class_target;                // homology check of body + images against this cycle
  std::vector<std::string> class_images;
  Rational class_t;
  std::vector<std::string> averaging;  // group generators; uniform weights over the closure
  Rational weight = 1, scale = 1;
  std::string hypothesis;
  std::map<std::string, Expected> expected;
};

class Catalog {
 public:
  static Catalog load(const std::string& path);
  static Catalog from_json(const nlohmann::json& j);
  static std::string default_path();

  int version() const { return version_; }
  const std::vector<Family>& families() const { return families_; }
  const std::vector<CatalogEntry>& entries() const { return entries_; }
  const std::vector<LinkingCase>& linking_cases() const { return linking_; }

  const Family& family(const std::string& name) const;
  const CatalogEntry& entry(const std::string& name) const;  // also accepts family names as mapping-torus entries
  const LinkingCase& linking_case(const std::string& name) const;
  std::vector<std::string> table_names() const;  // order of the summary table

 private:
  int version_ = 0;
  std::vector<Family> families_;
  std::vector<CatalogEntry> entries_;
  std::vector<LinkingCase> linking_;
};

// Cached pipeline over a catalog
class Pipeline {
 public:
  explicit Pipeline(const Catalog& c) : cat_(c) {}

  const Catalog& catalog() const { return cat_; }
  const TorusMappingTorus& mapping_torus(const std::string& family);
  RealAffineMap fiber_map(const std::string& family, const std::string& map);
  std::vector<MTMap> group(const CatalogEntry& e);
  const ResolvedAlgebra& algebra(const std::string& entry);

 private:
  const Catalog& cat_;
  std::map<std::string, std::unique_ptr<TorusMappingTorus>> tori_;
  std::map<std::string, std::unique_ptr<ResolvedAlgebra>> algebras_;
};

struct Regression {
  std::string field, expected, computed, ref;
};

struct IntersectionSummary {
  std::string target;
  std::size_t points = 0;
  std::vector<int> signs;
  std::vector<std::string> coordinates;
};

struct LinkingReport {
  std::string name;
  Rational lk;
  std::vector<std::pair<std::string, Rational>> values;  // level cases: every datum
  std::vector<IntersectionSummary> intersections;
  bool boundary_ok = true;
  std::vector<Regression> regressions;
  nlohmann::json to_json() const;
};

LinkingReport run_linking(Pipeline& p, const std::string& name);

struct FixedLocusReport {
  std::string name;
  std::vector<std::string> lines;
  std::map<std::string, std::string> summary;
  std::vector<Regression> regressions;
  nlohmann::json to_json() const;
};
FixedLocusReport fixed_locus_report(Pipeline& p, const std::string& name);

struct H1Report {
  std::string name, of;
  AbelianGroup h1;
  long p = 0;
  std::vector<std::pair<std::string, std::string>> invariants;  // generator -> fixed subspace of H_1(M; Z_p)
  std::vector<Regression> regressions;
  nlohmann::json to_json() const;
};
H1Report h1_report(Pipeline& p, const std::string& name, long mod_p = 0);

FormalityCertificate formality_of(Pipeline& p, const std::string& name);

struct EntryReport {
  std::string entry, display, kind;
  std::vector<std::size_t> b;
  AbelianGroup h1;
  std::string h1_of;
  std::string pi1;
  std::vector<std::string> pi1_evidence;
  std::vector<std::string> p1_basis, p1_coeffs;
  std::string p1, p1_pairing;
  bool gram_negdef_at_0 = false;
  std::vector<std::string> gram_diagonal;
  bool p3 = false;
  std::vector<std::string> components;
  std::string component_volumes;
  std::map<std::string, std::string> computed;  // values compared against the catalog expectations
  FormalityCertificate formality;
  std::vector<Regression> regressions;
  nlohmann::json to_json() const;
};

struct Report {
  int catalog_version = 0;
  std::vector<EntryReport> entries;
  std::size_t regression_count() const;
  nlohmann::json to_json() const;
  std::string markdown() const;
  static Report from_json(const nlohmann::json& j);
};

namespace section {
constexpr unsigned betti = 1, h1 = 2, p1 = 4, gram = 8, formality = 16, fixed = 32, all = 63;
}
EntryReport run_entry(Pipeline& p, const std::string& name, unsigned sections = section::all);
// the expected keys a section is responsible for
bool key_in_sections(const std::string& key, unsigned sections);
Report run_table(Pipeline& p, const std::vector<std::string>& names);

nlohmann::json regressions_json(const std::vector<Regression>& r);

}  // namespace artifact
