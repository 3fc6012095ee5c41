#pragma once

#include "avsc/corpus.hpp"
#include "avsc/semver.hpp"
#include "avsc/types.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace avsc {

enum class Ecosystem { Npm, Pypi, Gem };

const char* to_string(Ecosystem eco);
bool try_parse_ecosystem(std::string_view text, Ecosystem& out);

// One third-party dependency as declared by a manifest.
struct Component {
  Ecosystem ecosystem = Ecosystem::Npm;
  std::string name;
  std::string version_spec;  // exact version or range expression
  std::string source_manifest;

  friend bool operator==(const Component&, const Component&) = default;
};

// EPSS percentage, either numeric or the below-threshold "<0.1" marker
// (carried as 0.05 for arithmetic). percentile is display-only metadata.
struct Epss {
  double percent = 0.0;
  bool below_threshold = false;
  std::optional<int> percentile;

  friend bool operator==(const Epss&, const Epss&) = default;
};

struct Advisory {
  std::string id;
  Ecosystem ecosystem = Ecosystem::Npm;
  std::string package;
  std::vector<std::string> affected_ranges;  // disjunctive, each non-empty
  std::vector<Version> fixed_in;             // ascending
  Severity severity = Severity::Low;
  Epss epss;
  std::string summary;

  friend bool operator==(const Advisory&, const Advisory&) = default;
};

enum class Reachability { Unreachable, NeedsReview, Reachable };

const char* to_string(Reachability r);
bool try_parse_reachability(std::string_view text, Reachability& out);

struct DepFinding {
  Component component;
  Advisory advisory;
  Reachability reachability = Reachability::NeedsReview;
  std::optional<Version> recommended_fix;  // member of advisory.fixed_in
  double risk = 0.0;

  friend bool operator==(const DepFinding&, const DepFinding&) = default;
};

struct ManifestParseResult {
  std::vector<Component> components;  // deduplicated
  std::vector<ScanError> errors;      // per-line, non-fatal
};

// package-lock.json, requirements.txt, Gemfile.lock.
ManifestParseResult parse_manifest(const SourceFile& file);

// JSON advisory document: top-level "advisories" array with keys
// {id, ecosystem, package, affected_ranges, fixed_in, severity,
//  epss_percent, summary} plus optional epss_percentile.
// Throws FeedValidationError on any invariant violation.
std::vector<Advisory> parse_feed(const std::string& document);
std::vector<Advisory> load_feed(const std::filesystem::path& path);

// A DepFinding for every (component, advisory) pair with matching
// ecosystem+name whose resolved version (minimal version satisfying the
// spec) falls in any affected range and below every fixed version of its
// major line. Risk is left unset; reachability defaults to NeedsReview.
std::vector<DepFinding> match_advisories(const std::vector<Component>& components,
                                         const std::vector<Advisory>& feed);

// Reachable when an import/include resolves to the package name,
// NeedsReview when the name merely appears as a token (comments included),
// Unreachable otherwise.
Reachability classify_reachability(const Component& component,
                                   const CorpusSnapshot& snapshot);

// (severity desc, risk desc, package asc, advisory id asc)
void sort_dep_findings(std::vector<DepFinding>& findings);

// Minimal SBOM document; deterministic except for the timestamp argument.
nlohmann::json emit_sbom(const std::vector<Component>& components,
                         std::string_view name, std::string_view version,
                         std::string_view namespace_uri,
                         std::string_view timestamp);

}  // namespace avsc
