#pragma once

#include "avsc/corpus.hpp"
#include "avsc/depscan.hpp"
#include "avsc/risk.hpp"
#include "avsc/rules.hpp"
#include "avsc/stats.hpp"
#include "avsc/types.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace avsc {

inline constexpr const char* kToolVersion = "avsc 0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct ScanMetadata {
  std::string tool_version;
  std::string timestamp;  // RFC-3339 UTC
  std::string project;
  std::string config_digest;

  friend bool operator==(const ScanMetadata&, const ScanMetadata&) = default;
};

struct ReportStats {
  std::vector<ProjectToolStats> per_tool;
  CweMatrix matrix;
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> top_cwes;
  SeverityCounts code_severity;
  SeverityCounts dep_severity;
  std::vector<CweSeverityCount> cwe_severity;

  friend bool operator==(const ReportStats&, const ReportStats&) = default;
};

struct ScanReport {
  ScanMetadata metadata;
  std::vector<Finding> code_findings;
  std::vector<DepFinding> dep_findings;
  std::vector<Component> components;  // full deduplicated inventory
  std::vector<ScanError> scan_errors;
  ReportStats stats;
  std::string sbom_path;  // file name within the output directory

  friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

struct ScanConfig {
  std::filesystem::path root;
  std::string project;  // defaults to the root directory name
  std::vector<std::string> excludes = kDefaultExcludes;
  std::optional<std::filesystem::path> rules_file;
  std::optional<std::filesystem::path> feed_file;
  std::filesystem::path out_dir = "avsc-out";
  std::vector<std::string> formats = {"json", "csv", "md"};
  std::optional<Severity> fail_on;
  int jobs = 1;
  std::optional<std::string> timestamp;  // pinned RFC-3339, else now()
  RiskWeights weights;
  std::size_t top_n = 10;
};

// Stable hash of the normalized config document. Excludes execution knobs
// (jobs, out_dir) so they cannot change report bytes.
std::string config_digest(const ScanConfig& config);

// corpus -> {cscan, pyscan, rules} -> depscan -> risk -> stats.
// Throws ConfigError naming the offending key on invalid configuration.
ScanReport run_pipeline(const ScanConfig& config);

// 0 = clean, 1 = findings at or above fail_on.
int exit_code_for(const ScanReport& report, std::optional<Severity> fail_on);

nlohmann::json report_to_json(const ScanReport& report);
ScanReport report_from_json(const nlohmann::json& doc);

struct RenderResult {
  std::vector<std::filesystem::path> written;
  std::vector<ScanError> errors;  // per-file IO problems, non-fatal
};

// Emits findings.json (json), the five CSV tables (csv), summary.md (md)
// and the SBOM document, per the requested formats.
RenderResult render_outputs(const ScanReport& report,
                            const std::filesystem::path& out_dir,
                            const std::vector<std::string>& formats);

// CSV/markdown renderers, exposed for tests.
std::string stats_summary_csv(const ScanReport& report);
std::string cwe_by_project_csv(const ScanReport& report);
std::string top_cwes_csv(const ScanReport& report);
std::string severity_csv(const ScanReport& report);
std::string dep_findings_csv(const ScanReport& report);
std::string summary_markdown(const ScanReport& report);

}  // namespace avsc
