#pragma once

#include "avsc/types.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace avsc {

// (path, line_count) of one analyzed file — the inputs summarize needs.
struct FileLines {
  std::string path;
  std::size_t line_count = 0;

  friend bool operator==(const FileLines&, const FileLines&) = default;
};

// Per-(project, tool) summary row. Line statistics cover the distinct
// vulnerable-file set; has_line_stats is false (rendered "n/a") when that
// set is empty.
struct ProjectToolStats {
  std::string project;
  std::string tool;
  std::size_t total_analyzed = 0;
  std::size_t vulnerable_files = 0;
  std::size_t total_findings = 0;
  bool has_line_stats = false;
  double lines_mean = 0.0;    // 2 decimals
  double lines_median = 0.0;  // even-length lists average the middle pair
  std::size_t lines_max = 0;
  std::size_t lines_min = 0;

  friend bool operator==(const ProjectToolStats&, const ProjectToolStats&) = default;
};

// CWE x (project, tool) frequency matrix with marginal totals. Compound
// labels such as "CWE-119/CWE-120" stay distinct rows.
struct CweMatrix {
  std::vector<std::string> cwes;
  std::vector<std::pair<std::string, std::string>> columns;  // (project, tool)
  std::vector<std::vector<std::size_t>> cells;               // [cwe][column]
  std::vector<std::size_t> row_totals;
  std::vector<std::size_t> column_totals;
  std::size_t total = 0;

  friend bool operator==(const CweMatrix&, const CweMatrix&) = default;
};

using FindingsByProject = std::map<std::string, std::vector<Finding>>;

// Throws Error when a finding references a path missing from files.
ProjectToolStats summarize(std::string_view project, std::string_view tool,
                           const std::vector<FileLines>& files,
                           const std::vector<Finding>& findings);

// Counts per CWE across the input, ordered by count descending; ties keep
// the first-appearance order of the findings list (stable ranking).
std::vector<std::pair<std::string, std::size_t>> top_n_cwes(
    const std::vector<Finding>& findings, std::size_t n);

std::map<std::string, std::size_t> project_totals(const FindingsByProject& findings);

CweMatrix cwe_matrix(const FindingsByProject& findings);

// (CWE, severity) groups for two-layer distribution charts.
struct CweSeverityCount {
  std::string cwe;
  Severity severity = Severity::Low;
  std::size_t count = 0;

  friend bool operator==(const CweSeverityCount&, const CweSeverityCount&) = default;
};

std::vector<CweSeverityCount> cwe_severity_groups(const std::vector<Finding>& findings);

double median_of(std::vector<double> values);  // empty input is a caller error

}  // namespace avsc
