#include "avsc/stats.hpp"

#include "avsc/util.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace avsc {

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

ProjectToolStats summarize(std::string_view project, std::string_view tool,
                           const std::vector<FileLines>& files,
                           const std::vector<Finding>& findings) {
  ProjectToolStats stats;
  stats.project = std::string(project);
  stats.tool = std::string(tool);
  stats.total_analyzed = files.size();
  stats.total_findings = findings.size();

  std::map<std::string, std::size_t> lines_by_path;
  for (const FileLines& f : files) lines_by_path[f.path] = f.line_count;

  std::set<std::string> vulnerable;
  for (const Finding& f : findings) {
    if (!lines_by_path.count(f.path)) {
      throw Error("finding path not in analyzed set: " + f.path);
    }
    vulnerable.insert(f.path);
  }
  stats.vulnerable_files = vulnerable.size();
  if (vulnerable.empty()) return stats;  // counts emitted, line stats n/a

  std::vector<double> lines;
  lines.reserve(vulnerable.size());
  double sum = 0.0;
  std::size_t max_lines = 0;
  std::size_t min_lines = SIZE_MAX;
  for (const std::string& path : vulnerable) {
    std::size_t count = lines_by_path[path];
    lines.push_back(static_cast<double>(count));
    sum += static_cast<double>(count);
    max_lines = std::max(max_lines, count);
    min_lines = std::min(min_lines, count);
  }
  stats.has_line_stats = true;
  stats.lines_mean = util::round_half_away(sum / static_cast<double>(lines.size()), 2);
  stats.lines_median = median_of(std::move(lines));
  stats.lines_max = max_lines;
  stats.lines_min = min_lines;
  return stats;
}

std::vector<std::pair<std::string, std::size_t>> top_n_cwes(
    const std::vector<Finding>& findings, std::size_t n) {
  struct Entry {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::map<std::string, Entry> counts;
  std::size_t order = 0;
  for (const Finding& f : findings) {
    auto [it, inserted] = counts.try_emplace(f.cwe);
    if (inserted) it->second.first_seen = order++;
    ++it->second.count;
  }
  std::vector<std::pair<std::string, Entry>> entries(counts.begin(), counts.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.second.first_seen < b.second.first_seen;
  });
  std::vector<std::pair<std::string, std::size_t>> out;
  out.reserve(std::min(n, entries.size()));
  for (const auto& [cwe, entry] : entries) {
    if (out.size() == n) break;
    out.emplace_back(cwe, entry.count);
  }
  return out;
}

std::map<std::string, std::size_t> project_totals(const FindingsByProject& findings) {
  std::map<std::string, std::size_t> totals;
  for (const auto& [project, list] : findings) totals[project] = list.size();
  return totals;
}

namespace {

bool cwe_row_less(const std::string& a, const std::string& b) {
  long na = cwe_number(a);
  long nb = cwe_number(b);
  if (na != nb) return na < nb;
  return a < b;
}

}  // namespace

CweMatrix cwe_matrix(const FindingsByProject& findings) {
  CweMatrix matrix;
  std::set<std::string> cwe_set;
  std::set<std::pair<std::string, std::string>> column_set;
  for (const auto& [project, list] : findings) {
    for (const Finding& f : list) {
      cwe_set.insert(f.cwe);
      column_set.insert({project, f.tool});
    }
  }
  matrix.cwes.assign(cwe_set.begin(), cwe_set.end());
  std::sort(matrix.cwes.begin(), matrix.cwes.end(), cwe_row_less);
  matrix.columns.assign(column_set.begin(), column_set.end());

  std::map<std::string, std::size_t> row_index;
  for (std::size_t i = 0; i < matrix.cwes.size(); ++i) row_index[matrix.cwes[i]] = i;
  std::map<std::pair<std::string, std::string>, std::size_t> col_index;
  for (std::size_t j = 0; j < matrix.columns.size(); ++j) {
    col_index[matrix.columns[j]] = j;
  }

  matrix.cells.assign(matrix.cwes.size(),
                      std::vector<std::size_t>(matrix.columns.size(), 0));
  matrix.row_totals.assign(matrix.cwes.size(), 0);
  matrix.column_totals.assign(matrix.columns.size(), 0);
  for (const auto& [project, list] : findings) {
    for (const Finding& f : list) {
      std::size_t i = row_index[f.cwe];
      std::size_t j = col_index[{project, f.tool}];
      ++matrix.cells[i][j];
      ++matrix.row_totals[i];
      ++matrix.column_totals[j];
      ++matrix.total;
    }
  }
  return matrix;
}

std::vector<CweSeverityCount> cwe_severity_groups(const std::vector<Finding>& findings) {
  std::map<std::pair<std::string, Severity>, std::size_t> groups;
  for (const Finding& f : findings) ++groups[{f.cwe, f.severity}];
  std::vector<CweSeverityCount> out;
  out.reserve(groups.size());
  for (const auto& [key, count] : groups) {
    out.push_back({key.first, key.second, count});
  }
  std::sort(out.begin(), out.end(),
            [](const CweSeverityCount& a, const CweSeverityCount& b) {
              if (a.cwe != b.cwe) return cwe_row_less(a.cwe, b.cwe);
              return a.severity > b.severity;
            });
  return out;
}

}  // namespace avsc
