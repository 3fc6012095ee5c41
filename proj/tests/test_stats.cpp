#include "avsc/stats.hpp"

#include "reference_data.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace avsc;

namespace {

Finding finding_at(const std::string& path, const std::string& cwe,
                   Severity severity = Severity::Medium,
                   const std::string& tool = "cscan") {
  Finding f;
  f.tool = tool;
  f.path = path;
  f.line = 1;
  f.rule_id = "r";
  f.cwe = cwe;
  f.severity = severity;
  return f;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("two-element vulnerable set") {
  std::vector<FileLines> files = {{"a.c", 3}, {"b.c", 5}, {"clean.c", 100}};
  std::vector<Finding> findings = {finding_at("a.c", "CWE-120"),
                                   finding_at("b.c", "CWE-78")};
  ProjectToolStats s = summarize("proj", "cscan", files, findings);
  CHECK(s.total_analyzed == 3);
  CHECK(s.vulnerable_files == 2);
  CHECK(s.total_findings == 2);
  REQUIRE(s.has_line_stats);
  CHECK(s.lines_median == doctest::Approx(4.0));
  CHECK(s.lines_mean == doctest::Approx(4.00));
  CHECK(s.lines_max == 5);
  CHECK(s.lines_min == 3);
}

TEST_CASE("even-length median averages the middle pair") {
  std::vector<FileLines> files = {{"a", 2}, {"b", 4}, {"c", 6}, {"d", 8}};
  std::vector<Finding> findings = {
      finding_at("a", "CWE-1"), finding_at("b", "CWE-1"),
      finding_at("c", "CWE-1"), finding_at("d", "CWE-1")};
  ProjectToolStats s = summarize("p", "t", files, findings);
  CHECK(s.lines_median == doctest::Approx(5.0));
  // the convention that produces half-integer medians like 991.5
  CHECK(median_of({988.0, 995.0}) == doctest::Approx(991.5));
}

TEST_CASE("vulnerable files are distinct even with many findings") {
  std::vector<FileLines> files = {{"a.c", 10}};
  std::vector<Finding> findings = {finding_at("a.c", "CWE-120"),
                                   finding_at("a.c", "CWE-78"),
                                   finding_at("a.c", "CWE-120")};
  ProjectToolStats s = summarize("p", "t", files, findings);
  CHECK(s.vulnerable_files == 1);
  CHECK(s.total_findings == 3);
  CHECK(s.lines_median == doctest::Approx(10.0));
}

TEST_CASE("empty vulnerable set emits counts with n/a line stats") {
  std::vector<FileLines> files = {{"a.c", 10}};
  ProjectToolStats s = summarize("p", "t", files, {});
  CHECK(s.total_analyzed == 1);
  CHECK(s.vulnerable_files == 0);
  CHECK_FALSE(s.has_line_stats);
}

TEST_CASE("unknown finding path is a hard error") {
  std::vector<FileLines> files = {{"a.c", 10}};
  std::vector<Finding> findings = {finding_at("missing.c", "CWE-1")};
  CHECK_THROWS_AS(summarize("p", "t", files, findings), Error);
}

TEST_CASE("summarize is permutation invariant") {
  std::vector<FileLines> files = {{"a", 7}, {"b", 3}, {"c", 11}, {"d", 2}};
  std::vector<Finding> findings = {
      finding_at("a", "CWE-1"), finding_at("b", "CWE-2"), finding_at("c", "CWE-3")};
  ProjectToolStats base = summarize("p", "t", files, findings);
  std::mt19937 rng(5);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(files.begin(), files.end(), rng);
    std::shuffle(findings.begin(), findings.end(), rng);
    CHECK(summarize("p", "t", files, findings) == base);
  }
}

TEST_CASE("median brute-force oracle on random lists") {
  std::mt19937 rng(20261);
  std::uniform_int_distribution<int> len_dist(1, 50);
  std::uniform_int_distribution<int> val_dist(1, 20000);
  for (int iter = 0; iter < 1000; ++iter) {
    int n = len_dist(rng);
    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(val_dist(rng));
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double expected = n % 2 == 1 ? sorted[n / 2]
                                 : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    REQUIRE(median_of(values) == doctest::Approx(expected));
  }
}

TEST_CASE("top ranking over the reference dataset") {
  auto findings = reference_findings();
  auto top = top_n_cwes(findings, 10);
  std::vector<std::pair<std::string, std::size_t>> expected = {
      {"CWE-78", 34}, {"CWE-22", 16},  {"CWE-502", 9}, {"CWE-20", 9},
      {"CWE-353", 8}, {"CWE-134", 7},  {"CWE-706", 6}, {"CWE-319", 6},
      {"CWE-611", 5}, {"CWE-79", 4},
  };
  REQUIRE(top.size() == 10);
  CHECK(top == expected);
  CHECK(top[0] == std::pair<std::string, std::size_t>{"CWE-78", 34});
  CHECK(top[1] == std::pair<std::string, std::size_t>{"CWE-22", 16});
}

TEST_CASE("top_n is a prefix of top_n_plus_one") {
  auto findings = reference_findings();
  for (std::size_t n = 1; n < 15; ++n) {
    auto smaller = top_n_cwes(findings, n);
    auto larger = top_n_cwes(findings, n + 1);
    REQUIRE(smaller.size() <= larger.size());
    for (std::size_t i = 0; i < smaller.size(); ++i) CHECK(smaller[i] == larger[i]);
  }
}

TEST_CASE("empty findings give an empty ranking") {
  CHECK(top_n_cwes({}, 10).empty());
}

TEST_CASE("project totals across the reference dataset") {
  auto totals = project_totals(reference_by_project());
  CHECK(totals["Autoware"] == 7);
  CHECK(totals["Openpilot"] == 57);
  CHECK(totals["Apollo"] == 71);
}

TEST_CASE("single finding yields a 1x1 matrix") {
  FindingsByProject by_project;
  by_project["p"].push_back(finding_at("a.c", "CWE-78"));
  CweMatrix m = cwe_matrix(by_project);
  REQUIRE(m.cwes.size() == 1);
  REQUIRE(m.columns.size() == 1);
  CHECK(m.cwes[0] == "CWE-78");
  CHECK(m.columns[0] == std::pair<std::string, std::string>{"p", "cscan"});
  CHECK(m.cells[0][0] == 1);
  CHECK(m.row_totals[0] == 1);
  CHECK(m.column_totals[0] == 1);
  CHECK(m.total == 1);
}

TEST_CASE("compound CWE labels are distinct rows") {
  FindingsByProject by_project;
  by_project["p"].push_back(finding_at("a.c", "CWE-119/CWE-120"));
  by_project["p"].push_back(finding_at("a.c", "CWE-120"));
  CweMatrix m = cwe_matrix(by_project);
  REQUIRE(m.cwes.size() == 2);
  CHECK(m.cwes[0] == "CWE-119/CWE-120");  // numeric rank 119 before 120
  CHECK(m.cwes[1] == "CWE-120");
}

TEST_CASE("matrix marginals equal brute-force recounts on random input") {
  std::mt19937 rng(31337);
  const std::vector<std::string> cwes = {"CWE-78", "CWE-120", "CWE-502",
                                         "CWE-119/CWE-120"};
  const std::vector<std::string> projects = {"alpha", "beta"};
  const std::vector<std::string> tools = {"cscan", "pyscan", "rules"};
  std::uniform_int_distribution<std::size_t> cwe_dist(0, cwes.size() - 1);
  std::uniform_int_distribution<std::size_t> proj_dist(0, projects.size() - 1);
  std::uniform_int_distribution<std::size_t> tool_dist(0, tools.size() - 1);
  for (int iter = 0; iter < 50; ++iter) {
    FindingsByProject by_project;
    std::map<std::string, std::size_t> brute_rows;
    std::size_t total = 0;
    std::uniform_int_distribution<int> n_dist(0, 60);
    int n = n_dist(rng);
    for (int i = 0; i < n; ++i) {
      Finding f = finding_at("f.c", cwes[cwe_dist(rng)]);
      f.tool = tools[tool_dist(rng)];
      by_project[projects[proj_dist(rng)]].push_back(f);
      ++brute_rows[f.cwe];
      ++total;
    }
    CweMatrix m = cwe_matrix(by_project);
    CHECK(m.total == total);
    std::size_t row_sum = 0;
    for (std::size_t r : m.row_totals) row_sum += r;
    std::size_t col_sum = 0;
    for (std::size_t c : m.column_totals) col_sum += c;
    CHECK(row_sum == total);
    CHECK(col_sum == total);
    for (std::size_t i = 0; i < m.cwes.size(); ++i) {
      CHECK(m.row_totals[i] == brute_rows[m.cwes[i]]);
      std::size_t cell_sum = 0;
      for (std::size_t j = 0; j < m.columns.size(); ++j) cell_sum += m.cells[i][j];
      CHECK(cell_sum == m.row_totals[i]);
    }
  }
}

TEST_CASE("conservation across aggregations on the reference dataset") {
  auto by_project = reference_by_project();
  auto findings = reference_findings();
  CweMatrix m = cwe_matrix(by_project);
  auto totals = project_totals(by_project);
  std::size_t project_sum = 0;
  for (const auto& [name, count] : totals) project_sum += count;
  CHECK(m.total == findings.size());
  CHECK(project_sum == findings.size());
  CHECK(findings.size() == 135);
}

TEST_CASE("cwe severity groups preserve the severity split") {
  std::vector<Finding> findings = {
      finding_at("a.c", "CWE-78", Severity::High),
      finding_at("b.c", "CWE-78", Severity::High),
      finding_at("c.c", "CWE-78", Severity::Low),
      finding_at("d.c", "CWE-22", Severity::Medium),
  };
  auto groups = cwe_severity_groups(findings);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].cwe == "CWE-22");
  CHECK(groups[1] == CweSeverityCount{"CWE-78", Severity::High, 2});
  CHECK(groups[2] == CweSeverityCount{"CWE-78", Severity::Low, 1});
  std::size_t group_sum = 0;
  for (const auto& g : groups) group_sum += g.count;
  CHECK(group_sum == findings.size());
}

}  // TEST_SUITE
