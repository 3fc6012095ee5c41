#include "avsc/report.hpp"

#include "avsc/cscan.hpp"
#include "avsc/pyscan.hpp"
#include "avsc/util.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

using nlohmann::json;

namespace avsc {

namespace {

const std::set<std::string> kKnownFormats = {"json", "csv", "md"};

std::string sbom_namespace(const std::string& project) {
  return "https://avsc.invalid/sbom/" + project;
}

}  // namespace

std::string config_digest(const ScanConfig& config) {
  json normalized{
      {"excludes", config.excludes},
      {"fail_on", config.fail_on ? json(to_string(*config.fail_on)) : json()},
      {"feed", config.feed_file ? json(config.feed_file->generic_string()) : json()},
      {"formats", config.formats},
      {"project", config.project},
      {"root", config.root.generic_string()},
      {"rules", config.rules_file ? json(config.rules_file->generic_string()) : json()},
      {"timestamp", config.timestamp ? json(*config.timestamp) : json()},
      {"top_n", config.top_n},
      {"weights", {config.weights.critical, config.weights.high,
                   config.weights.medium, config.weights.low}},
  };
  return util::fnv1a_hex(normalized.dump());
}

namespace {

// Rule-file entries whose id names a built-in catalog entry replace its
// metadata instead of running through the generic engine.
struct EffectiveRules {
  std::vector<CRule> c_catalog;
  std::vector<PyRule> py_rules;
  std::vector<RuleSpec> engine_rules;
};

EffectiveRules resolve_rules(const std::vector<RuleSpec>& file_rules) {
  EffectiveRules out;
  out.c_catalog = builtin_c_catalog();
  out.py_rules = builtin_py_rules();
  for (const RuleSpec& rule : file_rules) {
    bool overrode = false;
    if (rule.language == RuleLanguage::C || rule.language == RuleLanguage::Any) {
      for (CRule& entry : out.c_catalog) {
        if (entry.function_name == rule.id) {
          entry.cwe = rule.cwe;
          entry.default_severity = rule.severity;
          if (!rule.message.empty()) entry.note = rule.message;
          overrode = true;
        }
      }
    }
    if (rule.language == RuleLanguage::Python || rule.language == RuleLanguage::Any) {
      for (PyRule& entry : out.py_rules) {
        if (entry.rule_id == rule.id) {
          entry.cwe = rule.cwe;
          entry.severity = rule.severity;
          if (!rule.message.empty()) entry.message = rule.message;
          overrode = true;
        }
      }
    }
    if (!overrode) out.engine_rules.push_back(rule);
  }
  return out;
}

std::vector<FileLines> file_lines_of(const CorpusSnapshot& snapshot,
                                     bool ccpp, bool python) {
  std::vector<FileLines> out;
  for (const SourceFile& f : snapshot.files) {
    if ((ccpp && f.language == LanguageKind::CCpp) ||
        (python && f.language == LanguageKind::Python)) {
      out.push_back({f.path, f.line_count});
    }
  }
  return out;
}

}  // namespace

ScanReport run_pipeline(const ScanConfig& config) {
  if (config.jobs < 1) throw ConfigError("jobs: must be >= 1");
  if (config.top_n < 1) throw ConfigError("top_n: must be >= 1");
  if (!config.weights.valid()) {
    throw ConfigError("weights: must be positive and strictly decreasing "
                      "Critical > High > Medium > Low");
  }
  for (const std::string& format : config.formats) {
    if (!kKnownFormats.count(format)) {
      throw ConfigError("format: unknown format \"" + format + "\"");
    }
  }
  if (config.timestamp && !util::looks_like_rfc3339(*config.timestamp)) {
    throw ConfigError("timestamp: not an RFC-3339 timestamp: \"" +
                      *config.timestamp + "\"");
  }

  std::vector<RuleSpec> file_rules;
  if (config.rules_file) {
    try {
      file_rules = load_rule_file(*config.rules_file);
    } catch (const RuleParseError& e) {
      throw ConfigError("rules: " + std::string(e.what()));
    }
  }
  std::vector<Advisory> feed;
  bool have_feed = false;
  if (config.feed_file) {
    try {
      feed = load_feed(*config.feed_file);
      have_feed = true;
    } catch (const FeedValidationError& e) {
      throw ConfigError("feed: " + std::string(e.what()));
    }
  }

  CorpusSnapshot snapshot;
  try {
    snapshot = load_corpus(config.root, config.excludes, config.project, config.jobs);
  } catch (const RootNotFoundError& e) {
    throw ConfigError("root: " + std::string(e.what()));
  }
  const std::string project =
      config.project.empty() ? snapshot.root_label : config.project;

  ScanReport report;
  report.metadata.tool_version = kToolVersion;
  report.metadata.timestamp =
      config.timestamp ? *config.timestamp : util::utc_now_rfc3339();
  report.metadata.project = project;
  report.metadata.config_digest = config_digest(config);
  for (const ScanError& skip : snapshot.skipped) report.scan_errors.push_back(skip);

  EffectiveRules effective = resolve_rules(file_rules);

  // Per-file scanners fan out; per-index slots keep the merge deterministic.
  std::vector<const SourceFile*> code_files;
  for (const SourceFile& f : snapshot.files) {
    if (f.language == LanguageKind::CCpp || f.language == LanguageKind::Python) {
      code_files.push_back(&f);
    }
  }
  std::vector<std::vector<Finding>> scanned(code_files.size());
  std::vector<std::vector<ScanError>> scan_errs(code_files.size());
  util::parallel_for(code_files.size(), config.jobs, [&](std::size_t i) {
    const SourceFile& file = *code_files[i];
    if (file.language == LanguageKind::CCpp) {
      scanned[i] = scan_c_file(file, effective.c_catalog);
    } else {
      PyScanResult result = scan_py_file(file, effective.py_rules);
      scanned[i] = std::move(result.findings);
      scan_errs[i] = std::move(result.errors);
    }
  });

  std::vector<Finding> cscan_findings;
  std::vector<Finding> pyscan_findings;
  for (std::size_t i = 0; i < code_files.size(); ++i) {
    auto& bucket = code_files[i]->language == LanguageKind::CCpp ? cscan_findings
                                                                 : pyscan_findings;
    bucket.insert(bucket.end(), std::make_move_iterator(scanned[i].begin()),
                  std::make_move_iterator(scanned[i].end()));
    for (ScanError& e : scan_errs[i]) report.scan_errors.push_back(std::move(e));
  }

  std::vector<Finding> rule_findings;
  if (!effective.engine_rules.empty()) {
    rule_findings = apply_rules(snapshot, effective.engine_rules, config.jobs,
                                &report.scan_errors);
  }

  report.code_findings = cscan_findings;
  report.code_findings.insert(report.code_findings.end(), pyscan_findings.begin(),
                              pyscan_findings.end());
  report.code_findings.insert(report.code_findings.end(), rule_findings.begin(),
                              rule_findings.end());
  sort_findings(report.code_findings);

  // Dependency audit.
  for (const std::string& manifest_path : snapshot.manifest_paths) {
    const SourceFile* manifest = snapshot.find(manifest_path);
    ManifestParseResult parsed = parse_manifest(*manifest);
    report.components.insert(report.components.end(),
                             std::make_move_iterator(parsed.components.begin()),
                             std::make_move_iterator(parsed.components.end()));
    for (ScanError& e : parsed.errors) report.scan_errors.push_back(std::move(e));
  }
  {
    std::set<std::tuple<Ecosystem, std::string, std::string>> seen;
    std::vector<Component> unique;
    unique.reserve(report.components.size());
    for (Component& c : report.components) {
      if (seen.insert({c.ecosystem, c.name, c.version_spec}).second) {
        unique.push_back(std::move(c));
      }
    }
    report.components = std::move(unique);
    std::sort(report.components.begin(), report.components.end(),
              [](const Component& a, const Component& b) {
                return std::tuple<int, const std::string&, const std::string&>(
                           static_cast<int>(a.ecosystem), a.name, a.version_spec) <
                       std::tuple<int, const std::string&, const std::string&>(
                           static_cast<int>(b.ecosystem), b.name, b.version_spec);
              });
  }
  if (have_feed) {
    report.dep_findings = match_advisories(report.components, feed);
    for (DepFinding& df : report.dep_findings) {
      df.reachability = classify_reachability(df.component, snapshot);
      df.risk = risk_score(df.advisory.severity, df.advisory.epss, config.weights);
    }
    sort_dep_findings(report.dep_findings);
  }

  std::sort(report.scan_errors.begin(), report.scan_errors.end(),
            [](const ScanError& a, const ScanError& b) {
              return std::tie(a.path, a.reason) < std::tie(b.path, b.reason);
            });

  // Aggregation.
  sort_findings(cscan_findings);
  sort_findings(pyscan_findings);
  report.stats.per_tool.push_back(summarize(
      project, "cscan", file_lines_of(snapshot, true, false), cscan_findings));
  report.stats.per_tool.push_back(summarize(
      project, "pyscan", file_lines_of(snapshot, false, true), pyscan_findings));
  report.stats.top_cwes["cscan"] = top_n_cwes(cscan_findings, config.top_n);
  report.stats.top_cwes["pyscan"] = top_n_cwes(pyscan_findings, config.top_n);
  if (!effective.engine_rules.empty()) {
    report.stats.per_tool.push_back(summarize(
        project, "rules", file_lines_of(snapshot, true, true), rule_findings));
    report.stats.top_cwes["rules"] = top_n_cwes(rule_findings, config.top_n);
  }
  report.stats.matrix = cwe_matrix({{project, report.code_findings}});
  report.stats.code_severity = severity_histogram(report.code_findings);
  report.stats.dep_severity = severity_histogram(report.dep_findings);
  report.stats.cwe_severity = cwe_severity_groups(report.code_findings);

  report.sbom_path = project + "-sbom.json";
  return report;
}

int exit_code_for(const ScanReport& report, std::optional<Severity> fail_on) {
  if (!fail_on) return 0;
  for (const Finding& f : report.code_findings) {
    if (f.severity >= *fail_on) return 1;
  }
  for (const DepFinding& f : report.dep_findings) {
    if (f.advisory.severity >= *fail_on) return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

json finding_to_json(const Finding& f) {
  return json{{"tool", f.tool},       {"path", f.path},
              {"line", f.line},       {"rule_id", f.rule_id},
              {"cwe", f.cwe},         {"severity", to_string(f.severity)},
              {"message", f.message}};
}

Finding finding_from_json(const json& j) {
  Finding f;
  f.tool = j.at("tool").get<std::string>();
  f.path = j.at("path").get<std::string>();
  f.line = j.at("line").get<int>();
  f.rule_id = j.at("rule_id").get<std::string>();
  f.cwe = j.at("cwe").get<std::string>();
  f.severity = parse_severity(j.at("severity").get<std::string>());
  f.message = j.at("message").get<std::string>();
  return f;
}

json component_to_json(const Component& c) {
  return json{{"ecosystem", to_string(c.ecosystem)},
              {"name", c.name},
              {"version_spec", c.version_spec},
              {"source_manifest", c.source_manifest}};
}

Component component_from_json(const json& j) {
  Component c;
  if (!try_parse_ecosystem(j.at("ecosystem").get<std::string>(), c.ecosystem)) {
    throw Error("unknown ecosystem in report");
  }
  c.name = j.at("name").get<std::string>();
  c.version_spec = j.at("version_spec").get<std::string>();
  c.source_manifest = j.at("source_manifest").get<std::string>();
  return c;
}

json advisory_to_json(const Advisory& a) {
  json fixed = json::array();
  for (const Version& v : a.fixed_in) fixed.push_back(v.str());
  json j{{"id", a.id},
         {"ecosystem", to_string(a.ecosystem)},
         {"package", a.package},
         {"affected_ranges", a.affected_ranges},
         {"fixed_in", fixed},
         {"severity", to_string(a.severity)},
         {"summary", a.summary}};
  if (a.epss.below_threshold) {
    j["epss_percent"] = "<0.1";
  } else {
    j["epss_percent"] = a.epss.percent;
  }
  if (a.epss.percentile) j["epss_percentile"] = *a.epss.percentile;
  return j;
}

Advisory advisory_from_json(const json& j) {
  Advisory a;
  a.id = j.at("id").get<std::string>();
  if (!try_parse_ecosystem(j.at("ecosystem").get<std::string>(), a.ecosystem)) {
    throw Error("unknown ecosystem in report");
  }
  a.package = j.at("package").get<std::string>();
  a.affected_ranges = j.at("affected_ranges").get<std::vector<std::string>>();
  for (const json& f : j.at("fixed_in")) {
    a.fixed_in.push_back(Version::parse(f.get<std::string>()));
  }
  a.severity = parse_severity(j.at("severity").get<std::string>());
  const json& epss = j.at("epss_percent");
  if (epss.is_string()) {
    a.epss.below_threshold = true;
    a.epss.percent = 0.05;
  } else {
    a.epss.percent = epss.get<double>();
  }
  if (j.contains("epss_percentile")) {
    a.epss.percentile = j["epss_percentile"].get<int>();
  }
  a.summary = j.at("summary").get<std::string>();
  return a;
}

json dep_finding_to_json(const DepFinding& d) {
  json j{{"component", component_to_json(d.component)},
         {"advisory", advisory_to_json(d.advisory)},
         {"reachability", to_string(d.reachability)},
         {"risk", d.risk}};
  if (d.recommended_fix) j["recommended_fix"] = d.recommended_fix->str();
  return j;
}

DepFinding dep_finding_from_json(const json& j) {
  DepFinding d;
  d.component = component_from_json(j.at("component"));
  d.advisory = advisory_from_json(j.at("advisory"));
  if (!try_parse_reachability(j.at("reachability").get<std::string>(),
                              d.reachability)) {
    throw Error("unknown reachability in report");
  }
  if (j.contains("recommended_fix")) {
    d.recommended_fix = Version::parse(j["recommended_fix"].get<std::string>());
  }
  d.risk = j.at("risk").get<double>();
  return d;
}

json per_tool_to_json(const ProjectToolStats& s) {
  json j{{"project", s.project},
         {"tool", s.tool},
         {"total_analyzed", s.total_analyzed},
         {"vulnerable_files", s.vulnerable_files},
         {"total_findings", s.total_findings}};
  if (s.has_line_stats) {
    j["lines"] = json{{"mean", s.lines_mean},
                      {"median", s.lines_median},
                      {"max", s.lines_max},
                      {"min", s.lines_min}};
  }
  return j;
}

ProjectToolStats per_tool_from_json(const json& j) {
  ProjectToolStats s;
  s.project = j.at("project").get<std::string>();
  s.tool = j.at("tool").get<std::string>();
  s.total_analyzed = j.at("total_analyzed").get<std::size_t>();
  s.vulnerable_files = j.at("vulnerable_files").get<std::size_t>();
  s.total_findings = j.at("total_findings").get<std::size_t>();
  if (j.contains("lines")) {
    s.has_line_stats = true;
    s.lines_mean = j["lines"].at("mean").get<double>();
    s.lines_median = j["lines"].at("median").get<double>();
    s.lines_max = j["lines"].at("max").get<std::size_t>();
    s.lines_min = j["lines"].at("min").get<std::size_t>();
  }
  return s;
}

json severity_counts_to_json(const SeverityCounts& c) {
  return json{{"Critical", c.critical},
              {"High", c.high},
              {"Medium", c.medium},
              {"Low", c.low}};
}

SeverityCounts severity_counts_from_json(const json& j) {
  SeverityCounts c;
  c.critical = j.at("Critical").get<std::size_t>();
  c.high = j.at("High").get<std::size_t>();
  c.medium = j.at("Medium").get<std::size_t>();
  c.low = j.at("Low").get<std::size_t>();
  return c;
}

json matrix_to_json(const CweMatrix& m) {
  json columns = json::array();
  for (const auto& [project, tool] : m.columns) {
    columns.push_back(json{{"project", project}, {"tool", tool}});
  }
  return json{{"cwes", m.cwes},
              {"columns", columns},
              {"cells", m.cells},
              {"row_totals", m.row_totals},
              {"column_totals", m.column_totals},
              {"total", m.total}};
}

CweMatrix matrix_from_json(const json& j) {
  CweMatrix m;
  m.cwes = j.at("cwes").get<std::vector<std::string>>();
  for (const json& col : j.at("columns")) {
    m.columns.emplace_back(col.at("project").get<std::string>(),
                           col.at("tool").get<std::string>());
  }
  m.cells = j.at("cells").get<std::vector<std::vector<std::size_t>>>();
  m.row_totals = j.at("row_totals").get<std::vector<std::size_t>>();
  m.column_totals = j.at("column_totals").get<std::vector<std::size_t>>();
  m.total = j.at("total").get<std::size_t>();
  return m;
}

}  // namespace

json report_to_json(const ScanReport& report) {
  json code = json::array();
  for (const Finding& f : report.code_findings) code.push_back(finding_to_json(f));
  json deps = json::array();
  for (const DepFinding& d : report.dep_findings) {
    deps.push_back(dep_finding_to_json(d));
  }
  json components = json::array();
  for (const Component& c : report.components) {
    components.push_back(component_to_json(c));
  }
  json errors = json::array();
  for (const ScanError& e : report.scan_errors) {
    errors.push_back(json{{"path", e.path}, {"reason", e.reason}});
  }

  json per_tool = json::array();
  for (const ProjectToolStats& s : report.stats.per_tool) {
    per_tool.push_back(per_tool_to_json(s));
  }
  json top = json::object();
  for (const auto& [tool, entries] : report.stats.top_cwes) {
    json list = json::array();
    for (const auto& [cwe, count] : entries) {
      list.push_back(json{{"cwe", cwe}, {"count", count}});
    }
    top[tool] = list;
  }
  json groups = json::array();
  for (const CweSeverityCount& g : report.stats.cwe_severity) {
    groups.push_back(json{{"cwe", g.cwe},
                          {"severity", to_string(g.severity)},
                          {"count", g.count}});
  }

  return json{
      {"schema_version", kReportSchemaVersion},
      {"metadata", json{{"tool_version", report.metadata.tool_version},
                        {"timestamp", report.metadata.timestamp},
                        {"project", report.metadata.project},
                        {"config_digest", report.metadata.config_digest}}},
      {"code_findings", code},
      {"dep_findings", deps},
      {"components", components},
      {"scan_errors", errors},
      {"stats", json{{"per_tool", per_tool},
                     {"cwe_matrix", matrix_to_json(report.stats.matrix)},
                     {"top_cwes", top},
                     {"severity",
                      json{{"code", severity_counts_to_json(report.stats.code_severity)},
                           {"deps", severity_counts_to_json(report.stats.dep_severity)}}},
                     {"cwe_severity", groups}}},
      {"sbom_path", report.sbom_path}};
}

ScanReport report_from_json(const json& doc) {
  if (doc.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw Error("unsupported report schema version");
  }
  ScanReport report;
  const json& meta = doc.at("metadata");
  report.metadata.tool_version = meta.at("tool_version").get<std::string>();
  report.metadata.timestamp = meta.at("timestamp").get<std::string>();
  report.metadata.project = meta.at("project").get<std::string>();
  report.metadata.config_digest = meta.at("config_digest").get<std::string>();

  for (const json& f : doc.at("code_findings")) {
    report.code_findings.push_back(finding_from_json(f));
  }
  for (const json& d : doc.at("dep_findings")) {
    report.dep_findings.push_back(dep_finding_from_json(d));
  }
  for (const json& c : doc.at("components")) {
    report.components.push_back(component_from_json(c));
  }
  for (const json& e : doc.at("scan_errors")) {
    report.scan_errors.push_back(
        {e.at("path").get<std::string>(), e.at("reason").get<std::string>()});
  }

  const json& stats = doc.at("stats");
  for (const json& s : stats.at("per_tool")) {
    report.stats.per_tool.push_back(per_tool_from_json(s));
  }
  report.stats.matrix = matrix_from_json(stats.at("cwe_matrix"));
  for (auto it = stats.at("top_cwes").begin(); it != stats.at("top_cwes").end(); ++it) {
    std::vector<std::pair<std::string, std::size_t>> entries;
    for (const json& e : it.value()) {
      entries.emplace_back(e.at("cwe").get<std::string>(),
                           e.at("count").get<std::size_t>());
    }
    report.stats.top_cwes[it.key()] = std::move(entries);
  }
  report.stats.code_severity =
      severity_counts_from_json(stats.at("severity").at("code"));
  report.stats.dep_severity =
      severity_counts_from_json(stats.at("severity").at("deps"));
  for (const json& g : stats.at("cwe_severity")) {
    report.stats.cwe_severity.push_back(
        {g.at("cwe").get<std::string>(),
         parse_severity(g.at("severity").get<std::string>()),
         g.at("count").get<std::size_t>()});
  }
  report.sbom_path = doc.at("sbom_path").get<std::string>();
  return report;
}

// ---------------------------------------------------------------------------
// CSV / markdown renderers
// ---------------------------------------------------------------------------

namespace {

const char* kSeverityOrder[4] = {"Critical", "High", "Medium", "Low"};
const Severity kSeverityValues[4] = {Severity::Critical, Severity::High,
                                     Severity::Medium, Severity::Low};

}  // namespace

std::string stats_summary_csv(const ScanReport& report) {
  std::string out =
      "Project,Tool,Total Analyzed Files,Mean,Median,Max,Min,"
      "Total Vulnerable Files,Total CWEs\n";
  for (const ProjectToolStats& s : report.stats.per_tool) {
    out += util::csv_field(s.project) + "," + util::csv_field(s.tool) + "," +
           std::to_string(s.total_analyzed) + ",";
    if (s.has_line_stats) {
      out += util::format_fixed(s.lines_mean, 2) + "," +
             util::format_trimmed(s.lines_median) + "," +
             std::to_string(s.lines_max) + "," + std::to_string(s.lines_min);
    } else {
      out += "n/a,n/a,n/a,n/a";
    }
    out += "," + std::to_string(s.vulnerable_files) + "," +
           std::to_string(s.total_findings) + "\n";
  }
  return out;
}

std::string cwe_by_project_csv(const ScanReport& report) {
  const CweMatrix& m = report.stats.matrix;
  std::string out = "CWE";
  for (const auto& [project, tool] : m.columns) {
    out += "," + util::csv_field(project + "/" + tool);
  }
  out += ",Total\n";
  for (std::size_t i = 0; i < m.cwes.size(); ++i) {
    out += util::csv_field(m.cwes[i]);
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      out += "," + std::to_string(m.cells[i][j]);
    }
    out += "," + std::to_string(m.row_totals[i]) + "\n";
  }
  out += "Total";
  for (std::size_t j = 0; j < m.columns.size(); ++j) {
    out += "," + std::to_string(m.column_totals[j]);
  }
  out += "," + std::to_string(m.total) + "\n";
  return out;
}

std::string top_cwes_csv(const ScanReport& report) {
  std::string out = "Tool,S.No,CWE,Coding Findings\n";
  for (const auto& [tool, entries] : report.stats.top_cwes) {
    std::size_t rank = 1;
    for (const auto& [cwe, count] : entries) {
      out += util::csv_field(tool) + "," + std::to_string(rank++) + "," +
             util::csv_field(cwe) + "," + std::to_string(count) + "\n";
    }
  }
  return out;
}

std::string severity_csv(const ScanReport& report) {
  std::string out = "Severity,Count\n";
  for (int i = 0; i < 4; ++i) {
    out += std::string(kSeverityOrder[i]) + "," +
           std::to_string(report.stats.dep_severity.bucket(kSeverityValues[i])) + "\n";
  }
  return out;
}

std::string dep_findings_csv(const ScanReport& report) {
  std::string out = "Component,Installed,Fixed In,Type,Vulnerability,Severity,EPSS,Risk\n";
  for (const DepFinding& d : report.dep_findings) {
    out += util::csv_field(d.component.name) + "," +
           util::csv_field(d.component.version_spec) + "," +
           (d.recommended_fix ? d.recommended_fix->str() : std::string("none")) + "," +
           to_string(d.component.ecosystem) + std::string(",") +
           util::csv_field(d.advisory.id) + "," + to_string(d.advisory.severity) +
           "," + util::csv_field(format_epss(d.advisory.epss)) + "," +
           format_risk(d.risk, d.advisory.epss.below_threshold) + "\n";
  }
  return out;
}

std::string summary_markdown(const ScanReport& report) {
  std::ostringstream md;
  md << "# Scan report: " << report.metadata.project << "\n\n";
  md << "- Generated: " << report.metadata.timestamp << "\n";
  md << "- Tool: " << report.metadata.tool_version << "\n";
  md << "- Config digest: " << report.metadata.config_digest << "\n";
  md << "- Code findings: " << report.code_findings.size() << "\n";
  md << "- Dependency findings: " << report.dep_findings.size() << "\n";
  md << "- Components inventoried: " << report.components.size() << "\n";
  if (!report.scan_errors.empty()) {
    md << "- Scan errors: " << report.scan_errors.size() << "\n";
  }
  md << "\n## Code analysis\n\n";
  md << "| Project | Tool | Analyzed | Vulnerable files | Findings | Mean | Median | Max | Min |\n";
  md << "|---|---|---|---|---|---|---|---|---|\n";
  for (const ProjectToolStats& s : report.stats.per_tool) {
    md << "| " << s.project << " | " << s.tool << " | " << s.total_analyzed
       << " | " << s.vulnerable_files << " | " << s.total_findings << " | ";
    if (s.has_line_stats) {
      md << util::format_fixed(s.lines_mean, 2) << " | "
         << util::format_trimmed(s.lines_median) << " | " << s.lines_max << " | "
         << s.lines_min << " |\n";
    } else {
      md << "n/a | n/a | n/a | n/a |\n";
    }
  }

  md << "\n## Top CWEs\n";
  for (const auto& [tool, entries] : report.stats.top_cwes) {
    if (entries.empty()) continue;
    md << "\n### " << tool << "\n\n| S.No | CWE | Findings |\n|---|---|---|\n";
    std::size_t rank = 1;
    for (const auto& [cwe, count] : entries) {
      md << "| " << rank++ << " | " << cwe << " | " << count << " |\n";
    }
  }

  md << "\n## Severity distribution\n\n";
  md << "| Severity | Code findings | Dependency findings |\n|---|---|---|\n";
  for (int i = 0; i < 4; ++i) {
    md << "| " << kSeverityOrder[i] << " | "
       << report.stats.code_severity.bucket(kSeverityValues[i]) << " | "
       << report.stats.dep_severity.bucket(kSeverityValues[i]) << " |\n";
  }

  if (!report.dep_findings.empty()) {
    md << "\n## Dependency findings\n\n";
    md << "| Component | Installed | Fixed In | Type | Vulnerability | Severity "
          "| EPSS | Risk | Reachability |\n|---|---|---|---|---|---|---|---|---|\n";
    for (const DepFinding& d : report.dep_findings) {
      md << "| " << d.component.name << " | " << d.component.version_spec << " | "
         << (d.recommended_fix ? d.recommended_fix->str() : std::string("none"))
         << " | " << to_string(d.component.ecosystem) << " | " << d.advisory.id
         << " | " << to_string(d.advisory.severity) << " | "
         << format_epss(d.advisory.epss) << " | "
         << format_risk(d.risk, d.advisory.epss.below_threshold) << " | "
         << to_string(d.reachability) << " |\n";
    }
  }

  md << "\n## Recommendations\n\n";
  if (report.code_findings.empty() && report.dep_findings.empty()) {
    md << "No findings\n";
    return md.str();
  }
  bool any = false;
  for (const DepFinding& d : report.dep_findings) {
    if (d.advisory.severity < Severity::High) continue;
    any = true;
    md << "- Upgrade " << d.component.name << " to "
       << (d.recommended_fix ? d.recommended_fix->str()
                             : std::string("a patched release"))
       << " (" << d.advisory.id << ", " << to_string(d.advisory.severity)
       << ", risk " << format_risk(d.risk, d.advisory.epss.below_threshold)
       << ")\n";
  }
  for (const Finding& f : report.code_findings) {
    if (f.severity < Severity::High) continue;
    any = true;
    md << "- Review " << f.path << ":" << f.line << " (" << f.cwe << ")\n";
  }
  if (!any) {
    md << "No critical or high severity findings.\n";
  }
  return md.str();
}

RenderResult render_outputs(const ScanReport& report,
                            const std::filesystem::path& out_dir,
                            const std::vector<std::string>& formats) {
  RenderResult result;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  std::set<std::string> wanted(formats.begin(), formats.end());
  auto emit = [&](const std::string& name, const std::string& content) {
    std::filesystem::path path = out_dir / name;
    try {
      util::write_file(path, content);
      result.written.push_back(path);
    } catch (const Error& e) {
      result.errors.push_back({path.generic_string(), e.what()});
    }
  };

  if (wanted.count("json")) {
    emit("findings.json", report_to_json(report).dump(2) + "\n");
  }
  if (wanted.count("csv")) {
    emit("stats_summary.csv", stats_summary_csv(report));
    emit("cwe_by_project.csv", cwe_by_project_csv(report));
    emit("top_cwes.csv", top_cwes_csv(report));
    emit("severity.csv", severity_csv(report));
    emit("dep_findings.csv", dep_findings_csv(report));
  }
  if (wanted.count("md")) {
    emit("summary.md", summary_markdown(report));
  }
  emit(report.sbom_path,
       emit_sbom(report.components, report.metadata.project, "0.0.0",
                 sbom_namespace(report.metadata.project), report.metadata.timestamp)
               .dump(2) +
           "\n");
  return result;
}

}  // namespace avsc
