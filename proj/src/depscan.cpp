#include "avsc/depscan.hpp"

#include "avsc/util.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

using nlohmann::json;

namespace avsc {

const char* to_string(Ecosystem eco) {
  switch (eco) {
    case Ecosystem::Npm: return "npm";
    case Ecosystem::Pypi: return "pypi";
    case Ecosystem::Gem: return "gem";
  }
  return "npm";
}

bool try_parse_ecosystem(std::string_view text, Ecosystem& out) {
  if (text == "npm") out = Ecosystem::Npm;
  else if (text == "pypi") out = Ecosystem::Pypi;
  else if (text == "gem") out = Ecosystem::Gem;
  else return false;
  return true;
}

const char* to_string(Reachability r) {
  switch (r) {
    case Reachability::Reachable: return "reachable";
    case Reachability::NeedsReview: return "need-review";
    case Reachability::Unreachable: return "unreachable";
  }
  return "need-review";
}

bool try_parse_reachability(std::string_view text, Reachability& out) {
  if (text == "reachable") out = Reachability::Reachable;
  else if (text == "need-review") out = Reachability::NeedsReview;
  else if (text == "unreachable") out = Reachability::Unreachable;
  else return false;
  return true;
}

namespace {

std::string trim_copy(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

void dedup_components(std::vector<Component>& components) {
  std::set<std::tuple<Ecosystem, std::string, std::string>> seen;
  std::vector<Component> out;
  out.reserve(components.size());
  for (Component& c : components) {
    if (seen.insert({c.ecosystem, c.name, c.version_spec}).second) {
      out.push_back(std::move(c));
    }
  }
  components = std::move(out);
}

void collect_npm_dependencies(const json& deps, const SourceFile& file,
                              ManifestParseResult& result) {
  if (!deps.is_object()) return;
  for (auto it = deps.begin(); it != deps.end(); ++it) {
    const json& entry = it.value();
    if (!entry.is_object()) continue;
    if (entry.contains("version") && entry["version"].is_string()) {
      std::string version = entry["version"].get<std::string>();
      if (Version::try_parse(version)) {
        result.components.push_back(
            {Ecosystem::Npm, it.key(), version, file.path});
      } else {
        result.errors.push_back(
            {file.path, "package " + it.key() + ": unparseable version \"" +
                            version + "\""});
      }
    }
    if (entry.contains("dependencies")) {
      collect_npm_dependencies(entry["dependencies"], file, result);
    }
  }
}

void parse_package_lock(const SourceFile& file, ManifestParseResult& result) {
  json doc;
  try {
    doc = json::parse(file.content);
  } catch (const json::exception& e) {
    result.errors.push_back({file.path, std::string("invalid JSON: ") + e.what()});
    return;
  }
  if (!doc.is_object()) {
    result.errors.push_back({file.path, "lockfile is not a JSON object"});
    return;
  }
  if (doc.contains("packages") && doc["packages"].is_object()) {
    // lockfileVersion >= 2: keys are install paths under node_modules.
    for (auto it = doc["packages"].begin(); it != doc["packages"].end(); ++it) {
      const std::string& key = it.key();
      std::size_t marker = key.rfind("node_modules/");
      if (marker == std::string::npos) continue;  // root/workspace entries
      std::string name = key.substr(marker + 13);
      const json& entry = it.value();
      if (name.empty() || !entry.is_object() || !entry.contains("version") ||
          !entry["version"].is_string()) {
        continue;
      }
      std::string version = entry["version"].get<std::string>();
      if (Version::try_parse(version)) {
        result.components.push_back({Ecosystem::Npm, name, version, file.path});
      } else {
        result.errors.push_back(
            {file.path,
             "package " + name + ": unparseable version \"" + version + "\""});
      }
    }
  }
  if (doc.contains("dependencies")) {
    collect_npm_dependencies(doc["dependencies"], file, result);
  }
}

void parse_requirements(const SourceFile& file, ManifestParseResult& result) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  const std::string& text = file.content;
  while (start <= text.size()) {
    ++line_no;
    std::size_t nl = text.find('\n', start);
    std::string line = nl == std::string::npos ? text.substr(start)
                                               : text.substr(start, nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;

    // pip comment rule: '#' at start of line or preceded by whitespace
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' &&
          (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    std::size_t marker = line.find(';');  // environment markers
    if (marker != std::string::npos) line.erase(marker);
    line = trim_copy(line);
    if (line.empty()) continue;
    if (line[0] == '-') continue;  // pip options (-r, --hash, -e, ...)

    std::size_t i = 0;
    while (i < line.size() &&
           (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '-' ||
            line[i] == '_' || line[i] == '.')) {
      ++i;
    }
    std::string name = line.substr(0, i);
    if (name.empty()) {
      result.errors.push_back(
          {file.path, "line " + std::to_string(line_no) + ": unparseable requirement"});
      continue;
    }
    std::string rest = trim_copy(line.substr(i));
    if (!rest.empty() && rest[0] == '[') {  // extras
      std::size_t close = rest.find(']');
      if (close == std::string::npos) {
        result.errors.push_back(
            {file.path, "line " + std::to_string(line_no) + ": unterminated extras"});
        continue;
      }
      rest = trim_copy(rest.substr(close + 1));
    }
    if (rest.empty()) {
      // unpinned requirement: any version
      result.components.push_back({Ecosystem::Pypi, name, ">=0.0.0", file.path});
      continue;
    }
    if (rest.rfind("==", 0) == 0) {
      std::string version = trim_copy(rest.substr(2));
      if (Version::try_parse(version)) {
        result.components.push_back({Ecosystem::Pypi, name, version, file.path});
      } else {
        result.errors.push_back({file.path, "line " + std::to_string(line_no) +
                                                ": unparseable version \"" +
                                                version + "\""});
      }
      continue;
    }
    if (rest[0] == '>' || rest[0] == '<') {
      std::string range = rest;
      std::replace(range.begin(), range.end(), ',', ' ');
      try {
        VersionRange::parse(range);
        result.components.push_back({Ecosystem::Pypi, name, range, file.path});
      } catch (const VersionParseError& e) {
        result.errors.push_back(
            {file.path, "line " + std::to_string(line_no) + ": " + e.what()});
      }
      continue;
    }
    result.errors.push_back({file.path, "line " + std::to_string(line_no) +
                                            ": unsupported version operator in \"" +
                                            rest + "\""});
  }
}

void parse_gemfile_lock(const SourceFile& file, ManifestParseResult& result) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  const std::string& text = file.content;
  bool in_specs = false;
  while (start <= text.size()) {
    ++line_no;
    std::size_t nl = text.find('\n', start);
    std::string line = nl == std::string::npos ? text.substr(start)
                                               : text.substr(start, nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      in_specs = false;
      continue;
    }
    if (line[0] != ' ') {
      in_specs = false;  // new top-level section (GEM, PLATFORMS, ...)
      continue;
    }
    if (trim_copy(line) == "specs:") {
      in_specs = true;
      continue;
    }
    if (!in_specs) continue;
    // resolved entries carry exactly 4 spaces; deeper lines are constraints
    if (line.rfind("    ", 0) != 0 || (line.size() > 4 && line[4] == ' ')) continue;
    std::string entry = trim_copy(line);
    std::size_t open = entry.find(" (");
    if (open == std::string::npos || entry.back() != ')') continue;
    std::string name = entry.substr(0, open);
    std::string version = entry.substr(open + 2, entry.size() - open - 3);
    if (Version::try_parse(version)) {
      result.components.push_back({Ecosystem::Gem, name, version, file.path});
    } else {
      result.errors.push_back({file.path, "line " + std::to_string(line_no) +
                                              ": unparseable version \"" + version +
                                              "\""});
    }
  }
}

std::string basename_of(std::string_view path) {
  std::size_t slash = path.find_last_of('/');
  return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

}  // namespace

ManifestParseResult parse_manifest(const SourceFile& file) {
  ManifestParseResult result;
  std::string base = basename_of(file.path);
  if (base == "package-lock.json") {
    parse_package_lock(file, result);
  } else if (base == "requirements.txt") {
    parse_requirements(file, result);
  } else if (base == "Gemfile.lock") {
    parse_gemfile_lock(file, result);
  } else {
    result.errors.push_back({file.path, "unknown manifest type"});
    return result;
  }
  dedup_components(result.components);
  return result;
}

std::vector<Advisory> parse_feed(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw FeedValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("advisories") ||
      !doc["advisories"].is_array()) {
    throw FeedValidationError("missing top-level \"advisories\" array");
  }
  std::vector<Advisory> feed;
  for (const json& item : doc["advisories"]) {
    auto fail = [&](const std::string& why) -> FeedValidationError {
      std::string id = item.is_object() && item.contains("id") && item["id"].is_string()
                           ? item["id"].get<std::string>()
                           : "<advisory " + std::to_string(feed.size()) + ">";
      return FeedValidationError(id + ": " + why);
    };
    if (!item.is_object()) throw fail("not an object");
    for (const char* key : {"id", "ecosystem", "package", "severity", "summary"}) {
      if (!item.contains(key) || !item[key].is_string()) {
        throw fail(std::string("missing or non-string key \"") + key + "\"");
      }
    }
    Advisory adv;
    adv.id = item["id"].get<std::string>();
    if (adv.id.empty()) throw fail("empty id");
    if (!try_parse_ecosystem(item["ecosystem"].get<std::string>(), adv.ecosystem)) {
      throw fail("unknown ecosystem \"" + item["ecosystem"].get<std::string>() + "\"");
    }
    adv.package = item["package"].get<std::string>();
    if (adv.package.empty()) throw fail("empty package");
    if (!try_parse_severity(item["severity"].get<std::string>(), adv.severity)) {
      throw fail("unknown severity \"" + item["severity"].get<std::string>() + "\"");
    }
    adv.summary = item["summary"].get<std::string>();

    if (!item.contains("affected_ranges") || !item["affected_ranges"].is_array() ||
        item["affected_ranges"].empty()) {
      throw fail("affected_ranges must be a non-empty array");
    }
    for (const json& r : item["affected_ranges"]) {
      if (!r.is_string()) throw fail("affected_ranges entries must be strings");
      try {
        VersionRange::parse(r.get<std::string>());
      } catch (const VersionParseError& e) {
        throw fail(std::string("bad range: ") + e.what());
      }
      adv.affected_ranges.push_back(r.get<std::string>());
    }

    if (!item.contains("fixed_in") || !item["fixed_in"].is_array()) {
      throw fail("fixed_in must be an array");
    }
    for (const json& f : item["fixed_in"]) {
      if (!f.is_string()) throw fail("fixed_in entries must be strings");
      try {
        adv.fixed_in.push_back(Version::parse(f.get<std::string>()));
      } catch (const VersionParseError& e) {
        throw fail(std::string("bad fixed_in: ") + e.what());
      }
    }
    if (!std::is_sorted(adv.fixed_in.begin(), adv.fixed_in.end(),
                        [](const Version& a, const Version& b) { return a < b; })) {
      throw fail("fixed_in not sorted ascending");
    }

    if (!item.contains("epss_percent")) throw fail("missing key \"epss_percent\"");
    const json& epss = item["epss_percent"];
    if (epss.is_string()) {
      if (epss.get<std::string>() != "<0.1") {
        throw fail("epss_percent string must be \"<0.1\"");
      }
      adv.epss.below_threshold = true;
      adv.epss.percent = 0.05;
    } else if (epss.is_number()) {
      adv.epss.percent = epss.get<double>();
      if (adv.epss.percent < 0.0 || adv.epss.percent > 100.0) {
        throw fail("epss_percent out of [0,100]");
      }
    } else {
      throw fail("epss_percent must be a number or \"<0.1\"");
    }
    if (item.contains("epss_percentile")) {
      if (!item["epss_percentile"].is_number_integer()) {
        throw fail("epss_percentile must be an integer");
      }
      adv.epss.percentile = item["epss_percentile"].get<int>();
    }
    feed.push_back(std::move(adv));
  }
  return feed;
}

std::vector<Advisory> load_feed(const std::filesystem::path& path) {
  auto text = util::read_file(path);
  if (!text) throw FeedValidationError("cannot read " + path.string());
  return parse_feed(*text);
}

std::vector<DepFinding> match_advisories(const std::vector<Component>& components,
                                         const std::vector<Advisory>& feed) {
  for (const Advisory& adv : feed) {
    if (adv.affected_ranges.empty()) {
      throw FeedValidationError(adv.id + ": affected_ranges must be a non-empty array");
    }
  }
  std::vector<DepFinding> findings;
  for (const Component& component : components) {
    VersionRange spec = VersionRange::parse(component.version_spec);
    std::optional<Version> resolved = spec.min_satisfying();
    if (!resolved) continue;  // unsatisfiable spec
    for (const Advisory& adv : feed) {
      if (adv.ecosystem != component.ecosystem || adv.package != component.name) {
        continue;
      }
      bool affected = false;
      for (const std::string& range : adv.affected_ranges) {
        if (version_in_range(*resolved, range)) {
          affected = true;
          break;
        }
      }
      if (!affected) continue;
      bool below_major_fixes = true;
      for (const Version& fix : adv.fixed_in) {
        if (fix.major == resolved->major && !(*resolved < fix)) {
          below_major_fixes = false;
          break;
        }
      }
      if (!below_major_fixes) continue;

      DepFinding finding;
      finding.component = component;
      finding.advisory = adv;
      for (const Version& fix : adv.fixed_in) {  // ascending: first hit is smallest
        if (fix.major == resolved->major) {
          finding.recommended_fix = fix;
          break;
        }
      }
      if (!finding.recommended_fix && !adv.fixed_in.empty()) {
        finding.recommended_fix = adv.fixed_in.front();
      }
      findings.push_back(std::move(finding));
    }
  }
  sort_dep_findings(findings);
  return findings;
}

namespace {

std::string normalize_package_name(std::string_view name) {
  std::string out = util::to_lower(name);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

bool word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

bool token_present(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return false;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !word_char(haystack[pos - 1]);
    std::size_t after = pos + needle.size();
    bool right_ok = after >= haystack.size() || !word_char(haystack[after]);
    if (left_ok && right_ok) return true;
    pos += 1;
  }
  return false;
}

// First dotted component of each imported module in a Python file.
void python_imports(const std::string& content, std::vector<std::string>& out) {
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t nl = content.find('\n', start);
    std::string_view line(content.data() + start,
                          (nl == std::string::npos ? content.size() : nl) - start);
    start = nl == std::string::npos ? content.size() + 1 : nl + 1;
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string_view rest = line.substr(i);
    auto take_first_component = [](std::string_view text) {
      std::size_t k = 0;
      while (k < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '_')) {
        ++k;
      }
      return std::string(text.substr(0, k));
    };
    if (rest.rfind("import ", 0) == 0) {
      std::string_view modules = rest.substr(7);
      std::size_t pos = 0;
      while (pos <= modules.size()) {
        std::size_t comma = modules.find(',', pos);
        std::string_view part =
            comma == std::string_view::npos ? modules.substr(pos)
                                            : modules.substr(pos, comma - pos);
        while (!part.empty() && (part.front() == ' ' || part.front() == '\t')) {
          part.remove_prefix(1);
        }
        std::string first = take_first_component(part);
        if (!first.empty()) out.push_back(first);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
    } else if (rest.rfind("from ", 0) == 0) {
      std::string_view module = rest.substr(5);
      while (!module.empty() && (module.front() == ' ' || module.front() == '\t')) {
        module.remove_prefix(1);
      }
      std::string first = take_first_component(module);
      if (!first.empty()) out.push_back(first);
    }
  }
}

// First path segment (extension stripped when plain) of each #include.
void c_includes(const std::string& content, std::vector<std::string>& out) {
  std::size_t pos = 0;
  while ((pos = content.find("include", pos)) != std::string::npos) {
    std::size_t hash = pos == 0 ? std::string::npos
                                : content.find_last_not_of(" \t", pos - 1);
    if (hash == std::string::npos || content[hash] != '#') {
      pos += 7;
      continue;
    }
    std::size_t i = pos + 7;
    while (i < content.size() && (content[i] == ' ' || content[i] == '\t')) ++i;
    if (i >= content.size() || (content[i] != '<' && content[i] != '"')) {
      pos += 7;
      continue;
    }
    char close = content[i] == '<' ? '>' : '"';
    std::size_t end = content.find(close, i + 1);
    if (end == std::string::npos) break;
    std::string header = content.substr(i + 1, end - i - 1);
    std::size_t slash = header.find('/');
    std::string first = slash == std::string::npos ? header : header.substr(0, slash);
    if (slash == std::string::npos) {
      std::size_t dot = first.find_last_of('.');
      if (dot != std::string::npos && dot > 0) first.erase(dot);
    }
    if (!first.empty()) out.push_back(first);
    pos = end + 1;
  }
}

}  // namespace

Reachability classify_reachability(const Component& component,
                                   const CorpusSnapshot& snapshot) {
  const std::string target = normalize_package_name(component.name);
  bool token_seen = false;
  for (const SourceFile& file : snapshot.files) {
    if (file.language != LanguageKind::Python && file.language != LanguageKind::CCpp) {
      continue;
    }
    std::vector<std::string> modules;
    if (file.language == LanguageKind::Python) {
      python_imports(file.content, modules);
    } else {
      c_includes(file.content, modules);
    }
    for (const std::string& module : modules) {
      if (normalize_package_name(module) == target) return Reachability::Reachable;
    }
    if (!token_seen &&
        token_present(normalize_package_name(file.content), target)) {
      token_seen = true;
    }
  }
  return token_seen ? Reachability::NeedsReview : Reachability::Unreachable;
}

void sort_dep_findings(std::vector<DepFinding>& findings) {
  std::sort(findings.begin(), findings.end(),
            [](const DepFinding& a, const DepFinding& b) {
              if (a.advisory.severity != b.advisory.severity) {
                return a.advisory.severity > b.advisory.severity;
              }
              if (a.risk != b.risk) return a.risk > b.risk;
              if (a.component.name != b.component.name) {
                return a.component.name < b.component.name;
              }
              if (a.component.version_spec != b.component.version_spec) {
                return a.component.version_spec < b.component.version_spec;
              }
              return a.advisory.id < b.advisory.id;
            });
}

json emit_sbom(const std::vector<Component>& components, std::string_view name,
               std::string_view version, std::string_view namespace_uri,
               std::string_view timestamp) {
  std::vector<const Component*> sorted;
  sorted.reserve(components.size());
  for (const Component& c : components) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(), [](const Component* a, const Component* b) {
    return std::tuple<std::string_view, const std::string&, const std::string&>(
               to_string(a->ecosystem), a->name, a->version_spec) <
           std::tuple<std::string_view, const std::string&, const std::string&>(
               to_string(b->ecosystem), b->name, b->version_spec);
  });

  json packages = json::array();
  for (const Component* c : sorted) {
    packages.push_back({{"name", c->name},
                        {"versionInfo", c->version_spec},
                        {"ecosystem", to_string(c->ecosystem)},
                        {"sourceManifest", c->source_manifest}});
  }
  return json{{"name", std::string(name)},
              {"version", std::string(version)},
              {"created", std::string(timestamp)},
              {"namespace", std::string(namespace_uri)},
              {"packages", packages}};
}

}  // namespace avsc
