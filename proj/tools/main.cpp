// avsc — static analysis and software-composition scanner CLI.

#include "avsc/report.hpp"
#include "avsc/util.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

avsc::Severity parse_fail_on(const std::string& text) {
  avsc::Severity s;
  if (!avsc::try_parse_severity(text, s)) {
    throw avsc::ConfigError("fail_on: unknown severity \"" + text + "\"");
  }
  return s;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string piece = comma == std::string::npos
                            ? text.substr(start)
                            : text.substr(start, comma - start);
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

avsc::RiskWeights parse_weights(const std::string& text) {
  std::vector<std::string> parts = split_csv(text);
  if (parts.size() != 4) {
    throw avsc::ConfigError("weights: expected four comma-separated values");
  }
  avsc::RiskWeights w;
  try {
    w.critical = std::stod(parts[0]);
    w.high = std::stod(parts[1]);
    w.medium = std::stod(parts[2]);
    w.low = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw avsc::ConfigError("weights: not a number in \"" + text + "\"");
  }
  return w;
}

int run_scan(const std::string& root, const std::string& project,
             const std::string& rules, const std::string& feed,
             const std::string& out_dir, const std::string& formats,
             const std::string& fail_on, const std::vector<std::string>& excludes,
             int jobs, const std::string& timestamp, const std::string& weights,
             std::size_t top_n) {
  avsc::ScanConfig config;
  config.root = root;
  config.project = project;
  if (!excludes.empty()) config.excludes = excludes;
  if (!rules.empty()) config.rules_file = rules;
  if (!feed.empty()) {
    config.feed_file = feed;
  } else if (const char* env = std::getenv("AVSC_FEED"); env && *env) {
    config.feed_file = std::string(env);
  }
  config.out_dir = out_dir;
  if (!formats.empty()) config.formats = split_csv(formats);
  if (!fail_on.empty()) config.fail_on = parse_fail_on(fail_on);
  config.jobs = jobs;
  if (!timestamp.empty()) config.timestamp = timestamp;
  if (!weights.empty()) config.weights = parse_weights(weights);
  config.top_n = top_n;

  avsc::ScanReport report = avsc::run_pipeline(config);
  avsc::RenderResult rendered =
      avsc::render_outputs(report, config.out_dir, config.formats);
  for (const avsc::ScanError& e : rendered.errors) {
    std::cerr << "warning: " << e.path << ": " << e.reason << "\n";
  }
  std::cout << report.metadata.project << ": " << report.code_findings.size()
            << " code finding(s), " << report.dep_findings.size()
            << " dependency finding(s), " << report.components.size()
            << " component(s)";
  if (!report.scan_errors.empty()) {
    std::cout << ", " << report.scan_errors.size() << " scan error(s)";
  }
  std::cout << "\n";
  for (const auto& path : rendered.written) {
    std::cout << "  wrote " << path.generic_string() << "\n";
  }
  return avsc::exit_code_for(report, config.fail_on);
}

int run_sbom(const std::string& root, const std::string& name,
             const std::string& version, const std::string& namespace_uri,
             const std::string& out_dir, const std::vector<std::string>& excludes,
             const std::string& timestamp) {
  if (!timestamp.empty() && !avsc::util::looks_like_rfc3339(timestamp)) {
    throw avsc::ConfigError("timestamp: not an RFC-3339 timestamp: \"" +
                            timestamp + "\"");
  }
  avsc::CorpusSnapshot snapshot;
  try {
    snapshot = avsc::load_corpus(
        root, excludes.empty() ? avsc::kDefaultExcludes : excludes, name);
  } catch (const avsc::RootNotFoundError& e) {
    throw avsc::ConfigError("root: " + std::string(e.what()));
  }
  std::vector<avsc::Component> components;
  for (const std::string& path : snapshot.manifest_paths) {
    avsc::ManifestParseResult parsed = avsc::parse_manifest(*snapshot.find(path));
    for (const avsc::ScanError& e : parsed.errors) {
      std::cerr << "warning: " << e.path << ": " << e.reason << "\n";
    }
    components.insert(components.end(), parsed.components.begin(),
                      parsed.components.end());
  }
  // cross-manifest dedup
  std::vector<avsc::Component> unique;
  for (const avsc::Component& c : components) {
    bool seen = false;
    for (const avsc::Component& u : unique) {
      if (u.ecosystem == c.ecosystem && u.name == c.name &&
          u.version_spec == c.version_spec) {
        seen = true;
        break;
      }
    }
    if (!seen) unique.push_back(c);
  }

  std::filesystem::create_directories(out_dir);
  std::filesystem::path path = std::filesystem::path(out_dir) / (name + "-sbom.json");
  nlohmann::json doc = avsc::emit_sbom(
      unique, name, version, namespace_uri,
      timestamp.empty() ? avsc::util::utc_now_rfc3339() : timestamp);
  avsc::util::write_file(path, doc.dump(2) + "\n");
  std::cout << "wrote " << path.generic_string() << " (" << unique.size()
            << " package(s))\n";
  return 0;
}

// The sbom subcommand mirrors the upstream generator's -pn/-pv/-nsb/-bc
// spellings, which CLI11 cannot register directly.
std::vector<std::string> normalize_args(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc));
  for (int i = 0; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "-pn") arg = "--package-name";
    else if (arg == "-pv") arg = "--package-version";
    else if (arg == "-nsb") arg = "--namespace";
    else if (arg == "-bc") arg = "--build-path";
    args.push_back(std::move(arg));
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"static analysis and supply-chain vulnerability scanner"};
  app.set_version_flag("--version", avsc::kToolVersion);
  app.require_subcommand(1);

  // scan
  std::string scan_root;
  std::string project;
  std::string rules;
  std::string feed;
  std::string out_dir = "avsc-out";
  std::string formats;
  std::string fail_on;
  std::vector<std::string> excludes;
  int jobs = 1;
  std::string timestamp;
  std::string weights;
  std::size_t top_n = 10;

  CLI::App* scan = app.add_subcommand("scan", "scan a source tree and write reports");
  scan->add_option("path", scan_root, "root of the tree to scan")->required();
  scan->add_option("--project", project, "project label (default: root directory name)");
  scan->add_option("--rules", rules, "JSON rule file for the pattern engine");
  scan->add_option("--feed", feed, "offline advisory feed (default: $AVSC_FEED)");
  scan->add_option("--out", out_dir, "output directory")->capture_default_str();
  scan->add_option("--format", formats, "comma-separated subset of json,csv,md");
  scan->add_option("--fail-on", fail_on, "exit 1 when a finding reaches this severity");
  scan->add_option("--exclude", excludes, "glob to exclude (repeatable; replaces defaults)");
  scan->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  scan->add_option("--timestamp", timestamp, "pin the report timestamp (RFC-3339)");
  scan->add_option("--weights", weights, "risk weights as Critical,High,Medium,Low");
  scan->add_option("--top", top_n, "top-N CWE list length")->capture_default_str();

  // sbom
  std::string sbom_root;
  std::string package_name;
  std::string package_version;
  std::string namespace_uri;
  std::string sbom_out = ".";
  std::vector<std::string> sbom_excludes;
  std::string sbom_timestamp;
  std::string build_path;  // alias of the positional, kept for flag parity

  CLI::App* sbom = app.add_subcommand("sbom", "generate an SBOM from manifests");
  sbom->add_option("path", sbom_root, "root of the tree to inventory");
  sbom->add_option("--build-path", build_path, "root of the tree (alias of path)");
  sbom->add_option("--package-name", package_name, "SBOM package name (-pn)")->required();
  sbom->add_option("--package-version", package_version, "SBOM package version (-pv)")
      ->required();
  sbom->add_option("--namespace", namespace_uri, "SBOM namespace URI (-nsb)")->required();
  sbom->add_option("-b,--out", sbom_out, "output directory")->capture_default_str();
  sbom->add_option("--exclude", sbom_excludes, "glob to exclude (repeatable)");
  sbom->add_option("--timestamp", sbom_timestamp, "pin the creation timestamp");

  std::vector<std::string> args = normalize_args(argc, argv);
  std::vector<const char*> cargs;
  cargs.reserve(args.size());
  for (const std::string& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are configuration errors
  }

  try {
    if (scan->parsed()) {
      return run_scan(scan_root, project, rules, feed, out_dir, formats, fail_on,
                      excludes, jobs, timestamp, weights, top_n);
    }
    if (sbom->parsed()) {
      std::string root = sbom_root.empty() ? build_path : sbom_root;
      if (root.empty()) {
        throw avsc::ConfigError("root: missing tree path (positional or -bc)");
      }
      return run_sbom(root, package_name, package_version, namespace_uri,
                      sbom_out, sbom_excludes, sbom_timestamp);
    }
  } catch (const avsc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const avsc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
