#include "avsc/corpus.hpp"

#include "avsc/util.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <set>

namespace fs = std::filesystem;

namespace avsc {

const std::vector<std::string> kDefaultExcludes = {".git/**", "**/third_party/**"};

const char* to_string(LanguageKind kind) {
  switch (kind) {
    case LanguageKind::CCpp: return "c/c++";
    case LanguageKind::Python: return "python";
    case LanguageKind::Manifest: return "manifest";
    case LanguageKind::Other: return "other";
  }
  return "other";
}

const SourceFile* CorpusSnapshot::find(std::string_view path) const {
  auto it = std::lower_bound(files.begin(), files.end(), path,
                             [](const SourceFile& f, std::string_view p) {
                               return f.path < p;
                             });
  if (it != files.end() && it->path == path) return &*it;
  return nullptr;
}

LanguageKind classify_language(std::string_view path) {
  static const std::set<std::string, std::less<>> kCcppExts = {
      ".c", ".cc", ".cpp", ".cxx", ".h", ".hh", ".hpp", ".hxx"};
  static const std::set<std::string, std::less<>> kManifestNames = {
      "package-lock.json", "requirements.txt", "Gemfile.lock"};

  std::size_t slash = path.find_last_of('/');
  std::string_view base =
      slash == std::string_view::npos ? path : path.substr(slash + 1);
  if (kManifestNames.count(std::string(base))) return LanguageKind::Manifest;

  std::size_t dot = base.find_last_of('.');
  if (dot == std::string_view::npos || dot == 0) return LanguageKind::Other;
  std::string ext = util::to_lower(base.substr(dot));
  if (ext == ".py") return LanguageKind::Python;
  if (kCcppExts.count(ext)) return LanguageKind::CCpp;
  return LanguageKind::Other;
}

CorpusSnapshot load_corpus(const fs::path& root,
                           const std::vector<std::string>& excludes,
                           std::string_view root_label, int jobs) {
  std::error_code ec;
  if (!fs::exists(root, ec) || ec) {
    throw RootNotFoundError("root not found: " + root.string());
  }
  if (!fs::is_directory(root, ec) || ec) {
    throw RootNotFoundError("root is not a directory: " + root.string());
  }

  CorpusSnapshot snapshot;
  snapshot.root_label = root_label.empty()
                            ? fs::absolute(root).lexically_normal().filename().string()
                            : std::string(root_label);
  if (snapshot.root_label.empty()) snapshot.root_label = root.string();

  fs::path base = fs::weakly_canonical(root, ec);
  if (ec) base = fs::absolute(root);

  std::vector<std::string> paths;
  fs::recursive_directory_iterator it(
      base, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw RootNotFoundError("root not readable: " + root.string());
  for (auto end = fs::end(it); it != end; it.increment(ec)) {
    if (ec) break;
    const fs::directory_entry& entry = *it;
    if (entry.is_symlink(ec) || ec) continue;  // symlinks are never followed
    if (!entry.is_regular_file(ec) || ec) continue;
    std::string rel = entry.path().lexically_relative(base).generic_string();
    bool excluded = false;
    for (const std::string& pattern : excludes) {
      if (util::glob_match(pattern, rel)) {
        excluded = true;
        break;
      }
    }
    if (!excluded) paths.push_back(std::move(rel));
  }
  std::sort(paths.begin(), paths.end());

  std::vector<SourceFile> loaded(paths.size());
  std::vector<char> ok(paths.size(), 0);
  std::mutex skipped_mutex;
  util::parallel_for(paths.size(), jobs, [&](std::size_t i) {
    auto bytes = util::read_file(base / fs::path(paths[i]));
    if (!bytes) {
      std::lock_guard<std::mutex> lock(skipped_mutex);
      snapshot.skipped.push_back({paths[i], "unreadable"});
      return;
    }
    SourceFile file;
    file.path = paths[i];
    file.language = classify_language(file.path);
    file.content = util::lossy_utf8(*bytes);
    if (file.content.rfind("\xEF\xBB\xBF", 0) == 0) file.content.erase(0, 3);
    file.line_count = util::count_lines(file.content);
    loaded[i] = std::move(file);
    ok[i] = 1;
  });

  snapshot.files.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (ok[i]) snapshot.files.push_back(std::move(loaded[i]));
  }
  std::sort(snapshot.skipped.begin(), snapshot.skipped.end(),
            [](const ScanError& a, const ScanError& b) { return a.path < b.path; });
  for (const SourceFile& f : snapshot.files) {
    if (f.language == LanguageKind::Manifest) snapshot.manifest_paths.push_back(f.path);
  }
  return snapshot;
}

}  // namespace avsc
