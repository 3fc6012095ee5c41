#pragma once

#include "avsc/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace avsc {

enum class LanguageKind { CCpp, Python, Manifest, Other };

const char* to_string(LanguageKind kind);

struct SourceFile {
  std::string path;  // relative, normalized to '/' separators
  LanguageKind language = LanguageKind::Other;
  std::size_t line_count = 0;
  std::string content;  // UTF-8, invalid bytes replaced

  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

// Immutable input set for all scanners. files is sorted strictly ascending
// by path; manifest_paths is the Manifest subset in the same order.
struct CorpusSnapshot {
  std::string root_label;
  std::vector<SourceFile> files;
  std::vector<std::string> manifest_paths;
  std::vector<ScanError> skipped;  // unreadable entries, non-fatal

  const SourceFile* find(std::string_view path) const;

  friend bool operator==(const CorpusSnapshot&, const CorpusSnapshot&) = default;
};

// Applied when the caller does not override excludes.
extern const std::vector<std::string> kDefaultExcludes;

// Pure function of the file name: extension table for C/C++ and Python,
// basename table for dependency manifests, Other for the rest.
LanguageKind classify_language(std::string_view path);

// Walks root (symlinks not followed), filters excludes, reads and classifies
// every regular file. Deterministic via a post-load sort regardless of
// traversal order; reads may run in parallel.
// Throws RootNotFoundError when root is missing.
CorpusSnapshot load_corpus(const std::filesystem::path& root,
                           const std::vector<std::string>& excludes = kDefaultExcludes,
                           std::string_view root_label = "",
                           int jobs = 1);

}  // namespace avsc
