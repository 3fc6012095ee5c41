#pragma once

#include "avsc/corpus.hpp"
#include "avsc/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace avsc {

enum class RuleLanguage { C, Python, Any };

const char* to_string(RuleLanguage lang);

// One declarative token-pattern rule. In patterns, `...` matches a lazy run
// of tokens bounded by its enclosing balanced ()/[]/{} group and `$X`
// matches exactly one token.
struct RuleSpec {
  std::string id;
  RuleLanguage language = RuleLanguage::Any;
  std::string pattern;
  std::string cwe;
  Severity severity = Severity::Low;
  std::string message;
};

// Parse and validate a JSON rule document: top-level "rules" array of
// objects with keys {id, language, pattern, cwe, severity, message}.
// Any invalid rule fails the whole file with RuleParseError; partial rule
// sets are never applied.
std::vector<RuleSpec> parse_rule_file(const std::string& document);
std::vector<RuleSpec> load_rule_file(const std::filesystem::path& path);

// Tokenized representation shared by the matcher; C/C++ files are masked
// first, Python files use the pyscan lexer with comments dropped.
struct CodeToken {
  std::string text;
  int line = 1;
  int col = 0;
  bool is_name = false;
};

std::vector<CodeToken> tokenize_c_masked(std::string_view masked);

// Apply every rule to every file matching its language filter. Matches are
// non-overlapping, leftmost-first; findings sorted by (path, line, rule id).
// Per-file lexer failures are appended to errors when provided.
std::vector<Finding> apply_rules(const CorpusSnapshot& snapshot,
                                 const std::vector<RuleSpec>& rules,
                                 int jobs = 1,
                                 std::vector<ScanError>* errors = nullptr);

}  // namespace avsc
