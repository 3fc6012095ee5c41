#pragma once

#include "avsc/corpus.hpp"
#include "avsc/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace avsc {

enum class PyTokenKind {
  Identifier,
  DottedName,  // "pickle.loads" combined into one token
  Keyword,
  String,  // raw literal text including prefix and quotes
  Number,
  Punct,
  Comment,
};

struct PyToken {
  PyTokenKind kind = PyTokenKind::Punct;
  std::string text;
  int line = 1;  // 1-based
  int col = 0;   // 0-based byte offset within the line
};

struct PyTokenizeResult {
  std::vector<PyToken> tokens;
  std::optional<std::string> error;  // lexically malformed input, never fatal
};

// Lightweight Python lexer: identifiers, dotted names, keywords, strings
// (single/triple quoted, prefix-aware), numbers, comments, punctuation with
// maximal-munch operators. Unterminated strings produce an error and no
// tokens.
PyTokenizeResult tokenize_python(std::string_view content);

// Inner text of a string literal token: prefix and quotes removed.
std::string string_literal_content(std::string_view raw);

enum class PyMatchKind {
  CallName,             // pattern: dotted name, bare name, or "module.*"
  CallNameWithKeyword,  // pattern as above plus keyword=value inside the call
  BareExceptPass,       // "except:" / "except Exception:" whose suite is pass
  AssignStringToName,   // pattern: '|'-joined name substrings, value a string
};

struct PyRule {
  std::string rule_id;  // unique
  PyMatchKind match_kind = PyMatchKind::CallName;
  std::string pattern;
  std::string keyword;  // CallNameWithKeyword only
  std::string value;    // CallNameWithKeyword only
  std::string cwe;
  Severity severity = Severity::Low;
  std::string message;
};

const std::vector<PyRule>& builtin_py_rules();

struct PyScanResult {
  std::vector<Finding> findings;  // ordered by (line, rule_id)
  std::vector<ScanError> errors;
};

PyScanResult scan_py_file(const SourceFile& file, const std::vector<PyRule>& rules);

}  // namespace avsc
