#pragma once

#include "avsc/corpus.hpp"
#include "avsc/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace avsc {

// One dangerous-function catalog entry for the C/C++ scanner.
struct CRule {
  std::string function_name;  // unique within a catalog
  std::string cwe;
  Severity default_severity = Severity::Medium;
  std::string note;
};

// strcpy/gets/system/... mapped to their CWE families. Severity follows the
// 0-5 risk collapse {0-1 Low, 2-3 Medium, 4 High, 5 Critical}.
const std::vector<CRule>& builtin_c_catalog();

// Replace comments, string literals and char literals with spaces.
// Output has the same length as the input and every newline is preserved,
// so offsets and line numbers computed on the mask apply to the original.
// Unterminated constructs mask through end of input.
std::string strip_code(std::string_view content);

// Lexical catalog scan over the masked text: <name> [ws] '(' with a
// non-identifier character before <name>. Findings ordered by (line, column).
std::vector<Finding> scan_c_file(const SourceFile& file,
                                 const std::vector<CRule>& catalog);

}  // namespace avsc
