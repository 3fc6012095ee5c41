#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace avsc {

// Four-level severity scale shared by code findings, advisories and reports.
// Ordered so that operator> follows criticality.
enum class Severity { Low = 0, Medium = 1, High = 2, Critical = 3 };

const char* to_string(Severity s);
bool try_parse_severity(std::string_view text, Severity& out);
Severity parse_severity(std::string_view text);  // throws Error on unknown name

// CWE labels are "CWE-<digits>", optionally '/'-joined into a compound key
// such as "CWE-119/CWE-120" that is kept as one distinct id.
bool is_valid_cwe(std::string_view label);
// Numeric value of the first component, e.g. "CWE-119/CWE-120" -> 119.
long cwe_number(std::string_view label);

// One code-level detection.
struct Finding {
  std::string tool;  // "cscan" | "pyscan" | "rules"
  std::string path;  // relative, '/'-separated
  int line = 1;      // 1-based
  std::string rule_id;
  std::string cwe;
  Severity severity = Severity::Low;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// Non-fatal per-file problem (unreadable file, lexer failure, manifest line).
struct ScanError {
  std::string path;
  std::string reason;

  friend bool operator==(const ScanError&, const ScanError&) = default;
};

// Canonical report order: (path, line, rule_id, tool, cwe).
void sort_findings(std::vector<Finding>& findings);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RootNotFoundError : Error { using Error::Error; };
struct VersionParseError : Error { using Error::Error; };
struct FeedValidationError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// Rule-file rejection; the whole file fails, partial rule sets never apply.
struct RuleParseError : Error {
  static constexpr std::size_t kDocument = static_cast<std::size_t>(-1);

  RuleParseError(const std::string& reason, std::size_t index);

  std::size_t rule_index;  // kDocument when not tied to one rule
  std::string reason;
};

}  // namespace avsc
