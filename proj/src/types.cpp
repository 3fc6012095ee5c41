#include "avsc/types.hpp"

#include "avsc/util.hpp"

#include <algorithm>
#include <cstdlib>
#include <tuple>

namespace avsc {

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Critical: return "Critical";
    case Severity::High: return "High";
    case Severity::Medium: return "Medium";
    case Severity::Low: return "Low";
  }
  return "Low";
}

bool try_parse_severity(std::string_view text, Severity& out) {
  std::string t = util::to_lower(text);
  if (t == "critical") out = Severity::Critical;
  else if (t == "high") out = Severity::High;
  else if (t == "medium") out = Severity::Medium;
  else if (t == "low") out = Severity::Low;
  else return false;
  return true;
}

Severity parse_severity(std::string_view text) {
  Severity s;
  if (!try_parse_severity(text, s)) {
    throw Error("unknown severity: " + std::string(text));
  }
  return s;
}

bool is_valid_cwe(std::string_view label) {
  if (label.empty()) return false;
  std::size_t pos = 0;
  while (pos < label.size()) {
    if (label.compare(pos, 4, "CWE-") != 0) return false;
    pos += 4;
    std::size_t digits = 0;
    while (pos < label.size() && label[pos] >= '0' && label[pos] <= '9') {
      ++pos;
      ++digits;
    }
    if (digits == 0) return false;
    if (pos == label.size()) return true;
    if (label[pos] != '/') return false;
    ++pos;
  }
  return false;  // trailing '/'
}

long cwe_number(std::string_view label) {
  std::size_t dash = label.find('-');
  if (dash == std::string_view::npos) return 0;
  return std::atol(std::string(label.substr(dash + 1)).c_str());
}

void sort_findings(std::vector<Finding>& findings) {
  std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.path, a.line, a.rule_id, a.tool, a.cwe) <
           std::tie(b.path, b.line, b.rule_id, b.tool, b.cwe);
  });
}

RuleParseError::RuleParseError(const std::string& why, std::size_t index)
    : Error(index == kDocument ? "rule file: " + why
                               : "rule " + std::to_string(index) + ": " + why),
      rule_index(index),
      reason(why) {}

}  // namespace avsc
