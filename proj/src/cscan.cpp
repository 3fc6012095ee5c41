#include "avsc/cscan.hpp"

#include <algorithm>
#include <tuple>

namespace avsc {

namespace {

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::vector<std::size_t> line_starts(std::string_view text) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') starts.push_back(i + 1);
  }
  return starts;
}

}  // namespace

const std::vector<CRule>& builtin_c_catalog() {
  static const std::vector<CRule> kCatalog = {
      {"strcpy", "CWE-120", Severity::High, "unbounded copy into destination buffer"},
      {"strcat", "CWE-120", Severity::High, "unbounded append onto destination buffer"},
      {"gets", "CWE-120", Severity::Critical, "reads unbounded input into buffer"},
      {"sprintf", "CWE-134", Severity::Medium, "unbounded formatted write"},
      {"vsprintf", "CWE-134", Severity::Medium, "unbounded formatted write"},
      {"memcpy", "CWE-119/CWE-120", Severity::Medium,
       "length-driven copy, size calculation must be validated"},
      {"system", "CWE-78", Severity::High, "shell command execution"},
      {"popen", "CWE-78", Severity::High, "shell command execution"},
      {"execl", "CWE-78", Severity::High, "process execution"},
      {"execlp", "CWE-78", Severity::High, "process execution"},
      {"execle", "CWE-78", Severity::High, "process execution"},
      {"execv", "CWE-78", Severity::High, "process execution"},
      {"execvp", "CWE-78", Severity::High, "process execution"},
      {"execvpe", "CWE-78", Severity::High, "process execution"},
      {"tmpnam", "CWE-377", Severity::Medium, "predictable temporary file name"},
      {"mktemp", "CWE-377", Severity::Medium, "predictable temporary file name"},
      {"rand", "CWE-330", Severity::Low, "non-cryptographic random number source"},
      {"random", "CWE-330", Severity::Low, "non-cryptographic random number source"},
  };
  return kCatalog;
}

std::string strip_code(std::string_view content) {
  enum class State { Normal, LineComment, BlockComment, Str, Chr };
  std::string out(content);
  State state = State::Normal;
  std::size_t i = 0;
  auto mask = [&](std::size_t at) {
    if (out[at] != '\n' && out[at] != '\r') out[at] = ' ';
  };
  while (i < content.size()) {
    char c = content[i];
    char next = i + 1 < content.size() ? content[i + 1] : '\0';
    switch (state) {
      case State::Normal:
        if (c == '/' && next == '/') {
          state = State::LineComment;
          mask(i);
          mask(i + 1);
          i += 2;
        } else if (c == '/' && next == '*') {
          state = State::BlockComment;
          mask(i);
          mask(i + 1);
          i += 2;
        } else if (c == '"') {
          state = State::Str;
          mask(i);
          ++i;
        } else if (c == '\'') {
          state = State::Chr;
          mask(i);
          ++i;
        } else {
          ++i;
        }
        break;
      case State::LineComment:
        if (c == '\n') {
          state = State::Normal;
        } else {
          mask(i);
        }
        ++i;
        break;
      case State::BlockComment:
        if (c == '*' && next == '/') {
          mask(i);
          mask(i + 1);
          i += 2;
          state = State::Normal;
        } else {
          mask(i);
          ++i;
        }
        break;
      case State::Str:
      case State::Chr:
        if (c == '\\' && i + 1 < content.size()) {
          mask(i);
          mask(i + 1);
          i += 2;
        } else {
          mask(i);
          if ((state == State::Str && c == '"') ||
              (state == State::Chr && c == '\'')) {
            state = State::Normal;
          }
          ++i;
        }
        break;
    }
  }
  return out;
}

std::vector<Finding> scan_c_file(const SourceFile& file,
                                 const std::vector<CRule>& catalog) {
  const std::string masked = strip_code(file.content);
  const std::vector<std::size_t> starts = line_starts(masked);
  auto position = [&](std::size_t offset) {
    auto it = std::upper_bound(starts.begin(), starts.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - starts.begin());  // 1-based
    std::size_t col = offset - starts[line - 1] + 1;
    return std::pair<int, int>(static_cast<int>(line), static_cast<int>(col));
  };

  struct Hit {
    int line;
    int col;
    const CRule* rule;
  };
  std::vector<Hit> hits;
  for (const CRule& rule : catalog) {
    const std::string& name = rule.function_name;
    std::size_t pos = 0;
    while ((pos = masked.find(name, pos)) != std::string::npos) {
      std::size_t after = pos + name.size();
      bool boundary_ok = pos == 0 || !is_ident_char(masked[pos - 1]);
      std::size_t k = after;
      while (k < masked.size() && is_space_char(masked[k])) ++k;
      if (boundary_ok && k < masked.size() && masked[k] == '(' &&
          (after == masked.size() || !is_ident_char(masked[after]))) {
        auto [line, col] = position(pos);
        hits.push_back({line, col, &rule});
      }
      pos = after;
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return std::tie(a.line, a.col, a.rule->function_name) <
           std::tie(b.line, b.col, b.rule->function_name);
  });

  std::vector<Finding> findings;
  findings.reserve(hits.size());
  for (const Hit& hit : hits) {
    Finding f;
    f.tool = "cscan";
    f.path = file.path;
    f.line = hit.line;
    f.rule_id = hit.rule->function_name;
    f.cwe = hit.rule->cwe;
    f.severity = hit.rule->default_severity;
    f.message = hit.rule->function_name + ": " + hit.rule->note;
    findings.push_back(std::move(f));
  }
  return findings;
}

}  // namespace avsc
