#include "avsc/rules.hpp"

#include "avsc/cscan.hpp"
#include "avsc/pyscan.hpp"
#include "avsc/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <mutex>
#include <set>
#include <tuple>

using nlohmann::json;

namespace avsc {

const char* to_string(RuleLanguage lang) {
  switch (lang) {
    case RuleLanguage::C: return "c";
    case RuleLanguage::Python: return "python";
    case RuleLanguage::Any: return "any";
  }
  return "any";
}

namespace {

bool parse_language(std::string_view text, RuleLanguage& out) {
  if (text == "c") out = RuleLanguage::C;
  else if (text == "python") out = RuleLanguage::Python;
  else if (text == "any") out = RuleLanguage::Any;
  else return false;
  return true;
}

bool c_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

// Multi-character C/C++ operators, longest first. '.' stays single so the
// pattern wildcard "..." tokenizes identically on both sides.
const std::array<std::string_view, 25> kCOperators = {
    ">>=", "<<=", "->*", "::", "->", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "++",  "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=",  ".*",  "##"};

}  // namespace

std::vector<CodeToken> tokenize_c_masked(std::string_view masked) {
  std::vector<CodeToken> toks;
  std::size_t i = 0;
  int line = 1;
  int col = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (masked[i] == '\n') {
        ++line;
        col = 0;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < masked.size()) {
    char c = masked[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') {
      advance(1);
      continue;
    }
    int tline = line;
    int tcol = col;
    if (c_ident_char(c) && !(c >= '0' && c <= '9')) {
      std::size_t begin = i;
      while (i < masked.size() && c_ident_char(masked[i])) advance(1);
      toks.push_back({std::string(masked.substr(begin, i - begin)), tline, tcol, true});
      continue;
    }
    if (c >= '0' && c <= '9') {
      std::size_t begin = i;
      while (i < masked.size() &&
             (c_ident_char(masked[i]) || masked[i] == '.' ||
              ((masked[i] == '+' || masked[i] == '-') && i > begin &&
               (masked[i - 1] == 'e' || masked[i - 1] == 'E')))) {
        advance(1);
      }
      toks.push_back({std::string(masked.substr(begin, i - begin)), tline, tcol, false});
      continue;
    }
    bool matched = false;
    for (std::string_view op : kCOperators) {
      if (masked.compare(i, op.size(), op) == 0) {
        toks.push_back({std::string(op), tline, tcol, false});
        advance(op.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    toks.push_back({std::string(1, c), tline, tcol, false});
    advance(1);
  }
  return toks;
}

namespace {

struct PatElem {
  enum class Kind { Literal, Wildcard, MetaVar } kind = Kind::Literal;
  std::string text;
};

std::vector<CodeToken> py_tokens_to_code(std::vector<PyToken> tokens) {
  std::vector<CodeToken> out;
  out.reserve(tokens.size());
  for (PyToken& t : tokens) {
    if (t.kind == PyTokenKind::Comment) continue;
    bool name = t.kind == PyTokenKind::Identifier ||
                t.kind == PyTokenKind::DottedName ||
                t.kind == PyTokenKind::Keyword;
    out.push_back({std::move(t.text), t.line, t.col, name});
  }
  return out;
}

// Tokenize a pattern with the target language's lexer, then fold the
// wildcard and metavariable spellings: three adjacent '.' -> Wildcard,
// '$' glued to a name -> MetaVar.
std::vector<PatElem> compile_pattern(const std::string& pattern, bool python,
                                     std::string* error) {
  std::vector<CodeToken> toks;
  if (python) {
    PyTokenizeResult lexed = tokenize_python(pattern);
    if (lexed.error) {
      if (error) *error = *lexed.error;
      return {};
    }
    toks = py_tokens_to_code(std::move(lexed.tokens));
  } else {
    toks = tokenize_c_masked(pattern);
  }
  std::vector<PatElem> out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    auto adjacent = [&](std::size_t a, std::size_t b) {
      return toks[a].line == toks[b].line &&
             toks[b].col == toks[a].col + static_cast<int>(toks[a].text.size());
    };
    if (toks[i].text == "." && i + 2 < toks.size() && toks[i + 1].text == "." &&
        toks[i + 2].text == "." && adjacent(i, i + 1) && adjacent(i + 1, i + 2)) {
      out.push_back({PatElem::Kind::Wildcard, "..."});
      i += 2;
      continue;
    }
    if (toks[i].text == "$" && i + 1 < toks.size() && toks[i + 1].is_name &&
        adjacent(i, i + 1)) {
      out.push_back({PatElem::Kind::MetaVar, "$" + toks[i + 1].text});
      ++i;
      continue;
    }
    out.push_back({PatElem::Kind::Literal, toks[i].text});
  }
  if (out.empty() && error) *error = "pattern has no tokens";
  return out;
}

bool is_open_tok(const std::string& t) { return t == "(" || t == "[" || t == "{"; }
bool is_close_tok(const std::string& t) { return t == ")" || t == "]" || t == "}"; }

// Lazy wildcard match. `...` may consume balanced sub-groups but never the
// closer of the group it sits in.
bool match_at(const std::vector<PatElem>& pat, std::size_t pi,
              const std::vector<CodeToken>& toks, std::size_t ti,
              std::size_t& end) {
  if (pi == pat.size()) {
    end = ti;
    return true;
  }
  const PatElem& e = pat[pi];
  if (e.kind == PatElem::Kind::Wildcard) {
    int depth = 0;
    for (std::size_t k = ti;; ++k) {
      if (match_at(pat, pi + 1, toks, k, end)) return true;
      if (k >= toks.size()) return false;
      const std::string& t = toks[k].text;
      if (is_close_tok(t)) {
        if (depth == 0) return false;
        --depth;
      } else if (is_open_tok(t)) {
        ++depth;
      }
    }
  }
  if (ti >= toks.size()) return false;
  if (e.kind == PatElem::Kind::MetaVar) {
    return match_at(pat, pi + 1, toks, ti + 1, end);
  }
  if (toks[ti].text != e.text) return false;
  return match_at(pat, pi + 1, toks, ti + 1, end);
}

std::vector<std::pair<int, int>> match_all(const std::vector<PatElem>& pat,
                                           const std::vector<CodeToken>& toks) {
  std::vector<std::pair<int, int>> lines;
  std::size_t i = 0;
  while (i < toks.size()) {
    std::size_t end = i;
    if (match_at(pat, 0, toks, i, end)) {
      lines.emplace_back(toks[i].line, toks[i].col);
      i = std::max(end, i + 1);
    } else {
      ++i;
    }
  }
  return lines;
}

}  // namespace

std::vector<RuleSpec> parse_rule_file(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw RuleParseError(std::string("invalid JSON: ") + e.what(),
                         RuleParseError::kDocument);
  }
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array()) {
    throw RuleParseError("missing top-level \"rules\" array",
                         RuleParseError::kDocument);
  }
  std::vector<RuleSpec> rules;
  std::set<std::string> seen_ids;
  std::size_t index = 0;
  for (const json& item : doc["rules"]) {
    if (!item.is_object()) {
      throw RuleParseError("rule is not an object", index);
    }
    for (const char* key : {"id", "language", "pattern", "cwe", "severity", "message"}) {
      if (!item.contains(key) || !item[key].is_string()) {
        throw RuleParseError(std::string("missing or non-string key \"") + key + "\"",
                             index);
      }
    }
    RuleSpec rule;
    rule.id = item["id"].get<std::string>();
    if (rule.id.empty()) throw RuleParseError("empty id", index);
    if (!seen_ids.insert(rule.id).second) {
      throw RuleParseError("duplicate id", index);
    }
    if (!parse_language(item["language"].get<std::string>(), rule.language)) {
      throw RuleParseError("unknown language", index);
    }
    Severity sev;
    if (!try_parse_severity(item["severity"].get<std::string>(), sev)) {
      throw RuleParseError("unknown severity", index);
    }
    rule.severity = sev;
    rule.cwe = item["cwe"].get<std::string>();
    if (!is_valid_cwe(rule.cwe)) {
      throw RuleParseError("invalid CWE label", index);
    }
    rule.pattern = item["pattern"].get<std::string>();
    if (rule.pattern.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw RuleParseError("empty pattern", index);
    }
    rule.message = item["message"].get<std::string>();

    std::string err;
    if (rule.language != RuleLanguage::Python &&
        compile_pattern(rule.pattern, false, &err).empty()) {
      throw RuleParseError("invalid pattern: " + err, index);
    }
    err.clear();
    if (rule.language != RuleLanguage::C &&
        compile_pattern(rule.pattern, true, &err).empty()) {
      throw RuleParseError("invalid pattern: " + err, index);
    }
    rules.push_back(std::move(rule));
    ++index;
  }
  return rules;
}

std::vector<RuleSpec> load_rule_file(const std::filesystem::path& path) {
  auto text = util::read_file(path);
  if (!text) {
    throw RuleParseError("cannot read " + path.string(), RuleParseError::kDocument);
  }
  return parse_rule_file(*text);
}

std::vector<Finding> apply_rules(const CorpusSnapshot& snapshot,
                                 const std::vector<RuleSpec>& rules,
                                 int jobs, std::vector<ScanError>* errors) {
  struct Compiled {
    const RuleSpec* rule;
    std::vector<PatElem> c_pattern;   // empty when rule excludes C
    std::vector<PatElem> py_pattern;  // empty when rule excludes Python
  };
  std::vector<Compiled> compiled;
  compiled.reserve(rules.size());
  for (const RuleSpec& rule : rules) {
    Compiled c{&rule, {}, {}};
    if (rule.language != RuleLanguage::Python) {
      c.c_pattern = compile_pattern(rule.pattern, false, nullptr);
    }
    if (rule.language != RuleLanguage::C) {
      c.py_pattern = compile_pattern(rule.pattern, true, nullptr);
    }
    compiled.push_back(std::move(c));
  }

  std::vector<const SourceFile*> targets;
  for (const SourceFile& f : snapshot.files) {
    if (f.language == LanguageKind::CCpp || f.language == LanguageKind::Python) {
      targets.push_back(&f);
    }
  }

  std::vector<std::vector<Finding>> per_file(targets.size());
  std::vector<ScanError> lex_errors(targets.size());
  std::vector<char> has_error(targets.size(), 0);
  util::parallel_for(targets.size(), jobs, [&](std::size_t idx) {
    const SourceFile& file = *targets[idx];
    bool python = file.language == LanguageKind::Python;
    std::vector<CodeToken> toks;
    if (python) {
      PyTokenizeResult lexed = tokenize_python(file.content);
      if (lexed.error) {
        lex_errors[idx] = {file.path, *lexed.error};
        has_error[idx] = 1;
        return;
      }
      toks = py_tokens_to_code(std::move(lexed.tokens));
    } else {
      toks = tokenize_c_masked(strip_code(file.content));
    }
    for (const Compiled& c : compiled) {
      const std::vector<PatElem>& pat = python ? c.py_pattern : c.c_pattern;
      if (pat.empty()) continue;
      for (auto [line, col] : match_all(pat, toks)) {
        Finding f;
        f.tool = "rules";
        f.path = file.path;
        f.line = line;
        f.rule_id = c.rule->id;
        f.cwe = c.rule->cwe;
        f.severity = c.rule->severity;
        f.message = c.rule->message;
        per_file[idx].push_back(std::move(f));
      }
    }
  });

  std::vector<Finding> findings;
  for (std::size_t idx = 0; idx < targets.size(); ++idx) {
    if (has_error[idx] && errors) errors->push_back(lex_errors[idx]);
    findings.insert(findings.end(),
                    std::make_move_iterator(per_file[idx].begin()),
                    std::make_move_iterator(per_file[idx].end()));
  }
  std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.path, a.line, a.rule_id) < std::tie(b.path, b.line, b.rule_id);
  });
  return findings;
}

}  // namespace avsc
