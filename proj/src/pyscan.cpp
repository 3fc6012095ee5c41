#include "avsc/pyscan.hpp"

#include "avsc/util.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <tuple>

namespace avsc {

namespace {

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool ident_char(unsigned char c) {
  return ident_start(c) || (c >= '0' && c <= '9');
}

bool is_keyword(std::string_view word) {
  static const std::set<std::string, std::less<>> kKeywords = {
      "False", "None",   "True",  "and",    "as",     "assert", "async",
      "await", "break",  "class", "continue", "def",  "del",    "elif",
      "else",  "except", "finally", "for",  "from",   "global", "if",
      "import", "in",    "is",    "lambda", "nonlocal", "not",  "or",
      "pass",  "raise",  "return", "try",  "while",  "with",   "yield"};
  return kKeywords.count(word) > 0;
}

bool string_prefix(std::string_view word) {
  if (word.empty() || word.size() > 3) return false;
  for (char c : word) {
    char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l != 'r' && l != 'b' && l != 'u' && l != 'f') return false;
  }
  return true;
}

// Multi-character operators, longest first.
const std::array<std::string_view, 22> kOperators = {
    "**=", "//=", ">>=", "<<=", "==", "!=", "<=", ">=", "->", ":=",
    "+=",  "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "**", "//",
    "<<",  ">>"};

struct Lexer {
  std::string_view src;
  std::size_t i = 0;
  int line = 1;
  int col = 0;

  bool eof() const { return i >= src.size(); }
  char peek(std::size_t ahead = 0) const {
    return i + ahead < src.size() ? src[i + ahead] : '\0';
  }
  void advance() {
    if (src[i] == '\n') {
      ++line;
      col = 0;
    } else {
      ++col;
    }
    ++i;
  }
};

}  // namespace

std::string string_literal_content(std::string_view raw) {
  std::size_t start = 0;
  while (start < raw.size() && raw[start] != '"' && raw[start] != '\'') ++start;
  if (start >= raw.size()) return "";
  char quote = raw[start];
  std::size_t quotes = 1;
  if (start + 2 < raw.size() && raw[start + 1] == quote && raw[start + 2] == quote) {
    quotes = 3;
  }
  std::size_t body = start + quotes;
  std::size_t end = raw.size() >= quotes ? raw.size() - quotes : body;
  if (end < body) return "";
  return std::string(raw.substr(body, end - body));
}

PyTokenizeResult tokenize_python(std::string_view content) {
  PyTokenizeResult result;
  Lexer lx{content};

  auto push = [&](PyTokenKind kind, std::string text, int line, int col) {
    result.tokens.push_back({kind, std::move(text), line, col});
  };

  auto lex_string = [&](int start_line, int start_col,
                        std::size_t text_begin) -> bool {
    char quote = lx.peek();
    std::size_t quotes = 1;
    if (lx.peek(1) == quote && lx.peek(2) == quote) quotes = 3;
    for (std::size_t k = 0; k < quotes; ++k) lx.advance();
    for (;;) {
      if (lx.eof()) {
        result.error = "unterminated string literal starting at line " +
                       std::to_string(start_line);
        return false;
      }
      char c = lx.peek();
      if (c == '\\') {
        lx.advance();
        if (!lx.eof()) lx.advance();
        continue;
      }
      if (quotes == 1 && c == '\n') {
        result.error = "unterminated string literal starting at line " +
                       std::to_string(start_line);
        return false;
      }
      if (c == quote) {
        if (quotes == 1 || (lx.peek(1) == quote && lx.peek(2) == quote)) {
          for (std::size_t k = 0; k < quotes; ++k) lx.advance();
          push(PyTokenKind::String,
               std::string(content.substr(text_begin, lx.i - text_begin)),
               start_line, start_col);
          return true;
        }
      }
      lx.advance();
    }
  };

  while (!lx.eof()) {
    char c = lx.peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      lx.advance();
      continue;
    }
    if (c == '\\' && lx.peek(1) == '\n') {  // explicit line continuation
      lx.advance();
      lx.advance();
      continue;
    }
    int tline = lx.line;
    int tcol = lx.col;
    if (c == '#') {
      std::size_t begin = lx.i;
      while (!lx.eof() && lx.peek() != '\n') lx.advance();
      push(PyTokenKind::Comment,
           std::string(content.substr(begin, lx.i - begin)), tline, tcol);
      continue;
    }
    if (c == '"' || c == '\'') {
      if (!lex_string(tline, tcol, lx.i)) return result;
      continue;
    }
    if (ident_start(static_cast<unsigned char>(c))) {
      std::size_t begin = lx.i;
      while (!lx.eof() && ident_char(static_cast<unsigned char>(lx.peek()))) {
        lx.advance();
      }
      std::string word(content.substr(begin, lx.i - begin));
      char after = lx.peek();
      if ((after == '"' || after == '\'') && string_prefix(word)) {
        if (!lex_string(tline, tcol, begin)) return result;
        continue;
      }
      if (is_keyword(word)) {
        push(PyTokenKind::Keyword, std::move(word), tline, tcol);
        continue;
      }
      // Combine dotted names: ident (. ident)*, spaces allowed around dots.
      std::string dotted = word;
      bool is_dotted = false;
      for (;;) {
        Lexer save = lx;
        while (!lx.eof() && (lx.peek() == ' ' || lx.peek() == '\t')) lx.advance();
        if (lx.peek() != '.') {
          lx = save;
          break;
        }
        lx.advance();
        while (!lx.eof() && (lx.peek() == ' ' || lx.peek() == '\t')) lx.advance();
        if (!ident_start(static_cast<unsigned char>(lx.peek()))) {
          lx = save;
          break;
        }
        std::size_t part_begin = lx.i;
        while (!lx.eof() && ident_char(static_cast<unsigned char>(lx.peek()))) {
          lx.advance();
        }
        dotted += '.';
        dotted.append(content.substr(part_begin, lx.i - part_begin));
        is_dotted = true;
      }
      push(is_dotted ? PyTokenKind::DottedName : PyTokenKind::Identifier,
           std::move(dotted), tline, tcol);
      continue;
    }
    if (c >= '0' && c <= '9') {
      std::size_t begin = lx.i;
      while (!lx.eof()) {
        char d = lx.peek();
        if (ident_char(static_cast<unsigned char>(d)) || d == '.') {
          lx.advance();
          continue;
        }
        if ((d == '+' || d == '-') && lx.i > begin &&
            (content[lx.i - 1] == 'e' || content[lx.i - 1] == 'E')) {
          lx.advance();
          continue;
        }
        break;
      }
      push(PyTokenKind::Number,
           std::string(content.substr(begin, lx.i - begin)), tline, tcol);
      continue;
    }
    bool matched_op = false;
    for (std::string_view op : kOperators) {
      if (content.compare(lx.i, op.size(), op) == 0) {
        for (std::size_t k = 0; k < op.size(); ++k) lx.advance();
        push(PyTokenKind::Punct, std::string(op), tline, tcol);
        matched_op = true;
        break;
      }
    }
    if (matched_op) continue;
    push(PyTokenKind::Punct, std::string(1, c), tline, tcol);
    lx.advance();
  }
  return result;
}

const std::vector<PyRule>& builtin_py_rules() {
  static const std::vector<PyRule> kRules = {
      {"py-subprocess-shell-true", PyMatchKind::CallNameWithKeyword,
       "subprocess.*", "shell", "True", "CWE-78", Severity::High,
       "subprocess invoked with shell=True"},
      {"py-pickle-loads", PyMatchKind::CallName, "pickle.loads", "", "",
       "CWE-502", Severity::Medium, "deserialization of untrusted data"},
      {"py-pickle-load", PyMatchKind::CallName, "pickle.load", "", "",
       "CWE-502", Severity::Medium, "deserialization of untrusted data"},
      {"py-md5", PyMatchKind::CallName, "md5", "", "", "CWE-327",
       Severity::Medium, "weak hash algorithm md5"},
      {"py-sha1", PyMatchKind::CallName, "sha1", "", "", "CWE-327",
       Severity::Medium, "weak hash algorithm sha1"},
      {"py-insecure-random", PyMatchKind::CallName, "random.*", "", "",
       "CWE-330", Severity::Low, "non-cryptographic random number source"},
      {"py-mktemp", PyMatchKind::CallName, "tempfile.mktemp", "", "",
       "CWE-377", Severity::Medium, "predictable temporary file name"},
      {"py-except-pass", PyMatchKind::BareExceptPass, "", "", "", "CWE-703",
       Severity::Low, "exception swallowed by bare except with pass"},
      {"py-hardcoded-password", PyMatchKind::AssignStringToName,
       "password|passwd|pwd|secret|token", "", "", "CWE-259", Severity::Low,
       "possible hardcoded credential"},
  };
  return kRules;
}

namespace {

bool call_name_matches(const std::string& pattern, const std::string& name) {
  if (pattern.size() > 2 && pattern.compare(pattern.size() - 2, 2, ".*") == 0) {
    std::string_view prefix(pattern.data(), pattern.size() - 2);
    return name.size() > prefix.size() + 1 &&
           name.compare(0, prefix.size(), prefix) == 0 &&
           name[prefix.size()] == '.';
  }
  if (pattern.find('.') != std::string::npos) return name == pattern;
  if (name == pattern) return true;
  return name.size() > pattern.size() + 1 &&
         name.compare(name.size() - pattern.size(), pattern.size(), pattern) == 0 &&
         name[name.size() - pattern.size() - 1] == '.';
}

std::string last_component(const std::string& name) {
  std::size_t dot = name.find_last_of('.');
  return dot == std::string::npos ? name : name.substr(dot + 1);
}

bool name_matches_alternation(const std::string& alternation, const std::string& name) {
  std::string lowered = util::to_lower(last_component(name));
  std::size_t start = 0;
  while (start <= alternation.size()) {
    std::size_t bar = alternation.find('|', start);
    std::string part = util::to_lower(
        bar == std::string::npos ? alternation.substr(start)
                                 : alternation.substr(start, bar - start));
    if (!part.empty() && lowered.find(part) != std::string::npos) return true;
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return false;
}

bool is_opener(const std::string& t) { return t == "(" || t == "[" || t == "{"; }
bool is_closer(const std::string& t) { return t == ")" || t == "]" || t == "}"; }

// keyword=value anywhere inside the balanced span that starts at open_index
// (the '(' token), with the keyword in argument position.
bool call_has_keyword(const std::vector<PyToken>& toks, std::size_t open_index,
                      const std::string& keyword, const std::string& value) {
  int depth = 0;
  for (std::size_t j = open_index + 1; j < toks.size(); ++j) {
    const std::string& t = toks[j].text;
    if (is_opener(t)) {
      ++depth;
      continue;
    }
    if (is_closer(t)) {
      if (depth == 0) return false;
      --depth;
      continue;
    }
    if (toks[j].kind == PyTokenKind::Identifier && t == keyword &&
        j + 2 < toks.size() && toks[j + 1].text == "=" &&
        toks[j + 2].text == value &&
        (toks[j - 1].text == "(" || toks[j - 1].text == ",")) {
      return true;
    }
  }
  return false;
}

// except / except Exception with a suite consisting of a single pass.
// Column deltas stand in for full indentation analysis.
bool bare_except_pass_at(const std::vector<PyToken>& toks, std::size_t i) {
  std::size_t j = i + 1;
  if (j < toks.size() && toks[j].kind == PyTokenKind::Identifier &&
      toks[j].text == "Exception") {
    ++j;
  }
  if (j >= toks.size() || toks[j].text != ":") return false;
  std::size_t body = j + 1;
  if (body >= toks.size()) return false;
  if (toks[body].kind != PyTokenKind::Keyword || toks[body].text != "pass") {
    return false;
  }
  const PyToken& except_tok = toks[i];
  const PyToken& pass_tok = toks[body];
  std::size_t after = body + 1;
  if (pass_tok.line == except_tok.line) {
    // inline suite: nothing else may follow on the same line
    return after >= toks.size() || toks[after].line != pass_tok.line;
  }
  if (pass_tok.col <= except_tok.col) return false;
  if (after < toks.size()) {
    if (toks[after].line == pass_tok.line) return false;       // "pass; more()"
    if (toks[after].col > except_tok.col) return false;        // suite continues
  }
  return true;
}

}  // namespace

PyScanResult scan_py_file(const SourceFile& file, const std::vector<PyRule>& rules) {
  PyScanResult result;
  PyTokenizeResult lexed = tokenize_python(file.content);
  if (lexed.error) {
    result.errors.push_back({file.path, *lexed.error});
    return result;
  }
  std::vector<PyToken> toks;
  toks.reserve(lexed.tokens.size());
  for (PyToken& t : lexed.tokens) {
    if (t.kind != PyTokenKind::Comment) toks.push_back(std::move(t));
  }

  struct Hit {
    int line;
    int col;
    const PyRule* rule;
  };
  std::vector<Hit> hits;
  auto emit = [&](const PyToken& at, const PyRule& rule) {
    hits.push_back({at.line, at.col, &rule});
  };

  for (std::size_t i = 0; i < toks.size(); ++i) {
    const PyToken& t = toks[i];
    bool callable_name = (t.kind == PyTokenKind::Identifier ||
                          t.kind == PyTokenKind::DottedName) &&
                         i + 1 < toks.size() && toks[i + 1].text == "(";
    for (const PyRule& rule : rules) {
      switch (rule.match_kind) {
        case PyMatchKind::CallName:
          if (callable_name && call_name_matches(rule.pattern, t.text)) {
            emit(t, rule);
          }
          break;
        case PyMatchKind::CallNameWithKeyword:
          if (callable_name && call_name_matches(rule.pattern, t.text) &&
              call_has_keyword(toks, i + 1, rule.keyword, rule.value)) {
            emit(t, rule);
          }
          break;
        case PyMatchKind::BareExceptPass:
          if (t.kind == PyTokenKind::Keyword && t.text == "except" &&
              bare_except_pass_at(toks, i)) {
            emit(t, rule);
          }
          break;
        case PyMatchKind::AssignStringToName:
          if ((t.kind == PyTokenKind::Identifier ||
               t.kind == PyTokenKind::DottedName) &&
              i + 2 < toks.size() && toks[i + 1].kind == PyTokenKind::Punct &&
              toks[i + 1].text == "=" &&
              toks[i + 2].kind == PyTokenKind::String &&
              !string_literal_content(toks[i + 2].text).empty() &&
              name_matches_alternation(rule.pattern, t.text)) {
            emit(t, rule);
          }
          break;
      }
    }
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return std::tie(a.line, a.rule->rule_id, a.col) <
           std::tie(b.line, b.rule->rule_id, b.col);
  });
  for (const Hit& hit : hits) {
    Finding f;
    f.tool = "pyscan";
    f.path = file.path;
    f.line = hit.line;
    f.rule_id = hit.rule->rule_id;
    f.cwe = hit.rule->cwe;
    f.severity = hit.rule->severity;
    f.message = hit.rule->message;
    result.findings.push_back(std::move(f));
  }
  return result;
}

}  // namespace avsc
