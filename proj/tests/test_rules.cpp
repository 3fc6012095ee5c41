#include "avsc/rules.hpp"

#include "avsc/cscan.hpp"
#include "avsc/pyscan.hpp"

#include <doctest.h>

#include <random>

using namespace avsc;

namespace {

CorpusSnapshot snapshot_of(std::vector<std::pair<std::string, std::string>> files) {
  CorpusSnapshot snap;
  snap.root_label = "mem";
  for (auto& [path, content] : files) {
    SourceFile f;
    f.path = path;
    f.language = classify_language(path);
    f.content = content;
    f.line_count = 0;
    for (char c : f.content) {
      if (c == '\n') ++f.line_count;
    }
    if (!f.content.empty() && f.content.back() != '\n') ++f.line_count;
    snap.files.push_back(std::move(f));
  }
  std::sort(snap.files.begin(), snap.files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  return snap;
}

std::string rule_json(const std::string& id, const std::string& language,
                      const std::string& pattern, const std::string& cwe = "CWE-95",
                      const std::string& severity = "Medium") {
  return std::string("{\"id\":\"") + id + "\",\"language\":\"" + language +
         "\",\"pattern\":\"" + pattern + "\",\"cwe\":\"" + cwe +
         "\",\"severity\":\"" + severity + "\",\"message\":\"m\"}";
}

std::string doc_of(std::initializer_list<std::string> rules) {
  std::string out = "{\"rules\":[";
  bool first = true;
  for (const std::string& r : rules) {
    if (!first) out += ",";
    out += r;
    first = false;
  }
  return out + "]}";
}

// Brute-force token-window matcher for wildcard-free patterns.
std::vector<int> brute_match_lines(const std::vector<CodeToken>& toks,
                                   const std::vector<std::string>& pattern) {
  std::vector<int> lines;
  std::size_t i = 0;
  while (i < toks.size()) {
    bool hit = i + pattern.size() <= toks.size();
    for (std::size_t k = 0; hit && k < pattern.size(); ++k) {
      if (toks[i + k].text != pattern[k]) hit = false;
    }
    if (hit) {
      lines.push_back(toks[i].line);
      i += pattern.size();
    } else {
      ++i;
    }
  }
  return lines;
}

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("two valid rules parse in order") {
  auto rules = parse_rule_file(doc_of({rule_json("r1", "python", "eval(...)"),
                                       rule_json("r2", "c", "system(...)")}));
  REQUIRE(rules.size() == 2);
  CHECK(rules[0].id == "r1");
  CHECK(rules[0].language == RuleLanguage::Python);
  CHECK(rules[1].id == "r2");
}

TEST_CASE("duplicate id fails the whole file at index 1") {
  try {
    parse_rule_file(doc_of({rule_json("same", "any", "a"),
                            rule_json("same", "any", "b")}));
    FAIL("expected RuleParseError");
  } catch (const RuleParseError& e) {
    CHECK(e.rule_index == 1);
    CHECK(e.reason == "duplicate id");
  }
}

TEST_CASE("unknown severity is rejected") {
  try {
    parse_rule_file(doc_of({rule_json("r", "any", "a", "CWE-1", "urgent")}));
    FAIL("expected RuleParseError");
  } catch (const RuleParseError& e) {
    CHECK(e.rule_index == 0);
    CHECK(e.reason == "unknown severity");
  }
}

TEST_CASE("other validation failures") {
  CHECK_THROWS_AS(parse_rule_file("not json"), RuleParseError);
  CHECK_THROWS_AS(parse_rule_file("{\"no_rules\":[]}"), RuleParseError);
  CHECK_THROWS_AS(parse_rule_file(doc_of({rule_json("r", "rust", "a")})),
                  RuleParseError);
  CHECK_THROWS_AS(parse_rule_file(doc_of({rule_json("r", "any", "a", "WEAK-1")})),
                  RuleParseError);
  CHECK_THROWS_AS(parse_rule_file(doc_of({rule_json("r", "any", " ")})),
                  RuleParseError);
  CHECK_THROWS_AS(
      parse_rule_file("{\"rules\":[{\"id\":\"r\",\"language\":\"any\"}]}"),
      RuleParseError);
}

TEST_CASE("eval rule fires on python and not on c") {
  auto rules = parse_rule_file(doc_of({rule_json("py-eval", "python", "eval(...)")}));
  CorpusSnapshot snap = snapshot_of({{"app.py", "eval(user)\n"},
                                     {"app.c", "eval(user);\n"}});
  auto findings = apply_rules(snap, rules);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].path == "app.py");
  CHECK(findings[0].cwe == "CWE-95");
  CHECK(findings[0].tool == "rules");
  CHECK(findings[0].line == 1);
}

TEST_CASE("language any applies to both lexers") {
  auto rules = parse_rule_file(doc_of({rule_json("any-eval", "any", "eval(...)")}));
  CorpusSnapshot snap = snapshot_of({{"app.py", "eval(user)\n"},
                                     {"app.c", "x = eval(user);\n"}});
  auto findings = apply_rules(snap, rules);
  CHECK(findings.size() == 2);
}

TEST_CASE("metavariable matches exactly one token") {
  auto rules = parse_rule_file(doc_of({rule_json("tmp", "python", "tmpfile = $X")}));
  CorpusSnapshot snap = snapshot_of(
      {{"a.py", "tmpfile = path\nother = 1\ntmpfile = make()\n"}});
  auto findings = apply_rules(snap, rules);
  REQUIRE(findings.size() == 2);
  CHECK(findings[0].line == 1);
  CHECK(findings[1].line == 3);

  // independent brute-force matcher agrees on the wildcard-free prefix
  PyTokenizeResult lexed = tokenize_python("tmpfile = path\nother = 1\ntmpfile = make()\n");
  std::vector<CodeToken> toks;
  for (PyToken& t : lexed.tokens) {
    if (t.kind != PyTokenKind::Comment) toks.push_back({t.text, t.line, t.col, false});
  }
  auto brute = brute_match_lines(toks, {"tmpfile", "="});
  REQUIRE(brute.size() == 2);
  CHECK(brute[0] == findings[0].line);
  CHECK(brute[1] == findings[1].line);
}

TEST_CASE("wildcard stays inside its balanced group") {
  auto rules = parse_rule_file(doc_of({rule_json("call", "c", "check(...)")}));
  CorpusSnapshot snap = snapshot_of(
      {{"a.c", "check(a, f(b), c);\ncheck(x)\n;\nignore();\n"}});
  auto findings = apply_rules(snap, rules);
  REQUIRE(findings.size() == 2);
  CHECK(findings[0].line == 1);
  CHECK(findings[1].line == 2);

  // `...` cannot cross the closer of its enclosing group
  auto escaping = parse_rule_file(doc_of({rule_json("g", "c", "check(... ignore")}));
  CorpusSnapshot snap2 = snapshot_of({{"b.c", "check(a); ignore();\n"}});
  CHECK(apply_rules(snap2, escaping).empty());
}

TEST_CASE("matches are non-overlapping and leftmost") {
  auto rules = parse_rule_file(doc_of({rule_json("pair", "python", "a a")}));
  CorpusSnapshot snap = snapshot_of({{"a.py", "a a a\n"}});
  auto findings = apply_rules(snap, rules);
  CHECK(findings.size() == 1);
}

TEST_CASE("comments and strings never match in either language") {
  auto rules = parse_rule_file(doc_of({rule_json("ev", "any", "eval(...)")}));
  CorpusSnapshot snap = snapshot_of({
      {"a.py", "# eval(x)\ns = 'eval(x)'\n"},
      {"a.c", "// eval(x)\nconst char *s = \"eval(x)\";\n"},
  });
  CHECK(apply_rules(snap, rules).empty());
}

TEST_CASE("adding a rule never removes findings") {
  auto base = parse_rule_file(doc_of({rule_json("one", "any", "eval(...)")}));
  auto more = parse_rule_file(doc_of({rule_json("one", "any", "eval(...)"),
                                      rule_json("two", "any", "exec(...)")}));
  CorpusSnapshot snap = snapshot_of(
      {{"a.py", "eval(x)\nexec(y)\n"}, {"b.c", "eval(a); exec(b);\n"}});
  auto before = apply_rules(snap, base);
  auto after = apply_rules(snap, more);
  CHECK(after.size() >= before.size());
  for (const Finding& f : before) {
    bool kept = false;
    for (const Finding& g : after) {
      if (f == g) kept = true;
    }
    CHECK(kept);
  }
}

TEST_CASE("wildcard-free equivalence with brute force on random streams") {
  std::mt19937 rng(777);
  const std::vector<std::string> vocab = {"alpha", "beta", "(", ")", "=",
                                          "1",     ";",    "gamma"};
  std::uniform_int_distribution<std::size_t> len_dist(0, 40);
  std::uniform_int_distribution<std::size_t> word_dist(0, vocab.size() - 1);
  auto rules = parse_rule_file(doc_of({rule_json("seq", "c", "alpha = 1")}));
  for (int iter = 0; iter < 200; ++iter) {
    std::string program;
    std::size_t words = len_dist(rng);
    for (std::size_t i = 0; i < words; ++i) program += vocab[word_dist(rng)] + " ";
    CorpusSnapshot snap = snapshot_of({{"gen.c", program}});
    auto findings = apply_rules(snap, rules);
    auto toks = tokenize_c_masked(strip_code(program));
    auto brute = brute_match_lines(toks, {"alpha", "=", "1"});
    REQUIRE(findings.size() == brute.size());
  }
}

TEST_CASE("python lexer errors surface as scan errors") {
  auto rules = parse_rule_file(doc_of({rule_json("ev", "python", "eval(...)")}));
  CorpusSnapshot snap = snapshot_of({{"broken.py", "x = \"unterminated\n"}});
  std::vector<ScanError> errors;
  auto findings = apply_rules(snap, rules, 1, &errors);
  CHECK(findings.empty());
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].path == "broken.py");
}

}  // TEST_SUITE
