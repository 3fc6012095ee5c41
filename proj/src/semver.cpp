#include "avsc/semver.hpp"

#include <algorithm>
#include <cctype>

namespace avsc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_component(std::string_view text, int& out) {
  if (text.empty() || text.size() > 9) return false;
  int value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

}  // namespace

std::optional<Version> Version::try_parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) return std::nullopt;

  Version v;
  std::size_t plus = s.find('+');  // build metadata is ignored
  if (plus != std::string_view::npos) s = s.substr(0, plus);
  std::size_t dash = s.find('-');
  if (dash != std::string_view::npos) {
    v.pre_release = std::string(s.substr(dash + 1));
    if (v.pre_release.empty()) return std::nullopt;
    s = s.substr(0, dash);
  }

  int* slots[3] = {&v.major, &v.minor, &v.patch};
  std::size_t part = 0;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = s.find('.', start);
    std::string_view piece =
        dot == std::string_view::npos ? s.substr(start) : s.substr(start, dot - start);
    if (part >= 3 || !parse_component(piece, *slots[part])) return std::nullopt;
    ++part;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return v;
}

Version Version::parse(std::string_view text) {
  auto v = try_parse(text);
  if (!v) throw VersionParseError("invalid version: \"" + std::string(text) + "\"");
  return *v;
}

std::string Version::str() const {
  std::string out = std::to_string(major) + "." + std::to_string(minor) + "." +
                    std::to_string(patch);
  if (!pre_release.empty()) out += "-" + pre_release;
  return out;
}

int compare(const Version& a, const Version& b) {
  if (a.major != b.major) return a.major < b.major ? -1 : 1;
  if (a.minor != b.minor) return a.minor < b.minor ? -1 : 1;
  if (a.patch != b.patch) return a.patch < b.patch ? -1 : 1;
  if (a.pre_release.empty() && b.pre_release.empty()) return 0;
  if (a.pre_release.empty()) return 1;   // release > pre-release
  if (b.pre_release.empty()) return -1;
  return a.pre_release.compare(b.pre_release) < 0
             ? -1
             : (a.pre_release == b.pre_release ? 0 : 1);
}

VersionRange VersionRange::parse(std::string_view expression) {
  std::string_view s = trim(expression);
  if (s.empty()) throw VersionParseError("empty version range");

  VersionRange range;
  range.text = std::string(s);

  if (s.front() == '^') {
    Version base = Version::parse(s.substr(1));
    range.comparators.push_back({Op::Ge, base});
    range.comparators.push_back({Op::Lt, Version{base.major + 1, 0, 0, ""}});
    return range;
  }
  if (s.front() == '~') {
    Version base = Version::parse(s.substr(1));
    range.comparators.push_back({Op::Ge, base});
    range.comparators.push_back({Op::Lt, Version{base.major, base.minor + 1, 0, ""}});
    return range;
  }

  // Comparator chain: whitespace- or comma-separated, conjunctive.
  std::string normalized(s);
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    while (pos < normalized.size() &&
           std::isspace(static_cast<unsigned char>(normalized[pos]))) {
      ++pos;
    }
    if (pos >= normalized.size()) break;
    std::size_t end = pos;
    while (end < normalized.size() &&
           !std::isspace(static_cast<unsigned char>(normalized[end]))) {
      ++end;
    }
    std::string_view token(normalized.data() + pos, end - pos);
    pos = end;

    Op op = Op::Eq;
    if (token.rfind(">=", 0) == 0) { op = Op::Ge; token.remove_prefix(2); }
    else if (token.rfind("<=", 0) == 0) { op = Op::Le; token.remove_prefix(2); }
    else if (token.rfind("==", 0) == 0) { op = Op::Eq; token.remove_prefix(2); }
    else if (token.rfind(">", 0) == 0) { op = Op::Gt; token.remove_prefix(1); }
    else if (token.rfind("<", 0) == 0) { op = Op::Lt; token.remove_prefix(1); }
    else if (token.rfind("=", 0) == 0) { op = Op::Eq; token.remove_prefix(1); }
    range.comparators.push_back({op, Version::parse(token)});
  }
  if (range.comparators.empty()) {
    throw VersionParseError("empty version range");
  }
  return range;
}

bool VersionRange::contains(const Version& v) const {
  for (const Comparator& c : comparators) {
    int cmp = compare(v, c.version);
    switch (c.op) {
      case Op::Eq: if (cmp != 0) return false; break;
      case Op::Lt: if (cmp >= 0) return false; break;
      case Op::Le: if (cmp > 0) return false; break;
      case Op::Gt: if (cmp <= 0) return false; break;
      case Op::Ge: if (cmp < 0) return false; break;
    }
  }
  return true;
}

std::optional<Version> VersionRange::min_satisfying() const {
  Version best{0, 0, 0, ""};
  for (const Comparator& c : comparators) {
    Version candidate;
    switch (c.op) {
      case Op::Eq:
        candidate = c.version;
        break;
      case Op::Ge:
        candidate = c.version;
        break;
      case Op::Gt:
        candidate = Version{c.version.major, c.version.minor, c.version.patch + 1, ""};
        break;
      default:
        continue;  // upper bounds do not raise the minimum
    }
    if (candidate > best) best = candidate;
  }
  if (!contains(best)) return std::nullopt;
  return best;
}

bool version_in_range(const Version& v, std::string_view range_expression) {
  return VersionRange::parse(range_expression).contains(v);
}

}  // namespace avsc
