#pragma once

#include "avsc/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace avsc {

// major.minor.patch with an optional pre-release tag. Totally ordered:
// numeric triple first, then any pre-release sorts below the same triple
// without one; two pre-releases compare as plain text.
struct Version {
  int major = 0;
  int minor = 0;
  int patch = 0;
  std::string pre_release;

  static Version parse(std::string_view text);  // throws VersionParseError
  static std::optional<Version> try_parse(std::string_view text);

  std::string str() const;

  friend bool operator==(const Version&, const Version&) = default;
};

int compare(const Version& a, const Version& b);
inline bool operator<(const Version& a, const Version& b) { return compare(a, b) < 0; }
inline bool operator>(const Version& a, const Version& b) { return compare(a, b) > 0; }
inline bool operator<=(const Version& a, const Version& b) { return compare(a, b) <= 0; }
inline bool operator>=(const Version& a, const Version& b) { return compare(a, b) >= 0; }

// Range expressions: "^x.y.z" = [x.y.z, (x+1).0.0), "~x.y.z" = [x.y.z,
// x.(y+1).0), comparator chains like ">=a <b" evaluated conjunctively,
// and a bare version meaning equality.
struct VersionRange {
  enum class Op { Eq, Lt, Le, Gt, Ge };
  struct Comparator {
    Op op = Op::Eq;
    Version version;
  };

  std::vector<Comparator> comparators;
  std::string text;

  static VersionRange parse(std::string_view expression);  // throws VersionParseError

  bool contains(const Version& v) const;

  // Smallest version satisfying the range; strict '>' bounds step the patch
  // component. nullopt when the range is unsatisfiable under that rule.
  std::optional<Version> min_satisfying() const;
};

bool version_in_range(const Version& v, std::string_view range_expression);

}  // namespace avsc
