#include "avsc/util.hpp"

#include "avsc/types.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <thread>
#include <vector>

namespace avsc::util {

namespace {

std::vector<std::string_view> split_segments(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t slash = text.find('/', start);
    if (slash == std::string_view::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

// '*', '?', '[set]' matcher within one path segment.
bool match_segment(std::string_view pat, std::string_view seg) {
  std::size_t p = 0, s = 0;
  std::size_t star_p = std::string_view::npos, star_s = 0;
  while (s < seg.size()) {
    bool matched = false;
    if (p < pat.size()) {
      char pc = pat[p];
      if (pc == '*') {
        star_p = ++p;
        star_s = s;
        continue;
      }
      if (pc == '?') {
        ++p;
        ++s;
        continue;
      }
      if (pc == '[') {
        std::size_t close = pat.find(']', p + 2);  // allow ']' right after '[' or '!'
        if (close != std::string_view::npos) {
          std::string_view set = pat.substr(p + 1, close - p - 1);
          bool negate = !set.empty() && (set[0] == '!' || set[0] == '^');
          if (negate) set.remove_prefix(1);
          bool hit = false;
          for (std::size_t i = 0; i < set.size(); ++i) {
            if (i + 2 < set.size() && set[i + 1] == '-') {
              if (seg[s] >= set[i] && seg[s] <= set[i + 2]) hit = true;
              i += 2;
            } else if (set[i] == seg[s]) {
              hit = true;
            }
          }
          if (hit != negate) {
            p = close + 1;
            ++s;
            continue;
          }
          matched = false;
        } else {
          matched = pat[p] == seg[s];  // unterminated '[' is literal
          if (matched) {
            ++p;
            ++s;
            continue;
          }
        }
      } else if (pc == seg[s]) {
        ++p;
        ++s;
        continue;
      }
    }
    (void)matched;
    if (star_p != std::string_view::npos) {
      p = star_p;
      s = ++star_s;
      continue;
    }
    return false;
  }
  while (p < pat.size() && pat[p] == '*') ++p;
  return p == pat.size();
}

bool match_segments(const std::vector<std::string_view>& pat, std::size_t pi,
                    const std::vector<std::string_view>& segs, std::size_t si) {
  if (pi == pat.size()) return si == segs.size();
  if (pat[pi] == "**") {
    for (std::size_t k = si; k <= segs.size(); ++k) {
      if (match_segments(pat, pi + 1, segs, k)) return true;
    }
    return false;
  }
  if (si == segs.size()) return false;
  if (!match_segment(pat[pi], segs[si])) return false;
  return match_segments(pat, pi + 1, segs, si + 1);
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
  if (pattern.empty()) return false;
  return match_segments(split_segments(pattern), 0, split_segments(path), 0);
}

std::string lossy_utf8(std::string_view bytes) {
  static const char kReplacement[] = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    unsigned char c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      len = 4;
    }
    bool ok = len > 0 && i + len <= bytes.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      if ((static_cast<unsigned char>(bytes[i + k]) & 0xC0) != 0x80) ok = false;
    }
    if (ok) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      out.append(kReplacement, 3);
      ++i;
    }
  }
  return out;
}

std::size_t count_lines(std::string_view content) {
  if (content.empty()) return 0;
  std::size_t lines = 0;
  for (char c : content) {
    if (c == '\n') ++lines;
  }
  if (content.back() != '\n') ++lines;
  return lines;
}

double round_half_away(double value, int decimals) {
  double factor = std::pow(10.0, decimals);
  return std::round(value * factor) / factor;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string format_trimmed(double value) {
  std::string s = format_fixed(value, 6);
  std::size_t last = s.find_last_not_of('0');
  if (last != std::string::npos) {
    if (s[last] == '.') --last;
    s.erase(last + 1);
  }
  return s;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now_rfc3339() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[72];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

bool looks_like_rfc3339(std::string_view t) {
  auto digit = [&](std::size_t i) {
    return i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]));
  };
  // 0123456789012345678
  // YYYY-MM-DDTHH:MM:SS followed by Z or a numeric offset
  if (t.size() < 20) return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u}) {
    if (!digit(i)) return false;
  }
  if (t[4] != '-' || t[7] != '-' || (t[10] != 'T' && t[10] != 't')) return false;
  if (t[13] != ':' || t[16] != ':') return false;
  std::string_view rest = t.substr(19);
  if (rest == "Z" || rest == "z") return true;
  if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
    return std::isdigit(static_cast<unsigned char>(rest[1])) &&
           std::isdigit(static_cast<unsigned char>(rest[2])) &&
           std::isdigit(static_cast<unsigned char>(rest[4])) &&
           std::isdigit(static_cast<unsigned char>(rest[5]));
  }
  return false;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) return std::nullopt;
  return data;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed: " + path.string());
}

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = std::min<std::size_t>(
      count, std::max<std::size_t>(1, std::min<std::size_t>(
                                         jobs > 0 ? static_cast<std::size_t>(jobs) : 1,
                                         hw > 0 ? hw : 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace avsc::util
