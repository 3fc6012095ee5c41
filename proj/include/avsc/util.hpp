#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <filesystem>

namespace avsc::util {

// Glob match against a '/'-separated relative path. Supports '*', '?' and
// '[...]' within a segment and '**' as a full segment matching any number
// of segments (including none).
bool glob_match(std::string_view pattern, std::string_view path);

// Decode bytes as UTF-8, replacing invalid bytes with U+FFFD.
std::string lossy_utf8(std::string_view bytes);

// Physical lines: newline count plus a trailing non-terminated line.
std::size_t count_lines(std::string_view content);

// Round half away from zero at the given number of decimals.
double round_half_away(double value, int decimals);

// "991.5" / "92" — fixed formatting with trailing zeros trimmed.
std::string format_trimmed(double value);
// Fixed decimal formatting, e.g. format_fixed(182.5, 2) == "182.50".
std::string format_fixed(double value, int decimals);

// Quote a CSV field when it contains separators, quotes or newlines.
std::string csv_field(std::string_view text);

// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view text);

std::string utc_now_rfc3339();
bool looks_like_rfc3339(std::string_view text);

std::string to_lower(std::string_view text);

std::optional<std::string> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Run fn(0..count) across up to `jobs` threads; serial when jobs <= 1.
// Callers get determinism by writing into index-addressed slots.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace avsc::util
