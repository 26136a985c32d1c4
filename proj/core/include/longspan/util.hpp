#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace longspan {

// Splits one physical line on tab characters. "a\tb\t" yields {"a","b",""}.
std::vector<std::string_view> split_tabs(std::string_view line);

std::string_view trim(std::string_view s);

// Shortest decimal text that round-trips to the same double (std::to_chars).
std::string format_double(double v);

// Full-match numeric parsers; locale-independent. Return nullopt on any
// trailing garbage. Finiteness is the caller's policy.
std::optional<double> parse_double(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex16(std::uint64_t v);

// FNV-1a 64 of a file's raw bytes; throws schema_error if unreadable.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace longspan
