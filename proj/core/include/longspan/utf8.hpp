#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace longspan {

// Number of Unicode scalar values in a UTF-8 byte string. Counting happens
// over the decoded scalar sequence exactly as stored; no normalization is
// applied. Malformed bytes each count as one scalar (decoded as U+FFFD), so
// the count always equals decode_scalars(s).size().
std::size_t scalar_count(std::string_view utf8);

// Lenient UTF-8 decoder: well-formed sequences decode to their scalar value,
// each offending byte of a malformed sequence decodes to U+FFFD.
std::vector<char32_t> decode_scalars(std::string_view utf8);

}  // namespace longspan
