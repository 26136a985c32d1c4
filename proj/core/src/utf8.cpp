#include "longspan/utf8.hpp"

namespace longspan {

namespace {

inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

// Decodes the scalar starting at pos and advances pos past it. On a malformed
// sequence only one byte is consumed and U+FFFD is produced, which keeps the
// scalar count stable regardless of where in a bad run decoding starts.
char32_t next_scalar(std::string_view s, std::size_t& pos) {
  const unsigned char b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }

  std::size_t len = 0;
  char32_t min_value = 0;
  char32_t value = 0;
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    len = 2;
    min_value = 0x80;
    value = b0 & 0x1F;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    len = 3;
    min_value = 0x800;
    value = b0 & 0x0F;
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    len = 4;
    min_value = 0x10000;
    value = b0 & 0x07;
  } else {
    ++pos;  // stray continuation byte, overlong lead, or invalid byte
    return 0xFFFD;
  }

  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = static_cast<unsigned char>(s[pos + i]);
    if (!is_continuation(b)) {
      ++pos;
      return 0xFFFD;
    }
    value = (value << 6) | (b & 0x3F);
  }
  if (value < min_value || value > 0x10FFFF ||
      (value >= 0xD800 && value <= 0xDFFF)) {
    ++pos;
    return 0xFFFD;
  }
  pos += len;
  return value;
}

}  // namespace

std::size_t scalar_count(std::string_view utf8) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    next_scalar(utf8, pos);
    ++n;
  }
  return n;
}

std::vector<char32_t> decode_scalars(std::string_view utf8) {
  std::vector<char32_t> out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    out.push_back(next_scalar(utf8, pos));
  }
  return out;
}

}  // namespace longspan
