#pragma once

#include <string_view>

namespace longspan {

inline constexpr std::string_view k_version = "1.0.0";

// First line of the external-scorer wire protocol.
inline constexpr std::string_view k_scorer_protocol_header = "#longspan-scorer-v1";

}  // namespace longspan
