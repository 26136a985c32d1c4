#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "longspan/util.hpp"

namespace longspan::detail {

struct ScoreLine {
  std::size_t line_no;
  std::string id;
  double score;
};

// Shared parser for "id<TAB>score" streams. The score file loader and the
// subprocess output reader differ only in which error class a bad line maps
// to, so the caller supplies the thrower.
template <typename Fail>
std::vector<ScoreLine> parse_score_lines(std::istream& in, Fail&& fail) {
  std::vector<ScoreLine> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      fail(line_no, "expected id<TAB>score, got " +
                        std::to_string(fields.size()) + " fields");
    }
    if (fields[0].empty()) fail(line_no, "empty id");
    const auto score = parse_double(fields[1]);
    if (!score) {
      fail(line_no, "unparseable score '" + std::string(fields[1]) + "'");
    }
    if (!std::isfinite(*score)) {
      fail(line_no, "non-finite score '" + std::string(fields[1]) + "'");
    }
    lines.push_back({line_no, std::string(fields[0]), *score});
  }
  return lines;
}

}  // namespace longspan::detail
