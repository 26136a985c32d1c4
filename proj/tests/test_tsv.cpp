#include <doctest.h>

#include <sstream>
#include <string>

#include "longspan/errors.hpp"
#include "longspan/tsv.hpp"
#include "support/gen.hpp"

using namespace longspan;

namespace {

const char* k_header =
    "id\tlang_pair\tscheme\tsystem\tdoc\tseg_index\tsrc\tmt\tref\t"
    "raw_score\tnorm_score\tspan_size\n";

Corpus parse(const std::string& text, const ColumnMap& columns = {}) {
  std::istringstream in(text);
  return parse_tsv(in, columns);
}

}  // namespace

TEST_CASE("round trip preserves every field") {
  Corpus original = gen::corpus(7, {});
  std::ostringstream out;
  write_tsv(original, out);
  CHECK(parse(out.str()) == original);
}

TEST_CASE("scores round trip exactly through text") {
  std::vector<AnnotatedSegment> segs;
  AnnotatedSegment seg;
  seg.id = "x";
  seg.lang_pair = "en-de";
  seg.source = "s";
  seg.hypothesis = "h";
  seg.raw_score = 0.1 + 0.2;  // not representable as a short decimal
  seg.norm_score = 1.0 / 3.0;
  segs.push_back(seg);
  std::ostringstream out;
  write_tsv(Corpus::from_segments(segs), out);
  const Corpus back = parse(out.str());
  CHECK(back.at(0).raw_score == seg.raw_score);
  CHECK(back.at(0).norm_score == seg.norm_score);
}

TEST_CASE("empty stream parses to an empty corpus") {
  CHECK(parse("").empty());
  CHECK(parse("# only a comment\n").empty());
}

TEST_CASE("comments before the header are skipped") {
  std::string text = "#fingerprint=aabb\n#generator=x\n";
  text += k_header;
  text += "a\ten-cs\tDA\tsysA\td1\t0\tsrc\tmt\tref\t50\t\t\n";
  const Corpus c = parse(text);
  REQUIRE(c.size() == 1);
  CHECK(c.at(0).id == "a");
  CHECK(c.at(0).scheme == Scheme::DA);
  CHECK(c.at(0).reference == "ref");
  CHECK(!c.at(0).norm_score);
  CHECK(c.at(0).span_size == 1);
}

TEST_CASE("crlf line endings are accepted") {
  std::string text(k_header);
  text.pop_back();
  text += "\r\na\ten-cs\tDA\tsysA\td1\t0\ts\tm\t\t1\t\t\r\n";
  const Corpus c = parse(text);
  REQUIRE(c.size() == 1);
  CHECK(c.at(0).hypothesis == "m");
  CHECK(!c.at(0).reference);
}

TEST_CASE("missing required column names the column") {
  const std::string text = "id\tlang_pair\tscheme\tsystem\tdoc\tsrc\tmt\traw_score\n";
  CHECK_THROWS_WITH_AS(parse(text), "missing column 'seg_index'", schema_error);
}

TEST_CASE("field count mismatch reports the line number") {
  std::string text(k_header);
  text += "a\ten-cs\tDA\tsysA\td1\t0\ts\tm\t\t1\t\t\n";
  text += "b\ten-cs\tDA\n";
  try {
    parse(text);
    FAIL("expected row_error");
  } catch (const row_error& e) {
    CHECK(e.line_no() == 3);
  }
}

TEST_CASE("bad rows are rejected") {
  const auto row = [](const std::string& scheme, const std::string& seg_index,
                      const std::string& raw, const std::string& norm,
                      const std::string& span) {
    return std::string(k_header) + "a\ten-cs\t" + scheme + "\tsysA\td1\t" +
           seg_index + "\ts\tm\t\t" + raw + "\t" + norm + "\t" + span + "\n";
  };
  CHECK_THROWS_AS(parse(row("XX", "0", "1", "", "")), row_error);   // scheme
  CHECK_THROWS_AS(parse(row("DA", "-1", "1", "", "")), row_error);  // seg_index
  CHECK_THROWS_AS(parse(row("DA", "0", "abc", "", "")), row_error); // score
  CHECK_THROWS_AS(parse(row("DA", "0", "nan", "", "")), row_error); // non-finite
  CHECK_THROWS_AS(parse(row("DA", "0", "1", "1.5", "")), row_error);  // norm range
  CHECK_THROWS_AS(parse(row("DA", "0", "1", "", "0")), row_error);  // span_size
  CHECK_THROWS_AS(parse(row("DA", "0", "1", "", "two")), row_error);
}

TEST_CASE("duplicate ids are rejected with the line") {
  std::string text(k_header);
  text += "a\ten-cs\tDA\tsysA\td1\t0\ts\tm\t\t1\t\t\n";
  text += "a\ten-cs\tDA\tsysA\td1\t1\ts\tm\t\t2\t\t\n";
  try {
    parse(text);
    FAIL("expected row_error");
  } catch (const row_error& e) {
    CHECK(e.line_no() == 3);
    CHECK(std::string(e.what()).find("duplicate id 'a'") != std::string::npos);
  }
}

TEST_CASE("scheme names parse case-insensitively") {
  std::string text(k_header);
  text += "a\ten-cs\tmqm\tsysA\td1\t0\ts\tm\t\t-5\t\t\n";
  CHECK(parse(text).at(0).scheme == Scheme::MQM);
}

TEST_CASE("column remapping reads third-party headers") {
  const std::string text =
      "segid\tlp\tmethod\tsysname\tdocid\tpos\tsource\thyp\tgold\textra\n"
      "s1\tde-en\tESA\tonline\tnews1\t3\tq\tw\t77\tignored\n";
  const ColumnMap map = ColumnMap::parse(
      "id=segid, lang_pair=lp, scheme=method, system=sysname, doc=docid, "
      "seg_index=pos, src=source, mt=hyp, raw_score=gold");
  const Corpus c = parse(text, map);
  REQUIRE(c.size() == 1);
  CHECK(c.at(0).id == "s1");
  CHECK(c.at(0).scheme == Scheme::ESA);
  CHECK(c.at(0).seg_index == 3);
  CHECK(c.at(0).raw_score == 77.0);
  CHECK(!c.at(0).reference);  // "ref" column absent under the remap
}

TEST_CASE("column map rejects unknown fields") {
  CHECK_THROWS_AS(ColumnMap::parse("idd=x"), config_error);
  CHECK_THROWS_AS(ColumnMap::parse("id"), config_error);
  CHECK_THROWS_AS(ColumnMap::parse("id="), config_error);
}

TEST_CASE("embedded tabs refuse to serialize") {
  std::vector<AnnotatedSegment> segs;
  AnnotatedSegment seg;
  seg.id = "x";
  seg.source = "has\ttab";
  seg.hypothesis = "h";
  segs.push_back(seg);
  std::ostringstream out;
  CHECK_THROWS_AS(write_tsv(Corpus::from_segments(segs), out),
                  serialization_error);
}

TEST_CASE("group index orders segments by seg_index") {
  std::string text(k_header);
  text += "c\ten-cs\tDA\tsysA\td1\t2\ts\tm\t\t3\t\t\n";
  text += "a\ten-cs\tDA\tsysA\td1\t0\ts\tm\t\t1\t\t\n";
  text += "b\ten-cs\tDA\tsysA\td1\t1\ts\tm\t\t2\t\t\n";
  const Corpus c = parse(text);
  const auto groups = group_and_sort(c);
  REQUIRE(groups.size() == 1);
  REQUIRE(groups[0].segments.size() == 3);
  CHECK(groups[0].segments[0]->id == "a");
  CHECK(groups[0].segments[1]->id == "b");
  CHECK(groups[0].segments[2]->id == "c");
}

TEST_CASE("repeated seg_index within a group is rejected") {
  std::string text(k_header);
  text += "a\ten-cs\tDA\tsysA\td1\t0\ts\tm\t\t1\t\t\n";
  text += "b\ten-cs\tDA\tsysA\td1\t0\ts\tm\t\t2\t\t\n";
  const Corpus c = parse(text);
  CHECK_THROWS_AS(group_and_sort(c), integrity_error);
}
