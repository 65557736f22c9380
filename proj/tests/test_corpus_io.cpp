#include <doctest.h>

#include <cmath>

#include "hww2v/corpus_io.hpp"
#include "hww2v/errors.hpp"
#include "test_util.hpp"

using namespace hww2v;
using hww2v::test::TempDir;

TEST_CASE("polarity corpus: blank lines are skipped and order is kept") {
  TempDir dir;
  const auto pos = dir.write("pos", "first one\n   \nsecond one\n");
  const auto neg = dir.write("neg", "only negative\n");
  const RawCorpus c = load_polarity_corpus(pos, neg);
  REQUIRE(c.size() == 3);
  CHECK(c.count(Polarity::Positive) == 2);
  CHECK(c.count(Polarity::Negative) == 1);
  CHECK(c.records[0].text == "first one");
  CHECK(c.records[1].text == "second one");
  CHECK(c.records[2].label == Polarity::Negative);
}

TEST_CASE("polarity corpus: two empty files give an empty corpus") {
  TempDir dir;
  const RawCorpus c = load_polarity_corpus(dir.write("p", ""), dir.write("n", ""));
  CHECK(c.size() == 0);
}

TEST_CASE("polarity corpus: missing file is an input error") {
  TempDir dir;
  CHECK_THROWS_AS(load_polarity_corpus(dir.file("nope"), dir.write("n", "")), InputError);
}

TEST_CASE("polarity corpus: trailing space and CRLF endings are trimmed") {
  TempDir dir;
  const RawCorpus c = load_polarity_corpus(dir.write("p", "a film \r\nanother \n"), dir.write("n", ""));
  REQUIRE(c.size() == 2);
  CHECK(c.records[0].text == "a film");
  CHECK(c.records[1].text == "another");
}

TEST_CASE("decoding windows-1252") {
  DecodeOptions o;
  // 0x93/0x94 are curly double quotes, 0xE9 is e-acute
  CHECK(decode_to_utf8("\x93hi\x94", o, 1) == "\xE2\x80\x9Chi\xE2\x80\x9D");
  CHECK(decode_to_utf8("caf\xE9", o, 1) == "caf\xC3\xA9");
  CHECK(decode_to_utf8("plain", o, 1) == "plain");
}

TEST_CASE("strict decoding names the line of an undefined byte") {
  TempDir dir;
  DecodeOptions o;
  o.strict = true;
  const auto pos = dir.write("p", "ok\nfine\nbad \x81 byte\n");
  try {
    load_polarity_corpus(pos, dir.write("n", ""), o);
    FAIL("expected a decode error");
  } catch (const DecodeError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  o.strict = false;
  CHECK_NOTHROW(load_polarity_corpus(pos, dir.write("n2", ""), o));
}

TEST_CASE("strict utf-8 rejects invalid sequences") {
  DecodeOptions o;
  o.encoding = TextEncoding::Utf8;
  o.strict = true;
  CHECK(decode_to_utf8("caf\xC3\xA9", o, 1) == "caf\xC3\xA9");
  CHECK_THROWS_AS(decode_to_utf8("caf\xE9", o, 7), DecodeError);
  o.strict = false;
  CHECK(decode_to_utf8("caf\xE9", o, 7) == "caf\xEF\xBF\xBD");
}

TEST_CASE("SentiWordNet line parse") {
  const LexiconEntry e = parse_sentiwordnet_line("a\t00001740\t0.125\t0\table#1\t(usually followed by `to')", 1);
  CHECK(e.pos_tag == PosTag::Adjective);
  CHECK(e.synset_id == 1740);
  CHECK(e.pos_score == 0.125);
  CHECK(e.neg_score == 0.0);
  REQUIRE(e.terms.size() == 1);
  CHECK(e.terms[0] == SynsetTerm{"able", 1});
  CHECK(e.objective() == doctest::Approx(0.875));
}

TEST_CASE("SentiWordNet terms split at the final '#'") {
  const LexiconEntry e = parse_sentiwordnet_line("n\t00002\t0\t0\tc#_sharp#2 good_deal#1\tgloss", 9);
  REQUIRE(e.terms.size() == 2);
  CHECK(e.terms[0] == SynsetTerm{"c#_sharp", 2});
  CHECK(e.terms[1] == SynsetTerm{"good_deal", 1});
  CHECK(e.objective() == 1.0);
}

TEST_CASE("SentiWordNet malformed lines") {
  CHECK_THROWS_AS(parse_sentiwordnet_line("x\t1\t0\t0\tw#1\tg", 4), ParseError);
  CHECK_THROWS_AS(parse_sentiwordnet_line("a\t1\tzero\t0\tw#1\tg", 4), ParseError);
  CHECK_THROWS_AS(parse_sentiwordnet_line("a\t1\t0", 4), ParseError);
  CHECK_THROWS_AS(parse_sentiwordnet_line("a\t1\t1.5\t0\tw#1\tg", 4), ValidationError);
  CHECK_THROWS_AS(parse_sentiwordnet_line("a\t1\t0.6\t0.6\tw#1\tg", 4), ValidationError);
  try {
    parse_sentiwordnet_line("a\tid\t0\t0\tw#1\tg", 42);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 42);
  }
}

TEST_CASE("SentiWordNet file: comments skipped, version and multi-word terms reported") {
  TempDir dir;
  const auto p = dir.write("swn.txt",
                           "# SentiWordNet v3.0.0 (1 June 2010)\n"
                           "# POS\tID\tPosScore\tNegScore\tSynsetTerms\tGloss\n"
                           "a\t00001740\t0.125\t0\table#1\tgloss\n"
                           "n\t00000002\t0\t0.5\tbad_luck#1 misfortune#2\tgloss\n"
                           "\t\t\t\t#\n");
  const SentiWordNet swn = load_sentiwordnet(p);
  CHECK(swn.entries.size() == 2);
  CHECK(swn.version == "3.0.0");
  CHECK(swn.multiword_terms == 1);
}
