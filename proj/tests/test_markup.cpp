#include <doctest.h>

#include <random>

#include "smtlab/markup.hpp"
#include "test_support.hpp"

using namespace smtlab;

namespace {

// The nine-word subword sentence from the worked example used across
// the format tests.
SubwordSentence example_sentence() {
  return {{{"thi", "s"},
           {"i", "s"},
           {"a", "n"},
           {"e", "xa", "m", "p", "le"},
           {"o", "f"},
           {"da", "ta"},
           {"fo", "rma", "t", "s"},
           {"fo", "r"},
           {"se", "gme", "n", "ta", "tio", "n"}}};
}

FormatSpec boundary() { return {MarkupKind::boundary_marker, "_", BoundarySide::last}; }
FormatSpec internal() { return {MarkupKind::internal_marker, "_", BoundarySide::last}; }
FormatSpec space() { return {MarkupKind::space_marker, "_", BoundarySide::last}; }

}  // namespace

TEST_CASE("encode reproduces the reference rows byte for byte") {
  const auto s = example_sentence();
  CHECK(join_tokens(markup_encode(s, boundary())) ==
        "thi s_ i s_ a n_ e xa m p le_ o f_ da ta_ fo rma t s_ fo r_ se gme n ta tio n_");
  CHECK(join_tokens(markup_encode(s, internal())) ==
        "thi_ s i_ s a_ n e_ xa_ m_ p_ le o_ f da_ ta fo_ rma_ t_ s fo_ r se_ gme_ n_ ta_ tio_ n");
  CHECK(join_tokens(markup_encode(s, space())) ==
        "thi s _ i s _ a n _ e xa m p le _ o f _ da ta _ fo rma t s _ fo r _ se gme n ta tio n");
}

TEST_CASE("encode edge cases") {
  CHECK(join_tokens(markup_encode({{{"x"}}}, space())) == "x");
  // boundary_side=first marks the first subword
  CHECK(join_tokens(markup_encode({{{"ab", "c"}, {"d"}}},
                                  {MarkupKind::boundary_marker, "_", BoundarySide::first})) ==
        "ab_ c d_");
  // marker collision is an error naming the token
  CHECK_THROWS_WITH_AS(markup_encode({{{"a_b"}}}, space()),
                       doctest::Contains("a_b"), std::runtime_error);
}

TEST_CASE("decode inverts the encodings") {
  CHECK(markup_decode(split_tokens("thi s_ i s_"), boundary()).words ==
        std::vector<std::string>{"this", "is"});
  CHECK(markup_decode({"x"}, space()).words == std::vector<std::string>{"x"});
  CHECK(markup_decode(split_tokens("a_ b"), internal()).words == std::vector<std::string>{"ab"});
  CHECK(markup_decode(split_tokens("ab_ c"), {MarkupKind::boundary_marker, "_", BoundarySide::first})
            .words == std::vector<std::string>{"abc"});
}

TEST_CASE("decode is best-effort on malformed streams") {
  // boundary stream with no marked final token: trailing word flushed
  const auto b = markup_decode(split_tokens("thi s_ i s"), boundary());
  CHECK(b.words == std::vector<std::string>{"this", "is"});
  CHECK(b.warnings > 0);
  // internal stream ending on a marked token
  const auto i = markup_decode(split_tokens("a_ b_"), internal());
  CHECK(i.words == std::vector<std::string>{"ab"});
  CHECK(i.warnings > 0);
  // doubled space markers
  const auto s = markup_decode(split_tokens("a _ _ b"), space());
  CHECK(s.words == std::vector<std::string>{"a", "b"});
  CHECK(s.warnings > 0);
  // decode never throws on arbitrary token streams
  const auto junk = markup_decode(split_tokens("_ _ x_ _y _"), space());
  CHECK(junk.warnings >= 0);
}

TEST_CASE("length laws") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = smtlab::test::random_subword_sentence(rng);
    const size_t subwords = s.subword_count();
    CHECK(markup_encode(s, boundary()).size() == subwords);
    CHECK(markup_encode(s, internal()).size() == subwords);
    CHECK(markup_encode(s, space()).size() == subwords + s.words.size() - 1);

    // marked-token counts per word
    size_t marked = 0;
    for (const auto& tok : markup_encode(s, boundary()))
      if (tok.back() == '_') ++marked;
    CHECK(marked == s.words.size());
    marked = 0;
    for (const auto& tok : markup_encode(s, internal()))
      if (tok.back() == '_') ++marked;
    CHECK(marked == subwords - s.words.size());
  }
}

TEST_CASE("round-trip identity on fuzzed sentences") {
  std::mt19937 rng(42);
  std::vector<SubwordSentence> corpus;
  for (int i = 0; i < 1000; ++i) corpus.push_back(smtlab::test::random_subword_sentence(rng));
  for (const auto& f : {boundary(), internal(), space(),
                        FormatSpec{MarkupKind::boundary_marker, "_", BoundarySide::first}}) {
    const auto res = roundtrip_check(corpus, f);
    CHECK(res.ok);
    CHECK(!res.first_failure);
  }
  CHECK(roundtrip_check({}, space()).ok);
  CHECK(roundtrip_check({example_sentence()}, boundary()).ok);
  CHECK(roundtrip_check({example_sentence()}, internal()).ok);
  CHECK(roundtrip_check({example_sentence()}, space()).ok);
}
