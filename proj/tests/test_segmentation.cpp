#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "smtlab/segmentation.hpp"

using namespace smtlab;

namespace {
const SegmentationScheme kOsLatin = SegmentationScheme::orthographic_syllable(CharacterClassTable::latin());
}

TEST_CASE("OS segmentation of Latin words") {
  CHECK(segment_word("formats", kOsLatin) == std::vector<std::string>{"fo", "rma", "t", "s"});
  CHECK(segment_word("a", kOsLatin) == std::vector<std::string>{"a"});
  // Greedy C*V+ by hand: stre | n g t h s
  CHECK(segment_word("strengths", kOsLatin) ==
        std::vector<std::string>{"stre", "n", "g", "t", "h", "s"});
  CHECK(segment_word("this", kOsLatin) == std::vector<std::string>{"thi", "s"});
  CHECK(segment_word("data", kOsLatin) == std::vector<std::string>{"da", "ta"});
}

TEST_CASE("OS handles leading vowels, digits and punctuation") {
  CHECK(segment_word("an", kOsLatin) == std::vector<std::string>{"a", "n"});
  CHECK(segment_word("ee", kOsLatin) == std::vector<std::string>{"ee"});
  // other-class code points are singleton units
  CHECK(segment_word("a1b", kOsLatin) == std::vector<std::string>{"a", "1", "b"});
  CHECK(segment_word("..", kOsLatin) == std::vector<std::string>{".", "."});
}

TEST_CASE("OS segmentation of Devanagari") {
  const auto os_dev = SegmentationScheme::orthographic_syllable(CharacterClassTable::devanagari());
  // क + हा + नी: matras close units, singleton onsets after the last vowel
  CHECK(segment_word("कहानी", os_dev) ==
        std::vector<std::string>{"कहा", "नी"});
  // virama keeps the cluster together: स्था + न
  CHECK(segment_word("स्थान", os_dev) ==
        std::vector<std::string>{"स्था", "न"});
  // anusvara attaches to the unit before it
  CHECK(segment_word("में", os_dev) ==
        std::vector<std::string>{"में"});
}

TEST_CASE("character scheme splits code points") {
  const auto chars = SegmentationScheme::character();
  CHECK(segment_word("ab", chars) == std::vector<std::string>{"a", "b"});
  // multi-byte code points stay intact
  CHECK(segment_word("कख", chars) == std::vector<std::string>{"क", "ख"});
  // with a class table, dependents and the joiner attach to the left
  const auto chars_dev = SegmentationScheme::character(CharacterClassTable::devanagari());
  CHECK(segment_word("काख", chars_dev) ==
        std::vector<std::string>{"का", "ख"});
  CHECK(segment_word("स्थ", chars_dev) ==
        std::vector<std::string>{"स्", "थ"});
}

TEST_CASE("segment_word rejects bad input") {
  CHECK_THROWS_AS(segment_word("", kOsLatin), std::invalid_argument);
  CHECK_THROWS_AS(segment_word("a b", kOsLatin), std::invalid_argument);
  SegmentationScheme no_vowels{SchemeKind::orthographic_syllable, CharacterClassTable{}};
  CHECK_THROWS_AS(segment_word("abc", no_vowels), std::invalid_argument);
}

TEST_CASE("segment_sentence") {
  CHECK(segment_sentence("", kOsLatin).words.empty());
  const auto s = segment_sentence("of data", kOsLatin);
  REQUIRE(s.words.size() == 2);
  CHECK(s.words[0] == std::vector<std::string>{"o", "f"});
  CHECK(s.words[1] == std::vector<std::string>{"da", "ta"});
  const auto c = segment_sentence("ab cd", SegmentationScheme::character());
  REQUIRE(c.words.size() == 2);
  CHECK(c.words[0] == std::vector<std::string>{"a", "b"});
  CHECK(c.words[1] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("lossless concatenation property") {
  std::mt19937 rng(7);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789.'-";
  std::uniform_int_distribution<int> len(1, 14);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(alphabet.size()) - 1);
  const std::vector<SegmentationScheme> schemes = {
      SegmentationScheme::word(), SegmentationScheme::character(),
      SegmentationScheme::character(CharacterClassTable::latin()), kOsLatin};
  for (int trial = 0; trial < 500; ++trial) {
    std::string word;
    const int l = len(rng);
    for (int i = 0; i < l; ++i) word += alphabet[pick(rng)];
    for (const auto& scheme : schemes) {
      const auto tokens = segment_word(word, scheme);
      std::string joined;
      for (const auto& t : tokens) {
        CHECK(!t.empty());
        joined += t;
      }
      CHECK(joined == word);
      // determinism
      CHECK(segment_word(word, scheme) == tokens);
    }
    // character scheme token count = code point count without a table
    CHECK(segment_word(word, SegmentationScheme::character()).size() == word.size());
  }
}

TEST_CASE("OS units end in their vowel run") {
  std::mt19937 rng(11);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(alphabet.size()) - 1);
  const auto& table = *kOsLatin.classes;
  auto is_vowel = [&](char c) { return table.vowels.count(static_cast<char32_t>(c)) > 0; };
  for (int trial = 0; trial < 300; ++trial) {
    std::string word;
    const int l = len(rng);
    for (int i = 0; i < l; ++i) word += alphabet[pick(rng)];
    for (const auto& unit : segment_word(word, kOsLatin)) {
      const bool has_vowel = std::any_of(unit.begin(), unit.end(), is_vowel);
      if (!has_vowel) {
        CHECK(unit.size() == 1);  // trailing-consonant singleton
        continue;
      }
      // exactly one maximal vowel run, at the end of the unit
      CHECK(is_vowel(unit.back()));
      bool in_run = false, run_ended = false;
      for (char c : unit) {
        if (is_vowel(c)) {
          CHECK(!run_ended);
          in_run = true;
        } else if (in_run) {
          run_ended = true;
        }
      }
    }
  }
}

TEST_CASE("corpus length stats") {
  const auto stats = corpus_length_stats({"ab cd"}, {SegmentationScheme::word(),
                                                     SegmentationScheme::character()});
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].mean_tokens == doctest::Approx(2.0));
  CHECK(stats[0].ratio_vs_word == doctest::Approx(1.0));
  CHECK(stats[1].mean_tokens == doctest::Approx(4.0));
  CHECK(stats[1].ratio_vs_word == doctest::Approx(2.0));

  const auto one = corpus_length_stats({"x"}, {SegmentationScheme::word()});
  CHECK(one[0].mean_tokens == doctest::Approx(1.0));
  CHECK(one[0].ratio_vs_word == doctest::Approx(1.0));

  const auto os = corpus_length_stats({"of data"}, {SegmentationScheme::word(), kOsLatin});
  CHECK(os[0].mean_tokens == doctest::Approx(2.0));
  CHECK(os[1].mean_tokens == doctest::Approx(4.0));
  CHECK(os[1].ratio_vs_word == doctest::Approx(2.0));

  CHECK_THROWS_AS(corpus_length_stats({}, {SegmentationScheme::word()}), std::invalid_argument);
}

TEST_CASE("class table file round trip") {
  const std::string path = "classes_test.txt";
  {
    std::ofstream out(path);
    out << "# tiny latin subset\n";
    out << "U+0061\tvowel\n";     // a
    out << "U+0062\tconsonant\n"; // b
    out << "U+0063\tconsonant\n"; // c
    out << "U+0064\tdependent\n"; // d (contrived)
    out << "U+0065\tjoiner\n";    // e (contrived)
  }
  const auto t = CharacterClassTable::load(path);
  CHECK(t.classify(U'a') == CharClass::vowel);
  CHECK(t.classify(U'b') == CharClass::consonant);
  CHECK(t.classify(U'd') == CharClass::dependent);
  CHECK(t.classify(U'e') == CharClass::joiner);
  CHECK(t.classify(U'z') == CharClass::other);
  std::remove(path.c_str());
  CHECK_THROWS(CharacterClassTable::load("does_not_exist.txt"));
}
