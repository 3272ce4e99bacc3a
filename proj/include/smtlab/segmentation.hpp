#ifndef SMTLAB_SEGMENTATION_HPP
#define SMTLAB_SEGMENTATION_HPP

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace smtlab {

enum class CharClass { vowel, consonant, dependent, joiner, other };

// Per-script classification of code points used by the character and
// orthographic-syllable segmenters. Dependent signs (vowel signs,
// anusvara, visarga, candrabindu) attach to the preceding unit; the
// joiner (virama) glues consonant clusters.
struct CharacterClassTable {
  std::string script_name;
  std::unordered_set<char32_t> vowels;
  std::unordered_set<char32_t> consonants;
  std::unordered_set<char32_t> dependent_signs;
  std::optional<char32_t> joiner;

  CharClass classify(char32_t cp) const;

  static CharacterClassTable latin();
  static CharacterClassTable devanagari();
  // One line per code point: `U+XXXX<TAB>class`, class in
  // {vowel, consonant, dependent, joiner}; `#` starts a comment.
  static CharacterClassTable load(const std::string& path);
};

enum class SchemeKind { word, character, orthographic_syllable };

struct SegmentationScheme {
  SchemeKind kind = SchemeKind::word;
  std::optional<CharacterClassTable> classes;

  static SegmentationScheme word();
  static SegmentationScheme character(std::optional<CharacterClassTable> t = std::nullopt);
  static SegmentationScheme orthographic_syllable(CharacterClassTable t);
};

// A sentence as words, each word an ordered list of subword tokens.
// Concatenating a word's tokens reproduces the word exactly.
struct SubwordSentence {
  std::vector<std::vector<std::string>> words;

  size_t subword_count() const;
  std::vector<std::string> word_strings() const;
};

std::vector<std::string> segment_word(const std::string& word, const SegmentationScheme& scheme);
SubwordSentence segment_sentence(const std::string& sentence, const SegmentationScheme& scheme);

struct SchemeLengthStats {
  std::string label;
  double mean_tokens = 0.0;
  double ratio_vs_word = 0.0;
};

std::vector<SchemeLengthStats> corpus_length_stats(const std::vector<std::string>& corpus,
                                                   const std::vector<SegmentationScheme>& schemes);

std::string scheme_label(const SegmentationScheme& scheme);

}  // namespace smtlab

#endif
