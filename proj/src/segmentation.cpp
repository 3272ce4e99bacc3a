#include "smtlab/segmentation.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "smtlab/utf8.hpp"

namespace smtlab {

CharClass CharacterClassTable::classify(char32_t cp) const {
  if (vowels.count(cp)) return CharClass::vowel;
  if (consonants.count(cp)) return CharClass::consonant;
  if (dependent_signs.count(cp)) return CharClass::dependent;
  if (joiner && *joiner == cp) return CharClass::joiner;
  return CharClass::other;
}

CharacterClassTable CharacterClassTable::latin() {
  CharacterClassTable t;
  t.script_name = "latin";
  for (const char* v = "aeiouAEIOU"; *v; ++v) t.vowels.insert(static_cast<char32_t>(*v));
  for (char c = 'a'; c <= 'z'; ++c)
    if (!t.vowels.count(static_cast<char32_t>(c))) t.consonants.insert(static_cast<char32_t>(c));
  for (char c = 'A'; c <= 'Z'; ++c)
    if (!t.vowels.count(static_cast<char32_t>(c))) t.consonants.insert(static_cast<char32_t>(c));
  return t;
}

CharacterClassTable CharacterClassTable::devanagari() {
  CharacterClassTable t;
  t.script_name = "devanagari";
  for (char32_t cp = 0x0904; cp <= 0x0914; ++cp) t.vowels.insert(cp);  // independent vowels
  t.vowels.insert(0x0960);
  t.vowels.insert(0x0961);
  for (char32_t cp = 0x0915; cp <= 0x0939; ++cp) t.consonants.insert(cp);
  for (char32_t cp = 0x0958; cp <= 0x095F; ++cp) t.consonants.insert(cp);  // nukta forms
  for (char32_t cp = 0x0900; cp <= 0x0903; ++cp) t.dependent_signs.insert(cp);
  for (char32_t cp = 0x093A; cp <= 0x093C; ++cp) t.dependent_signs.insert(cp);
  for (char32_t cp = 0x093E; cp <= 0x094C; ++cp) t.dependent_signs.insert(cp);  // matras
  t.dependent_signs.insert(0x0962);
  t.dependent_signs.insert(0x0963);
  t.joiner = 0x094D;  // virama
  return t;
}

CharacterClassTable CharacterClassTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open class table: " + path);
  CharacterClassTable t;
  t.script_name = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("class table " + path + ":" + std::to_string(lineno) + ": missing tab");
    std::string cp_str = line.substr(0, tab);
    std::string cls = line.substr(tab + 1);
    while (!cls.empty() && (cls.back() == '\r' || cls.back() == ' ')) cls.pop_back();
    if (cp_str.size() < 3 || cp_str[0] != 'U' || cp_str[1] != '+')
      throw std::runtime_error("class table " + path + ":" + std::to_string(lineno) + ": bad code point " + cp_str);
    char32_t cp = static_cast<char32_t>(std::stoul(cp_str.substr(2), nullptr, 16));
    if (cls == "vowel") {
      t.vowels.insert(cp);
    } else if (cls == "consonant") {
      t.consonants.insert(cp);
    } else if (cls == "dependent") {
      t.dependent_signs.insert(cp);
    } else if (cls == "joiner") {
      t.joiner = cp;
    } else {
      throw std::runtime_error("class table " + path + ":" + std::to_string(lineno) + ": unknown class " + cls);
    }
  }
  return t;
}

SegmentationScheme SegmentationScheme::word() { return {SchemeKind::word, std::nullopt}; }

SegmentationScheme SegmentationScheme::character(std::optional<CharacterClassTable> t) {
  return {SchemeKind::character, std::move(t)};
}

SegmentationScheme SegmentationScheme::orthographic_syllable(CharacterClassTable t) {
  return {SchemeKind::orthographic_syllable, std::move(t)};
}

size_t SubwordSentence::subword_count() const {
  size_t n = 0;
  for (const auto& w : words) n += w.size();
  return n;
}

std::vector<std::string> SubwordSentence::word_strings() const {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    std::string s;
    for (const auto& t : w) s += t;
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

using utf8::CodePoint;

std::string slice(const std::string& word, const CodePoint& first, const CodePoint& last) {
  return word.substr(first.offset, last.offset + last.length - first.offset);
}

std::vector<std::string> segment_character(const std::string& word, const std::vector<CodePoint>& cps,
                                           const CharacterClassTable* table) {
  std::vector<std::string> tokens;
  for (const auto& cp : cps) {
    const CharClass cls = table ? table->classify(cp.value) : CharClass::other;
    const bool attach = table && !tokens.empty() &&
                        (cls == CharClass::dependent || cls == CharClass::joiner);
    if (attach)
      tokens.back() += word.substr(cp.offset, cp.length);
    else
      tokens.push_back(word.substr(cp.offset, cp.length));
  }
  return tokens;
}

// Greedy left-to-right scan emitting maximal C*V+ units. Dependent
// signs close a unit the way a vowel run does and always attach to the
// preceding unit; joiner-linked consonant clusters are never split;
// consonants left without a vowel become singleton units.
std::vector<std::string> segment_os(const std::string& word, const std::vector<CodePoint>& cps,
                                    const CharacterClassTable& table) {
  std::vector<std::string> units;
  const size_t n = cps.size();
  size_t i = 0;
  auto cls_at = [&](size_t k) { return table.classify(cps[k].value); };
  while (i < n) {
    const CharClass cls = cls_at(i);
    if (cls == CharClass::dependent || cls == CharClass::joiner) {
      const std::string piece = word.substr(cps[i].offset, cps[i].length);
      if (units.empty())
        units.push_back(piece);
      else
        units.back() += piece;
      ++i;
      continue;
    }
    if (cls == CharClass::other) {
      units.push_back(word.substr(cps[i].offset, cps[i].length));
      ++i;
      continue;
    }
    if (cls == CharClass::vowel) {
      const size_t start = i;
      while (i < n && cls_at(i) == CharClass::vowel) ++i;
      units.push_back(slice(word, cps[start], cps[i - 1]));
      continue;
    }
    // Consonant run: collect joiner-linked groups, then look for the
    // vowel (or dependent sign) that closes the unit.
    std::vector<std::pair<size_t, size_t>> groups;  // [first, last] code point indices
    while (i < n && cls_at(i) == CharClass::consonant) {
      const size_t start = i;
      ++i;
      while (i + 1 < n && cls_at(i) == CharClass::joiner && cls_at(i + 1) == CharClass::consonant) i += 2;
      if (i < n && cls_at(i) == CharClass::joiner) ++i;  // trailing virama stays with its cluster
      groups.emplace_back(start, i - 1);
    }
    if (i < n && cls_at(i) == CharClass::vowel) {
      while (i < n && cls_at(i) == CharClass::vowel) ++i;
      units.push_back(slice(word, cps[groups.front().first], cps[i - 1]));
    } else if (i < n && cls_at(i) == CharClass::dependent) {
      // The dependent sign plays the vowel role; it is attached by the
      // dependent branch on the next iteration.
      units.push_back(slice(word, cps[groups.front().first], cps[groups.back().second]));
    } else {
      for (const auto& [a, b] : groups) units.push_back(slice(word, cps[a], cps[b]));
    }
  }
  return units;
}

}  // namespace

std::vector<std::string> segment_word(const std::string& word, const SegmentationScheme& scheme) {
  if (word.empty()) throw std::invalid_argument("segment_word: empty word");
  for (char c : word)
    if (std::isspace(static_cast<unsigned char>(c)))
      throw std::invalid_argument("segment_word: word contains whitespace");
  switch (scheme.kind) {
    case SchemeKind::word:
      return {word};
    case SchemeKind::character: {
      const auto cps = utf8::decode_indexed(word);
      return segment_character(word, cps, scheme.classes ? &*scheme.classes : nullptr);
    }
    case SchemeKind::orthographic_syllable: {
      if (!scheme.classes || scheme.classes->vowels.empty())
        throw std::invalid_argument("orthographic_syllable scheme requires a class table with vowels");
      const auto cps = utf8::decode_indexed(word);
      return segment_os(word, cps, *scheme.classes);
    }
  }
  throw std::logic_error("unreachable");
}

SubwordSentence segment_sentence(const std::string& sentence, const SegmentationScheme& scheme) {
  SubwordSentence out;
  std::istringstream in(sentence);
  std::string word;
  while (in >> word) out.words.push_back(segment_word(word, scheme));
  return out;
}

std::string scheme_label(const SegmentationScheme& scheme) {
  switch (scheme.kind) {
    case SchemeKind::word:
      return "word";
    case SchemeKind::character:
      return "character";
    case SchemeKind::orthographic_syllable:
      return "os";
  }
  return "?";
}

std::vector<SchemeLengthStats> corpus_length_stats(const std::vector<std::string>& corpus,
                                                   const std::vector<SegmentationScheme>& schemes) {
  if (corpus.empty()) throw std::invalid_argument("corpus_length_stats: empty corpus");
  double word_mean = 0.0;
  {
    size_t total = 0;
    for (const auto& s : corpus) total += segment_sentence(s, SegmentationScheme::word()).subword_count();
    word_mean = static_cast<double>(total) / corpus.size();
  }
  std::vector<SchemeLengthStats> out;
  for (const auto& scheme : schemes) {
    size_t total = 0;
    for (const auto& s : corpus) total += segment_sentence(s, scheme).subword_count();
    SchemeLengthStats st;
    st.label = scheme_label(scheme);
    st.mean_tokens = static_cast<double>(total) / corpus.size();
    st.ratio_vs_word = word_mean > 0 ? st.mean_tokens / word_mean : 0.0;
    out.push_back(st);
  }
  return out;
}

}  // namespace smtlab
