#ifndef SMTLAB_MARKUP_HPP
#define SMTLAB_MARKUP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "smtlab/segmentation.hpp"

namespace smtlab {

enum class MarkupKind { boundary_marker, internal_marker, space_marker };
enum class BoundarySide { first, last };

struct FormatSpec {
  MarkupKind kind = MarkupKind::space_marker;
  std::string marker = "_";  // single code point
  BoundarySide boundary_side = BoundarySide::last;
};

// The flat space-separated token stream fed to the MT pipeline.
using FlatSentence = std::vector<std::string>;

// Throws std::runtime_error naming the offending token if the marker
// occurs inside a subword.
FlatSentence markup_encode(const SubwordSentence& s, const FormatSpec& f);

struct MarkupDecodeResult {
  std::vector<std::string> words;
  int warnings = 0;  // malformed-stream repairs (decode is best-effort)
};

MarkupDecodeResult markup_decode(const FlatSentence& tokens, const FormatSpec& f);

struct RoundtripResult {
  bool ok = true;
  std::optional<size_t> first_failure;  // index into the corpus
};

RoundtripResult roundtrip_check(const std::vector<SubwordSentence>& corpus, const FormatSpec& f);

std::string join_tokens(const FlatSentence& tokens);
FlatSentence split_tokens(const std::string& line);

}  // namespace smtlab

#endif
