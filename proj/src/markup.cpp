#include "smtlab/markup.hpp"

#include <sstream>
#include <stdexcept>

namespace smtlab {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

FlatSentence markup_encode(const SubwordSentence& s, const FormatSpec& f) {
  for (const auto& word : s.words)
    for (const auto& tok : word)
      if (tok.find(f.marker) != std::string::npos)
        throw std::runtime_error("markup_encode: marker '" + f.marker + "' occurs in token '" + tok + "'");

  FlatSentence out;
  for (size_t wi = 0; wi < s.words.size(); ++wi) {
    const auto& word = s.words[wi];
    switch (f.kind) {
      case MarkupKind::boundary_marker: {
        const size_t marked = f.boundary_side == BoundarySide::last ? word.size() - 1 : 0;
        for (size_t ti = 0; ti < word.size(); ++ti)
          out.push_back(ti == marked ? word[ti] + f.marker : word[ti]);
        break;
      }
      case MarkupKind::internal_marker:
        for (size_t ti = 0; ti < word.size(); ++ti)
          out.push_back(ti + 1 < word.size() ? word[ti] + f.marker : word[ti]);
        break;
      case MarkupKind::space_marker:
        if (wi > 0) out.push_back(f.marker);
        for (const auto& tok : word) out.push_back(tok);
        break;
    }
  }
  return out;
}

MarkupDecodeResult markup_decode(const FlatSentence& tokens, const FormatSpec& f) {
  MarkupDecodeResult res;
  std::string current;
  bool open = false;

  auto flush = [&](bool expected) {
    if (!open) return;
    if (!expected) ++res.warnings;
    if (current.empty())
      ++res.warnings;
    else
      res.words.push_back(current);
    current.clear();
    open = false;
  };

  switch (f.kind) {
    case MarkupKind::space_marker:
      for (const auto& tok : tokens) {
        if (tok == f.marker) {
          if (!open) ++res.warnings;  // leading marker or two in a row
          flush(true);
        } else {
          current += tok;
          open = true;
        }
      }
      flush(true);
      break;

    case MarkupKind::boundary_marker:
      if (f.boundary_side == BoundarySide::last) {
        for (const auto& tok : tokens) {
          if (ends_with(tok, f.marker)) {
            current += tok.substr(0, tok.size() - f.marker.size());
            open = true;
            flush(true);
          } else {
            current += tok;
            open = true;
          }
        }
        flush(false);  // trailing unterminated word
      } else {
        // a token carrying the suffix marker opens a new word
        for (const auto& tok : tokens) {
          if (ends_with(tok, f.marker)) {
            flush(true);
            current = tok.substr(0, tok.size() - f.marker.size());
            open = true;
          } else {
            if (!open) ++res.warnings;  // stream did not begin with a marked token
            current += tok;
            open = true;
          }
        }
        flush(true);
      }
      break;

    case MarkupKind::internal_marker:
      for (const auto& tok : tokens) {
        if (ends_with(tok, f.marker)) {
          current += tok.substr(0, tok.size() - f.marker.size());
          open = true;
        } else {
          current += tok;
          open = true;
          flush(true);
        }
      }
      flush(false);  // last token was marked: word left unclosed
      break;
  }
  return res;
}

RoundtripResult roundtrip_check(const std::vector<SubwordSentence>& corpus, const FormatSpec& f) {
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto decoded = markup_decode(markup_encode(corpus[i], f), f);
    if (decoded.words != corpus[i].word_strings()) return {false, i};
  }
  return {true, std::nullopt};
}

std::string join_tokens(const FlatSentence& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

FlatSentence split_tokens(const std::string& line) {
  FlatSentence out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace smtlab
