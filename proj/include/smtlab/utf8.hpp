#ifndef SMTLAB_UTF8_HPP
#define SMTLAB_UTF8_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace smtlab::utf8 {

// Decodes a UTF-8 string into code points. Invalid bytes are passed
// through as single code points so that re-encoding reproduces the
// input byte-for-byte.
std::vector<char32_t> decode(const std::string& s);

std::string encode(char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

struct CodePoint {
  char32_t value;
  size_t offset;  // byte offset into the source string
  size_t length;  // byte length
};

// Like decode() but keeps byte positions, so callers can slice the
// original string and keep concatenation bit-exact even on malformed
// input.
std::vector<CodePoint> decode_indexed(const std::string& s);

}  // namespace smtlab::utf8

#endif
