#pragma once

#include <string>
#include <vector>

namespace thermoshift {

using Symbol = int;

/// A finite symbol string.  The empty word is {}.
using Word = std::vector<Symbol>;

Word concat(const Word& a, const Word& b);
Word prefix(const Word& w, size_t n);
Word suffix(const Word& w, size_t n);
Word subword(const Word& w, size_t pos, size_t n);

/// "123" for single-digit alphabets, "1.2.12" otherwise, "-" for the
/// empty word.
std::string word_str(const Word& w);

/// Parses space-separated symbol indices.
Word parse_word(const std::string& text);

struct WordHash {
  size_t operator()(const Word& w) const noexcept {
    size_t h = 1469598103934665603ull;
    for (Symbol s : w) {
      h ^= static_cast<size_t>(s) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace thermoshift
