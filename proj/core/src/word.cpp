#include "thermoshift/word.hpp"

#include <algorithm>
#include <sstream>

#include "thermoshift/exact.hpp"

namespace thermoshift {

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Word prefix(const Word& w, size_t n) {
  n = std::min(n, w.size());
  return Word(w.begin(), w.begin() + n);
}

Word suffix(const Word& w, size_t n) {
  n = std::min(n, w.size());
  return Word(w.end() - n, w.end());
}

Word subword(const Word& w, size_t pos, size_t n) {
  return Word(w.begin() + pos, w.begin() + pos + n);
}

std::string word_str(const Word& w) {
  if (w.empty()) return "-";
  const bool compact = std::all_of(w.begin(), w.end(),
                                   [](Symbol s) { return s >= 0 && s < 10; });
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) os << '.';
    os << w[i];
  }
  return os.str();
}

Word parse_word(const std::string& text) {
  Word w;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    try {
      w.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw Error("bad symbol '" + tok + "' in word");
    }
  }
  return w;
}

}  // namespace thermoshift
