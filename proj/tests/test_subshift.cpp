#include <doctest.h>

#include <algorithm>
#include <memory>

#include "thermoshift/subshift.hpp"

using namespace thermoshift;

namespace {

Subshift golden_mean() { return Subshift::from_matrix({{1, 1}, {1, 0}}); }

Subshift full_shift(int k) { return Subshift::from_forbidden(k, {}); }

// the four-point example: orbit of (012)^inf plus the fixed point 1^inf
Subshift four_point() {
  return Subshift::from_forbidden(
      3, {{0, 0}, {0, 2}, {1, 0}, {2, 1}, {2, 2}, {0, 1, 1}, {1, 1, 2}});
}

}  // namespace

TEST_CASE("full shift counts and language") {
  const Subshift x = full_shift(2);
  CHECK(x.alphabet_size() == 2);
  CHECK(x.memory() == 1);
  CHECK(x.irreducible());
  for (int n = 1; n <= 10; ++n)
    CHECK(x.word_count(n) == BigInt(1) << n);
  const auto b3 = x.words(3);
  CHECK(b3.size() == 8);
  CHECK(b3.front() == Word{0, 0, 0});
  CHECK(b3.back() == Word{1, 1, 1});
  CHECK(std::is_sorted(b3.begin(), b3.end()));
  CHECK(x.specification_number() == 0);
}

TEST_CASE("golden mean language is Fibonacci") {
  const Subshift x = golden_mean();
  CHECK(x.memory() == 1);
  CHECK(x.irreducible());
  CHECK_FALSE(x.allowable({1, 1}));
  CHECK(x.allowable({1, 0, 1}));
  // |B_n| = F_{n+2} with F_1 = F_2 = 1
  BigInt a = 1, b = 1;  // F_1, F_2
  for (int n = 1; n <= 25; ++n) {
    const BigInt f = a + b;  // F_{n+2}
    CHECK(x.word_count(n) == f);
    a = b;
    b = f;
  }
  CHECK(x.words(4).size() == 8);
  // 11 cannot be glued directly but always with one symbol in between
  CHECK(x.specification_number() == 1);
}

TEST_CASE("words of length zero is the empty word") {
  const Subshift x = golden_mean();
  const auto b0 = x.words(0);
  REQUIRE(b0.size() == 1);
  CHECK(b0.front().empty());
  CHECK(x.allowable({}));
}

TEST_CASE("four point subshift") {
  const Subshift x = four_point();
  CHECK(x.memory() == 2);
  const auto b2 = x.words(2);
  const std::vector<Word> expect = {{0, 1}, {1, 1}, {1, 2}, {2, 0}};
  CHECK(b2 == expect);
  for (int n = 2; n <= 9; ++n) CHECK(x.word_count(n) == 4);
  CHECK_FALSE(x.irreducible());
  std::string reason;
  CHECK_FALSE(x.specification_number(32, &reason).has_value());
  CHECK_FALSE(reason.empty());
}

TEST_CASE("prefix closure and follower counting") {
  const Subshift shifts[] = {golden_mean(), four_point(), full_shift(3)};
  for (const Subshift& x : shifts) {
    const auto b4 = x.words(4);
    const auto b5 = x.words(5);
    for (const Word& w : b5)
      CHECK(std::binary_search(b4.begin(), b4.end(), prefix(w, 4)));
    size_t total = 0;
    for (const Word& u : b4) {
      const auto f1 = x.followers(u, 1);
      for (const Word& v : f1) CHECK(x.allowable(concat(u, v)));
      total += f1.size();
    }
    CHECK(total == b5.size());
  }
}

TEST_CASE("predecessors mirror followers") {
  const Subshift x = golden_mean();
  for (const Word& u : x.words(3)) {
    const auto p2 = x.followers(u, 2, Direction::Predecessor);
    for (const Word& v : p2) CHECK(x.allowable(concat(v, u)));
    // count against brute force over B_5
    size_t brute = 0;
    for (const Word& w : x.words(5))
      if (suffix(w, 3) == u) ++brute;
    CHECK(p2.size() == brute);
  }
}

TEST_CASE("lex least extension stays allowable") {
  const Subshift x = four_point();
  for (const Word& u : x.words(3)) {
    const Word e = x.lex_least_extension(u, 5);
    CHECK(e.size() == 8);
    CHECK(prefix(e, 3) == u);
    CHECK(x.allowable(e));
  }
}

TEST_CASE("enumeration cap throws") {
  const Subshift x = full_shift(2);
  CHECK_THROWS_AS(x.words(10, 5), CapError);
  CHECK_NOTHROW(x.words(3, 8));
}

TEST_CASE("non extendable constraints are pruned") {
  // after symbol 0 nothing can follow, so 0 disappears from the language
  const Subshift x = Subshift::from_forbidden(2, {{0, 0}, {0, 1}});
  CHECK(x.had_nonextendable_words());
  CHECK_FALSE(x.allowable({0}));
  CHECK(x.word_count(4) == 1);
}

TEST_CASE("state graph agrees with the language") {
  const Subshift x = four_point();
  for (const Word& u : x.words(4)) {
    const int s = x.state_of(u);
    REQUIRE(s >= 0);
    for (Symbol a = 0; a < x.alphabet_size(); ++a) {
      Word ua = u;
      ua.push_back(a);
      CHECK((x.next_state(s, a) >= 0) == x.allowable(ua));
    }
  }
}
