#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thermoshift/exact.hpp"
#include "thermoshift/word.hpp"

namespace thermoshift {

struct CapError : Error {
  using Error::Error;
};

enum class Direction { Follower, Predecessor };

/// One-sided subshift of finite type.  Construction recodes the forbidden
/// words into a memory-m transition graph whose states are the allowable
/// m-blocks, then prunes states with no outgoing edge until every remaining
/// block extends to an infinite sequence.  The language B_n(X) is the set of
/// words occurring in points of X.
class Subshift {
 public:
  static Subshift from_forbidden(int alphabet_size, std::vector<Word> forbidden);
  /// Memory-1 shift from a 0/1 transition matrix (rows = current symbol).
  static Subshift from_matrix(const std::vector<std::vector<int>>& adjacency);

  int alphabet_size() const { return alphabet_size_; }
  int memory() const { return memory_; }
  bool empty() const { return states_.empty(); }
  const std::vector<Word>& forbidden_words() const { return forbidden_; }

  /// True iff some word of the raw constraint set was pruned as
  /// non-right-extendable.
  bool had_nonextendable_words() const { return pruned_; }

  bool allowable(const Word& w) const;

  /// B_n(X) in lexicographic order.  Throws CapError if |B_n| would exceed cap.
  std::vector<Word> words(int n, size_t cap = kDefaultCap) const;
  BigInt word_count(int n) const;

  /// F_n(u) (direction Follower) or P_n(u) (Predecessor).
  std::vector<Word> followers(const Word& u, int n,
                              Direction dir = Direction::Follower,
                              size_t cap = kDefaultCap) const;

  bool irreducible() const;

  /// Smallest k >= 0 such that every pair of allowable words can be joined
  /// by some gap word of length exactly k.  Absent (with reason) when the
  /// shift is not irreducible or no k <= cap works.
  std::optional<int> specification_number(int cap = 32,
                                          std::string* reason = nullptr) const;

  /// Appends `extra` symbols along the lexicographically least allowed path.
  Word lex_least_extension(const Word& u, int extra) const;

  // --- recoded graph access (transfer matrices, fiber automata) ---
  const std::vector<Word>& states() const { return states_; }
  /// next(s, a) = target state index or -1.
  int next_state(int state, Symbol a) const { return next_[state][a]; }
  /// State index of the final m-block of w (|w| >= memory, w allowable).
  int state_of(const Word& w) const;

  static constexpr size_t kDefaultCap = 2'000'000;

 private:
  Subshift() = default;
  void ensure_nonempty() const;
  bool windows_ok(const Word& w) const;
  bool windows_ok_at(const Word& w, size_t end_pos) const;

  int alphabet_size_ = 0;
  int memory_ = 1;
  bool pruned_ = false;
  std::vector<Word> forbidden_;
  std::vector<Word> states_;               // lex sorted essential m-blocks
  std::vector<std::vector<int>> next_;     // [state][symbol] -> state or -1
};

}  // namespace thermoshift
