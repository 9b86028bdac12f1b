#include "thermoshift/subshift.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>

namespace thermoshift {

namespace {

size_t pow_checked(int base, int exp, size_t limit) {
  size_t v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= static_cast<size_t>(base);
    if (v > limit) throw CapError("state space too large");
  }
  return v;
}

}  // namespace

Subshift Subshift::from_forbidden(int alphabet_size, std::vector<Word> forbidden) {
  if (alphabet_size <= 0) throw Error("alphabet size must be positive");
  size_t max_len = 1;
  for (const Word& f : forbidden) {
    if (f.empty()) throw Error("empty forbidden word");
    for (Symbol s : f)
      if (s < 0 || s >= alphabet_size) throw Error("forbidden word symbol out of range");
    max_len = std::max(max_len, f.size());
  }

  Subshift x;
  x.alphabet_size_ = alphabet_size;
  x.memory_ = std::max<int>(1, static_cast<int>(max_len) - 1);
  x.forbidden_ = std::move(forbidden);

  // all window-valid m-blocks, in lex order
  const int m = x.memory_;
  pow_checked(alphabet_size, m, 4'000'000);
  std::vector<Word> blocks;
  Word cur;
  const std::function<void()> gen = [&] {
    if (static_cast<int>(cur.size()) == m) {
      blocks.push_back(cur);
      return;
    }
    for (Symbol a = 0; a < alphabet_size; ++a) {
      cur.push_back(a);
      if (x.windows_ok(cur)) gen();
      cur.pop_back();
    }
  };
  gen();

  // transitions between blocks
  std::vector<std::vector<int>> next(blocks.size(), std::vector<int>(alphabet_size, -1));
  const auto index_of = [&](const Word& b) {
    const auto it = std::lower_bound(blocks.begin(), blocks.end(), b);
    return (it != blocks.end() && *it == b) ? static_cast<int>(it - blocks.begin()) : -1;
  };
  for (size_t i = 0; i < blocks.size(); ++i) {
    for (Symbol a = 0; a < alphabet_size; ++a) {
      Word w = blocks[i];
      w.push_back(a);
      if (!x.windows_ok(w)) continue;
      next[i][a] = index_of(suffix(w, m));
    }
  }

  // prune blocks that cannot be extended to an infinite sequence
  std::vector<bool> alive(blocks.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < blocks.size(); ++i) {
      if (!alive[i]) continue;
      bool has_out = false;
      for (Symbol a = 0; a < alphabet_size; ++a) {
        int t = next[i][a];
        if (t >= 0 && alive[t]) has_out = true;
      }
      if (!has_out) {
        alive[i] = false;
        changed = true;
        x.pruned_ = true;
      }
    }
  }

  std::vector<int> remap(blocks.size(), -1);
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (alive[i]) {
      remap[i] = static_cast<int>(x.states_.size());
      x.states_.push_back(blocks[i]);
    }
  }
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (!alive[i]) continue;
    std::vector<int> row(alphabet_size, -1);
    for (Symbol a = 0; a < alphabet_size; ++a) {
      const int t = next[i][a];
      row[a] = (t >= 0 && alive[t]) ? remap[t] : -1;
    }
    x.next_.push_back(std::move(row));
  }
  return x;
}

Subshift Subshift::from_matrix(const std::vector<std::vector<int>>& adjacency) {
  const int k = static_cast<int>(adjacency.size());
  std::vector<Word> forbidden;
  for (int a = 0; a < k; ++a) {
    if (static_cast<int>(adjacency[a].size()) != k) throw Error("transition matrix not square");
    for (int b = 0; b < k; ++b)
      if (adjacency[a][b] == 0) forbidden.push_back({a, b});
  }
  return from_forbidden(k, std::move(forbidden));
}

void Subshift::ensure_nonempty() const {
  if (empty()) throw Error("empty subshift");
}

bool Subshift::windows_ok(const Word& w) const {
  for (const Word& f : forbidden_) {
    if (f.size() > w.size()) continue;
    for (size_t p = 0; p + f.size() <= w.size(); ++p)
      if (std::equal(f.begin(), f.end(), w.begin() + p)) return false;
  }
  return true;
}

bool Subshift::windows_ok_at(const Word& w, size_t end_pos) const {
  for (const Word& f : forbidden_) {
    if (f.size() > end_pos + 1) continue;
    const size_t start = end_pos + 1 - f.size();
    if (std::equal(f.begin(), f.end(), w.begin() + start)) return false;
  }
  return true;
}

int Subshift::state_of(const Word& w) const {
  const Word block = suffix(w, memory_);
  const auto it = std::lower_bound(states_.begin(), states_.end(), block);
  if (it == states_.end() || *it != block) return -1;
  return static_cast<int>(it - states_.begin());
}

bool Subshift::allowable(const Word& w) const {
  if (empty()) return false;
  if (w.empty()) return true;
  for (Symbol s : w)
    if (s < 0 || s >= alphabet_size_) return false;
  const int m = memory_;
  if (static_cast<int>(w.size()) < m) {
    // prefix of some essential block?
    const auto it = std::lower_bound(states_.begin(), states_.end(), w);
    return it != states_.end() &&
           std::equal(w.begin(), w.end(), it->begin());
  }
  if (!windows_ok(w)) return false;
  return state_of(w) >= 0;
}

BigInt Subshift::word_count(int n) const {
  if (n < 0) throw Error("negative word length");
  if (n == 0) return empty() ? BigInt(0) : BigInt(1);
  ensure_nonempty();
  const int m = memory_;
  if (n < m) {
    std::set<Word> seen;
    for (const Word& s : states_) seen.insert(prefix(s, n));
    return BigInt(seen.size());
  }
  std::vector<BigInt> v(states_.size(), 1);
  for (int step = 0; step < n - m; ++step) {
    std::vector<BigInt> nv(states_.size(), 0);
    for (size_t s = 0; s < states_.size(); ++s)
      for (Symbol a = 0; a < alphabet_size_; ++a)
        if (next_[s][a] >= 0) nv[s] += v[next_[s][a]];
    v = std::move(nv);
  }
  return std::accumulate(v.begin(), v.end(), BigInt(0));
}

std::vector<Word> Subshift::words(int n, size_t cap) const {
  if (n < 0) throw Error("negative word length");
  ensure_nonempty();
  if (n == 0) return {Word{}};
  if (word_count(n) > cap)
    throw CapError("B_" + std::to_string(n) + " exceeds the word cap");
  const int m = memory_;
  std::vector<Word> out;
  if (n < m) {
    std::set<Word> seen;
    for (const Word& s : states_) seen.insert(prefix(s, n));
    out.assign(seen.begin(), seen.end());
    return out;
  }
  Word cur;
  const std::function<void(int, int)> dfs = [&](int state, int remaining) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      const int t = next_[state][a];
      if (t < 0) continue;
      cur.push_back(a);
      dfs(t, remaining - 1);
      cur.pop_back();
    }
  };
  for (size_t s = 0; s < states_.size(); ++s) {
    cur = states_[s];
    dfs(static_cast<int>(s), n - m);
  }
  return out;
}

std::vector<Word> Subshift::followers(const Word& u, int n, Direction dir,
                                      size_t cap) const {
  ensure_nonempty();
  if (n < 1) throw Error("follower length must be >= 1");
  if (!allowable(u)) throw Error("word " + word_str(u) + " is not allowable");

  if (dir == Direction::Predecessor) {
    const Word ctx = static_cast<int>(u.size()) >= memory_ ? prefix(u, memory_) : u;
    std::vector<Word> out;
    for (const Word& v : words(n, cap))
      if (allowable(concat(v, ctx))) out.push_back(v);
    return out;
  }

  const int m = memory_;
  const Word ctx = suffix(u, m);
  std::vector<Word> out;
  Word cur;
  const std::function<void(int, int)> dfs = [&](int state, int remaining) {
    if (remaining == 0) {
      out.push_back(cur);
      if (out.size() > cap) throw CapError("follower set exceeds the word cap");
      return;
    }
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      const int t = next_[state][a];
      if (t < 0) continue;
      cur.push_back(a);
      dfs(t, remaining - 1);
      cur.pop_back();
    }
  };
  if (static_cast<int>(ctx.size()) == m) {
    dfs(state_of(ctx), n);
    return out;
  }
  // u shorter than the memory: branch over the essential blocks extending u
  const int fill = m - static_cast<int>(ctx.size());
  if (n <= fill) {
    std::set<Word> seen;
    for (const Word& s : states_)
      if (std::equal(ctx.begin(), ctx.end(), s.begin()))
        seen.insert(subword(s, ctx.size(), n));
    return {seen.begin(), seen.end()};
  }
  for (size_t si = 0; si < states_.size(); ++si) {
    const Word& s = states_[si];
    if (!std::equal(ctx.begin(), ctx.end(), s.begin())) continue;
    cur = subword(s, ctx.size(), fill);
    dfs(static_cast<int>(si), n - fill);
    cur.clear();
  }
  return out;
}

bool Subshift::irreducible() const {
  if (empty()) return false;
  const size_t ns = states_.size();
  std::vector<std::vector<int>> rev(ns);
  for (size_t s = 0; s < ns; ++s)
    for (Symbol a = 0; a < alphabet_size_; ++a)
      if (next_[s][a] >= 0) rev[next_[s][a]].push_back(static_cast<int>(s));
  const auto reaches_all = [&](auto&& neighbors) {
    std::vector<bool> seen(ns, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    size_t cnt = 1;
    while (!q.empty()) {
      const int s = q.front();
      q.pop();
      for (int t : neighbors(s)) {
        if (!seen[t]) {
          seen[t] = true;
          ++cnt;
          q.push(t);
        }
      }
    }
    return cnt == ns;
  };
  const auto fwd = [&](int s) {
    std::vector<int> ts;
    for (Symbol a = 0; a < alphabet_size_; ++a)
      if (next_[s][a] >= 0) ts.push_back(next_[s][a]);
    return ts;
  };
  const auto bwd = [&](int s) { return rev[s]; };
  return reaches_all(fwd) && reaches_all(bwd);
}

std::optional<int> Subshift::specification_number(int cap, std::string* reason) const {
  ensure_nonempty();
  if (!irreducible()) {
    if (reason) *reason = "shift is not irreducible";
    return std::nullopt;
  }
  // aperiodicity precheck: gcd of cycle length differences via BFS levels
  {
    std::vector<int> level(states_.size(), -1);
    std::queue<int> q;
    q.push(0);
    level[0] = 0;
    int g = 0;
    while (!q.empty()) {
      const int s = q.front();
      q.pop();
      for (Symbol a = 0; a < alphabet_size_; ++a) {
        const int t = next_[s][a];
        if (t < 0) continue;
        if (level[t] < 0) {
          level[t] = level[s] + 1;
          q.push(t);
        } else {
          g = std::gcd(g, level[s] + 1 - level[t]);
        }
      }
    }
    if (g != 1) {
      if (reason) *reason = "transition graph is periodic";
      return std::nullopt;
    }
  }

  // words up to the memory length; longer words reduce to their boundary blocks
  std::vector<Word> test_words;
  for (int l = 1; l <= memory_; ++l) {
    for (const Word& w : words(l)) test_words.push_back(w);
  }
  for (int k = 0; k <= cap; ++k) {
    std::vector<Word> gaps;
    try {
      gaps = words(k);
    } catch (const CapError&) {
      if (reason) *reason = "gap enumeration exceeded the word cap";
      return std::nullopt;
    }
    bool ok = true;
    for (const Word& u : test_words) {
      for (const Word& v : test_words) {
        bool joined = false;
        for (const Word& w : gaps) {
          if (allowable(concat(concat(u, w), v))) {
            joined = true;
            break;
          }
        }
        if (!joined) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return k;
  }
  if (reason) *reason = "no specification number <= " + std::to_string(cap);
  return std::nullopt;
}

Word Subshift::lex_least_extension(const Word& u, int extra) const {
  ensure_nonempty();
  if (!allowable(u)) throw Error("word " + word_str(u) + " is not allowable");
  Word w = u;
  for (int i = 0; i < extra; ++i) {
    if (static_cast<int>(w.size()) < memory_) {
      const auto it = std::lower_bound(states_.begin(), states_.end(), w,
                                       [&](const Word& s, const Word& p) {
                                         return prefix(s, p.size()) < p;
                                       });
      w.push_back((*it)[w.size()]);
      continue;
    }
    const int s = state_of(w);
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      if (next_[s][a] >= 0) {
        w.push_back(a);
        break;
      }
    }
  }
  return w;
}

}  // namespace thermoshift
