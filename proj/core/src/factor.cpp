#include "thermoshift/factor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "thermoshift/balance.hpp"

namespace thermoshift {

FactorMap::FactorMap(std::shared_ptr<const Subshift> source,
                     std::shared_ptr<const Subshift> target,
                     std::vector<Symbol> symbol_map, int verify_depth,
                     size_t cap)
    : src_(std::move(source)), tgt_(std::move(target)),
      map_(std::move(symbol_map)) {
  if (static_cast<int>(map_.size()) != src_->alphabet_size())
    throw Error("factor map must cover every source symbol");
  for (Symbol t : map_)
    if (t < 0 || t >= tgt_->alphabet_size())
      throw Error("factor map hits a symbol outside the target alphabet");
  for (int n = 1; n <= verify_depth; ++n) {
    std::vector<Word> ws;
    try {
      ws = src_->words(n, cap);
    } catch (const CapError&) {
      break;
    }
    for (const Word& u : ws)
      if (!tgt_->allowable(apply(u)))
        throw Error("image of " + word_str(u) + " leaves the target language");
    verified_depth_ = n;
  }
  for (const Word& y : tgt_->words(1))
    if (!in_image(y))
      throw Error("target symbol " + word_str(y) + " is not attained");
  for (int n = 1; n <= verified_depth_; ++n) {
    bool onto = true;
    std::vector<Word> ys;
    try {
      ys = tgt_->words(n, cap);
    } catch (const CapError&) {
      break;
    }
    for (const Word& y : ys)
      if (!in_image(y)) {
        onto = false;
        break;
      }
    if (!onto) break;
    surjective_depth_ = n;
  }
}

Word FactorMap::apply(const Word& u) const {
  Word y;
  y.reserve(u.size());
  for (Symbol a : u) {
    if (a < 0 || a >= src_->alphabet_size())
      throw Error("symbol out of the source alphabet");
    y.push_back(map_[a]);
  }
  return y;
}

BigInt FactorMap::preimage_count(const Word& y) const {
  const int n = static_cast<int>(y.size());
  if (n == 0) return 1;
  if (!tgt_->allowable(y)) throw Error("word " + word_str(y) + " not allowable in the target");
  const int m = src_->memory();
  if (n < m) {
    BigInt c = 0;
    for (const Word& u : src_->words(n))
      if (apply(u) == y) ++c;
    return c;
  }
  const auto& states = src_->states();
  std::vector<BigInt> cnt(states.size(), 0);
  for (size_t s = 0; s < states.size(); ++s)
    if (apply(states[s]) == prefix(y, m)) cnt[s] = 1;
  for (int i = m; i < n; ++i) {
    std::vector<BigInt> next(states.size(), 0);
    for (size_t s = 0; s < states.size(); ++s) {
      if (cnt[s] == 0) continue;
      for (Symbol a = 0; a < src_->alphabet_size(); ++a) {
        if (map_[a] != y[i]) continue;
        const int t = src_->next_state(static_cast<int>(s), a);
        if (t >= 0) next[t] += cnt[s];
      }
    }
    cnt = std::move(next);
  }
  BigInt total = 0;
  for (const BigInt& c : cnt) total += c;
  return total;
}

std::vector<Word> FactorMap::fiber(const Word& y, size_t cap) const {
  const int n = static_cast<int>(y.size());
  std::vector<Word> out;
  if (n == 0) return {Word{}};
  const int m = src_->memory();
  if (n < m) {
    for (const Word& u : src_->words(n, cap))
      if (apply(u) == y) out.push_back(u);
    return out;
  }
  const auto& states = src_->states();
  Word cur;
  const std::function<void(int, int)> dfs = [&](int state, int i) {
    if (i == n) {
      out.push_back(cur);
      if (out.size() > cap) throw CapError("fiber exceeds the word cap");
      return;
    }
    for (Symbol a = 0; a < src_->alphabet_size(); ++a) {
      if (map_[a] != y[i]) continue;
      const int t = src_->next_state(state, a);
      if (t < 0) continue;
      cur.push_back(a);
      dfs(t, i + 1);
      cur.pop_back();
    }
  };
  for (size_t s = 0; s < states.size(); ++s) {
    if (apply(states[s]) != prefix(y, m)) continue;
    cur = states[s];
    dfs(static_cast<int>(s), m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string FactorMap::describe() const {
  std::ostringstream os;
  os << "factor(";
  for (size_t a = 0; a < map_.size(); ++a)
    os << (a ? "," : "") << a << ">" << map_[a];
  os << ")";
  return os.str();
}

// ----------------------------------------------------------------- relative

RelativePotential::RelativePotential(std::shared_ptr<const FactorMap> map,
                                     std::shared_ptr<const Potential> g)
    : Potential(map->source_ptr()), map_(std::move(map)), g_(std::move(g)) {
  if (g_->shift_ptr().get() != map_->target_ptr().get())
    throw Error("target potential lives on a different shift than the map");
}

Eval RelativePotential::eval(const Word& u) const {
  const Word y = map_->apply(u);
  const Eval ge = g_->eval(y);
  const BigInt phi = map_->preimage_count(y);
  const Rational phi_q(phi);
  Eval e;
  e.w = ge.w / Weight::exact(ExactNum(phi_q));
  e.rep = ge.rep - log_rational(phi_q);
  return e;
}

std::optional<Weight> RelativePotential::partition_sum(int n) const {
  // summing g/phi over each fiber collapses to summing g over the image;
  // with verified surjectivity that is the target partition sum
  if (n <= map_->surjective_depth()) return g_->partition_sum(n);
  return std::nullopt;
}

std::string RelativePotential::describe() const {
  return "relative(" + map_->describe() + ", " + g_->describe() + ")";
}

// -------------------------------------------------------------- pushforward

PushforwardPotential::PushforwardPotential(std::shared_ptr<const FactorMap> map,
                                           std::shared_ptr<const Potential> f,
                                           size_t cap)
    : Potential(map->target_ptr()), map_(std::move(map)), f_(std::move(f)),
      cap_(cap) {
  if (f_->shift_ptr().get() != map_->source_ptr().get())
    throw Error("source potential lives on a different shift than the map");
}

Eval PushforwardPotential::eval(const Word& y) const {
  const auto fib = map_->fiber(y, cap_);
  if (fib.empty())
    throw Error("target word " + word_str(y) + " is outside the image");
  Eval e;
  e.w = Weight::zero();
  e.rep = kNegInf;
  for (const Word& u : fib) {
    const Eval fe = f_->eval(u);
    e.w += fe.w;
    e.rep = log_sum_exp(e.rep, fe.rep);
  }
  return e;
}

std::optional<Weight> PushforwardPotential::partition_sum(int n) const {
  // the image sums regroup the source partition sum fiber by fiber
  if (auto z = f_->partition_sum(n)) return z;
  try {
    Weight z = Weight::zero();
    for (const Word& u : map_->source().words(n, cap_)) z += f_->eval(u).w;
    return z;
  } catch (const CapError&) {
    return std::nullopt;
  }
}

std::string PushforwardPotential::describe() const {
  return "pushforward(" + map_->describe() + ", " + f_->describe() + ")";
}

// ------------------------------------------------------------------- checks

RelativePressureReport relative_pressure_check(
    std::shared_ptr<const FactorMap> map, std::shared_ptr<const Potential> g,
    int max_n, size_t cap) {
  RelativePressureReport r;
  std::string reason;
  const auto k = map->source().specification_number(16, &reason);
  if (!k)
    throw Error("relative pressure check needs source specification: " + reason);
  r.spec_k = *k;
  const auto f = std::make_shared<RelativePotential>(map, g);
  const int cert_range = std::min(3, max_n / 2 > 0 ? max_n / 2 : 1);
  const auto [f_sub, f_sup] = structure_check(*f, cert_range, cert_range, cap);
  const auto [g_sub, g_sup] = structure_check(*g, cert_range, cert_range, cap);
  r.f_bracket = pressure_bracket(*f, max_n, &f_sub, &f_sup, cap);
  r.g_bracket = pressure_bracket(*g, max_n, &g_sub, &g_sup, cap);
  r.overlap = r.f_bracket.lower <= r.g_bracket.upper &&
              r.g_bracket.lower <= r.f_bracket.upper;
  r.midpoint_gap = std::fabs((r.f_bracket.lower + r.f_bracket.upper) / 2 -
                             (r.g_bracket.lower + r.g_bracket.upper) / 2);
  std::ostringstream os;
  os << "specification number " << *k << "; surjectivity verified to depth "
     << map->surjective_depth();
  r.notes.push_back(os.str());
  return r;
}

TheoremGeneralReport theorem_general_check(
    std::shared_ptr<const FactorMap> map, std::shared_ptr<const Potential> g,
    int max_m, int max_n, size_t cap) {
  std::string reason;
  if (!map->source().specification_number(16, &reason))
    throw Error("theorem-level check needs source specification: " + reason);
  const auto f = std::make_shared<RelativePotential>(map, g);
  TheoremGeneralReport r;
  r.right = balanced_check(*f, Side::Right, BalanceMode::UpperOnly, max_m,
                           max_n, cap);
  r.left = balanced_check(*f, Side::Left, BalanceMode::UpperOnly, max_m,
                          max_n, cap);
  if (r.right.verdict == Verdict::Bounded && r.left.verdict == Verdict::Bounded)
    r.conclusion =
        "upper inequalities bounded on both sides; together with the "
        "automatic lower bounds, the measure of maximal relative entropy is "
        "Gibbs for the relative sequence (cited consequence)";
  else
    r.conclusion = "upper constants did not stabilize over the tested range";
  return r;
}

}  // namespace thermoshift
