#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "icn/bits.hpp"
#include "icn/error.hpp"

namespace icn {

/// Online variable-order Markov model estimated with PPM method C.
///
/// Every ingested symbol increments its count under each suffix context of
/// length 0..max_order that precedes it inside the same update call. Counts
/// live in a suffix trie keyed by the context read backwards (most recent
/// symbol first), so a single walk from the root visits every suffix order.
///
/// Conditional probabilities blend orders from the shortest context upward:
///
///   P(s | ctx) = (count(s | ctx) + distinct(ctx) * P(s | ctx')) / (total(ctx) + distinct(ctx))
///
/// where ctx' drops the oldest symbol of ctx, an unseen context passes the
/// shorter estimate through unchanged, and the order -1 base is uniform. For a
/// symbol never seen in ctx this is exactly the PPM-C escape weight
/// distinct/(total+distinct) applied to the shorter estimate. No exclusions.
template <unsigned Alphabet = 2>
class BasicVmm {
  static_assert(Alphabet >= 2 && Alphabet <= 10, "symbols are dumped as single digits");

 public:
  using Counts = std::array<std::uint64_t, Alphabet>;
  using Distribution = std::array<double, Alphabet>;

  explicit BasicVmm(std::size_t max_order) : max_order_(max_order) {
    if (max_order < 1) throw Error(Errc::invalid_parameter, "vmm: max_order must be >= 1");
    nodes_.emplace_back();
  }

  std::size_t max_order() const noexcept { return max_order_; }
  std::uint64_t total_updates() const noexcept { return total_updates_; }
  /// Number of stored contexts, including the empty one once anything was seen.
  std::size_t context_count() const noexcept {
    return nodes_.size() - (total(nodes_[0].count) == 0 ? 1 : 0);
  }

  void clear() {
    nodes_.assign(1, TrieNode{});
    total_updates_ = 0;
  }

  /// Ingests seq; contexts restart empty at seq[0].
  void update(BitSpan seq) {
    if (seq.empty()) throw Error(Errc::invalid_parameter, "vmm: update with empty sequence");
    check_symbols(seq);
    for (std::size_t j = 0; j < seq.size(); ++j) {
      const auto sym = seq[j];
      std::uint32_t node = 0;
      ++nodes_[node].count[sym];
      const std::size_t depth = std::min(max_order_, j);
      for (std::size_t d = 1; d <= depth; ++d) {
        node = child_or_insert(node, seq[j - d]);
        ++nodes_[node].count[sym];
      }
    }
    total_updates_ += seq.size();
  }

  /// Conditional distribution over the alphabet after `context` (oldest
  /// symbol first). Contexts longer than max_order keep their tail.
  Distribution distribution(BitSpan context) const {
    check_symbols(context);
    if (context.size() > max_order_) context = context.last(max_order_);

    std::array<std::uint32_t, kMaxWalk> chain{};
    std::size_t found = 0;
    std::uint32_t node = 0;
    chain[found++] = 0;
    for (std::size_t d = 1; d <= context.size(); ++d) {
      node = nodes_[node].child[context[context.size() - d]];
      if (node == 0) break;
      if (found < kMaxWalk) {
        chain[found++] = node;
      } else {
        return distribution_slow(context);
      }
    }

    Distribution p;
    p.fill(1.0 / Alphabet);
    for (std::size_t i = 0; i < found; ++i) blend(nodes_[chain[i]].count, p);
    return p;
  }

  double probability(std::uint8_t symbol, BitSpan context) const {
    if (symbol >= Alphabet) throw Error(Errc::invalid_symbol, "vmm: symbol out of alphabet");
    return distribution(context)[symbol];
  }

  /// Chain-rule probability of pattern, scored from an empty context.
  double sequence_probability(BitSpan pattern) const {
    if (pattern.empty()) throw Error(Errc::invalid_parameter, "vmm: empty pattern");
    check_symbols(pattern);
    double p = 1.0;
    for (std::size_t j = 0; j < pattern.size(); ++j) {
      p *= distribution(pattern.first(j))[pattern[j]];
    }
    return p;
  }

  /// Most probable length-k pattern; ties go to the lexicographically
  /// smallest. Enumerates all Alphabet^k candidates.
  Bits best_pattern(std::size_t k) const { return best_pattern_with_probability(k).first; }

  std::pair<Bits, double> best_pattern_with_probability(std::size_t k) const {
    if (k < 1 || k > max_order_) {
      throw Error(Errc::invalid_parameter, "vmm: best_pattern length " + std::to_string(k) +
                                               " outside [1, " + std::to_string(max_order_) + "]");
    }
    Search search{Bits(k, 0), Bits(k, 0), -1.0};
    explore(search, 0, 1.0);
    return {std::move(search.best), search.best_probability};
  }

  /// Counts stored for a context, or nullopt when the context was never seen.
  std::optional<Counts> counts(BitSpan context) const {
    check_symbols(context);
    if (context.size() > max_order_) return std::nullopt;
    std::uint32_t node = 0;
    for (std::size_t d = 1; d <= context.size(); ++d) {
      node = nodes_[node].child[context[context.size() - d]];
      if (node == 0) return std::nullopt;
    }
    if (total(nodes_[node].count) == 0) return std::nullopt;
    return nodes_[node].count;
  }

  /// Deterministic text dump: a header line "vmm <alphabet> <max_order>
  /// <total_updates> <contexts>", then one line per context
  /// sorted by (length, lexicographic), "-" standing for the empty context.
  void dump(std::ostream& os) const {
    const auto contexts = sorted_contexts();
    os << "vmm " << Alphabet << ' ' << max_order_ << ' ' << total_updates_ << ' ' << contexts.size()
       << '\n';
    for (const auto& [context, count] : contexts) {
      os << (context.empty() ? std::string("-") : context);
      for (auto c : count) os << ' ' << c;
      os << '\n';
    }
  }

  std::string dump() const {
    std::ostringstream os;
    dump(os);
    return os.str();
  }

  /// Reads back a dump(). The stream is left after the last context line.
  static BasicVmm load(std::istream& is) {
    std::string word;
    unsigned alphabet = 0;
    std::size_t order = 0;
    std::uint64_t updates = 0;
    std::size_t entries = 0;
    std::size_t lines = 0;
    if (!(is >> word >> alphabet >> order >> updates >> entries) || word != "vmm" ||
        alphabet != Alphabet) {
      throw Error(Errc::parse, "vmm: bad dump header");
    }
    BasicVmm model(order);
    model.total_updates_ = updates;
    std::string line;
    std::getline(is, line);
    for (std::size_t e = 0; e < entries; ++e) {
      if (!std::getline(is, line)) throw Error(Errc::parse, "vmm: truncated dump");
      ++lines;
      std::istringstream fields(line);
      std::string context;
      Counts count{};
      fields >> context;
      for (auto& c : count) {
        if (!(fields >> c)) throw ParseError(ParseError::Where::line, lines, "vmm: missing count");
      }
      if (context == "-") context.clear();
      if (context.size() > order || total(count) == 0) {
        throw ParseError(ParseError::Where::line, lines, "vmm: invalid context entry");
      }
      Bits ctx;
      for (char c : context) {
        if (c < '0' || c >= static_cast<char>('0' + Alphabet)) {
          throw ParseError(ParseError::Where::line, lines, "vmm: invalid context symbol");
        }
        ctx.push_back(static_cast<std::uint8_t>(c - '0'));
      }
      std::uint32_t node = 0;
      for (std::size_t d = 1; d <= ctx.size(); ++d) node = model.child_or_insert(node, ctx[ctx.size() - d]);
      model.nodes_[node].count = count;
    }
    return model;
  }

  friend bool operator==(const BasicVmm& a, const BasicVmm& b) {
    return a.max_order_ == b.max_order_ && a.total_updates_ == b.total_updates_ &&
           a.sorted_contexts() == b.sorted_contexts();
  }

 private:
  static constexpr std::size_t kMaxWalk = 64;

  struct TrieNode {
    Counts count{};
    std::array<std::uint32_t, Alphabet> child{};  // 0 = absent (root is never a child)
  };

  struct Search {
    Bits prefix;
    Bits best;
    double best_probability;
  };

  static std::uint64_t total(const Counts& c) {
    std::uint64_t t = 0;
    for (auto x : c) t += x;
    return t;
  }

  static void blend(const Counts& c, Distribution& p) {
    std::uint64_t t = 0;
    unsigned distinct = 0;
    for (auto x : c) {
      t += x;
      distinct += (x > 0);
    }
    if (t == 0) return;
    const double denom = static_cast<double>(t + distinct);
    for (unsigned s = 0; s < Alphabet; ++s) {
      p[s] = (static_cast<double>(c[s]) + distinct * p[s]) / denom;
    }
  }

  static void check_symbols(BitSpan seq) {
    for (auto s : seq) {
      if (s >= Alphabet) {
        throw Error(Errc::invalid_symbol, "vmm: symbol " + std::to_string(s) + " outside alphabet");
      }
    }
  }

  Distribution distribution_slow(BitSpan context) const {
    std::vector<std::uint32_t> chain{0};
    std::uint32_t node = 0;
    for (std::size_t d = 1; d <= context.size(); ++d) {
      node = nodes_[node].child[context[context.size() - d]];
      if (node == 0) break;
      chain.push_back(node);
    }
    Distribution p;
    p.fill(1.0 / Alphabet);
    for (auto n : chain) blend(nodes_[n].count, p);
    return p;
  }

  std::uint32_t child_or_insert(std::uint32_t node, std::uint8_t sym) {
    auto next = nodes_[node].child[sym];
    if (next == 0) {
      next = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back();
      nodes_[node].child[sym] = next;
    }
    return next;
  }

  void explore(Search& s, std::size_t depth, double p) const {
    if (depth == s.prefix.size()) {
      if (p > s.best_probability) {
        s.best_probability = p;
        s.best = s.prefix;
      }
      return;
    }
    const auto dist = distribution(BitSpan(s.prefix).first(depth));
    for (unsigned sym = 0; sym < Alphabet; ++sym) {
      s.prefix[depth] = static_cast<std::uint8_t>(sym);
      explore(s, depth + 1, p * dist[sym]);
    }
    s.prefix[depth] = 0;
  }

  std::vector<std::pair<std::string, Counts>> sorted_contexts() const {
    std::vector<std::pair<std::string, Counts>> out;
    std::string reversed;
    collect(0, reversed, out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
    });
    return out;
  }

  void collect(std::uint32_t node, std::string& reversed,
               std::vector<std::pair<std::string, Counts>>& out) const {
    if (total(nodes_[node].count) > 0) {
      out.emplace_back(std::string(reversed.rbegin(), reversed.rend()), nodes_[node].count);
    }
    for (unsigned sym = 0; sym < Alphabet; ++sym) {
      if (auto c = nodes_[node].child[sym]; c != 0) {
        reversed.push_back(static_cast<char>('0' + sym));
        collect(c, reversed, out);
        reversed.pop_back();
      }
    }
  }

  std::size_t max_order_;
  std::uint64_t total_updates_ = 0;
  std::vector<TrieNode> nodes_;
};

using VmmModel = BasicVmm<2>;

}  // namespace icn
