#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "eqfix/transform.hpp"

namespace eqfix {

// Version-space representation of candidate string transformers. A node
// denotes a set of programs; Union is set union, ConcatJoin pairs every head
// atom with every tail program, AtomicNode wraps one atomic alternative.
// Nodes are immutable and shared (the DAG keeps construction polynomial).

struct AtomicVsa {
  // ConstLeaf when positions are empty; SubStrJoin otherwise, with explicit
  // position sets (kept sorted and deduplicated).
  std::string const_value;
  std::vector<PositionExpr> starts;
  std::vector<PositionExpr> ends;

  bool is_const() const { return starts.empty(); }

  static AtomicVsa const_leaf(std::string value);
  static AtomicVsa substr_join(std::vector<PositionExpr> starts,
                               std::vector<PositionExpr> ends);

  std::uint64_t size() const;  // number of concrete atomic expressions
};

struct StringVsa;
using StringVsaPtr = std::shared_ptr<const StringVsa>;

struct StringVsa {
  enum class Kind { Union, ConcatJoin, Atomic };

  Kind kind = Kind::Atomic;
  std::vector<StringVsaPtr> children;  // Union
  AtomicVsa head;                      // ConcatJoin / Atomic
  StringVsaPtr tail;                   // ConcatJoin

  static StringVsaPtr make_union(std::vector<StringVsaPtr> children);
  static StringVsaPtr make_concat(AtomicVsa head, StringVsaPtr tail);
  static StringVsaPtr make_atomic(AtomicVsa atom);
};

// Ranking score, lexicographic, lower is better:
//   const_chars    characters of output produced by constants (constants
//                  overfit, substrings carry over to new inputs)
//   atom_count     length of the Concat spine
//   position_cost  0 for the anchors AbsPos(0)/AbsPos(-1), 1 for other
//                  end-relative absolutes and for relative positions, 2 for
//                  interior absolutes
// Ties are broken by the canonical serialization, making ranking total.
struct Score {
  int const_chars = 0;
  int atom_count = 0;
  int position_cost = 0;

  friend std::strong_ordering operator<=>(const Score&, const Score&) = default;
  Score operator+(const Score& other) const {
    return {const_chars + other.const_chars, atom_count + other.atom_count,
            position_cost + other.position_cost};
  }
};

Score score_of(const StringTransformer& t);

// All position expressions that evaluate to index k on x: AbsPos(k), its
// negative twin AbsPos(k - len(x)), and RelPos(t, j, off) for every
// registered token occurrence starting at k - off, off in {-1, 0, +1}, with
// both the positive and the negative occurrence count.
std::vector<PositionExpr> gen_pos(std::string_view x, std::size_t k,
                                  const TokenRegistry& reg = TokenRegistry::builtin());

// One SubStrJoin per occurrence of s in x (occurrences may overlap); empty
// when s does not occur.
std::vector<AtomicVsa> gen_substr(std::string_view x, std::string_view s,
                                  const TokenRegistry& reg = TokenRegistry::builtin());

// ConstStr(s) plus all substring joins over each input in gamma.
std::vector<AtomicVsa> gen_atomic(const std::vector<std::string>& gamma,
                                  std::string_view s,
                                  const TokenRegistry& reg = TokenRegistry::builtin());

// Every string expression that evaluates to s on the inputs: the atomic
// alternatives for s itself plus, for every split of s into non-empty
// prefix/suffix, a ConcatJoin of the prefix atoms with the suffix VSA.
// Memoized by suffix, so construction is polynomial in len(s). Never empty
// for non-empty s.
StringVsaPtr gen_string(const std::vector<std::string>& gamma, std::string_view s,
                        const TokenRegistry& reg = TokenRegistry::builtin());

// Structural intersection: the result denotes exactly the programs common to
// both sides. nullptr denotes the empty VSA (inconsistent examples).
StringVsaPtr intersect(const StringVsaPtr& a, const StringVsaPtr& b);

// At most k distinct programs, best score first, deterministic.
std::vector<StringTransformer> enumerate_topk(const StringVsaPtr& v, std::size_t k);

// |sem(v)|, saturating at the max representable count.
std::uint64_t vsa_size(const StringVsaPtr& v);

bool vsa_contains(const StringVsaPtr& v, const StringTransformer& t);

// Explicit denotation, stopping once cap programs were produced.
std::vector<StringTransformer> vsa_enumerate(const StringVsaPtr& v, std::size_t cap);

// Uniform sample from sem(v) (weighted by subtree sizes).
StringTransformer vsa_sample(const StringVsaPtr& v, std::mt19937& rng);

}  // namespace eqfix
