#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eqfix {

struct Span {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const Span& a, const Span& b) {
    return a.start == b.start && a.length == b.length;
  }
};

// Named recognizers used by relative positions. The built-in set covers the
// special characters "{", "}", "(", ")", "^", "_" (one span per occurrence)
// and "Number" (maximal digit runs). Extensible at construction; fixed while
// synthesis and evaluation run so ranking stays stable.
class TokenRegistry {
 public:
  using Recognizer = std::function<std::vector<Span>(std::string_view)>;

  static const TokenRegistry& builtin();

  TokenRegistry();  // starts with the built-in tokens
  void add(std::string name, Recognizer recognizer);
  bool contains(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }

  // Non-overlapping, maximal, left-to-right spans of the token in x.
  std::vector<Span> occurrences(const std::string& name, std::string_view x) const;

 private:
  std::map<std::string, Recognizer> recognizers_;
  std::vector<std::string> names_;  // registration order
};

std::vector<Span> token_occurrences(const TokenRegistry& reg,
                                    const std::string& token, std::string_view x);

// Position expressions evaluate to an index of the input string.
struct AbsPos {
  int k = 0;  // negative counts from the end: -1 is the last index
  friend bool operator==(const AbsPos& a, const AbsPos& b) { return a.k == b.k; }
};

struct RelPos {
  std::string token;
  int occurrence = 1;  // j-th occurrence, negative counts from the last
  int offset = 0;      // added to the occurrence's start index
  friend bool operator==(const RelPos& a, const RelPos& b) {
    return a.token == b.token && a.occurrence == b.occurrence && a.offset == b.offset;
  }
};

using PositionExpr = std::variant<AbsPos, RelPos>;

bool operator<(const PositionExpr& a, const PositionExpr& b);

// Atomic expressions: a constant, or an inclusive substring of the input
// delimited by two position expressions.
struct ConstStr {
  std::string value;
  friend bool operator==(const ConstStr& a, const ConstStr& b) {
    return a.value == b.value;
  }
};

struct SubStr {
  PositionExpr lo;
  PositionExpr hi;
  friend bool operator==(const SubStr& a, const SubStr& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

using AtomicExpr = std::variant<ConstStr, SubStr>;

// fun x => F1 ++ F2 ++ ... : the right-leaning Concat spine stored flat.
struct StringTransformer {
  std::vector<AtomicExpr> atoms;

  friend bool operator==(const StringTransformer& a, const StringTransformer& b) {
    return a.atoms == b.atoms;
  }
  friend bool operator!=(const StringTransformer& a, const StringTransformer& b) {
    return !(a == b);
  }
};

// k >= 0 maps to k when k < len; k < 0 maps to len + k when that is >= 0;
// anything else is out of range.
std::optional<std::size_t> normalize_index(int k, std::size_t len);

// AbsPos via normalize_index; RelPos resolves the j-th occurrence start plus
// the offset. nullopt marks an inapplicable transformer, never a crash.
std::optional<std::size_t> eval_position(const PositionExpr& p, std::string_view x,
                                         const TokenRegistry& reg = TokenRegistry::builtin());

std::optional<std::string> eval_atomic(const AtomicExpr& f, std::string_view x,
                                       const TokenRegistry& reg = TokenRegistry::builtin());

// Left-to-right concatenation of the spine; fails when a position fails or a
// substring span inverts.
std::optional<std::string> eval_transformer(const StringTransformer& t, std::string_view x,
                                            const TokenRegistry& reg = TokenRegistry::builtin());

// Canonical term serialization used in rule files, e.g.
//   Concat(ConstStr("{"),Concat(SubStr(AbsPos(0),AbsPos(-1)),ConstStr("}")))
// parse/print round-trip exactly.
std::string to_string(const PositionExpr& p);
std::string to_string(const AtomicExpr& f);
std::string to_string(const StringTransformer& t);

// Throws FormatError (with byte offset) on malformed input; RelPos token
// names must exist in the registry.
StringTransformer parse_transformer(std::string_view text,
                                    const TokenRegistry& reg = TokenRegistry::builtin());

}  // namespace eqfix
