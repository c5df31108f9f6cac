#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqfix/varid.hpp"

namespace eqfix {

// One element of a pattern: a literal string or a variable.
struct Matcher {
  static Matcher str(std::string value);
  static Matcher var(VarId id);

  bool is_str() const { return !id.has_value(); }
  bool is_var() const { return id.has_value(); }

  std::string value;           // literal text, is_str() only
  std::optional<VarId> id;     // is_var() only

  friend bool operator==(const Matcher& a, const Matcher& b) {
    return a.value == b.value && a.id == b.id;
  }
  friend bool operator!=(const Matcher& a, const Matcher& b) { return !(a == b); }
};

// Token-level template matched against an error message. Literal matchers
// must equal their token; variable matchers bind theirs.
struct ErrorPattern {
  std::vector<Matcher> matchers;

  std::string to_string() const;
  friend bool operator==(const ErrorPattern& a, const ErrorPattern& b) {
    return a.matchers == b.matchers;
  }
};

// Template over equation text. String and variable matchers alternate; the
// literals act as delimiters, so consecutive variables would make the split
// ambiguous. The same variable may occur several times (all occurrences of a
// bound value are replaced by one variable during generation).
struct EquationPattern {
  std::vector<Matcher> matchers;

  bool is_constant() const;      // no variable matchers
  bool alternates() const;       // no two adjacent matchers of the same kind
  std::vector<VarId> variables() const;  // distinct, in first-occurrence order

  std::string to_string() const;
  friend bool operator==(const EquationPattern& a, const EquationPattern& b) {
    return a.matchers == b.matchers;
  }
};

using Bindings = std::map<VarId, std::string>;

// Whitespace-delimited tokens of an error message; tokens are never empty.
struct ErrorMessage {
  std::vector<std::string> tokens;

  std::string to_string() const;  // tokens joined by single spaces

  friend bool operator==(const ErrorMessage& a, const ErrorMessage& b) {
    return a.tokens == b.tokens;
  }
};

// Splits text into maximal whitespace-free runs. Throws EmptyMessageError on
// blank input.
ErrorMessage tokenize_message(std::string_view text);

// Token-wise match; nullopt when lengths differ or a literal mismatches.
std::optional<Bindings> match_error_pattern(const ErrorPattern& ep,
                                            const ErrorMessage& msg);

// Locates literal matchers leftmost in matcher order; variables bind the
// (non-empty) text in between. Duplicate variables must bind equal strings.
std::optional<Bindings> match_equation_pattern(const EquationPattern& p,
                                               std::string_view eq);

// Concatenation of the matchers with variables substituted from b. Throws
// UnboundVariableError.
std::string instantiate(const EquationPattern& p, const Bindings& b);

// Replaces every occurrence of each bound value in eq with its variable,
// longest values first, never inside an already-substituted region. Returns
// nullopt (generation failure) when the result has adjacent variables or when
// re-matching the result against eq does not recover b; such a pattern could
// not be used faithfully. Throws EmptyBindingValueError.
std::optional<EquationPattern> generate_pattern(std::string_view eq,
                                                const Bindings& b);

namespace detail {
// Match with failure diagnostics: index of the matcher where matching got
// stuck (used by pattern relaxation to pick the offending literal).
struct EquationMatch {
  std::optional<Bindings> bindings;
  std::size_t failed_matcher = 0;
};
EquationMatch match_equation_detail(const EquationPattern& p, std::string_view eq);
}  // namespace detail

}  // namespace eqfix
