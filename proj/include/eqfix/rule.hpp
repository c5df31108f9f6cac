#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "eqfix/pattern.hpp"
#include "eqfix/transform.hpp"
#include "eqfix/vsa.hpp"

namespace eqfix {

// One training example: an erroneous equation, its error message, and the
// corrected equation.
struct Example {
  std::string eq;
  ErrorMessage err;
  std::string fix;

  friend bool operator==(const Example& a, const Example& b) {
    return a.eq == b.eq && a.err == b.err && a.fix == b.fix;
  }
};

// Syntactic record of a pattern generalization. Id(v) names an untouched
// variable; LRelax/RRelax/BRelax mirror the left/right/binary relaxations and
// nest the same way composite variables do. Top stands for total relaxation.
struct Relaxer {
  enum class Kind { Id, Left, Right, Binary, Top };

  Kind kind = Kind::Id;
  VarId var;                   // Id only (a base variable)
  std::vector<Relaxer> sub;    // Left/Right: 1 child, Binary: 2

  static Relaxer id(VarId v);
  static Relaxer left(Relaxer inner);
  static Relaxer right(Relaxer inner);
  static Relaxer binary(Relaxer first, Relaxer second);
  static Relaxer top();

  bool is_top() const { return kind == Kind::Top; }

  // The composite variable this relaxer introduces when applied.
  VarId target_var() const;
  std::vector<VarId> base_vars() const;

  std::string to_string() const;
  static Relaxer parse(const std::string& text);  // throws FormatError

  friend bool operator==(const Relaxer& a, const Relaxer& b);
  friend bool operator!=(const Relaxer& a, const Relaxer& b) { return !(a == b); }
  friend bool operator<(const Relaxer& a, const Relaxer& b);
};

// Repair strategy: which string transformer rewrites each pattern variable.
using Transformer = std::map<VarId, StringTransformer>;

struct Rule {
  ErrorPattern error_pattern;
  std::set<Relaxer> relaxers;
  Transformer transformer;
};

// VSA-compressed rule: one candidate-transformer VSA per variable.
struct RuleVsa {
  ErrorPattern error_pattern;
  std::set<Relaxer> relaxers;
  std::map<VarId, StringVsaPtr> transformer_vsas;
};

// ---- synthesis failures ----

enum class SynthCause {
  EmptyExamples,
  TokenCountMismatch,
  PatternGenFailure,
  InconsistentExamples,
};

struct SynthFailure {
  SynthCause cause;
  std::string detail;
};

std::string to_string(SynthCause cause);

template <typename T>
using SynthResult = std::variant<T, SynthFailure>;

template <typename T>
bool synth_ok(const SynthResult<T>& r) {
  return std::holds_alternative<T>(r);
}

// ---- error-pattern synthesis ----

// Position i becomes a fresh variable (numbered left to right from 1) when
// the token occurs inside any example's eq or fix, or when the examples
// disagree at i; otherwise the common literal is kept.
SynthResult<ErrorPattern> synth_error_pattern(const std::vector<Example>& examples);

// ---- string-example extraction ----

struct ExtractFailure {
  Example unmatched;  // first example whose generated pattern missed its fix
};

using StringExamples = std::map<VarId, std::vector<std::pair<std::string, std::string>>>;

// Per-variable (input, output) string pairs obtained by matching each
// example's generated pattern against its fix. An unmatched fix triggers
// relaxation in the caller; a pattern-generation failure is a SynthFailure.
std::variant<StringExamples, ExtractFailure, SynthFailure> extract_string_examples(
    const std::vector<Example>& examples, const ErrorPattern& ep);

// ---- relaxation ----

// Precondition: p does not match fix (and fix is non-empty). Repeatedly
// replaces the offending literal together with its neighbouring variable(s)
// by a composite variable until the pattern matches fix; a constant pattern
// relaxes straight to [Top].
EquationPattern relax_pattern(const EquationPattern& p, std::string_view fix);

// Runs relaxation over the examples in order, inheriting earlier relaxers,
// and translates composite variables back into relaxers. Empty set when no
// relaxation was ever needed.
SynthResult<std::set<Relaxer>> synth_relaxers(const std::vector<Example>& examples,
                                              const ErrorPattern& ep);

// Replaces the subpatterns designated by each relaxer with its composite
// variable; Top yields [Top]. Throws InapplicableRelaxerError when a
// referenced variable is absent or the pattern shape does not fit.
EquationPattern apply_relaxers(const EquationPattern& p, const std::set<Relaxer>& rs);

// ---- rule synthesis & application ----

// Candidate-rule construction up to the VSA: error pattern, relaxers, and one
// transformer VSA per variable, intersected across the examples.
SynthResult<RuleVsa> synth_rule_vsa(const std::vector<Example>& examples);

// Full pipeline: error pattern, relaxers, per-variable transformer VSAs
// (intersected across examples), then the top-k transformer combinations.
// Every returned rule reproduces every training fix.
SynthResult<std::vector<Rule>> synth_rule(const std::vector<Example>& examples,
                                          std::size_t k);

// Re-synthesis over the stored examples plus the new one; failure means the
// new example belongs to a different rule.
SynthResult<std::vector<Rule>> refine_rule(const std::vector<Example>& entry_examples,
                                           const Example& new_example, std::size_t k);

enum class ApplyStep {
  ErrorMatch,        // error pattern did not match the message
  PatternGen,        // equation pattern generation failed
  EquationMatch,     // relaxed pattern did not match the equation
  MissingTransformer,
  Transform,         // a string transformer was inapplicable
};

std::string to_string(ApplyStep step);

struct ApplyOutcome {
  std::optional<std::string> fixed;
  ApplyStep failed_step = ApplyStep::ErrorMatch;  // meaningful when !fixed
};

// Intermediate artifacts of one application, for inspection and the CLI.
struct ApplyTrace {
  Bindings error_bindings;      // step 1
  EquationPattern pattern;      // step 2 (after relaxers)
  Bindings transformed;         // step 3
  std::string fixed;            // step 4
};

ApplyOutcome apply_rule(const Rule& rule, std::string_view eq, const ErrorMessage& err);
std::variant<ApplyTrace, ApplyStep> apply_rule_trace(const Rule& rule, std::string_view eq,
                                                     const ErrorMessage& err);

}  // namespace eqfix
