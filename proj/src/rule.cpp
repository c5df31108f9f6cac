#include "eqfix/rule.hpp"

#include <algorithm>
#include <queue>

#include "eqfix/errors.hpp"

namespace eqfix {

// ---- Relaxer ----

Relaxer Relaxer::id(VarId v) {
  Relaxer r;
  r.kind = Kind::Id;
  r.var = std::move(v);
  return r;
}

Relaxer Relaxer::left(Relaxer inner) {
  Relaxer r;
  r.kind = Kind::Left;
  r.sub.push_back(std::move(inner));
  return r;
}

Relaxer Relaxer::right(Relaxer inner) {
  Relaxer r;
  r.kind = Kind::Right;
  r.sub.push_back(std::move(inner));
  return r;
}

Relaxer Relaxer::binary(Relaxer first, Relaxer second) {
  Relaxer r;
  r.kind = Kind::Binary;
  r.sub.push_back(std::move(first));
  r.sub.push_back(std::move(second));
  return r;
}

Relaxer Relaxer::top() {
  Relaxer r;
  r.kind = Kind::Top;
  return r;
}

VarId Relaxer::target_var() const {
  switch (kind) {
    case Kind::Id: return var;
    case Kind::Left: return VarId::left(sub[0].target_var());
    case Kind::Right: return VarId::right(sub[0].target_var());
    case Kind::Binary:
      return VarId::binary(sub[0].target_var(), sub[1].target_var());
    case Kind::Top: return VarId::top();
  }
  return {};
}

std::vector<VarId> Relaxer::base_vars() const {
  if (kind == Kind::Id) return {var};
  std::vector<VarId> out;
  for (const Relaxer& r : sub) {
    for (VarId& v : r.base_vars()) out.push_back(std::move(v));
  }
  return out;
}

std::string Relaxer::to_string() const {
  switch (kind) {
    case Kind::Id: return "Id(" + var.to_string() + ")";
    case Kind::Left: return "LRelax(" + sub[0].to_string() + ")";
    case Kind::Right: return "RRelax(" + sub[0].to_string() + ")";
    case Kind::Binary:
      return "BRelax(" + sub[0].to_string() + "," + sub[1].to_string() + ")";
    case Kind::Top: return "TopRelax";
  }
  return {};
}

namespace {

Relaxer parse_relaxer(const std::string& s, std::size_t& pos) {
  auto starts_with = [&](const char* kw) {
    return s.compare(pos, std::string(kw).size(), kw) == 0;
  };
  auto expect = [&](char c) {
    if (pos >= s.size() || s[pos] != c)
      throw FormatError("expected '" + std::string(1, c) + "' in relaxer", pos);
    ++pos;
  };
  if (starts_with("TopRelax")) {
    pos += 8;
    return Relaxer::top();
  }
  if (starts_with("Id(")) {
    pos += 3;
    std::size_t depth = 1, start = pos;
    while (pos < s.size() && depth > 0) {
      if (s[pos] == '(') ++depth;
      if (s[pos] == ')') --depth;
      if (depth > 0) ++pos;
    }
    if (depth != 0) throw FormatError("unterminated Id(...)", pos);
    Relaxer r = Relaxer::id(VarId::parse(s.substr(start, pos - start)));
    ++pos;  // ')'
    return r;
  }
  if (starts_with("LRelax(") || starts_with("RRelax(")) {
    bool is_left = s[pos] == 'L';
    pos += 7;
    Relaxer inner = parse_relaxer(s, pos);
    expect(')');
    return is_left ? Relaxer::left(std::move(inner)) : Relaxer::right(std::move(inner));
  }
  if (starts_with("BRelax(")) {
    pos += 7;
    Relaxer a = parse_relaxer(s, pos);
    expect(',');
    Relaxer b = parse_relaxer(s, pos);
    expect(')');
    return Relaxer::binary(std::move(a), std::move(b));
  }
  throw FormatError("unrecognized relaxer", pos);
}

}  // namespace

Relaxer Relaxer::parse(const std::string& text) {
  std::size_t pos = 0;
  Relaxer r = parse_relaxer(text, pos);
  if (pos != text.size()) throw FormatError("trailing text after relaxer", pos);
  return r;
}

bool operator==(const Relaxer& a, const Relaxer& b) {
  return a.kind == b.kind && a.var == b.var && a.sub == b.sub;
}

bool operator<(const Relaxer& a, const Relaxer& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  if (a.var != b.var) return a.var < b.var;
  return a.sub < b.sub;
}

std::string to_string(SynthCause cause) {
  switch (cause) {
    case SynthCause::EmptyExamples: return "no examples";
    case SynthCause::TokenCountMismatch: return "token-count mismatch";
    case SynthCause::PatternGenFailure: return "pattern generation failure";
    case SynthCause::InconsistentExamples: return "inconsistent examples";
  }
  return {};
}

std::string to_string(ApplyStep step) {
  switch (step) {
    case ApplyStep::ErrorMatch: return "error pattern mismatch";
    case ApplyStep::PatternGen: return "pattern generation failure";
    case ApplyStep::EquationMatch: return "equation pattern mismatch";
    case ApplyStep::MissingTransformer: return "missing transformer";
    case ApplyStep::Transform: return "transformer failure";
  }
  return {};
}

// ---- error-pattern synthesis ----

SynthResult<ErrorPattern> synth_error_pattern(const std::vector<Example>& examples) {
  if (examples.empty())
    return SynthFailure{SynthCause::EmptyExamples, "no examples given"};
  const std::size_t n = examples.front().err.tokens.size();
  for (const Example& e : examples) {
    if (e.err.tokens.size() != n)
      return SynthFailure{SynthCause::TokenCountMismatch,
                          "error messages have different token counts"};
  }
  ErrorPattern ep;
  int next_var = 1;
  for (std::size_t i = 0; i < n; ++i) {
    bool is_var = false;
    for (const Example& e : examples) {
      const std::string& token = e.err.tokens[i];
      if (token != examples.front().err.tokens[i] ||
          e.eq.find(token) != std::string::npos ||
          e.fix.find(token) != std::string::npos) {
        is_var = true;
        break;
      }
    }
    if (is_var) {
      ep.matchers.push_back(Matcher::var(VarId::base(next_var++)));
    } else {
      ep.matchers.push_back(Matcher::str(examples.front().err.tokens[i]));
    }
  }
  return ep;
}

// ---- string-example extraction ----

std::variant<StringExamples, ExtractFailure, SynthFailure> extract_string_examples(
    const std::vector<Example>& examples, const ErrorPattern& ep) {
  StringExamples out;
  for (const Example& e : examples) {
    auto sigma = match_error_pattern(ep, e.err);
    if (!sigma)
      return SynthFailure{SynthCause::PatternGenFailure,
                          "error pattern does not match " + e.err.to_string()};
    auto pattern = generate_pattern(e.eq, *sigma);
    if (!pattern)
      return SynthFailure{SynthCause::PatternGenFailure,
                          "no usable equation pattern for " + e.eq};
    auto sigma_out = match_equation_pattern(*pattern, e.fix);
    if (!sigma_out) return ExtractFailure{e};
    for (const VarId& v : pattern->variables()) {
      out[v].emplace_back(sigma->at(v), sigma_out->at(v));
    }
  }
  return out;
}

// ---- relaxation ----

namespace {

EquationPattern top_pattern() {
  EquationPattern p;
  p.matchers.push_back(Matcher::var(VarId::top()));
  return p;
}

// Replace the literal at index i together with its neighbouring variable(s).
EquationPattern relax_once(const EquationPattern& p, std::size_t i) {
  EquationPattern out;
  const auto& ms = p.matchers;
  std::size_t begin, end;  // inclusive replaced span
  VarId merged;
  if (i == 0) {
    begin = 0;
    end = 1;
    merged = VarId::left(*ms[1].id);
  } else if (i + 1 == ms.size()) {
    begin = i - 1;
    end = i;
    merged = VarId::right(*ms[i - 1].id);
  } else {
    begin = i - 1;
    end = i + 1;
    merged = VarId::binary(*ms[i - 1].id, *ms[i + 1].id);
  }
  for (std::size_t j = 0; j < ms.size(); ++j) {
    if (j == begin) out.matchers.push_back(Matcher::var(merged));
    if (j < begin || j > end) out.matchers.push_back(ms[j]);
  }
  return out;
}

std::size_t choose_offender(const EquationPattern& p, std::string_view fix,
                            std::size_t failed_matcher) {
  const auto& ms = p.matchers;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].is_str() && fix.find(ms[i].value) == std::string_view::npos) return i;
  }
  // Every literal occurs somewhere in fix; blame the matcher where greedy
  // matching got stuck, shifting a stuck variable onto its neighbour literal.
  std::size_t i = std::min(failed_matcher, ms.size() - 1);
  if (ms[i].is_str()) return i;
  if (i > 0 && ms[i - 1].is_str()) return i - 1;
  if (i + 1 < ms.size() && ms[i + 1].is_str()) return i + 1;
  for (std::size_t j = ms.size(); j-- > 0;) {
    if (ms[j].is_str()) return j;
  }
  return 0;  // unreachable for patterns that fail to match non-empty text
}

}  // namespace

EquationPattern relax_pattern(const EquationPattern& p, std::string_view fix) {
  if (p.is_constant()) return top_pattern();
  EquationPattern work = p;
  while (true) {
    auto m = detail::match_equation_detail(work, fix);
    if (m.bindings) return work;
    if (work.matchers.size() == 1) return top_pattern();  // [v] vs empty fix
    work = relax_once(work, choose_offender(work, fix, m.failed_matcher));
  }
}

// ---- relaxer application ----

namespace {

Relaxer var_to_relaxer(const VarId& v) {
  switch (v.kind) {
    case VarId::Kind::Base: return Relaxer::id(v);
    case VarId::Kind::Left: return Relaxer::left(var_to_relaxer(v.sub[0]));
    case VarId::Kind::Right: return Relaxer::right(var_to_relaxer(v.sub[0]));
    case VarId::Kind::Binary:
      return Relaxer::binary(var_to_relaxer(v.sub[0]), var_to_relaxer(v.sub[1]));
    case VarId::Kind::Top: return Relaxer::top();
  }
  return {};
}

std::set<Relaxer> translate_relaxers(const EquationPattern& p) {
  std::set<Relaxer> out;
  for (const Matcher& m : p.matchers) {
    if (m.is_var() && (m.id->is_composite() || m.id->is_top()))
      out.insert(var_to_relaxer(*m.id));
  }
  return out;
}

struct MatcherSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // inclusive
  VarId target;
};

// Locate the subpattern a relaxer replaces. Left/right relaxations absorb the
// neighbouring literal only at the pattern boundary, where the merge keeps
// the alternation intact.
std::optional<MatcherSpan> locate(const Relaxer& r, const EquationPattern& p) {
  const auto& ms = p.matchers;
  switch (r.kind) {
    case Relaxer::Kind::Top:
      return MatcherSpan{0, ms.size() - 1, VarId::top()};
    case Relaxer::Kind::Id: {
      for (std::size_t i = 0; i < ms.size(); ++i) {
        if (ms[i].is_var() && *ms[i].id == r.var) return MatcherSpan{i, i, r.var};
      }
      return std::nullopt;
    }
    case Relaxer::Kind::Left: {
      auto inner = locate(r.sub[0], p);
      if (!inner) return std::nullopt;
      MatcherSpan span = *inner;
      if (span.begin == 1 && ms[0].is_str()) span.begin = 0;
      span.target = VarId::left(std::move(span.target));
      return span;
    }
    case Relaxer::Kind::Right: {
      auto inner = locate(r.sub[0], p);
      if (!inner) return std::nullopt;
      MatcherSpan span = *inner;
      if (span.end + 2 == ms.size() && ms.back().is_str()) span.end = ms.size() - 1;
      span.target = VarId::right(std::move(span.target));
      return span;
    }
    case Relaxer::Kind::Binary: {
      auto first = locate(r.sub[0], p);
      auto second = locate(r.sub[1], p);
      if (!first || !second) return std::nullopt;
      if (first->begin > second->begin) std::swap(first, second);
      if (first->end + 2 != second->begin || !ms[first->end + 1].is_str())
        return std::nullopt;
      VarId target = VarId::binary(first->target, second->target);
      return MatcherSpan{first->begin, second->end, std::move(target)};
    }
  }
  return std::nullopt;
}

struct RelaxApplication {
  EquationPattern pattern;
  std::set<Relaxer> skipped;
};

RelaxApplication apply_relaxers_impl(const EquationPattern& p,
                                     const std::set<Relaxer>& rs, bool strict) {
  RelaxApplication result;
  for (const Relaxer& r : rs) {
    if (r.is_top()) {
      result.pattern = top_pattern();
      return result;
    }
  }
  std::vector<std::pair<MatcherSpan, const Relaxer*>> spans;
  for (const Relaxer& r : rs) {
    auto span = locate(r, p);
    if (!span) {
      if (strict)
        throw InapplicableRelaxerError("relaxer " + r.to_string() +
                                       " is inapplicable to " + p.to_string());
      result.skipped.insert(r);
      continue;
    }
    spans.emplace_back(std::move(*span), &r);
  }
  std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
    return a.first.begin < b.first.begin;
  });
  std::vector<MatcherSpan> kept;
  for (const auto& [span, relaxer] : spans) {
    if (!kept.empty() && span.begin <= kept.back().end) {
      if (strict)
        throw InapplicableRelaxerError("relaxer " + relaxer->to_string() +
                                       " overlaps another relaxer in " + p.to_string());
      result.skipped.insert(*relaxer);
      continue;
    }
    kept.push_back(span);
  }
  EquationPattern out;
  std::size_t next_span = 0;
  for (std::size_t i = 0; i < p.matchers.size(); ++i) {
    if (next_span < kept.size() && i == kept[next_span].begin) {
      out.matchers.push_back(Matcher::var(kept[next_span].target));
      i = kept[next_span].end;
      ++next_span;
    } else {
      out.matchers.push_back(p.matchers[i]);
    }
  }
  result.pattern = std::move(out);
  return result;
}

}  // namespace

EquationPattern apply_relaxers(const EquationPattern& p, const std::set<Relaxer>& rs) {
  return apply_relaxers_impl(p, rs, /*strict=*/true).pattern;
}

SynthResult<std::set<Relaxer>> synth_relaxers(const std::vector<Example>& examples,
                                              const ErrorPattern& ep) {
  std::set<Relaxer> relaxers;
  for (const Example& e : examples) {
    auto sigma = match_error_pattern(ep, e.err);
    if (!sigma)
      return SynthFailure{SynthCause::PatternGenFailure,
                          "error pattern does not match " + e.err.to_string()};
    auto pattern = generate_pattern(e.eq, *sigma);
    if (!pattern)
      return SynthFailure{SynthCause::PatternGenFailure,
                          "no usable equation pattern for " + e.eq};
    RelaxApplication inherited = apply_relaxers_impl(*pattern, relaxers, false);
    EquationPattern relaxed = inherited.pattern;
    if (!match_equation_pattern(relaxed, e.fix))
      relaxed = relax_pattern(relaxed, e.fix);
    std::set<Relaxer> next = translate_relaxers(relaxed);
    // relaxers that did not concern this example's variables are kept
    next.insert(inherited.skipped.begin(), inherited.skipped.end());
    relaxers = std::move(next);
  }
  return relaxers;
}

// ---- rule synthesis ----

namespace {

struct PreparedExample {
  EquationPattern pattern;  // relaxed
  Bindings inputs;
  Bindings outputs;
};

SynthResult<std::vector<PreparedExample>> prepare_examples(
    const std::vector<Example>& examples, const ErrorPattern& ep,
    const std::set<Relaxer>& relaxers) {
  std::vector<PreparedExample> prepared;
  for (const Example& e : examples) {
    auto sigma = match_error_pattern(ep, e.err);
    if (!sigma)
      return SynthFailure{SynthCause::PatternGenFailure,
                          "error pattern does not match " + e.err.to_string()};
    auto pattern = generate_pattern(e.eq, *sigma);
    if (!pattern)
      return SynthFailure{SynthCause::PatternGenFailure,
                          "no usable equation pattern for " + e.eq};
    EquationPattern relaxed = apply_relaxers_impl(*pattern, relaxers, false).pattern;
    auto inputs = match_equation_pattern(relaxed, e.eq);
    if (!inputs)
      return SynthFailure{SynthCause::PatternGenFailure,
                          "relaxed pattern does not match " + e.eq};
    auto outputs = match_equation_pattern(relaxed, e.fix);
    if (!outputs)
      return SynthFailure{SynthCause::InconsistentExamples,
                          "relaxed pattern does not match fix " + e.fix};
    prepared.push_back({std::move(relaxed), std::move(*inputs), std::move(*outputs)});
  }
  return prepared;
}

struct ScoredTransformer {
  StringTransformer program;
  Score score;
  std::string serial;
};

// Best-first enumeration of transformer combinations across variables,
// ordered by summed score then concatenated serialization.
std::vector<Transformer> topk_combinations(
    const std::vector<std::pair<VarId, std::vector<ScoredTransformer>>>& options,
    std::size_t k) {
  std::vector<Transformer> result;
  if (options.empty()) {
    result.emplace_back();
    return result;
  }
  struct State {
    std::vector<std::size_t> idx;
    Score score;
    std::string serial;
  };
  auto make_state = [&](std::vector<std::size_t> idx) {
    State s;
    s.idx = std::move(idx);
    for (std::size_t i = 0; i < options.size(); ++i) {
      const ScoredTransformer& t = options[i].second[s.idx[i]];
      s.score = s.score + t.score;
      s.serial += t.serial;
      s.serial += '\n';
    }
    return s;
  };
  auto worse = [](const State& a, const State& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.serial > b.serial;
  };
  std::priority_queue<State, std::vector<State>, decltype(worse)> queue(worse);
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> first(options.size(), 0);
  seen.insert(first);
  queue.push(make_state(std::move(first)));
  while (!queue.empty() && result.size() < k) {
    State best = queue.top();
    queue.pop();
    Transformer t;
    for (std::size_t i = 0; i < options.size(); ++i)
      t.emplace(options[i].first, options[i].second[best.idx[i]].program);
    result.push_back(std::move(t));
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (best.idx[i] + 1 >= options[i].second.size()) continue;
      std::vector<std::size_t> next = best.idx;
      ++next[i];
      if (seen.insert(next).second) queue.push(make_state(std::move(next)));
    }
  }
  return result;
}

}  // namespace

SynthResult<RuleVsa> synth_rule_vsa(const std::vector<Example>& examples) {
  auto ep_result = synth_error_pattern(examples);
  if (auto* f = std::get_if<SynthFailure>(&ep_result)) return *f;
  ErrorPattern ep = std::get<ErrorPattern>(std::move(ep_result));

  auto relaxers_result = synth_relaxers(examples, ep);
  if (auto* f = std::get_if<SynthFailure>(&relaxers_result)) return *f;
  std::set<Relaxer> relaxers = std::get<std::set<Relaxer>>(std::move(relaxers_result));

  auto prepared_result = prepare_examples(examples, ep, relaxers);
  if (auto* f = std::get_if<SynthFailure>(&prepared_result)) return *f;
  auto& prepared = std::get<std::vector<PreparedExample>>(prepared_result);

  RuleVsa rule_vsa;
  rule_vsa.error_pattern = std::move(ep);
  rule_vsa.relaxers = std::move(relaxers);
  for (const PreparedExample& pe : prepared) {
    for (const auto& [v, input] : pe.inputs) {
      StringVsaPtr vsa = gen_string({input}, pe.outputs.at(v));
      auto it = rule_vsa.transformer_vsas.find(v);
      if (it == rule_vsa.transformer_vsas.end()) {
        rule_vsa.transformer_vsas.emplace(v, std::move(vsa));
      } else {
        it->second = intersect(it->second, vsa);
      }
    }
  }
  for (const auto& [v, vsa] : rule_vsa.transformer_vsas) {
    if (!vsa)
      return SynthFailure{SynthCause::InconsistentExamples,
                          "no consistent transformer for " + v.to_string()};
  }
  return rule_vsa;
}

SynthResult<std::vector<Rule>> synth_rule(const std::vector<Example>& examples,
                                          std::size_t k) {
  if (examples.empty())
    return SynthFailure{SynthCause::EmptyExamples, "no examples given"};
  auto vsa_result = synth_rule_vsa(examples);
  if (auto* f = std::get_if<SynthFailure>(&vsa_result)) return *f;
  RuleVsa& rule_vsa = std::get<RuleVsa>(vsa_result);

  std::vector<std::pair<VarId, std::vector<ScoredTransformer>>> options;
  for (const auto& [v, vsa] : rule_vsa.transformer_vsas) {
    std::vector<ScoredTransformer> scored;
    for (StringTransformer& t : enumerate_topk(vsa, k)) {
      ScoredTransformer st;
      st.score = score_of(t);
      st.serial = to_string(t);
      st.program = std::move(t);
      scored.push_back(std::move(st));
    }
    options.emplace_back(v, std::move(scored));
  }

  std::vector<Rule> rules;
  for (Transformer& t : topk_combinations(options, k)) {
    Rule rule{rule_vsa.error_pattern, rule_vsa.relaxers, std::move(t)};
    bool consistent = true;
    for (const Example& e : examples) {
      auto outcome = apply_rule(rule, e.eq, e.err);
      if (!outcome.fixed || *outcome.fixed != e.fix) {
        consistent = false;
        break;
      }
    }
    if (consistent) rules.push_back(std::move(rule));
  }
  if (rules.empty())
    return SynthFailure{SynthCause::InconsistentExamples,
                        "no rule reproduces every training fix"};
  return rules;
}

SynthResult<std::vector<Rule>> refine_rule(const std::vector<Example>& entry_examples,
                                           const Example& new_example, std::size_t k) {
  std::vector<Example> all = entry_examples;
  all.push_back(new_example);
  return synth_rule(all, k);
}

// ---- rule application ----

std::variant<ApplyTrace, ApplyStep> apply_rule_trace(const Rule& rule, std::string_view eq,
                                                     const ErrorMessage& err) {
  auto sigma = match_error_pattern(rule.error_pattern, err);
  if (!sigma) return ApplyStep::ErrorMatch;

  auto pattern = generate_pattern(eq, *sigma);
  if (!pattern) return ApplyStep::PatternGen;
  EquationPattern relaxed = apply_relaxers_impl(*pattern, rule.relaxers, false).pattern;

  auto inputs = match_equation_pattern(relaxed, eq);
  if (!inputs) return ApplyStep::EquationMatch;

  Bindings transformed;
  for (const VarId& v : relaxed.variables()) {
    auto it = rule.transformer.find(v);
    if (it == rule.transformer.end()) return ApplyStep::MissingTransformer;
    auto output = eval_transformer(it->second, inputs->at(v));
    if (!output) return ApplyStep::Transform;
    transformed.emplace(v, std::move(*output));
  }

  ApplyTrace trace;
  trace.error_bindings = std::move(*sigma);
  trace.pattern = std::move(relaxed);
  trace.fixed = instantiate(trace.pattern, transformed);
  trace.transformed = std::move(transformed);
  return trace;
}

ApplyOutcome apply_rule(const Rule& rule, std::string_view eq, const ErrorMessage& err) {
  auto result = apply_rule_trace(rule, eq, err);
  ApplyOutcome outcome;
  if (auto* step = std::get_if<ApplyStep>(&result)) {
    outcome.failed_step = *step;
  } else {
    outcome.fixed = std::move(std::get<ApplyTrace>(result).fixed);
  }
  return outcome;
}

}  // namespace eqfix
