#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eqfix/errors.hpp"
#include "eqfix/rule.hpp"

using namespace eqfix;

namespace {

Matcher S(const char* s) { return Matcher::str(s); }
Matcher V(int i) { return Matcher::var(VarId::base(i)); }
Matcher VC(VarId id) { return Matcher::var(std::move(id)); }

Example ex(const char* eq, const char* err, const char* fix) {
  return Example{eq, tokenize_message(err), fix};
}

// motivating examples
const Example kEx1 = ex("$x^10$", "superscript 10", "$x^{10}$");
const Example kEx2 = ex("$y^123+x$", "superscript 123", "$y^{123}+x$");
const Example kEx3 = ex("$f^(k)$", "superscript (k)", "$f^{(k)}$");
const Example kEx4 = ex("$y=x+\\ldots+x^10$", "superscript 10", "$y=x+\\ldots+x^{10}$");
const Example kEx5 = ex("${1,2,3$", "Missing } inserted", "${1,2,3}$");
const Example kEx6 = ex("$S={x_1,\\ldots,x_n$", "Missing } inserted",
                        "$S={x_1,\\ldots,x_n}$");
const Example kEx7 = ex("$2\\^x$", "Command \\^ invalid in math mode", "$2^x$");
const Example kEx8 = ex("$\\sum\\limits_{i=1}\\^N t_i$", "Command \\^ invalid in math mode",
                        "$\\sum\\limits_{i=1}^N t_i$");

const std::vector<Rule>& rules_of(const SynthResult<std::vector<Rule>>& r) {
  REQUIRE(std::holds_alternative<std::vector<Rule>>(r));
  return std::get<std::vector<Rule>>(r);
}

}  // namespace

TEST_CASE("synth_error_pattern replaces equation-related tokens") {
  auto r1 = synth_error_pattern({kEx1});
  REQUIRE(synth_ok(r1));
  CHECK(std::get<ErrorPattern>(r1) == ErrorPattern{{S("superscript"), V(1)}});

  auto r5 = synth_error_pattern({kEx5});
  REQUIRE(synth_ok(r5));
  CHECK(std::get<ErrorPattern>(r5) == ErrorPattern{{S("Missing"), V(1), S("inserted")}});

  // tokens unrelated to both equations stay literal
  Example a = ex("1+1", "bad thing", "1+2");
  Example b = ex("2+2", "bad thing", "2+3");
  auto rc = synth_error_pattern({a, b});
  REQUIRE(synth_ok(rc));
  CHECK(std::get<ErrorPattern>(rc) == ErrorPattern{{S("bad"), S("thing")}});
}

TEST_CASE("synth_error_pattern turns differing tokens into variables") {
  auto r = synth_error_pattern({kEx1, kEx2});
  REQUIRE(synth_ok(r));
  CHECK(std::get<ErrorPattern>(r) == ErrorPattern{{S("superscript"), V(1)}});

  auto mismatch = synth_error_pattern({kEx1, kEx5});
  REQUIRE(!synth_ok(mismatch));
  CHECK(std::get<SynthFailure>(mismatch).cause == SynthCause::TokenCountMismatch);
  // oracle for the mismatch: the message shapes really do differ
  CHECK(kEx1.err.tokens.size() != kEx5.err.tokens.size());
}

TEST_CASE("extract_string_examples collects per-variable pairs") {
  ErrorPattern ep1{{S("superscript"), V(1)}};
  auto r = extract_string_examples({kEx1, kEx2}, ep1);
  auto* pairs = std::get_if<StringExamples>(&r);
  REQUIRE(pairs);
  const auto& v1 = pairs->at(VarId::base(1));
  REQUIRE(v1.size() == 2);
  CHECK(v1[0] == std::pair<std::string, std::string>{"10", "{10}"});
  CHECK(v1[1] == std::pair<std::string, std::string>{"123", "{123}"});
}

TEST_CASE("extract_string_examples reports the unmatchable example") {
  ErrorPattern ep2{{S("Missing"), V(1), S("inserted")}};
  auto r = extract_string_examples({kEx5}, ep2);
  auto* failure = std::get_if<ExtractFailure>(&r);
  REQUIRE(failure);
  CHECK(failure->unmatched == kEx5);
}

TEST_CASE("extract_string_examples keeps identity pairs") {
  // v2's token changes, v1's stays put
  Example e = ex("9+u", "9 u", "9+w");
  ErrorPattern ep{{V(1), V(2)}};
  auto r = extract_string_examples({e}, ep);
  auto* pairs = std::get_if<StringExamples>(&r);
  REQUIRE(pairs);
  CHECK(pairs->at(VarId::base(1))[0] == std::pair<std::string, std::string>{"9", "9"});
  CHECK(pairs->at(VarId::base(2))[0] == std::pair<std::string, std::string>{"u", "w"});
}

TEST_CASE("relaxation: constant pattern goes straight to Top") {
  EquationPattern p5{{S("${1,2,3$")}};
  EquationPattern relaxed = relax_pattern(p5, kEx5.fix);
  CHECK(relaxed == EquationPattern{{VC(VarId::top())}});
}

TEST_CASE("relaxation: middle literal merges its neighbours") {
  // [s1, v1, s3, v2] where s3 vanished from the fix
  EquationPattern p{{S("A"), V(1), S("C"), V(2)}};
  EquationPattern relaxed = relax_pattern(p, "Axyz");
  CHECK(relaxed ==
        EquationPattern{{S("A"), VC(VarId::binary(VarId::base(1), VarId::base(2)))}});
  CHECK(match_equation_pattern(relaxed, "Axyz"));
}

TEST_CASE("relaxation: three-step chain") {
  // [s1, v2, s3, v4, s5, v6, s7] against s1'.s2.s3.s4.s5'.s6.s7'
  EquationPattern p{{S("P"), V(2), S("-"), V(4), S("="), V(6), S("!")}};
  const std::string fix = "Qa-b~c?";
  EquationPattern relaxed = relax_pattern(p, fix);
  VarId lvar = VarId::left(VarId::base(2));
  VarId rvar = VarId::right(VarId::binary(VarId::base(4), VarId::base(6)));
  CHECK(relaxed == EquationPattern{{VC(lvar), S("-"), VC(rvar)}});
  auto b = match_equation_pattern(relaxed, fix);
  REQUIRE(b);
  CHECK(b->at(lvar) == "Qa");
  CHECK(b->at(rvar) == "b~c?");
}

TEST_CASE("relaxation handles literals that survive in the fix") {
  // every literal is a substring of the fix, yet the pattern cannot match
  EquationPattern p{{S("a"), V(1), S("a")}};
  EquationPattern relaxed = relax_pattern(p, "aa");
  CHECK(relaxed.matchers.size() < p.matchers.size());
  CHECK(match_equation_pattern(relaxed, "aa"));
}

TEST_CASE("relaxation soundness on the motivating examples") {
  for (const Example& e : {kEx5, kEx6}) {
    EquationPattern constant{{Matcher::str(e.eq)}};
    EquationPattern relaxed = relax_pattern(constant, e.fix);
    CHECK(match_equation_pattern(relaxed, e.fix));
  }
}

TEST_CASE("synth_relaxers: no relaxation needed") {
  ErrorPattern ep1{{S("superscript"), V(1)}};
  auto r = synth_relaxers({kEx1, kEx2}, ep1);
  REQUIRE(synth_ok(r));
  CHECK(std::get<std::set<Relaxer>>(r).empty());
}

TEST_CASE("synth_relaxers translates composite variables") {
  // one-example scenario shaped like the binary relaxation
  Example e = ex("AxCy", "edit x y", "Auvw");
  ErrorPattern ep{{S("edit"), V(1), V(2)}};
  auto r = synth_relaxers({e}, ep);
  REQUIRE(synth_ok(r));
  std::set<Relaxer> expected{
      Relaxer::binary(Relaxer::id(VarId::base(1)), Relaxer::id(VarId::base(2)))};
  CHECK(std::get<std::set<Relaxer>>(r) == expected);
}

TEST_CASE("synth_relaxers three-step scenario") {
  Example e = ex("Pa-b=c!", "edit a b c", "Qa-b~c?");
  ErrorPattern ep{{S("edit"), V(1), V(2), V(3)}};
  auto r = synth_relaxers({e}, ep);
  REQUIRE(synth_ok(r));
  std::set<Relaxer> expected{
      Relaxer::left(Relaxer::id(VarId::base(1))),
      Relaxer::right(Relaxer::binary(Relaxer::id(VarId::base(2)),
                                     Relaxer::id(VarId::base(3))))};
  CHECK(std::get<std::set<Relaxer>>(r) == expected);
}

TEST_CASE("synth_relaxers inherits earlier relaxers") {
  ErrorPattern ep2{{S("Missing"), V(1), S("inserted")}};
  auto r = synth_relaxers({kEx5, kEx6}, ep2);
  REQUIRE(synth_ok(r));
  CHECK(std::get<std::set<Relaxer>>(r) == std::set<Relaxer>{Relaxer::top()});
}

TEST_CASE("apply_relaxers") {
  EquationPattern p{{S("A"), V(1), S("C"), V(2)}};
  std::set<Relaxer> binary{
      Relaxer::binary(Relaxer::id(VarId::base(1)), Relaxer::id(VarId::base(2)))};
  CHECK(apply_relaxers(p, binary) ==
        EquationPattern{{S("A"), VC(VarId::binary(VarId::base(1), VarId::base(2)))}});

  CHECK(apply_relaxers(p, {}) == p);

  EquationPattern constant{{S("${1,2,3$")}};
  CHECK(apply_relaxers(constant, {Relaxer::top()}) ==
        EquationPattern{{VC(VarId::top())}});

  std::set<Relaxer> missing{Relaxer::id(VarId::base(9))};
  CHECK_THROWS_AS(apply_relaxers(p, missing), InapplicableRelaxerError);
}

TEST_CASE("apply_relaxers boundary absorption") {
  EquationPattern p{{S("P"), V(2), S("-"), V(4), S("="), V(6), S("!")}};
  std::set<Relaxer> rs{
      Relaxer::left(Relaxer::id(VarId::base(2))),
      Relaxer::right(Relaxer::binary(Relaxer::id(VarId::base(4)),
                                     Relaxer::id(VarId::base(6))))};
  EquationPattern relaxed = apply_relaxers(p, rs);
  VarId lvar = VarId::left(VarId::base(2));
  VarId rvar = VarId::right(VarId::binary(VarId::base(4), VarId::base(6)));
  CHECK(relaxed == EquationPattern{{VC(lvar), S("-"), VC(rvar)}});
}

TEST_CASE("synth_rule from one example generalizes to the second") {
  auto r = synth_rule({kEx1}, 10);
  const auto& rules = rules_of(r);
  REQUIRE(!rules.empty());
  bool solves = false;
  for (const Rule& rule : rules) {
    auto outcome = apply_rule(rule, kEx2.eq, kEx2.err);
    if (outcome.fixed && *outcome.fixed == kEx2.fix) {
      solves = true;
      break;
    }
  }
  CHECK(solves);
}

TEST_CASE("synth_rule from two examples solves the remaining problems") {
  auto r = synth_rule({kEx1, kEx2}, 10);
  const auto& rules = rules_of(r);
  REQUIRE(!rules.empty());
  auto f3 = apply_rule(rules[0], kEx3.eq, kEx3.err);
  REQUIRE(f3.fixed);
  CHECK(*f3.fixed == kEx3.fix);
  auto f4 = apply_rule(rules[0], kEx4.eq, kEx4.err);
  REQUIRE(f4.fixed);
  CHECK(*f4.fixed == kEx4.fix);
}

TEST_CASE("synth_rule rejects contradictory examples") {
  Example a = ex("$x^10$", "superscript 10", "$x^{10}$");
  Example contradiction = ex("$x^10$", "superscript 10", "$x_{10}$");
  auto r = synth_rule({a, contradiction}, 10);
  REQUIRE(!synth_ok(r));
  CHECK(std::get<SynthFailure>(r).cause == SynthCause::InconsistentExamples);
}

TEST_CASE("every synthesized rule reproduces its training fixes") {
  const std::vector<std::vector<Example>> groups = {
      {kEx1}, {kEx1, kEx2}, {kEx5}, {kEx5, kEx6}, {kEx7}, {kEx7, kEx8}};
  for (const auto& examples : groups) {
    auto r = synth_rule(examples, 10);
    const auto& rules = rules_of(r);
    REQUIRE(!rules.empty());
    for (const Rule& rule : rules) {
      for (const Example& e : examples) {
        auto outcome = apply_rule(rule, e.eq, e.err);
        REQUIRE(outcome.fixed);
        CHECK(*outcome.fixed == e.fix);
      }
    }
  }
}

TEST_CASE("apply_rule step-by-step trace") {
  auto r = synth_rule({kEx1, kEx2}, 10);
  const Rule& rule = rules_of(r)[0];
  auto traced = apply_rule_trace(rule, kEx2.eq, kEx2.err);
  auto* trace = std::get_if<ApplyTrace>(&traced);
  REQUIRE(trace);
  CHECK(trace->error_bindings == Bindings{{VarId::base(1), "123"}});
  CHECK(trace->pattern == EquationPattern{{S("$y^"), V(1), S("+x$")}});
  CHECK(trace->transformed == Bindings{{VarId::base(1), "{123}"}});
  CHECK(trace->fixed == "$y^{123}+x$");
}

TEST_CASE("apply_rule failure steps") {
  auto r = synth_rule({kEx1, kEx2}, 10);
  const Rule& rule = rules_of(r)[0];
  auto outcome = apply_rule(rule, kEx5.eq, kEx5.err);
  CHECK(!outcome.fixed);
  CHECK(outcome.failed_step == ApplyStep::ErrorMatch);

  // missing transformer: the message binds a token that is in this equation,
  // so the generated pattern has a variable the rule never trained on
  Rule stripped = rule;
  stripped.transformer.clear();
  auto missing = apply_rule(stripped, kEx2.eq, kEx2.err);
  CHECK(!missing.fixed);
  CHECK(missing.failed_step == ApplyStep::MissingTransformer);
}

TEST_CASE("rule application uses the relaxers") {
  auto r = synth_rule({kEx5}, 10);
  const auto& rules = rules_of(r);
  REQUIRE(!rules.empty());
  CHECK(rules[0].relaxers == std::set<Relaxer>{Relaxer::top()});
  auto f6 = apply_rule(rules[0], kEx6.eq, kEx6.err);
  REQUIRE(f6.fixed);
  CHECK(*f6.fixed == kEx6.fix);
}

TEST_CASE("rule from the invalid-command pair fixes the harder case") {
  auto r = synth_rule({kEx7}, 10);
  const auto& rules = rules_of(r);
  auto f8 = apply_rule(rules[0], kEx8.eq, kEx8.err);
  REQUIRE(f8.fixed);
  CHECK(*f8.fixed == kEx8.fix);
}

TEST_CASE("refine_rule") {
  auto refined = refine_rule({kEx1}, kEx2, 10);
  const auto& rules = rules_of(refined);
  for (const Example& e : {kEx1, kEx2}) {
    auto outcome = apply_rule(rules[0], e.eq, e.err);
    REQUIRE(outcome.fixed);
    CHECK(*outcome.fixed == e.fix);
  }

  auto incompatible = refine_rule({kEx1}, kEx5, 10);
  REQUIRE(!synth_ok(incompatible));
  CHECK(std::get<SynthFailure>(incompatible).cause == SynthCause::TokenCountMismatch);

  // refining with a duplicate is the same as synthesizing from one copy
  auto once = synth_rule({kEx1}, 10);
  auto twice = refine_rule({kEx1}, kEx1, 10);
  const auto& r1 = rules_of(once);
  const auto& r2 = rules_of(twice);
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].error_pattern == r2[i].error_pattern);
    CHECK(r1[i].transformer == r2[i].transformer);
  }
}

TEST_CASE("relaxers print and parse") {
  Relaxer r = Relaxer::right(
      Relaxer::binary(Relaxer::id(VarId::base(4)), Relaxer::id(VarId::base(6))));
  CHECK(r.to_string() == "RRelax(BRelax(Id(v4),Id(v6)))");
  CHECK(Relaxer::parse(r.to_string()) == r);
  CHECK(Relaxer::parse("TopRelax") == Relaxer::top());
  CHECK(Relaxer::parse("LRelax(Id(v2))") == Relaxer::left(Relaxer::id(VarId::base(2))));
  CHECK_THROWS_AS(Relaxer::parse("Nonsense(v1)"), FormatError);
}
