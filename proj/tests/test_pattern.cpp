#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "eqfix/errors.hpp"
#include "eqfix/pattern.hpp"
#include "test_support.hpp"

using namespace eqfix;

namespace {

Matcher S(const char* s) { return Matcher::str(s); }
Matcher V(int i) { return Matcher::var(VarId::base(i)); }

EquationPattern eqp(std::vector<Matcher> ms) { return EquationPattern{std::move(ms)}; }
ErrorPattern erp(std::vector<Matcher> ms) { return ErrorPattern{std::move(ms)}; }

}  // namespace

TEST_CASE("tokenize_message splits on whitespace") {
  CHECK(tokenize_message("superscript 10").tokens ==
        std::vector<std::string>{"superscript", "10"});
  CHECK(tokenize_message("Missing } inserted").tokens ==
        std::vector<std::string>{"Missing", "}", "inserted"});
  CHECK(tokenize_message("x").tokens == std::vector<std::string>{"x"});
  CHECK(tokenize_message("  a\t b \n").tokens == std::vector<std::string>{"a", "b"});
  CHECK_THROWS_AS(tokenize_message("   \t  "), EmptyMessageError);
  CHECK_THROWS_AS(tokenize_message(""), EmptyMessageError);
}

TEST_CASE("tokenize_message round-trips through single-space join") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::string text = testsup::random_string(rng, 1, 20, "ab}  $^ 1 0");
    ErrorMessage msg;
    try {
      msg = tokenize_message(text);
    } catch (const EmptyMessageError&) {
      continue;
    }
    for (const std::string& t : msg.tokens) CHECK(!t.empty());
    CHECK(tokenize_message(msg.to_string()).tokens == msg.tokens);
  }
}

TEST_CASE("match_error_pattern binds variable tokens") {
  ErrorPattern ep1 = erp({S("superscript"), V(1)});
  auto b = match_error_pattern(ep1, tokenize_message("superscript 123"));
  REQUIRE(b);
  CHECK(b->at(VarId::base(1)) == "123");

  CHECK(!match_error_pattern(ep1, tokenize_message("subscript 123")));
  CHECK(!match_error_pattern(erp({V(1), V(2)}), tokenize_message("a")));

  // determinism: same inputs, same result
  auto again = match_error_pattern(ep1, tokenize_message("superscript 123"));
  CHECK(b == again);
}

TEST_CASE("match_equation_pattern locates literals leftmost") {
  auto b = match_equation_pattern(eqp({V(1), S("foo"), V(2)}), "(foo)");
  REQUIRE(b);
  CHECK(b->at(VarId::base(1)) == "(");
  CHECK(b->at(VarId::base(2)) == ")");

  auto b2 = match_equation_pattern(eqp({S("$y^"), V(1), S("+x$")}), "$y^123+x$");
  REQUIRE(b2);
  CHECK(b2->at(VarId::base(1)) == "123");

  auto b3 = match_equation_pattern(eqp({S("$x^{10}$")}), "$x^{10}$");
  REQUIRE(b3);
  CHECK(b3->empty());

  CHECK(!match_equation_pattern(eqp({S("$x^{10}$")}), "$x^{11}$"));
  CHECK(!match_equation_pattern(eqp({S("a"), V(1)}), "a"));     // empty variable
  CHECK(!match_equation_pattern(eqp({V(1), S("z")}), "abc"));   // literal missing
  CHECK(!match_equation_pattern(eqp({S("a"), V(1), S("b")}), "aXbY"));  // leftover
}

TEST_CASE("match_equation_pattern agrees with the exhaustive oracle on [a,v,a]/aba") {
  EquationPattern p = eqp({S("a"), V(1), S("a")});
  auto splits = testsup::brute_match(p, "aba");
  REQUIRE(splits.size() == 1);  // the split is unique
  Bindings expected = *splits.begin();
  CHECK(expected.at(VarId::base(1)) == "b");
  auto got = match_equation_pattern(p, "aba");
  REQUIRE(got);
  CHECK(*got == expected);
}

TEST_CASE("duplicate variables must bind equal text") {
  EquationPattern p = eqp({S("a"), V(1), S("b"), V(1), S("c")});
  auto ok = match_equation_pattern(p, "aXbXc");
  REQUIRE(ok);
  CHECK(ok->at(VarId::base(1)) == "X");
  CHECK(!match_equation_pattern(p, "aXbYc"));
}

TEST_CASE("instantiate substitutes bindings") {
  Bindings b{{VarId::base(1), "123"}};
  CHECK(instantiate(eqp({S("$y^"), V(1), S("+x$")}), b) == "$y^123+x$");
  Bindings braced{{VarId::base(1), "{123}"}};
  CHECK(instantiate(eqp({S("$y^"), V(1), S("+x$")}), braced) == "$y^{123}+x$");
  CHECK(instantiate(eqp({S("k")}), {}) == "k");
  CHECK_THROWS_AS(instantiate(eqp({S("a"), V(2)}), b), UnboundVariableError);
}

TEST_CASE("generate_pattern substitutes bound values") {
  Bindings b{{VarId::base(1), "123"}};
  auto p = generate_pattern("$y^123+x$", b);
  REQUIRE(p);
  CHECK(*p == eqp({S("$y^"), V(1), S("+x$")}));

  auto p1 = generate_pattern("$x^10$", Bindings{{VarId::base(1), "10"}});
  REQUIRE(p1);
  CHECK(*p1 == eqp({S("$x^"), V(1), S("$")}));

  auto p2 = generate_pattern("abc", {});
  REQUIRE(p2);
  CHECK(*p2 == eqp({S("abc")}));

  CHECK_THROWS_AS(generate_pattern("abc", Bindings{{VarId::base(1), ""}}),
                  EmptyBindingValueError);
}

TEST_CASE("generate_pattern replaces all occurrences with one variable") {
  Bindings b{{VarId::base(1), "X"}};
  auto oracle = testsup::brute_generate("aXbXc", b);
  REQUIRE(oracle);
  CHECK(*oracle == eqp({S("a"), V(1), S("b"), V(1), S("c")}));
  auto p = generate_pattern("aXbXc", b);
  REQUIRE(p);
  CHECK(*p == *oracle);
}

TEST_CASE("generate_pattern failure cases") {
  // adjacent variables
  CHECK(!generate_pattern("1023", Bindings{{VarId::base(1), "10"}, {VarId::base(2), "23"}}));
  // whole equation bound by one variable is fine
  auto whole = generate_pattern("10", Bindings{{VarId::base(1), "10"}});
  REQUIRE(whole);
  CHECK(*whole == eqp({V(1)}));
  // ambiguous substitution: re-matching cannot recover the bindings
  CHECK(!generate_pattern("xyy", Bindings{{VarId::base(1), "xy"}}));
}

TEST_CASE("generation prefers longer values and respects earlier substitutions") {
  Bindings b{{VarId::base(1), "ab"}, {VarId::base(2), "b"}};
  auto p = generate_pattern("ab b", b);
  REQUIRE(p);
  CHECK(*p == eqp({V(1), S(" "), V(2)}));
}

TEST_CASE("round-trip: match then instantiate reproduces the equation") {
  std::mt19937 rng(11);
  int matched = 0;
  for (int i = 0; i < 1000; ++i) {
    // random alternating pattern
    EquationPattern p;
    std::uniform_int_distribution<int> segs(1, 4);
    std::uniform_int_distribution<int> coin(0, 1);
    bool var_next = coin(rng) == 0;
    int n = segs(rng);
    int vid = 1;
    for (int s = 0; s < n; ++s) {
      if (var_next) {
        p.matchers.push_back(V(vid++));
      } else {
        p.matchers.push_back(Matcher::str(testsup::random_string(rng, 1, 3)));
      }
      var_next = !var_next;
    }
    std::string eq = testsup::random_string(rng, 1, 8);
    auto b = match_equation_pattern(p, eq);
    if (!b) continue;
    ++matched;
    CHECK(instantiate(p, *b) == eq);
    // and the oracle agrees this is a valid split
    auto all = testsup::brute_match(p, eq);
    CHECK(all.count(*b) == 1);
  }
  CHECK(matched > 20);  // the generator must actually exercise the property
}

TEST_CASE("round-trip: generate then match recovers the bindings") {
  std::mt19937 rng(13);
  int generated = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string eq = testsup::random_string(rng, 1, 10);
    Bindings b;
    std::uniform_int_distribution<int> vars(1, 2);
    int n = vars(rng);
    for (int v = 1; v <= n; ++v) {
      // values drawn from eq's substrings half of the time
      std::string value;
      if (eq.size() > 1 && i % 2 == 0) {
        std::uniform_int_distribution<std::size_t> at(0, eq.size() - 2);
        std::size_t start = at(rng);
        std::uniform_int_distribution<std::size_t> len(1, eq.size() - start);
        value = eq.substr(start, len(rng));
      } else {
        value = testsup::random_string(rng, 1, 3);
      }
      b.emplace(VarId::base(v), value);
    }
    auto p = generate_pattern(eq, b);
    if (!p) continue;
    ++generated;
    auto back = match_equation_pattern(*p, eq);
    REQUIRE(back);
    for (const auto& [v, value] : *back) CHECK(value == b.at(v));
  }
  CHECK(generated > 100);
}

TEST_CASE("generate_pattern output always alternates") {
  std::mt19937 rng(17);
  for (int i = 0; i < 500; ++i) {
    std::string eq = testsup::random_string(rng, 1, 8, "abab1");
    Bindings b{{VarId::base(1), testsup::random_string(rng, 1, 2, "ab1")}};
    auto p = generate_pattern(eq, b);
    if (p) CHECK(p->alternates());
  }
}

TEST_CASE("variable ids print and parse") {
  VarId composite = VarId::right(VarId::binary(VarId::base(4), VarId::base(6)));
  CHECK(composite.to_string() == "RVar(BVar(v4,v6))");
  CHECK(VarId::parse("RVar(BVar(v4,v6))") == composite);
  CHECK(VarId::parse("Top") == VarId::top());
  CHECK(VarId::parse("v12") == VarId::base(12));
  CHECK_THROWS_AS(VarId::parse("w1"), FormatError);
  CHECK_THROWS_AS(VarId::parse("v1 "), FormatError);
}
