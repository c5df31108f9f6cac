#pragma once

// Shared test oracles and generators. The oracles re-derive expected results
// by exhaustive search, independent of the code paths under test.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eqfix/pattern.hpp"
#include "eqfix/transform.hpp"

namespace testsup {

using eqfix::Bindings;
using eqfix::EquationPattern;
using eqfix::Matcher;
using eqfix::VarId;

// Every way to split eq across the pattern's matchers (variables bind
// non-empty text, duplicates must agree). Exponential; test inputs are tiny.
inline void brute_match_rec(const std::vector<Matcher>& ms, std::size_t mi,
                            const std::string& eq, std::size_t pos, Bindings& acc,
                            std::set<Bindings>& out) {
  if (mi == ms.size()) {
    if (pos == eq.size()) out.insert(acc);
    return;
  }
  const Matcher& m = ms[mi];
  if (m.is_str()) {
    if (eq.compare(pos, m.value.size(), m.value) == 0)
      brute_match_rec(ms, mi + 1, eq, pos + m.value.size(), acc, out);
    return;
  }
  for (std::size_t end = pos + 1; end <= eq.size(); ++end) {
    std::string value = eq.substr(pos, end - pos);
    auto it = acc.find(*m.id);
    if (it != acc.end()) {
      if (it->second != value) continue;
      brute_match_rec(ms, mi + 1, eq, end, acc, out);
    } else {
      acc.emplace(*m.id, value);
      brute_match_rec(ms, mi + 1, eq, end, acc, out);
      acc.erase(*m.id);
    }
  }
}

inline std::set<Bindings> brute_match(const EquationPattern& p, const std::string& eq) {
  std::set<Bindings> out;
  Bindings acc;
  brute_match_rec(p.matchers, 0, eq, 0, acc, out);
  return out;
}

// Independent substitution: repeatedly stamp variable markers over the
// equation, longest values first, skipping already-marked cells.
inline std::optional<EquationPattern> brute_generate(const std::string& eq,
                                                     const Bindings& b) {
  std::vector<int> owner(eq.size(), -1);  // index into vars, -1 = literal
  std::vector<VarId> vars;
  std::vector<std::string> values;
  for (const auto& [v, s] : b) {
    vars.push_back(v);
    values.push_back(s);
  }
  std::vector<std::size_t> order(vars.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return values[x].size() > values[y].size();
  });
  for (std::size_t oi : order) {
    const std::string& s = values[oi];
    for (std::size_t at = 0; at + s.size() <= eq.size();) {
      bool free = eq.compare(at, s.size(), s) == 0;
      for (std::size_t j = at; free && j < at + s.size(); ++j)
        if (owner[j] != -1) free = false;
      if (free) {
        for (std::size_t j = at; j < at + s.size(); ++j) owner[j] = static_cast<int>(oi);
        at += s.size();
      } else {
        ++at;
      }
    }
  }
  EquationPattern p;
  std::size_t i = 0;
  while (i < eq.size()) {
    if (owner[i] == -1) {
      std::size_t j = i;
      while (j < eq.size() && owner[j] == -1) ++j;
      p.matchers.push_back(Matcher::str(eq.substr(i, j - i)));
      i = j;
    } else {
      int v = owner[i];
      std::size_t j = i + values[static_cast<std::size_t>(v)].size();
      p.matchers.push_back(Matcher::var(vars[static_cast<std::size_t>(v)]));
      i = j;
    }
  }
  if (!p.alternates()) return std::nullopt;
  return p;
}

// Small-alphabet random strings keep substring structure rich.
inline std::string random_string(std::mt19937& rng, std::size_t min_len,
                                 std::size_t max_len,
                                 const std::string& alphabet = "ab{}^_10$+") {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string out;
  std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) out += alphabet[pick(rng)];
  return out;
}

}  // namespace testsup
