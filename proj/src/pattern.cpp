#include "eqfix/pattern.hpp"

#include <algorithm>
#include <cctype>

#include "eqfix/errors.hpp"

namespace eqfix {

Matcher Matcher::str(std::string value) {
  Matcher m;
  m.value = std::move(value);
  return m;
}

Matcher Matcher::var(VarId id) {
  Matcher m;
  m.id = std::move(id);
  return m;
}

namespace {

std::string matcher_to_string(const Matcher& m) {
  if (m.is_var()) return m.id->to_string();
  return "\"" + m.value + "\"";
}

std::string matchers_to_string(const std::vector<Matcher>& ms) {
  std::string out = "[";
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) out += ", ";
    out += matcher_to_string(ms[i]);
  }
  return out + "]";
}

}  // namespace

std::string ErrorPattern::to_string() const { return matchers_to_string(matchers); }
std::string EquationPattern::to_string() const { return matchers_to_string(matchers); }

bool EquationPattern::is_constant() const {
  return std::none_of(matchers.begin(), matchers.end(),
                      [](const Matcher& m) { return m.is_var(); });
}

bool EquationPattern::alternates() const {
  for (std::size_t i = 1; i < matchers.size(); ++i) {
    if (matchers[i].is_var() == matchers[i - 1].is_var()) return false;
  }
  return true;
}

std::vector<VarId> EquationPattern::variables() const {
  std::vector<VarId> out;
  for (const Matcher& m : matchers) {
    if (m.is_var() && std::find(out.begin(), out.end(), *m.id) == out.end())
      out.push_back(*m.id);
  }
  return out;
}

std::string ErrorMessage::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

ErrorMessage tokenize_message(std::string_view text) {
  ErrorMessage msg;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) msg.tokens.emplace_back(text.substr(start, i - start));
  }
  if (msg.tokens.empty()) throw EmptyMessageError();
  return msg;
}

std::optional<Bindings> match_error_pattern(const ErrorPattern& ep,
                                            const ErrorMessage& msg) {
  if (ep.matchers.size() != msg.tokens.size()) return std::nullopt;
  Bindings b;
  for (std::size_t i = 0; i < ep.matchers.size(); ++i) {
    const Matcher& m = ep.matchers[i];
    if (m.is_str()) {
      if (m.value != msg.tokens[i]) return std::nullopt;
    } else {
      auto [it, inserted] = b.emplace(*m.id, msg.tokens[i]);
      if (!inserted && it->second != msg.tokens[i]) return std::nullopt;
    }
  }
  return b;
}

namespace detail {

EquationMatch match_equation_detail(const EquationPattern& p, std::string_view eq) {
  const auto& ms = p.matchers;
  EquationMatch result;
  if (ms.empty()) return result;

  Bindings b;
  std::size_t pos = 0;                      // next unconsumed index of eq
  std::optional<std::size_t> pending_var;   // index of a variable awaiting its end

  auto bind = [&](std::size_t var_idx, std::size_t end) -> bool {
    // end is one past the variable's region
    if (end <= pos) return false;  // variables bind non-empty text
    const VarId& id = *ms[var_idx].id;
    std::string_view value = eq.substr(pos, end - pos);
    auto it = b.find(id);
    if (it != b.end()) return it->second == value;
    b.emplace(id, std::string(value));
    return true;
  };

  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].is_var()) {
      pending_var = i;
      continue;
    }
    const std::string& s = ms[i].value;
    if (pending_var) {
      // literal must leave at least one character for the variable
      std::size_t found = eq.find(s, pos + 1);
      if (found == std::string_view::npos) {
        result.failed_matcher = i;
        return result;
      }
      if (!bind(*pending_var, found)) {
        result.failed_matcher = *pending_var;
        return result;
      }
      pending_var.reset();
      pos = found + s.size();
    } else {
      if (eq.compare(pos, s.size(), s) != 0) {
        result.failed_matcher = i;
        return result;
      }
      pos += s.size();
    }
  }
  if (pending_var) {
    if (!bind(*pending_var, eq.size())) {
      result.failed_matcher = *pending_var;
      return result;
    }
    pos = eq.size();
  }
  if (pos != eq.size()) {
    // leftover text after the last literal
    result.failed_matcher = ms.size() - 1;
    return result;
  }
  result.bindings = std::move(b);
  return result;
}

}  // namespace detail

std::optional<Bindings> match_equation_pattern(const EquationPattern& p,
                                               std::string_view eq) {
  return detail::match_equation_detail(p, eq).bindings;
}

std::string instantiate(const EquationPattern& p, const Bindings& b) {
  std::string out;
  for (const Matcher& m : p.matchers) {
    if (m.is_str()) {
      out += m.value;
    } else {
      auto it = b.find(*m.id);
      if (it == b.end()) throw UnboundVariableError(m.id->to_string());
      out += it->second;
    }
  }
  return out;
}

std::optional<EquationPattern> generate_pattern(std::string_view eq,
                                                const Bindings& b) {
  if (eq.empty()) return std::nullopt;

  struct Segment {
    bool is_var;
    std::string text;  // literal text
    VarId id;          // is_var only
  };
  std::vector<Segment> segments;
  segments.push_back({false, std::string(eq), VarId{}});

  // Longest values first so shorter ones never rewrite inside a span an
  // earlier substitution produced; ties by variable order.
  std::vector<std::pair<VarId, std::string>> order(b.begin(), b.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    return x.second.size() > y.second.size();
  });

  for (const auto& [id, value] : order) {
    if (value.empty()) throw EmptyBindingValueError(id.to_string());
    std::vector<Segment> next;
    for (Segment& seg : segments) {
      if (seg.is_var) {
        next.push_back(std::move(seg));
        continue;
      }
      std::size_t pos = 0;
      while (true) {
        std::size_t found = seg.text.find(value, pos);
        if (found == std::string::npos) break;
        if (found > pos)
          next.push_back({false, seg.text.substr(pos, found - pos), VarId{}});
        next.push_back({true, std::string(), id});
        pos = found + value.size();
      }
      if (pos < seg.text.size())
        next.push_back({false, seg.text.substr(pos), VarId{}});
    }
    segments = std::move(next);
  }

  EquationPattern p;
  for (Segment& seg : segments) {
    if (seg.is_var) {
      p.matchers.push_back(Matcher::var(std::move(seg.id)));
    } else {
      p.matchers.push_back(Matcher::str(std::move(seg.text)));
    }
  }
  if (!p.alternates()) return std::nullopt;

  // A pattern is only useful if matching it against eq recovers the bindings
  // it was generated from; otherwise the substitution was ambiguous.
  auto check = match_equation_pattern(p, eq);
  if (!check) return std::nullopt;
  for (const auto& [id, value] : *check) {
    auto it = b.find(id);
    if (it == b.end() || it->second != value) return std::nullopt;
  }
  return p;
}

}  // namespace eqfix
