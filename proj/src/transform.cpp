#include "eqfix/transform.hpp"

#include <cctype>
#include <tuple>

#include "eqfix/errors.hpp"

namespace eqfix {

namespace {

std::vector<Span> char_spans(std::string_view x, char c) {
  std::vector<Span> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == c) out.push_back({i, 1});
  }
  return out;
}

std::vector<Span> digit_runs(std::string_view x) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < x.size()) {
    if (std::isdigit(static_cast<unsigned char>(x[i]))) {
      std::size_t start = i;
      while (i < x.size() && std::isdigit(static_cast<unsigned char>(x[i]))) ++i;
      out.push_back({start, i - start});
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace

TokenRegistry::TokenRegistry() {
  for (char c : std::string("{}()^_")) {
    add(std::string(1, c), [c](std::string_view x) { return char_spans(x, c); });
  }
  add("Number", digit_runs);
}

const TokenRegistry& TokenRegistry::builtin() {
  static const TokenRegistry reg;
  return reg;
}

void TokenRegistry::add(std::string name, Recognizer recognizer) {
  if (recognizers_.emplace(name, std::move(recognizer)).second)
    names_.push_back(std::move(name));
}

bool TokenRegistry::contains(const std::string& name) const {
  return recognizers_.count(name) != 0;
}

std::vector<Span> TokenRegistry::occurrences(const std::string& name,
                                             std::string_view x) const {
  auto it = recognizers_.find(name);
  if (it == recognizers_.end()) return {};
  return it->second(x);
}

std::vector<Span> token_occurrences(const TokenRegistry& reg, const std::string& token,
                                    std::string_view x) {
  return reg.occurrences(token, x);
}

bool operator<(const PositionExpr& a, const PositionExpr& b) {
  if (a.index() != b.index()) return a.index() < b.index();  // AbsPos first
  if (std::holds_alternative<AbsPos>(a))
    return std::get<AbsPos>(a).k < std::get<AbsPos>(b).k;
  const RelPos& ra = std::get<RelPos>(a);
  const RelPos& rb = std::get<RelPos>(b);
  return std::tie(ra.token, ra.occurrence, ra.offset) <
         std::tie(rb.token, rb.occurrence, rb.offset);
}

std::optional<std::size_t> normalize_index(int k, std::size_t len) {
  if (k >= 0) {
    if (static_cast<std::size_t>(k) < len) return static_cast<std::size_t>(k);
    return std::nullopt;
  }
  long long adjusted = static_cast<long long>(len) + k;
  if (adjusted >= 0) return static_cast<std::size_t>(adjusted);
  return std::nullopt;
}

std::optional<std::size_t> eval_position(const PositionExpr& p, std::string_view x,
                                         const TokenRegistry& reg) {
  if (const AbsPos* abs = std::get_if<AbsPos>(&p)) {
    return normalize_index(abs->k, x.size());
  }
  const RelPos& rel = std::get<RelPos>(p);
  if (rel.occurrence == 0) return std::nullopt;
  std::vector<Span> occ = reg.occurrences(rel.token, x);
  long long idx = rel.occurrence > 0 ? rel.occurrence - 1
                                     : static_cast<long long>(occ.size()) + rel.occurrence;
  if (idx < 0 || idx >= static_cast<long long>(occ.size())) return std::nullopt;
  long long result = static_cast<long long>(occ[static_cast<std::size_t>(idx)].start) +
                     rel.offset;
  if (result < 0 || result >= static_cast<long long>(x.size())) return std::nullopt;
  return static_cast<std::size_t>(result);
}

std::optional<std::string> eval_atomic(const AtomicExpr& f, std::string_view x,
                                       const TokenRegistry& reg) {
  if (const ConstStr* c = std::get_if<ConstStr>(&f)) return c->value;
  const SubStr& s = std::get<SubStr>(f);
  auto lo = eval_position(s.lo, x, reg);
  auto hi = eval_position(s.hi, x, reg);
  if (!lo || !hi || *lo > *hi) return std::nullopt;
  return std::string(x.substr(*lo, *hi - *lo + 1));
}

std::optional<std::string> eval_transformer(const StringTransformer& t, std::string_view x,
                                            const TokenRegistry& reg) {
  std::string out;
  for (const AtomicExpr& atom : t.atoms) {
    auto piece = eval_atomic(atom, x, reg);
    if (!piece) return std::nullopt;
    out += *piece;
  }
  return out;
}

// ---- serialization ----

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace

std::string to_string(const PositionExpr& p) {
  if (const AbsPos* abs = std::get_if<AbsPos>(&p))
    return "AbsPos(" + std::to_string(abs->k) + ")";
  const RelPos& rel = std::get<RelPos>(p);
  return "RelPos(" + quote(rel.token) + "," + std::to_string(rel.occurrence) + "," +
         std::to_string(rel.offset) + ")";
}

std::string to_string(const AtomicExpr& f) {
  if (const ConstStr* c = std::get_if<ConstStr>(&f))
    return "ConstStr(" + quote(c->value) + ")";
  const SubStr& s = std::get<SubStr>(f);
  return "SubStr(" + to_string(s.lo) + "," + to_string(s.hi) + ")";
}

std::string to_string(const StringTransformer& t) {
  // right-leaning Concat spine
  std::string out;
  for (std::size_t i = 0; i < t.atoms.size(); ++i) {
    if (i + 1 < t.atoms.size()) out += "Concat(";
    out += to_string(t.atoms[i]);
    if (i + 1 < t.atoms.size()) out += ",";
  }
  out.append(t.atoms.empty() ? 0 : t.atoms.size() - 1, ')');
  return out;
}

// ---- parsing ----

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const TokenRegistry& reg) : text_(text), reg_(reg) {}

  StringTransformer parse() {
    StringTransformer t;
    parse_string_expr(t);
    if (pos_ != text_.size()) fail("trailing text after transformer");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw FormatError(what, pos_); }

  bool peek_keyword(std::string_view kw) const {
    return text_.compare(pos_, kw.size(), kw) == 0;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void keyword(std::string_view kw) {
    if (!peek_keyword(kw)) fail("expected " + std::string(kw));
    pos_ += kw.size();
  }

  int integer() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start || (text_[start] == '-' && pos_ == start + 1))
      fail("expected integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  std::string quoted() {
    expect('"');
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("dangling escape");
        char e = text_[pos_++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default: fail("unknown escape");
        }
      } else {
        out += c;
      }
    }
    expect('"');
    return out;
  }

  PositionExpr parse_position() {
    if (peek_keyword("AbsPos(")) {
      pos_ += 7;
      int k = integer();
      expect(')');
      return AbsPos{k};
    }
    if (peek_keyword("RelPos(")) {
      pos_ += 7;
      RelPos rel;
      rel.token = quoted();
      if (!reg_.contains(rel.token)) fail("unknown token " + rel.token);
      expect(',');
      rel.occurrence = integer();
      if (rel.occurrence == 0) fail("occurrence must be non-zero");
      expect(',');
      rel.offset = integer();
      expect(')');
      return rel;
    }
    fail("expected position expression");
  }

  AtomicExpr parse_atomic() {
    if (peek_keyword("ConstStr(")) {
      pos_ += 9;
      std::string value = quoted();
      expect(')');
      return ConstStr{std::move(value)};
    }
    if (peek_keyword("SubStr(")) {
      pos_ += 7;
      PositionExpr lo = parse_position();
      expect(',');
      PositionExpr hi = parse_position();
      expect(')');
      return SubStr{std::move(lo), std::move(hi)};
    }
    fail("expected atomic expression");
  }

  void parse_string_expr(StringTransformer& t) {
    if (peek_keyword("Concat(")) {
      pos_ += 7;
      t.atoms.push_back(parse_atomic());
      expect(',');
      parse_string_expr(t);
      expect(')');
      return;
    }
    t.atoms.push_back(parse_atomic());
  }

  std::string_view text_;
  const TokenRegistry& reg_;
  std::size_t pos_ = 0;
};

}  // namespace

StringTransformer parse_transformer(std::string_view text, const TokenRegistry& reg) {
  return TermParser(text, reg).parse();
}

}  // namespace eqfix
