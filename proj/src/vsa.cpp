#include "eqfix/vsa.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace eqfix {

namespace {

constexpr std::uint64_t kSizeCap = std::numeric_limits<std::uint64_t>::max() / 4;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return std::min(kSizeCap, a + std::min(b, kSizeCap - a));
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSizeCap / b) return kSizeCap;
  return a * b;
}

void sort_unique(std::vector<PositionExpr>& ps) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
}

}  // namespace

AtomicVsa AtomicVsa::const_leaf(std::string value) {
  AtomicVsa a;
  a.const_value = std::move(value);
  return a;
}

AtomicVsa AtomicVsa::substr_join(std::vector<PositionExpr> starts,
                                 std::vector<PositionExpr> ends) {
  AtomicVsa a;
  a.starts = std::move(starts);
  a.ends = std::move(ends);
  sort_unique(a.starts);
  sort_unique(a.ends);
  return a;
}

std::uint64_t AtomicVsa::size() const {
  if (is_const()) return 1;
  return sat_mul(starts.size(), ends.size());
}

StringVsaPtr StringVsa::make_union(std::vector<StringVsaPtr> children) {
  children.erase(std::remove(children.begin(), children.end(), nullptr),
                 children.end());
  if (children.empty()) return nullptr;
  if (children.size() == 1) return children.front();
  auto node = std::make_shared<StringVsa>();
  node->kind = Kind::Union;
  node->children = std::move(children);
  return node;
}

StringVsaPtr StringVsa::make_concat(AtomicVsa head, StringVsaPtr tail) {
  if (!tail) return nullptr;
  auto node = std::make_shared<StringVsa>();
  node->kind = Kind::ConcatJoin;
  node->head = std::move(head);
  node->tail = std::move(tail);
  return node;
}

StringVsaPtr StringVsa::make_atomic(AtomicVsa atom) {
  auto node = std::make_shared<StringVsa>();
  node->kind = Kind::Atomic;
  node->head = std::move(atom);
  return node;
}

// ---- scoring ----

namespace {

int position_cost(const PositionExpr& p) {
  if (const AbsPos* abs = std::get_if<AbsPos>(&p)) {
    if (abs->k == 0 || abs->k == -1) return 0;
    return abs->k < 0 ? 1 : 2;
  }
  return 1;
}

Score score_atomic(const AtomicExpr& f) {
  if (const ConstStr* c = std::get_if<ConstStr>(&f))
    return {static_cast<int>(c->value.size()), 1, 0};
  const SubStr& s = std::get<SubStr>(f);
  return {0, 1, position_cost(s.lo) + position_cost(s.hi)};
}

}  // namespace

Score score_of(const StringTransformer& t) {
  Score total;
  for (const AtomicExpr& atom : t.atoms) total = total + score_atomic(atom);
  return total;
}

// ---- generation ----

std::vector<PositionExpr> gen_pos(std::string_view x, std::size_t k,
                                  const TokenRegistry& reg) {
  std::vector<PositionExpr> out;
  out.push_back(AbsPos{static_cast<int>(k)});
  out.push_back(AbsPos{static_cast<int>(k) - static_cast<int>(x.size())});
  for (const std::string& token : reg.names()) {
    std::vector<Span> occ = reg.occurrences(token, x);
    for (int off = -1; off <= 1; ++off) {
      long long want = static_cast<long long>(k) - off;
      if (want < 0) continue;
      for (std::size_t i = 0; i < occ.size(); ++i) {
        if (static_cast<long long>(occ[i].start) != want) continue;
        out.push_back(RelPos{token, static_cast<int>(i) + 1, off});
        out.push_back(RelPos{token, static_cast<int>(i) - static_cast<int>(occ.size()), off});
      }
    }
  }
  sort_unique(out);
  return out;
}

std::vector<AtomicVsa> gen_substr(std::string_view x, std::string_view s,
                                  const TokenRegistry& reg) {
  std::vector<AtomicVsa> out;
  if (s.empty() || s.size() > x.size()) return out;
  for (std::size_t k = 0; k + s.size() <= x.size(); ++k) {
    if (x.compare(k, s.size(), s) != 0) continue;
    out.push_back(AtomicVsa::substr_join(gen_pos(x, k, reg),
                                         gen_pos(x, k + s.size() - 1, reg)));
  }
  return out;
}

std::vector<AtomicVsa> gen_atomic(const std::vector<std::string>& gamma,
                                  std::string_view s, const TokenRegistry& reg) {
  std::vector<AtomicVsa> out;
  out.push_back(AtomicVsa::const_leaf(std::string(s)));
  for (const std::string& x : gamma) {
    for (AtomicVsa& a : gen_substr(x, s, reg)) out.push_back(std::move(a));
  }
  return out;
}

StringVsaPtr gen_string(const std::vector<std::string>& gamma, std::string_view s,
                        const TokenRegistry& reg) {
  if (s.empty()) return nullptr;
  // Nodes for each suffix of s, built right to left; children of suffix i are
  // the whole-suffix atoms plus Concat joins sharing the suffix-j nodes.
  std::vector<StringVsaPtr> suffix(s.size() + 1);
  for (std::size_t i = s.size(); i-- > 0;) {
    std::vector<StringVsaPtr> children;
    for (AtomicVsa& a : gen_atomic(gamma, s.substr(i), reg))
      children.push_back(StringVsa::make_atomic(std::move(a)));
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      for (AtomicVsa& a : gen_atomic(gamma, s.substr(i, j - i), reg))
        children.push_back(StringVsa::make_concat(std::move(a), suffix[j]));
    }
    suffix[i] = StringVsa::make_union(std::move(children));
  }
  return suffix[0];
}

// ---- intersection ----

namespace {

std::optional<AtomicVsa> intersect_atomic(const AtomicVsa& a, const AtomicVsa& b) {
  if (a.is_const() != b.is_const()) return std::nullopt;
  if (a.is_const()) {
    if (a.const_value != b.const_value) return std::nullopt;
    return a;
  }
  std::vector<PositionExpr> starts;
  std::set_intersection(a.starts.begin(), a.starts.end(), b.starts.begin(),
                        b.starts.end(), std::back_inserter(starts));
  if (starts.empty()) return std::nullopt;
  std::vector<PositionExpr> ends;
  std::set_intersection(a.ends.begin(), a.ends.end(), b.ends.begin(), b.ends.end(),
                        std::back_inserter(ends));
  if (ends.empty()) return std::nullopt;
  return AtomicVsa::substr_join(std::move(starts), std::move(ends));
}

using IntersectMemo = std::map<std::pair<const StringVsa*, const StringVsa*>, StringVsaPtr>;

StringVsaPtr intersect_impl(const StringVsaPtr& a, const StringVsaPtr& b,
                            IntersectMemo& memo) {
  if (!a || !b) return nullptr;
  auto key = std::make_pair(a.get(), b.get());
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  StringVsaPtr result;
  if (a->kind == StringVsa::Kind::Union) {
    std::vector<StringVsaPtr> children;
    for (const StringVsaPtr& c : a->children)
      children.push_back(intersect_impl(c, b, memo));
    result = StringVsa::make_union(std::move(children));
  } else if (b->kind == StringVsa::Kind::Union) {
    std::vector<StringVsaPtr> children;
    for (const StringVsaPtr& c : b->children)
      children.push_back(intersect_impl(a, c, memo));
    result = StringVsa::make_union(std::move(children));
  } else if (a->kind != b->kind) {
    result = nullptr;  // a single atom never equals a longer concatenation
  } else if (a->kind == StringVsa::Kind::Atomic) {
    if (auto head = intersect_atomic(a->head, b->head))
      result = StringVsa::make_atomic(std::move(*head));
  } else {
    if (auto head = intersect_atomic(a->head, b->head)) {
      StringVsaPtr tail = intersect_impl(a->tail, b->tail, memo);
      if (tail) result = StringVsa::make_concat(std::move(*head), std::move(tail));
    }
  }
  memo.emplace(key, result);
  return result;
}

}  // namespace

StringVsaPtr intersect(const StringVsaPtr& a, const StringVsaPtr& b) {
  IntersectMemo memo;
  return intersect_impl(a, b, memo);
}

// ---- enumeration / ranking ----

namespace {

struct Candidate {
  StringTransformer program;
  Score score;
  std::string serial;  // canonical form, cached for tie-breaks

  bool better_than(const Candidate& other) const {
    if (score != other.score) return score < other.score;
    return serial < other.serial;
  }
};

Candidate make_candidate(StringTransformer program) {
  Candidate c;
  c.score = score_of(program);
  c.serial = to_string(program);
  c.program = std::move(program);
  return c;
}

std::vector<AtomicExpr> atomic_options(const AtomicVsa& a) {
  std::vector<AtomicExpr> out;
  if (a.is_const()) {
    out.push_back(ConstStr{a.const_value});
    return out;
  }
  for (const PositionExpr& lo : a.starts) {
    for (const PositionExpr& hi : a.ends) out.push_back(SubStr{lo, hi});
  }
  return out;
}

void sort_truncate(std::vector<Candidate>& cs, std::size_t k) {
  std::sort(cs.begin(), cs.end(),
            [](const Candidate& x, const Candidate& y) { return x.better_than(y); });
  cs.erase(std::unique(cs.begin(), cs.end(),
                       [](const Candidate& x, const Candidate& y) {
                         return x.serial == y.serial;
                       }),
           cs.end());
  if (cs.size() > k) cs.resize(k);
}

using TopkMemo = std::map<const StringVsa*, std::vector<Candidate>>;

const std::vector<Candidate>& topk_impl(const StringVsaPtr& v, std::size_t k,
                                        TopkMemo& memo) {
  auto it = memo.find(v.get());
  if (it != memo.end()) return it->second;

  std::vector<Candidate> result;
  switch (v->kind) {
    case StringVsa::Kind::Atomic: {
      for (AtomicExpr& atom : atomic_options(v->head)) {
        StringTransformer t;
        t.atoms.push_back(std::move(atom));
        result.push_back(make_candidate(std::move(t)));
      }
      break;
    }
    case StringVsa::Kind::ConcatJoin: {
      const auto& tails = topk_impl(v->tail, k, memo);
      for (AtomicExpr& atom : atomic_options(v->head)) {
        for (const Candidate& tail : tails) {
          StringTransformer t;
          t.atoms.reserve(1 + tail.program.atoms.size());
          t.atoms.push_back(atom);
          t.atoms.insert(t.atoms.end(), tail.program.atoms.begin(),
                         tail.program.atoms.end());
          result.push_back(make_candidate(std::move(t)));
        }
      }
      break;
    }
    case StringVsa::Kind::Union: {
      for (const StringVsaPtr& c : v->children) {
        const auto& sub = topk_impl(c, k, memo);
        result.insert(result.end(), sub.begin(), sub.end());
      }
      break;
    }
  }
  sort_truncate(result, k);
  return memo.emplace(v.get(), std::move(result)).first->second;
}

}  // namespace

std::vector<StringTransformer> enumerate_topk(const StringVsaPtr& v, std::size_t k) {
  std::vector<StringTransformer> out;
  if (!v || k == 0) return out;
  TopkMemo memo;
  for (const Candidate& c : topk_impl(v, k, memo)) out.push_back(c.program);
  return out;
}

// ---- denotation oracles ----

std::uint64_t vsa_size(const StringVsaPtr& v) {
  if (!v) return 0;
  std::map<const StringVsa*, std::uint64_t> memo;
  struct Rec {
    std::map<const StringVsa*, std::uint64_t>& memo;
    std::uint64_t operator()(const StringVsaPtr& n) {
      auto it = memo.find(n.get());
      if (it != memo.end()) return it->second;
      std::uint64_t size = 0;
      switch (n->kind) {
        case StringVsa::Kind::Atomic:
          size = n->head.size();
          break;
        case StringVsa::Kind::ConcatJoin:
          size = sat_mul(n->head.size(), (*this)(n->tail));
          break;
        case StringVsa::Kind::Union:
          for (const StringVsaPtr& c : n->children) size = sat_add(size, (*this)(c));
          break;
      }
      memo.emplace(n.get(), size);
      return size;
    }
  } rec{memo};
  return rec(v);
}

namespace {

bool atomic_contains(const AtomicVsa& a, const AtomicExpr& f) {
  if (const ConstStr* c = std::get_if<ConstStr>(&f))
    return a.is_const() && a.const_value == c->value;
  if (a.is_const()) return false;
  const SubStr& s = std::get<SubStr>(f);
  return std::binary_search(a.starts.begin(), a.starts.end(), s.lo) &&
         std::binary_search(a.ends.begin(), a.ends.end(), s.hi);
}

bool contains_impl(const StringVsaPtr& v, const AtomicExpr* atoms, std::size_t count) {
  if (!v || count == 0) return false;
  switch (v->kind) {
    case StringVsa::Kind::Atomic:
      return count == 1 && atomic_contains(v->head, atoms[0]);
    case StringVsa::Kind::ConcatJoin:
      return count >= 2 && atomic_contains(v->head, atoms[0]) &&
             contains_impl(v->tail, atoms + 1, count - 1);
    case StringVsa::Kind::Union:
      for (const StringVsaPtr& c : v->children) {
        if (contains_impl(c, atoms, count)) return true;
      }
      return false;
  }
  return false;
}

void enumerate_impl(const StringVsaPtr& v, std::size_t cap,
                    std::vector<StringTransformer>& out,
                    std::vector<AtomicExpr>& prefix) {
  if (!v || out.size() >= cap) return;
  switch (v->kind) {
    case StringVsa::Kind::Atomic:
      for (AtomicExpr& atom : atomic_options(v->head)) {
        if (out.size() >= cap) return;
        StringTransformer t;
        t.atoms = prefix;
        t.atoms.push_back(std::move(atom));
        out.push_back(std::move(t));
      }
      break;
    case StringVsa::Kind::ConcatJoin:
      for (AtomicExpr& atom : atomic_options(v->head)) {
        if (out.size() >= cap) return;
        prefix.push_back(std::move(atom));
        enumerate_impl(v->tail, cap, out, prefix);
        prefix.pop_back();
      }
      break;
    case StringVsa::Kind::Union:
      for (const StringVsaPtr& c : v->children) enumerate_impl(c, cap, out, prefix);
      break;
  }
}

}  // namespace

bool vsa_contains(const StringVsaPtr& v, const StringTransformer& t) {
  return contains_impl(v, t.atoms.data(), t.atoms.size());
}

std::vector<StringTransformer> vsa_enumerate(const StringVsaPtr& v, std::size_t cap) {
  std::vector<StringTransformer> out;
  std::vector<AtomicExpr> prefix;
  enumerate_impl(v, cap, out, prefix);
  return out;
}

namespace {

AtomicExpr sample_atomic(const AtomicVsa& a, std::mt19937& rng) {
  if (a.is_const()) return ConstStr{a.const_value};
  std::uniform_int_distribution<std::size_t> ds(0, a.starts.size() - 1);
  std::uniform_int_distribution<std::size_t> de(0, a.ends.size() - 1);
  return SubStr{a.starts[ds(rng)], a.ends[de(rng)]};
}

void sample_impl(const StringVsaPtr& v, std::mt19937& rng,
                 std::vector<AtomicExpr>& atoms) {
  switch (v->kind) {
    case StringVsa::Kind::Atomic:
      atoms.push_back(sample_atomic(v->head, rng));
      return;
    case StringVsa::Kind::ConcatJoin:
      atoms.push_back(sample_atomic(v->head, rng));
      sample_impl(v->tail, rng, atoms);
      return;
    case StringVsa::Kind::Union: {
      std::vector<std::uint64_t> weights;
      std::uint64_t total = 0;
      for (const StringVsaPtr& c : v->children) {
        std::uint64_t w = vsa_size(c);
        weights.push_back(w);
        total = sat_add(total, w);
      }
      std::uniform_int_distribution<std::uint64_t> dist(0, total - 1);
      std::uint64_t pick = dist(rng);
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (pick < weights[i]) {
          sample_impl(v->children[i], rng, atoms);
          return;
        }
        pick -= weights[i];
      }
      sample_impl(v->children.back(), rng, atoms);
      return;
    }
  }
}

}  // namespace

StringTransformer vsa_sample(const StringVsaPtr& v, std::mt19937& rng) {
  StringTransformer t;
  sample_impl(v, rng, t.atoms);
  return t;
}

}  // namespace eqfix
