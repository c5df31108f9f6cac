#include "eqfix/varid.hpp"

#include <tuple>

#include "eqfix/errors.hpp"

namespace eqfix {

VarId VarId::base(int index) {
  VarId v;
  v.kind = Kind::Base;
  v.index = index;
  return v;
}

VarId VarId::left(VarId inner) {
  VarId v;
  v.kind = Kind::Left;
  v.sub.push_back(std::move(inner));
  return v;
}

VarId VarId::right(VarId inner) {
  VarId v;
  v.kind = Kind::Right;
  v.sub.push_back(std::move(inner));
  return v;
}

VarId VarId::binary(VarId first, VarId second) {
  VarId v;
  v.kind = Kind::Binary;
  v.sub.push_back(std::move(first));
  v.sub.push_back(std::move(second));
  return v;
}

VarId VarId::top() {
  VarId v;
  v.kind = Kind::Top;
  return v;
}

std::vector<VarId> VarId::base_vars() const {
  std::vector<VarId> out;
  if (kind == Kind::Base) {
    out.push_back(*this);
    return out;
  }
  for (const VarId& s : sub) {
    for (VarId& b : s.base_vars()) out.push_back(std::move(b));
  }
  return out;
}

std::string VarId::to_string() const {
  switch (kind) {
    case Kind::Base:
      return "v" + std::to_string(index);
    case Kind::Left:
      return "LVar(" + sub[0].to_string() + ")";
    case Kind::Right:
      return "RVar(" + sub[0].to_string() + ")";
    case Kind::Binary:
      return "BVar(" + sub[0].to_string() + "," + sub[1].to_string() + ")";
    case Kind::Top:
      return "Top";
  }
  return {};
}

namespace {

VarId parse_var(const std::string& s, std::size_t& pos) {
  auto starts_with = [&](const char* kw) {
    return s.compare(pos, std::string(kw).size(), kw) == 0;
  };
  auto expect = [&](char c) {
    if (pos >= s.size() || s[pos] != c)
      throw FormatError("expected '" + std::string(1, c) + "' in variable id", pos);
    ++pos;
  };
  if (starts_with("Top")) {
    pos += 3;
    return VarId::top();
  }
  if (starts_with("LVar(") || starts_with("RVar(")) {
    bool is_left = s[pos] == 'L';
    pos += 5;
    VarId inner = parse_var(s, pos);
    expect(')');
    return is_left ? VarId::left(std::move(inner)) : VarId::right(std::move(inner));
  }
  if (starts_with("BVar(")) {
    pos += 5;
    VarId a = parse_var(s, pos);
    expect(',');
    VarId b = parse_var(s, pos);
    expect(')');
    return VarId::binary(std::move(a), std::move(b));
  }
  if (pos < s.size() && s[pos] == 'v') {
    ++pos;
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw FormatError("expected variable index", pos);
    return VarId::base(std::stoi(s.substr(start, pos - start)));
  }
  throw FormatError("unrecognized variable id", pos);
}

int kind_rank(VarId::Kind k) { return static_cast<int>(k); }

}  // namespace

VarId VarId::parse(const std::string& text) {
  std::size_t pos = 0;
  VarId v = parse_var(text, pos);
  if (pos != text.size()) throw FormatError("trailing text after variable id", pos);
  return v;
}

bool operator==(const VarId& a, const VarId& b) {
  return a.kind == b.kind && a.index == b.index && a.sub == b.sub;
}

bool operator<(const VarId& a, const VarId& b) {
  if (a.kind != b.kind) return kind_rank(a.kind) < kind_rank(b.kind);
  if (a.index != b.index) return a.index < b.index;
  return a.sub < b.sub;
}

}  // namespace eqfix
