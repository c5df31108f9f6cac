#pragma once

#include <string>
#include <vector>

namespace eqfix {

// Pattern variable identifier. Plain variables are Base(n) with n >= 1;
// composite forms record how a pattern was relaxed: LVar extends a variable's
// region to the start of the pattern, RVar to the end, BVar merges two
// variables and the matcher between them. Top is the variable of the fully
// relaxed pattern [v] that matches any string.
struct VarId {
  enum class Kind { Base, Left, Right, Binary, Top };

  Kind kind = Kind::Base;
  int index = 0;             // Base only
  std::vector<VarId> sub;    // Left/Right: 1 child, Binary: 2

  static VarId base(int index);
  static VarId left(VarId inner);
  static VarId right(VarId inner);
  static VarId binary(VarId first, VarId second);
  static VarId top();

  bool is_base() const { return kind == Kind::Base; }
  bool is_composite() const {
    return kind == Kind::Left || kind == Kind::Right || kind == Kind::Binary;
  }
  bool is_top() const { return kind == Kind::Top; }

  // Base variables referenced anywhere inside this id, in occurrence order.
  std::vector<VarId> base_vars() const;

  // "v1", "LVar(v1)", "BVar(v1,v2)", "Top"
  std::string to_string() const;
  // Inverse of to_string; throws FormatError.
  static VarId parse(const std::string& text);

  friend bool operator==(const VarId& a, const VarId& b);
  friend bool operator!=(const VarId& a, const VarId& b) { return !(a == b); }
  friend bool operator<(const VarId& a, const VarId& b);
};

}  // namespace eqfix
