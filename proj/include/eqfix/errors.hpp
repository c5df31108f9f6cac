#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eqfix {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// tokenize_message on blank input.
struct EmptyMessageError : Error {
  EmptyMessageError() : Error("error message is blank") {}
};

// instantiate over bindings that miss a pattern variable.
struct UnboundVariableError : Error {
  explicit UnboundVariableError(const std::string& var)
      : Error("unbound variable " + var) {}
};

// generate_pattern with an empty bound value.
struct EmptyBindingValueError : Error {
  explicit EmptyBindingValueError(const std::string& var)
      : Error("empty value bound to " + var) {}
};

// apply_relaxers (strict) when a referenced base variable is absent or the
// pattern shape does not admit the relaxation.
struct InapplicableRelaxerError : Error {
  explicit InapplicableRelaxerError(const std::string& what) : Error(what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

// Malformed persisted files (library, corpus, transformer terms); carries a
// byte offset into the offending text when one is known.
struct FormatError : Error {
  explicit FormatError(const std::string& what, std::size_t position = 0)
      : Error(what), position(position) {}
  std::size_t position;
};

}  // namespace eqfix
