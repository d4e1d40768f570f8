#pragma once

#include <stdexcept>
#include <string>

namespace chromem {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input: JSON syntax, schema violations, unresolvable references.
struct FormatError : Error {
  using Error::Error;
};

/// Structurally well-formed input that violates a semantic invariant
/// (e.g. an arena with a zero out-degree node).
struct ValidationError : Error {
  using Error::Error;
};

/// A lookup that the caller's contract requires to succeed did not
/// (missing next-move entry, unknown node id, ...).
struct LookupError : Error {
  using Error::Error;
};

/// A resource guard tripped (enumeration depth, macro-state cap, ...).
struct GuardError : Error {
  using Error::Error;
};

}  // namespace chromem
