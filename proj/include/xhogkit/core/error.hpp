#pragma once

#include <stdexcept>
#include <string>

namespace xhogkit {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size or range precondition was violated (qubit count, dimension cap, ...).
class SizeError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An object failed one of its structural invariants (norm, unitarity, trace).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed to converge or produced garbage.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A gate-level construction was handed an input outside its contract.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A dual certificate failed exact verification.
class CertificateError : public Error {
 public:
  using Error::Error;
};

/// Unknown strategy / family names, bad parameter combinations.
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <class E = InvariantError>
inline void require(bool ok, const std::string& what) {
  if (!ok) throw E(what);
}

}  // namespace detail
}  // namespace xhogkit
