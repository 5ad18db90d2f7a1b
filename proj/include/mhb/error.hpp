#ifndef MHB_ERROR_HPP
#define MHB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mhb {

enum class ErrorKind {
  NoSegments,
  EmptySegment,
  UnknownSymbol,
  ReservedSymbol,
  DimensionMismatch,
  AlphabetMismatch,
  MalformedId,
  MalformedModel,
  MalformedGrammar,
  MalformedCnf,
  MalformedExpression,
  UnknownTransition,
  UnknownTargetState,
  UnassignedVariable,
  UntrimmedGrammar,
  NotFlat,
  NotLetterBounded,
  Overflow,
  VerificationMismatch,
  Internal,
};

const char* error_kind_name(ErrorKind kind);

/// Single exception type for the whole library; `kind` tells callers whether
/// the failure is bad input (maps to CLI exit 2) or a broken internal
/// invariant such as VerificationMismatch (exit 3).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace mhb

#endif
