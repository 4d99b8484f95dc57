#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

enum class Err {
  NotIrreducible,
  DeterminantTooSmall,
  DimensionMismatch,
  NonCanonicalInput,
  ZeroIdeal,
  NotMaximalAtP,
  FactorizationMismatch,
  ZeroElement,
  NotIncident,
  FactorizationUnavailable,
  InvalidPolyline,
  BudgetExceeded,
  NotAchieved,
  Inconclusive,
  SingularMatrix,
  SingularConjugator,
  NotCoprime,
  BadExponent,
  GroupTooLarge,
  SearchExhausted,
  DegenerateSample,
  ConfigInvalid,
  FieldRejected,
  Internal,
};

const char* err_name(Err e);

/// Domain error carrying one of the workbench error codes.
class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline void check(bool ok, Err code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace horolab
