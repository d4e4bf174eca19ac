#pragma once

#include <stdexcept>
#include <string>

namespace flatlift {

enum class Errc {
  duplicate_name,
  unknown_name,
  cycle_detected,
  not_a_crown,
  method_disagreement,
  bad_parameter,
  characterization_disagreement,
  shape_mismatch,
  ring_mismatch,
  ill_typed,
  not_free,
  not_one_connected,
  not_purely_monic,
  purity_violation,
  ill_defined_transition,
  no_solution,
  precondition_violated,
  factorization_failed,
  not_ind_flat,
  not_stably_commutative,
  not_quasitree,
  not_stably_natural,
  ill_formed,
  parse_error,
  internal_check_failed,
};

inline const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::duplicate_name: return "DuplicateName";
    case Errc::unknown_name: return "UnknownName";
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::not_a_crown: return "NotACrown";
    case Errc::method_disagreement: return "MethodDisagreement";
    case Errc::bad_parameter: return "BadParameter";
    case Errc::characterization_disagreement: return "CharacterizationDisagreement";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::ring_mismatch: return "RingMismatch";
    case Errc::ill_typed: return "IllTyped";
    case Errc::not_free: return "NotFree";
    case Errc::not_one_connected: return "NotOneConnected";
    case Errc::not_purely_monic: return "NotPurelyMonic";
    case Errc::purity_violation: return "PurityViolation";
    case Errc::ill_defined_transition: return "IllDefinedTransition";
    case Errc::no_solution: return "NoSolution";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::factorization_failed: return "FactorizationFailed";
    case Errc::not_ind_flat: return "NotIndFlat";
    case Errc::not_stably_commutative: return "NotStablyCommutative";
    case Errc::not_quasitree: return "NotQuasitree";
    case Errc::not_stably_natural: return "NotStablyNatural";
    case Errc::ill_formed: return "IllFormed";
    case Errc::parse_error: return "ParseError";
    case Errc::internal_check_failed: return "InternalCheckFailed";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Unreachable-by-contract conditions (bug sentinels).
inline void sentinel(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace flatlift
