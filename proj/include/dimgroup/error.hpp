#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dimgroup {

enum class ErrorCode {
  Syntax,
  Usage,
  Io,
  DuplicateElement,
  UnknownElement,
  Cycle,
  HostMismatch,
  Overflow,
  EmptyPoset,
  NotInCone,
  SumMismatch,
  NotOrderUnit,
  NotInterpolable,
  SizeTooLarge,
  InternalInvariantViolation,
};

/// Stable machine-greppable tag used by the CLI diagnostics (e.g. "E_CYCLE").
constexpr std::string_view error_tag(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Syntax: return "E_SYNTAX";
    case ErrorCode::Usage: return "E_USAGE";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::DuplicateElement: return "E_DUPLICATE_ELEMENT";
    case ErrorCode::UnknownElement: return "E_UNKNOWN_ELEMENT";
    case ErrorCode::Cycle: return "E_CYCLE";
    case ErrorCode::HostMismatch: return "E_HOST_MISMATCH";
    case ErrorCode::Overflow: return "E_OVERFLOW";
    case ErrorCode::EmptyPoset: return "E_EMPTY_POSET";
    case ErrorCode::NotInCone: return "E_NOT_IN_CONE";
    case ErrorCode::SumMismatch: return "E_SUM_MISMATCH";
    case ErrorCode::NotOrderUnit: return "E_NOT_ORDER_UNIT";
    case ErrorCode::NotInterpolable: return "E_NOT_INTERPOLABLE";
    case ErrorCode::SizeTooLarge: return "E_SIZE_TOO_LARGE";
    case ErrorCode::InternalInvariantViolation: return "E_INTERNAL";
  }
  return "E_INTERNAL";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using Coeff = std::int64_t;

namespace detail {

inline Coeff checked_add(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer overflow in addition");
  return r;
}

inline Coeff checked_sub(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer overflow in subtraction");
  return r;
}

inline Coeff checked_mul(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer overflow in multiplication");
  return r;
}

inline Coeff checked_neg(Coeff a) { return checked_sub(0, a); }

inline Coeff checked_abs(Coeff a) { return a < 0 ? checked_neg(a) : a; }

}  // namespace detail
}  // namespace dimgroup
