#pragma once

#include <stdexcept>
#include <string>

namespace hsreg {

/// Base class of every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HSREG_DEFINE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

HSREG_DEFINE_ERROR(DomainError);
HSREG_DEFINE_ERROR(NotExactDerivative);
HSREG_DEFINE_ERROR(JetTooShort);
HSREG_DEFINE_ERROR(NoConvergence);
HSREG_DEFINE_ERROR(DerivativeVanishes);
HSREG_DEFINE_ERROR(SingularJacobian);
HSREG_DEFINE_ERROR(SeedUnreliable);
HSREG_DEFINE_ERROR(StepSizeUnderflow);
HSREG_DEFINE_ERROR(NoPoleInRange);
HSREG_DEFINE_ERROR(OutOfRange);
HSREG_DEFINE_ERROR(TooCloseToPole);
HSREG_DEFINE_ERROR(DegenerateReduction);
HSREG_DEFINE_ERROR(UnsupportedOrder);

#undef HSREG_DEFINE_ERROR

}  // namespace hsreg
