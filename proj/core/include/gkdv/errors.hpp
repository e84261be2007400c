#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

// Base of every library exception.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GKDV_DECLARE_ERROR(Name)      \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

GKDV_DECLARE_ERROR(ParameterError);
GKDV_DECLARE_ERROR(DomainError);
GKDV_DECLARE_ERROR(OverlapError);
GKDV_DECLARE_ERROR(BlowupError);
GKDV_DECLARE_ERROR(WrongExponentError);
GKDV_DECLARE_ERROR(IndexError);
GKDV_DECLARE_ERROR(KappaRangeError);
GKDV_DECLARE_ERROR(OrderingError);
GKDV_DECLARE_ERROR(NonPositiveValueError);
GKDV_DECLARE_ERROR(SpectralTailError);
GKDV_DECLARE_ERROR(NoConvergenceError);
GKDV_DECLARE_ERROR(SeparationError);
GKDV_DECLARE_ERROR(ClosenessError);
GKDV_DECLARE_ERROR(SpeedRangeError);
GKDV_DECLARE_ERROR(DecayError);
GKDV_DECLARE_ERROR(UnresolvedSpectrumError);

#undef GKDV_DECLARE_ERROR

}  // namespace gkdv
