#pragma once

#include <stdexcept>
#include <string>

namespace physnav {

/// Root of every error thrown by the library. Catch this at process
/// boundaries; catch the concrete kinds where recovery differs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PHYSNAV_DEFINE_ERROR(Name)     \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

// Map loading and config.
PHYSNAV_DEFINE_ERROR(ParseError);
PHYSNAV_DEFINE_ERROR(ValidationError);
PHYSNAV_DEFINE_ERROR(OutOfBounds);

// Embodiment and control.
PHYSNAV_DEFINE_ERROR(AlreadyFallen);
PHYSNAV_DEFINE_ERROR(TargetInObstacle);
PHYSNAV_DEFINE_ERROR(EmptyPath);
PHYSNAV_DEFINE_ERROR(StopIsTerminal);

// Planning and semantic navigation.
PHYSNAV_DEFINE_ERROR(Unreachable);
PHYSNAV_DEFINE_ERROR(NoPath);
PHYSNAV_DEFINE_ERROR(EmptyCandidates);
PHYSNAV_DEFINE_ERROR(UnknownLabel);
PHYSNAV_DEFINE_ERROR(NoFrontiers);

// Numerics.
PHYSNAV_DEFINE_ERROR(DimensionMismatch);
PHYSNAV_DEFINE_ERROR(ShapeMismatch);
PHYSNAV_DEFINE_ERROR(InvalidRange);

// Benchmark harness.
PHYSNAV_DEFINE_ERROR(InsufficientFreeSpace);
PHYSNAV_DEFINE_ERROR(LengthMismatch);

#undef PHYSNAV_DEFINE_ERROR

}  // namespace physnav
