#pragma once

#include <stdexcept>
#include <string>

namespace mtc {

// Base of every failure raised by the toolkit. The CLI maps these to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define MTC_DEFINE_ERROR(Name)                 \
  struct Name : Error {                        \
    explicit Name(const std::string& what)     \
        : Error(#Name ": " + what) {}          \
  }

MTC_DEFINE_ERROR(NonAdmissible);
MTC_DEFINE_ERROR(Unsupported);
MTC_DEFINE_ERROR(Overflow);
MTC_DEFINE_ERROR(PoleCoincidence);
MTC_DEFINE_ERROR(DegenerateMax);
MTC_DEFINE_ERROR(StepFailure);
MTC_DEFINE_ERROR(BlowDown);
MTC_DEFINE_ERROR(GridMismatch);
MTC_DEFINE_ERROR(ZeroDenominator);
MTC_DEFINE_ERROR(NoLimit);
MTC_DEFINE_ERROR(RootFail);
MTC_DEFINE_ERROR(Stall);
MTC_DEFINE_ERROR(ConfigError);

#undef MTC_DEFINE_ERROR

}  // namespace mtc
