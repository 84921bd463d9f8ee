#pragma once

#include <stdexcept>
#include <string>

namespace knotflow {

// Base of every error the library reports. `kind()` is the stable
// machine-readable tag used by the CLI in its error messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define KNOTFLOW_DECLARE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  }

// beltrami
KNOTFLOW_DECLARE_ERROR(NotNormalized);
KNOTFLOW_DECLARE_ERROR(SingularPoint);
KNOTFLOW_DECLARE_ERROR(NotOnSphere);
// flowdyn
KNOTFLOW_DECLARE_ERROR(StepUnderflow);
KNOTFLOW_DECLARE_ERROR(WrongParams);
KNOTFLOW_DECLARE_ERROR(NoReturn);
KNOTFLOW_DECLARE_ERROR(NoConvergence);
// contactgeom
KNOTFLOW_DECLARE_ERROR(NotMonotone);
KNOTFLOW_DECLARE_ERROR(SlopeSignViolation);
// template
KNOTFLOW_DECLARE_ERROR(PeriodicWord);
KNOTFLOW_DECLARE_ERROR(SameOrbit);
// knotinv
KNOTFLOW_DECLARE_ERROR(CurvesIntersect);
KNOTFLOW_DECLARE_ERROR(DegenerateProjection);
KNOTFLOW_DECLARE_ERROR(NotAKnot);

#undef KNOTFLOW_DECLARE_ERROR

}  // namespace knotflow
