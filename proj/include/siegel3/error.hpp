#pragma once

#include <stdexcept>
#include <string>

namespace siegel3 {

/// Base of every error raised by the library.  `kind()` is the stable,
/// machine-readable name reported by the CLI in `--json` mode.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define SIEGEL3_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  };

SIEGEL3_DEFINE_ERROR(NotSymplectic)
SIEGEL3_DEFINE_ERROR(NearSingularCocycle)
SIEGEL3_DEFINE_ERROR(NotPositiveDefinite)
SIEGEL3_DEFINE_ERROR(NotEven)
SIEGEL3_DEFINE_ERROR(PrecisionUnreachable)
SIEGEL3_DEFINE_ERROR(UnknownSyzygeticIndex)
SIEGEL3_DEFINE_ERROR(UnknownForm)
SIEGEL3_DEFINE_ERROR(NegativeExponent)
SIEGEL3_DEFINE_ERROR(NonRealPhase)
SIEGEL3_DEFINE_ERROR(SignConflict)
SIEGEL3_DEFINE_ERROR(ParseError)
SIEGEL3_DEFINE_ERROR(ChecksumMismatch)
SIEGEL3_DEFINE_ERROR(ValidationError)
SIEGEL3_DEFINE_ERROR(NonPolynomial)
SIEGEL3_DEFINE_ERROR(SampleDegenerate)
SIEGEL3_DEFINE_ERROR(IllConditioned)
SIEGEL3_DEFINE_ERROR(ReconstructionFailed)
SIEGEL3_DEFINE_ERROR(NotInSpan)
SIEGEL3_DEFINE_ERROR(SingularSubstitution)
SIEGEL3_DEFINE_ERROR(NotTabulated)
SIEGEL3_DEFINE_ERROR(RiemannRelationViolation)
SIEGEL3_DEFINE_ERROR(ZeroDenominator)

#undef SIEGEL3_DEFINE_ERROR

}  // namespace siegel3
