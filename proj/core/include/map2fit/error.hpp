#ifndef MAP2FIT_ERROR_HPP
#define MAP2FIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace map2fit {

enum class ErrorCode {
  SingularMatrix,
  ComplexSpectrum,
  ReducibleChain,
  InvalidModel,
  DegenerateVariance,
  EmptySample,
  NonpositiveEntry,
  NonErgodic,
  DegenerateLikelihood,
  NonpositiveScale,
  ZeroVariance,
  NoFeasibleStart,
  OptimizerFailure,
};

std::string_view to_string(ErrorCode code);

// Numerical errors (as opposed to malformed input) are the ones a caller
// might reasonably retry with different settings.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what);
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace map2fit

#endif
