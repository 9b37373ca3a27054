#include "map2fit/likelihood.hpp"

#include "map2fit/error.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace map2fit {

LogLikelihood loglik(const RateMatrixPair &m, std::span<const double> times) {
  m.validate();
  validate_sample(times, 1);

  const ExpmKernel kernel(m.d0);
  Vector2 forward = stationary_phi(m);
  double total = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const ScaledMatrix step = kernel.at(times[i]);
    forward = (forward * step.factor) * m.d1;
    const double norm = forward.v1 + forward.v2;
    if (!(norm > 0.0)) {
      std::ostringstream msg;
      msg << "density vanishes at observation #" << i + 1 << " (t = " << times[i]
          << ")";
      throw Error(ErrorCode::DegenerateLikelihood, msg.str());
    }
    total += step.log_scale + std::log(norm);
    forward = {forward.v1 / norm, forward.v2 / norm};
  }
  if (!std::isfinite(total))
    throw Error(ErrorCode::DegenerateLikelihood, "log-likelihood is not finite");
  return {total, times.size(), 1.0, false};
}

RateMatrixPair rescale_model(const RateMatrixPair &m, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    std::ostringstream msg;
    msg << "scale must be positive and finite, got " << c;
    throw Error(ErrorCode::NonpositiveScale, msg.str());
  }
  return {c * m.d0, c * m.d1};
}

SampleScale sample_scale(std::span<const double> times) {
  validate_sample(times, 1);
  const double n = static_cast<double>(times.size());
  const double mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
  if (times.size() >= 2) {
    double ss = 0.0;
    for (double t : times)
      ss += (t - mean) * (t - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd > 0.0 && std::isfinite(sd))
      return {sd, false};
  }
  return {mean, true};
}

std::vector<double> scaled_times(std::span<const double> times, double c) {
  std::vector<double> out(times.begin(), times.end());
  for (double &t : out)
    t /= c;
  return out;
}

LogLikelihood loglik_scaled_pipeline(const RateMatrixPair &m,
                                     std::span<const double> times) {
  const SampleScale scale = sample_scale(times);
  const std::vector<double> standardized = scaled_times(times, scale.c);
  LogLikelihood ll = loglik(rescale_model(m, scale.c), standardized);
  ll.value -= static_cast<double>(times.size()) * std::log(scale.c);
  ll.scale_used = scale.c;
  ll.zero_variance_fallback = scale.zero_variance_fallback;
  return ll;
}

} // namespace map2fit
