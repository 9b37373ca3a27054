#ifndef MAP2FIT_LIKELIHOOD_HPP
#define MAP2FIT_LIKELIHOOD_HPP

#include "map2fit/model.hpp"

#include <span>
#include <vector>

namespace map2fit {

struct LogLikelihood {
  double value = 0.0; // natural log of the joint density
  std::size_t n = 0;
  double scale_used = 1.0;
  // Set when the sample had no spread and the mean was used as the scale.
  bool zero_variance_fallback = false;
};

// log( phi exp(D0 t1) D1 ... exp(D0 tn) D1 e ) by a forward recursion that
// renormalizes the row vector to unit 1-norm at every step and carries the
// dominant-eigenvalue factor of each exponential in the log domain, so the
// result stays finite where the plain product underflows.
// Throws DegenerateLikelihood if a step leaves the forward vector at zero.
LogLikelihood loglik(const RateMatrixPair &m, std::span<const double> times);

// (c D0, c D1). Throws NonpositiveScale unless c is positive and finite.
RateMatrixPair rescale_model(const RateMatrixPair &m, double c);

struct SampleScale {
  double c = 1.0;
  bool zero_variance_fallback = false;
};

// Unbiased sample standard deviation, or the sample mean when the sample is
// too short or constant.
SampleScale sample_scale(std::span<const double> times);

std::vector<double> scaled_times(std::span<const double> times, double c);

// Evaluates on the sample divided by c = std(t) with the model multiplied by
// c, then maps back: log f(t | D) = -n log c + log f(t / c | c D).
LogLikelihood loglik_scaled_pipeline(const RateMatrixPair &m,
                                     std::span<const double> times);

} // namespace map2fit

#endif
