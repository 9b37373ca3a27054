#include "map2fit/divergence.hpp"

#include "map2fit/error.hpp"
#include "map2fit/likelihood.hpp"
#include "map2fit/random.hpp"
#include "map2fit/simulate.hpp"

#include <cmath>
#include <vector>

namespace map2fit {

KlEstimate empirical_kl(const RateMatrixPair &truth,
                        const RateMatrixPair &candidate, std::size_t n,
                        std::size_t runs, std::uint64_t seed) {
  truth.validate();
  candidate.validate();
  if (n == 0 || runs == 0)
    throw Error(ErrorCode::EmptySample, "divergence needs n >= 1 and runs >= 1");

  std::vector<double> ratios;
  ratios.reserve(runs);
  KlEstimate kl;
  kl.n = n;
  kl.runs = runs;
  for (std::size_t i = 0; i < runs; ++i) {
    const InterarrivalSample sample =
        simulate(truth, n, SimulationStart::stationary(),
                 derive_seed(seed, Stream::Divergence, i));
    const double reference = loglik(truth, sample.times).value;
    try {
      ratios.push_back(reference - loglik(candidate, sample.times).value);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::DegenerateLikelihood)
        throw;
      ++kl.degenerate_runs;
    }
  }
  if (ratios.empty())
    throw Error(ErrorCode::DegenerateLikelihood,
                "candidate gives zero density to every simulated sequence");

  const double count = static_cast<double>(ratios.size());
  double sum = 0.0;
  for (double r : ratios)
    sum += r;
  kl.value = sum / count;
  if (ratios.size() > 1) {
    double ss = 0.0;
    for (double r : ratios)
      ss += (r - kl.value) * (r - kl.value);
    kl.std_error = std::sqrt(ss / (count - 1.0) / count);
  }
  return kl;
}

} // namespace map2fit
