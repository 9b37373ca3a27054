#ifndef MAP2FIT_DIVERGENCE_HPP
#define MAP2FIT_DIVERGENCE_HPP

#include "map2fit/model.hpp"

#include <cstddef>
#include <cstdint>

namespace map2fit {

struct KlEstimate {
  double value = 0.0; // nats, mean over usable runs
  std::size_t n = 0;
  std::size_t runs = 0;
  double std_error = 0.0;
  // Runs where the candidate gave the simulated sequence zero density.
  // They are left out of value and std_error.
  std::size_t degenerate_runs = 0;
};

// Monte-Carlo Kullback-Leibler divergence of candidate from truth:
//   (1/N) sum_i [log f(t_i | truth) - log f(t_i | candidate)]
// with t_i of length n simulated from truth from a stationary start, run i
// seeded by derive_seed(seed, Stream::Divergence, i). Throws
// DegenerateLikelihood only if every run is degenerate.
KlEstimate empirical_kl(const RateMatrixPair &truth,
                        const RateMatrixPair &candidate, std::size_t n,
                        std::size_t runs, std::uint64_t seed);

} // namespace map2fit

#endif
