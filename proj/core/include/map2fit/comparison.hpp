#ifndef MAP2FIT_COMPARISON_HPP
#define MAP2FIT_COMPARISON_HPP

#include "map2fit/estimate.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace map2fit {

struct ComparisonOptions {
  std::size_t count = 30;
  std::size_t n = 500;
  std::size_t kl_runs = 20;
  std::uint64_t seed = 0;
  ParameterBox truth_box{};
  EstimationConfig config{};
};

struct ComparisonRow {
  std::size_t index = 0;
  RedundantMap2 truth{};
  std::optional<double> kl_canonical;
  std::optional<double> kl_redundant;
  std::optional<double> ratio; // kl_redundant / kl_canonical
  std::string canonical_failure;
  std::string redundant_failure;

  bool canonical_failed() const { return !canonical_failure.empty(); }
  bool redundant_failed() const { return !redundant_failure.empty(); }
};

// Random redundant truths, each simulated once and fitted both ways; KL of
// each fit from the truth on common random numbers. Model i uses
// derive_seed(seed, Stream::Compare, 2i) for the truth and 2i + 1 for the
// sample. Numerical failures on either path are recorded, not thrown.
std::vector<ComparisonRow> compare_representations(const ComparisonOptions &options);

// Median of the available ratios; nullopt when there are none.
std::optional<double> median_ratio(const std::vector<ComparisonRow> &rows);

} // namespace map2fit

#endif
