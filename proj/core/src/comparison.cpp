#include "map2fit/comparison.hpp"

#include "map2fit/divergence.hpp"
#include "map2fit/error.hpp"
#include "map2fit/random.hpp"
#include "map2fit/simulate.hpp"

#include <algorithm>

namespace map2fit {

namespace {

// Runs fit_and_measure, turning library errors into a failure note.
template <class Fn>
std::optional<double> guarded(Fn &&fit_and_measure, std::string &failure) {
  try {
    return fit_and_measure();
  } catch (const Error &e) {
    failure = e.what();
  }
  return std::nullopt;
}

} // namespace

std::vector<ComparisonRow> compare_representations(const ComparisonOptions &options) {
  options.config.validate();
  std::vector<ComparisonRow> rows;
  rows.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    ComparisonRow row;
    row.index = i;
    row.truth = random_redundant(derive_seed(options.seed, Stream::Compare, 2 * i),
                                 options.truth_box);
    const RateMatrixPair truth = redundant_to_matrices(row.truth);
    const InterarrivalSample sample =
        simulate(truth, options.n, SimulationStart::stationary(),
                 derive_seed(options.seed, Stream::Compare, 2 * i + 1));

    EstimationConfig config = options.config;
    config.seed = derive_seed(options.seed, Stream::Multistart, i);
    const std::uint64_t kl_seed = derive_seed(options.seed, Stream::Divergence, i);

    row.kl_canonical = guarded(
        [&] {
          const FitResult f = fit(sample.times, config);
          return empirical_kl(truth, f.matrices(), options.n, options.kl_runs, kl_seed)
              .value;
        },
        row.canonical_failure);
    row.kl_redundant = guarded(
        [&] {
          const FitResult f = ml_fit_redundant(sample.times, config);
          return empirical_kl(truth, f.matrices(), options.n, options.kl_runs, kl_seed)
              .value;
        },
        row.redundant_failure);
    if (row.kl_canonical && row.kl_redundant && *row.kl_canonical > 0.0)
      row.ratio = *row.kl_redundant / *row.kl_canonical;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> median_ratio(const std::vector<ComparisonRow> &rows) {
  std::vector<double> r;
  for (const ComparisonRow &row : rows)
    if (row.ratio)
      r.push_back(*row.ratio);
  if (r.empty())
    return std::nullopt;
  std::sort(r.begin(), r.end());
  const std::size_t mid = r.size() / 2;
  return r.size() % 2 == 1 ? r[mid] : 0.5 * (r[mid - 1] + r[mid]);
}

} // namespace map2fit
