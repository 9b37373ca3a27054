#ifndef MAP2FIT_SIMULATE_HPP
#define MAP2FIT_SIMULATE_HPP

#include "map2fit/model.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace map2fit {

struct InterarrivalSample {
  std::vector<double> times;
  std::string origin;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return times.size(); }
  void validate() const { validate_sample(times, 1); }
};

struct SimulationStart {
  enum class Mode { StationaryAtArrival, FixedState };
  Mode mode = Mode::StationaryAtArrival;
  int state = 1; // 1 or 2, used by FixedState

  static SimulationStart stationary() { return {}; }
  static SimulationStart fixed(int state) { return {Mode::FixedState, state}; }
};

// Competing-exponentials simulation of the hidden chain: sojourn in state i
// is Exp(-D0[i][i]); the next event is a hidden jump with weight D0[i][j]
// (j != i) or an arrival into j with weight D1[i][j]. Each interarrival
// time is the total sojourn between consecutive arrivals. The stationary
// start draws the state at the first arrival epoch from phi.
// Throws NonErgodic when D1 is identically zero.
InterarrivalSample simulate(const RateMatrixPair &m, std::size_t n,
                            SimulationStart start, std::uint64_t seed);

// Box for random model generation. Rates are magnitudes of x and u
// (-x, -u in [rate_min, rate_max]); the jump rates y and v are drawn
// uniformly from [jump_min, min(jump_max, -x)] (resp. -u).
struct ParameterBox {
  double rate_min = 1e-2;
  double rate_max = 1e2;
  double jump_min = 0.0;
  double jump_max = std::numeric_limits<double>::infinity();
};

// -x, -u log-uniform over the rate range; y, v uniform below -x, -u.
// A missing form is chosen by a fair coin.
CanonicalMap2 random_canonical(std::uint64_t seed, const ParameterBox &box,
                               std::optional<Form> form = std::nullopt);

// lambda_i log-uniform over the rate range; each state's three outcome
// probabilities (hidden jump, arrival to 1, arrival to 2) uniform on the
// simplex.
RedundantMap2 random_redundant(std::uint64_t seed, const ParameterBox &box);

} // namespace map2fit

#endif
