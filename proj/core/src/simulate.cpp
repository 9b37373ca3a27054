#include "map2fit/simulate.hpp"

#include "map2fit/error.hpp"
#include "map2fit/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace map2fit {

InterarrivalSample simulate(const RateMatrixPair &m, std::size_t n,
                            SimulationStart start, std::uint64_t seed) {
  if (m.d1 == Matrix2{})
    throw Error(ErrorCode::NonErgodic, "D1 is zero, no arrivals can occur");
  m.validate();
  if (n == 0)
    throw Error(ErrorCode::EmptySample, "sample length must be at least 1");

  Rng rng(seed, Stream::Simulation);
  int state = 0;
  if (start.mode == SimulationStart::Mode::FixedState) {
    if (start.state != 1 && start.state != 2)
      throw Error(ErrorCode::InvalidModel, "start state must be 1 or 2");
    state = start.state - 1;
  } else {
    state = rng.uniform() < stationary_phi(m).v1 ? 0 : 1;
  }

  InterarrivalSample sample;
  sample.times.reserve(n);
  sample.seed = seed;
  while (sample.times.size() < n) {
    double elapsed = 0.0;
    for (;;) {
      const double hidden = m.d0(state, 1 - state);
      const double to_first = m.d1(state, 0);
      const double to_second = m.d1(state, 1);
      const double total = hidden + to_first + to_second;
      elapsed += rng.exponential(-m.d0(state, state));
      const double pick = rng.uniform() * total;
      if (pick < hidden) {
        state = 1 - state;
        continue;
      }
      state = pick < hidden + to_first ? 0 : 1;
      break;
    }
    sample.times.push_back(elapsed);
  }
  return sample;
}

namespace {

double jump_rate(Rng &rng, double rate, const ParameterBox &box) {
  const double cap = std::min(box.jump_max, rate);
  const double floor = std::min(box.jump_min, cap);
  return rng.uniform(floor, cap);
}

} // namespace

CanonicalMap2 random_canonical(std::uint64_t seed, const ParameterBox &box,
                               std::optional<Form> form) {
  const double lo = std::max(box.rate_min, stability_floor);
  if (!(box.rate_max >= lo))
    throw Error(ErrorCode::InvalidModel, "empty rate range for random model");
  Rng rng(seed, Stream::RandomModel);
  for (;;) {
    CanonicalMap2 c;
    c.form = form ? *form : (rng.uniform() < 0.5 ? Form::One : Form::Two);
    const double fast = rng.log_uniform(lo, box.rate_max);
    const double slow = rng.log_uniform(lo, box.rate_max);
    c.x = -fast;
    c.y = jump_rate(rng, fast, box);
    c.u = -slow;
    c.v = jump_rate(rng, slow, box);
    try {
      (void)stationary_phi(canonical_to_matrices(c));
      return c;
    } catch (const Error &) {
      // resample
    }
  }
}

RedundantMap2 random_redundant(std::uint64_t seed, const ParameterBox &box) {
  const double lo = std::max(box.rate_min, stability_floor);
  Rng rng(seed, Stream::RandomModel);
  auto simplex = [&rng]() {
    // Sorted uniforms give a uniform point on the 3-outcome simplex.
    double a = rng.uniform(), b = rng.uniform();
    if (a > b)
      std::swap(a, b);
    return std::array<double, 3>{a, b - a, 1.0 - b};
  };
  for (;;) {
    RedundantMap2 r;
    r.lambda1 = rng.log_uniform(lo, box.rate_max);
    r.lambda2 = rng.log_uniform(lo, box.rate_max);
    const auto s1 = simplex();
    const auto s2 = simplex();
    r.p120 = s1[0];
    r.p111 = s1[1];
    r.p210 = s2[0];
    r.p211 = s2[1];
    try {
      (void)stationary_phi(redundant_to_matrices(r));
      return r;
    } catch (const Error &) {
    }
  }
}

} // namespace map2fit
