#include "doctest.h"

#include "map2fit/error.hpp"
#include "map2fit/likelihood.hpp"
#include "map2fit/model.hpp"
#include "map2fit/random.hpp"
#include "map2fit/simulate.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

using namespace map2fit;

namespace {

// phi from P* = (-D0)^-1 D1 in long double, independent of the library.
oracle::LVec phi_long(const RateMatrixPair &m) {
  const auto d0 = fixtures::to_long(m.d0);
  const auto d1 = fixtures::to_long(m.d1);
  const long double det = d0[0][0] * d0[1][1] - d0[0][1] * d0[1][0];
  const oracle::LMat neg_inv{{{-d0[1][1] / det, d0[0][1] / det},
                              {d0[1][0] / det, -d0[0][0] / det}}};
  const oracle::LMat p = oracle::mul(neg_inv, d1);
  const long double flow = p[0][1] + p[1][0];
  if (flow == 0.0L)
    return {0.5L, 0.5L};
  return {p[1][0] / flow, p[0][1] / flow};
}

long double oracle_loglik(const RateMatrixPair &m, const std::vector<double> &t) {
  return std::log(oracle::direct_product<long double>(
      fixtures::to_long(m.d0), fixtures::to_long(m.d1), phi_long(m), t));
}

const ParameterBox box{0.05, 20.0};

} // namespace

TEST_CASE("Poisson likelihood has a closed form") {
  const RateMatrixPair m = fixtures::matrices(fixtures::poisson1());
  const std::vector<double> t{0.5, 1.25, 3.0, 0.01};
  CHECK(loglik(m, t).value == doctest::Approx(-4.76).epsilon(1e-14));
  const RateMatrixPair fast = rescale_model(m, 3.0);
  CHECK(loglik(fast, t).value == doctest::Approx(4.0 * std::log(3.0) - 3.0 * 4.76));
}

TEST_CASE("single observation equals the marginal density") {
  // f(t) = phi exp(D0 t) (-D0) e; for the first example phi exp(D0 t) D1 e.
  const RateMatrixPair m = fixtures::matrices(fixtures::example1());
  const Vector2 phi = stationary_phi(m);
  for (double t : {0.001, 0.1, 1.0, 7.5, 40.0}) {
    const Vector2 w = phi * expm(m.d0, t) * m.d1;
    CHECK(loglik(m, std::vector<double>{t}).value ==
          doctest::Approx(std::log(w.sum())).epsilon(1e-13));
  }
}

TEST_CASE("marginal density integrates to one and to the mean") {
  const RateMatrixPair m = fixtures::matrices(fixtures::example1());
  auto f = [&](long double t) -> long double {
    if (t <= 0.0L)
      t = 1e-300L;
    return std::exp(static_cast<long double>(
        loglik(m, std::vector<double>{static_cast<double>(t)}).value));
  };
  // Tail beyond 100 is below exp(-50).
  // The fast phase (rate 20) needs a finer grid near the origin.
  auto integrate = [](const std::function<long double(long double)> &g) {
    return oracle::simpson(g, 0.0L, 2.0L, 20000) + oracle::simpson(g, 2.0L, 100.0L, 20000);
  };
  const long double mass = integrate(f);
  const long double mean = integrate([&](long double t) { return t * f(t); });
  CHECK(static_cast<double>(mass) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(static_cast<double>(mean) == doctest::Approx(moment(m, 1)).epsilon(1e-8));
}

TEST_CASE("loglik matches the extended-precision direct product") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RateMatrixPair m = canonical_to_matrices(random_canonical(seed, box));
    const std::size_t n = 1 + seed % 20;
    const auto sample =
        simulate(m, n, SimulationStart::stationary(), derive_seed(seed, Stream::Scan, 0));
    const double lib = loglik(m, sample.times).value;
    const double ref = static_cast<double>(oracle_loglik(m, sample.times));
    worst = std::max(worst, std::abs(lib - ref));
    CHECK(std::abs(lib - ref) <= 1e-9);
  }
  MESSAGE("worst absolute log gap " << worst);
}

TEST_CASE("redundant models agree with the oracle too") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RateMatrixPair m = redundant_to_matrices(random_redundant(seed, box));
    const auto sample = simulate(m, 15, SimulationStart::stationary(), seed);
    CHECK(std::abs(loglik(m, sample.times).value -
                   static_cast<double>(oracle_loglik(m, sample.times))) <= 1e-9);
  }
}

TEST_CASE("rescaling identity") {
  Rng rng(77);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const RateMatrixPair m = canonical_to_matrices(random_canonical(seed, box));
    const auto sample = simulate(m, 100, SimulationStart::stationary(), seed);
    const double c = rng.log_uniform(1e-3, 1e3);
    const double direct = loglik(m, sample.times).value;
    const double rescaled = -100.0 * std::log(c) +
                            loglik(rescale_model(m, c), scaled_times(sample.times, c)).value;
    CHECK(std::abs(direct - rescaled) <= 1e-7);
    CHECK(std::abs(loglik_scaled_pipeline(m, sample.times).value - direct) <= 1e-7);
  }
}

TEST_CASE("rescale_model and sample_scale") {
  const RateMatrixPair m = fixtures::matrices(fixtures::example1());
  CHECK_THROWS_AS(rescale_model(m, 0.0), Error);
  CHECK_THROWS_AS(rescale_model(m, -2.0), Error);
  CHECK_THROWS_AS(rescale_model(m, INFINITY), Error);

  const std::vector<double> t{1.0, 2.0, 3.0, 4.0};
  CHECK(sample_scale(t).c == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK_FALSE(sample_scale(t).zero_variance_fallback);

  const std::vector<double> flat{2.5, 2.5, 2.5};
  const SampleScale s = sample_scale(flat);
  CHECK(s.c == 2.5);
  CHECK(s.zero_variance_fallback);
  const LogLikelihood ll = loglik_scaled_pipeline(m, flat);
  CHECK(ll.zero_variance_fallback);
  CHECK(ll.value == doctest::Approx(loglik(m, flat).value).epsilon(1e-12));
}

TEST_CASE("underflow immunity on the third example") {
  const RateMatrixPair m = fixtures::matrices(fixtures::example3());
  const auto sample = simulate(m, 500, SimulationStart::stationary(), 2024);

  // Plain double product of the density definition.
  Vector2 w = stationary_phi(m);
  std::size_t underflow_at = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    w = w * expm(m.d0, sample.times[i]) * m.d1;
    if (underflow_at == 0 && w.sum() == 0.0)
      underflow_at = i + 1;
  }
  CHECK(w.sum() == 0.0);
  CHECK(underflow_at > 0);
  MESSAGE("naive product underflows at observation " << underflow_at);

  const LogLikelihood ll = loglik(m, sample.times);
  CHECK(std::isfinite(ll.value));
  CHECK(std::abs(loglik_scaled_pipeline(m, sample.times).value - ll.value) <= 1e-7);
}

TEST_CASE("order of observations matters for correlated models") {
  const RateMatrixPair corr = fixtures::matrices(fixtures::example1());
  const RateMatrixPair pois = fixtures::matrices(fixtures::poisson1());
  auto sample = simulate(corr, 200, SimulationStart::stationary(), 8).times;
  const double before = loglik(corr, sample).value;
  const double pois_before = loglik(pois, sample).value;
  std::sort(sample.begin(), sample.end());
  CHECK(loglik(corr, sample).value != doctest::Approx(before).epsilon(1e-6));
  CHECK(loglik(pois, sample).value == doctest::Approx(pois_before).epsilon(1e-12));
}

TEST_CASE("loglik input validation") {
  const RateMatrixPair m = fixtures::matrices(fixtures::example1());
  auto code = [&](std::vector<double> t) {
    try {
      (void)loglik(m, t);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::OptimizerFailure;
  };
  CHECK(code({}) == ErrorCode::EmptySample);
  CHECK(code({1.0, 0.0}) == ErrorCode::NonpositiveEntry);
  CHECK(code({1.0, -3.0}) == ErrorCode::NonpositiveEntry);
}
