#include "doctest.h"

#include "map2fit/error.hpp"
#include "map2fit/optimizer.hpp"

#include <cmath>
#include <limits>

using namespace map2fit;

TEST_CASE("minimize a shifted quadratic") {
  const Objective f = [](std::span<const double> x) {
    return (x[0] - 3.0) * (x[0] - 3.0) + 10.0 * (x[1] + 1.0) * (x[1] + 1.0);
  };
  const OptimizerResult r = minimize(f, {0.0, 0.0}, {});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(r.value <= 1e-12);
  CHECK(r.evaluations > r.iterations);
}

TEST_CASE("minimize Rosenbrock") {
  const Objective f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const OptimizerResult r = minimize(f, {-1.2, 1.0}, {});
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("non-finite values and library errors act as a wall") {
  const Objective f = [](std::span<const double> x) -> double {
    if (x[0] < 0.5)
      return std::numeric_limits<double>::quiet_NaN();
    if (x[0] > 4.0)
      throw Error(ErrorCode::SingularMatrix, "outside");
    return (x[0] - 1.0) * (x[0] - 1.0);
  };
  const OptimizerResult r = minimize(f, {2.0}, {});
  CHECK(std::isfinite(r.value));
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("start at the minimum stays there") {
  const Objective f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  const OptimizerResult r = minimize(f, {0.0, 0.0}, {});
  CHECK(r.value == 0.0);
  CHECK(r.converged);
}

TEST_CASE("iteration cap is honoured") {
  const Objective f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  OptimizerOptions options;
  options.max_iterations = 5;
  options.restarts = 0;
  const OptimizerResult r = minimize(f, {-1.2, 1.0}, options);
  CHECK(r.iterations <= 5);
  CHECK_FALSE(r.converged);
}
