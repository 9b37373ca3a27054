#include "doctest.h"

#include "map2fit/error.hpp"
#include "map2fit/likelihood.hpp"
#include "map2fit/model.hpp"
#include "map2fit/random.hpp"
#include "map2fit/simulate.hpp"
#include "support/fixtures.hpp"

#include <cmath>
#include <vector>

using namespace map2fit;

namespace {

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidModel;
}

const ParameterBox property_box{0.01, 100.0};

} // namespace

TEST_CASE("canonical_to_matrices") {
  SUBCASE("first example") {
    const RateMatrixPair m = canonical_to_matrices(fixtures::example1());
    CHECK(m.d0 == Matrix2{-20.0, 6.0, 0.0, -0.5});
    CHECK(m.d1.a11 == 14.0);
    CHECK(m.d1.a12 == 0.0);
    CHECK(m.d1.a21 == 0.0426);
    CHECK(m.d1.a22 == doctest::Approx(0.4574).epsilon(1e-14));
  }
  SUBCASE("Poisson written in FormOne") {
    const RateMatrixPair m = canonical_to_matrices(fixtures::poisson1());
    CHECK(m.d1 == Matrix2{1.0, 0.0, 1.0, 0.0});
  }
  SUBCASE("FormTwo on the x + y = 0 boundary") {
    const RateMatrixPair m = canonical_to_matrices({Form::Two, -1.0, 1.0, -1.0, 0.0});
    CHECK(m.d1 == Matrix2{0.0, 0.0, 1.0, 0.0});
  }
  SUBCASE("constraint violations") {
    CHECK(code_of([] { canonical_to_matrices({Form::One, 0.0, 0.0, -1.0, 0.5}); }) ==
          ErrorCode::InvalidModel);
    CHECK(code_of([] { canonical_to_matrices({Form::One, -1.0, 2.0, -1.0, 0.5}); }) ==
          ErrorCode::InvalidModel);
    CHECK(code_of([] { canonical_to_matrices({Form::Two, -1.0, -0.1, -1.0, 0.5}); }) ==
          ErrorCode::InvalidModel);
  }
}

TEST_CASE("redundant_to_matrices") {
  SUBCASE("Poisson") {
    const RateMatrixPair m = redundant_to_matrices({1.0, 1.0, 0.0, 1.0, 0.0, 0.0});
    CHECK(m.d0 == Matrix2::diagonal(-1.0, -1.0));
    CHECK(m.d1 == Matrix2{1.0, 0.0, 0.0, 1.0});
  }
  SUBCASE("reproduces the first example") {
    const RateMatrixPair m = redundant_to_matrices({20.0, 0.5, 0.3, 0.7, 0.0, 0.0852});
    CHECK(m.d0.a11 == -20.0);
    CHECK(m.d0.a12 == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(m.d0.a21 == 0.0);
    CHECK(m.d0.a22 == -0.5);
    CHECK(m.d1.a11 == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(std::abs(m.d1.a12) <= 1e-14);
    CHECK(m.d1.a21 == doctest::Approx(0.0426).epsilon(1e-15));
    CHECK(m.d1.a22 == doctest::Approx(0.4574).epsilon(1e-14));
  }
  SUBCASE("row probabilities above one") {
    CHECK(code_of([] { redundant_to_matrices({1.0, 1.0, 0.5, 0.7, 0.0, 0.0}); }) ==
          ErrorCode::InvalidModel);
  }
}

TEST_CASE("embedded chain and stationary laws") {
  const RateMatrixPair ex1 = fixtures::matrices(fixtures::example1());
  SUBCASE("embedded chain of the first example") {
    const Matrix2 p = embedded_chain(ex1);
    CHECK(p.a11 == doctest::Approx(0.72556).epsilon(1e-12));
    CHECK(p.a12 == doctest::Approx(0.27444).epsilon(1e-12));
    CHECK(p.a21 == doctest::Approx(0.0852).epsilon(1e-12));
    CHECK(p.a22 == doctest::Approx(0.9148).epsilon(1e-12));
  }
  SUBCASE("Poisson chain always lands in state one") {
    const RateMatrixPair pois = fixtures::matrices(fixtures::poisson1());
    CHECK(embedded_chain(pois) == Matrix2{1.0, 0.0, 1.0, 0.0});
    const Vector2 phi = stationary_phi(pois);
    CHECK(phi.v1 == 1.0);
    CHECK(phi.v2 == 0.0);
  }
  SUBCASE("phi of the first example") {
    const Vector2 phi = stationary_phi(ex1);
    CHECK(phi.v1 == doctest::Approx(0.0852 / 0.35964).epsilon(1e-12));
    CHECK(phi.v2 == doctest::Approx(0.76310).epsilon(1e-4));
  }
  SUBCASE("phi of a chain that alternates") {
    const RateMatrixPair alt = canonical_to_matrices({Form::Two, -2.0, 0.0, -3.0, 0.0});
    const Vector2 phi = stationary_phi(alt);
    CHECK(phi.v1 == 0.5);
    CHECK(phi.v2 == 0.5);
  }
  SUBCASE("pi of the first example") {
    // D = [[-6, 6], [0.0426, -0.0426]], pi1 = D21 / (D12 + D21)
    const Vector2 pi = stationary_pi(ex1);
    CHECK(pi.v1 == doctest::Approx(0.0426 / 6.0426).epsilon(1e-12));
    const Vector2 residual = pi * ex1.generator();
    CHECK(std::abs(residual.v1) <= 1e-9);
    CHECK(std::abs(residual.v2) <= 1e-9);
  }
  SUBCASE("pi of a symmetric generator") {
    const RateMatrixPair sym{{-3.0, 2.0, 2.0, -3.0}, {1.0, 0.0, 0.0, 1.0}};
    const Vector2 pi = stationary_pi(sym);
    CHECK(pi.v1 == 0.5);
  }
  SUBCASE("diagonal generator is reducible") {
    const RateMatrixPair split{Matrix2::diagonal(-1.0, -2.0), Matrix2::diagonal(1.0, 2.0)};
    CHECK(code_of([&] { stationary_pi(split); }) == ErrorCode::ReducibleChain);
  }
}

TEST_CASE("theoretical moments") {
  SUBCASE("first example") {
    const RateMatrixPair m = fixtures::matrices(fixtures::example1());
    CHECK(moment(m, 1) == doctest::Approx(1.6802).epsilon(5e-5 / 1.6802));
    CHECK(moment(m, 2) == doctest::Approx(6.6887).epsilon(5e-5 / 6.6887));
    CHECK(moment(m, 3) == doctest::Approx(40.1276).epsilon(5e-5 / 40.1276));
    CHECK(gamma(m) == doctest::Approx(0.64036).epsilon(1e-12));
    const double rho1 = autocorrelation(m, 1);
    CHECK(std::abs(rho1 - 0.0864) <= 5e-5);
    CHECK(autocorrelation(m, 2) == doctest::Approx(gamma(m) * rho1).epsilon(1e-12));
    CHECK(classify_form(m) == Form::One);
  }
  SUBCASE("third example") {
    const RateMatrixPair m = fixtures::matrices(fixtures::example3());
    const MomentSummary s = theoretical_moments(m);
    CHECK(s.mu1 == doctest::Approx(67.3783).epsilon(1e-3));
    CHECK(s.mu2 == doctest::Approx(2.6686e4).epsilon(1e-3));
    CHECK(s.mu3 == doctest::Approx(1.6011e7).epsilon(1e-3));
    CHECK(s.rho1 == doctest::Approx(0.3963).epsilon(1e-3));
    CHECK(classify_form(m) == Form::One);
  }
  SUBCASE("Poisson has exponential moments and no correlation") {
    const RateMatrixPair m = fixtures::matrices(fixtures::poisson1());
    CHECK(moment(m, 1) == doctest::Approx(1.0));
    CHECK(moment(m, 2) == doctest::Approx(2.0));
    CHECK(moment(m, 3) == doctest::Approx(6.0));
    CHECK(moment(m, 4) == doctest::Approx(24.0));
    CHECK(gamma(m) == 0.0);
    CHECK(autocorrelation(m, 3) == 0.0);
    CHECK(classify_form(m) == Form::Two);
  }
  SUBCASE("periodic embedded chain sits at gamma = -1") {
    const RateMatrixPair alt = canonical_to_matrices({Form::Two, -2.0, 0.0, -3.0, 0.0});
    CHECK(gamma(alt) == -1.0);
    CHECK(classify_form(alt) == Form::Two);
  }
  SUBCASE("order must be positive") {
    const RateMatrixPair m = fixtures::matrices(fixtures::poisson1());
    CHECK_THROWS_AS((void)moment(m, 0), Error);
    CHECK_THROWS_AS((void)autocorrelation(m, 0), Error);
  }
}

TEST_CASE("empirical moments") {
  SUBCASE("two-point sample") {
    const std::vector<double> t{1.0, 3.0};
    const MomentSummary s = empirical_moments(t);
    CHECK(s.mu1 == 2.0);
    CHECK(s.mu2 == 5.0);
    CHECK(s.mu3 == 14.0);
    CHECK(s.rho1 == doctest::Approx(-0.5));
  }
  SUBCASE("constant sample has no autocorrelation") {
    const std::vector<double> t{2.0, 2.0, 2.0, 2.0};
    const auto raw = raw_sample_moments(t);
    CHECK(raw[0] == 2.0);
    CHECK(raw[1] == 4.0);
    CHECK(raw[2] == 8.0);
    CHECK(code_of([&] { empirical_moments(t); }) == ErrorCode::DegenerateVariance);
  }
  SUBCASE("input errors") {
    const std::vector<double> one{1.0};
    const std::vector<double> bad{1.0, -2.0};
    CHECK(code_of([&] { empirical_moments(one); }) == ErrorCode::EmptySample);
    CHECK(code_of([&] { empirical_moments({}); }) == ErrorCode::EmptySample);
    CHECK(code_of([&] { empirical_moments(bad); }) == ErrorCode::NonpositiveEntry);
  }
  SUBCASE("large simulated sample approaches the first example's moments") {
    const RateMatrixPair m = fixtures::matrices(fixtures::example1());
    const auto sample = simulate(m, 200000, SimulationStart::stationary(), 99);
    const MomentSummary s = empirical_moments(sample.times);
    const double sd = std::sqrt(moment(m, 2) - moment(m, 1) * moment(m, 1));
    CHECK(std::abs(s.mu1 - 1.6802) <= 4.0 * sd / std::sqrt(200000.0) * 3.0);
    CHECK(std::abs(s.mu2 - 6.6887) / 6.6887 < 0.05);
    CHECK(std::abs(s.rho1 - 0.0864) < 0.02);
  }
}

TEST_CASE("properties over random canonical models") {
  int form_one = 0, form_two = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const CanonicalMap2 c = random_canonical(seed, property_box);
    const RateMatrixPair m = canonical_to_matrices(c);

    const CanonicalMap2 back = read_canonical(m, c.form);
    CHECK(back.x == c.x);
    CHECK(back.y == c.y);
    CHECK(back.u == c.u);
    CHECK(back.v == doctest::Approx(c.v).epsilon(1e-14));

    const Matrix2 p = embedded_chain(m);
    CHECK(std::abs(p.row_sums().v1 - 1.0) <= 1e-9);
    CHECK(std::abs(p.row_sums().v2 - 1.0) <= 1e-9);

    const double mu1 = moment(m, 1), mu2 = moment(m, 2);
    CHECK(mu2 > mu1 * mu1);
    CHECK(std::abs((0.5 * mu2 - mu1 * mu1) / (mu2 - mu1 * mu1)) <= 1.0);

    const double g = gamma(m);
    if (c.form == Form::One) {
      CHECK(g >= -1e-15);
      ++form_one;
    } else {
      CHECK(g <= 1e-15);
      ++form_two;
    }

    double previous = std::abs(autocorrelation(m, 1));
    for (int k = 1; k <= 5; ++k) {
      const double rho = autocorrelation(m, k);
      if (std::abs(g) > 1e-12 && std::abs(rho) > 1e-300) {
        const double prefactor = (0.5 * mu2 - mu1 * mu1) / (mu2 - mu1 * mu1);
        CHECK((rho > 0) == ((std::pow(g, k) > 0) == (prefactor > 0)));
      }
      CHECK(std::abs(rho) <= previous + 1e-15);
      previous = std::abs(rho);
    }
  }
  CHECK(form_one > 0);
  CHECK(form_two > 0);
}

TEST_CASE("autocorrelation sign follows gamma when the prefactor is positive") {
  // mu2 > 2 mu1^2 (coefficient of variation above one) makes the prefactor
  // positive; the canonical examples all sit in that regime.
  for (const CanonicalMap2 &c : {fixtures::example1(), fixtures::example3(),
                                 fixtures::alternating()}) {
    const RateMatrixPair m = canonical_to_matrices(c);
    CHECK(moment(m, 2) > 2.0 * moment(m, 1) * moment(m, 1));
    const double g = gamma(m);
    for (int k = 1; k <= 4; ++k)
      CHECK((autocorrelation(m, k) > 0.0) == (std::pow(g, k) > 0.0));
  }
}

TEST_CASE("matrices_to_redundant round trips") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const RateMatrixPair m = canonical_to_matrices(random_canonical(seed, property_box));
    const RateMatrixPair back = redundant_to_matrices(matrices_to_redundant(m));
    CHECK(std::abs(back.d0.a12 - m.d0.a12) <= 1e-12 * m.d0.norm_inf());
    CHECK(std::abs(back.d1.a11 - m.d1.a11) <= 1e-12 * m.d0.norm_inf());
    CHECK(std::abs(back.d1.a22 - m.d1.a22) <= 1e-12 * m.d0.norm_inf());
  }
}

TEST_CASE("matrices_to_canonical") {
  SUBCASE("recovers the first example") {
    const CanonicalMap2 c = matrices_to_canonical(fixtures::matrices(fixtures::example1()));
    CHECK(c.form == Form::One);
    CHECK(c.x == doctest::Approx(-20.0).epsilon(1e-8));
    CHECK(c.y == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(c.u == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(c.v == doctest::Approx(0.0426).epsilon(1e-6));
  }
  SUBCASE("random redundant models keep their joint density") {
    int converted = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const RateMatrixPair m = redundant_to_matrices(random_redundant(seed, property_box));
      CanonicalMap2 c;
      try {
        c = matrices_to_canonical(m);
      } catch (const Error &) {
        continue;
      }
      ++converted;
      const RateMatrixPair cm = canonical_to_matrices(c);
      CHECK(gamma(cm) == doctest::Approx(gamma(m)).epsilon(1e-6).scale(1.0));
      const auto sample = simulate(m, 50, SimulationStart::stationary(), seed);
      CHECK(loglik(cm, sample.times).value ==
            doctest::Approx(loglik(m, sample.times).value).epsilon(1e-6));
    }
    CHECK(converted >= 95);
  }
}
