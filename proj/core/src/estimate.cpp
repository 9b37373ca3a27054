#include "map2fit/estimate.hpp"

#include "map2fit/error.hpp"
#include "map2fit/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace map2fit {

namespace {

constexpr double fraction_margin = 1e-3;
constexpr double bound_activity_tolerance = 1e-6;
constexpr double degenerate_tolerance = 1e-10;

double logistic(double z) {
  if (z >= 0.0)
    return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(double p) {
  p = std::clamp(p, fraction_margin, 1.0 - fraction_margin);
  return std::log(p / (1.0 - p));
}

// Maps z in R onto [lo, hi] log-uniformly.
struct RateCoordinate {
  double log_lo;
  double log_hi;

  explicit RateCoordinate(const ParameterBox &box)
      : log_lo(std::log(std::max(box.rate_min, stability_floor))),
        log_hi(std::log(box.rate_max)) {}

  double decode(double z) const {
    const double r = std::exp(log_lo + (log_hi - log_lo) * logistic(z));
    return std::clamp(r, std::exp(log_lo), std::exp(log_hi));
  }
  double encode(double r) const {
    if (!(log_hi > log_lo))
      return 0.0;
    return logit((std::log(r) - log_lo) / (log_hi - log_lo));
  }
  double lo() const { return std::exp(log_lo); }
  double hi() const { return std::exp(log_hi); }
};

// Maps z onto [lo, hi] with hi = min(jump_max, cap), lo = min(jump_min, hi).
struct JumpCoordinate {
  double jump_min;
  double jump_max;

  std::pair<double, double> range(double cap) const {
    const double hi = std::min(jump_max, cap);
    return {std::min(jump_min, hi), hi};
  }
  double decode(double z, double cap) const {
    const auto [lo, hi] = range(cap);
    return std::min(hi, lo + (hi - lo) * logistic(z));
  }
  double encode(double value, double cap) const {
    const auto [lo, hi] = range(cap);
    if (!(hi > lo))
      return 0.0;
    return logit((value - lo) / (hi - lo));
  }
};

bool near(double value, double edge) {
  return std::abs(value - edge) <=
         bound_activity_tolerance * std::max(std::abs(edge), 1e-300);
}

class CanonicalCoordinates {
public:
  CanonicalCoordinates(Form form, const ParameterBox &box)
      : form_(form), rate_(box), jump_{box.jump_min, box.jump_max} {}

  static constexpr std::size_t dimension = 4;

  CanonicalMap2 decode(std::span<const double> z) const {
    CanonicalMap2 c;
    c.form = form_;
    const double fast = rate_.decode(z[0]);
    const double slow = rate_.decode(z[2]);
    c.x = -fast;
    c.y = jump_.decode(z[1], fast);
    c.u = -slow;
    c.v = jump_.decode(z[3], slow);
    return c;
  }

  std::vector<double> encode(const CanonicalMap2 &c) const {
    return {rate_.encode(-c.x), jump_.encode(c.y, -c.x), rate_.encode(-c.u),
            jump_.encode(c.v, -c.u)};
  }

  std::vector<std::string> active_bounds(const CanonicalMap2 &c) const {
    std::vector<std::string> out;
    auto rate = [&](const char *name, double value) {
      if (near(-value, rate_.hi()))
        out.push_back(std::string(name) + ":lower");
      if (near(-value, rate_.lo()))
        out.push_back(std::string(name) + ":upper");
    };
    auto jump = [&](const char *name, double value, double cap) {
      const auto [lo, hi] = jump_.range(cap);
      if (near(value, lo))
        out.push_back(std::string(name) + ":lower");
      if (near(value, hi))
        out.push_back(std::string(name) + ":upper");
    };
    rate("x", c.x);
    jump("y", c.y, -c.x);
    rate("u", c.u);
    jump("v", c.v, -c.u);
    return out;
  }

  static RateMatrixPair matrices(const CanonicalMap2 &c) {
    return canonical_to_matrices(c);
  }
  static CanonicalMap2 scaled(const CanonicalMap2 &c, double k) {
    return {c.form, k * c.x, k * c.y, k * c.u, k * c.v};
  }

private:
  Form form_;
  RateCoordinate rate_;
  JumpCoordinate jump_;
};

// lambda_i log-uniform over the rate box; each state's outcome simplex by
// stick breaking: hidden jump with probability s(z1), otherwise arrival to
// state 1 with probability s(z2).
class RedundantCoordinates {
public:
  explicit RedundantCoordinates(const ParameterBox &box) : rate_(box) {}

  static constexpr std::size_t dimension = 6;

  RedundantMap2 decode(std::span<const double> z) const {
    RedundantMap2 r;
    r.lambda1 = rate_.decode(z[0]);
    r.lambda2 = rate_.decode(z[1]);
    std::tie(r.p120, r.p111) = row(z[2], z[3]);
    std::tie(r.p210, r.p211) = row(z[4], z[5]);
    return r;
  }

  std::vector<double> encode(const RedundantMap2 &r) const {
    auto split = [](double hidden, double arrival) {
      const double rest = 1.0 - hidden;
      return rest > 0.0 ? arrival / rest : 0.5;
    };
    return {rate_.encode(r.lambda1), rate_.encode(r.lambda2),
            logit(r.p120),           logit(split(r.p120, r.p111)),
            logit(r.p210),           logit(split(r.p210, r.p211))};
  }

  std::vector<std::string> active_bounds(const RedundantMap2 &r) const {
    std::vector<std::string> out;
    for (auto [name, value] : {std::pair{"lambda1", r.lambda1},
                               std::pair{"lambda2", r.lambda2}}) {
      if (near(value, rate_.lo()))
        out.push_back(std::string(name) + ":lower");
      if (near(value, rate_.hi()))
        out.push_back(std::string(name) + ":upper");
    }
    return out;
  }

  static RateMatrixPair matrices(const RedundantMap2 &r) {
    return redundant_to_matrices(r);
  }
  static RedundantMap2 scaled(const RedundantMap2 &r, double k) {
    RedundantMap2 s = r;
    s.lambda1 *= k;
    s.lambda2 *= k;
    return s;
  }

private:
  static std::pair<double, double> row(double z_hidden, double z_arrival) {
    const double hidden = logistic(z_hidden);
    const double arrival = (1.0 - hidden) * logistic(z_arrival);
    return {hidden, std::min(arrival, 1.0 - hidden)};
  }

  RateCoordinate rate_;
};

std::uint64_t multistart_index(int family, int k) {
  return (static_cast<std::uint64_t>(family) << 32) |
         static_cast<std::uint64_t>(k);
}

template <class Coordinates, class Sampler>
auto multistart_moments(const Coordinates &coords, Sampler sample_start,
                        const MomentSummary &target,
                        const EstimationConfig &config) {
  using Model = decltype(coords.decode(std::span<const double>{}));
  std::optional<Model> best;
  double best_value = std::numeric_limits<double>::infinity();
  const Objective objective = [&](std::span<const double> z) {
    return delta_tau(Coordinates::matrices(coords.decode(z)), target,
                     config.tau);
  };
  for (int k = 0; k < config.multistart_count; ++k) {
    const Model start = sample_start(k);
    const OptimizerResult r =
        minimize(objective, coords.encode(start), config.optimizer);
    if (r.value < best_value) {
      best_value = r.value;
      best = coords.decode(r.x);
    }
  }
  if (!best || !std::isfinite(best_value) || best_value >= 1e300)
    throw Error(ErrorCode::NoFeasibleStart,
                "every moments-matching start failed");
  return *best;
}

double safe_loglik(const RateMatrixPair &m, std::span<const double> times) {
  try {
    return loglik(m, times).value;
  } catch (const Error &) {
    return -std::numeric_limits<double>::infinity();
  }
}

MomentSummary safe_moments(const RateMatrixPair &m) {
  try {
    return theoretical_moments(m);
  } catch (const Error &) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {moment(m, 1), moment(m, 2), moment(m, 3), nan};
  }
}

// Searches run on t / c, where a rate r reads as c r. Lifting the rate floor
// by c keeps the unscaled result above stability_floor.
ParameterBox standardized_box(ParameterBox box, double c) {
  box.rate_min =
      std::max(box.rate_min, stability_floor * std::max(c, 1.0) * (1.0 + 1e-9));
  if (!(box.rate_min < box.rate_max))
    throw Error(ErrorCode::InvalidModel,
                "sample scale leaves no room between the rate bounds");
  return box;
}

CanonicalMap2 canonical_multistart(const MomentSummary &target, Form form,
                                   const EstimationConfig &config,
                                   const ParameterBox &box) {
  const CanonicalCoordinates coords(form, box);
  const int family = form == Form::One ? 0 : 1;
  return multistart_moments(
      coords,
      [&](int k) {
        return random_canonical(
            derive_seed(config.seed, Stream::Multistart, multistart_index(family, k)),
            box, form);
      },
      target, config);
}

RedundantMap2 redundant_multistart(const MomentSummary &target,
                                   const EstimationConfig &config,
                                   const ParameterBox &box) {
  const RedundantCoordinates coords(box);
  return multistart_moments(
      coords,
      [&](int k) {
        return random_redundant(
            derive_seed(config.seed, Stream::Multistart, multistart_index(2, k)),
            box);
      },
      target, config);
}

template <class Coordinates, class Model>
FitResult refine(const Coordinates &coords, const Model &start_original,
                 std::span<const double> times, const EstimationConfig &config,
                 Representation representation) {
  validate_sample(times, 1);
  const SampleScale scale = sample_scale(times);
  const std::vector<double> standardized = scaled_times(times, scale.c);
  const Model start = Coordinates::scaled(start_original, scale.c);

  const double start_value =
      safe_loglik(Coordinates::matrices(start), standardized);

  const Objective objective = [&](std::span<const double> z) {
    return -loglik(Coordinates::matrices(coords.decode(z)), standardized).value;
  };
  const OptimizerResult r =
      minimize(objective, coords.encode(start), config.optimizer);

  Model best = start;
  double best_value = start_value;
  const Model candidate = coords.decode(r.x);
  const double candidate_value =
      safe_loglik(Coordinates::matrices(candidate), standardized);
  if (candidate_value > start_value) {
    best = candidate;
    best_value = candidate_value;
  }
  if (!std::isfinite(best_value))
    throw Error(ErrorCode::OptimizerFailure,
                "no finite likelihood at the start or after the search");

  const double shift = static_cast<double>(times.size()) * std::log(scale.c);
  auto original = [&](double value) {
    LogLikelihood ll;
    ll.value = value - shift;
    ll.n = times.size();
    ll.scale_used = scale.c;
    ll.zero_variance_fallback = scale.zero_variance_fallback;
    return ll;
  };

  FitResult result;
  result.representation = representation;
  const Model fitted = Coordinates::scaled(best, 1.0 / scale.c);
  result.model = fitted;
  result.start_model = start_original;
  result.loglik = original(best_value);
  result.start_loglik = original(start_value);
  const RateMatrixPair pair = Coordinates::matrices(fitted);
  result.form_selected = classify_form(pair);
  result.moments = safe_moments(pair);
  result.iterations = r.iterations;
  result.converged = r.converged;
  result.start_bounds_active = coords.active_bounds(start);
  result.bounds_active = coords.active_bounds(best);
  return result;
}

} // namespace

void EstimationConfig::validate() const {
  std::ostringstream msg;
  if (!(tau > 0.0) || !std::isfinite(tau))
    msg << "tau must be positive; ";
  if (!(rate_bounds.lower < rate_bounds.upper) || !(rate_bounds.upper < 0.0))
    msg << "rate bounds must be ordered and negative; ";
  if (!(jump_bounds.lower <= jump_bounds.upper) || jump_bounds.lower < 0.0)
    msg << "jump bounds must be ordered and nonnegative; ";
  if (multistart_count < 1)
    msg << "multistart count must be at least 1; ";
  if (optimizer.max_iterations < 1)
    msg << "optimizer needs at least one iteration; ";
  if (!msg.str().empty())
    throw Error(ErrorCode::InvalidModel, "bad estimation config: " + msg.str());
}

ParameterBox EstimationConfig::moments_box() const {
  return {std::max(-rate_bounds.upper, stability_floor), -rate_bounds.lower,
          jump_bounds.lower, jump_bounds.upper};
}

ParameterBox EstimationConfig::likelihood_box() const {
  ParameterBox box = moments_box();
  box.jump_min = 0.0;
  box.jump_max = std::numeric_limits<double>::infinity();
  return box;
}

std::string_view to_string(Representation r) {
  return r == Representation::Canonical ? "canonical" : "redundant";
}

RateMatrixPair to_matrices(const FittedModel &m) {
  return std::visit(
      [](const auto &model) -> RateMatrixPair {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, CanonicalMap2>)
          return canonical_to_matrices(model);
        else
          return redundant_to_matrices(model);
      },
      m);
}

double delta_tau(const RateMatrixPair &m, const MomentSummary &target,
                 double tau) {
  const MomentSummary fitted = theoretical_moments(m);
  const double rho_gap = fitted.rho1 - target.rho1;
  const double g1 = (fitted.mu1 - target.mu1) / target.mu1;
  const double g2 = (fitted.mu2 - target.mu2) / target.mu2;
  const double g3 = (fitted.mu3 - target.mu3) / target.mu3;
  return rho_gap * rho_gap + tau * (g1 * g1 + g2 * g2 + g3 * g3);
}

double delta_tau(const CanonicalMap2 &params, const MomentSummary &target,
                 double tau) {
  return delta_tau(canonical_to_matrices(params), target, tau);
}

MomentSummary matching_target(std::span<const double> times) {
  const auto raw = raw_sample_moments(times);
  return {raw[0], raw[1], raw[2], sample_autocorrelation(times, 1).value_or(0.0)};
}

CanonicalMap2 moments_match_start(const MomentSummary &target, Form form,
                                  const EstimationConfig &config) {
  config.validate();
  return canonical_multistart(target, form, config, config.moments_box());
}

FitResult ml_fit_form(std::span<const double> times, Form form,
                      const CanonicalMap2 &start, const EstimationConfig &config) {
  config.validate();
  start.validate();
  if (start.form != form)
    throw Error(ErrorCode::InvalidModel, "start model is in the other form");
  validate_sample(times, 1);
  const CanonicalCoordinates coords(
      form, standardized_box(config.likelihood_box(), sample_scale(times).c));
  return refine(coords, start, times, config, Representation::Canonical);
}

FitResult fit_form(std::span<const double> times, Form form,
                   const EstimationConfig &config) {
  config.validate();
  validate_sample(times, 1);
  const double c = sample_scale(times).c;
  const MomentSummary target = matching_target(scaled_times(times, c));
  const CanonicalMap2 start = CanonicalCoordinates::scaled(
      canonical_multistart(target, form, config,
                           standardized_box(config.moments_box(), c)),
      1.0 / c);
  FitResult result = ml_fit_form(times, form, start, config);
  result.form_selected = form;
  return result;
}

FormFits fit_both_forms(std::span<const double> times,
                        const EstimationConfig &config) {
  FormFits fits{fit_form(times, Form::One, config),
                fit_form(times, Form::Two, config), Form::One};
  if (fits.form_two.loglik.value > fits.form_one.loglik.value)
    fits.selected = Form::Two;
  return fits;
}

FitResult fit(std::span<const double> times, const EstimationConfig &config) {
  return fit_both_forms(times, config).best();
}

RedundantMap2 moments_match_start_redundant(const MomentSummary &target,
                                            const EstimationConfig &config) {
  config.validate();
  return redundant_multistart(target, config, config.moments_box());
}

FitResult ml_fit_redundant(std::span<const double> times,
                           const EstimationConfig &config) {
  config.validate();
  validate_sample(times, 1);
  const SampleScale scale = sample_scale(times);
  const std::vector<double> standardized = scaled_times(times, scale.c);
  const RedundantMap2 start_standardized = redundant_multistart(
      matching_target(standardized), config,
      standardized_box(config.moments_box(), scale.c));
  const RedundantMap2 start =
      RedundantCoordinates::scaled(start_standardized, 1.0 / scale.c);

  const RedundantCoordinates coords(
      standardized_box(config.likelihood_box(), scale.c));
  FitResult result =
      refine(coords, start, times, config, Representation::Redundant);

  const auto &r = std::get<RedundantMap2>(result.model);
  std::ostringstream why;
  if (!result.converged)
    why << "search did not converge in " << result.iterations << " iterations";
  else if (1.0 - r.p120 * r.p210 < degenerate_tolerance)
    why << "D0 is numerically singular (p120 * p210 = " << r.p120 * r.p210 << ")";
  else {
    const Matrix2 p = embedded_chain(result.matrices());
    if (p.a12 + p.a21 < degenerate_tolerance)
      why << "embedded chain is numerically reducible";
  }
  if (!why.str().empty())
    throw Error(ErrorCode::OptimizerFailure, why.str());
  return result;
}

} // namespace map2fit
