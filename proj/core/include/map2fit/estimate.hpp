#ifndef MAP2FIT_ESTIMATE_HPP
#define MAP2FIT_ESTIMATE_HPP

// Estimation pipeline:
//   1. moments matching (penalized least squares on rho1, mu1..mu3) with a
//      multistart, giving a starting model in each canonical form;
//   2. likelihood maximization in each form on the sample standardized by
//      its standard deviation, mapped back to the original time scale;
//   3. selection of the form with the larger likelihood.
// The same steps are available over the six redundant parameters as a
// baseline.

#include "map2fit/likelihood.hpp"
#include "map2fit/model.hpp"
#include "map2fit/optimizer.hpp"
#include "map2fit/simulate.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace map2fit {

struct Interval {
  double lower;
  double upper;
};

struct EstimationConfig {
  double tau = 1.0;
  Interval rate_bounds{-1000.0, -2e-16}; // for x, u
  Interval jump_bounds{1e-5, 100.0};     // for y, v
  int multistart_count = 100;
  OptimizerOptions optimizer{};
  std::uint64_t seed = 0;

  void validate() const;
  // Box searched by the moments-matching multistart (rates floored at the
  // stability limit).
  ParameterBox moments_box() const;
  // Box searched by likelihood maximization: same rates, jumps only
  // constrained by y <= -x, v <= -u.
  ParameterBox likelihood_box() const;
};

enum class Representation { Canonical, Redundant };

std::string_view to_string(Representation r);

using FittedModel = std::variant<CanonicalMap2, RedundantMap2>;

RateMatrixPair to_matrices(const FittedModel &m);

struct FitResult {
  Representation representation = Representation::Canonical;
  FittedModel model;
  Form form_selected = Form::One;
  LogLikelihood loglik;
  FittedModel start_model;
  LogLikelihood start_loglik;
  MomentSummary moments;
  int iterations = 0;
  bool converged = false;
  // "x:lower" style tags for parameters sitting on a box edge, evaluated in
  // the standardized units the optimizer works in.
  std::vector<std::string> start_bounds_active;
  std::vector<std::string> bounds_active;

  RateMatrixPair matrices() const { return to_matrices(model); }
};

struct FormFits {
  FitResult form_one;
  FitResult form_two;
  Form selected = Form::One;
  const FitResult &best() const {
    return selected == Form::One ? form_one : form_two;
  }
};

// (rho1 - target.rho1)^2 + tau * sum_i ((mu_i - target.mu_i) / target.mu_i)^2
double delta_tau(const RateMatrixPair &m, const MomentSummary &target, double tau);
double delta_tau(const CanonicalMap2 &params, const MomentSummary &target,
                 double tau);

// Sample moments used as the matching target; a constant sample gets
// rho1 = 0 instead of an error.
MomentSummary matching_target(std::span<const double> times);

// Best of config.multistart_count local minimizations of delta_tau from
// random starts in the moments box. Deterministic in config.seed.
CanonicalMap2 moments_match_start(const MomentSummary &target, Form form,
                                  const EstimationConfig &config);

// Likelihood maximization over one canonical form, run on t / std(t) and
// mapped back. Never returns a model worse than the start.
FitResult ml_fit_form(std::span<const double> times, Form form,
                      const CanonicalMap2 &start, const EstimationConfig &config);

// Moments matching on t / std(t) followed by ml_fit_form, in one form.
FitResult fit_form(std::span<const double> times, Form form,
                   const EstimationConfig &config);

// Moments matching + likelihood maximization in both forms.
FormFits fit_both_forms(std::span<const double> times,
                        const EstimationConfig &config);

// The better of the two forms; ties go to FormOne.
FitResult fit(std::span<const double> times, const EstimationConfig &config);

// Moments matching over the six redundant parameters.
RedundantMap2 moments_match_start_redundant(const MomentSummary &target,
                                            const EstimationConfig &config);

// Baseline fit over the six redundant parameters. Throws OptimizerFailure
// when the search does not converge or ends on a numerically degenerate
// model (D0 close to singular, embedded chain close to reducible).
FitResult ml_fit_redundant(std::span<const double> times,
                           const EstimationConfig &config);

} // namespace map2fit

#endif
