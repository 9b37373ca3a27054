#ifndef MAP2FIT_MODEL_HPP
#define MAP2FIT_MODEL_HPP

// Two-state Markovian arrival process representations and their stationary
// analysis: embedded chain at arrivals, interarrival moments, lag
// autocorrelation.

#include "map2fit/matrix2.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace map2fit {

// Floor on -x and -u keeping D0 strictly stable.
inline constexpr double stability_floor = 1e-12;

// FormOne covers gamma > 0, FormTwo covers gamma <= 0.
enum class Form { One, Two };

std::string_view to_string(Form form);
std::optional<Form> parse_form(std::string_view text);

struct RateMatrixPair {
  Matrix2 d0; // transitions without an arrival
  Matrix2 d1; // transitions with an arrival

  Matrix2 generator() const { return d0 + d1; }
  // Sign pattern, zero row sums of d0 + d1, and nonsingular d0. Throws
  // InvalidModel (structure) or SingularMatrix (d0).
  void validate() const;
};

// D0 = [[x, y], [0, u]] and
//   FormOne: D1 = [[-x-y, 0], [v, -u-v]]
//   FormTwo: D1 = [[0, -x-y], [-u-v, v]]
struct CanonicalMap2 {
  Form form = Form::One;
  double x = -1.0;
  double y = 0.0;
  double u = -1.0;
  double v = 0.0;

  void validate() const;
};

// Rates lambda_i of leaving state i; p_ij0 is the probability of a hidden
// jump i -> j, p_ij1 of an arrival landing in j.
struct RedundantMap2 {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double p120 = 0.0;
  double p111 = 1.0;
  double p210 = 0.0;
  double p211 = 0.0;

  void validate() const;
};

struct MomentSummary {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double rho1 = 0.0;

  bool valid() const;
};

RateMatrixPair canonical_to_matrices(const CanonicalMap2 &m);
RateMatrixPair redundant_to_matrices(const RedundantMap2 &m);

// Reads (x, y, u, v) back off the entries of a pair already in the given
// canonical form.
CanonicalMap2 read_canonical(const RateMatrixPair &m, Form form);

// Every valid pair has a redundant parameterization: lambda_i = -D0[i][i]
// and the p's are the rows of D0, D1 divided by lambda_i.
RedundantMap2 matrices_to_redundant(const RateMatrixPair &m);

// Canonical representation of an arbitrary pair, found through the
// similarity invariants: the eigenvalues of D0 fix {x, u}, the sign of gamma
// picks the form, and (y, v) are solved from gamma and mu1; the assignment
// of eigenvalues is chosen by the match on mu2 and mu3. Throws InvalidModel
// if no canonical parameters reproduce the first three moments to 1e-6.
CanonicalMap2 matrices_to_canonical(const RateMatrixPair &m);

// P* = (-D0)^{-1} D1, with roundoff negatives in [-1e-12, 0) clamped and
// the rows renormalized.
Matrix2 embedded_chain(const RateMatrixPair &m);

// Stationary law of the state at arrival epochs.
Vector2 stationary_phi(const RateMatrixPair &m);

// Stationary law of the continuous-time chain, pi D = 0.
Vector2 stationary_pi(const RateMatrixPair &m);

// n! phi (-D0)^{-n} e.
double moment(const RateMatrixPair &m, int n);

// Non-unit eigenvalue of P*, trace(P*) - 1.
double gamma(const RateMatrixPair &m);

// gamma^k (mu2 / 2 - mu1^2) / (mu2 - mu1^2).
double autocorrelation(const RateMatrixPair &m, int k);

MomentSummary theoretical_moments(const RateMatrixPair &m);

Form classify_form(const RateMatrixPair &m);

// Raw sample moments (1/n) sum t^i for i = 1, 2, 3.
std::array<double, 3> raw_sample_moments(std::span<const double> times);

// sum_{i} (t_i - m)(t_{i+lag} - m) / sum_i (t_i - m)^2, with the global
// sample mean m; nullopt when the sample has no spread.
std::optional<double> sample_autocorrelation(std::span<const double> times,
                                             int lag = 1);

// Throws EmptySample for fewer than two times, NonpositiveEntry for a
// nonpositive or non-finite time, DegenerateVariance for a constant sample.
MomentSummary empirical_moments(std::span<const double> times);

// Checks that every time is positive and finite and that there is at least
// min_length of them.
void validate_sample(std::span<const double> times, std::size_t min_length = 1);

} // namespace map2fit

#endif
