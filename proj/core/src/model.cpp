#include "map2fit/model.hpp"

#include "map2fit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace map2fit {

namespace {

constexpr double generator_row_tolerance = 1e-9;
constexpr double chain_clamp_tolerance = 1e-12;
constexpr double variance_tolerance = 1e-12;
constexpr double canonical_match_tolerance = 1e-6;

bool finite(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

[[noreturn]] void invalid(const std::string &what) {
  throw Error(ErrorCode::InvalidModel, what);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i)
    f *= i;
  return f;
}

} // namespace

std::string_view to_string(Form form) { return form == Form::One ? "one" : "two"; }

std::optional<Form> parse_form(std::string_view text) {
  if (text == "one" || text == "1" || text == "FormOne")
    return Form::One;
  if (text == "two" || text == "2" || text == "FormTwo")
    return Form::Two;
  return std::nullopt;
}

void RateMatrixPair::validate() const {
  std::ostringstream msg;
  if (!(d0.a11 < 0.0 && d0.a22 < 0.0)) {
    msg << "D0 diagonal must be negative: " << d0;
    invalid(msg.str());
  }
  if (d0.a12 < 0.0 || d0.a21 < 0.0) {
    msg << "D0 off-diagonal must be nonnegative: " << d0;
    invalid(msg.str());
  }
  if (d1.a11 < 0.0 || d1.a12 < 0.0 || d1.a21 < 0.0 || d1.a22 < 0.0) {
    msg << "D1 must be nonnegative: " << d1;
    invalid(msg.str());
  }
  const Vector2 rows = generator().row_sums();
  if (std::abs(rows.v1) > generator_row_tolerance * std::max(1.0, -d0.a11) ||
      std::abs(rows.v2) > generator_row_tolerance * std::max(1.0, -d0.a22)) {
    msg << "rows of D0 + D1 must sum to zero, got " << rows;
    invalid(msg.str());
  }
  // Throws SingularMatrix for an unstable D0.
  (void)invert(d0);
}

void CanonicalMap2::validate() const {
  std::ostringstream msg;
  if (!finite({x, y, u, v})) {
    msg << "non-finite canonical parameter";
    invalid(msg.str());
  }
  if (x > -stability_floor || u > -stability_floor) {
    msg << "x and u must be <= " << -stability_floor << ", got x=" << x
        << " u=" << u;
    invalid(msg.str());
  }
  if (y < 0.0 || v < 0.0) {
    msg << "y and v must be nonnegative, got y=" << y << " v=" << v;
    invalid(msg.str());
  }
  if (x + y > 0.0 || u + v > 0.0) {
    msg << "need x + y <= 0 and u + v <= 0, got " << x + y << " and " << u + v;
    invalid(msg.str());
  }
}

void RedundantMap2::validate() const {
  std::ostringstream msg;
  if (!finite({lambda1, lambda2, p120, p111, p210, p211})) {
    msg << "non-finite redundant parameter";
    invalid(msg.str());
  }
  if (!(lambda1 > 0.0 && lambda2 > 0.0)) {
    msg << "rates must be positive, got " << lambda1 << ", " << lambda2;
    invalid(msg.str());
  }
  for (double p : {p120, p111, p210, p211}) {
    if (p < 0.0 || p > 1.0) {
      msg << "probability " << p << " outside [0, 1]";
      invalid(msg.str());
    }
  }
  if (p120 + p111 > 1.0 || p210 + p211 > 1.0) {
    msg << "row probabilities exceed one: " << p120 + p111 << ", "
        << p210 + p211;
    invalid(msg.str());
  }
}

bool MomentSummary::valid() const {
  return finite({mu1, mu2, mu3, rho1}) && mu1 > 0.0 && mu2 > mu1 * mu1 &&
         mu3 > 0.0 && std::abs(rho1) < 1.0;
}

RateMatrixPair canonical_to_matrices(const CanonicalMap2 &m) {
  m.validate();
  const Matrix2 d0{m.x, m.y, 0.0, m.u};
  const double out1 = -m.x - m.y;
  const double out2 = -m.u - m.v;
  const Matrix2 d1 = m.form == Form::One ? Matrix2{out1, 0.0, m.v, out2}
                                         : Matrix2{0.0, out1, out2, m.v};
  RateMatrixPair pair{d0, d1};
  pair.validate();
  return pair;
}

RateMatrixPair redundant_to_matrices(const RedundantMap2 &m) {
  m.validate();
  const double l1 = m.lambda1;
  const double l2 = m.lambda2;
  const Matrix2 d0{-l1, l1 * m.p120, l2 * m.p210, -l2};
  const Matrix2 d1{l1 * m.p111, l1 * std::max(0.0, 1.0 - m.p120 - m.p111),
                   l2 * m.p211, l2 * std::max(0.0, 1.0 - m.p210 - m.p211)};
  RateMatrixPair pair{d0, d1};
  pair.validate();
  return pair;
}

CanonicalMap2 read_canonical(const RateMatrixPair &m, Form form) {
  CanonicalMap2 c{form, m.d0.a11, m.d0.a12, m.d0.a22,
                  form == Form::One ? m.d1.a21 : m.d1.a22};
  c.validate();
  return c;
}

RedundantMap2 matrices_to_redundant(const RateMatrixPair &m) {
  m.validate();
  const double l1 = -m.d0.a11;
  const double l2 = -m.d0.a22;
  RedundantMap2 r{l1,
                  l2,
                  std::clamp(m.d0.a12 / l1, 0.0, 1.0),
                  std::clamp(m.d1.a11 / l1, 0.0, 1.0),
                  std::clamp(m.d0.a21 / l2, 0.0, 1.0),
                  std::clamp(m.d1.a21 / l2, 0.0, 1.0)};
  // Roundoff can push a row total a hair above one.
  if (r.p120 + r.p111 > 1.0)
    r.p111 = 1.0 - r.p120;
  if (r.p210 + r.p211 > 1.0)
    r.p211 = 1.0 - r.p210;
  return r;
}

namespace {

// Canonical model with -x = fast, -u = slow, (x + y) / x = a, (u + v) / u = b.
CanonicalMap2 canonical_from_shape(Form form, double fast, double slow,
                                   double a, double b) {
  return {form, -fast, (1.0 - a) * fast, -slow, (1.0 - b) * slow};
}

struct ShapeSegment {
  // Returns (a, b) at s in [0, 1].
  double g;
  int kind; // 0: a * b = g, 1: a = 0, 2: b = 0
  std::pair<double, double> at(double s) const {
    switch (kind) {
    case 1: return {0.0, s};
    case 2: return {s, 0.0};
    default: {
      const double a = std::exp((1.0 - s) * std::log(g));
      return {a, std::min(1.0, g / a)};
    }
    }
  }
};

double relative_gap(double value, double target) {
  return std::abs(value - target) / std::max(std::abs(target), 1e-300);
}

} // namespace

CanonicalMap2 matrices_to_canonical(const RateMatrixPair &m) {
  m.validate();
  const Form form = classify_form(m);
  const double g = std::clamp(std::abs(gamma(m)), 0.0, 1.0);
  const auto [l1, l2] = eigenvalues(m.d0);
  const double target[3] = {moment(m, 1), moment(m, 2), moment(m, 3)};

  std::vector<ShapeSegment> segments;
  if (g > 0.0)
    segments.push_back({g, 0});
  else
    segments.insert(segments.end(), {{0.0, 1}, {0.0, 2}});

  std::optional<CanonicalMap2> best;
  double best_score = std::numeric_limits<double>::infinity();
  const std::pair<double, double> assignments[] = {{-l2, -l1}, {-l1, -l2}};

  for (const auto &[fast, slow] : assignments) {
    if (!(slow >= stability_floor))
      continue;
    for (const ShapeSegment &seg : segments) {
      auto model_at = [&](double s) {
        const auto [a, b] = seg.at(s);
        return canonical_from_shape(form, fast, slow, a, b);
      };
      auto mismatch = [&](double s) {
        return moment(canonical_to_matrices(model_at(s)), 1) - target[0];
      };
      auto consider = [&](double s) {
        const CanonicalMap2 c = model_at(s);
        const RateMatrixPair p = canonical_to_matrices(c);
        const double score =
            std::max({relative_gap(moment(p, 1), target[0]),
                      relative_gap(moment(p, 2), target[1]),
                      relative_gap(moment(p, 3), target[2])});
        // Both phase orderings can reproduce the process; prefer x <= u.
        const bool ordered = c.x <= c.u;
        const bool best_ordered = best && best->x <= best->u;
        const bool both_match = score <= canonical_match_tolerance &&
                                best_score <= canonical_match_tolerance;
        if (both_match ? (ordered && !best_ordered) ||
                             (ordered == best_ordered && score < best_score)
                       : score < best_score) {
          best_score = score;
          best = c;
        }
      };

      constexpr int grid = 400;
      double prev_s = 0.0;
      double prev = mismatch(prev_s);
      if (prev == 0.0)
        consider(prev_s);
      for (int i = 1; i <= grid; ++i) {
        const double s = static_cast<double>(i) / grid;
        const double cur = mismatch(s);
        if (cur == 0.0) {
          consider(s);
        } else if ((prev < 0.0) != (cur < 0.0) && prev != 0.0) {
          double lo = prev_s, hi = s, flo = prev;
          for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
              break;
            const double fm = mismatch(mid);
            if ((fm < 0.0) == (flo < 0.0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
          consider(0.5 * (lo + hi));
        }
        prev_s = s;
        prev = cur;
      }
    }
  }
  if (!best || best_score > canonical_match_tolerance) {
    std::ostringstream msg;
    msg << "no canonical representation reproduces the moments (best relative "
           "gap "
        << best_score << ")";
    invalid(msg.str());
  }
  return *best;
}

Matrix2 embedded_chain(const RateMatrixPair &m) {
  const Matrix2 p = invert(-m.d0) * m.d1;
  double e[2][2] = {{p.a11, p.a12}, {p.a21, p.a22}};
  for (auto &row : e) {
    for (double &x : row) {
      if (x < -chain_clamp_tolerance) {
        std::ostringstream msg;
        msg << "embedded chain has negative entry " << x;
        invalid(msg.str());
      }
      x = std::max(x, 0.0);
    }
    const double total = row[0] + row[1];
    if (!(total > 0.0))
      invalid("embedded chain row vanishes");
    row[0] /= total;
    row[1] /= total;
  }
  return {e[0][0], e[0][1], e[1][0], e[1][1]};
}

Vector2 stationary_phi(const RateMatrixPair &m) {
  return stationary_row(embedded_chain(m)).probabilities;
}

Vector2 stationary_pi(const RateMatrixPair &m) {
  const Matrix2 d = m.generator();
  const double up = std::max(d.a12, 0.0);
  const double down = std::max(d.a21, 0.0);
  const double flow = up + down;
  if (!(flow > 1e-15 * std::max(m.d0.norm_inf(), 1e-300))) {
    std::ostringstream msg;
    msg << "generator " << d << " does not connect the two states";
    throw Error(ErrorCode::ReducibleChain, msg.str());
  }
  return {down / flow, up / flow};
}

double moment(const RateMatrixPair &m, int n) {
  if (n < 1)
    invalid("moment order must be positive");
  const Matrix2 mean_sojourn = invert(-m.d0);
  Vector2 r{1.0, 1.0};
  for (int k = 0; k < n; ++k)
    r = mean_sojourn * r;
  return factorial(n) * dot(stationary_phi(m), r);
}

double gamma(const RateMatrixPair &m) { return embedded_chain(m).trace() - 1.0; }

double autocorrelation(const RateMatrixPair &m, int k) {
  if (k < 1)
    invalid("autocorrelation lag must be positive");
  const double mu1 = moment(m, 1);
  const double mu2 = moment(m, 2);
  const double var = mu2 - mu1 * mu1;
  if (!(var > variance_tolerance * mu1 * mu1))
    throw Error(ErrorCode::DegenerateVariance, "interarrival variance vanishes");
  return std::pow(gamma(m), k) * (0.5 * mu2 - mu1 * mu1) / var;
}

MomentSummary theoretical_moments(const RateMatrixPair &m) {
  return {moment(m, 1), moment(m, 2), moment(m, 3), autocorrelation(m, 1)};
}

Form classify_form(const RateMatrixPair &m) {
  return gamma(m) > 0.0 ? Form::One : Form::Two;
}

void validate_sample(std::span<const double> times, std::size_t min_length) {
  if (times.size() < min_length) {
    std::ostringstream msg;
    msg << "need at least " << min_length << " interarrival times, got "
        << times.size();
    throw Error(ErrorCode::EmptySample, msg.str());
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i])) {
      std::ostringstream msg;
      msg << "interarrival time #" << i + 1 << " is " << times[i];
      throw Error(ErrorCode::NonpositiveEntry, msg.str());
    }
  }
}

std::array<double, 3> raw_sample_moments(std::span<const double> times) {
  validate_sample(times);
  std::array<double, 3> sums{};
  for (double t : times) {
    sums[0] += t;
    sums[1] += t * t;
    sums[2] += t * t * t;
  }
  const double n = static_cast<double>(times.size());
  return {sums[0] / n, sums[1] / n, sums[2] / n};
}

std::optional<double> sample_autocorrelation(std::span<const double> times,
                                             int lag) {
  if (lag < 1 || times.size() <= static_cast<std::size_t>(lag))
    return std::nullopt;
  const double mean =
      std::accumulate(times.begin(), times.end(), 0.0) / times.size();
  double spread = 0.0;
  for (double t : times)
    spread += (t - mean) * (t - mean);
  if (!(spread > 0.0))
    return std::nullopt;
  double cross = 0.0;
  for (std::size_t i = 0; i + lag < times.size(); ++i)
    cross += (times[i] - mean) * (times[i + lag] - mean);
  return cross / spread;
}

MomentSummary empirical_moments(std::span<const double> times) {
  validate_sample(times, 2);
  const auto raw = raw_sample_moments(times);
  const auto rho = sample_autocorrelation(times, 1);
  if (!rho)
    throw Error(ErrorCode::DegenerateVariance, "sample has zero variance");
  return {raw[0], raw[1], raw[2], *rho};
}

} // namespace map2fit
