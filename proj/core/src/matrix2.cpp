#include "map2fit/matrix2.hpp"

#include "map2fit/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace map2fit {

namespace {

constexpr double singular_tolerance = 1e-300;
constexpr double coincident_tolerance = 1e-9;
constexpr double discriminant_tolerance = 1e-12;
constexpr double stochastic_row_tolerance = 1e-9;
constexpr double stochastic_entry_tolerance = 1e-12;
constexpr double reducible_tolerance = 1e-15;

} // namespace

Vector2::Vector2(double first, double second) : v1(first), v2(second) {
  if (!std::isfinite(first) || !std::isfinite(second))
    throw Error(ErrorCode::InvalidModel, "non-finite vector entry");
}

Matrix2::Matrix2(double m11, double m12, double m21, double m22)
    : a11(m11), a12(m12), a21(m21), a22(m22) {
  if (!std::isfinite(m11) || !std::isfinite(m12) || !std::isfinite(m21) ||
      !std::isfinite(m22))
    throw Error(ErrorCode::InvalidModel, "non-finite matrix entry");
}

double Matrix2::operator()(int i, int j) const {
  if (i == 0)
    return j == 0 ? a11 : a12;
  return j == 0 ? a21 : a22;
}

double Matrix2::norm_inf() const {
  return std::max(std::abs(a11) + std::abs(a12), std::abs(a21) + std::abs(a22));
}

Matrix2 operator+(const Matrix2 &a, const Matrix2 &b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}

Matrix2 operator-(const Matrix2 &a, const Matrix2 &b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

Matrix2 operator-(const Matrix2 &a) { return {-a.a11, -a.a12, -a.a21, -a.a22}; }

Matrix2 operator*(const Matrix2 &a, const Matrix2 &b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

Matrix2 operator*(double s, const Matrix2 &a) {
  return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

Vector2 operator*(const Vector2 &w, const Matrix2 &a) {
  return {w.v1 * a.a11 + w.v2 * a.a21, w.v1 * a.a12 + w.v2 * a.a22};
}

Vector2 operator*(const Matrix2 &a, const Vector2 &w) {
  return {a.a11 * w.v1 + a.a12 * w.v2, a.a21 * w.v1 + a.a22 * w.v2};
}

double dot(const Vector2 &a, const Vector2 &b) { return a.v1 * b.v1 + a.v2 * b.v2; }

bool operator==(const Matrix2 &a, const Matrix2 &b) {
  return a.a11 == b.a11 && a.a12 == b.a12 && a.a21 == b.a21 && a.a22 == b.a22;
}

std::ostream &operator<<(std::ostream &os, const Matrix2 &m) {
  return os << "[[" << m.a11 << ", " << m.a12 << "], [" << m.a21 << ", "
            << m.a22 << "]]";
}

std::ostream &operator<<(std::ostream &os, const Vector2 &v) {
  return os << "(" << v.v1 << ", " << v.v2 << ")";
}

Matrix2 invert(const Matrix2 &m) {
  const double det = m.det();
  const double scale = std::max(1.0, m.norm_inf() * m.norm_inf());
  if (!(std::abs(det) >= singular_tolerance * scale)) {
    std::ostringstream msg;
    msg << "determinant " << det << " of " << m;
    throw Error(ErrorCode::SingularMatrix, msg.str());
  }
  return {m.a22 / det, -m.a12 / det, -m.a21 / det, m.a11 / det};
}

Vector2 solve(const Matrix2 &m, const Vector2 &b) { return invert(m) * b; }

Eigenvalues eigenvalues(const Matrix2 &m) {
  if (m.is_upper_triangular() || m.is_lower_triangular())
    return {std::max(m.a11, m.a22), std::min(m.a11, m.a22)};

  const double half_gap = 0.5 * (m.a11 - m.a22);
  double disc = half_gap * half_gap + m.a12 * m.a21;
  const double norm = m.norm_inf();
  if (disc < 0.0) {
    if (disc < -discriminant_tolerance * norm * norm) {
      std::ostringstream msg;
      msg << "discriminant " << disc << " of " << m;
      throw Error(ErrorCode::ComplexSpectrum, msg.str());
    }
    disc = 0.0;
  }
  const double mean = 0.5 * m.trace();
  const double root = std::sqrt(disc);
  // Take the root that adds magnitudes, recover the other from the
  // determinant so a near-zero eigenvalue keeps its relative precision.
  double larger, smaller;
  if (mean >= 0.0) {
    larger = mean + root;
    smaller = larger != 0.0 ? m.det() / larger : mean - root;
  } else {
    smaller = mean - root;
    larger = m.det() / smaller;
  }
  if (larger < smaller)
    std::swap(larger, smaller);
  return {larger, smaller};
}

ExpmKernel::ExpmKernel(const Matrix2 &m) {
  const auto [l1, l2] = eigenvalues(m);
  if (l1 - l2 < coincident_tolerance * std::max(1.0, std::abs(l1))) {
    leading_ = 0.5 * (l1 + l2);
    gap_ = 0.0;
  } else {
    leading_ = l1;
    gap_ = l1 - l2;
  }
  const double base = gap_ == 0.0 ? leading_ : l2;
  shifted_ = m - Matrix2::diagonal(base, base);
}

ScaledMatrix ExpmKernel::at(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidModel, "matrix exponential needs finite t >= 0");
  if (gap_ == 0.0)
    return {Matrix2::identity() + t * shifted_, leading_ * t};
  // exp(m t) e^{-l1 t} = e^{-gap t} I + (1 - e^{-gap t}) / gap (m - l2 I)
  const double decay = std::exp(-gap_ * t);
  const double weight = -std::expm1(-gap_ * t) / gap_;
  return {Matrix2::diagonal(decay, decay) + weight * shifted_, leading_ * t};
}

ScaledMatrix expm_scaled(const Matrix2 &m, double t) { return ExpmKernel(m).at(t); }

Matrix2 expm(const Matrix2 &m, double t) {
  const ScaledMatrix s = expm_scaled(m, t);
  return std::exp(s.log_scale) * s.factor;
}

StationaryRow stationary_row(const Matrix2 &p) {
  const double entries[] = {p.a11, p.a12, p.a21, p.a22};
  for (double e : entries) {
    if (e < -stochastic_entry_tolerance) {
      std::ostringstream msg;
      msg << "negative entry in stochastic matrix " << p;
      throw Error(ErrorCode::InvalidModel, msg.str());
    }
  }
  const Vector2 rows = p.row_sums();
  if (std::abs(rows.v1 - 1.0) > stochastic_row_tolerance ||
      std::abs(rows.v2 - 1.0) > stochastic_row_tolerance) {
    std::ostringstream msg;
    msg << "rows of " << p << " do not sum to one";
    throw Error(ErrorCode::InvalidModel, msg.str());
  }
  const double p12 = std::max(p.a12, 0.0);
  const double p21 = std::max(p.a21, 0.0);
  const double flow = p12 + p21;
  if (flow <= reducible_tolerance) {
    if (p == Matrix2::identity())
      return {{0.5, 0.5}, true};
    std::ostringstream msg;
    msg << "no communication between states in " << p;
    throw Error(ErrorCode::ReducibleChain, msg.str());
  }
  const double w1 = p21 / flow;
  return {{w1, p12 / flow}, false};
}

} // namespace map2fit
