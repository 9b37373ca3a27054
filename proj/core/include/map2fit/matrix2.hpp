#ifndef MAP2FIT_MATRIX2_HPP
#define MAP2FIT_MATRIX2_HPP

// Closed-form 2x2 real linear algebra. Every matrix that shows up in a
// two-state arrival process (D0, D1, their sum, the embedded chain) has a
// real spectrum, so eigen-based formulas are used throughout instead of
// general-purpose routines.

#include <iosfwd>

namespace map2fit {

struct Vector2 {
  double v1 = 0.0;
  double v2 = 0.0;

  Vector2() = default;
  Vector2(double first, double second); // throws InvalidModel on NaN/Inf

  double sum() const { return v1 + v2; }
  double operator[](int i) const { return i == 0 ? v1 : v2; }
};

struct Matrix2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  Matrix2() = default;
  Matrix2(double m11, double m12, double m21, double m22); // throws on NaN/Inf

  static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Matrix2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

  double operator()(int i, int j) const;

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  // Max absolute row sum.
  double norm_inf() const;
  Vector2 row_sums() const { return {a11 + a12, a21 + a22}; }
  bool is_upper_triangular() const { return a21 == 0.0; }
  bool is_lower_triangular() const { return a12 == 0.0; }
};

Matrix2 operator+(const Matrix2 &a, const Matrix2 &b);
Matrix2 operator-(const Matrix2 &a, const Matrix2 &b);
Matrix2 operator-(const Matrix2 &a);
Matrix2 operator*(const Matrix2 &a, const Matrix2 &b);
Matrix2 operator*(double s, const Matrix2 &a);
// Row vector times matrix.
Vector2 operator*(const Vector2 &w, const Matrix2 &a);
// Matrix times column vector.
Vector2 operator*(const Matrix2 &a, const Vector2 &w);
double dot(const Vector2 &a, const Vector2 &b);

bool operator==(const Matrix2 &a, const Matrix2 &b);
std::ostream &operator<<(std::ostream &os, const Matrix2 &m);
std::ostream &operator<<(std::ostream &os, const Vector2 &v);

// Throws SingularMatrix when |det| < 1e-300 * max(1, |m|_inf^2).
Matrix2 invert(const Matrix2 &m);

// Solves m * z = b for a column vector z.
Vector2 solve(const Matrix2 &m, const Vector2 &b);

struct Eigenvalues {
  double larger;
  double smaller;
};

// Real eigenvalues sorted descending. Triangular matrices return their
// diagonal exactly. Throws ComplexSpectrum when the discriminant is
// meaningfully negative; tiny negative discriminants are clamped to zero.
Eigenvalues eigenvalues(const Matrix2 &m);

// exp(m t) for t >= 0 by the eigen closed form
//   exp(m t) = e^{l2 t} I + g(t) (m - l2 I),  g = (e^{l1 t} - e^{l2 t}) / (l1 - l2),
// switching to the Jordan limit e^{l t}(I + t(m - l I)) when the two
// eigenvalues coincide to within 1e-9 * max(1, |l1|).
Matrix2 expm(const Matrix2 &m, double t);

// exp(m t) = exp(log_scale) * factor, with log_scale = l1 * t taken from the
// dominant eigenvalue. The factor stays O(1 + t |m|) even when exp(m t)
// itself underflows, which is what the likelihood recursion relies on.
struct ScaledMatrix {
  Matrix2 factor;
  double log_scale;
};
ScaledMatrix expm_scaled(const Matrix2 &m, double t);

// Eigen data of m computed once, for evaluating exp(m t) at many t.
class ExpmKernel {
public:
  explicit ExpmKernel(const Matrix2 &m);
  ScaledMatrix at(double t) const;

private:
  double leading_;  // l1, or the mean eigenvalue in the Jordan case
  double gap_;      // l1 - l2, zero in the Jordan case
  Matrix2 shifted_; // m - l2 I, or m - l I in the Jordan case
};

struct StationaryRow {
  Vector2 probabilities;
  // Set only for the exact 2x2 identity, where every distribution is
  // stationary and (0.5, 0.5) is returned by convention.
  bool degenerate = false;
};

// Stationary row vector of a 2x2 stochastic matrix: w1 = p21 / (p12 + p21).
// Throws InvalidModel if p is not stochastic and ReducibleChain if
// p12 + p21 vanishes for anything other than the identity.
StationaryRow stationary_row(const Matrix2 &p);

} // namespace map2fit

#endif
