#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "leglab/paths.hpp"
#include "leglab/quadrature.hpp"

namespace leglab {

/// Centers closer than this are identified when merging pole-center lists.
inline constexpr double kCenterIdentify = 1e-12;
/// Coefficients below this modulus are not stored.
inline constexpr double kCoeffPrune = 1e-300;
/// Residues below this modulus count as zero when taking primitives.
inline constexpr double kResidueTol = 1e-10;
/// Partial-fraction re-expansion is refused above this coefficient growth.
inline constexpr double kReexpansionCap = 1e12;

/// A finite sum  sum_k a_k z^k + sum_i sum_k b_{i,k} (z - c_i)^{-k}  with poles only at
/// declared centers c_i. Immutable value type; all arithmetic returns new values.
///
/// Coefficients are held densely: poly_[k] is the coefficient of z^k and
/// poles_[i][k-1] the coefficient of (z - c_i)^{-k}.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly constant(Complex c, std::vector<Complex> centers = {});
  static LaurentPoly monomial(int k, Complex c = 1.0, std::vector<Complex> centers = {});
  /// c * (z - center)^{-order}; `center` becomes the only pole center.
  static LaurentPoly pole(Complex center, int order, Complex c = 1.0);
  static LaurentPoly from_dense(std::vector<Complex> centers, std::vector<Complex> poly,
                                std::vector<std::vector<Complex>> poles);
  /// Sparse construction matching the JSON layout (pole exponents are negative).
  static LaurentPoly from_terms(std::vector<Complex> centers, const std::map<int, Complex>& poly,
                                const std::map<std::pair<int, int>, Complex>& poles);

  const std::vector<Complex>& centers() const { return centers_; }
  const std::vector<Complex>& dense_poly() const { return poly_; }
  const std::vector<std::vector<Complex>>& dense_poles() const { return poles_; }

  /// exponent (>= 0) -> coefficient, nonzero entries only, ascending.
  std::map<int, Complex> poly_coeffs() const;
  /// (center index, exponent <= -1) -> coefficient, nonzero entries only, ascending.
  std::map<std::pair<int, int>, Complex> pole_coeffs() const;

  bool is_zero() const;
  /// True when every coefficient except the constant term vanishes.
  bool is_constant(double tol = 0.0) const;
  int degree() const { return static_cast<int>(poly_.size()) - 1; }
  int pole_order(std::size_t center) const;
  Complex coefficient(int k) const;
  Complex pole_coefficient(std::size_t center, int order) const;
  double max_abs_coeff() const;

  /// Same function expressed over a superset of its centers. Every own center must be
  /// present (within kCenterIdentify) in `centers`.
  LaurentPoly with_centers(const std::vector<Complex>& centers) const;

  Complex operator()(Complex z) const;

  LaurentPoly operator-() const;
  LaurentPoly scaled(Complex s) const;

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  void normalize();

  std::vector<Complex> centers_;
  std::vector<Complex> poly_;
  std::vector<std::vector<Complex>> poles_;
};

/// Holomorphic one-form coeff(z) dz.
struct OneForm {
  LaurentPoly coeff;
};

LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly sub(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly differentiate(const LaurentPoly& a);
LaurentPoly differentiate(const LaurentPoly& a, int times);

inline LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) { return add(a, b); }
inline LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return sub(a, b); }
inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) { return mul(a, b); }
inline LaurentPoly operator*(Complex s, const LaurentPoly& a) { return a.scaled(s); }

/// The form x dy as a one-form.
OneForm wedge_d(const LaurentPoly& x, const LaurentPoly& y);

/// Primitive with zero constant term. Throws NonexactForm if some residue exceeds
/// kResidueTol; residues below the tolerance are dropped.
LaurentPoly primitive(const OneForm& a);
Complex residue_at(const OneForm& a, std::size_t center);
/// 2 pi i * (enclosed residues) * orientation. Throws CycleThroughPole.
Complex contour_integral(const OneForm& a, const Cycle& cycle);
/// Adaptive quadrature along an arc; throws QuadratureNotConverged.
QuadResult arc_integral(const OneForm& a, const Arc& arc, double tol);

/// Closed-form arc integral: primitive of the residue-free part plus residue times the
/// continuously tracked logarithm along the arc. Throws CycleThroughPole when the arc
/// passes within 1e-9 of a center carrying a pole.
Complex exact_arc_integral(const OneForm& a, const Arc& arc);

/// Throws EvalAtPole when z is within 1e-12 of a center.
Complex evaluate(const LaurentPoly& a, Complex z);
/// [a(p), a'(p), ..., a^{(m)}(p)].
std::vector<Complex> jet_at(const LaurentPoly& a, Complex p, int m);

/// Index of `c` in `centers` (within kCenterIdentify) or -1.
int find_center(const std::vector<Complex>& centers, Complex c);
/// Union of center lists; order of `a` first.
std::vector<Complex> merge_centers(const std::vector<Complex>& a, const std::vector<Complex>& b);

}  // namespace leglab
