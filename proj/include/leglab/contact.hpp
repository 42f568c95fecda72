#pragma once

#include <string>
#include <vector>

#include "leglab/geometry.hpp"
#include "leglab/laurent.hpp"

namespace leglab {

/// Thresholds on the largest residual coefficient.
inline constexpr double kAcceptResidual = 1e-9;
inline constexpr double kConstructResidual = 1e-12;

/// dz + sum coef * u_a du_b with u = (x_1..x_n, y_1..y_n). The standard form has the
/// terms x_i dy_i; images under c1/c2 carry permuted or sign-changed terms.
struct ContactForm {
  struct Term {
    double coef;
    int a, b;
    bool operator==(const Term&) const = default;
  };

  int n = 1;
  std::vector<Term> terms;

  static ContactForm standard(int n);
  bool is_standard() const { return *this == standard(n); }
  bool operator==(const ContactForm&) const = default;
};

struct LegendrianCurve {
  int n = 1;
  std::vector<LaurentPoly> x, y;
  LaurentPoly z;
  CircularDomain domain = CircularDomain::plane();
  ContactForm form = ContactForm::standard(1);

  /// Component k in the order x_1..x_n, y_1..y_n, z.
  const LaurentPoly& component(int k) const;
  LaurentPoly& component(int k);
  int dimension() const { return 2 * n + 1; }

  std::vector<Complex> operator()(Complex zeta) const;
  std::vector<Complex> derivative(Complex zeta) const;
  /// All components re-expressed over the domain's pole centers.
  void align_centers();
};

/// z determined by integration: z = z0 - (Phi - Phi(p0)) with dPhi = sum x_i dy_i.
/// Throws NonexactForm when some period of sum x_i dy_i does not vanish.
LegendrianCurve make_legendrian(std::vector<LaurentPoly> x, std::vector<LaurentPoly> y, Complex p0, Complex z0,
                                const CircularDomain& domain);

/// The coefficient of the pulled-back form (dz + ...)(f').
LaurentPoly legendrian_residual(const LegendrianCurve& c);

struct LegendrianReport {
  double max_residual_coeff = 0.0;
  bool pass = false;
};
LegendrianReport verify_legendrian(const LegendrianCurve& c);

struct ContactIso {
  enum class Kind { C1, C2 };
  Kind kind = Kind::C2;
  int j = 2;  // for C1: swaps y_1 and y_j
  int n = 1;
};

/// Image curve together with the pushed-forward contact form.
LegendrianCurve apply_iso(const ContactIso& iso, const LegendrianCurve& c);

/// Derivative values at p up to order m.
struct JetSpec {
  Complex p{};
  int m = 0;
  std::vector<std::vector<Complex>> x, y;  // n rows of m+1 values
  std::vector<Complex> z;                  // m+1 values

  int n() const { return static_cast<int>(x.size()); }
  /// Largest violation of z^(k) = -(sum x_i y_i')^(k-1), 1 <= k <= m.
  double compatibility_defect() const;
  bool compatible(double tol = 1e-10) const { return compatibility_defect() <= tol; }
  /// Values f(p) in C^{2n+1}.
  std::vector<Complex> value() const;
  /// First derivatives f'(p) (empty when m = 0).
  std::vector<Complex> first_derivative() const;
};

JetSpec jet_of_curve(const LegendrianCurve& c, Complex p, int m);
/// Throws MismatchedJets when p, m or n differ.
double jet_distance(const JetSpec& a, const JetSpec& b);
double max_norm(const std::vector<Complex>& point);

}  // namespace leglab
