#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "leglab/geometry.hpp"
#include "leglab/laurent.hpp"
#include "leglab/linalg.hpp"

namespace leglab {

/// f^(k)(p) = values[k] for k = 0..m.
struct JetConstraint {
  Complex p{};
  int m = 0;
  std::vector<Complex> values;
};

struct BasisSpec {
  int max_poly_degree = 16;
  std::vector<Complex> centers;
  std::vector<int> max_pole_degree;  // one entry per center
};

struct Approximation {
  LaurentPoly f;
  double sup_error = 0.0;            // max over samples of |f - v|
  double constraint_residual = 0.0;  // max jet violation measured with jet_at
  double condition = 0.0;
};

/// Least-squares fit over the Laurent basis with exact jet equality constraints.
/// Throws BasisTooSmall or InfeasibleConstraints.
Approximation mergelyan_jets(const std::vector<Complex>& points, const std::vector<Complex>& values,
                             const std::vector<JetConstraint>& jets, const BasisSpec& basis, double lambda = 0.0);

/// Same, growing the basis (polynomial degree doubling from `start_degree`, pole
/// degrees +1) until the sup sample error is at most `tol` or `max_degree` is reached.
Approximation fit_escalating(const std::vector<Complex>& points, const std::vector<Complex>& values,
                             const std::vector<JetConstraint>& jets, const std::vector<Complex>& centers, double tol,
                             int start_degree = 8, int max_degree = 64);

/// f itself when some non-constant coefficient exceeds 1e-10; otherwise f plus a small
/// multiple of z (times a factor vanishing to order m+1 at each protected point).
LaurentPoly make_nonconstant(const LaurentPoly& f, const std::vector<Complex>& samples,
                             const std::vector<std::pair<Complex, int>>& protect = {});

struct CriticalPoint {
  Complex p{};
  int multiplicity = 1;
};

/// Zeros of f' in k. Throws ConstantDerivative.
std::vector<CriticalPoint> zeros_of_derivative(const LaurentPoly& f, const CompactSet& k);

/// Minimal-degree polynomial eta with eta^(j)(p) = 0 for j <= order at each jetKill
/// point and eta'(p) = 1 (flag true) or 0 (flag false) at immersion points.
/// Throws InfeasibleConstraints.
LaurentPoly build_eta(const std::vector<std::pair<Complex, bool>>& imm_points,
                      const std::vector<std::pair<Complex, int>>& jet_kill);

struct ImmersionFix {
  LaurentPoly x1;
  double delta = 0.0;
  double min_derivative = 0.0;  // min over the check grid of max(|x1'|, |y1'|)
};

/// x1 + delta * eta removing common critical points of (x1, y1) in k. Throws NoValidDelta.
ImmersionFix immersion_fix(const LaurentPoly& x1, const LaurentPoly& y1, const CompactSet& k,
                           const std::vector<std::pair<Complex, int>>& protect,
                           double budget = std::numeric_limits<double>::infinity(), int grid = 200);

/// w = A ((z - c)/r_out)^N, small on the inner disk and large on the outer circle.
/// Throws NoSeparation when r_out/r_in < 1.01.
LaurentPoly boundary_bump(const CompactSet& inner, const CompactSet& outer, double small_tol, double large_target);

/// min over pts of max_k |component_k'|.
double min_max_derivative(const std::vector<LaurentPoly>& components, const std::vector<Complex>& pts);

}  // namespace leglab
