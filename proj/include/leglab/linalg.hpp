#pragma once

#include <vector>

#include <Eigen/Dense>

#include "leglab/laurent.hpp"

namespace leglab {

/// Scaled Laurent basis: ((z)/s)^k for k = 0..poly_degree and (r_i/(z - c_i))^k for
/// k = 1..pole_degree[i].
struct LaurentBasis {
  double scale = 1.0;
  int poly_degree = 0;
  std::vector<Complex> centers;
  std::vector<double> pole_scale;
  std::vector<int> pole_degree;

  /// Scales chosen so every basis element is at most 1 in modulus on `points`.
  static LaurentBasis fitted(const std::vector<Complex>& points, int poly_degree, const std::vector<Complex>& centers,
                             const std::vector<int>& pole_degree);

  int size() const;
  /// Derivatives of order `order` of all basis elements at z.
  Eigen::RowVectorXcd row(Complex z, int order = 0) const;
  LaurentPoly to_laurent(const Eigen::VectorXcd& coeffs) const;
};

struct ConstrainedLSResult {
  Eigen::VectorXcd x;
  double constraint_residual = 0.0;  // max |C x - d| (unscaled rows)
  double fit_residual = 0.0;         // max |A x - b|
  double condition = 0.0;            // of the reduced least-squares matrix
};

/// Minimises |A x - b|^2 + lambda |x|^2 subject to C x = d exactly. Constraints are
/// eliminated through the SVD null space of C. Throws BasisTooSmall when C has more
/// rows than columns and InfeasibleConstraints when C is rank deficient.
ConstrainedLSResult constrained_lstsq(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::MatrixXcd& C,
                                      const Eigen::VectorXcd& d, double lambda = 0.0);

}  // namespace leglab
