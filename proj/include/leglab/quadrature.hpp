#pragma once

#include <functional>

#include <Eigen/Dense>

#include "leglab/paths.hpp"

namespace leglab {

struct QuadResult {
  Complex value{};
  double error = 0.0;  // absolute error estimate
};

struct QuadVecResult {
  Eigen::VectorXcd value;
  double error = 0.0;  // max-norm absolute error estimate
};

inline constexpr int kMaxQuadraturePanels = 1 << 14;

using ScalarIntegrand = std::function<Complex(Complex)>;
/// Writes integrand values (before multiplication by d zeta) into `out`.
using VectorIntegrand = std::function<void(Complex, Eigen::Ref<Eigen::VectorXcd> out)>;

/// Adaptive Gauss-Kronrod (7/15) integration of f(zeta) d zeta along the arc.
/// Throws QuadratureNotConverged if `tol` is not met within kMaxQuadraturePanels.
QuadResult integrate_path(const Arc& arc, const ScalarIntegrand& f, double tol);
QuadVecResult integrate_path(const Arc& arc, const VectorIntegrand& f, int dim, double tol);

/// Same for a full circle traversed with the cycle's orientation.
QuadResult integrate_cycle(const Cycle& cycle, const ScalarIntegrand& f, double tol);
QuadVecResult integrate_cycle(const Cycle& cycle, const VectorIntegrand& f, int dim, double tol);

}  // namespace leglab
