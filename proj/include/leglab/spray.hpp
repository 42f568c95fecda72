#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "leglab/contact.hpp"
#include "leglab/geometry.hpp"
#include "leglab/laurent.hpp"

namespace leglab {

/// Cycles C_i plus arcs E_p from the base point to each interpolation point p, with the
/// z values to be hit: z(p0) = base_z and z(p) = z_targets[k].
struct ExtendedPeriodMap {
  int n = 1;
  std::vector<Cycle> cycles;
  Complex base_point{};
  Complex base_z{};
  std::vector<Complex> points;
  std::vector<Arc> arcs;
  std::vector<Complex> z_targets;

  int s() const { return static_cast<int>(cycles.size()); }
  int lambda() const { return static_cast<int>(points.size()); }
};

/// Cycles around every hole of `d` (those enclosed by `region` first) and routed arcs from `base` to every point.
ExtendedPeriodMap make_period_map(const CircularDomain& d, const CompactSet& region, int n, Complex base, Complex base_z,
                                  const std::vector<Complex>& points, const std::vector<Complex>& z_targets,
                                  std::uint64_t seed = 0);

struct PeriodValues {
  Eigen::VectorXcd P, Z;
};

/// P_i = sum_j oint_{C_i} x_j dy_j (residues) and Z_p = z'(p) - z'(p0) + sum_j int_{E_p} x_j dy_j
/// (closed-form arc integrals).
PeriodValues eval_extended_period(const std::vector<LaurentPoly>& x, const std::vector<LaurentPoly>& y,
                                  const ExtendedPeriodMap& pm);

/// Which component is sprayed: x_pair (partner y_pair, kernel phi dy) or y_pair
/// (partner x_pair, kernel x dphi).
struct SprayRole {
  int pair = 0;
  bool x_role = true;
};

/// The one-form coefficient by which a correction phi changes sum x_j dy_j.
LaurentPoly spray_kernel(const SprayRole& role, const LaurentPoly& partner, const LaurentPoly& phi);
const LaurentPoly& spray_partner(const SprayRole& role, const std::vector<LaurentPoly>& x,
                                 const std::vector<LaurentPoly>& y);

/// phi^(k)(p) = 0 for k = 0..order.
struct JetKill {
  Complex p{};
  int order = 0;
};

struct CorrectionReport {
  double cycle_residual = 0.0;  // max |oint kernel - delta|
  double arc_residual = 0.0;    // max |int kernel - delta|
  double jet_residual = 0.0;    // max |phi^(k)(p)| over killed jets
  double condition = 0.0;
  double sup_on_samples = 0.0;  // max |phi| over the minimisation samples
  int poly_degree = 0;
  int pole_degree = 0;
  bool pass = false;
  std::vector<std::string> log;
};

/// g[j]: oint_{C_i} kernel(g_j) = delta_ij, int_{E_p} kernel(g_j) = 0;
/// h[k]: oint kernel(h_k) = 0, int_{E_p} kernel(h_k) = delta_{pk}. All functions are
/// jet-killed at `jet_kill` and have vanishing value and derivative at `deriv_kill`.
struct CorrectionSet {
  SprayRole role;
  std::vector<LaurentPoly> g, h;
  CorrectionReport report;
};

/// Linear conditions on a correction phi: integrals of kernel(phi) over cycles and arcs,
/// then derivatives phi^(order)(p).
struct KernelRows {
  std::vector<Cycle> cycles;
  std::vector<Arc> arcs;
  std::vector<std::pair<Complex, int>> values;
  int size() const { return static_cast<int>(cycles.size() + arcs.size() + values.size()); }
};

/// One phi per right-hand side, each minimising sum |phi|^2 over `samples` subject to the
/// rows. The basis grows until the measured residuals pass. Throws ConditioningFailure.
std::vector<LaurentPoly> solve_kernel_rows(const LaurentPoly& partner, const SprayRole& role, const KernelRows& rows,
                                           const std::vector<Eigen::VectorXcd>& rhs, const std::vector<Complex>& samples,
                                           const std::vector<Complex>& centers, int max_degree, CorrectionReport& report);

/// Throws DegenerateDy1 and ConditioningFailure.
CorrectionSet build_corrections(const LaurentPoly& partner, const SprayRole& role, const ExtendedPeriodMap& pm,
                                const std::vector<JetKill>& jet_kill, const std::vector<Complex>& deriv_kill,
                                const std::vector<Complex>& samples, const std::vector<Complex>& centers,
                                int max_degree = 64);

/// Columns: g_1..g_s, h_1..h_L; rows: cycles then arcs.
Eigen::MatrixXcd assemble_DS(const LaurentPoly& partner, const CorrectionSet& cs, const ExtendedPeriodMap& pm);

struct SprayParams {
  std::vector<Complex> zeta, xi;
  Complex delta{};
};

/// Adds sum zeta_j g_j + sum xi_k h_k to the sprayed component.
void apply_spray(std::vector<LaurentPoly>& x, std::vector<LaurentPoly>& y, const CorrectionSet& cs,
                 const SprayParams& params);

struct AffineSolve {
  SprayParams params;
  Eigen::MatrixXcd DS;
  double ds_defect = 0.0;  // ||DS - I||_inf (max row sum)
  double period_residual = 0.0;
  double z_residual = 0.0;
};

/// Solves S(zeta, xi) = 0 for the affine spray and applies it to x/y in place. Throws
/// DerivativeNotNearIdentity, SingularSystem and ToleranceNotReached.
AffineSolve solve_affine(std::vector<LaurentPoly>& x, std::vector<LaurentPoly>& y, const CorrectionSet& cs,
                         const ExtendedPeriodMap& pm, double gate = 0.1);

struct MultiplicativeSolve {
  SprayParams params;
  int iterations = 0;
  double residual = 0.0;
};

/// Newton solve of oint_{C_i} beta'/x~ = 0 and int_{E_p} beta'/x~ = y_targets[p] for
/// x~ = x1 exp(sum zeta_j g_j + sum xi_p h_p). Throws NewtonDiverged and ZeroCrossing.
MultiplicativeSolve solve_multiplicative(const LaurentPoly& x1, const OneForm& beta, const CorrectionSet& cs,
                                         const ExtendedPeriodMap& pm, const std::vector<Complex>& y_targets,
                                         int max_iter = 50);

/// exp(e) truncated once the next term is below 1e-17 in modulus on `samples`.
LaurentPoly truncated_exp(const LaurentPoly& e, const std::vector<Complex>& samples);

}  // namespace leglab
