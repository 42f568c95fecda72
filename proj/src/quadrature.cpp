#include "leglab/quadrature.hpp"

#include <numbers>
#include <queue>
#include <string>

#include "leglab/errors.hpp"

namespace leglab {

namespace {

// Gauss-Kronrod 7/15 abscissae on [-1,1] (non-negative half) and weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

/// A parametrised curve t in [0,1] -> (point, d point / dt).
struct Parametrisation {
  std::function<Complex(double)> point;
  std::function<Complex(double)> derivative;
};

struct Panel {
  std::size_t curve;
  double t0, t1;
  Eigen::VectorXcd value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::vector<Parametrisation>& curves, std::size_t c, double t0, double t1,
                     const VectorIntegrand& f, int dim) {
  const double half = 0.5 * (t1 - t0);
  const double mid = 0.5 * (t0 + t1);
  Eigen::VectorXcd kronrod = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd gauss = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd tmp(dim);
  const auto& curve = curves[c];
  auto sample = [&](double t) {
    f(curve.point(t), tmp);
    tmp *= curve.derivative(t);
  };
  sample(mid);
  kronrod += kWgk[7] * tmp;
  gauss += kWg[3] * tmp;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    sample(mid - dx);
    Eigen::VectorXcd lo = tmp;
    sample(mid + dx);
    kronrod += kWgk[i] * (lo + tmp);
    if (i % 2 == 1) gauss += kWg[i / 2] * (lo + tmp);
  }
  kronrod *= half;
  gauss *= half;
  return Panel{c, t0, t1, kronrod, (kronrod - gauss).cwiseAbs().maxCoeff()};
}

QuadVecResult integrate_curves(const std::vector<Parametrisation>& curves, const VectorIntegrand& f, int dim,
                               double tol) {
  std::priority_queue<Panel> queue;
  Eigen::VectorXcd total = Eigen::VectorXcd::Zero(dim);
  double error = 0.0;
  int panels = 0;
  // start with a few panels per curve so that short features are not missed
  constexpr int kInitial = 4;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    for (int k = 0; k < kInitial; ++k) {
      Panel p = evaluate_panel(curves, c, double(k) / kInitial, double(k + 1) / kInitial, f, dim);
      total += p.value;
      error += p.error;
      queue.push(std::move(p));
      ++panels;
    }
  }
  while (error > tol && !queue.empty()) {
    if (panels >= kMaxQuadraturePanels) {
      fail(ErrorKind::QuadratureNotConverged,
           "error estimate " + std::to_string(error) + " exceeds tolerance " + std::to_string(tol));
    }
    Panel worst = queue.top();
    queue.pop();
    total -= worst.value;
    error -= worst.error;
    const double mid = 0.5 * (worst.t0 + worst.t1);
    Panel left = evaluate_panel(curves, worst.curve, worst.t0, mid, f, dim);
    Panel right = evaluate_panel(curves, worst.curve, mid, worst.t1, f, dim);
    total += left.value + right.value;
    error += left.error + right.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
    ++panels;
    // guard against drift of the running error sum
    if (error < 0) error = 0;
  }
  // recompute the error sum exactly
  double exact = 0.0;
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(dim);
  while (!queue.empty()) {
    exact += queue.top().error;
    sum += queue.top().value;
    queue.pop();
  }
  return {sum, exact};
}

std::vector<Parametrisation> arc_curves(const Arc& arc) {
  std::vector<Parametrisation> curves;
  for (const auto& piece : arc.pieces()) {
    if (piece.length() == 0.0) continue;
    curves.push_back({[piece](double t) { return piece.point(t); }, [piece](double t) { return piece.derivative(t); }});
  }
  return curves;
}

std::vector<Parametrisation> cycle_curves(const Cycle& cycle) {
  const double two_pi = 2.0 * std::numbers::pi;
  return {{[cycle, two_pi](double t) { return cycle.point(two_pi * t); },
           [cycle, two_pi](double t) { return two_pi * cycle.tangent(two_pi * t); }}};
}

VectorIntegrand lift(const ScalarIntegrand& f) {
  return [f](Complex z, Eigen::Ref<Eigen::VectorXcd> out) { out(0) = f(z); };
}

}  // namespace

QuadVecResult integrate_path(const Arc& arc, const VectorIntegrand& f, int dim, double tol) {
  return integrate_curves(arc_curves(arc), f, dim, tol);
}

QuadResult integrate_path(const Arc& arc, const ScalarIntegrand& f, double tol) {
  auto r = integrate_curves(arc_curves(arc), lift(f), 1, tol);
  return {r.value(0), r.error};
}

QuadVecResult integrate_cycle(const Cycle& cycle, const VectorIntegrand& f, int dim, double tol) {
  return integrate_curves(cycle_curves(cycle), f, dim, tol);
}

QuadResult integrate_cycle(const Cycle& cycle, const ScalarIntegrand& f, double tol) {
  auto r = integrate_curves(cycle_curves(cycle), lift(f), 1, tol);
  return {r.value(0), r.error};
}

}  // namespace leglab
