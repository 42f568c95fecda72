#include "leglab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "leglab/errors.hpp"

namespace leglab {

namespace {

double sup_error_of(const LaurentPoly& f, const std::vector<Complex>& pts, const std::vector<Complex>& values) {
  double e = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) e = std::max(e, std::abs(f(pts[i]) - values[i]));
  return e;
}

double jet_residual(const LaurentPoly& f, const std::vector<JetConstraint>& jets) {
  double r = 0.0;
  for (const auto& j : jets) {
    const auto got = jet_at(f, j.p, j.m);
    for (int k = 0; k <= j.m; ++k) r = std::max(r, std::abs(got[k] - j.values[k]) / std::max(1.0, std::abs(j.values[k])));
  }
  return r;
}

LaurentPoly power_of_linear(Complex c, int k) {
  // (z - c)^k
  LaurentPoly r = LaurentPoly::constant(1.0);
  const LaurentPoly lin = LaurentPoly::from_dense({}, {-c, 1.0}, {});
  for (int i = 0; i < k; ++i) r = r * lin;
  return r;
}

}  // namespace

Approximation mergelyan_jets(const std::vector<Complex>& points, const std::vector<Complex>& values,
                             const std::vector<JetConstraint>& jets, const BasisSpec& spec, double lambda) {
  require(points.size() == values.size(), "one value per sample point is required");
  require(spec.max_pole_degree.size() == spec.centers.size(), "one pole degree per center is required");
  for (std::size_t i = 0; i < jets.size(); ++i) {
    require(static_cast<int>(jets[i].values.size()) == jets[i].m + 1, "jet needs m+1 derivative values");
    for (auto c : spec.centers) require(std::abs(jets[i].p - c) > 1e-12, "jet point on a pole center");
    for (std::size_t j = i + 1; j < jets.size(); ++j) require(std::abs(jets[i].p - jets[j].p) > 1e-12, "jet points must be distinct");
  }
  std::vector<Complex> support = points;
  for (const auto& j : jets) support.push_back(j.p);
  const LaurentBasis basis = LaurentBasis::fitted(support, spec.max_poly_degree, spec.centers, spec.max_pole_degree);
  const int n = basis.size();
  int rows = 0;
  for (const auto& j : jets) rows += j.m + 1;
  if (rows > n) {
    std::ostringstream os;
    os << rows << " jet rows exceed basis dimension " << n;
    fail(ErrorKind::BasisTooSmall, os.str());
  }
  Eigen::MatrixXcd A(points.size(), n);
  Eigen::VectorXcd b(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    A.row(i) = basis.row(points[i]);
    b(i) = values[i];
  }
  Eigen::MatrixXcd C(rows, n);
  Eigen::VectorXcd d(rows);
  int r = 0;
  for (const auto& j : jets) {
    for (int k = 0; k <= j.m; ++k) {
      C.row(r) = basis.row(j.p, k);
      d(r) = j.values[k];
      ++r;
    }
  }
  const auto sol = constrained_lstsq(A, b, C, d, lambda);
  Approximation out;
  out.f = basis.to_laurent(sol.x);
  out.sup_error = sup_error_of(out.f, points, values);
  out.constraint_residual = jet_residual(out.f, jets);
  out.condition = sol.condition;
  return out;
}

Approximation fit_escalating(const std::vector<Complex>& points, const std::vector<Complex>& values,
                             const std::vector<JetConstraint>& jets, const std::vector<Complex>& centers, double tol,
                             int start_degree, int max_degree) {
  int rows = 0;
  for (const auto& j : jets) rows += j.m + 1;
  int degree = std::max(start_degree, rows + 1);
  int pole = 2;
  double jet_scale = 1.0;
  for (const auto& j : jets) {
    for (auto v : j.values) jet_scale = std::max(jet_scale, std::abs(v));
  }
  // candidates whose jets still hold beat any that lost them to rounding
  auto holds = [&](const Approximation& a) { return a.constraint_residual <= 1e-10 * jet_scale; };
  Approximation best;
  bool have = false;
  for (;;) {
    BasisSpec spec{degree, centers, std::vector<int>(centers.size(), pole)};
    Approximation a = mergelyan_jets(points, values, jets, spec);
    const bool better = !have || (holds(a) && !holds(best)) || (holds(a) == holds(best) && a.sup_error < best.sup_error);
    if (better) {
      best = a;
      have = true;
    }
    if (best.sup_error <= tol || degree >= max_degree) break;
    degree = std::min(2 * degree, max_degree);
    pole += 1;
  }
  return best;
}

LaurentPoly make_nonconstant(const LaurentPoly& f, const std::vector<Complex>& samples,
                             const std::vector<std::pair<Complex, int>>& protect) {
  if (!f.is_constant(1e-10)) return f;
  double s = 1.0;
  for (auto p : samples) s = std::max(s, std::abs(p));
  LaurentPoly bump = LaurentPoly::monomial(1, 1.0, f.centers());
  for (const auto& [p, m] : protect) bump = bump * power_of_linear(p, m + 1).scaled(std::pow(1.0 / (2.0 * s), m + 1));
  double sup = 0.0;
  for (auto p : samples) sup = std::max(sup, std::abs(bump(p)));
  double eps = 1e-6;
  if (sup * eps > 1e-5) eps = 0.5e-5 / sup;
  return f + bump.scaled(eps);
}

std::vector<CriticalPoint> zeros_of_derivative(const LaurentPoly& f, const CompactSet& k) {
  const LaurentPoly df = differentiate(f);
  if (df.is_zero()) fail(ErrorKind::ConstantDerivative, "derivative vanishes identically");
  // clear denominators
  LaurentPoly q = df;
  for (std::size_t i = 0; i < df.centers().size(); ++i) {
    const int order = df.pole_order(i);
    if (order > 0) q = q * power_of_linear(df.centers()[i], order);
  }
  std::vector<Complex> coeffs = q.dense_poly();
  double s = std::max(1.0, k.disk.radius + std::abs(k.disk.center));
  // scaled coefficients c_j s^j, dropping negligible leading terms
  std::vector<Complex> scaled(coeffs.size());
  double big = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    scaled[j] = coeffs[j] * std::pow(s, static_cast<double>(j));
    big = std::max(big, std::abs(scaled[j]));
  }
  while (scaled.size() > 1 && std::abs(scaled.back()) < 1e-13 * big) scaled.pop_back();
  std::vector<Complex> roots;
  const int deg = static_cast<int>(scaled.size()) - 1;
  if (deg >= 1) {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -scaled[i] / scaled[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (Eigen::Index i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i) * s);
  }
  // keep roots in k, cluster for multiplicity
  std::vector<Complex> inside;
  for (auto r : roots) {
    if (k.contains(r, 1e-6 * s)) inside.push_back(r);
  }
  std::sort(inside.begin(), inside.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  std::vector<CriticalPoint> out;
  std::vector<bool> used(inside.size(), false);
  const LaurentPoly ddf = differentiate(df);
  for (std::size_t i = 0; i < inside.size(); ++i) {
    if (used[i]) continue;
    Complex sum = inside[i];
    int mult = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < inside.size(); ++j) {
      if (!used[j] && std::abs(inside[j] - inside[i]) < 1e-6 * s) {
        used[j] = true;
        sum += inside[j];
        ++mult;
      }
    }
    Complex p = sum / static_cast<double>(mult);
    if (mult == 1) {
      for (int it = 0; it < 30; ++it) {
        const Complex d2 = ddf(p);
        if (d2 == Complex(0.0)) break;
        const Complex step = df(p) / d2;
        p -= step;
        if (std::abs(step) < 1e-15 * s) break;
      }
    }
    if (k.contains(p, 1e-9)) out.push_back({p, mult});
  }
  return out;
}

LaurentPoly build_eta(const std::vector<std::pair<Complex, bool>>& imm_points,
                      const std::vector<std::pair<Complex, int>>& jet_kill) {
  int rows = static_cast<int>(imm_points.size());
  for (const auto& [p, o] : jet_kill) {
    require(o >= 0, "jet-kill order must be non-negative");
    rows += o + 1;
  }
  if (rows == 0) return LaurentPoly();
  std::vector<Complex> pts;
  for (const auto& [p, flag] : imm_points) pts.push_back(p);
  for (const auto& [p, o] : jet_kill) pts.push_back(p);
  for (std::size_t i = 0; i < imm_points.size(); ++i) {
    for (std::size_t j = i + 1; j < imm_points.size(); ++j) {
      require(std::abs(imm_points[i].first - imm_points[j].first) > 1e-12, "immersion points must be distinct");
    }
  }
  for (std::size_t i = 0; i < jet_kill.size(); ++i) {
    for (std::size_t j = i + 1; j < jet_kill.size(); ++j) {
      require(std::abs(jet_kill[i].first - jet_kill[j].first) > 1e-12, "jet-kill points must be distinct");
    }
  }
  std::string last_error = "no feasible degree";
  for (int degree = rows - 1; degree <= rows + 2; ++degree) {
    const LaurentBasis basis = LaurentBasis::fitted(pts, degree, {}, {});
    Eigen::MatrixXcd C(rows, basis.size());
    Eigen::VectorXcd d(rows);
    int r = 0;
    for (const auto& [p, o] : jet_kill) {
      for (int k = 0; k <= o; ++k) {
        C.row(r) = basis.row(p, k);
        d(r++) = 0.0;
      }
    }
    for (const auto& [p, flag] : imm_points) {
      C.row(r) = basis.row(p, 1);
      d(r++) = flag ? 1.0 : 0.0;
    }
    try {
      const auto sol = constrained_lstsq(Eigen::MatrixXcd(0, basis.size()), Eigen::VectorXcd(0), C, d);
      LaurentPoly eta = basis.to_laurent(sol.x);
      // post-hoc verification
      double worst = 0.0;
      for (const auto& [p, o] : jet_kill) {
        for (auto v : jet_at(eta, p, o)) worst = std::max(worst, std::abs(v));
      }
      for (const auto& [p, flag] : imm_points) worst = std::max(worst, std::abs(jet_at(eta, p, 1)[1] - (flag ? 1.0 : 0.0)));
      if (worst <= 1e-11) return eta;
      last_error = "constraint residual " + std::to_string(worst);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfeasibleConstraints && e.kind() != ErrorKind::BasisTooSmall) throw;
      last_error = e.what();
    }
  }
  fail(ErrorKind::InfeasibleConstraints, "no Hermite interpolant: " + last_error);
}

double min_max_derivative(const std::vector<LaurentPoly>& components, const std::vector<Complex>& pts) {
  std::vector<LaurentPoly> d;
  for (const auto& c : components) d.push_back(differentiate(c));
  double best = std::numeric_limits<double>::infinity();
  for (auto p : pts) {
    double m = 0.0;
    for (const auto& f : d) m = std::max(m, std::abs(f(p)));
    best = std::min(best, m);
  }
  return best;
}

ImmersionFix immersion_fix(const LaurentPoly& x1, const LaurentPoly& y1, const CompactSet& k,
                           const std::vector<std::pair<Complex, int>>& protect, double budget, int grid) {
  require(!y1.is_constant(1e-10), "immersion fix needs a nonconstant y1");
  const auto crit = zeros_of_derivative(y1, k);
  const LaurentPoly dx = differentiate(x1);
  double scale = 0.0;
  for (auto p : grid_in_compact(k, 16)) scale = std::max(scale, std::abs(dx(p)) + std::abs(differentiate(y1)(p)));
  const double tiny = 1e-8 * std::max(scale, 1.0);

  std::vector<std::pair<Complex, bool>> imm;
  bool needs_fix = false;
  for (const auto& c : crit) {
    const bool degenerate = std::abs(dx(c.p)) <= tiny;
    bool is_protected = false;
    for (const auto& [p, m] : protect) is_protected = is_protected || std::abs(p - c.p) < 1e-9;
    if (is_protected) {
      if (degenerate) {
        std::ostringstream os;
        os << "protected point " << c.p << " is a critical point of both x1 and y1";
        fail(ErrorKind::NoValidDelta, os.str());
      }
      continue;
    }
    if (degenerate) needs_fix = true;
    imm.push_back({c.p, degenerate});
  }
  std::vector<Complex> check = grid_in_compact(k, grid);
  for (const auto& c : crit) check.push_back(c.p);
  ImmersionFix out;
  out.x1 = x1;
  if (!needs_fix) {
    out.min_derivative = min_max_derivative({x1, y1}, check);
    return out;
  }
  const LaurentPoly eta = build_eta(imm, protect).with_centers(x1.centers());
  double sup_eta = 0.0;
  for (auto p : check) sup_eta = std::max(sup_eta, std::abs(eta(p)));
  for (double delta = 1e-2; delta >= 1e-8 * 0.999; delta /= 10.0) {
    if (delta * sup_eta > budget) continue;
    LaurentPoly candidate = x1 + eta.scaled(delta);
    const double m = min_max_derivative({candidate, y1}, check);
    if (m > 0.0) {
      out.x1 = candidate;
      out.delta = delta;
      out.min_derivative = m;
      return out;
    }
  }
  fail(ErrorKind::NoValidDelta, "no delta on the ladder 1e-2..1e-8 keeps the change within budget and removes critical points");
}

LaurentPoly boundary_bump(const CompactSet& inner, const CompactSet& outer, double small_tol, double large_target) {
  require(std::abs(inner.disk.center - outer.disk.center) < 1e-12, "bump sets must be concentric");
  const double ratio = outer.disk.radius / inner.disk.radius;
  if (ratio < 1.01) {
    std::ostringstream os;
    os << "radius ratio " << ratio << " is below 1.01";
    fail(ErrorKind::NoSeparation, os.str());
  }
  if (large_target <= 0.0) return LaurentPoly();
  require(small_tol > 0.0, "small tolerance must be positive");
  const double N = std::max(1.0, std::ceil(std::log(small_tol / large_target) / std::log(1.0 / ratio)));
  if (N > (1 << 20)) fail(ErrorKind::NoSeparation, "bump exponent exceeds 2^20");
  const Complex c = outer.disk.center;
  const int n = static_cast<int>(N);
  if (c == Complex(0.0)) return LaurentPoly::monomial(n, large_target / std::pow(outer.disk.radius, n));
  return power_of_linear(c, n).scaled(large_target / std::pow(outer.disk.radius, n));
}

}  // namespace leglab
