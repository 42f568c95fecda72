#include "leglab/spray.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "leglab/errors.hpp"
#include "leglab/linalg.hpp"
#include "leglab/quadrature.hpp"

namespace leglab {

namespace {

constexpr double kCycleTol = 1e-10;
constexpr double kArcTol = 1e-8;
constexpr double kJetTol = 1e-11;
constexpr int kPathSamples = 256;

std::vector<Complex> path_points(const ExtendedPeriodMap& pm) {
  std::vector<Complex> pts;
  for (const auto& c : pm.cycles) {
    for (int i = 0; i < kPathSamples; ++i) pts.push_back(c.point(2.0 * std::numbers::pi * i / kPathSamples));
  }
  for (const auto& a : pm.arcs) {
    auto s = a.sample(kPathSamples);
    pts.insert(pts.end(), s.begin(), s.end());
  }
  return pts;
}

OneForm form_of(const std::vector<LaurentPoly>& x, const std::vector<LaurentPoly>& y) {
  require(x.size() == y.size() && !x.empty(), "x and y must have the same positive length");
  LaurentPoly acc;
  for (std::size_t j = 0; j < x.size(); ++j) acc = acc + x[j] * differentiate(y[j]);
  return OneForm{acc};
}

Eigen::VectorXcd period_column(const LaurentPoly& kernel, const ExtendedPeriodMap& pm) {
  Eigen::VectorXcd col(pm.s() + pm.lambda());
  const OneForm w{kernel};
  for (int i = 0; i < pm.s(); ++i) col(i) = contour_integral(w, pm.cycles[i]);
  for (int k = 0; k < pm.lambda(); ++k) col(pm.s() + k) = exact_arc_integral(w, pm.arcs[k]);
  return col;
}

double max_abs(const Eigen::VectorXcd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

ExtendedPeriodMap make_period_map(const CircularDomain& d, const CompactSet& region, int n, Complex base, Complex base_z,
                                  const std::vector<Complex>& points, const std::vector<Complex>& z_targets,
                                  std::uint64_t seed) {
  require(points.size() == z_targets.size(), "one z target per interpolation point is required");
  ExtendedPeriodMap pm;
  pm.n = n;
  pm.cycles = hole_cycles(d, region);
  pm.base_point = base;
  pm.base_z = base_z;
  pm.points = points;
  pm.z_targets = z_targets;
  for (auto p : points) {
    require(std::abs(p - base) > 1e-12, "interpolation points must differ from the base point");
    pm.arcs.push_back(build_arc(d, base, p, {}, seed));
  }
  return pm;
}

PeriodValues eval_extended_period(const std::vector<LaurentPoly>& x, const std::vector<LaurentPoly>& y,
                                  const ExtendedPeriodMap& pm) {
  const OneForm w = form_of(x, y);
  PeriodValues v;
  v.P.resize(pm.s());
  v.Z.resize(pm.lambda());
  for (int i = 0; i < pm.s(); ++i) v.P(i) = contour_integral(w, pm.cycles[i]);
  for (int k = 0; k < pm.lambda(); ++k) {
    v.Z(k) = pm.z_targets[k] - pm.base_z + exact_arc_integral(w, pm.arcs[k]);
  }
  return v;
}

LaurentPoly spray_kernel(const SprayRole& role, const LaurentPoly& partner, const LaurentPoly& phi) {
  return role.x_role ? phi * differentiate(partner) : partner * differentiate(phi);
}

const LaurentPoly& spray_partner(const SprayRole& role, const std::vector<LaurentPoly>& x,
                                 const std::vector<LaurentPoly>& y) {
  require(role.pair >= 0 && role.pair < static_cast<int>(x.size()) && x.size() == y.size(), "spray pair out of range");
  return role.x_role ? y[role.pair] : x[role.pair];
}

CorrectionSet build_corrections(const LaurentPoly& partner, const SprayRole& role, const ExtendedPeriodMap& pm,
                                const std::vector<JetKill>& jet_kill, const std::vector<Complex>& deriv_kill,
                                const std::vector<Complex>& samples, const std::vector<Complex>& centers,
                                int max_degree) {
  const auto paths = path_points(pm);
  if (partner.is_constant(1e-14)) fail(ErrorKind::DegenerateDy1, "the partner component is constant");
  {
    const LaurentPoly probe = role.x_role ? differentiate(partner) : partner;
    double lo = 1e300;
    for (auto p : paths) lo = std::min(lo, std::abs(probe(p)));
    if (!paths.empty() && lo < 1e-8) {
      std::ostringstream os;
      os << "partner " << (role.x_role ? "derivative" : "value") << " drops to " << lo << " on the period paths";
      fail(ErrorKind::DegenerateDy1, os.str());
    }
  }

  // merged kill list: point -> highest killed derivative order
  std::vector<JetKill> kills;
  auto add_kill = [&](Complex p, int order) {
    for (auto& k : kills) {
      if (std::abs(k.p - p) < 1e-12) {
        k.order = std::max(k.order, order);
        return;
      }
    }
    kills.push_back({p, order});
  };
  for (const auto& k : jet_kill) add_kill(k.p, k.order);
  for (auto q : deriv_kill) add_kill(q, 1);

  KernelRows rows;
  rows.cycles = pm.cycles;
  rows.arcs = pm.arcs;
  for (const auto& k : kills) {
    for (int o = 0; o <= k.order; ++o) rows.values.push_back({k.p, o});
  }
  const int targets = pm.s() + pm.lambda();
  std::vector<Eigen::VectorXcd> rhs;
  for (int t = 0; t < targets; ++t) {
    rhs.push_back(Eigen::VectorXcd::Zero(rows.size()));
    rhs.back()(t) = 1.0;
  }

  CorrectionSet cs;
  cs.role = role;
  if (targets == 0) {
    cs.report.pass = true;
    return cs;
  }
  auto sols = solve_kernel_rows(partner, role, rows, rhs, samples, centers, max_degree, cs.report);
  cs.g.assign(sols.begin(), sols.begin() + pm.s());
  cs.h.assign(sols.begin() + pm.s(), sols.end());
  return cs;
}

std::vector<LaurentPoly> solve_kernel_rows(const LaurentPoly& partner, const SprayRole& role, const KernelRows& rows,
                                           const std::vector<Eigen::VectorXcd>& rhs, const std::vector<Complex>& samples,
                                           const std::vector<Complex>& centers, int max_degree,
                                           CorrectionReport& report) {
  const int nc = static_cast<int>(rows.cycles.size()), na = static_cast<int>(rows.arcs.size());
  const int nrows = rows.size();
  for (const auto& r : rhs) require(r.size() == nrows, "right-hand side does not match the rows");

  std::vector<Complex> support = samples;
  for (const auto& c : rows.cycles) {
    for (int i = 0; i < 64; ++i) support.push_back(c.point(2.0 * std::numbers::pi * i / 64));
  }
  for (const auto& a : rows.arcs) {
    auto s = a.sample(64);
    support.insert(support.end(), s.begin(), s.end());
  }
  for (const auto& v : rows.values) support.push_back(v.first);

  auto integrals = [&](const LaurentPoly& kernel) {
    Eigen::VectorXcd col(nc + na);
    const OneForm w{kernel};
    for (int i = 0; i < nc; ++i) col(i) = contour_integral(w, rows.cycles[i]);
    for (int k = 0; k < na; ++k) col(nc + k) = exact_arc_integral(w, rows.arcs[k]);
    return col;
  };

  report = CorrectionReport{};
  Error last(ErrorKind::ToleranceNotReached, "no basis was tried");
  double last_cond = 0.0;
  int pole = 1;
  for (int deg = 8; deg <= max_degree; deg *= 2, ++pole) {
    const LaurentBasis basis = LaurentBasis::fitted(support, deg, centers, std::vector<int>(centers.size(), pole));
    const int N = basis.size();
    std::ostringstream tag;
    tag << "degree " << deg << " poles " << pole;
    if (nrows > N) {
      report.log.push_back(tag.str() + ": basis too small");
      last = Error(ErrorKind::BasisTooSmall, tag.str());
      continue;
    }
    Eigen::MatrixXcd C(nrows, N);
    if (nc + na > 0) {
      for (int b = 0; b < N; ++b) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N);
        e(b) = 1.0;
        C.block(0, b, nc + na, 1) = integrals(spray_kernel(role, partner, basis.to_laurent(e)));
      }
    }
    for (std::size_t v = 0; v < rows.values.size(); ++v) {
      C.row(nc + na + v) = basis.row(rows.values[v].first, rows.values[v].second);
    }
    Eigen::MatrixXcd A(samples.size(), N);
    for (std::size_t i = 0; i < samples.size(); ++i) A.row(i) = basis.row(samples[i], 0);
    const Eigen::VectorXcd zero_b = Eigen::VectorXcd::Zero(A.rows());

    std::vector<LaurentPoly> sols;
    double cond = 0.0;
    try {
      for (const auto& d : rhs) {
        auto res = constrained_lstsq(A, zero_b, C, d, 1e-14);
        cond = std::max(cond, res.condition);
        sols.push_back(basis.to_laurent(res.x));
      }
    } catch (const Error& e) {
      report.log.push_back(tag.str() + ": " + e.what());
      last = e;
      continue;
    }
    last_cond = cond;

    CorrectionReport rep;
    rep.poly_degree = deg;
    rep.pole_degree = pole;
    rep.condition = cond;
    for (std::size_t t = 0; t < rhs.size(); ++t) {
      Eigen::VectorXcd col = integrals(spray_kernel(role, partner, sols[t])) - rhs[t].head(nc + na);
      rep.cycle_residual = std::max(rep.cycle_residual, max_abs(col.head(nc)));
      rep.arc_residual = std::max(rep.arc_residual, max_abs(col.tail(na)));
      for (std::size_t v = 0; v < rows.values.size(); ++v) {
        const auto& [p, o] = rows.values[v];
        const Complex got = jet_at(sols[t], p, o)[o];
        rep.jet_residual = std::max(rep.jet_residual, std::abs(got - rhs[t](nc + na + v)));
      }
      for (auto p : samples) rep.sup_on_samples = std::max(rep.sup_on_samples, std::abs(sols[t](p)));
    }
    // rounding in any evaluation of a correction scales with its largest coefficient
    double size = 1.0;
    for (const auto& g : sols) size = std::max(size, g.max_abs_coeff());
    rep.pass = rep.cycle_residual <= kCycleTol * size && rep.arc_residual <= kArcTol * size &&
               rep.jet_residual <= kJetTol * size;
    std::ostringstream os;
    os << tag.str() << ": cycle " << rep.cycle_residual << " arc " << rep.arc_residual << " jet " << rep.jet_residual
       << " cond " << cond;
    report.log.push_back(os.str());
    rep.log = report.log;
    if (rep.pass) {
      report = rep;
      return sols;
    }
    last = Error(ErrorKind::ToleranceNotReached, os.str());
  }
  if (last_cond > 1e10) {
    std::ostringstream os;
    os << "correction system condition " << last_cond << " at the largest basis";
    fail(ErrorKind::ConditioningFailure, os.str());
  }
  std::string trail;
  for (const auto& l : report.log) trail += (trail.empty() ? "" : "; ") + l;
  fail(last.kind(), trail);
}

Eigen::MatrixXcd assemble_DS(const LaurentPoly& partner, const CorrectionSet& cs, const ExtendedPeriodMap& pm) {
  const int m = pm.s() + pm.lambda();
  require(static_cast<int>(cs.g.size()) == pm.s() && static_cast<int>(cs.h.size()) == pm.lambda(),
          "correction set does not match the period map");
  Eigen::MatrixXcd DS(m, m);
  for (int j = 0; j < pm.s(); ++j) DS.col(j) = period_column(spray_kernel(cs.role, partner, cs.g[j]), pm);
  for (int k = 0; k < pm.lambda(); ++k) DS.col(pm.s() + k) = period_column(spray_kernel(cs.role, partner, cs.h[k]), pm);
  return DS;
}

void apply_spray(std::vector<LaurentPoly>& x, std::vector<LaurentPoly>& y, const CorrectionSet& cs,
                 const SprayParams& params) {
  require(params.zeta.size() == cs.g.size() && params.xi.size() == cs.h.size(), "spray parameter size mismatch");
  require(cs.role.pair >= 0 && cs.role.pair < static_cast<int>(x.size()), "spray pair out of range");
  LaurentPoly& target = cs.role.x_role ? x[cs.role.pair] : y[cs.role.pair];
  LaurentPoly delta;
  for (std::size_t j = 0; j < cs.g.size(); ++j) delta = delta + params.zeta[j] * cs.g[j];
  for (std::size_t k = 0; k < cs.h.size(); ++k) delta = delta + params.xi[k] * cs.h[k];
  target = target + delta;
}

AffineSolve solve_affine(std::vector<LaurentPoly>& x, std::vector<LaurentPoly>& y, const CorrectionSet& cs,
                         const ExtendedPeriodMap& pm, double gate) {
  const LaurentPoly partner = spray_partner(cs.role, x, y);
  AffineSolve out;
  out.DS = assemble_DS(partner, cs, pm);
  const int m = static_cast<int>(out.DS.rows());
  out.params.zeta.assign(pm.s(), 0.0);
  out.params.xi.assign(pm.lambda(), 0.0);
  if (m == 0) return out;
  out.ds_defect = (out.DS - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().rowwise().sum().maxCoeff();
  if (out.ds_defect > gate) {
    std::ostringstream os;
    os << "||DS - I|| = " << out.ds_defect << " exceeds " << gate;
    fail(ErrorKind::DerivativeNotNearIdentity, os.str());
  }
  const PeriodValues v0 = eval_extended_period(x, y, pm);
  Eigen::VectorXcd S0(m);
  S0 << v0.P, v0.Z;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(out.DS);
  if (lu.rank() < m) fail(ErrorKind::SingularSystem, "period derivative is singular");
  const Eigen::VectorXcd t = lu.solve(-S0);
  for (int j = 0; j < pm.s(); ++j) out.params.zeta[j] = t(j);
  for (int k = 0; k < pm.lambda(); ++k) out.params.xi[k] = t(pm.s() + k);
  apply_spray(x, y, cs, out.params);
  const PeriodValues v1 = eval_extended_period(x, y, pm);
  out.period_residual = max_abs(v1.P);
  out.z_residual = max_abs(v1.Z);
  if (out.period_residual > 1e-9 || out.z_residual > 1e-8) {
    std::ostringstream os;
    os << "after the affine solve |P| = " << out.period_residual << ", |Z| = " << out.z_residual;
    fail(ErrorKind::ToleranceNotReached, os.str());
  }
  return out;
}

MultiplicativeSolve solve_multiplicative(const LaurentPoly& x1, const OneForm& beta, const CorrectionSet& cs,
                                         const ExtendedPeriodMap& pm, const std::vector<Complex>& y_targets,
                                         int max_iter) {
  const int s = pm.s(), L = pm.lambda(), m = s + L;
  require(static_cast<int>(y_targets.size()) == L, "one y target per arc is required");
  require(static_cast<int>(cs.g.size()) == s && static_cast<int>(cs.h.size()) == L,
          "correction set does not match the period map");
  {
    double lo = 1e300;
    for (auto p : path_points(pm)) lo = std::min(lo, std::abs(x1(p)));
    if (lo < 1e-8) {
      std::ostringstream os;
      os << "x1 drops to " << lo << " on the period paths";
      fail(ErrorKind::ZeroCrossing, os.str());
    }
  }
  std::vector<LaurentPoly> fns(cs.g);
  fns.insert(fns.end(), cs.h.begin(), cs.h.end());

  auto residual = [&](const Eigen::VectorXcd& t) {
    auto integrand = [&](Complex z) {
      Complex e = 0.0;
      for (int i = 0; i < m; ++i) e += t(i) * fns[i](z);
      return beta.coeff(z) / (x1(z) * std::exp(e));
    };
    Eigen::VectorXcd S(m);
    for (int i = 0; i < s; ++i) S(i) = integrate_cycle(pm.cycles[i], integrand, 1e-13).value;
    for (int k = 0; k < L; ++k) S(s + k) = integrate_path(pm.arcs[k], integrand, 1e-13).value - y_targets[k];
    return S;
  };

  MultiplicativeSolve out;
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(m);
  Eigen::VectorXcd S = residual(t);
  double norm = max_abs(S);
  double anchor = norm;
  int stalled = 0;
  const double h = 1e-6;
  for (int it = 0; it < max_iter && norm > 1e-8; ++it) {
    Eigen::MatrixXcd J(m, m);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXcd tp = t, tm = t;
      tp(i) += h;
      tm(i) -= h;
      J.col(i) = (residual(tp) - residual(tm)) / (2.0 * h);
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
    if (lu.rank() < m) fail(ErrorKind::SingularSystem, "multiplicative Jacobian is singular");
    const Eigen::VectorXcd step = lu.solve(-S);
    double a = 1.0;
    Eigen::VectorXcd tn = t + step, Sn = residual(tn);
    for (int k = 0; k < 20 && max_abs(Sn) >= norm; ++k) {
      a *= 0.5;
      tn = t + a * step;
      Sn = residual(tn);
    }
    t = tn;
    S = Sn;
    norm = max_abs(S);
    out.iterations = it + 1;
    if (norm <= 0.5 * anchor) {
      anchor = norm;
      stalled = 0;
    } else if (++stalled >= 5) {
      std::ostringstream os;
      os << "residual " << norm << " not halved in 5 iterations";
      fail(ErrorKind::NewtonDiverged, os.str());
    }
  }
  if (norm > 1e-8) {
    std::ostringstream os;
    os << "residual " << norm << " after " << out.iterations << " iterations";
    fail(ErrorKind::NewtonDiverged, os.str());
  }
  out.residual = norm;
  for (int j = 0; j < s; ++j) out.params.zeta.push_back(t(j));
  for (int k = 0; k < L; ++k) out.params.xi.push_back(t(s + k));
  return out;
}

LaurentPoly truncated_exp(const LaurentPoly& e, const std::vector<Complex>& samples) {
  LaurentPoly sum = LaurentPoly::constant(1.0);
  LaurentPoly term = LaurentPoly::constant(1.0);
  for (int k = 1; k <= 400; ++k) {
    term = (term * e).scaled(1.0 / k);
    sum = sum + term;
    double mx = 0.0;
    for (auto p : samples) mx = std::max(mx, std::abs(term(p)));
    if (mx < 1e-17) break;
  }
  return sum;
}

}  // namespace leglab
