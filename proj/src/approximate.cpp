#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "leglab/approx.hpp"
#include "leglab/errors.hpp"
#include "leglab/pipeline.hpp"

namespace leglab {

namespace {

constexpr double kJetAccept = 1e-9;

struct PieceSamples {
  std::vector<Complex> pts;
  std::vector<int> piece;  // K pieces first, then arcs
};

PieceSamples sample_pieces(const AdmissibleSet& S, int total) {
  double measure = 0.0;
  for (const auto& k : S.K) measure += k.area();
  for (const auto& a : S.gamma) measure += a.length();
  require(measure > 0.0, "S has no area or length");
  const double density = total / measure;
  PieceSamples out;
  int idx = 0;
  for (const auto& k : S.K) {
    for (auto p : sample_compact(k, std::max(16, static_cast<int>(std::lround(k.area() * density))))) {
      out.pts.push_back(p);
      out.piece.push_back(idx);
    }
    ++idx;
  }
  for (const auto& a : S.gamma) {
    for (auto p : a.sample(std::max(16, static_cast<int>(std::lround(a.length() * density))))) {
      out.pts.push_back(p);
      out.piece.push_back(idx);
    }
    ++idx;
  }
  return out;
}

int piece_of(const AdmissibleSet& S, Complex p) {
  for (std::size_t k = 0; k < S.K.size(); ++k) {
    if (S.K[k].contains(p, 1e-9)) return static_cast<int>(k);
  }
  for (std::size_t a = 0; a < S.gamma.size(); ++a) {
    if (S.gamma[a].distance_to(p) <= 1e-9) return static_cast<int>(S.K.size() + a);
  }
  return -1;
}

std::vector<SprayRole> candidate_roles(int n, int keep) {
  if (keep >= 0 && keep < n) return {SprayRole{keep, false}};
  if (keep >= n && keep < 2 * n) return {SprayRole{keep - n, true}};
  std::vector<SprayRole> out;
  for (int j = 0; j < n; ++j) {
    out.push_back(SprayRole{j, true});
    out.push_back(SprayRole{j, false});
  }
  return out;
}

double period_norm(const LegendrianCurve& c, const CompactSet& R) {
  OneForm w;
  for (int i = 0; i < c.n; ++i) w.coeff = w.coeff + wedge_d(c.x[i], c.y[i]).coeff;
  double m = 0.0;
  for (const auto& cyc : hole_cycles(c.domain, R)) m = std::max(m, std::abs(contour_integral(w, cyc)));
  return m;
}

LaurentPoly drop_residues(const LaurentPoly& f) {
  auto poles = f.dense_poles();
  for (auto& row : poles) {
    if (!row.empty()) row[0] = 0.0;
  }
  return LaurentPoly::from_dense(f.centers(), f.dense_poly(), poles);
}

struct Setup {
  int n = 1;
  PieceSamples samples;
  std::vector<std::vector<Complex>> values;
  std::vector<double> eps;
  double eps_min = 0.0;
  std::vector<Complex> centers;
  Complex p0{};
  Complex base_z{};
  std::vector<Complex> zpts, zvals;
  std::vector<JetKill> kills;
  std::vector<std::pair<Complex, int>> protect;
};

std::vector<JetConstraint> component_jets(const std::vector<JetSpec>& jets, int k, int n) {
  std::vector<JetConstraint> out;
  for (const auto& j : jets) out.push_back(JetConstraint{j.p, j.m, k < n ? j.x[k] : j.y[k - n]});
  return out;
}

double error_ratio(const LegendrianCurve& c, const Setup& s, bool with_z, double* sup_abs) {
  double ratio = 0.0, sup = 0.0;
  const int dims = with_z ? 2 * s.n + 1 : 2 * s.n;
  for (std::size_t i = 0; i < s.samples.pts.size(); ++i) {
    const auto v = c(s.samples.pts[i]);
    double e = 0.0;
    for (int k = 0; k < dims; ++k) e = std::max(e, std::abs(v[k] - s.values[i][k]));
    sup = std::max(sup, e);
    ratio = std::max(ratio, e / s.eps[i]);
  }
  if (sup_abs) *sup_abs = sup;
  return ratio;
}

ApproxResult finish(LegendrianCurve curve, const Setup& s, const std::vector<JetSpec>& jets, const CompactSet& R,
                    const ApproxOptions& opt, bool with_z, StageReport stage) {
  ApproxResult out;
  double sup = 0.0;
  out.sup_ratio = error_ratio(curve, s, with_z, &sup);
  stage.budget = s.eps_min;
  stage.sup_change = sup;
  stage.residual = verify_legendrian(curve).max_residual_coeff;
  stage.period_norm = period_norm(curve, R);
  double jd = 0.0;
  for (const auto& j : jets) jd = std::max(jd, jet_distance(jet_of_curve(curve, j.p, j.m), j));
  stage.jet_distance = jd;
  if (opt.immersion) {
    std::vector<LaurentPoly> comps;
    for (int k = 0; k < curve.dimension(); ++k) comps.push_back(curve.component(k));
    stage.min_derivative = min_max_derivative(comps, grid_in_compact(R, 60));
  }
  if (!with_z) stage.notes.push_back("target z is not single valued on S; z is not compared");
  out.curve = std::move(curve);
  out.stage = std::move(stage);
  out.points = s.samples.pts;
  out.values = s.values;
  return out;
}

ApproxResult approximate_fixed_z(const CircularDomain& d, const GeneralisedCurve& target, const std::vector<JetSpec>& jets,
                                 const CompactSet& R, const ApproxOptions& opt, const Setup& s) {
  const int n = s.n;
  require(target.paths.empty() && target.regions.size() == 1 && target.has_z,
          "keeping z needs a target given by global components");
  const auto& tc = target.regions.front().comps;
  const LaurentPoly Z = tc[2 * n];
  StageReport stage;
  stage.name = "approximate";
  stage.notes.push_back("z kept; x_1 sprayed multiplicatively");

  std::vector<LaurentPoly> x(n), y(n);
  double tol = s.eps_min / 8.0;
  for (int k = 0; k < 2 * n; ++k) {
    std::vector<Complex> v;
    for (const auto& row : s.values) v.push_back(row[k]);
    auto a = fit_escalating(s.samples.pts, v, component_jets(jets, k, n), s.centers, tol, 8, opt.max_degree);
    (k < n ? x[k] : y[k - n]) = a.f;
  }
  LaurentPoly beta = -differentiate(Z);
  for (int i = 1; i < n; ++i) beta = beta - x[i] * differentiate(y[i]);

  std::vector<Complex> ytargets;
  const Complex y_base = s.values.empty() ? Complex(0.0) : target(s.p0)[n];
  for (auto p : s.zpts) ytargets.push_back(target(p)[n] - y_base);
  auto pm = make_period_map(d, R, n, s.p0, 0.0, s.zpts, std::vector<Complex>(s.zpts.size(), 0.0), opt.seed);
  auto cs = build_corrections(y[0], SprayRole{0, true}, pm, s.kills, {}, s.samples.pts, s.centers, opt.max_degree);
  auto ms = solve_multiplicative(x[0], OneForm{beta}, cs, pm, ytargets);
  LaurentPoly E;
  for (std::size_t j = 0; j < cs.g.size(); ++j) E = E + cs.g[j].scaled(ms.params.zeta[j]);
  for (std::size_t k = 0; k < cs.h.size(); ++k) E = E + cs.h[k].scaled(ms.params.xi[k]);
  std::vector<Complex> grid = grid_in_compact(R, 40);
  grid.insert(grid.end(), s.samples.pts.begin(), s.samples.pts.end());
  const LaurentPoly xt = x[0] * truncated_exp(E, grid);

  std::vector<Complex> dv;
  for (auto q : grid) dv.push_back(beta(q) / xt(q));
  std::vector<JetConstraint> djets;
  for (const auto& j : jets) {
    if (j.m < 1) continue;
    djets.push_back(JetConstraint{j.p, j.m - 1, std::vector<Complex>(j.y[0].begin() + 1, j.y[0].end())});
  }
  auto dy = fit_escalating(grid, dv, djets, s.centers, 1e-12, 16, opt.max_degree);
  const LaurentPoly prim = primitive(OneForm{drop_residues(dy.f)});
  y[0] = prim + LaurentPoly::constant(y_base - prim(s.p0));
  x[0] = xt;

  LegendrianCurve c;
  c.n = n;
  c.x = x;
  c.y = y;
  c.z = Z;
  c.domain = d;
  c.form = ContactForm::standard(n);
  std::ostringstream os;
  os << "multiplicative Newton iterations " << ms.iterations << ", residual " << ms.residual << ", y1' fit error "
     << dy.sup_error;
  stage.notes.push_back(os.str());
  return finish(std::move(c), s, jets, R, opt, true, std::move(stage));
}

}  // namespace

ApproxResult approximate_legendrian(const CircularDomain& d, const AdmissibleSet& S, const GeneralisedCurve& target,
                                    const std::vector<JetSpec>& jets, const CompactSet& R, const ApproxOptions& opt) {
  S.validate();
  const int n = target.n;
  for (const auto& j : jets) {
    require(j.n() == n, "jet dimension differs from the target");
    if (!S.interior(j.p, 1e-9)) {
      std::ostringstream os;
      os << "jet point " << j.p << " is not in the interior of S";
      fail(ErrorKind::PreconditionViolation, os.str());
    }
  }
  Setup s;
  s.n = n;
  s.samples = sample_pieces(S, opt.samples);
  for (auto p : s.samples.pts) {
    if (!R.contains(p, 1e-9)) {
      std::ostringstream os;
      os << "region R does not enclose S (sample " << p << ")";
      fail(ErrorKind::PreconditionViolation, os.str());
    }
  }
  s.eps_min = std::numeric_limits<double>::infinity();
  for (auto p : s.samples.pts) {
    s.values.push_back(target(p));
    s.eps.push_back(opt.eps_at ? opt.eps_at(p) : opt.eps);
    require(s.eps.back() > 0.0, "epsilon must be positive");
    s.eps_min = std::min(s.eps_min, s.eps.back());
  }
  s.centers = d.pole_centers();

  // base point, z targets at the other jet points and one anchor per further component of S
  const auto labels = S.component_labels();
  s.p0 = jets.empty() ? s.samples.pts.front() : jets.front().p;
  s.base_z = !jets.empty() ? jets.front().z[0] : (target.has_z ? target(s.p0)[2 * n] : Complex(0.0));
  std::vector<int> covered;
  auto label_of = [&](Complex p) {
    const int piece = piece_of(S, p);
    return piece < 0 ? -1 : labels[piece];
  };
  covered.push_back(label_of(s.p0));
  for (std::size_t i = 0; i < jets.size(); ++i) {
    s.kills.push_back(JetKill{jets[i].p, jets[i].m});
    s.protect.push_back({jets[i].p, jets[i].m});
    if (i > 0) {
      s.zpts.push_back(jets[i].p);
      s.zvals.push_back(jets[i].z[0]);
    }
    covered.push_back(label_of(jets[i].p));
  }
  if (target.has_z) {
    for (std::size_t i = 0; i < s.samples.pts.size(); ++i) {
      const int l = labels[s.samples.piece[i]];
      if (std::find(covered.begin(), covered.end(), l) != covered.end()) continue;
      covered.push_back(l);
      s.zpts.push_back(s.samples.pts[i]);
      s.zvals.push_back(s.values[i][2 * n]);
    }
  }
  if (opt.keep == 2 * n) return approximate_fixed_z(d, target, jets, R, opt, s);

  std::vector<LaurentPoly> kept;
  if (opt.keep >= 0) {
    require(target.paths.empty() && target.regions.size() == 1, "keeping a component needs global target components");
    kept = target.regions.front().comps;
  }

  StageReport stage;
  stage.name = "approximate";
  std::vector<Complex> crit_used;

  struct Built {
    LegendrianCurve curve;
    double ratio = std::numeric_limits<double>::infinity();
    double fit_err = 0.0;
    int degree = 0;
  };
  auto build = [&](double tol, int max_degree) {
    Built b;
    std::vector<LaurentPoly> x(n), y(n);
    for (int k = 0; k < 2 * n; ++k) {
      LaurentPoly f;
      if (k == opt.keep) {
        f = kept[k];
      } else {
        std::vector<Complex> v;
        for (const auto& row : s.values) v.push_back(row[k]);
        auto a = fit_escalating(s.samples.pts, v, component_jets(jets, k, n), s.centers, tol, 8, max_degree);
        b.fit_err = std::max(b.fit_err, a.sup_error);
        b.degree = std::max(b.degree, a.f.degree());
        f = a.f;
      }
      (k < n ? x[k] : y[k - n]) = f;
    }

    std::optional<Error> last_error;
    for (const auto& role : candidate_roles(n, opt.keep)) {
      try {
        auto xs = x, ys = y;
        LaurentPoly& sprayed = role.x_role ? xs[role.pair] : ys[role.pair];
        LaurentPoly& partner = role.x_role ? ys[role.pair] : xs[role.pair];
        const int partner_index = role.x_role ? n + role.pair : role.pair;
        if (partner_index != opt.keep) partner = make_nonconstant(partner, s.samples.pts, s.protect);
        std::vector<Complex> deriv_kill;
        if (opt.immersion) {
          const LaurentPoly before = sprayed;
          auto fix = immersion_fix(sprayed, partner, R, s.protect, s.eps_min / 4.0);
          sprayed = fix.x1;
          if (fix.delta > 0.0) {
            const LaurentPoly dp = differentiate(partner);
            for (const auto& c : zeros_of_derivative(partner, R)) {
              if (std::abs(differentiate(before)(c.p)) <= 1e-8 * std::max(1.0, std::abs(dp(c.p)) + 1.0)) {
                deriv_kill.push_back(c.p);
              }
            }
          }
          crit_used = deriv_kill;
        }
        auto pm = make_period_map(d, R, n, s.p0, s.base_z, s.zpts, s.zvals, opt.seed);
        if (pm.s() + pm.lambda() > 0) {
          auto cs = build_corrections(partner, role, pm, s.kills, deriv_kill, s.samples.pts, s.centers, opt.max_degree);
          auto sol = solve_affine(xs, ys, cs, pm);
          std::ostringstream os;
          os << "spray " << (role.x_role ? "x" : "y") << role.pair + 1 << ": |DS-I| " << sol.ds_defect << ", |P| "
             << sol.period_residual << ", |Z| " << sol.z_residual << ", correction degree " << cs.report.poly_degree;
          stage.notes.push_back(os.str());
        }
        b.curve = make_legendrian(xs, ys, s.p0, s.base_z, d);
        b.ratio = error_ratio(b.curve, s, target.has_z, nullptr);
        return b;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateDy1) throw;
        stage.notes.push_back(std::string("role skipped: ") + e.what());
        last_error = e;
      }
    }
    throw *last_error;
  };

  LegendrianCurve best;
  double best_ratio = std::numeric_limits<double>::infinity();
  int best_degree = 0;
  double tol = s.eps_min / 8.0;
  double last_fit = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 4; ++attempt, tol /= 16.0) {
    Built b = build(tol, opt.max_degree);
    if (b.ratio < best_ratio) {
      best_ratio = b.ratio;
      best = std::move(b.curve);
      best_degree = b.degree;
    }
    std::ostringstream os;
    os << "attempt " << attempt << ": fit tolerance " << tol << ", fit error " << b.fit_err << ", degree " << b.degree
       << ", error/eps " << best_ratio;
    stage.notes.push_back(os.str());
    if (best_ratio <= 1.0 || b.fit_err >= 0.9 * last_fit) break;
    last_fit = b.fit_err;
  }

  // high degrees lose jet digits far from the origin; retry with lower caps
  auto jets_off = [&](const LegendrianCurve& c) {
    double jd = 0.0;
    for (const auto& j : jets) jd = std::max(jd, jet_distance(jet_of_curve(c, j.p, j.m), j));
    return jd;
  };
  if (best_ratio <= 1.0 && !jets.empty() && jets_off(best) > kJetAccept) {
    for (int cap = best_degree - 2; cap >= 8; cap -= 2) {
      Built b = build(s.eps_min / 8.0, cap);
      const double jd = jets_off(b.curve);
      if (b.ratio <= 1.0 && jd <= kJetAccept) {
        std::ostringstream os;
        os << "degree capped at " << cap << ": jet distance " << jd << ", error/eps " << b.ratio;
        stage.notes.push_back(os.str());
        best = std::move(b.curve);
        break;
      }
    }
  }
  auto out = finish(std::move(best), s, jets, R, opt, target.has_z, std::move(stage));
  out.critical_points = crit_used;
  return out;
}

ApproxResult approximate_legendrian(const ProblemSpec& spec, const CompactSet& R) {
  spec.validate();
  ApproxOptions opt;
  opt.eps = spec.eps;
  if (!spec.eps_profile.empty()) opt.eps_at = [&spec](Complex q) { return spec.eps_profile(q); };
  opt.max_degree = spec.degree_max;
  opt.immersion = spec.flags.immersion;
  opt.keep = spec.keep;
  opt.seed = spec.seed;
  return approximate_legendrian(spec.domain, spec.S, spec.target_curve(), spec.resolved_jets(), R, opt);
}

}  // namespace leglab
