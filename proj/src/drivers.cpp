#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "leglab/approx.hpp"
#include "leglab/errors.hpp"
#include "leglab/pipeline.hpp"

namespace leglab {

namespace {

constexpr int kDerivativeGrid = 120;

std::vector<LaurentPoly> comps_of(const LegendrianCurve& c) {
  std::vector<LaurentPoly> out;
  for (int k = 0; k < c.dimension(); ++k) out.push_back(c.component(k));
  return out;
}

double sup_change(const LegendrianCurve& a, const LegendrianCurve& b, const std::vector<Complex>& pts) {
  double m = 0.0;
  for (auto q : pts) {
    const auto u = a(q), v = b(q);
    for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, std::abs(u[k] - v[k]));
  }
  return m;
}

double boundary_min(const LegendrianCurve& c, const CompactSet& k) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4096; ++i) {
    m = std::min(m, max_norm(c(k.disk.center + k.disk.radius * std::polar(1.0, 2.0 * std::numbers::pi * i / 4096.0))));
  }
  return m;
}

/// Loop K_{j-1} u lambda around a hole between K_{j-1} and K_j: out along one ray, around the
/// far side of the hole on a circle about the common center, back along a second ray.
std::optional<Arc> canonical_arc(const CircularDomain& d, const CompactSet& inner, const CompactSet& outer,
                                 const Disk& hole) {
  const Complex c0 = inner.disk.center;
  const double r0 = inner.disk.radius, r1 = outer.disk.radius;
  const double D = std::abs(hole.center - c0);
  double collar = hole.radius;
  for (const auto& e : outer.excluded) {
    if (std::abs(e.center - hole.center) < 1e-12) collar = std::max(collar, e.radius);
  }
  const double far = D + collar;
  if (far >= r1) return std::nullopt;
  const double rho = far + 0.5 * (r1 - far);
  const double s = std::min(0.95, 1.2 * collar / D);
  const double alpha = std::asin(s);
  const double phi = std::arg(hole.center - c0);
  const Complex a = c0 + std::polar(r0, phi - alpha), a1 = c0 + std::polar(rho, phi - alpha);
  const Complex b1 = c0 + std::polar(rho, phi + alpha), b = c0 + std::polar(r0, phi + alpha);
  Arc arc({PathPiece::segment(a, a1), PathPiece::circular(c0, rho, phi - alpha, phi + alpha), PathPiece::segment(b1, b)});
  for (auto q : arc.sample(256)) {
    if (!d.contains(q, 1e-3) || !outer.contains(q)) return std::nullopt;
    for (const auto& e : outer.excluded) {
      if (e.contains(q)) return std::nullopt;
    }
  }
  return arc;
}

Certificate cert_upper(std::string name, double v, double b) { return Certificate{std::move(name), v, b, false, v <= b}; }
Certificate cert_lower(std::string name, double v, double b) { return Certificate{std::move(name), v, b, true, v > b}; }

}  // namespace

Exhaustion driver_exhaustion(const ProblemSpec& spec, int rounds) {
  const CompactSet R0 = spec.target_region();
  const Complex c = R0.disk.center;
  const CircularDomain& d = spec.domain;
  std::vector<double> radii = spec.radii;
  if (radii.empty()) {
    const double step = std::max(0.5, 0.5 * R0.disk.radius);
    for (int j = 1; j <= rounds; ++j) radii.push_back(R0.disk.radius + j * step);
  }
  Exhaustion ex;
  ex.sets.push_back(R0);
  ex.tags.push_back(StepTag::Retract);
  std::size_t holes = R0.enclosed_holes(d).size();
  double prev = R0.disk.radius;
  for (int j = 0; j < rounds && j < static_cast<int>(radii.size()); ++j) {
    double r = std::max(radii[j], 1.05 * prev);
    for (int pass = 0; pass < 4; ++pass) {
      for (const auto& h : d.holes) {
        const double dist = std::abs(h.center - c);
        if (std::abs(dist - r) <= 1.6 * h.radius) r = dist + 1.7 * h.radius;
      }
    }
    if (!d.is_plane) require(r < d.outer.radius - std::abs(c - d.outer.center), "exhaustion leaves the domain");
    CompactSet k = CompactSet::in_domain(d, c, r, 1.0 / (j + 2));
    const std::size_t h = k.enclosed_holes(d).size();
    ex.tags.push_back(h > holes ? StepTag::ArcAttach : StepTag::Retract);
    ex.sets.push_back(std::move(k));
    holes = h;
    prev = r;
  }
  return ex;
}

ProperSchedule upgrade_proper(const GeneralisedCurve& f, const std::vector<Complex>& samples,
                              const std::vector<double>& radii, bool proper) {
  ProperSchedule s;
  s.radii = radii;
  if (!proper) return s;
  s.active = true;
  require(!samples.empty(), "properness needs samples");
  double rmax = 0.0;
  std::vector<double> norms;
  for (auto q : samples) {
    rmax = std::max(rmax, std::abs(q));
    norms.push_back(max_norm(f(q)));
  }
  double prev = 0.0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double level = static_cast<double>(j + 1);
    double sj = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (norms[i] <= level) sj = std::max(sj, std::abs(samples[i]));
    }
    if (sj >= 0.99 * rmax) {
      std::ostringstream os;
      os << "the sublevel set {||f|| <= " << level << "} reaches the sample horizon " << rmax;
      fail(ErrorKind::NotProperOnData, os.str());
    }
    double r = std::max(radii[j], sj + 0.05 * (1.0 + sj));
    r = std::max(r, 1.05 * prev);
    s.radii[j] = r;
    s.targets.push_back(level);
    prev = r;
  }
  return s;
}

DriverResult run_mergelyan(const ProblemSpec& spec) {
  spec.validate();
  DriverResult out;
  RunReport& rep = out.report;
  const CircularDomain& d = spec.domain;
  const Exhaustion ex = driver_exhaustion(spec, spec.rounds);
  out.sets = ex.sets;
  const double e0 = std::min(1.0, spec.eps);
  const std::vector<JetSpec> inner_jets = spec.resolved_jets();
  std::vector<JetSpec> all_jets = inner_jets;
  all_jets.insert(all_jets.end(), spec.jets_out.begin(), spec.jets_out.end());
  const GeneralisedCurve target = spec.target_curve();
  std::vector<double> floors(ex.sets.size(), 0.0);
  for (std::size_t j = 1; j < floors.size(); ++j) floors[j] = static_cast<double>(j);

  auto options = [&](double eps) {
    ApproxOptions o;
    o.eps = eps;
    o.max_degree = spec.degree_max;
    o.immersion = spec.flags.immersion;
    o.keep = spec.keep;
    o.seed = spec.seed;
    return o;
  };

  // round 0: the target on S plus the outside jets lying in K_0
  const CompactSet& K0 = ex.sets[0];
  std::vector<JetSpec> phi0;
  for (const auto& j : spec.jets_out) {
    if (K0.interior(j.p, 1e-9)) phi0.push_back(j);
  }
  const Extension ext0 = extend_with_outside_jets(d, spec.S, target, phi0, spec.seed);
  std::vector<JetSpec> jets = inner_jets;
  jets.insert(jets.end(), phi0.begin(), phi0.end());
  const double eps_round0 = e0 / 2.0;
  const double approx_share = spec.flags.injective ? 0.5 : 1.0;
  ApproxResult r0 = approximate_legendrian(d, ext0.S, ext0.curve, jets, K0, options(eps_round0 * approx_share));
  if (r0.sup_ratio > 1.0) {
    std::ostringstream os;
    os << "round 0 misses its budget: error/eps = " << r0.sup_ratio;
    fail(ErrorKind::ToleranceNotReached, os.str());
  }
  LegendrianCurve f = r0.curve;
  StageReport st0 = r0.stage;
  st0.name = "round 0";
  st0.budget = eps_round0;
  for (const auto& l : ext0.log) st0.notes.push_back(l);
  double delta = std::numeric_limits<double>::infinity();
  if (spec.flags.injective) {
    auto emb = embedding_search_report(f, K0, jets, eps_round0 / 2.0, spec.seed);
    if (!emb.certified) fail(ErrorKind::SearchExhausted, emb.diagnostics());
    f = emb.curve;
    delta = emb.certificate.min_gap / 3.0;
    st0.injectivity_margin = emb.certificate.min_gap;
  }
  double nu = min_max_derivative(comps_of(f), grid_in_compact(K0, kDerivativeGrid));
  st0.min_derivative = nu;
  st0.boundary_norm = boundary_min(f, K0);
  rep.stages.push_back(st0);
  out.rounds.push_back(f);

  std::vector<double> changes;  // changes[j-1]: sup change of round j on K_{j-1}
  std::vector<double> budgets{eps_round0};
  std::vector<double> nus{nu};
  for (std::size_t j = 1; j < ex.sets.size(); ++j) {
    const CompactSet& Kp = ex.sets[j - 1];
    const CompactSet& Kj = ex.sets[j];
    double eps_j = e0 / std::pow(2.0, static_cast<double>(j + 1));
    StageReport st;
    st.name = "round " + std::to_string(j) + (ex.tags[j] == StepTag::ArcAttach ? " (arc attach)" : " (retract)");
    if (spec.flags.immersion) {
      const double cap = nu / std::pow(2.0, static_cast<double>(j));
      if (cap < eps_j) st.notes.push_back("budget capped by the immersion margin");
      eps_j = std::min(eps_j, cap);
    }
    if (spec.flags.injective) {
      if (delta < eps_j) st.notes.push_back("budget capped by the injectivity margin");
      eps_j = std::min(eps_j, delta);
    }
    if (eps_j < 1e-14) {
      std::ostringstream os;
      os << "round " << j << " budget collapsed to " << eps_j;
      fail(ErrorKind::BudgetCollapse, os.str());
    }
    st.budget = eps_j;

    AdmissibleSet Sj;
    Sj.K.push_back(Kp);
    if (ex.tags[j] == StepTag::ArcAttach) {
      const auto before = Kp.enclosed_holes(d);
      for (std::size_t h : Kj.enclosed_holes(d)) {
        if (std::find(before.begin(), before.end(), h) != before.end()) continue;
        if (auto lambda = canonical_arc(d, Kp, Kj, d.holes[h])) {
          Sj.gamma.push_back(*lambda);
          st.notes.push_back("canonical arc around hole " + std::to_string(h));
        } else {
          st.notes.push_back("no canonical arc fits around hole " + std::to_string(h));
        }
      }
    }
    std::vector<JetSpec> phi;
    for (const auto& jt : spec.jets_out) {
      if (Kj.interior(jt.p, 1e-9) && !Kp.interior(jt.p, 1e-9)) phi.push_back(jt);
    }
    const Extension ext = extend_with_outside_jets(d, Sj, GeneralisedCurve::from_curve(f), phi, spec.seed + j);
    for (const auto& l : ext.log) st.notes.push_back(l);
    jets.insert(jets.end(), phi.begin(), phi.end());

    const double share = spec.flags.proper || spec.flags.injective ? 0.25 : 0.5;
    ApproxResult r = approximate_legendrian(d, ext.S, ext.curve, jets, Kj, options(eps_j * share));
    for (const auto& l : r.stage.notes) st.notes.push_back(l);
    LegendrianCurve g = r.curve;
    if (spec.flags.injective) {
      auto emb = embedding_search_report(g, Kj, jets, eps_j * 0.25, spec.seed + j);
      if (!emb.certified) fail(ErrorKind::SearchExhausted, emb.diagnostics());
      g = emb.curve;
      delta = emb.certificate.min_gap / 3.0;
      st.injectivity_margin = emb.certificate.min_gap;
    }
    if (spec.flags.proper) {
      auto push = push_boundary(g, Kp, Kj, floors[j - 1], floors[j] - floors[j - 1], jets, eps_j * 0.25, spec.seed + j);
      for (const auto& l : push.log) st.notes.push_back(l);
      g = push.curve;
    }
    const auto check = grid_in_compact(Kp, 60);
    st.sup_change = sup_change(f, g, check);
    if (st.sup_change > eps_j) {
      std::ostringstream os;
      os << "round " << j << " changes the curve by " << st.sup_change << " on K_" << j - 1 << ", budget " << eps_j;
      fail(ErrorKind::ToleranceNotReached, os.str());
    }
    f = g;
    st.residual = verify_legendrian(f).max_residual_coeff;
    st.period_norm = r.stage.period_norm;
    double jd = 0.0;
    for (const auto& jt : jets) jd = std::max(jd, jet_distance(jet_of_curve(f, jt.p, jt.m), jt));
    st.jet_distance = jd;
    nu = min_max_derivative(comps_of(f), grid_in_compact(Kj, kDerivativeGrid));
    st.min_derivative = nu;
    st.boundary_norm = boundary_min(f, Kj);
    rep.stages.push_back(st);
    out.rounds.push_back(f);
    changes.push_back(st.sup_change);
    budgets.push_back(eps_j);
    nus.push_back(nu);
  }
  out.curve = f;

  // final re-verification from the curve alone
  const CompactSet& last = ex.sets.back();
  VerifyInput vin;
  vin.jets = jets;
  vin.region = last;
  vin.flags = spec.flags;
  vin.compare_z = target.has_z;
  for (auto q : sample_set(spec.S, std::max(50.0, 400.0 / std::max(1e-9, [&] {
                                        double m = 0.0;
                                        for (const auto& k : spec.S.K) m += k.area();
                                        for (const auto& a : spec.S.gamma) m += a.length();
                                        return m;
                                      }())))) {
    vin.points.push_back(q);
    vin.values.push_back(target(q));
    vin.eps.push_back(spec.eps);
  }
  if (spec.flags.proper) {
    for (std::size_t j = 1; j < ex.sets.size(); ++j) vin.boundary_floors.push_back({ex.sets[j], floors[j], "boundary_norm_K" + std::to_string(j)});
  }
  rep.certificates = verify_curve(f, vin);
  out.verify = vin;
  // budget telescoping: sum_{k>j} change_k <= sum_{k>j} eps_k < eps_j
  double worst = 0.0;
  for (std::size_t j = 0; j < budgets.size(); ++j) {
    double tail = 0.0;
    for (std::size_t k = j; k < changes.size(); ++k) tail += changes[k];
    worst = std::max(worst, tail / budgets[j]);
  }
  rep.certificates.push_back(cert_upper("budget_telescoping", worst, 1.0));
  if (spec.flags.immersion) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < nus.size(); ++k) sum += std::pow(2.0, -static_cast<double>(k + 1) - 1.0);
    rep.certificates.push_back(cert_lower("immersion_telescoped", nus.back() * (1.0 - sum), 0.0));
    // the final curve against every round's bound nu_j (1 - sum)
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nus.size(); ++j) {
      const double m = min_max_derivative(comps_of(f), grid_in_compact(ex.sets[j], kDerivativeGrid));
      slack = std::min(slack, m - nus[j] * (1.0 - sum));
    }
    rep.certificates.push_back(cert_lower("immersion_final_vs_bound", slack, 0.0));
  }
  for (std::size_t j = 0; j < ex.sets.size(); ++j) {
    std::ostringstream os;
    os << "K_" << j << ": radius " << ex.sets[j].disk.radius << (ex.tags[j] == StepTag::ArcAttach ? " arc-attach" : "");
    rep.log.push_back(os.str());
  }
  return out;
}

namespace {

/// Sub-arc of a polyline between normalised arclengths s0 < s1.
Arc sub_arc(const Arc& arc, double s0, double s1) {
  require(arc.is_polyline(), "Carleman arcs must be polylines");
  std::vector<Complex> verts{arc.at(s0)};
  const auto vs = arc.vertices();
  double acc = 0.0;
  const double total = arc.length();
  for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
    acc += std::abs(vs[i] - vs[i - 1]);
    const double s = acc / total;
    if (s > s0 + 1e-12 && s < s1 - 1e-12) verts.push_back(vs[i]);
  }
  verts.push_back(arc.at(s1));
  return Arc::polyline(verts);
}

/// Normalised arclengths where the arc crosses the circle |q - c| = r.
std::vector<double> crossings(const Arc& arc, Complex c, double r) {
  std::vector<double> out;
  const int N = 4096;
  double prev = std::abs(arc.at(0.0) - c) - r;
  for (int i = 1; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    const double v = std::abs(arc.at(s) - c) - r;
    if ((prev < 0.0) != (v < 0.0)) {
      double lo = static_cast<double>(i - 1) / N, hi = s;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((std::abs(arc.at(mid) - c) - r < 0.0) == (prev < 0.0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev = v;
  }
  return out;
}

struct Interval {
  std::size_t arc;
  double s0, s1;
};

/// Pieces of the arcs of S inside the annulus r0 <= |q| <= r1.
std::vector<Interval> arc_pieces(const std::vector<Arc>& arcs, Complex c, double r0, double r1) {
  std::vector<Interval> out;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    std::vector<double> cuts{0.0, 1.0};
    for (double r : {r0, r1}) {
      if (r <= 0.0) continue;
      for (double s : crossings(arcs[a], c, r)) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] - cuts[i] < 1e-12) continue;
      const double rm = std::abs(arcs[a].at(0.5 * (cuts[i] + cuts[i + 1])) - c);
      if (rm >= r0 && rm <= r1) out.push_back({a, cuts[i], cuts[i + 1]});
    }
  }
  return out;
}

std::vector<std::vector<Complex>> t_jets(const GeneralisedCurve& g, Complex p, Complex gamma, int order) {
  const JetSpec j = g.jet(p, order);
  std::vector<std::vector<Complex>> out(order + 1);
  Complex gk = 1.0;
  for (int k = 0; k <= order; ++k, gk *= gamma) {
    for (int i = 0; i < j.n(); ++i) out[k].push_back(j.x[i][k] * gk);
    for (int i = 0; i < j.n(); ++i) out[k].push_back(j.y[i][k] * gk);
    out[k].push_back(j.z[k] * gk);
  }
  return out;
}

JetSpec jet_from_rows(const std::vector<std::vector<Complex>>& rows, int n, Complex p) {
  JetSpec j;
  j.p = p;
  j.m = static_cast<int>(rows.size()) - 1;
  j.x.assign(n, {});
  j.y.assign(n, {});
  for (const auto& row : rows) {
    for (int i = 0; i < n; ++i) {
      j.x[i].push_back(row[i]);
      j.y[i].push_back(row[n + i]);
    }
    j.z.push_back(row[2 * n]);
  }
  return j;
}

}  // namespace

DriverResult run_carleman(const ProblemSpec& spec) {
  require(spec.domain.is_plane, "the Carleman driver runs on the plane");
  spec.validate();
  DriverResult out;
  RunReport& rep = out.report;
  const CircularDomain& d = spec.domain;
  const int n = spec.n;
  const GeneralisedCurve f = spec.target_curve();
  require(f.has_z, "the Carleman target needs a single-valued z");
  const Complex c0 = 0.0;
  auto eps_fn = [&](Complex q) { return spec.eps_at(q); };
  std::vector<double> radii = spec.radii;
  if (radii.empty()) {
    for (int j = 1; j <= spec.rounds; ++j) radii.push_back(j);
  }
  require(static_cast<int>(radii.size()) >= spec.rounds, "Carleman needs one radius per round");
  const auto all_samples = sample_set(spec.S, 64.0);
  const ProperSchedule sched = upgrade_proper(f, all_samples, radii, spec.flags.proper);
  radii = sched.radii;
  for (double r : radii) rep.log.push_back("K radius " + std::to_string(r));
  // transversality of the arcs to every bK_j
  for (const auto& arc : spec.S.gamma) {
    require(arc.is_polyline(), "Carleman arcs must be polylines");
    for (double r : radii) {
      for (double s : crossings(arc, c0, r)) {
        const Complex t = arc.derivative_at(s), q = arc.at(s);
        const double cosang = std::abs(std::real(t * std::conj(q - c0))) / (std::abs(t) * std::abs(q - c0));
        if (cosang < std::sin(5.0 * std::numbers::pi / 180.0)) {
          fail(ErrorKind::PreconditionViolation, "an arc of S is tangent to some bK_j");
        }
      }
    }
  }
  for (const auto& k : spec.S.K) {
    for (double r : radii) {
      const double dist = std::abs(k.disk.center - c0);
      if (dist - k.disk.radius < r && dist + k.disk.radius > r) {
        fail(ErrorKind::PreconditionViolation, "a compact piece of S meets some bK_j");
      }
    }
  }
  std::vector<double> ext = radii;
  ext.push_back(radii.back() + (radii.size() > 1 ? radii.back() - radii[radii.size() - 2] : radii.back()));

  GeneralisedCurve fj = f;  // f_{j-1}
  std::optional<LegendrianCurve> F;
  const auto jets_all = spec.resolved_jets();
  for (int j = 1; j <= spec.rounds; ++j) {
    const double rp = j > 1 ? ext[j - 2] : 0.0, rj = ext[j - 1], rn = ext[j];
    StageReport st;
    st.name = "round " + std::to_string(j);
    const double eps_j = std::pow(2.0, -j) * (spec.eps_profile.empty() ? spec.eps : spec.eps_profile.min_on(0.0, rn));
    st.budget = eps_j;
    const CompactSet Kj = CompactSet::in_domain(d, c0, rj);

    AdmissibleSet Sj;
    if (j > 1) Sj.K.push_back(CompactSet::in_domain(d, c0, rp));
    for (const auto& k : spec.S.K) {
      const double dist = std::abs(k.disk.center - c0);
      if (dist + k.disk.radius < rj && dist - k.disk.radius > rp) Sj.K.push_back(k);
    }
    for (const auto& iv : arc_pieces(spec.S.gamma, c0, rp, rj)) Sj.gamma.push_back(sub_arc(spec.S.gamma[iv.arc], iv.s0, iv.s1));
    std::vector<JetSpec> jets;
    for (const auto& jt : jets_all) {
      if (Sj.interior(jt.p, 1e-9)) jets.push_back(jt);
    }
    ApproxOptions opt;
    opt.eps = eps_j / 2.0;
    opt.max_degree = spec.degree_max;
    opt.seed = spec.seed + j;
    opt.immersion = spec.flags.immersion;
    ApproxResult r = approximate_legendrian(d, Sj, fj, jets, Kj, opt);
    for (const auto& l : r.stage.notes) st.notes.push_back(l);
    st.sup_change = r.stage.sup_change;
    LegendrianCurve Fj = r.curve;
    if (spec.flags.proper) {
      const CompactSet R1 = CompactSet::in_domain(d, c0, j > 1 ? rp : rj / 1.25);
      auto push = push_boundary(Fj, R1, Kj, sched.targets[j - 1] - 1.0, 1.0, jets, eps_j / 2.0, spec.seed + j);
      for (const auto& l : push.log) st.notes.push_back(l);
      Fj = push.curve;
    }
    if (r.sup_ratio > 1.0) {
      std::ostringstream os;
      os << "round " << j << " approximation error/eps = " << r.sup_ratio;
      st.notes.push_back(os.str());
    }

    // junction arcs from bK_j to bK_{j+1}, glued to f beyond
    GeneralisedCurve next;
    next.n = n;
    const GeneralisedCurve Fg = GeneralisedCurve::from_curve(Fj, "F_" + std::to_string(j));
    double mismatch = 0.0;
    for (const auto& iv : arc_pieces(spec.S.gamma, c0, rj, rn)) {
      const Arc& whole = spec.S.gamma[iv.arc];
      Arc J = sub_arc(whole, iv.s0, iv.s1);
      // orient from bK_j outwards
      if (std::abs(std::abs(J.start() - c0) - rj) > std::abs(std::abs(J.end() - c0) - rj)) J = J.reversed();
      const Complex p = J.start(), q = J.end();
      const bool reaches = std::abs(std::abs(q - c0) - rn) < 1e-9;
      const Complex g0 = J.derivative_at(0.0), g1 = J.derivative_at(1.0);
      const JetSpec ja = jet_from_rows(t_jets(Fg, p, g0, 1), n, p);
      const JetSpec jb = jet_from_rows(t_jets(f, q, g1, 1), n, q);
      ReferencePath ref = [f, J](double t, int order) { return t_jets(f, J.at(t), J.derivative_at(t), order); };
      LegendrianPath path = connect_legendrian(ja, reaches ? jb : jet_from_rows(ref(1.0, 1), n, q), 0.0, {}, ref);
      // 1-jet reconstruction at both ends
      const auto v0 = path.value(0.0), d0 = path.derivative(0.0), v1 = path.value(1.0), d1 = path.derivative(1.0);
      const auto b0 = ja.value(), b1 = jb.value();
      const auto e0 = ja.first_derivative(), e1 = jb.first_derivative();
      for (int k = 0; k < 2 * n + 1; ++k) {
        mismatch = std::max({mismatch, std::abs(v0[k] - b0[k]) / std::max(1.0, std::abs(b0[k])),
                             std::abs(d0[k] - e0[k]) / std::max(1.0, std::abs(e0[k]))});
        if (reaches) {
          mismatch = std::max({mismatch, std::abs(v1[k] - b1[k]) / std::max(1.0, std::abs(b1[k])),
                               std::abs(d1[k] - e1[k]) / std::max(1.0, std::abs(e1[k]))});
        }
      }
      next.paths.push_back(PathData{J, path.value, "junction " + std::to_string(j)});
      std::ostringstream os;
      os << "junction from " << p << " to " << q << ": bump amplitude " << path.amplitude;
      st.notes.push_back(os.str());
    }
    if (mismatch > 1e-8) {
      std::ostringstream os;
      os << "junction 1-jet mismatch " << mismatch << " in round " << j;
      fail(ErrorKind::JunctionMismatch, os.str());
    }
    next.regions.push_back(RegionData{[c0, rj](Complex q) { return std::abs(q - c0) <= rj + 1e-12; }, comps_of(Fj),
                                      "F_" + std::to_string(j)});
    next.regions.push_back(f.regions.front());
    next.regions.back().contains = [](Complex) { return true; };

    // regluing identity: f_j = f on S \ K_{j+1}, bitwise
    bool identical = true;
    int checked = 0;
    for (auto q : all_samples) {
      if (std::abs(q - c0) <= rn + 1e-9) continue;
      ++checked;
      if (next(q) != f(q)) identical = false;
    }
    rep.certificates.push_back(cert_lower("regluing_identity_" + std::to_string(j), identical ? 1.0 : 0.0, 0.5));
    st.notes.push_back("regluing identity checked on " + std::to_string(checked) + " samples");
    st.residual = verify_legendrian(Fj).max_residual_coeff;
    st.period_norm = r.stage.period_norm;
    st.jet_distance = r.stage.jet_distance;
    st.boundary_norm = boundary_min(Fj, Kj);
    rep.stages.push_back(st);
    out.rounds.push_back(Fj);
    out.sets.push_back(Kj);
    out.glued.push_back(next);
    fj = std::move(next);
    F = Fj;
  }
  out.curve = *F;

  VerifyInput vin;
  vin.jets = jets_all;
  vin.region = out.sets.back();
  const double rl = out.sets.back().disk.radius;
  for (auto q : all_samples) {
    if (std::abs(q - c0) > rl) continue;
    vin.points.push_back(q);
    vin.values.push_back(f(q));
    vin.eps.push_back(eps_fn(q));
  }
  if (spec.flags.proper) {
    for (std::size_t j = 0; j < out.sets.size(); ++j) vin.boundary_floors.push_back({out.sets[j], sched.targets[j], "boundary_norm_K" + std::to_string(j + 1)});
  }
  vin.error_name = "carleman_estimate";
  vin.strict_error = true;
  auto certs = verify_curve(out.curve, vin);
  out.verify = vin;
  rep.certificates.insert(rep.certificates.end(), certs.begin(), certs.end());
  return out;
}

DriverResult run_approximate(const ProblemSpec& spec) {
  spec.validate();
  DriverResult out;
  const CompactSet R = spec.target_region();
  ApproxResult r = approximate_legendrian(spec, R);
  out.curve = r.curve;
  out.rounds.push_back(r.curve);
  out.sets.push_back(R);
  out.report.stages.push_back(r.stage);
  VerifyInput vin;
  vin.jets = spec.resolved_jets();
  vin.region = R;
  vin.points = r.points;
  vin.values = r.values;
  for (auto q : r.points) vin.eps.push_back(spec.eps_at(q));
  vin.compare_z = spec.target_curve().has_z;
  vin.flags = spec.flags;
  vin.flags.proper = false;
  out.report.certificates = verify_curve(r.curve, vin);
  out.verify = vin;
  return out;
}

DriverResult run_extend(const ProblemSpec& spec) {
  spec.validate();
  DriverResult out;
  const CompactSet R = spec.target_region();
  const Extension ext = extend_with_outside_jets(spec.domain, spec.S, spec.target_curve(), spec.jets_out, spec.seed);
  std::vector<JetSpec> jets = spec.resolved_jets();
  jets.insert(jets.end(), spec.jets_out.begin(), spec.jets_out.end());
  ApproxOptions opt;
  opt.eps = spec.eps;
  opt.max_degree = spec.degree_max;
  opt.immersion = spec.flags.immersion;
  opt.seed = spec.seed;
  ApproxResult r = approximate_legendrian(spec.domain, ext.S, ext.curve, jets, R, opt);
  out.curve = r.curve;
  out.rounds.push_back(r.curve);
  out.sets.push_back(R);
  StageReport st = r.stage;
  st.name = "extend + approximate";
  for (const auto& l : ext.log) st.notes.push_back(l);
  out.report.stages.push_back(st);
  out.glued.push_back(ext.curve);
  VerifyInput vin;
  vin.jets = jets;
  vin.region = R;
  vin.points = r.points;
  vin.values = r.values;
  vin.eps.assign(r.points.size(), spec.eps);
  vin.compare_z = ext.curve.has_z;
  vin.flags = spec.flags;
  vin.flags.proper = false;
  out.report.certificates = verify_curve(r.curve, vin);
  out.verify = vin;
  return out;
}

DriverResult run_push(const ProblemSpec& spec) {
  spec.validate();
  require(spec.outer.has_value(), "push needs an outer set R2");
  const GeneralisedCurve g = spec.target_curve();
  require(g.has_z, "push needs a single-valued target");
  LegendrianCurve f;
  f.n = spec.n;
  for (int i = 0; i < spec.n; ++i) {
    f.x.push_back(g.regions.front().comps[i]);
    f.y.push_back(g.regions.front().comps[spec.n + i]);
  }
  f.z = g.regions.front().comps[2 * spec.n];
  f.domain = spec.domain;
  f.form = ContactForm::standard(spec.n);
  f.align_centers();
  const CompactSet R1 = spec.target_region();
  const auto jets = spec.resolved_jets();
  auto push = push_boundary(f, R1, *spec.outer, spec.rho, spec.C, jets, spec.eps, spec.seed);
  DriverResult out;
  out.curve = push.curve;
  out.rounds.push_back(push.curve);
  out.sets = {R1, *spec.outer};
  StageReport st;
  st.name = "push";
  st.budget = spec.eps;
  st.sup_change = push.sup_change;
  st.boundary_norm = push.min_outer;
  st.notes = push.log;
  st.residual = verify_legendrian(push.curve).max_residual_coeff;
  out.report.stages.push_back(st);
  VerifyInput vin;
  vin.jets = jets;
  vin.region = *spec.outer;
  vin.boundary_floors.push_back({*spec.outer, spec.rho + spec.C, "boundary_norm_R2"});
  out.report.certificates = verify_curve(push.curve, vin);
  out.verify = vin;
  out.report.certificates.push_back(cert_lower("annulus_norm", push.min_annulus, spec.rho));
  out.report.certificates.push_back(cert_upper("sup_change_on_R1", push.sup_change, spec.eps));
  return out;
}

bool is_pipeline(const std::string& name) {
  return name == "approximate" || name == "extend" || name == "push" || name == "mergelyan" || name == "carleman";
}

DriverResult run_pipeline(const std::string& name, const ProblemSpec& spec) {
  if (name == "approximate") return run_approximate(spec);
  if (name == "extend") return run_extend(spec);
  if (name == "push") return run_push(spec);
  if (name == "mergelyan") return run_mergelyan(spec);
  if (name == "carleman") return run_carleman(spec);
  fail(ErrorKind::PreconditionViolation, "unknown pipeline '" + name + "'");
}

}  // namespace leglab
