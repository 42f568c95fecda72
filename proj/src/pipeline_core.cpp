#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "leglab/approx.hpp"
#include "leglab/errors.hpp"
#include "leglab/pipeline.hpp"

namespace leglab {

GeneralisedCurve GeneralisedCurve::from_curve(const LegendrianCurve& c, std::string label) {
  GeneralisedCurve g;
  g.n = c.n;
  std::vector<LaurentPoly> comps;
  for (int k = 0; k < c.dimension(); ++k) comps.push_back(c.component(k));
  g.regions.push_back(RegionData{[](Complex) { return true; }, std::move(comps), std::move(label)});
  return g;
}

const RegionData* GeneralisedCurve::region_at(Complex q) const {
  for (const auto& r : regions) {
    if (r.contains(q)) return &r;
  }
  return nullptr;
}

std::vector<Complex> GeneralisedCurve::operator()(Complex q) const {
  for (const auto& p : paths) {
    if (p.arc.distance_to(q) <= 1e-9) return p.value(arc_parameter(p.arc, q));
  }
  const RegionData* r = region_at(q);
  if (r == nullptr) {
    std::ostringstream os;
    os << "no curve data at " << q;
    fail(ErrorKind::PreconditionViolation, os.str());
  }
  std::vector<Complex> out;
  for (const auto& c : r->comps) out.push_back(c(q));
  return out;
}

JetSpec GeneralisedCurve::jet(Complex q, int m) const {
  const RegionData* r = region_at(q);
  if (r == nullptr) {
    std::ostringstream os;
    os << "no region data for a jet at " << q;
    fail(ErrorKind::PreconditionViolation, os.str());
  }
  JetSpec j;
  j.p = q;
  j.m = m;
  for (int i = 0; i < n; ++i) {
    j.x.push_back(jet_at(r->comps[i], q, m));
    j.y.push_back(jet_at(r->comps[n + i], q, m));
  }
  if (has_z) {
    j.z = jet_at(r->comps[2 * n], q, m);
  } else {
    // z(q) = 0, higher derivatives from z' = -sum x_i y_i'
    LaurentPoly dz;
    for (int i = 0; i < n; ++i) dz = dz - r->comps[i] * differentiate(r->comps[n + i]);
    j.z = {0.0};
    if (m >= 1) {
      const auto d = jet_at(dz, q, m - 1);
      j.z.insert(j.z.end(), d.begin(), d.end());
    }
  }
  return j;
}

double arc_parameter(const Arc& arc, Complex q) {
  const double total = arc.length();
  double before = 0.0, best_d = std::numeric_limits<double>::infinity(), best = 0.0;
  for (const auto& piece : arc.pieces()) {
    const double len = piece.length();
    double t = 0.0;
    if (piece.kind == PathPiece::Kind::Segment) {
      const Complex e = piece.b - piece.a;
      const double n2 = std::norm(e);
      t = n2 > 0.0 ? std::clamp(std::real((q - piece.a) * std::conj(e)) / n2, 0.0, 1.0) : 0.0;
    } else {
      const double span = piece.theta1 - piece.theta0;
      double th = std::arg(q - piece.center);
      const double mid = piece.theta0 + 0.5 * span;
      th += 2.0 * std::numbers::pi * std::round((mid - th) / (2.0 * std::numbers::pi));
      t = span != 0.0 ? std::clamp((th - piece.theta0) / span, 0.0, 1.0) : 0.0;
    }
    const double d = std::abs(piece.point(t) - q);
    if (d < best_d) {
      best_d = d;
      best = total > 0.0 ? (before + t * len) / total : 0.0;
    }
    before += len;
  }
  return best;
}

double EpsProfile::operator()(Complex q) const {
  require(!points.empty(), "empty epsilon profile");
  const double r = std::abs(q);
  if (r <= points.front().first) return points.front().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (r <= points[i].first) {
      const auto [r0, e0] = points[i - 1];
      const auto [r1, e1] = points[i];
      return e0 + (e1 - e0) * (r - r0) / (r1 - r0);
    }
  }
  return points.back().second;
}

double EpsProfile::min_on(double r0, double r1) const {
  double m = std::min((*this)(r0), (*this)(r1));
  for (const auto& [r, e] : points) {
    if (r >= r0 && r <= r1) m = std::min(m, e);
  }
  return m;
}

CompactSet ProblemSpec::target_region() const {
  if (region) return *region;
  double r = 0.0;
  Complex c = 0.0;
  if (!S.K.empty()) c = S.K.front().disk.center;
  r = S.extent(c);
  for (const auto& j : jets_out) r = std::max(r, std::abs(j.p - c) + 0.15);
  return CompactSet::in_domain(domain, c, 1.1 * r + 1e-3);
}

GeneralisedCurve ProblemSpec::target_curve() const {
  require(static_cast<int>(target.size()) == 2 * n || static_cast<int>(target.size()) == 2 * n + 1,
          "target needs 2n or 2n+1 components");
  std::vector<LaurentPoly> comps = target;
  bool has_z = comps.size() == static_cast<std::size_t>(2 * n + 1);
  if (!has_z) {
    std::vector<LaurentPoly> x(comps.begin(), comps.begin() + n), y(comps.begin() + n, comps.end());
    Complex p0 = lambda_in.empty() ? Complex(0.0) : lambda_in.front().first;
    if (lambda_in.empty()) {
      const auto pts = sample_set(S, 20.0);
      if (!pts.empty()) p0 = pts.front();
    }
    try {
      comps.push_back(make_legendrian(x, y, p0, 0.0, domain).z);
      has_z = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonexactForm) throw;
      comps.push_back(LaurentPoly());
    }
  }
  GeneralisedCurve g;
  g.n = n;
  g.has_z = has_z;
  g.regions.push_back(RegionData{[](Complex) { return true; }, std::move(comps), "target"});
  return g;
}

std::vector<JetSpec> ProblemSpec::resolved_jets() const {
  std::vector<JetSpec> out;
  const GeneralisedCurve g = target_curve();
  for (const auto& [p, m] : lambda_in) {
    auto it = std::find_if(jets_in.begin(), jets_in.end(), [&](const JetSpec& j) { return std::abs(j.p - p) < 1e-12; });
    if (it != jets_in.end()) {
      out.push_back(*it);
    } else {
      out.push_back(g.jet(p, m));
    }
  }
  for (const auto& j : jets_in) {
    auto it = std::find_if(lambda_in.begin(), lambda_in.end(), [&](const auto& l) { return std::abs(l.first - j.p) < 1e-12; });
    if (it == lambda_in.end()) out.push_back(j);
  }
  return out;
}

void ProblemSpec::validate() const {
  domain.validate();
  require(n >= 1, "n must be positive");
  S.validate();
  require(eps > 0.0 || !eps_profile.empty(), "epsilon must be positive");
  for (const auto& [r, e] : eps_profile.points) require(e > 0.0, "epsilon profile must be positive");
  require(keep >= -1 && keep <= 2 * n, "keep index out of range");
  for (const auto& [p, m] : lambda_in) {
    require(m >= 0, "jet order must be non-negative");
    if (!S.interior(p, 1e-9)) {
      std::ostringstream os;
      os << "Lambda' point " << p << " is not in the interior of S";
      fail(ErrorKind::PreconditionViolation, os.str());
    }
  }
  for (const auto& j : jets_in) {
    require(j.n() == n, "jet dimension differs from n");
    require(S.interior(j.p, 1e-9), "explicit jet point is not in the interior of S");
    if (!j.compatible()) fail(ErrorKind::PreconditionViolation, "Lambda' jet fails the Legendrian compatibility check");
  }
  for (const auto& j : jets_out) {
    require(j.n() == n, "outside jet dimension differs from n");
    require(domain.contains(j.p), "Lambda'' point outside the domain");
    if (S.contains(j.p, 1e-9)) {
      std::ostringstream os;
      os << "Lambda'' point " << j.p << " lies on S";
      fail(ErrorKind::PreconditionViolation, os.str());
    }
    if (!j.compatible()) fail(ErrorKind::PreconditionViolation, "Lambda'' jet fails the Legendrian compatibility check");
  }
  if (flags.injective || flags.immersion) {
    std::vector<JetSpec> all = resolved_jets();
    all.insert(all.end(), jets_out.begin(), jets_out.end());
    if (flags.injective) {
      for (std::size_t a = 0; a < all.size(); ++a) {
        for (std::size_t b = a + 1; b < all.size(); ++b) {
          const auto va = all[a].value(), vb = all[b].value();
          double d = 0.0;
          for (std::size_t k = 0; k < va.size(); ++k) d = std::max(d, std::abs(va[k] - vb[k]));
          if (d <= 1e-12) fail(ErrorKind::PreconditionViolation, "injective flag with colliding jet values");
        }
      }
    }
    if (flags.immersion) {
      for (const auto& j : all) {
        if (j.m < 1) continue;
        if (max_norm(j.first_derivative()) <= 1e-12) {
          fail(ErrorKind::PreconditionViolation, "immersion flag with a vanishing first-derivative jet");
        }
      }
    }
  }
}

bool RunReport::pass() const {
  return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.pass; });
}

const Certificate* RunReport::find(const std::string& name) const {
  for (const auto& c : certificates) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

Certificate upper(std::string name, double value, double bound) {
  return Certificate{std::move(name), value, bound, false, value <= bound};
}

Certificate lower(std::string name, double value, double bound) {
  return Certificate{std::move(name), value, bound, true, value > bound};
}

std::vector<Cycle> all_hole_cycles(const CircularDomain& d, const std::optional<CompactSet>& region) {
  if (region) return hole_cycles(d, *region);
  std::vector<Cycle> out;
  for (const auto& h : d.holes) {
    double gap = std::numeric_limits<double>::infinity();
    if (!d.is_plane) gap = d.outer.radius - std::abs(h.center - d.outer.center) - h.radius;
    for (const auto& o : d.holes) {
      if (&o != &h) gap = std::min(gap, std::abs(o.center - h.center) - o.radius - h.radius);
    }
    out.push_back(Cycle{h.center, h.radius + 0.5 * std::min(gap, h.radius), 1});
  }
  return out;
}

}  // namespace

std::vector<Certificate> verify_curve(const LegendrianCurve& c, const VerifyInput& in) {
  std::vector<Certificate> out;
  out.push_back(upper("legendrian_residual", verify_legendrian(c).max_residual_coeff, kAcceptResidual));
  double jd = 0.0;
  for (const auto& j : in.jets) jd = std::max(jd, jet_distance(jet_of_curve(c, j.p, j.m), j));
  if (!in.jets.empty()) out.push_back(upper("jet_distance", jd, 1e-9));

  OneForm w;
  for (int i = 0; i < c.n; ++i) w.coeff = w.coeff + wedge_d(c.x[i], c.y[i]).coeff;
  double period = 0.0;
  for (const auto& cyc : all_hole_cycles(c.domain, in.region)) period = std::max(period, std::abs(contour_integral(w, cyc)));
  out.push_back(upper("period_norm", period, 1e-9));

  if (!in.points.empty()) {
    double ratio = 0.0;
    const int dims = in.compare_z ? c.dimension() : 2 * c.n;
    for (std::size_t s = 0; s < in.points.size(); ++s) {
      const auto v = c(in.points[s]);
      double e = 0.0;
      for (int k = 0; k < dims; ++k) e = std::max(e, std::abs(v[k] - in.values[s][k]));
      ratio = std::max(ratio, e / in.eps[s]);
    }
    Certificate cert = upper(in.error_name, ratio, 1.0);
    if (in.strict_error) {
      cert.strict = true;
      cert.pass = ratio < 1.0;
    }
    out.push_back(cert);
  }

  std::vector<LaurentPoly> comps;
  for (int k = 0; k < c.dimension(); ++k) comps.push_back(c.component(k));
  if (in.flags.immersion && in.region) {
    out.push_back(lower("min_derivative", min_max_derivative(comps, grid_in_compact(*in.region, 80)), 0.0));
  }
  if (in.flags.injective && in.region) {
    const auto cert = certify_injective(comps, *in.region);
    out.push_back(lower("injectivity_margin", cert.certified ? cert.min_gap : -1.0, 0.0));
  }
  for (const auto& [k, floor, name] : in.boundary_floors) {
    double m = std::numeric_limits<double>::infinity();
    const Cycle outer{k.disk.center, k.disk.radius, 1};
    for (int i = 0; i < 4096; ++i) m = std::min(m, max_norm(c(outer.point(2.0 * std::numbers::pi * i / 4096.0))));
    out.push_back(lower(name, m, floor));
  }
  return out;
}

}  // namespace leglab
