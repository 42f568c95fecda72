#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "leglab/errors.hpp"
#include "leglab/pipeline.hpp"

namespace leglab {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Polynomial in t with the given derivatives at t = 0 and t = 1.
LaurentPoly hermite(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size()), N = na + nb;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  Eigen::VectorXcd r(N);
  for (int i = 0; i < na; ++i) {
    M(i, i) = factorial(i);
    r(i) = a[i];
  }
  for (int j = 0; j < nb; ++j) {
    for (int k = j; k < N; ++k) M(na + j, k) = factorial(k) / factorial(k - j);
    r(na + j) = b[j];
  }
  const Eigen::VectorXcd c = M.fullPivLu().solve(r);
  return LaurentPoly::from_dense({}, std::vector<Complex>(c.data(), c.data() + N), {});
}

LaurentPoly taylor(const std::vector<Complex>& d, Complex p) {
  LaurentPoly out, power = LaurentPoly::constant(1.0);
  const LaurentPoly lin = LaurentPoly::monomial(1) - LaurentPoly::constant(p);
  for (std::size_t k = 0; k < d.size(); ++k) {
    out = out + power.scaled(d[k] / factorial(static_cast<int>(k)));
    power = power * lin;
  }
  return out;
}

/// zeta-derivatives along a straight arc end become t-derivatives: f_t^(k) = f^(k) g^k.
std::vector<Complex> to_t(const std::vector<Complex>& d, Complex g) {
  std::vector<Complex> out(d.size());
  Complex gk = 1.0;
  for (std::size_t k = 0; k < d.size(); ++k, gk *= g) out[k] = d[k] * gk;
  return out;
}

Complex definite(const LaurentPoly& integrand) {
  const LaurentPoly P = primitive(OneForm{integrand});
  return P(1.0) - P(0.0);
}

bool segment_clear(const CircularDomain& d, Complex u, Complex v, const std::vector<AvoidItem>& avoid, double margin) {
  for (int i = 1; i < 64; ++i) {
    const Complex q = u + (v - u) * (i / 64.0);
    if (!d.contains(q, margin)) return false;
    for (const auto& item : avoid) {
      if (distance_to_item(item, q) < margin) return false;
    }
  }
  return true;
}

}  // namespace

Extension extend_with_outside_jets(const CircularDomain& d, const AdmissibleSet& S, const GeneralisedCurve& f,
                                   const std::vector<JetSpec>& phi, std::uint64_t seed) {
  Extension out;
  out.S = S;
  out.curve = f;
  if (phi.empty()) return out;
  require(!S.K.empty(), "outside jets attach to a compact piece of S");
  const int n = f.n;
  std::vector<RegionData> new_regions;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const JetSpec& ph = phi[i];
    require(ph.n() == n, "outside jet dimension differs from the curve");
    require(ph.compatible(), "outside jet fails the Legendrian compatibility check");
    require(d.contains(ph.p), "outside jet point lies outside the domain");
    if (S.contains(ph.p, 1e-9)) fail(ErrorKind::PreconditionViolation, "outside jet point lies on S");
    const Complex p = ph.p;

    std::size_t kbest = 0;
    for (std::size_t k = 1; k < S.K.size(); ++k) {
      if (S.K[k].distance_to(p) < S.K[kbest].distance_to(p)) kbest = k;
    }
    const CompactSet& K = S.K[kbest];
    require(std::abs(p - K.disk.center) > K.disk.radius, "outside jet point lies in a hole of a compact piece");
    const Complex dir = (p - K.disk.center) / std::abs(p - K.disk.center);
    const Complex u = K.disk.center + K.disk.radius * dir;
    const double dist = std::abs(p - u);
    double r = std::min(0.25 * dist, 0.1);
    for (const auto& o : phi) {
      if (&o != &ph) r = std::min(r, 0.25 * std::abs(o.p - p));
    }
    for (const auto& a : out.S.gamma) r = std::min(r, 0.5 * a.distance_to(p));
    for (const auto& h : d.holes) r = std::min(r, 0.5 * (std::abs(h.center - p) - h.radius));
    if (!d.is_plane) r = std::min(r, 0.5 * (d.outer.radius - std::abs(d.outer.center - p)));
    require(r > 1e-6, "no room for a disk around the outside jet point");
    const Complex v = p + r * (u - p) / std::abs(u - p);

    // disk components from the jet polynomial, z by integration from p
    std::vector<LaurentPoly> dc;
    for (int k = 0; k < n; ++k) dc.push_back(taylor(ph.x[k], p));
    for (int k = 0; k < n; ++k) dc.push_back(taylor(ph.y[k], p));
    LaurentPoly form;
    for (int k = 0; k < n; ++k) form = form + dc[k] * differentiate(dc[n + k]);
    const LaurentPoly prim = primitive(OneForm{form});
    dc.push_back(LaurentPoly::constant(ph.z[0] + prim(p)) - prim);
    const Disk omega{p, r};

    std::vector<AvoidItem> avoid;
    for (std::size_t k = 0; k < S.K.size(); ++k) {
      if (k != kbest) avoid.push_back(S.K[k]);
    }
    for (const auto& a : out.S.gamma) avoid.push_back(a);
    for (const auto& o : out.disks) avoid.push_back(o);
    for (const auto& o : phi) {
      if (&o != &ph) avoid.push_back(Disk{o.p, 1e-3});
    }

    bool placed = false;
    for (int attempt = 0; attempt < 4 && !placed; ++attempt) {
      Arc arc;
      if (attempt == 0 && segment_clear(d, u, v, avoid, 1e-3)) {
        arc = Arc::segment(u, v);
      } else {
        const double nu = 0.1 * dist;
        const Complex u1 = u + nu * dir, v1 = v + nu * (u - p) / std::abs(u - p);
        std::vector<AvoidItem> av = avoid;
        av.push_back(K);
        av.push_back(omega);
        Arc mid = build_arc(d, u1, v1, av, seed + 7919 * (i + 1) + attempt, 1e-3);
        std::vector<Complex> verts{u};
        for (auto q : mid.vertices()) verts.push_back(q);
        verts.push_back(v);
        arc = Arc::polyline(verts);
      }
      const Complex g0 = arc.derivative_at(0.0), g1 = arc.derivative_at(1.0);
      const JetSpec ja = f.jet(u, 2);
      std::vector<LaurentPoly> X(n), Y(n);
      for (int k = 0; k < n; ++k) {
        X[k] = hermite(to_t(ja.x[k], g0), to_t(jet_at(dc[k], v, 2), g1));
        Y[k] = hermite(to_t(ja.y[k], g0), to_t(jet_at(dc[n + k], v, 2), g1));
      }
      const LaurentPoly t = LaurentPoly::monomial(1), one = LaurentPoly::constant(1.0);
      const LaurentPoly bump = t * t * t * (one - t) * (one - t) * (one - t);
      LaurentPoly w;
      for (int k = 0; k < n; ++k) w = w + X[k] * differentiate(Y[k]);
      const Complex I0 = definite(w);
      const Complex zA = ja.z[0], zB = dc[2 * n](v);
      // condition: zA - int (x dy) = zB, affine in the bump amplitude
      Complex I1 = definite(bump * differentiate(Y[0]));
      bool on_x = true;
      if (std::abs(I1) < 1e-10) {
        I1 = definite(X[0] * differentiate(bump));
        on_x = false;
      }
      if (std::abs(I1) < 1e-10) {
        std::ostringstream os;
        os << "arc integral derivative " << std::abs(I1) << " for outside point " << p << ", rerouting";
        out.log.push_back(os.str());
        continue;
      }
      const Complex a = (zA - zB - I0) / I1;
      (on_x ? X[0] : Y[0]) = (on_x ? X[0] : Y[0]) + bump.scaled(a);
      LaurentPoly ww;
      for (int k = 0; k < n; ++k) ww = ww + X[k] * differentiate(Y[k]);
      const LaurentPoly P = primitive(OneForm{ww});
      const LaurentPoly Z = LaurentPoly::constant(zA + P(0.0)) - P;
      std::vector<LaurentPoly> comps = X;
      comps.insert(comps.end(), Y.begin(), Y.end());
      comps.push_back(Z);
      out.curve.paths.push_back(PathData{arc,
                                         [comps](double s) {
                                           std::vector<Complex> vals;
                                           for (const auto& c : comps) vals.push_back(c(s));
                                           return vals;
                                         },
                                         "outside arc " + std::to_string(i)});
      std::ostringstream os;
      os << "outside point " << p << ": disk radius " << r << ", arc length " << arc.length() << ", bump on "
         << (on_x ? "x1" : "y1") << " amplitude " << a;
      out.log.push_back(os.str());
      out.arcs.push_back(arc);
      out.S.gamma.push_back(arc);
      out.amplitudes.push_back(a);
      placed = true;
    }
    if (!placed) fail(ErrorKind::DegenerateArcIntegral, "arc integral is degenerate on every route");
    out.disks.push_back(omega);
    out.S.K.push_back(CompactSet{omega, {}});
    new_regions.push_back(RegionData{[omega](Complex q) { return omega.contains(q, 1e-9); }, dc,
                                     "outside disk " + std::to_string(i)});
  }
  out.curve.regions.insert(out.curve.regions.begin(), new_regions.begin(), new_regions.end());
  out.S.validate();
  return out;
}

namespace {

/// Derivatives of log f up to order 3 from derivatives of f.
std::vector<Complex> log_jet(const std::vector<Complex>& f) {
  std::vector<Complex> out{std::log(f[0])};
  if (f.size() > 1) out.push_back(f[1] / f[0]);
  if (f.size() > 2) out.push_back((f[2] * f[0] - f[1] * f[1]) / (f[0] * f[0]));
  if (f.size() > 3) {
    out.push_back((f[3] * f[0] * f[0] - 3.0 * f[0] * f[1] * f[2] + 2.0 * f[1] * f[1] * f[1]) / (f[0] * f[0] * f[0]));
  }
  require(f.size() <= 4, "log-Hermite supports jets up to order 3");
  return out;
}

struct PathComp {
  LaurentPoly h;     // Hermite part in t
  bool log_form = false;
  int ref = -1;      // reference component added to h
};

}  // namespace

LegendrianPath connect_legendrian(const JetSpec& a, const JetSpec& b, double rho, const std::vector<bool>& mask,
                                  const ReferencePath& reference, int samples) {
  const int n = a.n();
  const int dim = 2 * n + 1;
  require(b.n() == n, "endpoint jets differ in dimension");
  require(mask.empty() || static_cast<int>(mask.size()) == dim, "mask needs one entry per component");
  require(samples >= 2, "at least two samples are needed");
  auto masked = [&](int k) { return !mask.empty() && mask[k]; };
  const auto va = a.value(), vb = b.value();
  for (int k = 0; k < dim; ++k) {
    if (masked(k) && (std::abs(va[k]) <= rho || std::abs(vb[k]) <= rho)) {
      std::ostringstream os;
      os << "endpoint modulus of component " << k << " is not above the floor " << rho;
      fail(ErrorKind::PreconditionViolation, os.str());
    }
  }
  LegendrianPath out;
  out.n = n;
  bool same = a.m == b.m;
  for (int i = 0; i < n && same; ++i) same = a.x[i] == b.x[i] && a.y[i] == b.y[i];
  same = same && a.z == b.z;
  if (same) {
    out.degenerate = true;
    out.t = {0.0};
    out.samples = {va};
    out.value = [va](double) { return va; };
    out.derivative = [dim](double) { return std::vector<Complex>(dim, 0.0); };
    out.min_masked = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dim; ++k) {
      if (masked(k)) out.min_masked = std::min(out.min_masked, std::abs(va[k]));
    }
    return out;
  }

  auto jet_row = [&](const JetSpec& j, int k) { return k < n ? j.x[k] : j.y[k - n]; };
  const int order = std::max(a.m, b.m) + 1;
  std::vector<std::vector<Complex>> ref0, ref1;
  if (reference) {
    ref0 = reference(0.0, order);
    ref1 = reference(1.0, order);
  }
  // bump candidates: unmasked x/y components first
  std::vector<int> bump_order;
  for (int k = 0; k < 2 * n; ++k) {
    if (!masked(k)) bump_order.push_back(k);
  }
  for (int k = 0; k < 2 * n; ++k) {
    if (masked(k)) bump_order.push_back(k);
  }
  const LaurentPoly t1 = LaurentPoly::monomial(1), one = LaurentPoly::constant(1.0);
  LaurentPoly base_bump = one;
  for (int i = 0; i <= a.m; ++i) base_bump = base_bump * t1;
  for (int i = 0; i <= b.m; ++i) base_bump = base_bump * (one - t1);

  const double pi = 3.14159265358979323846;
  for (int attempt = 0; attempt < 32; ++attempt) {
    const int winding = (attempt / 2) % 4 == 0 ? 0 : ((attempt / 2) % 4 == 1 ? 1 : ((attempt / 2) % 4 == 2 ? -1 : 2));
    const int bc = bump_order[attempt % bump_order.size()];
    const double sigma = (attempt / 8) % 2 == 0 ? 0.0 : ((attempt / 16) % 2 == 0 ? 2.0 : -2.0);
    const LaurentPoly bump = base_bump * (one + (t1 - LaurentPoly::constant(0.5)).scaled(sigma));

    std::vector<PathComp> comps(2 * n);
    for (int k = 0; k < 2 * n; ++k) {
      auto ja = jet_row(a, k), jb = jet_row(b, k);
      if (reference) {
        for (int q = 0; q <= a.m; ++q) ja[q] -= ref0[q][k];
        for (int q = 0; q <= b.m; ++q) jb[q] -= ref1[q][k];
        comps[k].ref = k;
      } else if (masked(k) && rho > 0.0) {
        ja = log_jet(ja);
        jb = log_jet(jb);
        // branch: imaginary part of log b within pi of log a, shifted by the winding
        const double target = ja[0].imag() + 2.0 * pi * winding;
        jb[0] = Complex(jb[0].real(), jb[0].imag() + 2.0 * pi * std::round((target - jb[0].imag()) / (2.0 * pi)));
        comps[k].log_form = true;
      }
      comps[k].h = hermite(ja, jb);
    }
    const LaurentPoly dbump = differentiate(bump);
    std::vector<LaurentPoly> dh(2 * n);
    for (int k = 0; k < 2 * n; ++k) dh[k] = differentiate(comps[k].h);

    // values and t-derivatives of x, y without the bump
    auto eval = [n, comps, dh, reference](double t, std::vector<Complex>& v, std::vector<Complex>& dv) {
      v.assign(2 * n, 0.0);
      dv.assign(2 * n, 0.0);
      std::vector<std::vector<Complex>> r;
      if (reference) r = reference(t, 1);
      for (int k = 0; k < 2 * n; ++k) {
        const Complex h = comps[k].h(t), hd = dh[k](t);
        if (comps[k].log_form) {
          v[k] = std::exp(h);
          dv[k] = hd * v[k];
        } else {
          v[k] = h;
          dv[k] = hd;
        }
        if (comps[k].ref >= 0) {
          v[k] += r[0][k];
          dv[k] += r[1][k];
        }
      }
    };
    const bool bump_x = bc < n;
    const int pair = bump_x ? bc : bc - n;
    auto integrand = [n, eval, bump, dbump, bump_x, pair](Complex tc, Eigen::Ref<Eigen::VectorXcd> o) {
      const double t = tc.real();
      std::vector<Complex> v, dv;
      eval(t, v, dv);
      Complex w = 0.0;
      for (int i = 0; i < n; ++i) w += v[i] * dv[n + i];
      o(0) = w;
      o(1) = bump_x ? bump(t) * dv[n + pair] : v[pair] * dbump(t);
    };
    std::vector<double> ts(samples);
    for (int i = 0; i < samples; ++i) ts[i] = static_cast<double>(i) / (samples - 1);
    std::vector<Complex> I0(samples, 0.0), I1(samples, 0.0);
    for (int i = 1; i < samples; ++i) {
      auto q = integrate_path(Arc::segment(ts[i - 1], ts[i]), integrand, 2, 1e-14);
      I0[i] = I0[i - 1] + q.value(0);
      I1[i] = I1[i - 1] + q.value(1);
    }
    if (std::abs(I1.back()) < 1e-10) continue;
    const Complex zA = a.z[0], zB = b.z[0];
    const Complex amp = (zA - zB - I0.back()) / I1.back();

    std::vector<std::vector<Complex>> vals(samples);
    double floor_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      std::vector<Complex> v, dv;
      eval(ts[i], v, dv);
      v[bc] += amp * bump(ts[i]);
      v.push_back(zA - (I0[i] + amp * I1[i]));
      for (int k = 0; k < dim; ++k) {
        if (masked(k)) floor_min = std::min(floor_min, std::abs(v[k]));
      }
      vals[i] = std::move(v);
    }
    if (floor_min <= rho) continue;

    out.t = ts;
    out.samples = vals;
    out.amplitude = amp;
    out.bump_component = bc;
    out.attempts = attempt + 1;
    out.min_masked = floor_min;
    auto I0s = I0, I1s = I1;
    out.value = [=](double t) {
      std::vector<Complex> v, dv;
      eval(t, v, dv);
      v[bc] += amp * bump(t);
      const int i = std::clamp(static_cast<int>(std::floor(t * (samples - 1))), 0, samples - 2);
      Complex c0 = I0s[i], c1 = I1s[i];
      if (t > ts[i]) {
        auto q = integrate_path(Arc::segment(ts[i], t), integrand, 2, 1e-14);
        c0 += q.value(0);
        c1 += q.value(1);
      }
      v.push_back(zA - (c0 + amp * c1));
      return v;
    };
    out.derivative = [=](double t) {
      std::vector<Complex> v, dv;
      eval(t, v, dv);
      v[bc] += amp * bump(t);
      dv[bc] += amp * dbump(t);
      Complex w = 0.0;
      for (int i = 0; i < n; ++i) w += v[i] * dv[n + i];
      dv.push_back(-w);
      return dv;
    };
    return out;
  }
  fail(ErrorKind::FloorViolated, "no reshaped path keeps the masked components above the floor");
}

}  // namespace leglab
