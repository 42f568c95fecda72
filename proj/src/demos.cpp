#include "leglab/demos.hpp"

#include "leglab/contact.hpp"

namespace leglab {

namespace {

LaurentPoly z() { return LaurentPoly::monomial(1); }
LaurentPoly c(Complex v) { return LaurentPoly::constant(v); }
LaurentPoly pow(int k) { return LaurentPoly::monomial(k); }

Demo disk_jets() {
  Demo d{"disk-jets", "approximate", "n = 2 on a disk, five interior jets of orders up to 3", {}};
  auto& s = d.spec;
  s.domain = CircularDomain::disk(0.0, 3.0);
  s.n = 2;
  s.S.K = {CompactSet::in_domain(s.domain, 0.0, 1.0)};
  s.target = {c(1.0) + z(), pow(2), pow(2), z() + pow(3)};
  s.lambda_in = {{0.0, 3}, {Complex(0.5, 0.2), 2}, {Complex(-0.4, 0.3), 1}, {Complex(0.1, -0.6), 0}, {Complex(-0.3, -0.3), 3}};
  s.eps = 1e-6;
  s.seed = 1;
  return d;
}

Demo annulus_period() {
  Demo d{"annulus-period", "approximate", "x = 1/z, y = z: the period around the hole is removed", {}};
  auto& s = d.spec;
  s.domain = CircularDomain::plane({Disk{0.0, 0.25}});
  s.S.K = {CompactSet::in_domain(s.domain, 1.5, 0.5)};
  s.region = CompactSet::in_domain(s.domain, 0.0, 2.2);
  s.target = {LaurentPoly::pole(0.0, 1), z()};
  s.lambda_in = {{1.5, 1}};
  s.eps = 1e-2;
  s.seed = 2;
  return d;
}

Demo two_hole_period() {
  Demo d{"two-hole-period", "approximate", "x = 1/z + 1/(z-3), y = z on a two-hole domain", {}};
  auto& s = d.spec;
  s.domain = CircularDomain::plane({Disk{0.0, 0.25}, Disk{3.0, 0.25}});
  s.S.K = {CompactSet::in_domain(s.domain, 1.5, 0.6)};
  s.region = CompactSet::in_domain(s.domain, 1.5, 2.5);
  s.target = {LaurentPoly::pole(0.0, 1) + LaurentPoly::pole(3.0, 1), z()};
  s.lambda_in = {{1.5, 1}};
  s.eps = 1e-2;
  s.seed = 3;
  return d;
}

Demo nodal_embedding() {
  Demo d{"nodal-embedding", "mergelyan", "a curve with a double point f(1) = f(-1) made injective", {}};
  auto& s = d.spec;
  const auto f = nodal_curve();
  s.S.K = {CompactSet::in_domain(s.domain, 0.0, 1.2)};
  s.target = {f.x[0], f.y[0], f.z};
  s.flags.injective = true;
  s.eps = 0.1;
  s.rounds = 0;
  s.seed = 4;
  return d;
}

Demo immersion_cusp() {
  Demo d{"immersion-cusp", "mergelyan", "x = y = z^2 with a common critical point, three rounds", {}};
  auto& s = d.spec;
  s.S.K = {CompactSet::in_domain(s.domain, 0.0, 0.5)};
  s.target = {pow(2), pow(2)};
  s.flags.immersion = true;
  s.eps = 1e-3;
  s.rounds = 3;
  s.seed = 5;
  return d;
}

Demo proper_growth() {
  Demo d{"proper-growth", "mergelyan", "three rounds with ||f_j|| > j on the boundary of K_j", {}};
  auto& s = d.spec;
  s.S.K = {CompactSet::in_domain(s.domain, 0.0, 0.5)};
  s.target = {z(), z()};
  s.flags.proper = true;
  s.eps = 1e-3;
  s.rounds = 3;
  s.seed = 6;
  return d;
}

Demo carleman_axis() {
  Demo d{"carleman-axis", "carleman", "f = (t, t, -t^2/2) on the real axis with eps(q) = 1/(1+|q|^2)", {}};
  auto& s = d.spec;
  s.S.gamma = {Arc::segment(-4.5, 4.5)};
  s.target = {z(), z(), pow(2).scaled(-0.5)};
  for (int i = 0; i <= 24; ++i) {
    const double r = 0.25 * i;
    s.eps_profile.points.push_back({r, 1.0 / (1.0 + r * r)});
  }
  s.rounds = 3;
  s.radii = {1.0, 2.0, 3.0};
  s.seed = 7;
  return d;
}

Demo exp_approx() {
  Demo d{"exp-approx", "approximate", "x = exp(z) on the unit disk at degree 16", {}};
  auto& s = d.spec;
  s.S.K = {CompactSet::in_domain(s.domain, 0.0, 1.0)};
  s.target = {exp_series(30), z()};
  s.eps = 1e-6;
  s.degree_max = 16;
  s.seed = 8;
  return d;
}

Demo outside_jets() {
  Demo d{"outside-jets", "extend", "a 1-jet prescribed at a point outside S", {}};
  auto& s = d.spec;
  s.S.K = {CompactSet::in_domain(s.domain, 0.0, 1.0)};
  s.target = {z(), z()};
  JetSpec j;
  j.p = Complex(1.4, 0.2);
  j.m = 1;
  j.x = {{Complex(1.5, 0.2), 1.0}};
  j.y = {{Complex(1.3, 0.2), 1.0}};
  j.z = {Complex(-0.364, -0.267), Complex(-1.5, -0.2)};
  s.jets_out = {j};
  s.region = CompactSet::in_domain(s.domain, 0.0, 2.0);
  s.eps = 5e-2;
  s.seed = 9;
  return d;
}

Demo push_annulus() {
  Demo d{"push-annulus", "push", "constant (2, 0, 0) pushed above 2 on the outer circle", {}};
  auto& s = d.spec;
  s.S.K = {CompactSet::in_domain(s.domain, 0.0, 0.9)};
  s.target = {c(2.0), c(0.0), c(0.0)};
  s.region = CompactSet::in_domain(s.domain, 0.0, 1.0);
  s.outer = CompactSet::in_domain(s.domain, 0.0, 1.3);
  s.rho = 1.0;
  s.C = 1.0;
  s.eps = 1e-3;
  s.seed = 10;
  return d;
}

}  // namespace

LaurentPoly exp_series(int degree) {
  LaurentPoly out;
  double f = 1.0;
  for (int k = 0; k <= degree; ++k) {
    if (k > 0) f *= k;
    out = out + pow(k).scaled(1.0 / f);
  }
  return out;
}

LegendrianCurve nodal_curve() {
  const auto x = pow(2) - c(1.0) - pow(4).scaled(7.0 / 6.0);
  const auto y = pow(3) - z();
  return make_legendrian({x}, {y}, 0.0, 0.0, CircularDomain::plane());
}

std::vector<Demo> demos() {
  return {disk_jets(),     annulus_period(), two_hole_period(), nodal_embedding(), immersion_cusp(),
          proper_growth(), carleman_axis(),  exp_approx(),      outside_jets(),    push_annulus()};
}

std::optional<Demo> find_demo(const std::string& name) {
  for (auto& d : demos()) {
    if (d.name == name) return d;
  }
  return std::nullopt;
}

}  // namespace leglab
