#include "leglab/contact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "leglab/errors.hpp"

namespace leglab {

ContactForm ContactForm::standard(int n) {
  require(n >= 1, "contact dimension n must be at least 1");
  ContactForm f;
  f.n = n;
  for (int i = 0; i < n; ++i) f.terms.push_back({1.0, i, n + i});
  return f;
}

const LaurentPoly& LegendrianCurve::component(int k) const {
  require(k >= 0 && k <= 2 * n, "component index out of range");
  if (k < n) return x[k];
  if (k < 2 * n) return y[k - n];
  return z;
}

LaurentPoly& LegendrianCurve::component(int k) {
  return const_cast<LaurentPoly&>(static_cast<const LegendrianCurve&>(*this).component(k));
}

std::vector<Complex> LegendrianCurve::operator()(Complex zeta) const {
  std::vector<Complex> out;
  out.reserve(2 * n + 1);
  for (int k = 0; k <= 2 * n; ++k) out.push_back(component(k)(zeta));
  return out;
}

std::vector<Complex> LegendrianCurve::derivative(Complex zeta) const {
  std::vector<Complex> out;
  out.reserve(2 * n + 1);
  for (int k = 0; k <= 2 * n; ++k) out.push_back(differentiate(component(k))(zeta));
  return out;
}

void LegendrianCurve::align_centers() {
  std::vector<Complex> centers = domain.pole_centers();
  for (int k = 0; k <= 2 * n; ++k) centers = merge_centers(centers, component(k).centers());
  for (int k = 0; k <= 2 * n; ++k) component(k) = component(k).with_centers(centers);
}

LegendrianCurve make_legendrian(std::vector<LaurentPoly> x, std::vector<LaurentPoly> y, Complex p0, Complex z0,
                                const CircularDomain& domain) {
  require(!x.empty() && x.size() == y.size(), "x and y must have the same positive length");
  LegendrianCurve c;
  c.n = static_cast<int>(x.size());
  c.form = ContactForm::standard(c.n);
  c.domain = domain;
  LaurentPoly form;
  for (int i = 0; i < c.n; ++i) form = form + wedge_d(x[i], y[i]).coeff;
  const LaurentPoly phi = primitive(OneForm{form});
  c.x = std::move(x);
  c.y = std::move(y);
  c.z = LaurentPoly::constant(z0 + evaluate(phi, p0)) - phi;
  c.align_centers();
  return c;
}

LaurentPoly legendrian_residual(const LegendrianCurve& c) {
  LaurentPoly r = differentiate(c.z);
  for (const auto& t : c.form.terms) r = r + mul(c.component(t.a), differentiate(c.component(t.b))).scaled(t.coef);
  return r;
}

LegendrianReport verify_legendrian(const LegendrianCurve& c) {
  LegendrianReport rep;
  rep.max_residual_coeff = legendrian_residual(c).max_abs_coeff();
  rep.pass = rep.max_residual_coeff <= kAcceptResidual;
  return rep;
}

namespace {

/// Push a form forward under u' = s * u(perm) (sign/permutation) and z' = z + shift,
/// where shift is +x_1 y_1 for c2. Terms are merged and zero terms dropped.
ContactForm simplify(int n, const std::vector<ContactForm::Term>& terms) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& t : terms) acc[{t.a, t.b}] += t.coef;
  ContactForm f;
  f.n = n;
  // keep the standard ordering x_i dy_i first for readability
  for (int i = 0; i < n; ++i) {
    auto it = acc.find({i, n + i});
    if (it != acc.end() && it->second != 0.0) f.terms.push_back({it->second, i, n + i});
    if (it != acc.end()) acc.erase(it);
  }
  for (const auto& [key, coef] : acc) {
    if (coef != 0.0) f.terms.push_back({coef, key.first, key.second});
  }
  return f;
}

}  // namespace

LegendrianCurve apply_iso(const ContactIso& iso, const LegendrianCurve& c) {
  require(iso.n == c.n, "isomorphism dimension does not match the curve");
  const int n = c.n;
  LegendrianCurve out = c;
  if (iso.kind == ContactIso::Kind::C1) {
    require(iso.j >= 2 && iso.j <= n, "c1 index j must lie in 2..n");
    const int a = n, b = n + iso.j - 1;  // indices of y_1 and y_j
    std::swap(out.y[0], out.y[iso.j - 1]);
    std::vector<ContactForm::Term> terms;
    auto relabel = [&](int k) { return k == a ? b : (k == b ? a : k); };
    for (const auto& t : c.form.terms) terms.push_back({t.coef, relabel(t.a), relabel(t.b)});
    out.form = simplify(n, terms);
    return out;
  }
  // c2: (x_1, y_1, z) -> (x_1, -y_1, z + x_1 y_1)
  out.y[0] = -c.y[0];
  out.z = c.z + mul(c.x[0], c.y[0]);
  auto sign = [&](int k) { return k == n ? -1.0 : 1.0; };
  // z = z' + x_1' y_1' in image coordinates, so d z = dz' + y_1' dx_1' + x_1' dy_1'
  std::vector<ContactForm::Term> terms{{1.0, n, 0}, {1.0, 0, n}};
  for (const auto& t : c.form.terms) terms.push_back({t.coef * sign(t.a) * sign(t.b), t.a, t.b});
  out.form = simplify(n, terms);
  return out;
}

double JetSpec::compatibility_defect() const {
  const int nn = n();
  double worst = 0.0;
  for (int k = 1; k <= m; ++k) {
    // (sum x_i y_i')^{(k-1)} = sum_l C(k-1,l) x^{(l)} y^{(k-l)}
    Complex s = 0.0;
    double binom = 1.0;
    for (int l = 0; l <= k - 1; ++l) {
      for (int i = 0; i < nn; ++i) s += binom * x[i][l] * y[i][k - l];
      binom = binom * (k - 1 - l) / (l + 1);
    }
    worst = std::max(worst, std::abs(z[k] + s));
  }
  return worst;
}

std::vector<Complex> JetSpec::value() const {
  std::vector<Complex> v;
  for (const auto& r : x) v.push_back(r[0]);
  for (const auto& r : y) v.push_back(r[0]);
  v.push_back(z[0]);
  return v;
}

std::vector<Complex> JetSpec::first_derivative() const {
  std::vector<Complex> v;
  if (m < 1) return v;
  for (const auto& r : x) v.push_back(r[1]);
  for (const auto& r : y) v.push_back(r[1]);
  v.push_back(z[1]);
  return v;
}

JetSpec jet_of_curve(const LegendrianCurve& c, Complex p, int m) {
  require(m >= 0, "jet order must be non-negative");
  JetSpec j;
  j.p = p;
  j.m = m;
  for (int i = 0; i < c.n; ++i) {
    j.x.push_back(jet_at(c.x[i], p, m));
    j.y.push_back(jet_at(c.y[i], p, m));
  }
  j.z = jet_at(c.z, p, m);
  return j;
}

double jet_distance(const JetSpec& a, const JetSpec& b) {
  if (a.m != b.m || a.n() != b.n() || std::abs(a.p - b.p) > 1e-12) {
    std::ostringstream os;
    os << "jets differ in point, order or dimension (" << a.p << "," << a.m << "," << a.n() << ") vs (" << b.p << ","
       << b.m << "," << b.n() << ")";
    fail(ErrorKind::MismatchedJets, os.str());
  }
  double d = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    for (int k = 0; k <= a.m; ++k) {
      d = std::max(d, std::abs(a.x[i][k] - b.x[i][k]));
      d = std::max(d, std::abs(a.y[i][k] - b.y[i][k]));
    }
  }
  for (int k = 0; k <= a.m; ++k) d = std::max(d, std::abs(a.z[k] - b.z[k]));
  return d;
}

double max_norm(const std::vector<Complex>& point) {
  double m = 0.0;
  for (const auto& v : point) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace leglab
