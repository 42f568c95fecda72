#include "leglab/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "leglab/errors.hpp"

namespace leglab {

namespace {

void trim(std::vector<Complex>& v) {
  for (auto& c : v) {
    if (std::abs(c) < kCoeffPrune) c = 0.0;
  }
  while (!v.empty() && v.back() == Complex(0.0)) v.pop_back();
}

void accumulate(std::vector<Complex>& dst, std::size_t index, Complex value) {
  if (dst.size() <= index) dst.resize(index + 1, 0.0);
  dst[index] += value;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// P(z) / (z - c)^k for k = 1..kmax as quotient polynomials and remainder pole arrays.
/// Result[k-1] = (Q_k, r) with P/(z-c)^k = Q_k + sum_j r[j-1] (z-c)^{-j}.
std::vector<std::pair<std::vector<Complex>, std::vector<Complex>>> divide_by_powers(const std::vector<Complex>& p,
                                                                                    Complex c, int kmax) {
  std::vector<std::pair<std::vector<Complex>, std::vector<Complex>>> out;
  std::vector<Complex> current = p;
  std::vector<Complex> remainders;  // remainders[t] from the t-th division
  for (int k = 1; k <= kmax; ++k) {
    Complex rem = 0.0;
    std::vector<Complex> q;
    if (!current.empty()) {
      const std::size_t d = current.size() - 1;
      q.assign(d, 0.0);
      Complex carry = 0.0;
      for (std::size_t i = d + 1; i-- > 0;) {
        const Complex v = current[i] + c * carry;
        if (i == 0) {
          rem = v;
        } else {
          q[i - 1] = v;
        }
        carry = v;
      }
    }
    remainders.push_back(rem);
    current = q;
    // P/(z-c)^k = Q_k + sum_{t=0}^{k-1} r_t (z-c)^{-(k-t)}
    std::vector<Complex> poles(k, 0.0);
    for (int t = 0; t < k; ++t) poles[k - t - 1] = remainders[t];
    out.emplace_back(current, poles);
  }
  return out;
}

}  // namespace

int find_center(const std::vector<Complex>& centers, Complex c) {
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (std::abs(centers[i] - c) <= kCenterIdentify) return static_cast<int>(i);
  }
  return -1;
}

std::vector<Complex> merge_centers(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out = a;
  for (const auto& c : b) {
    if (find_center(out, c) < 0) out.push_back(c);
  }
  return out;
}

void LaurentPoly::normalize() {
  trim(poly_);
  poles_.resize(centers_.size());
  for (auto& p : poles_) trim(p);
}

LaurentPoly LaurentPoly::constant(Complex c, std::vector<Complex> centers) {
  return from_dense(std::move(centers), {c}, {});
}

LaurentPoly LaurentPoly::monomial(int k, Complex c, std::vector<Complex> centers) {
  std::vector<Complex> poly(static_cast<std::size_t>(k) + 1, 0.0);
  poly[k] = c;
  return from_dense(std::move(centers), std::move(poly), {});
}

LaurentPoly LaurentPoly::pole(Complex center, int order, Complex c) {
  std::vector<Complex> p(static_cast<std::size_t>(order), 0.0);
  p[order - 1] = c;
  return from_dense({center}, {}, {p});
}

LaurentPoly LaurentPoly::from_dense(std::vector<Complex> centers, std::vector<Complex> poly,
                                    std::vector<std::vector<Complex>> poles) {
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      require(std::abs(centers[i] - centers[j]) > kCenterIdentify, "pole centers must be pairwise distinct");
    }
  }
  require(poles.size() <= centers.size(), "pole array refers to a missing center");
  LaurentPoly r;
  r.centers_ = std::move(centers);
  r.poly_ = std::move(poly);
  r.poles_ = std::move(poles);
  for (const auto& c : r.poly_) require(std::isfinite(c.real()) && std::isfinite(c.imag()), "non-finite coefficient");
  for (const auto& p : r.poles_)
    for (const auto& c : p) require(std::isfinite(c.real()) && std::isfinite(c.imag()), "non-finite coefficient");
  r.normalize();
  return r;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Complex> centers, const std::map<int, Complex>& poly,
                                    const std::map<std::pair<int, int>, Complex>& poles) {
  std::vector<Complex> dense;
  std::vector<std::vector<Complex>> dpoles(centers.size());
  for (const auto& [k, c] : poly) {
    require(k >= 0, "polynomial exponent must be non-negative");
    accumulate(dense, static_cast<std::size_t>(k), c);
  }
  for (const auto& [key, c] : poles) {
    const auto [idx, k] = key;
    require(idx >= 0 && static_cast<std::size_t>(idx) < centers.size(), "pole refers to a missing center");
    require(k <= -1, "pole exponent must be <= -1");
    accumulate(dpoles[idx], static_cast<std::size_t>(-k - 1), c);
  }
  return from_dense(std::move(centers), std::move(dense), std::move(dpoles));
}

std::map<int, Complex> LaurentPoly::poly_coeffs() const {
  std::map<int, Complex> out;
  for (std::size_t k = 0; k < poly_.size(); ++k) {
    if (poly_[k] != Complex(0.0)) out[static_cast<int>(k)] = poly_[k];
  }
  return out;
}

std::map<std::pair<int, int>, Complex> LaurentPoly::pole_coeffs() const {
  std::map<std::pair<int, int>, Complex> out;
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    for (std::size_t k = 0; k < poles_[i].size(); ++k) {
      if (poles_[i][k] != Complex(0.0)) out[{static_cast<int>(i), -static_cast<int>(k) - 1}] = poles_[i][k];
    }
  }
  return out;
}

bool LaurentPoly::is_zero() const {
  if (!poly_.empty()) return false;
  return std::all_of(poles_.begin(), poles_.end(), [](const auto& p) { return p.empty(); });
}

bool LaurentPoly::is_constant(double tol) const {
  for (std::size_t k = 1; k < poly_.size(); ++k) {
    if (std::abs(poly_[k]) > tol) return false;
  }
  for (const auto& p : poles_) {
    for (const auto& c : p) {
      if (std::abs(c) > tol) return false;
    }
  }
  return true;
}

int LaurentPoly::pole_order(std::size_t center) const {
  return center < poles_.size() ? static_cast<int>(poles_[center].size()) : 0;
}

Complex LaurentPoly::coefficient(int k) const {
  return (k >= 0 && static_cast<std::size_t>(k) < poly_.size()) ? poly_[k] : Complex(0.0);
}

Complex LaurentPoly::pole_coefficient(std::size_t center, int order) const {
  if (center >= poles_.size() || order < 1 || static_cast<std::size_t>(order) > poles_[center].size()) return 0.0;
  return poles_[center][order - 1];
}

double LaurentPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : poly_) m = std::max(m, std::abs(c));
  for (const auto& p : poles_)
    for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

LaurentPoly LaurentPoly::with_centers(const std::vector<Complex>& centers) const {
  if (centers == centers_) return *this;
  LaurentPoly r;
  r.centers_ = centers;
  r.poly_ = poly_;
  r.poles_.assign(centers.size(), {});
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const int idx = find_center(centers, centers_[i]);
    if (idx < 0) {
      if (i < poles_.size() && !poles_[i].empty()) fail(ErrorKind::PreconditionViolation, "center missing from target list");
      continue;
    }
    if (i < poles_.size()) r.poles_[idx] = poles_[i];
  }
  r.normalize();
  return r;
}

Complex LaurentPoly::operator()(Complex z) const {
  Complex acc = 0.0;
  for (std::size_t k = poly_.size(); k-- > 0;) acc = acc * z + poly_[k];
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    if (poles_[i].empty()) continue;
    const Complex w = 1.0 / (z - centers_[i]);
    Complex s = 0.0;
    for (std::size_t k = poles_[i].size(); k-- > 0;) s = (s + poles_[i][k]) * w;
    acc += s;
  }
  return acc;
}

LaurentPoly LaurentPoly::operator-() const { return scaled(-1.0); }

LaurentPoly LaurentPoly::scaled(Complex s) const {
  LaurentPoly r = *this;
  for (auto& c : r.poly_) c *= s;
  for (auto& p : r.poles_)
    for (auto& c : p) c *= s;
  r.normalize();
  return r;
}

LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b) {
  const auto centers = merge_centers(a.centers(), b.centers());
  const LaurentPoly A = a.with_centers(centers);
  const LaurentPoly B = b.with_centers(centers);
  std::vector<Complex> poly = A.dense_poly();
  for (std::size_t k = 0; k < B.dense_poly().size(); ++k) accumulate(poly, k, B.dense_poly()[k]);
  std::vector<std::vector<Complex>> poles = A.dense_poles();
  poles.resize(centers.size());
  for (std::size_t i = 0; i < B.dense_poles().size(); ++i) {
    for (std::size_t k = 0; k < B.dense_poles()[i].size(); ++k) accumulate(poles[i], k, B.dense_poles()[i][k]);
  }
  return LaurentPoly::from_dense(centers, std::move(poly), std::move(poles));
}

LaurentPoly sub(const LaurentPoly& a, const LaurentPoly& b) { return add(a, -b); }

LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b) {
  const auto centers = merge_centers(a.centers(), b.centers());
  const LaurentPoly A = a.with_centers(centers);
  const LaurentPoly B = b.with_centers(centers);
  const auto& ap = A.dense_poly();
  const auto& bp = B.dense_poly();
  const auto& aq = A.dense_poles();
  const auto& bq = B.dense_poles();
  const std::size_t nc = centers.size();

  std::vector<Complex> poly;
  std::vector<std::vector<Complex>> poles(nc);

  // polynomial x polynomial
  if (!ap.empty() && !bp.empty()) {
    poly.assign(ap.size() + bp.size() - 1, 0.0);
    for (std::size_t i = 0; i < ap.size(); ++i)
      for (std::size_t j = 0; j < bp.size(); ++j) poly[i + j] += ap[i] * bp[j];
  }

  // polynomial x pole part at one center, via repeated synthetic division
  auto poly_times_poles = [&](const std::vector<Complex>& p, const std::vector<Complex>& pl, std::size_t ci) {
    if (p.empty() || pl.empty()) return;
    const auto divisions = divide_by_powers(p, centers[ci], static_cast<int>(pl.size()));
    for (std::size_t k = 0; k < pl.size(); ++k) {
      const Complex beta = pl[k];
      if (beta == Complex(0.0)) continue;
      const auto& [q, rem] = divisions[k];
      for (std::size_t t = 0; t < q.size(); ++t) accumulate(poly, t, beta * q[t]);
      for (std::size_t t = 0; t < rem.size(); ++t) accumulate(poles[ci], t, beta * rem[t]);
    }
  };
  for (std::size_t i = 0; i < nc; ++i) {
    if (i < bq.size()) poly_times_poles(ap, bq[i], i);
    if (i < aq.size()) poly_times_poles(bp, aq[i], i);
  }

  // pole x pole
  for (std::size_t i = 0; i < aq.size(); ++i) {
    for (std::size_t j = 0; j < bq.size(); ++j) {
      const auto& pa = aq[i];
      const auto& pb = bq[j];
      if (pa.empty() || pb.empty()) continue;
      if (i == j) {
        for (std::size_t s = 0; s < pa.size(); ++s)
          for (std::size_t t = 0; t < pb.size(); ++t) accumulate(poles[i], s + t + 1, pa[s] * pb[t]);
        continue;
      }
      // 1/((z-c)^p (z-d)^q) by closed-form partial fractions
      const Complex c = centers[i], d = centers[j];
      const Complex e = c - d;
      for (std::size_t s = 0; s < pa.size(); ++s) {
        for (std::size_t t = 0; t < pb.size(); ++t) {
          const Complex coef = pa[s] * pb[t];
          if (coef == Complex(0.0)) continue;
          const int p = static_cast<int>(s) + 1, q = static_cast<int>(t) + 1;
          double growth = 0.0;
          for (int k = 1; k <= p; ++k) {
            const Complex A = std::pow(-1.0, p - k) * binomial(p + q - k - 1, p - k) * std::pow(e, -(q + p - k));
            growth = std::max(growth, std::abs(A));
            accumulate(poles[i], k - 1, coef * A);
          }
          for (int k = 1; k <= q; ++k) {
            const Complex B = std::pow(-1.0, q - k) * binomial(p + q - k - 1, q - k) * std::pow(-e, -(p + q - k));
            growth = std::max(growth, std::abs(B));
            accumulate(poles[j], k - 1, coef * B);
          }
          if (growth > kReexpansionCap) {
            std::ostringstream os;
            os << "partial fractions between centers " << c << " and " << d << " with orders " << p << "," << q
               << " have growth " << growth;
            fail(ErrorKind::RationalReexpansionFailure, os.str());
          }
        }
      }
    }
  }
  return LaurentPoly::from_dense(centers, std::move(poly), std::move(poles));
}

LaurentPoly differentiate(const LaurentPoly& a) {
  std::vector<Complex> poly;
  const auto& ap = a.dense_poly();
  for (std::size_t k = 1; k < ap.size(); ++k) accumulate(poly, k - 1, static_cast<double>(k) * ap[k]);
  std::vector<std::vector<Complex>> poles(a.centers().size());
  for (std::size_t i = 0; i < a.dense_poles().size(); ++i) {
    const auto& p = a.dense_poles()[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      // (z-c)^{-(k+1)} -> -(k+1) (z-c)^{-(k+2)}
      accumulate(poles[i], k + 1, -static_cast<double>(k + 1) * p[k]);
    }
  }
  return LaurentPoly::from_dense(a.centers(), std::move(poly), std::move(poles));
}

LaurentPoly differentiate(const LaurentPoly& a, int times) {
  LaurentPoly r = a;
  for (int i = 0; i < times; ++i) r = differentiate(r);
  return r;
}

OneForm wedge_d(const LaurentPoly& x, const LaurentPoly& y) { return OneForm{mul(x, differentiate(y))}; }

LaurentPoly primitive(const OneForm& a) {
  const LaurentPoly& f = a.coeff;
  std::ostringstream offending;
  bool bad = false;
  for (std::size_t i = 0; i < f.dense_poles().size(); ++i) {
    const Complex r = f.pole_coefficient(i, 1);
    if (std::abs(r) > kResidueTol) {
      bad = true;
      offending << " center " << f.centers()[i] << " residue " << r << ";";
    }
  }
  if (bad) fail(ErrorKind::NonexactForm, "nonzero residues:" + offending.str());

  std::vector<Complex> poly;
  const auto& fp = f.dense_poly();
  for (std::size_t k = 0; k < fp.size(); ++k) accumulate(poly, k + 1, fp[k] / static_cast<double>(k + 1));
  std::vector<std::vector<Complex>> poles(f.centers().size());
  for (std::size_t i = 0; i < f.dense_poles().size(); ++i) {
    const auto& p = f.dense_poles()[i];
    for (std::size_t k = 1; k < p.size(); ++k) {
      // (z-c)^{-(k+1)} -> (z-c)^{-k} / (-k)
      accumulate(poles[i], k - 1, p[k] / -static_cast<double>(k));
    }
  }
  if (poly.empty()) poly.push_back(0.0);
  poly[0] = 0.0;
  return LaurentPoly::from_dense(f.centers(), std::move(poly), std::move(poles));
}

Complex residue_at(const OneForm& a, std::size_t center) {
  require(center < a.coeff.centers().size(), "center index out of range");
  return a.coeff.pole_coefficient(center, 1);
}

Complex contour_integral(const OneForm& a, const Cycle& cycle) {
  Complex sum = 0.0;
  const auto& centers = a.coeff.centers();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double dist = std::abs(centers[i] - cycle.center);
    if (std::abs(dist - cycle.radius) < 1e-9) {
      std::ostringstream os;
      os << "cycle passes within 1e-9 of center " << centers[i];
      fail(ErrorKind::CycleThroughPole, os.str());
    }
    if (dist < cycle.radius) sum += a.coeff.pole_coefficient(i, 1);
  }
  return Complex(0.0, 2.0 * std::numbers::pi) * sum * static_cast<double>(cycle.orientation);
}

QuadResult arc_integral(const OneForm& a, const Arc& arc, double tol) {
  const LaurentPoly& f = a.coeff;
  return integrate_path(arc, [&f](Complex z) { return f(z); }, tol);
}

Complex exact_arc_integral(const OneForm& a, const Arc& arc) {
  const LaurentPoly& f = a.coeff;
  std::vector<std::vector<Complex>> poles = f.dense_poles();
  std::vector<Complex> residues(f.centers().size(), 0.0);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!poles[i].empty()) {
      residues[i] = poles[i][0];
      poles[i][0] = 0.0;
    }
  }
  const LaurentPoly exact = LaurentPoly::from_dense(f.centers(), f.dense_poly(), poles);
  const LaurentPoly phi = primitive(OneForm{exact});
  Complex total = 0.0;
  for (const auto& piece : arc.pieces()) {
    total += phi(piece.end()) - phi(piece.start());
    for (std::size_t i = 0; i < residues.size(); ++i) {
      if (residues[i] == Complex(0.0)) continue;
      const Complex c = f.centers()[i];
      const double dist = piece.distance_to(c);
      if (dist < 1e-9) {
        std::ostringstream os;
        os << "arc passes within 1e-9 of pole center " << c;
        fail(ErrorKind::CycleThroughPole, os.str());
      }
      // steps short enough that each principal logarithm follows the path
      const int steps = piece.kind == PathPiece::Kind::Segment ? 1 : 1 + static_cast<int>(std::ceil(piece.length() / dist));
      Complex log_change = 0.0;
      Complex prev = piece.start() - c;
      for (int k = 1; k <= steps; ++k) {
        const Complex cur = piece.point(static_cast<double>(k) / steps) - c;
        log_change += std::log(cur / prev);
        prev = cur;
      }
      total += residues[i] * log_change;
    }
  }
  return total;
}

Complex evaluate(const LaurentPoly& a, Complex z) {
  for (std::size_t i = 0; i < a.centers().size(); ++i) {
    if (a.pole_order(i) > 0 && std::abs(z - a.centers()[i]) < 1e-12) {
      std::ostringstream os;
      os << "evaluation point " << z << " is a pole center";
      fail(ErrorKind::EvalAtPole, os.str());
    }
  }
  return a(z);
}

std::vector<Complex> jet_at(const LaurentPoly& a, Complex p, int m) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(m) + 1);
  LaurentPoly d = a;
  for (int k = 0; k <= m; ++k) {
    out.push_back(evaluate(d, p));
    if (k < m) d = differentiate(d);
  }
  return out;
}

}  // namespace leglab
