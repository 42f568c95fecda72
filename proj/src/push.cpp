#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "leglab/approx.hpp"
#include "leglab/errors.hpp"
#include "leglab/pipeline.hpp"

namespace leglab {

namespace {

constexpr int kBoundarySamples = 4096;

std::vector<Complex> circle(const CompactSet& k, int count) {
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(k.disk.center + k.disk.radius * std::polar(1.0, 2.0 * std::numbers::pi * i / count));
  }
  return out;
}

/// Polynomial P in (zeta - c) matching the jets of w at the given points.
LaurentPoly jet_interpolant(const LaurentPoly& w, const std::vector<JetSpec>& jets, Complex c) {
  int rows = 0;
  for (const auto& j : jets) rows += j.m + 1;
  if (rows == 0) return LaurentPoly();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows, rows);
  Eigen::VectorXcd r(rows);
  int row = 0;
  for (const auto& j : jets) {
    const auto target = jet_at(w, j.p, j.m);
    for (int d = 0; d <= j.m; ++d, ++row) {
      for (int k = d; k < rows; ++k) {
        double f = 1.0;
        for (int q = 0; q < d; ++q) f *= (k - q);
        M(row, k) = f * std::pow(j.p - c, k - d);
      }
      r(row) = target[d];
    }
  }
  const Eigen::VectorXcd a = M.fullPivLu().solve(r);
  LaurentPoly out, power = LaurentPoly::constant(1.0);
  const LaurentPoly lin = LaurentPoly::monomial(1) - LaurentPoly::constant(c);
  for (int k = 0; k < rows; ++k) {
    out = out + power.scaled(a(k));
    power = power * lin;
  }
  return out;
}

}  // namespace

PushResult push_boundary(const LegendrianCurve& f, const CompactSet& R1, const CompactSet& R2, double rho, double C,
                         const std::vector<JetSpec>& jets, double budget, std::uint64_t seed) {
  require(std::abs(R1.disk.center - R2.disk.center) < 1e-12, "R1 and R2 must be concentric");
  require(R2.disk.radius >= 1.05 * R1.disk.radius, "R2/R1 radius ratio must be at least 1.05");
  require(budget > 0.0, "budget must be positive");
  const int n = f.n, dim = f.dimension();
  const Complex c = R1.disk.center;
  PushResult out;

  const auto inner = circle(R1, kBoundarySamples);
  std::vector<int> dominant(inner.size());
  double min_inner = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const auto v = f(inner[i]);
    int best = 0;
    for (int k = 1; k < dim; ++k) {
      if (std::abs(v[k]) > std::abs(v[best])) best = k;
    }
    dominant[i] = best;
    min_inner = std::min(min_inner, std::abs(v[best]));
    if (std::abs(v[best]) <= rho && rho > 0.0) {
      std::ostringstream os;
      os << "no component exceeds " << rho << " at " << inner[i] << " on bR1";
      if (min_inner <= rho) fail(ErrorKind::PreconditionViolation, os.str());
      fail(ErrorKind::SectorCoverFailure, os.str());
    }
  }
  if (rho <= 0.0 && min_inner <= 0.0) fail(ErrorKind::PreconditionViolation, "f vanishes on bR1");

  // sectors of constant dominant component; the max-modulus rule picks it
  for (std::size_t i = 0; i < dominant.size(); ++i) {
    if (i == 0 || dominant[i] != dominant[i - 1]) {
      out.sectors.push_back({2.0 * std::numbers::pi * i / kBoundarySamples, dominant[i]});
    }
  }
  if (out.sectors.size() > 1 && out.sectors.back().second == out.sectors.front().second) out.sectors.pop_back();
  while (out.sectors.size() > 8) {
    // merge the shortest sector into its predecessor when that component stays above rho there
    std::size_t shortest = 0;
    double len = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < out.sectors.size(); ++s) {
      const double next = s + 1 < out.sectors.size() ? out.sectors[s + 1].first : out.sectors[0].first + 2.0 * std::numbers::pi;
      if (next - out.sectors[s].first < len) {
        len = next - out.sectors[s].first;
        shortest = s;
      }
    }
    const std::size_t prev = shortest == 0 ? out.sectors.size() - 1 : shortest - 1;
    const int comp = out.sectors[prev].second;
    const int i0 = static_cast<int>(std::lround(out.sectors[shortest].first / (2.0 * std::numbers::pi) * kBoundarySamples));
    const int i1 = i0 + static_cast<int>(std::lround(len / (2.0 * std::numbers::pi) * kBoundarySamples));
    for (int i = i0; i < i1; ++i) {
      if (std::abs(f(inner[i % kBoundarySamples])[comp]) <= rho) {
        fail(ErrorKind::SectorCoverFailure, "more than 8 sectors and no merge keeps a component above rho");
      }
    }
    out.sectors.erase(out.sectors.begin() + static_cast<long>(shortest));
  }
  {
    std::ostringstream os;
    os << out.sectors.size() << " sector(s) on bR1, dominant components:";
    for (const auto& [a, k] : out.sectors) os << " " << k << "@" << a;
    out.log.push_back(os.str());
  }

  const auto outer = circle(R2, kBoundarySamples);
  std::vector<Complex> annulus;
  for (auto q : grid_in_compact(R2, 80)) {
    if (std::abs(q - c) >= R1.disk.radius) annulus.push_back(q);
  }
  annulus.insert(annulus.end(), inner.begin(), inner.end());
  annulus.insert(annulus.end(), outer.begin(), outer.end());
  auto min_norm = [](const LegendrianCurve& g, const std::vector<Complex>& pts) {
    double m = std::numeric_limits<double>::infinity();
    for (auto q : pts) m = std::min(m, max_norm(g(q)));
    return m;
  };
  out.min_annulus = min_norm(f, annulus);
  out.min_outer = min_norm(f, outer);
  if (out.min_annulus > rho && out.min_outer > rho + C) {
    out.curve = f;
    out.log.push_back("norms already above the targets; no bump");
    return out;
  }

  // bump the component dominating the fewest boundary samples first
  std::vector<int> usage(2 * n, 0);
  for (int k : dominant) {
    if (k < 2 * n) ++usage[k];
  }
  std::vector<int> order(2 * n);
  for (int k = 0; k < 2 * n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return usage[a] < usage[b]; });

  const auto inside = grid_in_compact(R1, 40);
  const auto samples = sample_compact(R1, 400);
  const Complex p0 = jets.empty() ? samples.front() : jets.front().p;
  std::vector<Complex> zpts, zvals;
  std::vector<JetKill> kills;
  for (std::size_t i = 0; i < jets.size(); ++i) {
    kills.push_back(JetKill{jets[i].p, jets[i].m});
    if (i > 0) {
      zpts.push_back(jets[i].p);
      zvals.push_back(jets[i].z[0]);
    }
  }
  const Complex z0 = f.z(p0);
  bool have = false;
  for (int b : order) {
    double fb = 0.0;
    for (auto q : outer) fb = std::max(fb, std::abs(f.component(b)(q)));
    const LaurentPoly bump0 = boundary_bump(R1, R2, budget / 4.0, rho + C + 0.5 + fb);
    for (int phase = 0; phase < 8; ++phase) {
      LaurentPoly w = bump0.scaled(std::polar(1.0, 2.0 * std::numbers::pi * phase / 8.0));
      w = w - jet_interpolant(w, jets, c);
      auto xs = f.x, ys = f.y;
      (b < n ? xs[b] : ys[b - n]) = (b < n ? xs[b] : ys[b - n]) + w;
      const SprayRole role = b < n ? SprayRole{b, false} : SprayRole{b - n, true};
      try {
        auto pm = make_period_map(f.domain, R2, n, p0, z0, zpts, zvals, seed);
        if (pm.s() + pm.lambda() > 0) {
          auto cs = build_corrections(spray_partner(role, xs, ys), role, pm, kills, {}, samples,
                                      f.domain.pole_centers());
          solve_affine(xs, ys, cs, pm);
        }
      } catch (const Error& e) {
        out.log.push_back(std::string("bump on component ") + std::to_string(b) + " rejected: " + e.what());
        break;
      }
      LegendrianCurve F = make_legendrian(xs, ys, p0, z0, f.domain);
      double change = 0.0;
      for (auto q : inside) {
        const auto a = f(q), v = F(q);
        for (int k = 0; k < dim; ++k) change = std::max(change, std::abs(a[k] - v[k]));
      }
      const double mo = min_norm(F, outer);
      if (change > budget || mo <= rho + C) continue;
      const double ma = min_norm(F, annulus);
      if (!have || ma > out.min_annulus) {
        have = true;
        out.curve = std::move(F);
        out.bump_component = b;
        out.min_annulus = ma;
        out.min_outer = mo;
        out.sup_change = change;
      }
      if (out.min_annulus > rho) break;
    }
    if (have && out.min_annulus > rho) break;
  }
  if (!have) fail(ErrorKind::ToleranceNotReached, "no bump reaches the outer target within the budget");
  std::ostringstream os;
  os << "bump on component " << out.bump_component << ": min on annulus " << out.min_annulus << ", min on bR2 "
     << out.min_outer << ", change on R1 " << out.sup_change;
  out.log.push_back(os.str());
  return out;
}

}  // namespace leglab
