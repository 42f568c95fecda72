#include "leglab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "leglab/errors.hpp"
#include "leglab/parallel.hpp"

namespace leglab {

namespace {

struct CellEval {
  std::vector<Complex> val;
  std::vector<double> lip;  // Lipschitz bound of each component over the cell
};

class CellGrid {
 public:
  CellGrid(const std::vector<LaurentPoly>& comps, const CompactSet& k, const GridOptions& opt)
      : comps_(comps), k_(k), opt_(opt) {
    require(opt.grid >= 4, "grid must have at least 4 cells per side");
    const double R = k.disk.radius;
    spacing = 2.0 * R / opt.grid;
    h = 0.5 * spacing;
    margin = opt.margin_cells * spacing;
    for (const auto& c : comps) {
      d1_.push_back(differentiate(c));
      d2_.push_back(differentiate(d1_.back()));
    }
    for (int i = 0; i < opt.grid; ++i) {
      for (int j = 0; j < opt.grid; ++j) {
        const Complex c = k.disk.center + Complex(-R + spacing * (i + 0.5), -R + spacing * (j + 0.5));
        if (k.distance_to(c) <= h * std::numbers::sqrt2) centers.push_back(c);
      }
    }
    m2_.assign(comps.size(), 0.0);
    for (auto c : centers) {
      for (std::size_t q = 0; q < comps.size(); ++q) m2_[q] = std::max(m2_[q], std::abs(d2_[q](c)));
    }
    for (auto& m : m2_) m = 2.0 * m + 1e-12;
    for (auto c : centers) evals.push_back(eval(c, h));
  }

  CellEval eval(Complex c, double half) const {
    const double r = half * std::numbers::sqrt2;
    CellEval e;
    for (std::size_t q = 0; q < comps_.size(); ++q) {
      e.val.push_back(comps_[q](c));
      e.lip.push_back(std::abs(d1_[q](c)) + r * m2_[q]);
    }
    return e;
  }

  /// max_k (|df_k| - slack_k); positive means the two cells have disjoint images.
  double gap(const CellEval& a, double ha, const CellEval& b, double hb) const {
    const double ra = ha * std::numbers::sqrt2, rb = hb * std::numbers::sqrt2;
    double g = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < a.val.size(); ++q) {
      g = std::max(g, std::abs(a.val[q] - b.val[q]) - (ra * a.lip[q] + rb * b.lip[q]));
    }
    return g;
  }

  /// Calls visit(i, j) for every pair of top-level cells whose hash component differs by
  /// less than `reach` times the largest cell slack.
  template <class Visit>
  void near_pairs(double reach, Visit&& visit) const {
    const int nc = static_cast<int>(comps_.size());
    int best = 0;
    double best_score = -1.0, best_slack = 0.0;
    for (int q = 0; q < nc; ++q) {
      double lo_re = 1e300, hi_re = -1e300, lo_im = 1e300, hi_im = -1e300, slack = 0.0;
      for (const auto& e : evals) {
        lo_re = std::min(lo_re, e.val[q].real());
        hi_re = std::max(hi_re, e.val[q].real());
        lo_im = std::min(lo_im, e.val[q].imag());
        hi_im = std::max(hi_im, e.val[q].imag());
        slack = std::max(slack, h * std::numbers::sqrt2 * e.lip[q]);
      }
      const double score = std::max(hi_re - lo_re, hi_im - lo_im) / std::max(slack, 1e-300);
      if (score > best_score) {
        best_score = score;
        best = q;
        best_slack = slack;
      }
    }
    const double bin = std::max(reach * best_slack, 1e-300);
    std::unordered_map<long long, std::vector<int>> bins;
    auto key = [](long long a, long long b) { return a * 2000003LL + b; };
    std::vector<std::pair<long long, long long>> idx(evals.size());
    for (std::size_t i = 0; i < evals.size(); ++i) {
      const Complex v = evals[i].val[best];
      idx[i] = {static_cast<long long>(std::floor(v.real() / bin)), static_cast<long long>(std::floor(v.imag() / bin))};
      bins[key(idx[i].first, idx[i].second)].push_back(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < evals.size(); ++i) {
      for (long long dx = -1; dx <= 1; ++dx) {
        for (long long dy = -1; dy <= 1; ++dy) {
          auto it = bins.find(key(idx[i].first + dx, idx[i].second + dy));
          if (it == bins.end()) continue;
          for (int j : it->second) {
            if (j > static_cast<int>(i)) visit(static_cast<int>(i), j);
          }
        }
      }
    }
  }

  bool within_margin(Complex a, double ha, Complex b, double hb) const {
    return std::abs(a - b) + (ha + hb) * std::numbers::sqrt2 < margin;
  }

  std::vector<std::pair<Complex, double>> children(Complex c, double half) const {
    std::vector<std::pair<Complex, double>> out;
    const double q = 0.5 * half;
    for (double sx : {-1.0, 1.0}) {
      for (double sy : {-1.0, 1.0}) {
        const Complex cc = c + Complex(sx * q, sy * q);
        if (k_.distance_to(cc) <= q * std::numbers::sqrt2) out.push_back({cc, q});
      }
    }
    return out;
  }

  const std::vector<LaurentPoly>& comps_;
  const CompactSet& k_;
  GridOptions opt_;
  std::vector<LaurentPoly> d1_, d2_;
  std::vector<double> m2_;
  double spacing = 0.0, h = 0.0, margin = 0.0;
  std::vector<Complex> centers;
  std::vector<CellEval> evals;
};

struct Certifier {
  const CellGrid& g;
  InjectivityCertificate& cert;
  std::size_t collect = 0;  // > 0: keep going after failures until this many are recorded
  bool failed = false;
  bool stop = false;

  bool resolve(Complex ca, double ha, const CellEval& ea, Complex cb, double hb, const CellEval& eb, int depth) {
    if (g.within_margin(ca, ha, cb, hb)) return true;
    if (++cert.tests > g.opt_.max_tests) {
      failed = stop = true;
      return false;
    }
    cert.depth_used = std::max(cert.depth_used, depth);
    const double gp = g.gap(ea, ha, eb, hb);
    if (gp > 0.0) {
      cert.min_gap = std::min(cert.min_gap, gp);
      return true;
    }
    if (depth >= g.opt_.max_depth) {
      const std::size_t cap = collect > 0 ? collect : 16;
      if (cert.failures.size() < cap) cert.failures.push_back({ca, cb});
      failed = true;
      if (collect == 0 || cert.failures.size() >= collect) stop = true;
      return false;
    }
    for (const auto& [cca, cha] : g.children(ca, ha)) {
      const CellEval ca_e = g.eval(cca, cha);
      for (const auto& [ccb, chb] : g.children(cb, hb)) {
        if (!resolve(cca, cha, ca_e, ccb, chb, g.eval(ccb, chb), depth + 1)) return false;
      }
    }
    return true;
  }
};

InjectivityCertificate run_certifier(const CellGrid& g, std::size_t collect) {
  InjectivityCertificate cert;
  cert.spacing = g.spacing;
  cert.margin = g.margin;
  cert.cells = static_cast<int>(g.centers.size());
  for (const auto& e : g.evals) {
    for (double l : e.lip) cert.lipschitz = std::max(cert.lipschitz, l);
  }
  Certifier c{g, cert, collect};
  g.near_pairs(2.0, [&](int i, int j) {
    if (c.stop) return;
    c.resolve(g.centers[i], g.h, g.evals[i], g.centers[j], g.h, g.evals[j], 0);
  });
  cert.certified = !c.failed;
  return cert;
}

}  // namespace

InjectivityCertificate certify_injective(const std::vector<LaurentPoly>& comps, const CompactSet& k,
                                         const GridOptions& opt) {
  CellGrid g(comps, k, opt);
  return run_certifier(g, 0);
}

std::vector<std::pair<Complex, Complex>> double_point_candidates(const std::vector<LaurentPoly>& comps,
                                                                 const CompactSet& k, const GridOptions& opt,
                                                                 int max_pairs) {
  CellGrid g(comps, k, opt);
  const auto cert = run_certifier(g, 512);
  struct Cand {
    double score;
    Complex u, v;
  };
  std::vector<Cand> cands;
  for (const auto& [u, v] : cert.failures) {
    double score = 0.0;
    for (const auto& c : comps) score = std::max(score, std::abs(c(u) - c(v)));
    cands.push_back({score, u, v});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.score < b.score; });
  const double cluster = 0.05 * k.disk.radius + 5.0 * g.spacing;
  std::vector<std::pair<Complex, Complex>> out;
  for (const auto& c : cands) {
    bool fresh = true;
    for (const auto& [a, b] : out) {
      const double same = std::max(std::abs(c.u - a), std::abs(c.v - b));
      const double swapped = std::max(std::abs(c.u - b), std::abs(c.v - a));
      if (std::min(same, swapped) <= cluster) {
        fresh = false;
        break;
      }
    }
    if (fresh) out.push_back({c.u, c.v});
    if (static_cast<int>(out.size()) >= max_pairs) break;
  }
  return out;
}

EmbeddingProbe build_probe(const LegendrianCurve& f, const CompactSet& k, Complex u, Complex v,
                           const KernelRows& base_rows, const std::vector<Complex>& samples, std::uint64_t seed) {
  require(f.n >= 1, "curve needs at least one (x, y) pair");
  EmbeddingProbe p;
  p.u = u;
  p.v = v;
  p.path = build_arc(f.domain, u, v, {}, seed);
  KernelRows rows = base_rows;
  rows.arcs.push_back(p.path);
  rows.values.push_back({u, 0});
  rows.values.push_back({v, 0});
  const int nr = rows.size();
  const int e_row = static_cast<int>(rows.cycles.size() + rows.arcs.size()) - 1;
  Eigen::VectorXcd r1 = Eigen::VectorXcd::Zero(nr), r2 = Eigen::VectorXcd::Zero(nr);
  r1(nr - 1) = 1.0;
  r2(e_row) = -1.0;
  auto sols = solve_kernel_rows(f.y[0], SprayRole{0, true}, rows, {r1, r2}, samples, f.domain.pole_centers(), 64,
                                p.report);
  p.w1 = sols[0];
  p.w2 = sols[1];
  p.w3_residual = std::max({std::abs(p.w1(u)), std::abs(p.w1(v) - 1.0), std::abs(p.w2(u)), std::abs(p.w2(v))});
  for (auto s : samples) p.mu = std::max({p.mu, std::abs(p.w1(s)), std::abs(p.w2(s))});
  (void)k;
  return p;
}

std::string EmbeddingResult::diagnostics() const {
  std::ostringstream os;
  os << (certified ? "certified" : "not certified") << "; cells " << certificate.cells << ", spacing "
     << certificate.spacing << ", margin " << certificate.margin << ", tests " << certificate.tests << ", depth "
     << certificate.depth_used << ", min gap " << certificate.min_gap << ", Lipschitz " << certificate.lipschitz
     << "; probes " << probes.size() << "; sup change " << sup_change;
  for (const auto& f : certificate.failures) os << "; unresolved pair " << f.first << " " << f.second;
  for (const auto& t : trace) {
    os << "; radius " << t.radius << ": tried " << t.tried << " (sup " << t.sup_rejects << ", jet " << t.jet_rejects
       << ", certificate " << t.cert_rejects << ")";
  }
  for (const auto& l : log) os << "; " << l;
  return os.str();
}

namespace {

std::vector<LaurentPoly> components(const LegendrianCurve& c) {
  std::vector<LaurentPoly> out;
  for (int q = 0; q < c.dimension(); ++q) out.push_back(c.component(q));
  return out;
}

}  // namespace

EmbeddingResult embedding_search_report(const LegendrianCurve& f, const CompactSet& k, const std::vector<JetSpec>& jets,
                                        double eps, std::uint64_t seed, const EmbeddingOptions& opt) {
  require(f.form.is_standard(), "embedding search needs the standard contact form");
  EmbeddingResult res;
  res.curve = f;
  res.certificate = certify_injective(components(f), k, opt.grid);
  if (res.certificate.certified) {
    res.certified = true;
    res.log.push_back("base curve certified");
    return res;
  }
  if (!(eps > 0.0)) {
    res.log.push_back("no perturbation budget");
    return res;
  }

  const auto samples = sample_compact(k, 400);
  const auto check = grid_in_compact(k, 80);

  KernelRows base;
  base.cycles = hole_cycles(f.domain, k);
  Complex p0 = samples.front();
  if (!jets.empty()) p0 = jets.front().p;
  for (std::size_t i = 0; i < jets.size(); ++i) {
    if (i > 0) base.arcs.push_back(build_arc(f.domain, p0, jets[i].p, {}, seed));
    for (int o = 0; o <= jets[i].m; ++o) base.values.push_back({jets[i].p, o});
  }

  // spray directions: x_1 += xi w, z += xi dz with dz' = -w y_1'
  struct Direction {
    LaurentPoly dx, dz;
    double sup = 0.0;
  };
  std::vector<Direction> dirs;
  const LaurentPoly dy1 = differentiate(f.y[0]);
  auto add_direction = [&](const LaurentPoly& w) {
    LaurentPoly phi = primitive(OneForm{w * dy1});
    Direction d{w, (phi - LaurentPoly::constant(phi(p0))).scaled(-1.0)};
    for (auto s : check) d.sup = std::max({d.sup, std::abs(d.dx(s)), std::abs(d.dz(s))});
    dirs.push_back(std::move(d));
  };
  const auto pairs = double_point_candidates(components(f), k, opt.grid, opt.max_probes);
  for (const auto& [u, v] : pairs) {
    try {
      auto probe = build_probe(f, k, u, v, base, samples, seed);
      add_direction(probe.w1);
      add_direction(probe.w2);
      std::ostringstream os;
      os << "probe " << u << " " << v << ": mu " << probe.mu << ", point residual " << probe.w3_residual;
      res.log.push_back(os.str());
      res.probes.push_back(std::move(probe));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "probe " << u << " " << v << " skipped: " << e.what();
      res.log.push_back(os.str());
    }
  }
  if (dirs.empty()) {
    res.log.push_back("no usable probe pairs");
    return res;
  }
  // polydisk radii scaled per direction so that radius 1 moves each by at most eps
  const double r0 = 1.0;

  std::vector<JetSpec> base_jets;
  for (const auto& j : jets) base_jets.push_back(jet_of_curve(f, j.p, j.m));

  struct Candidate {
    std::vector<Complex> xi;
    LegendrianCurve curve;
    double sup = 0.0, jd = 0.0;
    int verdict = 0;  // 0 certified, 1 sup reject, 2 jet reject, 3 certificate reject
    InjectivityCertificate cert;
  };
  auto evaluate = [&](Candidate& c) {
    LaurentPoly dx, dz;
    for (std::size_t q = 0; q < dirs.size(); ++q) {
      dx = dx + c.xi[q] * dirs[q].dx;
      dz = dz + c.xi[q] * dirs[q].dz;
    }
    c.curve = f;
    c.curve.x[0] = f.x[0] + dx;
    c.curve.z = f.z + dz;
    for (auto s : check) c.sup = std::max({c.sup, std::abs(dx(s)), std::abs(dz(s))});
    if (c.sup > eps) {
      c.verdict = 1;
      return;
    }
    for (std::size_t q = 0; q < jets.size(); ++q) {
      c.jd = std::max(c.jd, jet_distance(jet_of_curve(c.curve, jets[q].p, jets[q].m), base_jets[q]));
    }
    if (c.jd > 1e-10) {
      c.verdict = 2;
      return;
    }
    c.cert = certify_injective(components(c.curve), k, opt.grid);
    c.verdict = c.cert.certified ? 0 : 3;
  };

  // candidates are drawn in seed order and evaluated in parallel batches; the first
  // certified one in draw order wins
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int batch = std::max(1, thread_limit());
  for (int ri = 0; ri < opt.radii; ++ri) {
    SearchTrace tr;
    tr.radius = std::ldexp(r0, -ri);
    for (int t0 = 0; t0 < opt.samples_per_radius; t0 += batch) {
      std::vector<Candidate> cands(std::min(batch, opt.samples_per_radius - t0));
      for (auto& c : cands) {
        for (std::size_t q = 0; q < dirs.size(); ++q) {
          const double rad = tr.radius * eps / std::max(dirs[q].sup, 1e-300) * std::sqrt(unif(rng));
          c.xi.push_back(std::polar(rad, 2.0 * std::numbers::pi * unif(rng)));
        }
      }
      parallel_for(cands.size(), [&](std::size_t i) { evaluate(cands[i]); });
      for (auto& c : cands) {
        ++tr.tried;
        if (c.verdict == 1) {
          ++tr.sup_rejects;
          continue;
        }
        if (c.verdict == 2) {
          ++tr.jet_rejects;
          continue;
        }
        if (c.verdict == 0) {
          res.certified = true;
          res.curve = std::move(c.curve);
          res.certificate = c.cert;
          res.xi = c.xi;
          res.sup_change = c.sup;
          res.jet_change = c.jd;
          res.trace.push_back(tr);
          return res;
        }
        ++tr.cert_rejects;
        if (res.xi.empty()) {
          res.curve = c.curve;
          res.certificate = c.cert;
          res.xi = c.xi;
          res.sup_change = c.sup;
          res.jet_change = c.jd;
        }
      }
    }
    res.trace.push_back(tr);
  }
  return res;
}

LegendrianCurve embedding_search(const LegendrianCurve& f, const CompactSet& k, const std::vector<JetSpec>& jets,
                                 double eps, std::uint64_t seed, const EmbeddingOptions& opt) {
  auto r = embedding_search_report(f, k, jets, eps, seed, opt);
  if (!r.certified) fail(ErrorKind::SearchExhausted, r.diagnostics());
  return r.curve;
}

std::vector<std::vector<Complex>> difference_map(const CurveFamily& family,
                                                 const std::vector<std::pair<Complex, Complex>>& probes,
                                                 const std::vector<Complex>& xi) {
  const LegendrianCurve c = family(xi);
  std::vector<std::vector<Complex>> out;
  for (const auto& [u, v] : probes) {
    auto fu = c(u), fv = c(v);
    for (std::size_t q = 0; q < fu.size(); ++q) fv[q] -= fu[q];
    out.push_back(std::move(fv));
  }
  return out;
}

}  // namespace leglab
