#include "leglab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>

#include "leglab/errors.hpp"

namespace leglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 2.39996322972865332;  // pi (3 - sqrt 5)

/// Gap between hole `i` and the nearest other boundary of the domain.
double hole_gap(const CircularDomain& d, std::size_t i) {
  const Disk& h = d.holes[i];
  double gap = kInf;
  for (std::size_t j = 0; j < d.holes.size(); ++j) {
    if (j == i) continue;
    gap = std::min(gap, std::abs(h.center - d.holes[j].center) - h.radius - d.holes[j].radius);
  }
  if (!d.is_plane) gap = std::min(gap, d.outer.radius - std::abs(h.center - d.outer.center) - h.radius);
  return gap;
}

double enlarged_radius(const CircularDomain& d, std::size_t i, double enlargement = 1.0) {
  const double r = d.holes[i].radius;
  return r + enlargement * std::min(0.1 * r, 0.25 * hole_gap(d, i));
}

}  // namespace

CircularDomain CircularDomain::plane(std::vector<Disk> holes) {
  CircularDomain d;
  d.is_plane = true;
  d.holes = std::move(holes);
  d.validate();
  return d;
}

CircularDomain CircularDomain::disk(Complex center, double radius, std::vector<Disk> holes) {
  CircularDomain d;
  d.is_plane = false;
  d.outer = Disk{center, radius};
  d.holes = std::move(holes);
  d.validate();
  return d;
}

void CircularDomain::validate() const {
  if (!is_plane) require(outer.radius > 0.0, "outer radius must be positive");
  for (std::size_t i = 0; i < holes.size(); ++i) {
    require(holes[i].radius > 0.0, "hole radius must be positive");
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      require(std::abs(holes[i].center - holes[j].center) > holes[i].radius + holes[j].radius,
              "holes must be pairwise disjoint");
    }
    if (!is_plane) {
      require(std::abs(holes[i].center - outer.center) + holes[i].radius < outer.radius,
              "holes must lie strictly inside the outer disk");
    }
  }
}

std::vector<Complex> CircularDomain::pole_centers() const {
  std::vector<Complex> out;
  for (const auto& h : holes) out.push_back(h.center);
  return out;
}

bool CircularDomain::contains(Complex p, double margin) const {
  if (!is_plane && std::abs(p - outer.center) > outer.radius - margin) return false;
  return std::all_of(holes.begin(), holes.end(),
                     [&](const Disk& h) { return std::abs(p - h.center) > h.radius + margin; });
}

CompactSet CompactSet::in_domain(const CircularDomain& d, Complex center, double radius, double enlargement) {
  require(enlargement > 0.0 && enlargement <= 1.0, "enlargement must lie in (0,1]");
  CompactSet k;
  k.disk = Disk{center, radius};
  if (!d.is_plane) {
    require(std::abs(center - d.outer.center) + radius < d.outer.radius, "compact set must lie inside the domain");
  }
  for (std::size_t i = 0; i < d.holes.size(); ++i) {
    const double dist = std::abs(d.holes[i].center - center);
    const double re = enlarged_radius(d, i, enlargement);
    if (dist - re >= radius) continue;  // hole outside the disk
    require(dist + re < radius, "compact set boundary crosses a hole");
    k.excluded.push_back(Disk{d.holes[i].center, re});
  }
  return k;
}

bool CompactSet::contains(Complex p, double tol) const {
  if (std::abs(p - disk.center) > disk.radius + tol) return false;
  return std::all_of(excluded.begin(), excluded.end(),
                     [&](const Disk& e) { return std::abs(p - e.center) >= e.radius - tol; });
}

double CompactSet::distance_to(Complex p) const {
  const double r = std::abs(p - disk.center);
  if (r > disk.radius) return r - disk.radius;
  for (const auto& e : excluded) {
    const double q = std::abs(p - e.center);
    if (q < e.radius) return e.radius - q;
  }
  return 0.0;
}

double CompactSet::boundary_distance(Complex p) const {
  double best = std::abs(std::abs(p - disk.center) - disk.radius);
  for (const auto& e : excluded) best = std::min(best, std::abs(std::abs(p - e.center) - e.radius));
  return best;
}

double CompactSet::area() const {
  double a = std::numbers::pi * disk.radius * disk.radius;
  for (const auto& e : excluded) a -= std::numbers::pi * e.radius * e.radius;
  return a;
}

std::vector<Cycle> CompactSet::boundary_cycles() const {
  std::vector<Cycle> out{Cycle{disk.center, disk.radius, 1}};
  for (const auto& e : excluded) out.push_back(Cycle{e.center, e.radius, -1});
  return out;
}

std::vector<std::size_t> CompactSet::enclosed_holes(const CircularDomain& d) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.holes.size(); ++i) {
    if (std::abs(d.holes[i].center - disk.center) < disk.radius) out.push_back(i);
  }
  return out;
}

void AdmissibleSet::validate() const {
  constexpr int kSamples = 512;
  const double min_angle = 5.0 * std::numbers::pi / 180.0;
  for (std::size_t a = 0; a < gamma.size(); ++a) {
    const Arc& arc = gamma[a];
    require(!arc.empty(), "empty arc in admissible set");
    require(std::abs(arc.start() - arc.end()) > 1e-9, "arc endpoints must be distinct");
    const auto pts = arc.sample(kSamples);
    // self-intersection on sample chords
    for (int i = 0; i + 1 < kSamples; ++i) {
      for (int j = i + 2; j + 1 < kSamples; ++j) {
        if (segment_segment_distance(pts[i], pts[i + 1], pts[j], pts[j + 1]) <= 1e-9) {
          fail(ErrorKind::PreconditionViolation, "arc is self-intersecting");
        }
      }
    }
    // contact with K only at endpoints
    for (const auto& k : K) {
      for (int i = 1; i + 1 < kSamples; ++i) {
        if (k.contains(pts[i]) && k.boundary_distance(pts[i]) > 1e-9) {
          fail(ErrorKind::PreconditionViolation, "arc enters a compact piece away from its endpoints");
        }
      }
      for (int end = 0; end < 2; ++end) {
        const Complex e = end == 0 ? arc.start() : arc.end();
        if (k.boundary_distance(e) > 1e-9) continue;
        // boundary tangent of the nearest boundary circle
        Complex centre = k.disk.center;
        double best = std::abs(std::abs(e - k.disk.center) - k.disk.radius);
        for (const auto& x : k.excluded) {
          const double dd = std::abs(std::abs(e - x.center) - x.radius);
          if (dd < best) {
            best = dd;
            centre = x.center;
          }
        }
        const Complex tb = Complex(0.0, 1.0) * (e - centre);
        const Complex ta = arc.derivative_at(end == 0 ? 0.0 : 1.0);
        const double c = std::abs((ta * std::conj(tb)).real()) / (std::abs(ta) * std::abs(tb));
        if (std::acos(std::min(1.0, c)) < min_angle) {
          fail(ErrorKind::PreconditionViolation, "arc meets a compact boundary at less than 5 degrees");
        }
      }
    }
    for (std::size_t b = a + 1; b < gamma.size(); ++b) {
      const auto other = gamma[b].sample(kSamples);
      for (int i = 0; i + 1 < kSamples; ++i) {
        for (int j = 0; j + 1 < kSamples; ++j) {
          if (segment_segment_distance(pts[i], pts[i + 1], other[j], other[j + 1]) <= 1e-9) {
            fail(ErrorKind::PreconditionViolation, "arcs of an admissible set must be disjoint");
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < K.size(); ++i) {
    for (std::size_t j = i + 1; j < K.size(); ++j) {
      require(std::abs(K[i].disk.center - K[j].disk.center) > K[i].disk.radius + K[j].disk.radius,
              "compact pieces must be disjoint");
    }
  }
}

bool AdmissibleSet::contains(Complex p, double tol) const { return distance_to(p) <= tol; }

double AdmissibleSet::distance_to(Complex p) const {
  double best = kInf;
  for (const auto& k : K) best = std::min(best, k.distance_to(p));
  for (const auto& a : gamma) best = std::min(best, a.distance_to(p));
  return best;
}

bool AdmissibleSet::interior(Complex p, double margin) const {
  for (const auto& k : K) {
    if (k.interior(p, margin)) return true;
  }
  for (const auto& a : gamma) {
    if (a.distance_to(p) <= 1e-9 && std::abs(p - a.start()) > margin && std::abs(p - a.end()) > margin) {
      bool on_boundary = false;
      for (const auto& k : K) on_boundary = on_boundary || (k.contains(p, 1e-9) && k.boundary_distance(p) <= margin);
      if (!on_boundary) return true;
    }
  }
  return false;
}

double AdmissibleSet::extent(Complex c) const {
  double r = 0.0;
  for (const auto& k : K) r = std::max(r, std::abs(k.disk.center - c) + k.disk.radius);
  for (const auto& a : gamma) {
    for (const auto& piece : a.pieces()) {
      if (piece.kind == PathPiece::Kind::Segment) {
        r = std::max({r, std::abs(piece.a - c), std::abs(piece.b - c)});
      } else {
        r = std::max(r, std::abs(piece.center - c) + piece.radius);
      }
    }
  }
  return r;
}

std::vector<int> AdmissibleSet::component_labels() const {
  const std::size_t n = K.size() + gamma.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < gamma.size(); ++a) {
    for (std::size_t k = 0; k < K.size(); ++k) {
      if (K[k].distance_to(gamma[a].start()) <= 1e-9 || K[k].distance_to(gamma[a].end()) <= 1e-9) {
        parent[find(static_cast<int>(K.size() + a))] = find(static_cast<int>(k));
      }
    }
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = find(static_cast<int>(i));
  return labels;
}

std::vector<Cycle> homology_basis(const CircularDomain& d, const CompactSet& k) {
  std::vector<Cycle> out;
  for (std::size_t i : k.enclosed_holes(d)) {
    const Disk& h = d.holes[i];
    double lo = h.radius;
    for (const auto& e : k.excluded) {
      if (std::abs(e.center - h.center) < 1e-12) lo = std::max(lo, e.radius);
    }
    double hi = k.disk.radius - std::abs(h.center - k.disk.center);
    for (std::size_t j = 0; j < d.holes.size(); ++j) {
      if (j == i) continue;
      double rj = d.holes[j].radius;
      for (const auto& e : k.excluded) {
        if (std::abs(e.center - d.holes[j].center) < 1e-12) rj = std::max(rj, e.radius);
      }
      hi = std::min(hi, std::abs(d.holes[j].center - h.center) - rj);
    }
    out.push_back(Cycle{h.center, 0.5 * (lo + hi), 1});
  }
  return out;
}

std::vector<Cycle> hole_cycles(const CircularDomain& d, const CompactSet& k) {
  std::vector<Cycle> out = homology_basis(d, k);
  const auto inside = k.enclosed_holes(d);
  for (std::size_t i = 0; i < d.holes.size(); ++i) {
    if (std::find(inside.begin(), inside.end(), i) != inside.end()) continue;
    const Disk& h = d.holes[i];
    double hi = 2.0 * h.radius;
    if (!d.is_plane) hi = std::min(hi, d.outer.radius - std::abs(h.center - d.outer.center));
    for (std::size_t j = 0; j < d.holes.size(); ++j) {
      if (j != i) hi = std::min(hi, std::abs(d.holes[j].center - h.center) - d.holes[j].radius);
    }
    out.push_back(Cycle{h.center, 0.5 * (h.radius + hi), 1});
  }
  return out;
}

double distance_to_item(const AvoidItem& item, Complex p) {
  if (const auto* k = std::get_if<CompactSet>(&item)) return k->distance_to(p);
  if (const auto* a = std::get_if<Arc>(&item)) return a->distance_to(p);
  const Disk& disk = std::get<Disk>(item);
  return std::max(0.0, std::abs(p - disk.center) - disk.radius);
}

namespace {

struct Router {
  const CircularDomain& d;
  const std::vector<AvoidItem>& avoid;
  double margin;

  double clearance(Complex p) const {
    double c = kInf;
    if (!d.is_plane) c = d.outer.radius - std::abs(p - d.outer.center);
    for (const auto& h : d.holes) c = std::min(c, std::abs(p - h.center) - h.radius);
    for (const auto& item : avoid) c = std::min(c, distance_to_item(item, p));
    return c;
  }

  bool segment_clear(Complex a, Complex b, int depth = 0) const {
    const Complex m = 0.5 * (a + b);
    const double half = 0.5 * std::abs(b - a);
    const double c = clearance(m);
    if (c < margin) return false;
    if (c - half >= margin) return true;
    if (depth > 40 || half < 1e-9) return true;
    return segment_clear(a, m, depth + 1) && segment_clear(m, b, depth + 1);
  }
};

}  // namespace

Arc build_arc(const CircularDomain& d, Complex from, Complex to, const std::vector<AvoidItem>& avoid,
              std::uint64_t seed, double margin) {
  Router router{d, avoid, margin};
  if (router.clearance(from) < margin || router.clearance(to) < margin) {
    fail(ErrorKind::NoPathFound, "arc endpoint lies inside an avoided region");
  }
  if (router.segment_clear(from, to)) return Arc::segment(from, to);

  // bounding box of everything relevant
  double xmin = std::min(from.real(), to.real()), xmax = std::max(from.real(), to.real());
  double ymin = std::min(from.imag(), to.imag()), ymax = std::max(from.imag(), to.imag());
  auto grow = [&](Complex c, double r) {
    xmin = std::min(xmin, c.real() - r);
    xmax = std::max(xmax, c.real() + r);
    ymin = std::min(ymin, c.imag() - r);
    ymax = std::max(ymax, c.imag() + r);
  };
  for (const auto& h : d.holes) grow(h.center, h.radius);
  for (const auto& item : avoid) {
    if (const auto* k = std::get_if<CompactSet>(&item)) grow(k->disk.center, k->disk.radius);
    if (const auto* disk = std::get_if<Disk>(&item)) grow(disk->center, disk->radius);
    if (const auto* a = std::get_if<Arc>(&item)) {
      for (auto p : a->sample(64)) grow(p, 0.0);
    }
  }
  const double pad = 0.25 * std::max(xmax - xmin, ymax - ymin) + 20.0 * margin;
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;
  if (!d.is_plane) {
    xmin = std::max(xmin, d.outer.center.real() - d.outer.radius);
    xmax = std::min(xmax, d.outer.center.real() + d.outer.radius);
    ymin = std::max(ymin, d.outer.center.imag() - d.outer.radius);
    ymax = std::min(ymax, d.outer.center.imag() + d.outer.radius);
  }
  constexpr int kGrid = 97;
  const double hx = (xmax - xmin) / (kGrid - 1), hy = (ymax - ymin) / (kGrid - 1);
  // the seed only shifts the lattice by a fraction of a cell
  const double shift = seed == 0 ? 0.0 : 0.5 * static_cast<double>((seed * 2654435761ULL) % 1000ULL) / 1000.0;

  // node 0 = from, node 1 = to, then lattice nodes row by row from the top
  std::vector<Complex> nodes{from, to};
  std::vector<int> lattice(kGrid * kGrid, -1);
  for (int r = 0; r < kGrid; ++r) {
    for (int c = 0; c < kGrid; ++c) {
      const Complex p(xmin + (c + shift) * hx, ymax - (r + shift) * hy);
      if (router.clearance(p) >= 1.5 * margin) {
        lattice[r * kGrid + c] = static_cast<int>(nodes.size());
        nodes.push_back(p);
      }
    }
  }
  std::vector<std::vector<std::pair<int, double>>> adj(nodes.size());
  auto connect = [&](int a, int b) {
    const double w = std::abs(nodes[a] - nodes[b]) * (1.0 - 1e-9 * std::tanh(0.5 * (nodes[a] + nodes[b]).imag()));
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  };
  for (int r = 0; r < kGrid; ++r) {
    for (int c = 0; c < kGrid; ++c) {
      const int a = lattice[r * kGrid + c];
      if (a < 0) continue;
      const int nbr[4][2] = {{0, 1}, {1, -1}, {1, 0}, {1, 1}};
      for (const auto& o : nbr) {
        const int rr = r + o[0], cc = c + o[1];
        if (rr >= kGrid || cc < 0 || cc >= kGrid) continue;
        const int b = lattice[rr * kGrid + cc];
        if (b >= 0 && router.segment_clear(nodes[a], nodes[b])) connect(a, b);
      }
    }
  }
  for (int endpoint = 0; endpoint < 2; ++endpoint) {
    std::vector<std::pair<double, int>> cand;
    for (std::size_t i = 2; i < nodes.size(); ++i) cand.push_back({std::abs(nodes[i] - nodes[endpoint]), static_cast<int>(i)});
    std::sort(cand.begin(), cand.end());
    int linked = 0;
    for (std::size_t i = 0; i < cand.size() && i < 64 && linked < 16; ++i) {
      if (router.segment_clear(nodes[endpoint], nodes[cand[i].second])) {
        connect(endpoint, cand[i].second);
        ++linked;
      }
    }
  }
  // Dijkstra with deterministic tie-breaking by node index
  std::vector<double> dist(nodes.size(), kInf);
  std::vector<int> prev(nodes.size(), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  dist[0] = 0.0;
  queue.push({0.0, 0});
  while (!queue.empty()) {
    const auto [du, u] = queue.top();
    queue.pop();
    if (du > dist[u]) continue;
    if (u == 1) break;
    for (const auto& [v, w] : adj[u]) {
      if (du + w < dist[v]) {
        dist[v] = du + w;
        prev[v] = u;
        queue.push({dist[v], v});
      }
    }
  }
  if (prev[1] < 0) fail(ErrorKind::NoPathFound, "avoided regions disconnect the endpoints on the routing grid");
  std::vector<Complex> path;
  for (int v = 1; v >= 0; v = prev[v]) path.push_back(nodes[v]);
  std::reverse(path.begin(), path.end());
  // shortcut: jump to the furthest visible vertex
  std::vector<Complex> simple{path.front()};
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    std::size_t j = path.size() - 1;
    while (j > i + 1 && !router.segment_clear(path[i], path[j])) --j;
    simple.push_back(path[j]);
    i = j;
  }
  return Arc::polyline(simple);
}

Exhaustion default_exhaustion(const CircularDomain& d, int count, const std::vector<Complex>& marked) {
  require(count >= 1, "exhaustion needs at least one set");
  const Complex c = d.is_plane ? Complex(0.0) : d.outer.center;
  std::vector<double> radii;
  for (int j = 0; j < count; ++j) {
    radii.push_back(d.is_plane ? static_cast<double>(j + 1) : d.outer.radius * (j + 1) / (count + 1));
  }
  auto adjust = [&](double r) {
    // push the boundary circle off enlarged holes
    for (int pass = 0; pass < 4; ++pass) {
      for (std::size_t i = 0; i < d.holes.size(); ++i) {
        const double dist = std::abs(d.holes[i].center - c);
        const double re = enlarged_radius(d, i);
        if (std::abs(dist - r) <= re * 1.05) r = dist + 1.5 * re;
      }
    }
    // keep marked points off the boundary circle
    for (int pass = 0; pass < 4; ++pass) {
      for (const auto& p : marked) {
        if (std::abs(std::abs(p - c) - r) < 1e-3 * r) r *= (std::abs(p - c) < r) ? 1.01 : 0.99;
      }
    }
    return r;
  };
  for (auto& r : radii) r = adjust(r);
  // split steps that would enclose several holes at once
  std::vector<double> refined;
  double prev_r = 0.0;
  for (double r : radii) {
    if (r <= prev_r) r = adjust(prev_r * 1.05 + 1e-3);
    std::vector<std::pair<double, double>> fresh;  // (inner edge, outer edge) of new holes
    for (std::size_t i = 0; i < d.holes.size(); ++i) {
      const double dist = std::abs(d.holes[i].center - c);
      const double re = enlarged_radius(d, i);
      if (dist < r && dist >= prev_r) fresh.push_back({dist - re, dist + re});
    }
    std::sort(fresh.begin(), fresh.end());
    for (std::size_t i = 0; i + 1 < fresh.size(); ++i) {
      if (fresh[i].second < fresh[i + 1].first) {
        const double mid = 0.5 * (fresh[i].second + fresh[i + 1].first);
        if (mid > prev_r) refined.push_back(mid);
      }
    }
    refined.push_back(r);
    prev_r = r;
  }
  Exhaustion ex;
  std::size_t prev_holes = 0;
  for (std::size_t j = 0; j < refined.size(); ++j) {
    if (!d.is_plane && refined[j] >= d.outer.radius - std::abs(c - d.outer.center)) break;
    CompactSet k = CompactSet::in_domain(d, c, refined[j], 1.0 / static_cast<double>(j + 1));
    const std::size_t h = k.enclosed_holes(d).size();
    ex.tags.push_back(j > 0 && h > prev_holes ? StepTag::ArcAttach : StepTag::Retract);
    ex.sets.push_back(std::move(k));
    prev_holes = h;
  }
  return ex;
}

std::vector<Complex> sample_compact(const CompactSet& k, int count) {
  std::vector<Complex> out;
  if (count <= 0) return out;
  // boundary share ~ 2 sqrt(count), split by circumference
  double circumference = k.disk.radius;
  for (const auto& e : k.excluded) circumference += e.radius;
  const int boundary = std::min(count, std::max(count >= 8 ? 8 : 0, static_cast<int>(std::lround(2.0 * std::sqrt(count)))));
  int remaining = boundary;
  auto ring = [&](const Disk& disk, int n) {
    for (int i = 0; i < n; ++i) out.push_back(disk.center + std::polar(disk.radius, 2.0 * std::numbers::pi * i / n));
  };
  for (const auto& e : k.excluded) {
    const int n = static_cast<int>(std::lround(boundary * e.radius / circumference));
    ring(e, n);
    remaining -= n;
  }
  ring(k.disk, std::max(0, remaining));
  const int interior = count - static_cast<int>(out.size());
  if (interior <= 0) return out;
  const double full = std::numbers::pi * k.disk.radius * k.disk.radius;
  int m = std::max(interior, static_cast<int>(std::ceil(interior * full / std::max(k.area(), 1e-12))));
  std::vector<Complex> inner;
  for (int attempt = 0; attempt < 10000; ++attempt, ++m) {
    inner.clear();
    for (int i = 0; i < m; ++i) {
      const double r = k.disk.radius * std::sqrt((i + 0.5) / m);
      const Complex p = k.disk.center + std::polar(r, i * kGolden);
      bool ok = true;
      for (const auto& e : k.excluded) ok = ok && std::abs(p - e.center) > e.radius;
      if (ok) inner.push_back(p);
    }
    if (static_cast<int>(inner.size()) >= interior) break;
  }
  inner.resize(std::min<std::size_t>(inner.size(), interior));
  out.insert(out.end(), inner.begin(), inner.end());
  return out;
}

std::vector<Complex> sample_set(const AdmissibleSet& s, double density) {
  require(density > 0.0, "density must be positive");
  std::vector<Complex> out;
  for (const auto& k : s.K) {
    const auto pts = sample_compact(k, std::max(1, static_cast<int>(std::lround(k.area() * density))));
    out.insert(out.end(), pts.begin(), pts.end());
  }
  for (const auto& a : s.gamma) {
    const auto pts = a.sample(std::max(2, static_cast<int>(std::lround(a.length() * density))));
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

std::vector<Complex> grid_in_compact(const CompactSet& k, int n) {
  std::vector<Complex> out;
  const double r = k.disk.radius;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex p = k.disk.center + Complex(-r + 2.0 * r * i / (n - 1), -r + 2.0 * r * j / (n - 1));
      if (k.contains(p)) out.push_back(p);
    }
  }
  for (const auto& c : k.boundary_cycles()) {
    for (int i = 0; i < 4 * n; ++i) out.push_back(c.point(2.0 * std::numbers::pi * i / (4 * n)));
  }
  return out;
}

}  // namespace leglab
