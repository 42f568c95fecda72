#include "leglab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace leglab {

Complex Cycle::point(double theta) const { return center + radius * std::polar(1.0, orientation * theta); }

Complex Cycle::tangent(double theta) const {
  return Complex(0.0, orientation) * radius * std::polar(1.0, orientation * theta);
}

PathPiece PathPiece::segment(Complex from, Complex to) {
  PathPiece p;
  p.kind = Kind::Segment;
  p.a = from;
  p.b = to;
  return p;
}

PathPiece PathPiece::circular(Complex c, double r, double t0, double t1) {
  PathPiece p;
  p.kind = Kind::CircularArc;
  p.center = c;
  p.radius = r;
  p.theta0 = t0;
  p.theta1 = t1;
  return p;
}

Complex PathPiece::point(double t) const {
  if (kind == Kind::Segment) return a + t * (b - a);
  return center + radius * std::polar(1.0, theta0 + t * (theta1 - theta0));
}

Complex PathPiece::derivative(double t) const {
  if (kind == Kind::Segment) return b - a;
  const double th = theta0 + t * (theta1 - theta0);
  return Complex(0.0, theta1 - theta0) * radius * std::polar(1.0, th);
}

double PathPiece::length() const {
  if (kind == Kind::Segment) return std::abs(b - a);
  return radius * std::abs(theta1 - theta0);
}

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

namespace {

double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }

bool segments_cross(Complex a0, Complex a1, Complex b0, Complex b1) {
  const double d1 = cross(a1 - a0, b0 - a0);
  const double d2 = cross(a1 - a0, b1 - a0);
  const double d3 = cross(b1 - b0, a0 - b0);
  const double d4 = cross(b1 - b0, a1 - b0);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

double segment_segment_distance(Complex a0, Complex a1, Complex b0, Complex b1) {
  if (segments_cross(a0, a1, b0, b1)) return 0.0;
  return std::min({segment_distance(a0, b0, b1), segment_distance(a1, b0, b1), segment_distance(b0, a0, a1),
                   segment_distance(b1, a0, a1)});
}

double PathPiece::distance_to(Complex p) const {
  if (kind == Kind::Segment) return segment_distance(p, a, b);
  // closest point on the circular arc: radial projection if inside the angular range
  const double lo = std::min(theta0, theta1), hi = std::max(theta0, theta1);
  double ang = std::arg(p - center);
  // bring ang into [lo, lo + 2pi)
  const double two_pi = 2.0 * std::numbers::pi;
  while (ang < lo) ang += two_pi;
  while (ang >= lo + two_pi) ang -= two_pi;
  double best = std::min(std::abs(p - point(0.0)), std::abs(p - point(1.0)));
  if (ang <= hi) best = std::min(best, std::abs(std::abs(p - center) - radius));
  return best;
}

Arc Arc::polyline(const std::vector<Complex>& vertices) {
  std::vector<PathPiece> pieces;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) pieces.push_back(PathPiece::segment(vertices[i], vertices[i + 1]));
  return Arc(std::move(pieces));
}

Arc Arc::circular(Complex center, double radius, double theta0, double theta1) {
  return Arc({PathPiece::circular(center, radius, theta0, theta1)});
}

bool Arc::is_polyline() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const PathPiece& p) { return p.kind == PathPiece::Kind::Segment; });
}

std::vector<Complex> Arc::vertices() const {
  std::vector<Complex> v;
  if (pieces_.empty()) return v;
  v.push_back(pieces_.front().start());
  for (const auto& p : pieces_) v.push_back(p.end());
  return v;
}

Complex Arc::start() const { return pieces_.empty() ? Complex{} : pieces_.front().start(); }
Complex Arc::end() const { return pieces_.empty() ? Complex{} : pieces_.back().end(); }

double Arc::length() const {
  double total = 0.0;
  for (const auto& p : pieces_) total += p.length();
  return total;
}

Complex Arc::at(double s) const {
  if (pieces_.empty()) return {};
  const double total = length();
  if (total == 0.0) return start();
  double target = std::clamp(s, 0.0, 1.0) * total;
  for (const auto& p : pieces_) {
    const double len = p.length();
    if (target <= len || &p == &pieces_.back()) return p.point(len > 0 ? std::clamp(target / len, 0.0, 1.0) : 0.0);
    target -= len;
  }
  return end();
}

Complex Arc::derivative_at(double s) const {
  if (pieces_.empty()) return {};
  const double total = length();
  if (total == 0.0) return {};
  double target = std::clamp(s, 0.0, 1.0) * total;
  for (const auto& p : pieces_) {
    const double len = p.length();
    if (target <= len || &p == &pieces_.back()) {
      const double t = len > 0 ? std::clamp(target / len, 0.0, 1.0) : 0.0;
      return len > 0 ? p.derivative(t) * (total / len) : Complex{};
    }
    target -= len;
  }
  return {};
}

std::vector<Complex> Arc::sample(int count) const {
  std::vector<Complex> out;
  if (count <= 0) return out;
  if (count == 1) return {at(0.5)};
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(at(static_cast<double>(i) / (count - 1)));
  return out;
}

double Arc::distance_to(Complex p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& piece : pieces_) best = std::min(best, piece.distance_to(p));
  return best;
}

Arc Arc::reversed() const {
  std::vector<PathPiece> rev;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    PathPiece p = *it;
    if (p.kind == PathPiece::Kind::Segment) {
      std::swap(p.a, p.b);
    } else {
      std::swap(p.theta0, p.theta1);
    }
    rev.push_back(p);
  }
  return Arc(std::move(rev));
}

}  // namespace leglab
