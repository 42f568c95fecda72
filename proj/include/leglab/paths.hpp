#pragma once

#include <complex>
#include <vector>

namespace leglab {

using Complex = std::complex<double>;

/// Positively (orientation = +1) or negatively oriented circle.
struct Cycle {
  Complex center{};
  double radius = 1.0;
  int orientation = 1;

  Complex point(double theta) const;
  /// d/dtheta of point(theta), including orientation.
  Complex tangent(double theta) const;
  bool encloses(Complex p) const { return std::abs(p - center) < radius; }
};

/// One smooth piece of an arc, parametrised proportionally to arclength on [0,1].
struct PathPiece {
  enum class Kind { Segment, CircularArc };

  Kind kind = Kind::Segment;
  Complex a{}, b{};  // segment endpoints
  Complex center{};  // circular arc data
  double radius = 0.0;
  double theta0 = 0.0, theta1 = 0.0;

  static PathPiece segment(Complex from, Complex to);
  static PathPiece circular(Complex center, double radius, double theta0, double theta1);

  Complex point(double t) const;
  Complex derivative(double t) const;  // d point / dt
  Complex start() const { return point(0.0); }
  Complex end() const { return point(1.0); }
  double length() const;
  double distance_to(Complex p) const;
};

/// A piecewise smooth oriented path: a polyline, a chain of circular arcs, or a mix.
class Arc {
 public:
  Arc() = default;
  explicit Arc(std::vector<PathPiece> pieces) : pieces_(std::move(pieces)) {}

  static Arc polyline(const std::vector<Complex>& vertices);
  static Arc segment(Complex from, Complex to) { return polyline({from, to}); }
  static Arc circular(Complex center, double radius, double theta0, double theta1);

  const std::vector<PathPiece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  bool is_polyline() const;
  std::vector<Complex> vertices() const;  // polyline vertices (piece endpoints)

  Complex start() const;
  Complex end() const;
  double length() const;

  /// Point at normalised arclength s in [0,1].
  Complex at(double s) const;
  /// Unit-speed-scaled derivative d point / ds at normalised arclength s (|.| = length()).
  Complex derivative_at(double s) const;
  /// `count` points equally spaced in arclength, endpoints included.
  std::vector<Complex> sample(int count) const;
  double distance_to(Complex p) const;
  Arc reversed() const;

 private:
  std::vector<PathPiece> pieces_;
};

double segment_distance(Complex p, Complex a, Complex b);
double segment_segment_distance(Complex a0, Complex a1, Complex b0, Complex b1);

}  // namespace leglab
