#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "leglab/paths.hpp"

namespace leglab {

/// Closed disk.
struct Disk {
  Complex center{};
  double radius = 0.0;

  bool contains(Complex p, double tol = 0.0) const { return std::abs(p - center) <= radius + tol; }
};

/// The plane or an open disk, minus finitely many disjoint closed disks (holes).
struct CircularDomain {
  bool is_plane = true;
  Disk outer;  // ignored when is_plane
  std::vector<Disk> holes;

  static CircularDomain plane(std::vector<Disk> holes = {});
  static CircularDomain disk(Complex center, double radius, std::vector<Disk> holes = {});

  /// Throws PreconditionViolation when holes overlap or leave the outer disk.
  void validate() const;
  std::vector<Complex> pole_centers() const;
  /// Inside the outer disk (with `margin` to its boundary) and off every hole (same margin).
  bool contains(Complex p, double margin = 0.0) const;
};

/// Disk(center, radius) minus open excluded disks (enlarged holes).
struct CompactSet {
  Disk disk;
  std::vector<Disk> excluded;

  /// Disk in `d` minus slightly enlarged copies of the holes that meet it. `enlargement`
  /// in (0,1] scales the collar added around each hole.
  static CompactSet in_domain(const CircularDomain& d, Complex center, double radius, double enlargement = 1.0);

  bool contains(Complex p, double tol = 0.0) const;
  /// Distance from p to the set (0 inside).
  double distance_to(Complex p) const;
  /// Distance from p to the boundary of the set (p anywhere).
  double boundary_distance(Complex p) const;
  bool interior(Complex p, double margin) const { return contains(p) && boundary_distance(p) > margin; }
  double area() const;
  /// Outer circle (positive) followed by excluded circles (negative orientation).
  std::vector<Cycle> boundary_cycles() const;
  /// Indices of holes of `d` lying inside the outer disk.
  std::vector<std::size_t> enclosed_holes(const CircularDomain& d) const;
};

/// S = K ∪ Γ: disjoint compact pieces plus arcs meeting them only at endpoints.
struct AdmissibleSet {
  std::vector<CompactSet> K;
  std::vector<Arc> gamma;

  /// Checks arc/arc disjointness, arc/K contact only at endpoints and a 5 degree
  /// minimum crossing angle at every endpoint lying on some bK.
  void validate() const;
  bool contains(Complex p, double tol = 1e-9) const;
  double distance_to(Complex p) const;
  /// Interior of a K component, or relative interior of an arc (not an endpoint).
  bool interior(Complex p, double margin = 1e-9) const;
  /// Radius of the smallest disk around `c` containing S.
  double extent(Complex c = 0.0) const;
  /// Number of connected components (K pieces glued by arcs).
  std::vector<int> component_labels() const;
};

enum class StepTag { Retract, ArcAttach };

struct Exhaustion {
  std::vector<CompactSet> sets;
  std::vector<StepTag> tags;  // tags[0] describes K_0 itself and is always Retract
};

std::vector<Cycle> homology_basis(const CircularDomain& d, const CompactSet& k);
/// homology_basis(d, k) followed by one circle around each hole of d not enclosed by k.
std::vector<Cycle> hole_cycles(const CircularDomain& d, const CompactSet& k);

using AvoidItem = std::variant<CompactSet, Arc, Disk>;

/// Polyline from `from` to `to` inside `d` avoiding holes and `avoid` by `margin`.
/// Throws NoPathFound.
Arc build_arc(const CircularDomain& d, Complex from, Complex to, const std::vector<AvoidItem>& avoid,
              std::uint64_t seed = 0, double margin = 1e-3);

/// Concentric disks around the outer center (0 for the plane) minus enlarged holes.
Exhaustion default_exhaustion(const CircularDomain& d, int count, const std::vector<Complex>& marked = {});

/// Deterministic quasi-uniform samples: about area*density points per K piece and
/// round(length*density) points per arc.
std::vector<Complex> sample_set(const AdmissibleSet& s, double density);
/// Exactly `count` points on a compact set (sunflower interior + boundary circles).
std::vector<Complex> sample_compact(const CompactSet& k, int count);

/// Points of an n x n lattice over the bounding box of k that lie in k, plus
/// 4n points on each boundary circle.
std::vector<Complex> grid_in_compact(const CompactSet& k, int n);

double distance_to_item(const AvoidItem& item, Complex p);

}  // namespace leglab
