#include <cmath>
#include <numbers>

#include "doctest.h"
#include "leglab/errors.hpp"
#include "leglab/geometry.hpp"
#include "leglab/laurent.hpp"

using namespace leglab;

TEST_CASE("domain invariants") {
  CHECK_THROWS_AS(CircularDomain::plane({Disk{0.0, 1.0}, Disk{1.5, 1.0}}), Error);
  CHECK_THROWS_AS(CircularDomain::disk(0.0, 1.0, {Disk{0.8, 0.3}}), Error);
  auto d = CircularDomain::disk(0.0, 2.0, {Disk{0.0, 0.5}});
  CHECK(d.contains(1.0));
  CHECK_FALSE(d.contains(0.2));
  CHECK_FALSE(d.contains(2.5));
}

TEST_CASE("homology basis") {
  auto disk = CircularDomain::disk(0.0, 2.0);
  CHECK(homology_basis(disk, CompactSet::in_domain(disk, 0.0, 1.0)).empty());

  auto annulus = CircularDomain::disk(0.0, 2.0, {Disk{0.0, 0.5}});
  auto k = CompactSet::in_domain(annulus, 0.0, 1.5);
  auto cycles = homology_basis(annulus, k);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].radius > 0.5);
  CHECK(cycles[0].radius < 1.5);

  auto two = CircularDomain::plane({Disk{0.0, 0.3}, Disk{3.0, 0.3}});
  auto k2 = CompactSet::in_domain(two, 1.5, 3.0);
  auto c2 = homology_basis(two, k2);
  REQUIRE(c2.size() == 2);
  CHECK(std::abs(c2[0].center - c2[1].center) > c2[0].radius + c2[1].radius);
  // residue oracle: 1/(z - c_hole) integrates to 2 pi i exactly on its own cycle
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t h = 0; h < 2; ++h) {
      const Complex v = contour_integral(OneForm{LaurentPoly::pole(two.holes[h].center, 1)}, c2[j]);
      const Complex expect = j == h ? Complex(0.0, 2.0 * std::numbers::pi) : Complex(0.0);
      CHECK(v == expect);
      CHECK(c2[j].encloses(two.holes[h].center) == (j == h));
    }
  }
}

TEST_CASE("build_arc") {
  auto d = CircularDomain::disk(0.0, 2.0);
  auto seg = build_arc(d, 0.0, 1.0, {});
  REQUIRE(seg.pieces().size() == 1);
  CHECK(seg.start() == Complex(0.0));
  CHECK(seg.end() == Complex(1.0));

  auto plane = CircularDomain::plane();
  std::vector<AvoidItem> avoid{Disk{0.0, 1.0}};
  auto detour = build_arc(plane, -1.5, 1.5, avoid);
  CHECK(detour.start() == Complex(-1.5));
  CHECK(detour.end() == Complex(1.5));
  double worst = 1e300;
  for (auto p : detour.sample(20000)) worst = std::min(worst, std::abs(p) - 1.0);
  CHECK(worst >= 1e-3 - 1e-12);
  CHECK(detour.at(0.5).imag() > 0.0);
  // determinism
  auto again = build_arc(plane, -1.5, 1.5, avoid);
  CHECK(again.vertices() == detour.vertices());

  // blocking annulus: inner disk surrounded by a ring of avoided compact sets
  std::vector<AvoidItem> ring;
  CompactSet shell;
  shell.disk = Disk{0.0, 2.0};
  shell.excluded = {Disk{0.0, 1.0}};
  ring.push_back(shell);
  try {
    (void)build_arc(plane, 0.0, 3.0, ring);
    FAIL("expected NoPathFound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoPathFound);
  }
}

TEST_CASE("default exhaustion") {
  auto ex = default_exhaustion(CircularDomain::plane(), 3);
  REQUIRE(ex.sets.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(ex.sets[j].disk.radius == doctest::Approx(j + 1.0));
    CHECK(ex.tags[j] == StepTag::Retract);
  }
  auto d = CircularDomain::plane({Disk{2.0, 0.1}});
  auto ex2 = default_exhaustion(d, 3);
  int attach = 0;
  for (std::size_t j = 0; j < ex2.sets.size(); ++j) {
    if (ex2.tags[j] == StepTag::ArcAttach) {
      ++attach;
      CHECK(ex2.sets[j].enclosed_holes(d).size() == ex2.sets[j - 1].enclosed_holes(d).size() + 1);
    }
  }
  CHECK(attach == 1);
  // nesting with margin
  for (std::size_t j = 0; j + 1 < ex2.sets.size(); ++j) {
    for (auto p : sample_compact(ex2.sets[j], 300)) CHECK(ex2.sets[j + 1].interior(p, 1e-6));
  }
  auto ex3 = default_exhaustion(CircularDomain::plane(), 3, {Complex(0.0, 2.0)});
  for (const auto& k : ex3.sets) CHECK(k.boundary_distance(Complex(0.0, 2.0)) > 1e-3);
}

TEST_CASE("sampling") {
  AdmissibleSet s;
  auto d = CircularDomain::plane();
  s.K.push_back(CompactSet::in_domain(d, 0.0, 1.0));
  auto pts = sample_set(s, 100.0 / std::numbers::pi);
  CHECK(pts.size() == 100);
  for (auto p : pts) CHECK(std::abs(p) <= 1.0 + 1e-12);

  AdmissibleSet a;
  a.gamma.push_back(Arc::segment(0.0, 1.0));
  auto line = sample_set(a, 50.0);
  REQUIRE(line.size() == 50);
  CHECK(std::abs(line[1] - line[0] - 1.0 / 49.0) < 1e-15);
  CHECK(line.back() == Complex(1.0));

  auto annulus = CircularDomain::plane({Disk{0.0, 0.5}});
  auto k = CompactSet::in_domain(annulus, 0.0, 1.5);
  auto ring = sample_compact(k, 400);
  CHECK(ring.size() == 400);
  for (auto p : ring) CHECK(k.contains(p, 1e-12));
}

TEST_CASE("admissible set validation") {
  auto d = CircularDomain::plane();
  AdmissibleSet s;
  s.K.push_back(CompactSet::in_domain(d, 0.0, 1.0));
  s.gamma.push_back(Arc::segment(1.0, 2.0));
  CHECK_NOTHROW(s.validate());
  CHECK(s.component_labels()[0] == s.component_labels()[1]);
  CHECK(s.interior(0.5));
  CHECK(s.interior(1.5));
  CHECK_FALSE(s.interior(1.0));
  AdmissibleSet tangent;
  tangent.K.push_back(CompactSet::in_domain(d, 0.0, 1.0));
  tangent.gamma.push_back(Arc::segment(1.0, Complex(1.0, 1.0)));
  CHECK_THROWS_AS(tangent.validate(), Error);
}
