#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "leglab/errors.hpp"
#include "leglab/laurent.hpp"

using namespace leglab;

namespace {

const Complex I(0.0, 1.0);

std::vector<Complex> random_points(std::mt19937& rng, int count, const std::vector<Complex>& avoid) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Complex> out;
  while (static_cast<int>(out.size()) < count) {
    Complex z(u(rng), u(rng));
    bool ok = true;
    for (auto c : avoid) ok = ok && std::abs(z - c) > 0.2;
    if (ok) out.push_back(z);
  }
  return out;
}

LaurentPoly random_laurent(std::mt19937& rng, const std::vector<Complex>& centers, int deg, int pole_deg) {
  std::normal_distribution<double> g;
  std::vector<Complex> poly(deg + 1);
  for (auto& c : poly) c = Complex(g(rng), g(rng));
  std::vector<std::vector<Complex>> poles(centers.size(), std::vector<Complex>(pole_deg));
  for (auto& p : poles)
    for (auto& c : p) c = Complex(g(rng), g(rng)) * 0.3;
  return LaurentPoly::from_dense(centers, poly, poles);
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("add") {
  auto z = LaurentPoly::monomial(1);
  CHECK((z + (-z)).is_zero());
  auto m = LaurentPoly::pole(0.0, 1) + z;
  CHECK(m.pole_coeffs().at({0, -1}) == Complex(1.0));
  CHECK(m.poly_coeffs().at(1) == Complex(1.0));
  CHECK(m.poly_coeffs().size() == 1);
  CHECK(z + LaurentPoly() == z);
}

TEST_CASE("mul basics") {
  auto z = LaurentPoly::monomial(1);
  CHECK(z * z == LaurentPoly::monomial(2));
  auto one = LaurentPoly::pole(0.0, 1) * z;
  CHECK(one.is_constant());
  CHECK(one.coefficient(0) == Complex(1.0));
}

TEST_CASE("mul partial fractions against direct product") {
  auto a = LaurentPoly::pole(0.0, 1);
  auto b = LaurentPoly::pole(1.0, 1);
  auto p = a * b;
  CHECK(std::abs(p.pole_coefficient(find_center(p.centers(), 1.0), 1) - 1.0) < 1e-15);
  CHECK(std::abs(p.pole_coefficient(find_center(p.centers(), 0.0), 1) + 1.0) < 1e-15);
  std::mt19937 rng(1);
  for (auto zeta : random_points(rng, 64, {0.0, 1.0})) {
    const Complex direct = (1.0 / zeta) * (1.0 / (zeta - 1.0));
    CHECK(rel(p(zeta), direct) < 1e-12);
  }
}

TEST_CASE("mul of higher-order poles at distinct centers matches evaluation") {
  std::mt19937 rng(7);
  const std::vector<Complex> ca{0.0, Complex(1.0, 0.5)};
  const std::vector<Complex> cb{Complex(-0.8, 0.3), 0.0};
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_laurent(rng, ca, 3, 3);
    auto b = random_laurent(rng, cb, 2, 2);
    auto p = a * b;
    for (auto zeta : random_points(rng, 64, merge_centers(ca, cb))) {
      CHECK(std::abs(p(zeta) - a(zeta) * b(zeta)) / std::max(1.0, std::abs(a(zeta) * b(zeta))) < 1e-12);
    }
  }
}

TEST_CASE("mul refuses ill-conditioned re-expansion") {
  auto a = LaurentPoly::pole(0.0, 8);
  auto b = LaurentPoly::pole(1e-3, 8);
  CHECK_THROWS_AS(a * b, Error);
  try {
    (void)(a * b);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RationalReexpansionFailure);
  }
}

TEST_CASE("mul commutative and distributive") {
  std::mt19937 rng(3);
  const std::vector<Complex> c1{Complex(0.2, 0.1)}, c2{Complex(-0.5, 0.4)}, c3{Complex(0.2, 0.1), Complex(0.9, -0.6)};
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_laurent(rng, c1, 4, 2);
    auto b = random_laurent(rng, c2, 3, 3);
    auto c = random_laurent(rng, c3, 2, 1);
    auto ab = a * b, ba = b * a;
    auto lhs = a * (b + c), rhs = a * b + a * c;
    for (auto zeta : random_points(rng, 64, merge_centers(c3, c2))) {
      CHECK(rel(ab(zeta), ba(zeta)) < 1e-11);
      CHECK(rel(lhs(zeta), rhs(zeta)) < 1e-11);
    }
  }
}

TEST_CASE("differentiate") {
  CHECK(differentiate(LaurentPoly::monomial(2)) == LaurentPoly::monomial(1, 2.0));
  auto d = differentiate(LaurentPoly::pole(0.0, 1));
  CHECK(d.pole_coefficient(0, 2) == Complex(-1.0));
  CHECK(d.pole_coefficient(0, 1) == Complex(0.0));
  CHECK(differentiate(LaurentPoly::constant(3.0)).is_zero());
}

TEST_CASE("primitive") {
  CHECK(primitive(OneForm{LaurentPoly::monomial(1, 2.0)}) == LaurentPoly::monomial(2));
  auto p = primitive(OneForm{LaurentPoly::pole(0.0, 2)});
  CHECK(p.pole_coefficient(0, 1) == Complex(-1.0));
  try {
    (void)primitive(OneForm{LaurentPoly::pole(0.0, 1)});
    FAIL("expected NonexactForm");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonexactForm);
  }
}

TEST_CASE("differentiate inverts primitive on exact forms") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_laurent(rng, {Complex(0.3, 0.0), Complex(-0.4, 0.2)}, 5, 3);
    auto exact = differentiate(f);
    auto back = differentiate(primitive(OneForm{exact}));
    CHECK((back - exact).max_abs_coeff() < 1e-12);
    CHECK(primitive(OneForm{exact}).coefficient(0) == Complex(0.0));
  }
}

TEST_CASE("residues") {
  CHECK(residue_at(OneForm{LaurentPoly::pole(0.0, 1)}, 0) == Complex(1.0));
  CHECK(residue_at(OneForm{LaurentPoly::monomial(3, 1.0, {0.0})}, 0) == Complex(0.0));
  CHECK(residue_at(OneForm{LaurentPoly::pole(I, 1, 3.0)}, 0) == Complex(3.0));
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_laurent(rng, {0.0, Complex(1.0, 1.0), Complex(-1.0, 0.5)}, 4, 4);
    auto d = OneForm{differentiate(f)};
    for (std::size_t i = 0; i < d.coeff.centers().size(); ++i) CHECK(residue_at(d, i) == Complex(0.0));
  }
}

TEST_CASE("contour integrals") {
  const double pi = std::numbers::pi;
  CHECK(std::abs(contour_integral(OneForm{LaurentPoly::pole(0.0, 1)}, Cycle{0.0, 1.0, 1}) - 2.0 * pi * I) < 1e-15);
  CHECK(contour_integral(OneForm{LaurentPoly::monomial(1)}, Cycle{0.0, 1.0, 1}) == Complex(0.0));
  CHECK(contour_integral(OneForm{LaurentPoly::pole(0.0, 1)}, Cycle{2.0, 0.5, 1}) == Complex(0.0));
  CHECK(std::abs(contour_integral(OneForm{LaurentPoly::pole(0.0, 1)}, Cycle{0.0, 1.0, -1}) + 2.0 * pi * I) < 1e-15);
  try {
    (void)contour_integral(OneForm{LaurentPoly::pole(1.0, 1)}, Cycle{0.0, 1.0, 1});
    FAIL("expected CycleThroughPole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CycleThroughPole);
  }
}

TEST_CASE("contour agrees with quadrature on random forms") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    // one center inside the unit circle, one outside
    Complex inside(u(rng) * 0.4, u(rng) * 0.4);
    Complex outside = std::polar(1.6 + 0.3 * std::abs(u(rng)), u(rng) * 2.0);
    auto f = random_laurent(rng, {inside, outside}, 4, 3);
    OneForm a{f};
    const Complex exact = contour_integral(a, Cycle{0.0, 1.0, 1});
    const auto quad = arc_integral(a, Arc::circular(0.0, 1.0, 0.0, 2.0 * std::numbers::pi), 1e-12);
    CHECK(std::abs(exact - quad.value) < 1e-9);
    const auto cyc = integrate_cycle(Cycle{0.0, 1.0, 1}, [&](Complex z) { return f(z); }, 1e-12);
    CHECK(std::abs(exact - cyc.value) < 1e-10);
  }
}

TEST_CASE("arc integrals") {
  auto seg = Arc::segment(0.0, 1.0);
  CHECK(std::abs(arc_integral(OneForm{LaurentPoly::constant(1.0)}, seg, 1e-13).value - 1.0) < 1e-13);
  CHECK(std::abs(arc_integral(OneForm{LaurentPoly::monomial(1, 2.0)}, seg, 1e-13).value - 1.0) < 1e-13);
  auto semi = Arc::circular(0.0, 1.0, 0.0, std::numbers::pi);
  auto r = arc_integral(OneForm{LaurentPoly::pole(0.0, 1)}, semi, 1e-12);
  CHECK(std::abs(r.value - I * std::numbers::pi) < 1e-12);
  CHECK(r.error <= 1e-12);
}

TEST_CASE("quadrature cap") {
  // integrand with a nearly singular spike; tolerance unreachable
  auto seg = Arc::segment(-1.0, 1.0);
  try {
    (void)integrate_path(seg, [](Complex z) { return 1.0 / (z - Complex(0.0, 1e-200)); }, 1e-300);
    FAIL("expected QuadratureNotConverged");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureNotConverged);
  }
}

TEST_CASE("evaluate and jets") {
  auto z2 = LaurentPoly::monomial(2);
  auto jet = jet_at(z2, 1.0, 1);
  REQUIRE(jet.size() == 2);
  CHECK(jet[0] == Complex(1.0));
  CHECK(jet[1] == Complex(2.0));
  CHECK(jet_at(LaurentPoly::pole(0.0, 1), 2.0, 0)[0] == Complex(0.5));
  CHECK(std::abs(evaluate(z2 + LaurentPoly::constant(1.0), I)) < 1e-15);
  CHECK_THROWS_AS(evaluate(LaurentPoly::pole(0.0, 1), 0.0), Error);
}

TEST_CASE("normalized form") {
  auto a = LaurentPoly::from_dense({}, {1.0, 1e-301, 0.0}, {});
  CHECK(a.dense_poly().size() == 1);
  CHECK_THROWS_AS(LaurentPoly::from_dense({0.0, 1e-13}, {}, {}), Error);
}

TEST_CASE("exact arc integral agrees with quadrature") {
  std::mt19937 rng(77);
  const double pi = std::numbers::pi;
  auto semi = Arc::circular(0.0, 1.0, 0.0, pi);
  CHECK(std::abs(exact_arc_integral(OneForm{LaurentPoly::pole(0.0, 1)}, semi) - Complex(0.0, pi)) < 1e-15);
  auto loop = Arc::circular(0.0, 1.0, 0.0, 2.0 * pi);
  CHECK(std::abs(exact_arc_integral(OneForm{LaurentPoly::pole(0.0, 1)}, loop) - Complex(0.0, 2.0 * pi)) < 1e-14);
  auto zig = Arc::polyline({Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(-1.0, 0.0), Complex(0.0, -1.0), Complex(1.0, 0.1)});
  for (int trial = 0; trial < 30; ++trial) {
    auto f = random_laurent(rng, {Complex(0.1, 0.05), Complex(2.5, 0.0)}, 4, 3);
    const Complex exact = exact_arc_integral(OneForm{f}, zig);
    const auto quad = arc_integral(OneForm{f}, zig, 1e-12);
    CHECK(std::abs(exact - quad.value) < 1e-10);
  }
}
