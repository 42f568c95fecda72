#include <cmath>
#include <random>

#include "doctest.h"
#include "leglab/contact.hpp"
#include "leglab/errors.hpp"

using namespace leglab;

namespace {

LaurentPoly zeta(int k = 1, Complex c = 1.0) { return LaurentPoly::monomial(k, c); }
LaurentPoly cst(Complex c) { return LaurentPoly::constant(c); }

LegendrianCurve curve1(LaurentPoly x, LaurentPoly y, LaurentPoly z) {
  LegendrianCurve c;
  c.n = 1;
  c.x = {std::move(x)};
  c.y = {std::move(y)};
  c.z = std::move(z);
  c.form = ContactForm::standard(1);
  return c;
}

LaurentPoly random_poly(std::mt19937& rng, int deg) {
  std::normal_distribution<double> g;
  std::vector<Complex> c(deg + 1);
  for (auto& v : c) v = Complex(g(rng), g(rng));
  return LaurentPoly::from_dense({}, c, {});
}

}  // namespace

TEST_CASE("verify_legendrian examples") {
  CHECK(verify_legendrian(curve1(zeta(), zeta(), zeta(2, -0.5))).max_residual_coeff == 0.0);
  CHECK(verify_legendrian(curve1(cst(1.0), cst(2.0), cst(3.0))).pass);
  auto bad = verify_legendrian(curve1(zeta(), zeta(), LaurentPoly()));
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_residual_coeff == 1.0);
}

TEST_CASE("c2 example") {
  auto c = curve1(zeta(), zeta(), zeta(2, -0.5));
  auto img = apply_iso(ContactIso{ContactIso::Kind::C2, 2, 1}, c);
  CHECK(img.x[0] == zeta());
  CHECK(img.y[0] == zeta(1, -1.0));
  CHECK((img.z - zeta(2, 0.5)).max_abs_coeff() == 0.0);
  CHECK(verify_legendrian(img).max_residual_coeff == 0.0);

  auto k = curve1(cst(2.0), cst(3.0), cst(5.0));
  auto kimg = apply_iso(ContactIso{ContactIso::Kind::C2, 2, 1}, k);
  CHECK(kimg.y[0].coefficient(0) == Complex(-3.0));
  CHECK(kimg.z.coefficient(0) == Complex(11.0));
}

TEST_CASE("c2 preserves the verdict on random curves") {
  std::mt19937 rng(17);
  const ContactIso c2{ContactIso::Kind::C2, 2, 2};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LaurentPoly> x{random_poly(rng, 4), random_poly(rng, 3)}, y{random_poly(rng, 3), random_poly(rng, 4)};
    auto good = make_legendrian(x, y, 0.0, 0.5, CircularDomain::plane());
    CHECK(verify_legendrian(good).max_residual_coeff <= kConstructResidual);
    auto img = apply_iso(c2, good);
    CHECK(verify_legendrian(img).max_residual_coeff <= kConstructResidual);
    auto back = apply_iso(c2, img);
    CHECK(back.form == ContactForm::standard(2));
    for (int k = 0; k < 5; ++k) CHECK((back.component(k) - good.component(k)).max_abs_coeff() <= 1e-12);

    auto broken = good;
    broken.z = broken.z + zeta(2, 0.1);
    CHECK_FALSE(verify_legendrian(broken).pass);
    CHECK_FALSE(verify_legendrian(apply_iso(c2, broken)).pass);
  }
}

TEST_CASE("c1 is a bit-exact involution") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LaurentPoly> x{random_poly(rng, 3), random_poly(rng, 3), random_poly(rng, 2)};
    std::vector<LaurentPoly> y{random_poly(rng, 3), random_poly(rng, 2), random_poly(rng, 4)};
    auto c = make_legendrian(x, y, 0.0, 0.0, CircularDomain::plane());
    for (int j = 2; j <= 3; ++j) {
      const ContactIso c1{ContactIso::Kind::C1, j, 3};
      auto once = apply_iso(c1, c);
      CHECK(verify_legendrian(once).max_residual_coeff <= kConstructResidual);
      auto twice = apply_iso(c1, once);
      for (int k = 0; k < 7; ++k) CHECK(twice.component(k) == c.component(k));
      CHECK(twice.form == c.form);
    }
  }
}

TEST_CASE("jets") {
  auto c = curve1(zeta(), zeta(), zeta(2, -0.5));
  auto j = jet_of_curve(c, 0.0, 1);
  CHECK(j.x[0] == std::vector<Complex>{0.0, 1.0});
  CHECK(j.y[0] == std::vector<Complex>{0.0, 1.0});
  CHECK(j.z == std::vector<Complex>{0.0, 0.0});
  auto j2 = jet_of_curve(c, 1.0, 2);
  CHECK(j2.z == std::vector<Complex>{-0.5, -1.0, -1.0});
  CHECK(j2.compatible());
  auto k = jet_of_curve(curve1(cst(1.0), cst(2.0), cst(3.0)), Complex(0.3, 0.2), 2);
  CHECK(k.x[0][1] == Complex(0.0));
  CHECK(k.z[2] == Complex(0.0));
  CHECK(jet_distance(j2, j2) == 0.0);
  auto shifted = j2;
  shifted.z[0] += 1.0;
  CHECK(jet_distance(j2, shifted) == 1.0);
  try {
    (void)jet_distance(j, j2);
    FAIL("expected MismatchedJets");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MismatchedJets);
  }
  shifted.z[1] += 1e-3;
  CHECK_FALSE(shifted.compatible());
}

TEST_CASE("jet compatibility of random curves") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = make_legendrian({random_poly(rng, 5), random_poly(rng, 4)}, {random_poly(rng, 4), random_poly(rng, 5)}, 0.0,
                             1.0, CircularDomain::plane());
    CHECK(jet_of_curve(c, Complex(0.2, -0.1), 3).compatibility_defect() < 1e-10);
  }
}

TEST_CASE("max norm") {
  CHECK(max_norm({Complex(3.0, 4.0), 0.0, 0.0}) == 5.0);
  CHECK(max_norm({0.0, 0.0, 0.0}) == 0.0);
  CHECK(max_norm({1.0, Complex(0.0, 2.0), -3.0}) == 3.0);
}

TEST_CASE("make_legendrian refuses non-exact data") {
  auto annulus = CircularDomain::plane({Disk{0.0, 0.5}});
  CHECK_THROWS_AS(make_legendrian({LaurentPoly::pole(0.0, 1)}, {zeta()}, 1.0, 0.0, annulus), Error);
}
