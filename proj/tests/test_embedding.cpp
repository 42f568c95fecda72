#include <cmath>

#include "doctest.h"
#include "leglab/embedding.hpp"
#include "leglab/errors.hpp"

using namespace leglab;

namespace {

LaurentPoly z() { return LaurentPoly::monomial(1); }
LaurentPoly c(Complex v) { return LaurentPoly::constant(v); }

// x(1) = x(-1), y(1) = y(-1) = 0 and z odd with z(1) = 0: a genuine double point
LegendrianCurve nodal() {
  auto x = z() * z() - c(1.0) - (z() * z() * z() * z()).scaled(7.0 / 6.0);
  auto y = z() * z() * z() - z();
  return make_legendrian({x}, {y}, 0.0, 0.0, CircularDomain::plane());
}

std::vector<LaurentPoly> comps(const LegendrianCurve& f) { return {f.x[0], f.y[0], f.z}; }

const CompactSet kDisk = CompactSet::in_domain(CircularDomain::plane(), 0.0, 1.2);

}  // namespace

TEST_CASE("nodal oracle") {
  auto f = nodal();
  auto a = f(1.0), b = f(-1.0);
  for (int q = 0; q < 3; ++q) CHECK(std::abs(a[q] - b[q]) < 1e-14);
  CHECK(std::abs(a[0] + 7.0 / 6.0) < 1e-14);
}

TEST_CASE("certificate accepts an embedded curve and rejects a node") {
  auto emb = make_legendrian({z()}, {z() * z()}, 0.0, 0.0, CircularDomain::plane());
  auto good = certify_injective(comps(emb), kDisk);
  CHECK(good.certified);
  CHECK(good.min_gap > 0.0);
  auto bad = certify_injective(comps(nodal()), kDisk);
  CHECK_FALSE(bad.certified);
  REQUIRE_FALSE(bad.failures.empty());
  // the unresolved pair sits at the double point
  auto [u, v] = bad.failures.front();
  CHECK(std::min(std::abs(u - 1.0) + std::abs(v + 1.0), std::abs(u + 1.0) + std::abs(v - 1.0)) < 0.1);
}

TEST_CASE("double point candidates find the node") {
  auto pairs = double_point_candidates(comps(nodal()), kDisk);
  REQUIRE_FALSE(pairs.empty());
  auto [u, v] = pairs.front();
  CHECK(std::min(std::abs(u - 1.0) + std::abs(v + 1.0), std::abs(u + 1.0) + std::abs(v - 1.0)) < 0.05);
}

TEST_CASE("probe conditions") {
  auto f = nodal();
  const auto samples = sample_compact(kDisk, 300);
  auto p = build_probe(f, kDisk, -1.0, 1.0, KernelRows{}, samples);
  CHECK(p.w3_residual < 1e-11);
  auto e1 = arc_integral(OneForm{p.w1 * differentiate(f.y[0])}, p.path, 1e-13);
  auto e2 = arc_integral(OneForm{p.w2 * differentiate(f.y[0])}, p.path, 1e-13);
  CHECK(std::abs(e1.value) < 1e-8);
  CHECK(std::abs(e2.value + 1.0) < 1e-8);
}

TEST_CASE("difference map") {
  auto f = nodal();
  CurveFamily fam = [&](const std::vector<Complex>& xi) {
    auto g = f;
    g.x[0] = f.x[0] + c(xi[0]);
    g.z = f.z - (f.y[0] * c(xi[0]));
    return g;
  };
  auto d = difference_map(fam, {{0.3, 0.3}, {-1.0, 1.0}}, {0.0});
  for (auto v : d[0]) CHECK(std::abs(v) == 0.0);
  for (auto v : d[1]) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("embedding search removes the node") {
  auto f = nodal();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto r = embedding_search_report(f, kDisk, {}, 0.05, seed);
    CHECK_MESSAGE(r.certified, r.diagnostics());
    CHECK(r.sup_change <= 0.05);
    CHECK(verify_legendrian(r.curve).pass);
    // independent re-certification of the returned curve
    CHECK(certify_injective(comps(r.curve), kDisk).certified);
  }
}

TEST_CASE("embedding search keeps jets") {
  auto f = nodal();
  std::vector<JetSpec> jets{jet_of_curve(f, Complex(0.0, 0.5), 2), jet_of_curve(f, Complex(0.2, -0.4), 1)};
  auto r = embedding_search_report(f, kDisk, jets, 0.05, 7);
  CHECK_MESSAGE(r.certified, r.diagnostics());
  for (const auto& j : jets) CHECK(jet_distance(jet_of_curve(r.curve, j.p, j.m), j) <= 1e-10);
}

TEST_CASE("embedded input is returned unchanged; zero budget is exhausted") {
  auto emb = make_legendrian({z()}, {z() * z()}, 0.0, 0.0, CircularDomain::plane());
  auto r = embedding_search_report(emb, kDisk, {}, 0.1, 1);
  CHECK(r.certified);
  CHECK(r.curve.x[0] == emb.x[0]);
  CHECK(r.xi.empty());
  try {
    embedding_search(nodal(), kDisk, {}, 0.0, 1);
    FAIL("expected SearchExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SearchExhausted);
  }
}
