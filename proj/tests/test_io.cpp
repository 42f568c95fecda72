#include <cstring>
#include <random>
#include <sstream>

#include "doctest.h"
#include "leglab/demos.hpp"
#include "leglab/errors.hpp"
#include "leglab/io.hpp"

using namespace leglab;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(Complex a, Complex b) { return same_bits(a.real(), b.real()) && same_bits(a.imag(), b.imag()); }

LaurentPoly random_poly(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> centers{Complex(u(rng), u(rng)), Complex(3.0 + u(rng), u(rng))};
  std::vector<Complex> poly;
  for (int k = 0; k < 12; ++k) poly.push_back(Complex(u(rng), u(rng)) * std::pow(10.0, 40.0 * u(rng)));
  std::vector<std::vector<Complex>> poles{{Complex(u(rng), u(rng)), Complex(u(rng), 1e-200 * u(rng))},
                                          {Complex(std::nextafter(1.0, 2.0), -0.1)}};
  return LaurentPoly::from_dense(centers, poly, poles);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::PreconditionViolation;
}

}  // namespace

TEST_CASE("Laurent JSON round-trips bit-exactly") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const LaurentPoly p = random_poly(rng);
    const LaurentPoly q = laurent_from_json(parse_json_text(to_json(p).dump()));
    REQUIRE(p.centers().size() == q.centers().size());
    for (std::size_t i = 0; i < p.centers().size(); ++i) CHECK(same_bits(p.centers()[i], q.centers()[i]));
    const auto a = p.poly_coeffs(), b = q.poly_coeffs();
    REQUIRE(a.size() == b.size());
    for (const auto& [k, v] : a) CHECK(same_bits(v, b.at(k)));
    const auto pa = p.pole_coeffs(), pb = q.pole_coeffs();
    REQUIRE(pa.size() == pb.size());
    for (const auto& [k, v] : pa) CHECK(same_bits(v, pb.at(k)));
  }
}

TEST_CASE("Laurent JSON layout") {
  const LaurentPoly p = LaurentPoly::monomial(2, Complex(1.0, -2.0)) + LaurentPoly::pole(Complex(0.5, 0.0), 3, 4.0);
  const Json j = to_json(p);
  CHECK(j["centers"] == Json::parse("[[0.5,0.0]]"));
  CHECK(j["poly"] == Json::parse("[[2,1.0,-2.0]]"));
  CHECK(j["poles"] == Json::parse("[[0,-3,4.0,0.0]]"));
  CHECK(kind_of([] { laurent_from_json(Json::parse(R"({"poly":[[-1,1,0]]})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { laurent_from_json(Json::parse(R"({"poles":[[0,-1,1,0]]})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_json_text("{\"poly\": [1, 2"); }) == ErrorKind::ParseError);
}

TEST_CASE("domain, sets, arcs and jets") {
  const auto d = CircularDomain::disk(Complex(0.1, 0.0), 4.0, {Disk{Complex(1.5, 0.5), 0.2}});
  const auto e = domain_from_json(to_json(d));
  CHECK_FALSE(e.is_plane);
  CHECK(e.outer.radius == 4.0);
  REQUIRE(e.holes.size() == 1);
  CHECK(e.holes[0].center == Complex(1.5, 0.5));

  const auto k = CompactSet::in_domain(d, 0.0, 2.5);
  const auto k2 = compact_from_json(to_json(k), d);
  CHECK(k2.excluded.size() == k.excluded.size());
  CHECK(k2.excluded[0].radius == k.excluded[0].radius);
  // without "excluded" the holes are cut out
  const auto k3 = compact_from_json(Json::parse(R"({"center":[0,0],"radius":2.5})"), d);
  CHECK(k3.excluded.size() == 1);

  const Arc poly = Arc::polyline({0.0, Complex(1.0, 1.0), 2.0});
  CHECK(to_json(poly).is_array());
  CHECK(arc_from_json(to_json(poly)).vertices() == poly.vertices());
  const Arc mixed({PathPiece::segment(0.0, 1.0), PathPiece::circular(0.0, 1.0, 0.0, 1.0)});
  const Arc m2 = arc_from_json(to_json(mixed));
  CHECK(std::abs(m2.at(0.8) - mixed.at(0.8)) == 0.0);

  JetSpec j;
  j.p = Complex(0.2, 0.1);
  j.m = 1;
  j.x = {{1.0, 2.0}};
  j.y = {{3.0, Complex(0.0, 1.0)}};
  j.z = {0.5, Complex(0.0, -1.0)};
  const JetSpec j2 = jet_from_json(to_json(j));
  CHECK(jet_distance(j, j2) == 0.0);
  CHECK(kind_of([] { jet_from_json(Json::parse(R"({"p":[0,0],"m":1,"x":[[1]],"y":[[1,0]],"z":[0,0]})")); }) ==
        ErrorKind::ParseError);
  CHECK(kind_of([] { domain_from_json(Json::parse(R"({"outer":{"type":"square"}})")); }) == ErrorKind::ParseError);
}

TEST_CASE("problem specs survive serialization") {
  for (const auto& d : demos()) {
    const Json a = to_json(d.spec);
    const ProblemSpec s = spec_from_json(parse_json_text(a.dump()));
    CHECK_MESSAGE(to_json(s) == a, d.name);
  }
  const Json minimal = Json::parse(R"({"target":{"x":[{"poly":[[1,1,0]]}],"y":[{"poly":[[2,1,0]]}]},
                                       "S":{"K":[{"center":[0,0],"radius":1}]}, "keep":"y1"})");
  const ProblemSpec s = spec_from_json(minimal);
  CHECK(s.n == 1);
  CHECK(s.keep == 1);
  CHECK(s.target.size() == 2);
  CHECK_NOTHROW(s.validate());
  CHECK(kind_of([] { spec_from_json(Json::parse(R"({"S":{}})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { spec_from_json(Json::parse(R"({"target":{"x":[],"y":[]},"keep":"w"})")); }) == ErrorKind::ParseError);
}

TEST_CASE("curve files carry their checks") {
  const auto f = nodal_curve();
  VerifyInput in;
  in.jets = {jet_of_curve(f, Complex(0.1, 0.2), 2)};
  in.region = CompactSet::in_domain(f.domain, 0.0, 0.5);
  in.points = {0.0, Complex(0.3, 0.1)};
  for (auto q : in.points) in.values.push_back(f(q));
  in.eps = {1e-3, 2e-3};
  in.boundary_floors = {{*in.region, 0.5, "floor"}};
  const Json file = curve_file(f, in);
  const auto g = curve_from_json(file);
  const auto in2 = verify_input_from_json(file["checks"], g.domain);
  const auto a = verify_curve(f, in), b = verify_curve(g, in2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(same_bits(a[i].value, b[i].value));
    CHECK(a[i].pass == b[i].pass);
  }
  CHECK(b.back().name == "floor");
}

TEST_CASE("sample CSV") {
  const auto f = nodal_curve();
  AdmissibleSet S;
  S.gamma = {Arc::segment(-1.0, 1.0)};
  const auto k = CompactSet::in_domain(f.domain, 0.0, 1.5);
  const auto paths = sample_paths(k, S, 16);
  REQUIRE(paths.size() == 2);
  std::ostringstream os;
  write_samples_csv(os, f, paths);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t_index,component_index,re,im");
  int rows = 0;
  std::string last;
  while (std::getline(is, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 32 * 4);
  // last row: z at the arc end zeta = 1
  CHECK(last.rfind("31,2,", 0) == 0);
  const double re = std::stod(last.substr(5));
  CHECK(std::abs(re - f.z(1.0).real()) < 1e-15);
}
