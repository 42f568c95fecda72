#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "leglab/demos.hpp"
#include "leglab/io.hpp"

using namespace leglab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("leglab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const Json* find_cert(const Json& certs, const std::string& name) {
  for (const auto& c : certs)
    if (c["name"] == name) return &c;
  return nullptr;
}

// Contour integral of x dy over |zeta - c| = r using the discrete Fourier series of the
// sampled components; exact for Laurent polynomials of degree below N/2 on the circle.
Complex fourier_period(const LaurentPoly& x, const LaurentPoly& y, Complex c, double r, int N = 256) {
  std::vector<Complex> xs(N), ys(N);
  for (int j = 0; j < N; ++j) {
    const Complex q = c + std::polar(r, 2.0 * std::numbers::pi * j / N);
    xs[j] = x(q);
    ys[j] = y(q);
  }
  auto coeff = [&](const std::vector<Complex>& v, int k) {
    Complex s = 0.0;
    for (int j = 0; j < N; ++j) s += v[j] * std::polar(1.0, -2.0 * std::numbers::pi * k * j / N);
    return s / double(N);
  };
  Complex total = 0.0;
  for (int k = -N / 2 + 1; k < N / 2; ++k) total += coeff(xs, -k) * Complex(0.0, k) * coeff(ys, k);
  return 2.0 * std::numbers::pi * total;
}

}  // namespace

TEST_CASE("demo subcommand") {
  auto list = run_cli({"demo", "list"});
  CHECK(list.code == 0);
  std::istringstream is(list.out);
  std::string line;
  int names = 0;
  while (std::getline(is, line)) names += !line.empty();
  CHECK(names >= 6);

  CHECK(run_cli({"demo"}).code == 2);
  CHECK(run_cli({"demo", "no-such-demo"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);

  const auto dir = scratch("demo");
  const auto path = (dir / "c.json").string();
  REQUIRE(run_cli({"demo", "carleman-axis", "--out", path}).code == 0);
  const Json j = read_json_file(path);
  CHECK(j["pipeline"] == "carleman");
  const ProblemSpec s = spec_from_json(j);
  CHECK(to_json(s) == to_json(find_demo("carleman-axis")->spec));
}

TEST_CASE("verify subcommand") {
  const auto dir = scratch("verify");
  const auto f = nodal_curve();
  VerifyInput in;
  in.region = CompactSet::in_domain(f.domain, 0.0, 0.5);
  {
    std::ofstream(dir / "good.json") << curve_file(f, in).dump();
    auto r = run_cli({"verify", (dir / "good.json").string()});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["pass"] == true);
  }
  {
    auto bad = f;
    bad.z = LaurentPoly();
    std::ofstream(dir / "bad.json") << curve_file(bad, in).dump();
    auto r = run_cli({"verify", (dir / "bad.json").string()});
    CHECK(r.code == 1);
    const Json rep = Json::parse(r.out);
    const Json* c = find_cert(rep["certificates"], "legendrian_residual");
    REQUIRE(c);
    CHECK((*c)["pass"] == false);
  }
  std::ofstream(dir / "broken.json") << "{\"n\": 1, \"x\": [";
  CHECK(run_cli({"verify", (dir / "broken.json").string()}).code == 2);
  CHECK(run_cli({"verify", (dir / "missing.json").string()}).code == 2);
}

TEST_CASE("run subcommand") {
  CHECK(run_cli({"run", "teleport", "demo:annulus-period"}).code == 2);
  CHECK(run_cli({"run", "approximate", "demo:nope"}).code == 2);

  const auto dir = scratch("run");
  const auto a = (dir / "a").string(), b = (dir / "b").string();
  auto r1 = run_cli({"run", "approximate", "demo:annulus-period", "--out", a, "--csv", "--csv-samples", "64"});
  REQUIRE(r1.code == 0);
  auto r2 = run_cli({"--threads", "1", "run", "approximate", "demo:annulus-period", "--out", b});
  REQUIRE(r2.code == 0);
  CHECK(slurp(fs::path(a) / "curve.json") == slurp(fs::path(b) / "curve.json"));

  const Json report = read_json_file(a + "/report.json");
  CHECK(report["pass"] == true);
  const Json* period = find_cert(report["certificates"], "period_norm");
  REQUIRE(period);
  CHECK((*period)["value"].get<double>() <= 1e-9);

  // independent period check around the hole
  const auto curve = curve_from_json(read_json_file(a + "/curve.json"));
  const Complex p = fourier_period(curve.x[0], curve.y[0], 0.0, 1.0);
  const double scale = std::max(curve.x[0].max_abs_coeff() * curve.y[0].max_abs_coeff(), 1.0);
  CHECK(std::abs(p) <= 1e-10 * scale);

  // re-verification reproduces the certificates
  auto v = run_cli({"verify", a + "/curve.json"});
  CHECK(v.code == 0);
  const Json again = Json::parse(v.out);
  REQUIRE(again["certificates"].size() == report["certificates"].size());
  for (const auto& c : report["certificates"]) {
    const Json* d = find_cert(again["certificates"], c["name"]);
    REQUIRE(d);
    CHECK(*d == c);
  }

  // header plus (region circles + S arcs) * samples * (1 + 2n + 1) rows
  std::istringstream csv(slurp(fs::path(a) / "samples.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t_index,component_index,re,im");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  const auto spec = find_demo("annulus-period")->spec;
  const auto paths = sample_paths(spec.target_region(), spec.S, 64);
  CHECK(rows == int(paths.size()) * 64 * (2 * spec.n + 2));
}

TEST_CASE("run with an injectivity check") {
  const auto dir = scratch("nodal");
  auto r = run_cli({"run", "mergelyan", "demo:nodal-embedding", "--out", dir.string()});
  CHECK(r.code == 0);
  const Json report = read_json_file((dir / "report.json").string());
  const Json* c = find_cert(report["certificates"], "injectivity_margin");
  REQUIRE(c);
  CHECK((*c)["value"].get<double>() > 0.0);
}

TEST_CASE("run reports precondition failures") {
  const auto dir = scratch("pre");
  Json spec = to_json(find_demo("disk-jets")->spec);
  spec["eps"] = -1.0;
  std::ofstream(dir / "s.json") << spec.dump();
  auto r = run_cli({"run", "approximate", (dir / "s.json").string(), "--out", (dir / "o").string()});
  CHECK(r.code == 2);
  const Json report = read_json_file((dir / "o" / "report.json").string());
  CHECK(report["pass"] == false);
  CHECK(report.contains("error"));
}
