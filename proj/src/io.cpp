#include "leglab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "leglab/errors.hpp"

namespace leglab {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  bad("expected a number, got " + j.dump());
}

Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

int integer(const Json& j) {
  if (!j.is_number_integer()) bad("expected an integer, got " + j.dump());
  return j.get<int>();
}

bool boolean(const Json& j) {
  if (!j.is_boolean()) bad("expected a boolean, got " + j.dump());
  return j.get<bool>();
}

const Json& array(const Json& j) {
  if (!j.is_array()) bad("expected an array, got " + j.dump());
  return j;
}

template <class T, class F>
std::vector<T> list(const Json& j, F f) {
  std::vector<T> out;
  for (const auto& e : array(j)) out.push_back(f(e));
  return out;
}

template <class T>
Json list_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& e : v) a.push_back(to_json(e));
  return a;
}

Json complex_rows(const std::vector<std::vector<Complex>>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(list_json(r));
  return a;
}

std::vector<std::vector<Complex>> complex_rows_from(const Json& j) {
  return list<std::vector<Complex>>(j, [](const Json& r) { return list<Complex>(r, complex_from_json); });
}

template <class T>
T opt(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if constexpr (std::is_same_v<T, bool>) return boolean(*it);
  else if constexpr (std::is_same_v<T, int>) return integer(*it);
  else if constexpr (std::is_same_v<T, double>) return number(*it);
  else return it->get<T>();
}

Json flags_json(const Flags& f) { return {{"immersion", f.immersion}, {"injective", f.injective}, {"proper", f.proper}}; }

Flags flags_from(const Json& j) {
  Flags f;
  f.immersion = opt(j, "immersion", false);
  f.injective = opt(j, "injective", false);
  f.proper = opt(j, "proper", false);
  return f;
}

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

Json to_json(Complex c) { return Json::array({num(c.real()), num(c.imag())}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) bad("expected [re, im], got " + j.dump());
  return {number(j[0]), number(j[1])};
}

Json to_json(const LaurentPoly& p) {
  Json centers = list_json(p.centers());
  Json poly = Json::array(), poles = Json::array();
  for (const auto& [k, a] : p.poly_coeffs()) poly.push_back({k, a.real(), a.imag()});
  for (const auto& [key, a] : p.pole_coeffs()) poles.push_back({key.first, key.second, a.real(), a.imag()});
  return {{"centers", centers}, {"poly", poly}, {"poles", poles}};
}

LaurentPoly laurent_from_json(const Json& j) {
  try {
    const auto centers = list<Complex>(j.contains("centers") ? j["centers"] : Json::array(), complex_from_json);
    std::map<int, Complex> poly;
    std::map<std::pair<int, int>, Complex> poles;
    if (j.contains("poly")) {
      for (const auto& t : array(j["poly"])) {
        if (!t.is_array() || t.size() != 3) bad("poly term must be [k, re, im]");
        const int k = integer(t[0]);
        if (k < 0) bad("poly exponents must be >= 0");
        poly[k] += Complex(number(t[1]), number(t[2]));
      }
    }
    if (j.contains("poles")) {
      for (const auto& t : array(j["poles"])) {
        if (!t.is_array() || t.size() != 4) bad("pole term must be [center, k, re, im]");
        const int c = integer(t[0]), k = integer(t[1]);
        if (c < 0 || c >= static_cast<int>(centers.size())) bad("pole center index out of range");
        if (k > -1) bad("pole exponents must be <= -1");
        poles[{c, k}] += Complex(number(t[2]), number(t[3]));
      }
    }
    return LaurentPoly::from_terms(centers, poly, poles);
  } catch (const Json::exception& e) {
    bad(std::string("Laurent polynomial: ") + e.what());
  }
}

Json to_json(const Disk& d) { return {{"center", to_json(d.center)}, {"radius", d.radius}}; }

Disk disk_from_json(const Json& j) { return Disk{complex_from_json(field(j, "center")), number(field(j, "radius"))}; }

Json to_json(const CircularDomain& d) {
  Json outer = d.is_plane ? Json{{"type", "plane"}}
                          : Json{{"type", "disk"}, {"center", to_json(d.outer.center)}, {"radius", d.outer.radius}};
  return {{"outer", outer}, {"holes", list_json(d.holes)}};
}

CircularDomain domain_from_json(const Json& j) {
  std::vector<Disk> holes;
  if (j.contains("holes")) holes = list<Disk>(j["holes"], disk_from_json);
  const Json& o = j.contains("outer") ? j["outer"] : Json{{"type", "plane"}};
  const std::string type = o.value("type", "plane");
  CircularDomain d;
  if (type == "plane") {
    d = CircularDomain::plane(holes);
  } else if (type == "disk") {
    d = CircularDomain::disk(complex_from_json(field(o, "center")), number(field(o, "radius")), holes);
  } else {
    bad("unknown domain type '" + type + "'");
  }
  try {
    d.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return d;
}

Json to_json(const CompactSet& k) {
  return {{"center", to_json(k.disk.center)}, {"radius", k.disk.radius}, {"excluded", list_json(k.excluded)}};
}

CompactSet compact_from_json(const Json& j, const CircularDomain& d) {
  const Complex c = complex_from_json(field(j, "center"));
  const double r = number(field(j, "radius"));
  if (!j.contains("excluded")) {
    try {
      return CompactSet::in_domain(d, c, r);
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  CompactSet k;
  k.disk = Disk{c, r};
  k.excluded = list<Disk>(j["excluded"], disk_from_json);
  return k;
}

Json to_json(const Arc& a) {
  if (a.is_polyline()) return list_json(a.vertices());
  Json pieces = Json::array();
  for (const auto& p : a.pieces()) {
    if (p.kind == PathPiece::Kind::Segment) {
      pieces.push_back({{"type", "segment"}, {"from", to_json(p.a)}, {"to", to_json(p.b)}});
    } else {
      pieces.push_back({{"type", "circular"},
                        {"center", to_json(p.center)},
                        {"radius", p.radius},
                        {"theta0", p.theta0},
                        {"theta1", p.theta1}});
    }
  }
  return {{"pieces", pieces}};
}

Arc arc_from_json(const Json& j) {
  if (j.is_array()) {
    auto v = list<Complex>(j, complex_from_json);
    if (v.size() < 2) bad("an arc needs at least two vertices");
    return Arc::polyline(v);
  }
  std::vector<PathPiece> pieces;
  for (const auto& p : array(field(j, "pieces"))) {
    const std::string type = field(p, "type").get<std::string>();
    if (type == "segment") {
      pieces.push_back(PathPiece::segment(complex_from_json(field(p, "from")), complex_from_json(field(p, "to"))));
    } else if (type == "circular") {
      pieces.push_back(PathPiece::circular(complex_from_json(field(p, "center")), number(field(p, "radius")),
                                           number(field(p, "theta0")), number(field(p, "theta1"))));
    } else {
      bad("unknown arc piece type '" + type + "'");
    }
  }
  if (pieces.empty()) bad("an arc needs at least one piece");
  return Arc(pieces);
}

Json to_json(const AdmissibleSet& s) { return {{"K", list_json(s.K)}, {"gamma", list_json(s.gamma)}}; }

AdmissibleSet admissible_from_json(const Json& j, const CircularDomain& d) {
  AdmissibleSet s;
  if (j.contains("K")) s.K = list<CompactSet>(j["K"], [&](const Json& e) { return compact_from_json(e, d); });
  if (j.contains("gamma")) s.gamma = list<Arc>(j["gamma"], arc_from_json);
  return s;
}

Json to_json(const JetSpec& jet) {
  return {{"p", to_json(jet.p)}, {"m", jet.m}, {"x", complex_rows(jet.x)}, {"y", complex_rows(jet.y)}, {"z", list_json(jet.z)}};
}

JetSpec jet_from_json(const Json& j) {
  JetSpec jet;
  jet.p = complex_from_json(field(j, "p"));
  jet.m = integer(field(j, "m"));
  if (jet.m < 0) bad("jet order must be >= 0");
  jet.x = complex_rows_from(field(j, "x"));
  jet.y = complex_rows_from(field(j, "y"));
  jet.z = list<Complex>(field(j, "z"), complex_from_json);
  const std::size_t len = static_cast<std::size_t>(jet.m) + 1;
  if (jet.x.empty() || jet.x.size() != jet.y.size()) bad("jet needs matching x and y rows");
  for (const auto& r : jet.x) {
    if (r.size() != len) bad("jet x row length differs from m + 1");
  }
  for (const auto& r : jet.y) {
    if (r.size() != len) bad("jet y row length differs from m + 1");
  }
  if (jet.z.size() != len) bad("jet z length differs from m + 1");
  return jet;
}

Json to_json(const ContactForm& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) terms.push_back({t.coef, t.a, t.b});
  return terms;
}

ContactForm form_from_json(const Json& j, int n) {
  ContactForm f;
  f.n = n;
  for (const auto& t : array(j)) {
    if (!t.is_array() || t.size() != 3) bad("form term must be [coef, a, b]");
    const int a = integer(t[1]), b = integer(t[2]);
    if (a < 0 || b < 0 || a >= 2 * n || b >= 2 * n) bad("form term index out of range");
    f.terms.push_back({number(t[0]), a, b});
  }
  return f;
}

Json to_json(const LegendrianCurve& c) {
  return {{"n", c.n},
          {"domain", to_json(c.domain)},
          {"form", to_json(c.form)},
          {"x", list_json(c.x)},
          {"y", list_json(c.y)},
          {"z", to_json(c.z)}};
}

LegendrianCurve curve_from_json(const Json& j) {
  LegendrianCurve c;
  c.n = integer(field(j, "n"));
  if (c.n < 1) bad("n must be >= 1");
  c.domain = j.contains("domain") ? domain_from_json(j["domain"]) : CircularDomain::plane();
  c.x = list<LaurentPoly>(field(j, "x"), laurent_from_json);
  c.y = list<LaurentPoly>(field(j, "y"), laurent_from_json);
  if (static_cast<int>(c.x.size()) != c.n || static_cast<int>(c.y.size()) != c.n) bad("x and y need n components");
  c.z = laurent_from_json(field(j, "z"));
  c.form = j.contains("form") ? form_from_json(j["form"], c.n) : ContactForm::standard(c.n);
  return c;
}

Json to_json(const VerifyInput& in) {
  Json samples = Json::array();
  for (std::size_t s = 0; s < in.points.size(); ++s) {
    samples.push_back({{"p", to_json(in.points[s])}, {"value", list_json(in.values[s])}, {"eps", num(in.eps[s])}});
  }
  Json floors = Json::array();
  for (const auto& [k, f, name] : in.boundary_floors) floors.push_back({{"set", to_json(k)}, {"floor", num(f)}, {"name", name}});
  Json j = {{"jets", list_json(in.jets)},
            {"samples", samples},
            {"compare_z", in.compare_z},
            {"flags", flags_json(in.flags)},
            {"boundary_floors", floors},
            {"error_name", in.error_name},
            {"strict_error", in.strict_error}};
  if (in.region) j["region"] = to_json(*in.region);
  return j;
}

VerifyInput verify_input_from_json(const Json& j, const CircularDomain& d) {
  VerifyInput in;
  if (j.contains("jets")) in.jets = list<JetSpec>(j["jets"], jet_from_json);
  if (j.contains("region")) in.region = compact_from_json(j["region"], d);
  if (j.contains("samples")) {
    for (const auto& s : array(j["samples"])) {
      in.points.push_back(complex_from_json(field(s, "p")));
      in.values.push_back(list<Complex>(field(s, "value"), complex_from_json));
      in.eps.push_back(number(field(s, "eps")));
    }
  }
  in.compare_z = opt(j, "compare_z", true);
  if (j.contains("flags")) in.flags = flags_from(j["flags"]);
  if (j.contains("boundary_floors")) {
    for (const auto& b : array(j["boundary_floors"])) {
      in.boundary_floors.push_back({compact_from_json(field(b, "set"), d), number(field(b, "floor")),
                                    opt<std::string>(b, "name", "boundary_norm_" + std::to_string(in.boundary_floors.size()))});
    }
  }
  in.error_name = opt<std::string>(j, "error_name", "sup_error_ratio");
  in.strict_error = opt(j, "strict_error", false);
  return in;
}

Json curve_file(const LegendrianCurve& c, const VerifyInput& checks) {
  Json j = to_json(c);
  j["checks"] = to_json(checks);
  return j;
}

Json to_json(const ProblemSpec& s) {
  Json target = Json::object();
  Json xs = Json::array(), ys = Json::array();
  for (int i = 0; i < s.n && i < static_cast<int>(s.target.size()); ++i) xs.push_back(to_json(s.target[i]));
  for (int i = s.n; i < 2 * s.n && i < static_cast<int>(s.target.size()); ++i) ys.push_back(to_json(s.target[i]));
  target["x"] = xs;
  target["y"] = ys;
  if (static_cast<int>(s.target.size()) > 2 * s.n) target["z"] = to_json(s.target[2 * s.n]);
  Json lambda = Json::array();
  for (const auto& [p, m] : s.lambda_in) lambda.push_back({{"p", to_json(p)}, {"m", m}});
  Json profile = Json::array();
  for (const auto& [r, e] : s.eps_profile.points) profile.push_back({r, e});
  Json j = {{"domain", to_json(s.domain)},
            {"n", s.n},
            {"S", to_json(s.S)},
            {"target", target},
            {"lambda_in", lambda},
            {"jets_in", list_json(s.jets_in)},
            {"jets_out", list_json(s.jets_out)},
            {"flags", flags_json(s.flags)},
            {"eps", s.eps},
            {"eps_profile", profile},
            {"keep", s.keep},
            {"radii", s.radii},
            {"rounds", s.rounds},
            {"seed", s.seed},
            {"degree_max", s.degree_max},
            {"rho", s.rho},
            {"C", s.C}};
  if (s.region) j["region"] = to_json(*s.region);
  if (s.outer) j["outer"] = to_json(*s.outer);
  return j;
}

namespace {

int keep_from(const Json& j, int n) {
  if (j.is_number_integer()) return j.get<int>();
  if (!j.is_string()) bad("keep must be an index or a name like \"x1\", \"y2\", \"z\"");
  const auto s = j.get<std::string>();
  if (s == "z") return 2 * n;
  if (s.size() >= 2 && (s[0] == 'x' || s[0] == 'y')) {
    const int i = std::atoi(s.c_str() + 1);
    if (i >= 1 && i <= n) return (s[0] == 'x' ? 0 : n) + i - 1;
  }
  bad("unknown component name '" + s + "'");
}

}  // namespace

ProblemSpec spec_from_json(const Json& j) {
  try {
    if (!j.is_object()) bad("a problem spec must be a JSON object");
    ProblemSpec s;
    if (j.contains("domain")) s.domain = domain_from_json(j["domain"]);
    s.n = opt(j, "n", 1);
    if (j.contains("S")) s.S = admissible_from_json(j["S"], s.domain);
    const Json& t = field(j, "target");
    auto xs = list<LaurentPoly>(field(t, "x"), laurent_from_json);
    auto ys = list<LaurentPoly>(field(t, "y"), laurent_from_json);
    s.target = xs;
    s.target.insert(s.target.end(), ys.begin(), ys.end());
    if (t.contains("z") && !t["z"].is_null()) s.target.push_back(laurent_from_json(t["z"]));
    if (j.contains("lambda_in")) {
      for (const auto& l : array(j["lambda_in"])) s.lambda_in.push_back({complex_from_json(field(l, "p")), integer(field(l, "m"))});
    }
    if (j.contains("jets_in")) s.jets_in = list<JetSpec>(j["jets_in"], jet_from_json);
    if (j.contains("jets_out")) s.jets_out = list<JetSpec>(j["jets_out"], jet_from_json);
    if (j.contains("flags")) s.flags = flags_from(j["flags"]);
    s.eps = opt(j, "eps", s.eps);
    if (j.contains("eps_profile")) {
      for (const auto& p : array(j["eps_profile"])) {
        if (!p.is_array() || p.size() != 2) bad("eps_profile entries must be [r, eps]");
        s.eps_profile.points.push_back({number(p[0]), number(p[1])});
      }
    }
    if (j.contains("keep") && !j["keep"].is_null()) s.keep = keep_from(j["keep"], s.n);
    if (j.contains("region")) s.region = compact_from_json(j["region"], s.domain);
    if (j.contains("outer")) s.outer = compact_from_json(j["outer"], s.domain);
    if (j.contains("radii")) s.radii = list<double>(j["radii"], number);
    s.rounds = opt(j, "rounds", s.rounds);
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) bad("seed must be a non-negative integer");
      s.seed = j["seed"].get<std::uint64_t>();
    }
    s.degree_max = opt(j, "degree_max", s.degree_max);
    s.rho = opt(j, "rho", s.rho);
    s.C = opt(j, "C", s.C);
    return s;
  } catch (const Json::exception& e) {
    bad(std::string("problem spec: ") + e.what());
  }
}

Json to_json(const Certificate& c) {
  return {{"name", c.name},
          {"value", num(c.value)},
          {"bound", num(c.bound)},
          {"relation", c.at_least ? ">" : (c.strict ? "<" : "<=")},
          {"pass", c.pass}};
}

Json to_json(const StageReport& s) {
  return {{"name", s.name},
          {"budget", num(s.budget)},
          {"sup_change", num(s.sup_change)},
          {"residual", num(s.residual)},
          {"period_norm", num(s.period_norm)},
          {"jet_distance", num(s.jet_distance)},
          {"min_derivative", num(s.min_derivative)},
          {"injectivity_margin", num(s.injectivity_margin)},
          {"boundary_norm", num(s.boundary_norm)},
          {"notes", s.notes}};
}

Json to_json(const RunReport& r) {
  return {{"pass", r.pass()}, {"certificates", list_json(r.certificates)}, {"stages", list_json(r.stages)}, {"log", r.log}};
}

std::vector<std::vector<Complex>> sample_paths(const CompactSet& region, const AdmissibleSet& S, int count) {
  std::vector<std::vector<Complex>> out;
  auto circle = [&](const Disk& d) {
    std::vector<Complex> v;
    for (int i = 0; i < count; ++i) v.push_back(d.center + d.radius * std::polar(1.0, 2.0 * std::numbers::pi * i / count));
    out.push_back(std::move(v));
  };
  circle(region.disk);
  for (const auto& e : region.excluded) circle(e);
  for (const auto& a : S.gamma) out.push_back(a.sample(count));
  return out;
}

void write_samples_csv(std::ostream& os, const LegendrianCurve& c, const std::vector<std::vector<Complex>>& paths) {
  os << "t_index,component_index,re,im\n";
  char buf[96];
  long t = 0;
  for (const auto& path : paths) {
    for (auto q : path) {
      std::snprintf(buf, sizeof buf, "%ld,-1,%.17g,%.17g\n", t, q.real(), q.imag());
      os << buf;
      const auto v = c(q);
      for (std::size_t k = 0; k < v.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%ld,%zu,%.17g,%.17g\n", t, k, v[k].real(), v[k].imag());
        os << buf;
      }
      ++t;
    }
  }
}

}  // namespace leglab
