#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "leglab/demos.hpp"
#include "leglab/errors.hpp"
#include "leglab/io.hpp"
#include "leglab/parallel.hpp"

namespace leglab::cli {

namespace {

constexpr const char* kUsage =
    "usage: leglab verify <curve.json>\n"
    "       leglab run <approximate|extend|push|mergelyan|carleman> <spec.json|demo:NAME>\n"
    "                  [--degree-max N] [--tol EPS] [--seed S] [--out DIR] [--csv] [--csv-samples N]\n"
    "       leglab demo <list|NAME> [--out FILE]\n";

Json error_json(const Error& e) { return {{"kind", to_string(e.kind())}, {"message", e.what()}}; }

bool write_text(const std::filesystem::path& p, const std::string& text, std::ostream& err) {
  std::ofstream f(p, std::ios::binary);
  if (!f) {
    err << "cannot write " << p.string() << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  LegendrianCurve c;
  VerifyInput checks;
  try {
    const Json j = read_json_file(path);
    c = curve_from_json(j);
    if (j.contains("checks")) checks = verify_input_from_json(j["checks"], c.domain);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  Json report;
  bool pass = false;
  try {
    RunReport r;
    r.certificates = verify_curve(c, checks);
    pass = r.pass();
    report = to_json(r);
  } catch (const Error& e) {
    report = {{"pass", false}, {"error", error_json(e)}};
  }
  out << report.dump(2) << "\n";
  return pass ? 0 : 1;
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  if (!is_pipeline(opt.pipeline)) {
    err << "unknown pipeline '" << opt.pipeline << "'\n" << kUsage;
    return 2;
  }
  ProblemSpec spec;
  try {
    if (opt.spec.rfind("demo:", 0) == 0) {
      auto d = find_demo(opt.spec.substr(5));
      if (!d) fail(ErrorKind::ParseError, "unknown demo '" + opt.spec.substr(5) + "'");
      spec = d->spec;
    } else {
      spec = spec_from_json(read_json_file(opt.spec));
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  if (opt.degree_max > 0) spec.degree_max = opt.degree_max;
  if (opt.tol > 0.0) {
    spec.eps = opt.tol;
    spec.eps_profile.points.clear();
  }
  if (opt.seed >= 0) spec.seed = static_cast<std::uint64_t>(opt.seed);

  const std::filesystem::path dir(opt.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "cannot create " << dir.string() << ": " << ec.message() << "\n";
    return 2;
  }

  Json report = {{"pipeline", opt.pipeline}, {"seed", spec.seed}};
  int code = 0;
  try {
    DriverResult r = run_pipeline(opt.pipeline, spec);
    const Json rep = to_json(r.report);
    for (auto it = rep.begin(); it != rep.end(); ++it) report[it.key()] = it.value();
    if (!write_text(dir / "curve.json", curve_file(r.curve, r.verify).dump(2) + "\n", err)) return 2;
    if (opt.csv) {
      std::ostringstream csv;
      const CompactSet region = r.sets.empty() ? spec.target_region() : r.sets.back();
      write_samples_csv(csv, r.curve, sample_paths(region, spec.S, opt.csv_samples));
      if (!write_text(dir / "samples.csv", csv.str(), err)) return 2;
    }
    code = r.report.pass() ? 0 : 1;
  } catch (const Error& e) {
    report["pass"] = false;
    report["error"] = error_json(e);
    err << e.what() << "\n";
    code = (e.kind() == ErrorKind::PreconditionViolation || e.kind() == ErrorKind::ParseError) ? 2 : 1;
  }
  const std::string text = report.dump(2) + "\n";
  if (!write_text(dir / "report.json", text, err)) return 2;
  out << text;
  return code;
}

int cmd_demo(const std::string& name, const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (name.empty()) {
    err << kUsage;
    return 2;
  }
  if (name == "list") {
    for (const auto& d : demos()) out << d.name << "\t" << d.pipeline << "\t" << d.description << "\n";
    return 0;
  }
  auto d = find_demo(name);
  if (!d) {
    err << "unknown demo '" << name << "'; try 'leglab demo list'\n";
    return 2;
  }
  Json j = to_json(d->spec);
  j["pipeline"] = d->pipeline;
  j["description"] = d->description;
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return 0;
  }
  return write_text(out_path, text, err) ? 0 : 2;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holomorphic Legendrian curves on circular domains", "leglab"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker cap (overrides LEGLAB_THREADS)");

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "re-check a serialized curve");
  verify->add_option("curve", verify_path, "curve JSON")->required();

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "run a pipeline on a problem spec");
  run->add_option("pipeline", run_opt.pipeline, "approximate|extend|push|mergelyan|carleman")->required();
  run->add_option("spec", run_opt.spec, "problem spec JSON or demo:NAME")->required();
  run->add_option("--degree-max", run_opt.degree_max, "largest polynomial degree");
  run->add_option("--tol", run_opt.tol, "uniform epsilon (replaces the spec's)");
  run->add_option("--seed", run_opt.seed, "random seed");
  run->add_option("--out", run_opt.out_dir, "output directory");
  run->add_flag("--csv", run_opt.csv, "write samples.csv");
  run->add_option("--csv-samples", run_opt.csv_samples, "samples per boundary circle or arc")->check(CLI::PositiveNumber);

  std::string demo_name, demo_out;
  bool demo_given = false;
  auto* demo = app.add_subcommand("demo", "list or print bundled specs");
  demo->add_option("name", demo_name, "list or a demo name");
  demo->add_option("--out", demo_out, "write the spec here instead of stdout");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << kUsage;
    return 2;
  }
  if (threads > 0) set_thread_limit(threads);
  demo_given = demo->count("name") > 0;
  if (*verify) return cmd_verify(verify_path, out, err);
  if (*run) return cmd_run(run_opt, out, err);
  if (*demo) return cmd_demo(demo_given ? demo_name : std::string(), demo_out, out, err);
  err << kUsage;
  return 2;
}

}  // namespace leglab::cli
