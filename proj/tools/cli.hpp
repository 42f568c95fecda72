#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace leglab::cli {

/// Exit codes: 0 pass, 1 certificate or pipeline failure, 2 usage or parse error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err);

struct RunOptions {
  std::string pipeline;
  std::string spec;  // file path, or demo:<name>
  int degree_max = -1;
  double tol = -1.0;
  long long seed = -1;
  std::string out_dir = "leglab-out";
  bool csv = false;
  int csv_samples = 1024;
};
int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);

int cmd_demo(const std::string& name, const std::string& out_path, std::ostream& out, std::ostream& err);

}  // namespace leglab::cli
