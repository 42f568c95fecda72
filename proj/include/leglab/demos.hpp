#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leglab/pipeline.hpp"

namespace leglab {

struct Demo {
  std::string name;
  std::string pipeline;  // approximate | extend | push | mergelyan | carleman
  std::string description;
  ProblemSpec spec;
};

std::vector<Demo> demos();
std::optional<Demo> find_demo(const std::string& name);

/// Truncated exponential series sum_{k<=degree} z^k / k!.
LaurentPoly exp_series(int degree);
/// x = z^2 - 1 - (7/6) z^4, y = z^3 - z: f(1) = f(-1).
LegendrianCurve nodal_curve();

}  // namespace leglab
