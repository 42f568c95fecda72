#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leglab/contact.hpp"
#include "leglab/embedding.hpp"
#include "leglab/geometry.hpp"
#include "leglab/spray.hpp"

namespace leglab {

/// Legendrian data along an arc, as a function of normalised arclength t in [0,1].
struct PathData {
  Arc arc;
  std::function<std::vector<Complex>(double)> value;
  std::string label;
};

/// Legendrian data on a region, given by component functions of zeta.
struct RegionData {
  std::function<bool(Complex)> contains;
  std::vector<LaurentPoly> comps;  // x_1..x_n, y_1..y_n, z
  std::string label;
};

/// A generalised Legendrian curve: paths are consulted first (points within 1e-9 of the
/// arc), then regions in order.
struct GeneralisedCurve {
  int n = 1;
  bool has_z = true;  // false when the target only prescribes x and y
  std::vector<PathData> paths;
  std::vector<RegionData> regions;

  static GeneralisedCurve from_curve(const LegendrianCurve& c, std::string label = "global");
  std::vector<Complex> operator()(Complex q) const;
  const RegionData* region_at(Complex q) const;
  /// Jet from the region covering q. Throws PreconditionViolation when none does.
  JetSpec jet(Complex q, int m) const;
};

/// Normalised arclength of the point of `arc` closest to q.
double arc_parameter(const Arc& arc, Complex q);

/// Sampled epsilon profile: linear interpolation in |q|, constant beyond the ends.
struct EpsProfile {
  std::vector<std::pair<double, double>> points;  // (|q|, eps), |q| ascending
  bool empty() const { return points.empty(); }
  double operator()(Complex q) const;
  double min_on(double r0, double r1) const;
};

struct Flags {
  bool immersion = false;
  bool injective = false;
  bool proper = false;
};

struct ProblemSpec {
  CircularDomain domain = CircularDomain::plane();
  AdmissibleSet S;
  int n = 1;
  /// Target components x_1..x_n, y_1..y_n and optionally z.
  std::vector<LaurentPoly> target;
  /// Lambda' points with orders; jets come from the target unless given in `jets_in`.
  std::vector<std::pair<Complex, int>> lambda_in;
  std::vector<JetSpec> jets_in;
  /// phi: Legendrian jets at the Lambda'' points.
  std::vector<JetSpec> jets_out;
  Flags flags;
  double eps = 1e-6;
  EpsProfile eps_profile;
  int keep = -1;
  std::optional<CompactSet> region;
  std::vector<double> radii;  // exhaustion radii about 0 for the induction drivers
  int rounds = 3;
  std::uint64_t seed = 0;
  int degree_max = 64;
  double rho = 0.0;  // push_boundary floor
  double C = 0.0;    // push_boundary gain
  std::optional<CompactSet> outer;  // push_boundary R2

  /// Throws PreconditionViolation (or MismatchedJets) when an invariant fails.
  void validate() const;
  GeneralisedCurve target_curve() const;
  /// Jets at Lambda', explicit ones taking precedence.
  std::vector<JetSpec> resolved_jets() const;
  /// Region R: the given one, else a disk around S with a 10% margin.
  CompactSet target_region() const;
  double eps_at(Complex q) const { return eps_profile.empty() ? eps : eps_profile(q); }
};

struct Certificate {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool at_least = false;  // pass iff value > bound (else value <= bound)
  bool pass = false;
  bool strict = false;  // upper bound is strict: value < bound
};

struct StageReport {
  std::string name;
  double budget = 0.0;
  double sup_change = 0.0;
  double residual = 0.0;
  double period_norm = 0.0;
  double jet_distance = 0.0;
  double min_derivative = 0.0;
  double injectivity_margin = 0.0;
  double boundary_norm = 0.0;
  std::vector<std::string> notes;
};

struct RunReport {
  std::vector<StageReport> stages;
  std::vector<Certificate> certificates;
  std::vector<std::string> log;
  bool pass() const;
  const Certificate* find(const std::string& name) const;
};

/// ||f|| > floor on the outer circle of `set`, reported as certificate `name`.
struct BoundaryFloor {
  CompactSet set;
  double floor = 0.0;
  std::string name;
};

/// What a final curve is checked against.
struct VerifyInput {
  std::vector<JetSpec> jets;
  std::optional<CompactSet> region;  // periods, immersion and injectivity are checked here
  std::vector<Complex> points;       // target samples
  std::vector<std::vector<Complex>> values;
  std::vector<double> eps;           // per sample
  bool compare_z = true;
  Flags flags;
  std::vector<BoundaryFloor> boundary_floors;
  std::string error_name = "sup_error_ratio";
  bool strict_error = false;  // error ratio < 1 instead of <= 1
};

/// Certificates recomputed from the curve alone.
std::vector<Certificate> verify_curve(const LegendrianCurve& c, const VerifyInput& in);

struct ApproxOptions {
  double eps = 1e-6;
  std::function<double(Complex)> eps_at;  // overrides eps when set
  int max_degree = 64;
  bool immersion = false;
  int keep = -1;
  std::uint64_t seed = 0;
  int samples = 500;
};

struct ApproxResult {
  LegendrianCurve curve;
  StageReport stage;
  std::vector<Complex> points;               // S samples used
  std::vector<std::vector<Complex>> values;  // target values there
  double sup_ratio = 0.0;                    // max over samples of error / eps
  std::vector<Complex> critical_points;      // removed by the immersion fix
};

/// Jet-interpolating Legendrian approximation of `target` on S by a curve on R's pole class.
/// Throws PreconditionViolation and propagates solver errors.
ApproxResult approximate_legendrian(const CircularDomain& d, const AdmissibleSet& S, const GeneralisedCurve& target,
                                    const std::vector<JetSpec>& jets, const CompactSet& R, const ApproxOptions& opt);
ApproxResult approximate_legendrian(const ProblemSpec& spec, const CompactSet& R);

struct Extension {
  AdmissibleSet S;
  GeneralisedCurve curve;
  std::vector<Arc> arcs;
  std::vector<Disk> disks;
  std::vector<Complex> amplitudes;
  std::vector<std::string> log;
};

/// S' = S plus a disk around each Lambda'' point and an arc joining it to S. Throws
/// NoPathFound and DegenerateArcIntegral.
Extension extend_with_outside_jets(const CircularDomain& d, const AdmissibleSet& S, const GeneralisedCurve& f,
                                   const std::vector<JetSpec>& phi, std::uint64_t seed = 0);

/// Reference path for connect_legendrian: values and t-derivatives up to `order`.
using ReferencePath = std::function<std::vector<std::vector<Complex>>(double t, int order)>;

struct LegendrianPath {
  int n = 1;
  std::vector<double> t;
  std::vector<std::vector<Complex>> samples;  // 2n+1 values per t
  std::function<std::vector<Complex>(double)> value;
  std::function<std::vector<Complex>(double)> derivative;  // d/dt of every component
  Complex amplitude{};
  int bump_component = 0;
  int attempts = 0;
  bool degenerate = false;
  double min_masked = 0.0;
};

/// Path from jetA (t = 0) to jetB (t = 1), jets taken as t-derivatives. x and y are
/// Hermite interpolants (of log for masked components when rho > 0, around `reference`
/// when given) plus a bump whose amplitude makes z(1) = z_B. Throws FloorViolated.
LegendrianPath connect_legendrian(const JetSpec& a, const JetSpec& b, double rho, const std::vector<bool>& mask,
                                  const ReferencePath& reference = {}, int samples = 1024);

struct PushResult {
  LegendrianCurve curve;
  int bump_component = -1;  // -1: no bump needed
  std::vector<std::pair<double, int>> sectors;  // (start angle, dominant component)
  double min_annulus = 0.0;
  double min_outer = 0.0;
  double sup_change = 0.0;
  std::vector<std::string> log;
};

/// Deforms f so that ||F|| > rho on R2 \ Int R1 and > rho + C on bR2, changing it by at most
/// `budget` on R1 and keeping the jets. Throws PreconditionViolation, SectorCoverFailure
/// and ToleranceNotReached.
PushResult push_boundary(const LegendrianCurve& f, const CompactSet& R1, const CompactSet& R2, double rho, double C,
                         const std::vector<JetSpec>& jets, double budget, std::uint64_t seed = 0);

struct DriverResult {
  LegendrianCurve curve;
  RunReport report;
  std::vector<LegendrianCurve> rounds;
  std::vector<CompactSet> sets;
  std::vector<GeneralisedCurve> glued;  // Carleman: f_j per round
  VerifyInput verify;                    // what the final certificates were computed from
};

/// Exhaustion K_0 = R ⊂ K_1 ⊂ ... from spec.radii (or R's radius + j).
Exhaustion driver_exhaustion(const ProblemSpec& spec, int rounds);

DriverResult run_mergelyan(const ProblemSpec& spec);
DriverResult run_carleman(const ProblemSpec& spec);

struct ProperSchedule {
  bool active = false;
  std::vector<double> radii;
  std::vector<double> targets;  // required ||f_j|| on bK_j
};

/// Enlarges radii so that {q in samples : ||f(q)|| <= j} lies inside K_j. Throws NotProperOnData.
ProperSchedule upgrade_proper(const GeneralisedCurve& f, const std::vector<Complex>& samples,
                              const std::vector<double>& radii, bool proper);

/// Runs push_boundary on a spec (f = target on spec.region, R2 = spec.outer).
DriverResult run_push(const ProblemSpec& spec);
/// Runs extend_with_outside_jets followed by approximate_legendrian.
DriverResult run_extend(const ProblemSpec& spec);
DriverResult run_approximate(const ProblemSpec& spec);

bool is_pipeline(const std::string& name);
/// Dispatches on approximate | extend | push | mergelyan | carleman.
DriverResult run_pipeline(const std::string& name, const ProblemSpec& spec);

}  // namespace leglab
