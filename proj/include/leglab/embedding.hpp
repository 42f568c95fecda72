#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "leglab/contact.hpp"
#include "leglab/geometry.hpp"
#include "leglab/spray.hpp"

namespace leglab {

struct GridOptions {
  int grid = 150;          // lattice cells across the bounding box of K
  double margin_cells = 4;  // diagonal margin in lattice spacings
  int max_depth = 10;       // cell-pair subdivision depth
  long max_tests = 20'000'000;
};

/// Grid-injectivity certificate off the diagonal: every pair of points p, q of K with
/// |p - q| >= margin has f(p) != f(q), shown by cell pairs separated in some component
/// by more than the Lipschitz slack of the two cells.
struct InjectivityCertificate {
  bool certified = false;
  double spacing = 0.0;
  double margin = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();  // min over tested pairs of max_k (|df_k| - slack_k)
  double lipschitz = 0.0;                                    // largest per-cell Lipschitz bound
  int cells = 0;
  long tests = 0;
  int depth_used = 0;
  std::vector<std::pair<Complex, Complex>> failures;  // unresolved cell pairs (at most 16)
};

InjectivityCertificate certify_injective(const std::vector<LaurentPoly>& comps, const CompactSet& k,
                                         const GridOptions& opt = {});

/// Representatives of the cell pairs the certificate cannot separate, clustered, closest
/// images first.
std::vector<std::pair<Complex, Complex>> double_point_candidates(const std::vector<LaurentPoly>& comps,
                                                                 const CompactSet& k, const GridOptions& opt = {},
                                                                 int max_pairs = 8);

/// w1(u) = 0, w1(v) = 1, w2(u) = w2(v) = 0, int_E w2 dy1 = -1, int_E w1 dy1 = 0, and both
/// with zero integrals of w dy1 over the period rows and killed jets.
struct EmbeddingProbe {
  Complex u{}, v{};
  Arc path;
  LaurentPoly w1, w2;
  double mu = 0.0;            // max of sup |w1|, sup |w2| on the samples
  double w3_residual = 0.0;   // max violation of the point conditions
  CorrectionReport report;
};

EmbeddingProbe build_probe(const LegendrianCurve& f, const CompactSet& k, Complex u, Complex v,
                           const KernelRows& base_rows, const std::vector<Complex>& samples, std::uint64_t seed = 0);

struct EmbeddingOptions {
  GridOptions grid;
  int samples_per_radius = 64;
  int radii = 20;
  int max_probes = 8;
};

struct SearchTrace {
  double radius = 0.0;
  int tried = 0;
  int sup_rejects = 0;
  int jet_rejects = 0;
  int cert_rejects = 0;
};

struct EmbeddingResult {
  bool certified = false;
  LegendrianCurve curve;
  InjectivityCertificate certificate;
  std::vector<EmbeddingProbe> probes;
  std::vector<Complex> xi;
  double sup_change = 0.0;
  double jet_change = 0.0;
  std::vector<SearchTrace> trace;
  std::vector<std::string> log;
  std::string diagnostics() const;
};

/// Randomised search over f + sum xi_k (w1_k, w2_k) spray directions (x_1 and z change)
/// for a grid-injective curve with sup change <= eps and jets kept to 1e-10. Always
/// returns the best attempt; `certified` tells whether it succeeded.
EmbeddingResult embedding_search_report(const LegendrianCurve& f, const CompactSet& k, const std::vector<JetSpec>& jets,
                                        double eps, std::uint64_t seed, const EmbeddingOptions& opt = {});

/// Same, throwing SearchExhausted (with the diagnostics) when nothing certifies.
LegendrianCurve embedding_search(const LegendrianCurve& f, const CompactSet& k, const std::vector<JetSpec>& jets,
                                 double eps, std::uint64_t seed, const EmbeddingOptions& opt = {});

using CurveFamily = std::function<LegendrianCurve(const std::vector<Complex>&)>;

/// H(v, xi) - H(u, xi) for each probe pair.
std::vector<std::vector<Complex>> difference_map(const CurveFamily& family,
                                                 const std::vector<std::pair<Complex, Complex>>& probes,
                                                 const std::vector<Complex>& xi);

}  // namespace leglab
