#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "leglab/contact.hpp"
#include "leglab/geometry.hpp"
#include "leglab/laurent.hpp"
#include "leglab/pipeline.hpp"

namespace leglab {

using Json = nlohmann::json;

/// Every reader below throws Error(ParseError) on malformed input.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

Json to_json(Complex c);
Complex complex_from_json(const Json& j);

/// {"centers":[[re,im],...],"poly":[[k,re,im],...],"poles":[[center,k,re,im],...]}, k ascending,
/// pole exponents negative. Doubles round-trip bit-exactly.
Json to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const Json& j);

Json to_json(const Disk& d);
Disk disk_from_json(const Json& j);

/// {"outer":{"type":"disk"|"plane","center":...,"radius":...},"holes":[disk,...]}
Json to_json(const CircularDomain& d);
CircularDomain domain_from_json(const Json& j);

/// {"center":...,"radius":...,"excluded":[disk,...]}; without "excluded" the set is
/// CompactSet::in_domain(d, center, radius).
Json to_json(const CompactSet& k);
CompactSet compact_from_json(const Json& j, const CircularDomain& d);

/// Polylines as vertex arrays, other arcs as {"pieces":[...]}.
Json to_json(const Arc& a);
Arc arc_from_json(const Json& j);

Json to_json(const AdmissibleSet& s);
AdmissibleSet admissible_from_json(const Json& j, const CircularDomain& d);

/// {"p":[re,im],"m":m,"x":[[...],...],"y":[[...],...],"z":[...]}
Json to_json(const JetSpec& jet);
JetSpec jet_from_json(const Json& j);

Json to_json(const ContactForm& f);
ContactForm form_from_json(const Json& j, int n);

/// {"n":..,"domain":..,"form":..,"x":[..],"y":[..],"z":..}
Json to_json(const LegendrianCurve& c);
LegendrianCurve curve_from_json(const Json& j);

Json to_json(const VerifyInput& in);
VerifyInput verify_input_from_json(const Json& j, const CircularDomain& d);

/// Curve plus the checks its certificates were computed from, under "checks".
Json curve_file(const LegendrianCurve& c, const VerifyInput& checks);

Json to_json(const ProblemSpec& s);
ProblemSpec spec_from_json(const Json& j);

Json to_json(const Certificate& c);
Json to_json(const StageReport& s);
Json to_json(const RunReport& r);

/// Sample paths for plotting: the circles bounding `region` and the arcs of S.
std::vector<std::vector<Complex>> sample_paths(const CompactSet& region, const AdmissibleSet& S, int count = 1024);

/// CSV with header t_index,component_index,re,im. t_index runs over all path samples in
/// order; component_index -1 holds the parameter zeta, 0..2n the components x, y, z.
void write_samples_csv(std::ostream& os, const LegendrianCurve& c, const std::vector<std::vector<Complex>>& paths);

}  // namespace leglab
