#pragma once

#include <string>

#include <json.hpp>

#include "ringmap/affine_modulus.hpp"
#include "ringmap/bounds_gate.hpp"
#include "ringmap/constructors.hpp"
#include "ringmap/validators.hpp"

namespace ringmap {

using Json = nlohmann::ordered_json;

/// {"type": "annulus", "r": 1, "R": 2}, "teichmuller", "grotzsch", "slit_strip",
/// "real_slit_ring" (arcs as [from, to], "inf" allowed), "polygonal", "punctured",
/// "exterior", "affine_image" and "ft_image". Throws IoError on schema violations.
RingDomain domain_from_json(const Json& j);
Json domain_to_json(const RingDomain& d);

Json map_spec_to_json(const HarmonicMapSpec& spec);
HarmonicMapSpec map_spec_from_json(const Json& j);

/// {"type": "mobius", "a": [x, y], "rotation": theta}, {"type": "power", "degree": k},
/// or {"type": "samples", "values": [[x, y], ...]} at uniform angles.
CircleMap circle_map_from_json(const Json& j);

Json to_json(const ExtendedModulus& m);
Json to_json(const Verdict& v);
Json to_json(const ValidationReport& r);
Json to_json(const WeitsmanResult& w);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ringmap
