#include "ringmap/io.hpp"

#include <fstream>
#include <sstream>

#include "ringmap/errors.hpp"

namespace ringmap {

namespace {

// Infinite values are written as the string "inf" since JSON has no infinity.
Json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double get_number(const Json& j, const char* key) {
    if (!j.contains(key)) throw IoError("schema", std::string("missing field '") + key + "'");
    const Json& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && v == "inf") return kInf;
    if (v.is_string() && v == "-inf") return -kInf;
    throw IoError("schema", std::string("field '") + key + "' must be a number");
}

Json point(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex get_point(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw IoError("schema", "points are [x, y] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

Complex get_point(const Json& j, const char* key, Complex fallback) {
    return j.contains(key) ? get_point(j.at(key)) : fallback;
}

Json polygon(const Polygon& p) {
    Json a = Json::array();
    for (Complex z : p) a.push_back(point(z));
    return a;
}

Polygon get_polygon(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw IoError("schema", std::string("field '") + key + "' must be a list of points");
    Polygon p;
    for (const Json& z : j.at(key)) p.push_back(get_point(z));
    return p;
}

Json ext_real(const ExtReal& x) { return x.infinite ? Json("inf") : Json(x.value); }

ExtReal get_ext_real(const Json& j) {
    if (j.is_number()) return ExtReal::finite(j.get<double>());
    if (j.is_string() && (j == "inf" || j == "-inf")) return ExtReal::infinity();
    throw IoError("schema", "arc endpoints are numbers or \"inf\"");
}

Arc get_arc(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2)
        throw IoError("schema", std::string("field '") + key + "' must be [from, to]");
    return {get_ext_real(j.at(key)[0]), get_ext_real(j.at(key)[1])};
}

Json affine(const AffineMap& m) { return {{"a", point(m.a)}, {"b", point(m.b)}, {"c", point(m.c)}}; }

AffineMap get_affine(const Json& j) {
    return {get_point(j, "a", 1.0), get_point(j, "b", 0.0), get_point(j, "c", 0.0)};
}

std::string get_type(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw IoError("schema", "object needs a string 'type'");
    return j.at("type").get<std::string>();
}

}  // namespace

RingDomain domain_from_json(const Json& j) {
    const std::string type = get_type(j);
    RingDomain d = [&]() {
        if (type == "annulus")
            return RingDomain::annulus(get_number(j, "r"), get_number(j, "R"), get_point(j, "center", 0.0));
        if (type == "teichmuller") return RingDomain::teichmuller(get_number(j, "s"));
        if (type == "grotzsch") return RingDomain::grotzsch(get_number(j, "s"));
        if (type == "slit_strip") return RingDomain::slit_strip(get_number(j, "s"));
        if (type == "real_slit_ring")
            return RingDomain::real_slit_ring(get_arc(j, "arc1"), get_arc(j, "arc2"),
                                              get_point(j, "origin", 0.0), get_point(j, "direction", 1.0));
        if (type == "polygonal") return RingDomain::polygonal(get_polygon(j, "outer"), get_polygon(j, "inner"));
        if (type == "punctured") {
            if (j.contains("half_plane")) {
                const Json& h = j.at("half_plane");
                return RingDomain::punctured(HalfPlane{get_point(h, "point", 0.0), get_point(h, "normal", Complex(0, 1))},
                                             get_point(j.at("puncture")));
            }
            return RingDomain::punctured(get_polygon(j, "outer"), get_point(j.at("puncture")));
        }
        if (type == "exterior") return RingDomain::exterior(get_polygon(j, "hole"));
        if (type == "affine_image") {
            if (!j.contains("base") || !j.contains("map")) throw IoError("schema", "affine_image needs base and map");
            return RingDomain::affine_image(domain_from_json(j.at("base")), get_affine(j.at("map")));
        }
        if (type == "ft_image") {
            if (!j.contains("base")) throw IoError("schema", "ft_image needs base");
            return RingDomain::ft_image(domain_from_json(j.at("base")), get_number(j, "t"));
        }
        throw IoError("schema", "unknown domain type '" + type + "'");
    }();
    if (j.contains("complement_bounded") && j.at("complement_bounded").is_boolean())
        d = d.with_declared_complement_bounded(j.at("complement_bounded").get<bool>());
    return d;
}

Json domain_to_json(const RingDomain& d) {
    Json j = std::visit(
        [](const auto& k) -> Json {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Annulus>)
                return {{"type", "annulus"}, {"r", k.r}, {"R", k.R}, {"center", point(k.center)}};
            else if constexpr (std::is_same_v<T, Teichmuller>)
                return {{"type", "teichmuller"}, {"s", k.s}};
            else if constexpr (std::is_same_v<T, Grotzsch>)
                return {{"type", "grotzsch"}, {"s", k.s}};
            else if constexpr (std::is_same_v<T, SlitStrip>)
                return {{"type", "slit_strip"}, {"s", k.s}};
            else if constexpr (std::is_same_v<T, RealSlitRing>)
                return {{"type", "real_slit_ring"},
                        {"arc1", Json::array({ext_real(k.arc1.from), ext_real(k.arc1.to)})},
                        {"arc2", Json::array({ext_real(k.arc2.from), ext_real(k.arc2.to)})},
                        {"origin", point(k.origin)},
                        {"direction", point(k.direction)}};
            else if constexpr (std::is_same_v<T, PolygonalRing>)
                return {{"type", "polygonal"}, {"outer", polygon(k.outer)}, {"inner", polygon(k.inner)}};
            else if constexpr (std::is_same_v<T, PuncturedDomain>) {
                Json out{{"type", "punctured"}};
                if (auto p = std::get_if<Polygon>(&k.outer)) out["outer"] = polygon(*p);
                else {
                    const auto& h = std::get<HalfPlane>(k.outer);
                    out["half_plane"] = {{"point", point(h.point)}, {"normal", point(h.normal)}};
                }
                out["puncture"] = point(k.puncture);
                return out;
            } else if constexpr (std::is_same_v<T, ExteriorDomain>)
                return {{"type", "exterior"}, {"hole", polygon(k.hole)}};
            else if constexpr (std::is_same_v<T, AffineImage>)
                return {{"type", "affine_image"}, {"base", domain_to_json(*k.base)}, {"map", affine(k.map)}};
            else
                return {{"type", "ft_image"}, {"base", domain_to_json(*k.base)}, {"t", k.t}};
        },
        d.kind());
    if (d.declared_complement_bounded()) j["complement_bounded"] = true;
    return j;
}

Json map_spec_to_json(const HarmonicMapSpec& spec) {
    Json stages = Json::array();
    for (const MapStage& s : spec.stages) {
        stages.push_back(std::visit(
            [](const auto& st) -> Json {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, MobiusPre>)
                    return {{"type", "mobius"}, {"a", point(st.a)}, {"b", point(st.b)}, {"c", point(st.c)},
                            {"d", point(st.d)}};
                else if constexpr (std::is_same_v<T, DelegatedConformal>)
                    return {{"type", "delegated"}, {"description", st.description}};
                else if constexpr (std::is_same_v<T, ShearAnalytic>)
                    return {{"type", "sc_shear"}, {"a", st.a}};
                else if constexpr (std::is_same_v<T, PowerShear>)
                    return {{"type", "power_shear"}, {"alpha", st.alpha}};
                else if constexpr (std::is_same_v<T, FtInverse>)
                    return {{"type", "ft_inverse"}, {"t", st.t}, {"center", point(st.center)}};
                else
                    return {{"type", "affine"}, {"map", affine(st.map)}};
            },
            s));
    }
    Json params = Json::object();
    for (const auto& [name, v] : spec.parameters) params[name] = number(v);
    return {{"source", domain_to_json(spec.source)},
            {"target", domain_to_json(spec.target)},
            {"stages", stages},
            {"residual", number(spec.residual)},
            {"parameters", params}};
}

HarmonicMapSpec map_spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("stages") || !j.at("stages").is_array())
        throw IoError("schema", "map needs a 'stages' list");
    HarmonicMapSpec spec;
    spec.source = domain_from_json(j.at("source"));
    spec.target = domain_from_json(j.at("target"));
    for (const Json& s : j.at("stages")) {
        const std::string type = get_type(s);
        if (type == "mobius")
            spec.stages.push_back(MobiusPre{get_point(s, "a", 1.0), get_point(s, "b", 0.0),
                                            get_point(s, "c", 0.0), get_point(s, "d", 1.0)});
        else if (type == "delegated")
            spec.stages.push_back(DelegatedConformal{s.value("description", std::string())});
        else if (type == "sc_shear")
            spec.stages.push_back(ShearAnalytic{get_number(s, "a")});
        else if (type == "power_shear")
            spec.stages.push_back(PowerShear{get_number(s, "alpha")});
        else if (type == "ft_inverse")
            spec.stages.push_back(FtInverse{get_number(s, "t"), get_point(s, "center", 0.0)});
        else if (type == "affine") {
            if (!s.contains("map")) throw IoError("schema", "affine stage needs 'map'");
            spec.stages.push_back(AffinePost{get_affine(s.at("map"))});
        } else
            throw IoError("schema", "unknown stage type '" + type + "'");
    }
    if (j.contains("residual")) spec.residual = get_number(j, "residual");
    if (j.contains("parameters")) {
        for (const auto& [name, v] : j.at("parameters").items())
            spec.parameters.emplace_back(name, get_number(j.at("parameters"), name.c_str()));
    }
    check_chain(spec);
    return spec;
}

CircleMap circle_map_from_json(const Json& j) {
    const std::string type = get_type(j);
    CircleMap f;
    if (type == "mobius") {
        Complex a = get_point(j, "a", 0.0);
        if (!(std::abs(a) < 1.0)) throw IoError("schema", "disk automorphism needs |a| < 1");
        double rot = j.contains("rotation") ? get_number(j, "rotation") : 0.0;
        f.evaluator = [a, rot](double th) {
            Complex z = std::polar(1.0, th);
            return std::polar(1.0, rot) * (z - a) / (1.0 - std::conj(a) * z);
        };
    } else if (type == "power") {
        double k = get_number(j, "degree");
        f.evaluator = [k](double th) { return std::polar(1.0, k * th); };
    } else if (type == "samples") {
        Polygon v = get_polygon(j, "values");
        if (v.size() < 3) throw IoError("schema", "need at least 3 samples");
        // Linear interpolation of the lifted argument between uniform angles.
        std::vector<double> lift(v.size() + 1);
        lift[0] = std::arg(v[0]);
        for (std::size_t i = 1; i <= v.size(); ++i)
            lift[i] = lift[i - 1] + std::arg(v[i % v.size()] / v[i - 1]);
        f.evaluator = [lift, n = v.size()](double th) {
            double x = std::fmod(th, 2.0 * kPi);
            if (x < 0) x += 2.0 * kPi;
            double pos = x / (2.0 * kPi) * double(n);
            std::size_t i = std::min(static_cast<std::size_t>(pos), n - 1);
            double w = pos - double(i);
            return std::polar(1.0, (1.0 - w) * lift[i] + w * lift[i + 1]);
        };
    } else {
        throw IoError("schema", "unknown circle map type '" + type + "'");
    }
    if (j.value("sense", std::string("preserving")) == "reversing") f.sense = CircleMap::Sense::Reversing;
    return f;
}

Json to_json(const ExtendedModulus& m) {
    Json j{{"value", number(m.value)}, {"method", to_string(m.method)}};
    j["abs_error"] = m.abs_error ? number(*m.abs_error) : Json();
    return j;
}

Json to_json(const Verdict& v) {
    Json j{{"status", to_string(v.status)},
           {"reason", to_string(v.reason)},
           {"m", number(v.source_modulus)},
           {"m_affine", number(v.target_affine_modulus)},
           {"phi_m", number(v.phi_of_source)},
           {"error_budget", number(v.error_budget)}};
    if (v.gap) j["thresholds"] = {{"necessary", number(v.gap->first)}, {"sufficient", number(v.gap->second)}};
    else j["thresholds"] = Json();
    j["conjectured"] = v.conjectured ? Json(to_string(*v.conjectured)) : Json();
    j["note"] = v.note;
    return j;
}

Json to_json(const ValidationReport& r) {
    Json j{{"evaluable", r.evaluable},
           {"passed", r.passed},
           {"samples", r.samples},
           {"harmonicity_max", number(r.harmonicity_max)},
           {"injectivity_violations", r.injectivity_violations},
           {"boundary_hausdorff", number(r.boundary_hausdorff)}};
    j["dilatation_margin"] = r.dilatation_margin ? number(*r.dilatation_margin) : Json();
    j["degree"] = r.degree ? Json(*r.degree) : Json();
    return j;
}

Json to_json(const WeitsmanResult& w) {
    return {{"sum01", w.sum01},        {"threshold", 2.0 / kPi},  {"pass", w.pass},
            {"homeomorphism", w.homeomorphism}, {"degree", w.degree}, {"shapiro_sum", w.shapiro_sum},
            {"aliasing_bound", w.aliasing_bound}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("open", "cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("parse", path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("open", "cannot write " + path);
    out << text;
    if (!out) throw IoError("write", "write failed for " + path);
}

}  // namespace ringmap
