#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ringmap/affine_modulus.hpp"
#include "ringmap/bounds_gate.hpp"
#include "ringmap/capacity.hpp"
#include "ringmap/constructors.hpp"
#include "ringmap/errors.hpp"
#include "ringmap/io.hpp"
#include "ringmap/special_moduli.hpp"
#include "ringmap/svg.hpp"
#include "ringmap/validators.hpp"

using namespace ringmap;

namespace {

struct Common {
    bool json = false;
    int levels = 0;
    int budget = 200;
    std::uint64_t seed = 1;
    double tol = 1e-3;
};

SolverOptions solver_options(const Common& c) {
    SolverOptions o;
    if (c.levels > 0) o.levels = c.levels;
    return o;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void table(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows) std::cout << k << std::string(w - k.size() + 2, ' ') << v << "\n";
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int run_modulus(const Common& c, const std::string& domain_path, const std::string& method,
                const std::string& dump) {
    RingDomain d = domain_from_json(read_json_file(domain_path));
    SolverOptions o = solver_options(c);
    ExtendedModulus m;
    if (method == "best") m = modulus_best(d, o);
    else if (method == "grid") m = modulus_grid(d, o);
    else if (method == "closed") m = conformal_modulus_closed_form(d);
    else m = carleman_modulus(d);
    if (!dump.empty()) {
        CapacityEstimate est = solve_capacity(d, o);
        PotentialGrid g;
        solve_potential(d, est.grid_levels.back().first, o, &g);
        dump_potential(g, dump);
    }
    if (c.json) {
        Json j = to_json(m);
        j["domain"] = domain_to_json(d);
        emit(j);
    } else {
        table({{"domain", d.kind_name()},
               {"modulus", fmt(m.value)},
               {"error", m.abs_error ? fmt(*m.abs_error) : "n/a"},
               {"method", to_string(m.method)}});
    }
    return 0;
}

int run_affine(const Common& c, const std::string& domain_path, const std::string& trace) {
    RingDomain d = domain_from_json(read_json_file(domain_path));
    AffineModulusOptions o;
    o.budget = c.budget;
    if (c.levels > 0) o.final_solve.levels = c.levels;
    AffineModulusResult r = affine_modulus(d, o);
    if (!trace.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "rho,psi,modulus,method,error\n";
        for (const ShearSample& s : r.trace)
            csv << std::abs(s.k) << "," << std::arg(s.k) << "," << fmt(s.modulus.value) << ","
                << to_string(s.modulus.method) << "," << fmt(s.modulus.error()) << "\n";
        write_text_file(trace, csv.str());
    }
    if (c.json) {
        Json j{{"value", to_json(r.value)},
               {"best_shear", Json::array({r.best_shear.real(), r.best_shear.imag()})},
               {"attainment", to_string(r.attained)},
               {"evaluations", r.trace.size()}};
        emit(j);
    } else {
        table({{"domain", d.kind_name()},
               {"affine modulus", fmt(r.value.value)},
               {"error", fmt(r.value.error())},
               {"best shear", fmt(r.best_shear.real()) + " " + fmt(r.best_shear.imag()) + "i"},
               {"attainment", to_string(r.attained)},
               {"evaluations", std::to_string(r.trace.size())}});
    }
    return 0;
}

int run_gate(const Common& c, const std::string& src, const std::string& dst, bool conjecture) {
    RingDomain s = domain_from_json(read_json_file(src));
    RingDomain t = domain_from_json(read_json_file(dst));
    GateOptions o;
    o.affine.budget = c.budget;
    if (c.levels > 0) o.solver.levels = c.levels;
    Verdict v = existence_verdict(s, t, o);
    if (c.json) {
        Json j = to_json(v);
        if (!conjecture) j.erase("conjectured");
        emit(j);
    } else {
        std::vector<std::pair<std::string, std::string>> rows{
            {"status", to_string(v.status)},
            {"reason", to_string(v.reason)},
            {"m", fmt(v.source_modulus)},
            {"m affine (target)", fmt(v.target_affine_modulus)},
            {"phi(m)", fmt(v.phi_of_source)},
            {"error budget", fmt(v.error_budget)}};
        if (v.gap) rows.push_back({"gap", "[" + fmt(v.gap->first) + ", " + fmt(v.gap->second) + "]"});
        if (conjecture && v.conjectured) rows.push_back({"conjectured", to_string(*v.conjectured)});
        if (!v.note.empty()) rows.push_back({"note", v.note});
        table(rows);
    }
    return v.status == VerdictStatus::NotExists ? 2 : 0;
}

HarmonicMapSpec construct(const Common& c, const RingDomain& s, const RingDomain& t, std::string method) {
    const auto* ts = s.as<Teichmuller>();
    const auto* tt = t.as<Teichmuller>();
    if (method == "auto") {
        if (ts && tt) method = tt->s >= ts->s ? "sc-shear" : "power-shear";
        else if (t.as<PuncturedDomain>()) method = "degenerate";
        else method = "affine";
    }
    if (method == "sc-shear" || method == "power-shear") {
        if (!ts || !tt) throw ConstructionError("method", method + " maps between Teichmuller rings");
        return method == "sc-shear" ? sc_shear_map(ts->s, tt->s) : power_shear_map(ts->s, tt->s);
    }
    if (!has_closed_form(s))
        throw ConstructionError("source", "this construction needs a source with a closed-form modulus");
    RootOptions ro;
    ro.solver = solver_options(c);
    ro.modulus_tolerance = c.tol;
    if (method == "degenerate") return degenerate_target_map(s, t, ro);
    if (method == "affine") return affine_rebalance(s, t, c.budget, ro);
    throw ConstructionError("method", "unknown method " + method);
}

int run_construct(const Common& c, const std::string& src, const std::string& dst,
                  const std::string& method, const std::string& out, const std::string& svg, int grid) {
    RingDomain s = domain_from_json(read_json_file(src));
    RingDomain t = domain_from_json(read_json_file(dst));
    HarmonicMapSpec spec = construct(c, s, t, method);
    Json mj = map_spec_to_json(spec);
    if (!out.empty()) write_text_file(out, mj.dump(2) + "\n");
    ValidationReport rep = validate_map(spec, 200, c.seed);
    if (!svg.empty()) {
        if (!rep.evaluable) throw ConstructionError("render", "map has delegated stages and cannot be drawn");
        write_text_file(svg, render_grid_svg(spec, std::max(grid, 2)));
    }
    if (c.json) {
        emit({{"map", mj}, {"validation", to_json(rep)}});
    } else {
        std::vector<std::pair<std::string, std::string>> rows;
        std::string chain;
        for (const auto& st : spec.stages) chain += (chain.empty() ? "" : " -> ") + stage_name(st);
        rows.push_back({"stages", chain});
        for (const auto& [k, v] : spec.parameters) rows.push_back({k, fmt(v)});
        rows.push_back({"residual", fmt(spec.residual)});
        if (rep.evaluable) {
            rows.push_back({"harmonicity", fmt(rep.harmonicity_max)});
            rows.push_back({"injectivity violations", std::to_string(rep.injectivity_violations)});
            rows.push_back({"boundary distance", fmt(rep.boundary_hausdorff)});
            rows.push_back({"validation", rep.passed ? "passed" : "failed"});
        } else {
            rows.push_back({"validation", "not evaluable (delegated stage)"});
        }
        table(rows);
    }
    return 0;
}

int run_validate(const Common& c, const std::string& map, int samples, const std::string& report) {
    HarmonicMapSpec spec = map_spec_from_json(read_json_file(map));
    ValidationReport rep = validate_map(spec, samples, c.seed);
    Json j = to_json(rep);
    if (!report.empty()) write_text_file(report, j.dump(2) + "\n");
    if (c.json) emit(j);
    else
        table({{"evaluable", rep.evaluable ? "yes" : "no"},
               {"harmonicity", fmt(rep.harmonicity_max)},
               {"injectivity violations", std::to_string(rep.injectivity_violations)},
               {"boundary distance", fmt(rep.boundary_hausdorff)},
               {"degree", rep.degree ? std::to_string(*rep.degree) : "n/a"},
               {"result", rep.passed ? "passed" : "failed"}});
    return 0;
}

int run_weitsman(const Common& c, const std::string& map, int harmonics) {
    WeitsmanResult w = weitsman_test(circle_map_from_json(read_json_file(map)), harmonics);
    if (c.json) emit(to_json(w));
    else
        table({{"|c0| + |c1|", fmt(w.sum01)},
               {"threshold 2/pi", fmt(2.0 / kPi)},
               {"aliasing bound", fmt(w.aliasing_bound)},
               {"homeomorphism", w.homeomorphism ? "yes" : "no"},
               {"degree", std::to_string(w.degree)},
               {"shapiro sum", fmt(w.shapiro_sum)},
               {"result", w.pass ? "pass" : "fail"}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moduli, existence verdicts and explicit harmonic maps between ring domains"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--json", c.json, "machine-readable output");
        sub->add_option("--levels", c.levels, "grid levels for the capacity solver")->check(CLI::PositiveNumber);
        sub->add_option("--budget", c.budget, "modulus evaluations for the affine search");
        sub->add_option("--seed", c.seed, "seed for sampling");
        sub->add_option("--tol", c.tol, "modulus tolerance for root finding")->check(CLI::PositiveNumber);
    };

    std::string domain, source, target, method = "best", construct_method = "auto", dump, trace, out,
                svg, map, report;
    bool conjecture = false;
    int samples = 200, harmonics = 64, grid = 200;

    auto* mod = app.add_subcommand("modulus", "conformal modulus of a domain");
    mod->add_option("--domain", domain, "domain JSON")->required()->check(CLI::ExistingFile);
    mod->add_option("--method", method, "best, grid, closed or carleman")
        ->check(CLI::IsMember({"best", "grid", "closed", "carleman"}));
    mod->add_option("--dump", dump, "write the potential field");
    add_common(mod);

    auto* aff = app.add_subcommand("affine-modulus", "supremum of the modulus over affine images");
    aff->add_option("--domain", domain, "domain JSON")->required()->check(CLI::ExistingFile);
    aff->add_option("--trace", trace, "CSV of every evaluated shear");
    add_common(aff);

    auto* gate = app.add_subcommand("gate", "existence verdict for a harmonic homeomorphism");
    gate->add_option("--source", source, "source domain JSON")->required()->check(CLI::ExistingFile);
    gate->add_option("--target", target, "target domain JSON")->required()->check(CLI::ExistingFile);
    gate->add_flag("--conjecture", conjecture, "report the conjectured verdict as well");
    add_common(gate);

    auto* con = app.add_subcommand("construct", "build an explicit harmonic map");
    con->add_option("--source", source, "source domain JSON")->required()->check(CLI::ExistingFile);
    con->add_option("--target", target, "target domain JSON")->required()->check(CLI::ExistingFile);
    con->add_option("--method", construct_method, "auto, power-shear, sc-shear, degenerate or affine")
        ->check(CLI::IsMember({"auto", "power-shear", "sc-shear", "degenerate", "affine"}));
    con->add_option("--out", out, "map JSON");
    con->add_option("--grid-svg,--svg", svg, "SVG of the image of a parameter grid");
    con->add_option("--grid", grid, "points per grid curve")->check(CLI::PositiveNumber);
    add_common(con);

    auto* val = app.add_subcommand("validate", "check a map for harmonicity and injectivity");
    val->add_option("--map", map, "map JSON")->required()->check(CLI::ExistingFile);
    val->add_option("--samples", samples, "interior samples")->check(CLI::PositiveNumber);
    val->add_option("--report", report, "report JSON");
    add_common(val);

    auto* wt = app.add_subcommand("weitsman", "Fourier test of a circle homeomorphism");
    wt->add_option("--map", map, "circle map JSON")->required()->check(CLI::ExistingFile);
    wt->add_option("--harmonics", harmonics, "highest harmonic")->check(CLI::PositiveNumber);
    add_common(wt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (mod->parsed()) return run_modulus(c, domain, method, dump);
        if (aff->parsed()) return run_affine(c, domain, trace);
        if (gate->parsed()) return run_gate(c, source, target, conjecture);
        if (con->parsed()) return run_construct(c, source, target, construct_method, out, svg, grid);
        if (val->parsed()) return run_validate(c, map, samples, report);
        if (wt->parsed()) return run_weitsman(c, map, harmonics);
    } catch (const RingError& e) {
        if (c.json) emit({{"error", e.code()}, {"message", e.what()}});
        else std::cerr << "error " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        if (c.json) emit({{"error", "internal"}, {"message", e.what()}});
        else std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
