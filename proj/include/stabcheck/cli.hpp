#pragma once

// Command-line front end. Exit status: 0 success / Pass / Equal,
// 2 certified obstruction (Fail / Distinct), 1 input or precondition error.

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stabcheck/io.hpp"
#include "stabcheck/scenarios.hpp"
#include "stabcheck/stabilize.hpp"

namespace stabcheck::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_obstruction = 2;

enum class Format { Text, Structured };

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string output;
    Tolerances tolerances;
    Format format = Format::Text;
};

namespace detail {

using io::json;

struct Report {
    json doc;
    std::ostringstream text;
    int status = exit_ok;
};

inline std::string tolerance_line(const Tolerances& t) {
    std::ostringstream os;
    os << "# tolerances: zero-relative=" << t.zero_relative << " adequacy-margin=" << t.adequacy_margin
       << " rounding=" << t.rounding;
    return os.str();
}

inline std::string digest_of(const std::vector<std::pair<std::string, std::string>>& named) {
    std::string all;
    for (const auto& [name, contents] : named) {
        all += name;
        all.push_back('\0');
        all += contents;
        all.push_back('\0');
    }
    return "sha256:" + io::sha256_hex(all);
}

/// Loaded inputs shared by the field-based subcommands.
struct Inputs {
    ComplexPtr complex;
    std::optional<std::string> complex_name;
    std::vector<std::pair<std::string, std::string>> files;

    std::string read(const std::string& path) {
        std::string s = io::read_file(path);
        files.emplace_back(path, s);
        return s;
    }

    void load_complex(const std::string& path) {
        const std::string text = read(path);
        auto c = std::make_shared<const SimplicialComplex>(io::parse_complex(text, path));
        if (auto defect = validate(*c)) throw InvalidComplexError(path + ": invalid complex: " + defect->message);
        complex = std::move(c);
        complex_name = io::declared_string(text, "name", path);
    }

    FramedField field(const std::string& path, const Tolerances& tol) {
        const std::string text = read(path);
        const auto target = io::declared_string(text, "complex", path);
        if (target && complex_name && *target != *complex_name)
            throw PreconditionError(path + ": field belongs to complex '" + *target + "', not '" + *complex_name + "'");
        return io::parse_field(text, complex, tol, path);
    }

    HomologyGroup h1(const std::vector<std::string>& basis_paths) {
        HomologyGroup h = homology(complex, 1);
        if (basis_paths.empty()) return h;
        std::vector<Cycle> basis;
        for (const auto& p : basis_paths) basis.push_back(io::parse_cycle(read(p), *complex, p));
        return rebase(h, basis);
    }
};

inline std::string group_line(const HomologyGroup& h) {
    return "H" + std::to_string(h.degree) + " = " + h.to_string();
}

inline void describe_generators(std::ostream& os, const HomologyGroup& h) {
    for (std::size_t i = 0; i < h.generator_count(); ++i) {
        os << "  H" << h.degree << " generator " << i << " (" << (h.order(i) == 0 ? "free" : "order " + h.order(i).get_str())
           << "): " << io::chain_json(h.generators[i].chain(), *h.complex).dump() << "\n";
    }
}

inline void render_compare(std::ostream& os, const CompareVerdict& v, const std::string& x, const std::string& y) {
    os << "[" << theorem::homotopy << "] " << x << " vs " << y << ": " << io::outcome_name(v.outcome);
    if (v.distinct())
        os << " on generator " << *v.witness_generator << ", windings " << v.winding_x << " and " << v.winding_y;
    os << "\n  classes " << x << ":";
    for (const auto& c : v.x_classes) os << " " << io::format_class(c.stacked());
    os << "\n  classes " << y << ":";
    for (const auto& c : v.y_classes) os << " " << io::format_class(c.stacked());
    os << "\n  " << v.interpretation() << "\n";
}

inline std::string span_text(const IntMatrix& m) {
    std::string out = "span{";
    for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? ", " : "") + io::format_vector(m.column(j));
    return out + "}";
}

inline void render_check(std::ostream& os, const StabilizabilityVerdict& v, const std::string& y,
                         const std::string& image) {
    os << "[" << theorem::inclusion << "] " << y << " against " << image << ": " << io::outcome_name(v.outcome);
    if (v.failed()) {
        os << ", witness " << io::format_class(v.witness->stacked()) << " = " << io::format_vector(v.witness->stacked())
           << " not in " << span_text(v.effective_lattice) << "\n  refutation: functional "
           << io::format_vector(v.refutation->functional) << ", modulus " << v.refutation->modulus;
    } else {
        os << ", coefficients";
        for (const auto& c : v.coefficients) os << " " << io::format_vector(c);
        os << " w.r.t. " << span_text(v.effective_lattice);
    }
    os << "\n  " << v.interpretation() << "\n";
}

inline void render_index(std::ostream& os, const IndexVerdict& v, const std::string& field) {
    os << "[" << theorem::index << "] " << field << ": winding " << v.winding << ", " << (v.pass ? "Pass" : "Fail")
       << "\n  " << v.interpretation() << "\n";
}

inline json base_doc(const std::string& command, const Tolerances& tol, const std::string& digest) {
    return json{{"command", command}, {"tolerances", io::tolerances_json(tol)}, {"inputs-digest", digest}};
}

inline void merge(json& into, const json& from) {
    for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

// --- subcommands -------------------------------------------------------------

inline Report do_homology(const RunConfig& cfg, std::optional<std::size_t> degree) {
    Inputs in;
    in.load_complex(cfg.inputs.at(0));
    std::vector<std::size_t> degrees;
    if (degree) {
        degrees.push_back(*degree);
    } else {
        const int dim = in.complex->dimension();
        for (int k = 0; k <= std::max(dim, 0); ++k) degrees.push_back(static_cast<std::size_t>(k));
    }
    Report r;
    r.doc = base_doc("homology", cfg.tolerances, digest_of(in.files));
    json groups = json::array();
    std::vector<HomologyGroup> hs;
    std::string line;
    for (std::size_t k : degrees) {
        hs.push_back(homology(in.complex, k));
        groups.push_back(io::homology_json(hs.back()));
        line += (line.empty() ? "" : ", ") + group_line(hs.back());
    }
    merge(r.doc, json{{"theorem", nullptr},
                      {"outcome", "success"},
                      {"witness", nullptr},
                      {"coefficients", nullptr},
                      {"homology", std::move(groups)},
                      {"interpretation", line}});
    r.text << line << "\n";
    for (const auto& h : hs) describe_generators(r.text, h);
    return r;
}

inline Report do_winding(const RunConfig& cfg, const std::vector<std::string>& basis) {
    Inputs in;
    in.load_complex(cfg.inputs.at(0));
    const FramedField f = in.field(cfg.inputs.at(1), cfg.tolerances);
    const std::string& cycle_arg = cfg.inputs.at(2);

    std::optional<Cycle> cycle;
    std::string cycle_name = cycle_arg;
    if (cycle_arg.rfind("H1:", 0) == 0) {
        const HomologyGroup h = in.h1(basis);
        std::size_t i = 0;
        try {
            i = std::stoul(cycle_arg.substr(3));
        } catch (const std::exception&) {
            throw PreconditionError("cycle '" + cycle_arg + "': expected H1:<generator index>");
        }
        if (i >= h.generator_count())
            throw PreconditionError("cycle '" + cycle_arg + "': H1 has " + std::to_string(h.generator_count()) +
                                    " generators");
        cycle = h.generators[i];
    } else {
        cycle = io::parse_cycle(in.read(cycle_arg), *in.complex, cycle_arg);
    }
    const long w = winding_number(f, *cycle);

    Report r;
    r.doc = base_doc("winding", cfg.tolerances, digest_of(in.files));
    merge(r.doc, json{{"theorem", nullptr},
                      {"outcome", "success"},
                      {"witness", json{{"winding", w}, {"cycle", io::chain_json(cycle->chain(), *in.complex)}}},
                      {"coefficients", nullptr},
                      {"interpretation", "winding number of the field along " + cycle_name}});
    r.text << "winding number along " << cycle_name << " = " << w << "\n";
    return r;
}

inline Report do_compare(const RunConfig& cfg, const std::vector<std::string>& basis) {
    Inputs in;
    in.load_complex(cfg.inputs.at(0));
    const FramedField x = in.field(cfg.inputs.at(1), cfg.tolerances);
    const FramedField y = in.field(cfg.inputs.at(2), cfg.tolerances);
    const HomologyGroup h1 = in.h1(basis);
    const CompareVerdict v = compare_vector_fields(x, y, h1);

    Report r;
    r.doc = base_doc("compare", cfg.tolerances, digest_of(in.files));
    merge(r.doc, io::to_json(v));
    r.doc["homology"] = io::homology_json(h1);
    r.text << group_line(h1) << "\n";
    describe_generators(r.text, h1);
    render_compare(r.text, v, cfg.inputs.at(1), cfg.inputs.at(2));
    r.status = v.distinct() ? exit_obstruction : exit_ok;
    return r;
}

inline Report do_check(const RunConfig& cfg, const std::vector<std::string>& basis, const std::string& image_path,
                       const std::string& single_input) {
    Inputs in;
    in.load_complex(cfg.inputs.at(0));
    const FramedField y = in.field(cfg.inputs.at(1), cfg.tolerances);
    const HomologyGroup h1 = in.h1(basis);

    ImageLattice image;
    std::string image_name;
    if (!image_path.empty()) {
        const auto cols = io::parse_lattice_columns(in.read(image_path), image_path);
        image.generators = IntMatrix::from_columns(cols, cols.empty() ? h1.generator_count() + 1 : cols.front().size());
        image_name = "image lattice " + image_path;
    } else {
        try {
            image = single_input_image(in.field(single_input, cfg.tolerances), h1);
        } catch (const ZeroSampleError& e) {
            throw PreconditionError(single_input + ": " + e.what() +
                                    "; the single-input image needs a nowhere-zero input field, "
                                    "supply the image lattice directly with --image");
        }
        image_name = "single-input image of " + single_input;
    }
    const StabilizabilityVerdict v = check_stabilizability(y, image, h1);

    Report r;
    r.doc = base_doc("check", cfg.tolerances, digest_of(in.files));
    merge(r.doc, io::to_json(v));
    r.doc["homology"] = io::homology_json(h1);
    r.text << group_line(h1) << "\n";
    describe_generators(r.text, h1);
    render_check(r.text, v, cfg.inputs.at(1), image_name);
    r.status = v.failed() ? exit_obstruction : exit_ok;
    return r;
}

inline Scenario with_tolerances(Scenario s, const Tolerances& tol) {
    std::map<std::string, FramedField> fields;
    for (const auto& [name, f] : s.fields) fields.emplace(name, FramedField(f.complex(), f.samples(), tol));
    s.fields = std::move(fields);
    return s;
}

inline void export_scenario(const Scenario& s, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    io::write_file((base / "complex.yaml").string(), io::write_complex(*s.complex));
    for (const auto& [name, f] : s.fields) io::write_file((base / ("field-" + name + ".yaml")).string(), io::write_field(f));
    for (const auto& [name, c] : s.cycles)
        io::write_file((base / ("cycle-" + name + ".yaml")).string(), io::write_cycle(c, *s.complex));
}

inline Report do_scenario(const RunConfig& cfg, const std::string& export_dir) {
    const Scenario s = with_tolerances(build_scenario(cfg.inputs.at(0)), cfg.tolerances);
    if (!export_dir.empty()) export_scenario(s, export_dir);
    const ScenarioResult res = evaluate(s);

    std::vector<std::pair<std::string, std::string>> named{{"scenario", s.name},
                                                           {"complex", io::write_complex(*s.complex)}};
    for (const auto& [name, f] : s.fields) named.emplace_back("field " + name, io::write_field(f));

    Report r;
    r.doc = base_doc("scenario", cfg.tolerances, digest_of(named));
    std::ostream& t = r.text;
    t << "scenario " << s.name << ": " << s.description << "\n";
    t << "frame: " << s.frame << "\n";
    t << group_line(res.h0) << ", " << group_line(res.h1);
    if (!s.basis.empty()) {
        t << " (basis:";
        for (const auto& b : s.basis) t << " " << b;
        t << ")";
    }
    t << "\n";

    auto mark = [](bool ok) { return ok ? "ok" : "MISMATCH"; };
    json windings = json::array();
    for (const auto& w : res.windings) {
        t << "winding " << w.expected.field << " along " << w.expected.cycle << " = " << w.actual << " (expected "
          << w.expected.value << ") " << mark(w.matched) << "\n";
        windings.push_back(json{{"field", w.expected.field},
                                {"cycle", w.expected.cycle},
                                {"winding", w.actual},
                                {"expected", w.expected.value},
                                {"matched", w.matched}});
    }
    json results = json::array();
    for (const auto& c : res.compares) {
        render_compare(t, c.verdict, c.expected.x, c.expected.y);
        t << "  expected " << io::outcome_name(c.expected.outcome) << " " << mark(c.matched) << "\n";
        json j = io::to_json(c.verdict);
        j["fields"] = json::array({c.expected.x, c.expected.y});
        j["expected"] = io::outcome_name(c.expected.outcome);
        j["matched"] = c.matched;
        results.push_back(std::move(j));
    }
    for (const auto& c : res.checks) {
        render_check(t, c.verdict, c.expected.y, "single-input image of " + c.expected.input);
        t << "  expected " << io::outcome_name(c.expected.outcome) << " " << mark(c.matched) << "\n";
        json j = io::to_json(c.verdict);
        j["fields"] = json::array({c.expected.y, c.expected.input});
        j["expected"] = io::outcome_name(c.expected.outcome);
        j["matched"] = c.matched;
        results.push_back(std::move(j));
    }
    for (const auto& i : res.indices) {
        render_index(t, i.verdict, i.expected.field);
        t << "  expected winding " << i.expected.winding << ", " << (i.expected.pass ? "Pass" : "Fail") << " "
          << mark(i.matched) << "\n";
        json j = io::to_json(i.verdict);
        j["fields"] = json::array({i.expected.field});
        j["expected"] = i.expected.pass ? "Pass" : "Fail";
        j["matched"] = i.matched;
        results.push_back(std::move(j));
    }
    json attraction = json::array();
    for (const auto& a : res.attraction) {
        t << "attraction (advisory) " << a.name << ": " << to_string(a.report.verdict) << " (expected "
          << to_string(a.expected) << ") " << mark(a.matched) << "\n";
        json traj = json::array();
        for (const auto& tr : a.report.trajectories)
            traj.push_back(json{{"initial", tr.initial},
                                {"final", tr.final},
                                {"initial-distance", tr.initial_distance},
                                {"final-distance", tr.final_distance},
                                {"verdict", to_string(tr.verdict)}});
        attraction.push_back(json{{"name", a.name},
                                  {"verdict", to_string(a.report.verdict)},
                                  {"expected", to_string(a.expected)},
                                  {"horizon", a.report.horizon},
                                  {"step", a.report.step},
                                  {"trajectories", std::move(traj)}});
    }

    const bool obstruction = res.obstruction_found();
    const bool reproduced = res.all_matched();
    t << "outcome: " << (obstruction ? "obstruction found" : "no obstruction (inconclusive for stability)") << "\n";
    if (!reproduced) t << "expected verdicts NOT reproduced\n";

    merge(r.doc, json{{"scenario", s.name},
                      {"theorem", nullptr},
                      {"outcome", obstruction ? "obstruction" : "inconclusive"},
                      {"witness", nullptr},
                      {"coefficients", nullptr},
                      {"interpretation", s.description},
                      {"frame", s.frame},
                      {"homology", json::array({io::homology_json(res.h0), io::homology_json(res.h1)})},
                      {"windings", std::move(windings)},
                      {"results", std::move(results)},
                      {"attraction", std::move(attraction)},
                      {"expected-reproduced", reproduced}});
    r.status = !reproduced ? exit_error : (obstruction ? exit_obstruction : exit_ok);
    return r;
}

inline Report do_verify(const RunConfig& cfg) {
    const std::string path = cfg.inputs.at(0);
    json doc;
    try {
        doc = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    std::vector<json> verdicts;
    if (doc.contains("results")) {
        for (const auto& v : doc.at("results")) verdicts.push_back(v);
    } else if (doc.contains("theorem") && !doc.at("theorem").is_null()) {
        verdicts.push_back(doc);
    }
    Report r;
    r.doc = base_doc("verify", cfg.tolerances, digest_of({{path, io::read_file(path)}}));
    bool all = true;
    json checked = json::array();
    for (const auto& v : verdicts) {
        bool ok = false;
        try {
            ok = io::reverify(v);
        } catch (const json::exception& e) {
            throw ParseError(path + ": malformed verdict: " + e.what());
        }
        all = all && ok;
        checked.push_back(json{{"theorem", v.at("theorem")}, {"outcome", v.at("outcome")}, {"reproduced", ok}});
        r.text << v.at("theorem").get<std::string>() << " " << v.at("outcome").get<std::string>() << ": "
               << (ok ? "reproduced" : "NOT reproduced") << "\n";
    }
    merge(r.doc, json{{"theorem", nullptr},
                      {"outcome", all ? "reproduced" : "not-reproduced"},
                      {"witness", nullptr},
                      {"coefficients", nullptr},
                      {"verdicts", std::move(checked)},
                      {"interpretation", "re-derived recorded verdicts from their witnesses"}});
    r.status = all ? exit_ok : exit_error;
    return r;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Homological obstructions to asymptotic stability and feedback stabilization", "stabcheck"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string format = "text";
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "structured", "json"}));
    app.add_option("--output,-o", cfg.output, "Write the report to this file instead of stdout");
    app.add_option("--eps-zero", cfg.tolerances.zero_relative, "Relative norm below which a sample counts as zero")
        ->check(CLI::PositiveNumber);
    app.add_option("--delta", cfg.tolerances.adequacy_margin, "Adequacy margin: max angle step is pi - delta")
        ->check(CLI::PositiveNumber);

    std::string complex, field_x, field_y, cycle, image, single_input, scenario, export_dir, report;
    std::vector<std::string> basis;
    std::optional<std::size_t> degree;

    auto* hom = app.add_subcommand("homology", "Integral homology of a complex");
    hom->add_option("complex", complex, "Complex file")->required();
    hom->add_option("--degree", degree, "Only this degree")->check(CLI::Range(0, 2));

    auto* wind = app.add_subcommand("winding", "Winding number of a field along a 1-cycle");
    wind->add_option("complex", complex, "Complex file")->required();
    wind->add_option("field", field_x, "Field file")->required();
    wind->add_option("cycle", cycle, "Cycle file, or H1:<i> for the i-th H1 generator")->required();
    wind->add_option("--basis", basis, "Cycle files to use as the H1 basis");

    auto* cmp = app.add_subcommand("compare", "Compare the induced homology data of two fields");
    cmp->add_option("complex", complex, "Complex file")->required();
    cmp->add_option("fieldX", field_x, "First field file")->required();
    cmp->add_option("fieldY", field_y, "Second field file")->required();
    cmp->add_option("--basis", basis, "Cycle files to use as the H1 basis");

    auto* chk = app.add_subcommand("check", "Check that Y's classes lie in a control system's image lattice");
    chk->add_option("complex", complex, "Complex file")->required();
    chk->add_option("fieldY", field_y, "Field Y for which A is asymptotically stable")->required();
    auto* img = chk->add_option("--image", image, "Lattice file with the image generators as columns");
    auto* sgl = chk->add_option("--single-input", single_input, "Field g of the single-input system x' = g(x) u");
    img->excludes(sgl);
    sgl->excludes(img);
    chk->add_option("--basis", basis, "Cycle files to use as the H1 basis");

    auto* scn = app.add_subcommand("scenario", "Run a built-in scenario (mobius, annulus-orbit, planar-sink)");
    scn->add_option("name", scenario, "Scenario name")->required();
    scn->add_option("--export", export_dir, "Also write the scenario's complex, fields and cycles to this directory");

    auto* ver = app.add_subcommand("verify", "Re-derive the verdicts recorded in a structured report");
    ver->add_option("report", report, "Structured report file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (chk->parsed() && image.empty() && single_input.empty())
            throw CLI::ValidationError("check", "one of --image or --single-input is required");
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_error;
    }
    cfg.format = format == "text" ? Format::Text : Format::Structured;

    try {
        detail::Report r;
        if (hom->parsed()) {
            cfg.subcommand = "homology";
            cfg.inputs = {complex};
            r = detail::do_homology(cfg, degree);
        } else if (wind->parsed()) {
            cfg.subcommand = "winding";
            cfg.inputs = {complex, field_x, cycle};
            r = detail::do_winding(cfg, basis);
        } else if (cmp->parsed()) {
            cfg.subcommand = "compare";
            cfg.inputs = {complex, field_x, field_y};
            r = detail::do_compare(cfg, basis);
        } else if (chk->parsed()) {
            cfg.subcommand = "check";
            cfg.inputs = {complex, field_y};
            r = detail::do_check(cfg, basis, image, single_input);
        } else if (scn->parsed()) {
            cfg.subcommand = "scenario";
            cfg.inputs = {scenario};
            r = detail::do_scenario(cfg, export_dir);
        } else {
            cfg.subcommand = "verify";
            cfg.inputs = {report};
            r = detail::do_verify(cfg);
        }

        std::string rendered;
        if (cfg.format == Format::Structured) {
            rendered = r.doc.dump(2) + "\n";
        } else {
            rendered = detail::tolerance_line(cfg.tolerances) + "\n" + r.text.str();
        }
        if (cfg.output.empty()) out << rendered;
        else io::write_file(cfg.output, rendered);
        return r.status;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_error;
    }
}

}  // namespace stabcheck::cli
