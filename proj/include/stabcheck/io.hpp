#pragma once

// Text file formats (complex, field, cycle, lattice) and structured JSON
// reports.
//
// Input documents are YAML, so both the plain `key: value` layout and JSON
// are accepted:
//
//   complex:  vertices: 3
//             edges: [[0,1],[1,2],[0,2]]
//             triangles: []
//   field:    samples: [[a0,b0],[a1,b1],...]        (optional: complex: name)
//   cycle:    loop: [v0,v1,...]                     closed vertex path
//             chain: [[i,j,c],...]                  coefficient c on edge [i,j]
//   lattice:  columns: [[c00,c01,...],...]          (optional: rows: n)

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stabcheck/abelian.hpp"
#include "stabcheck/complex.hpp"
#include "stabcheck/error.hpp"
#include "stabcheck/field.hpp"
#include "stabcheck/stabilize.hpp"

namespace stabcheck::io {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path + ": cannot write file");
    out << contents;
}

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256: digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string where(const std::string& source, const YAML::Node& node) {
    const auto mark = node.Mark();
    if (mark.line < 0) return source;
    return source + ":" + std::to_string(mark.line + 1);
}

[[noreturn]] inline void fail(const std::string& source, const YAML::Node& node, const std::string& field,
                              const std::string& message) {
    throw ParseError(where(source, node) + ": field '" + field + "': " + message);
}

inline YAML::Node load(const std::string& text, const std::string& source) {
    try {
        YAML::Node root = YAML::Load(text);
        if (!root.IsMap()) throw ParseError(source + ": expected a document of `key: value` fields");
        return root;
    } catch (const YAML::Exception& e) {
        throw ParseError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
}

inline void allow_only(const YAML::Node& root, const std::string& source, const std::set<std::string>& keys) {
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!keys.count(key)) fail(source, kv.first, key, "unknown field");
    }
}

inline std::size_t as_index(const YAML::Node& n, const std::string& source, const std::string& field) {
    if (!n.IsScalar()) fail(source, n, field, "expected a nonnegative integer");
    try {
        const long long v = n.as<long long>();
        if (v < 0) fail(source, n, field, "expected a nonnegative integer, got " + n.Scalar());
        return static_cast<std::size_t>(v);
    } catch (const YAML::Exception&) {
        fail(source, n, field, "expected a nonnegative integer, got '" + n.Scalar() + "'");
    }
}

inline Integer as_integer(const YAML::Node& n, const std::string& source, const std::string& field) {
    if (!n.IsScalar()) fail(source, n, field, "expected an integer");
    std::string s = n.Scalar();
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    const bool ok = !s.empty() && s.find_first_not_of("0123456789", s[0] == '-' ? 1 : 0) == std::string::npos &&
                    s != "-";
    if (!ok) fail(source, n, field, "expected an integer, got '" + n.Scalar() + "'");
    return Integer(s, 10);
}

inline double as_real(const YAML::Node& n, const std::string& source, const std::string& field) {
    if (!n.IsScalar()) fail(source, n, field, "expected a real number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(source, n, field, "expected a real number, got '" + n.Scalar() + "'");
    }
}

inline const YAML::Node sequence(const YAML::Node& root, const std::string& key, const std::string& source,
                                 bool required) {
    const YAML::Node n = root[key];
    if (!n) {
        if (required) throw ParseError(source + ": missing field '" + key + "'");
        return YAML::Node(YAML::NodeType::Sequence);
    }
    if (n.IsNull()) return YAML::Node(YAML::NodeType::Sequence);
    if (!n.IsSequence()) fail(source, n, key, "expected a list");
    return n;
}

template <std::size_t N>
std::array<std::size_t, N> index_tuple(const YAML::Node& n, const std::string& source, const std::string& field) {
    if (!n.IsSequence() || n.size() != N)
        fail(source, n, field, "expected a list of " + std::to_string(N) + " vertex indices");
    std::array<std::size_t, N> t{};
    for (std::size_t i = 0; i < N; ++i) t[i] = as_index(n[i], source, field);
    return t;
}

}  // namespace detail

/// The result is not validated; use validate() for a defect report.
inline SimplicialComplex parse_complex(const std::string& text, const std::string& source = "<complex>") {
    const YAML::Node root = detail::load(text, source);
    for (const char* higher : {"tetrahedra", "simplices3"})
        if (root[higher])
            throw ParseError(source + ": field '" + higher +
                             "': complexes of dimension 3 or more are not supported (maximum dimension is 2)");
    detail::allow_only(root, source, {"name", "vertices", "edges", "triangles"});
    if (!root["vertices"]) throw ParseError(source + ": missing field 'vertices'");
    const std::size_t n = detail::as_index(root["vertices"], source, "vertices");

    std::vector<Edge> edges;
    for (const auto& e : detail::sequence(root, "edges", source, false))
        edges.push_back(detail::index_tuple<2>(e, source, "edges"));
    std::vector<Triangle> triangles;
    for (const auto& t : detail::sequence(root, "triangles", source, false))
        triangles.push_back(detail::index_tuple<3>(t, source, "triangles"));
    return SimplicialComplex(n, std::move(edges), std::move(triangles));
}

inline ComplexPtr load_complex(const std::string& path) {
    auto c = std::make_shared<const SimplicialComplex>(parse_complex(read_file(path), path));
    if (auto defect = validate(*c)) throw InvalidComplexError(path + ": invalid complex: " + defect->message);
    return c;
}

/// Optional string-valued top-level key, e.g. a complex's `name` or the
/// `complex` a field file says it belongs to.
inline std::optional<std::string> declared_string(const std::string& text, const std::string& key,
                                                  const std::string& source) {
    const YAML::Node root = detail::load(text, source);
    if (!root[key]) return std::nullopt;
    if (!root[key].IsScalar()) detail::fail(source, root[key], key, "expected a string");
    return root[key].as<std::string>();
}

inline FramedField parse_field(const std::string& text, const ComplexPtr& complex, const Tolerances& tol = {},
                               const std::string& source = "<field>") {
    const YAML::Node root = detail::load(text, source);
    detail::allow_only(root, source, {"name", "complex", "samples"});
    std::vector<Sample> samples;
    for (const auto& s : detail::sequence(root, "samples", source, true)) {
        if (!s.IsSequence() || s.size() != 2) detail::fail(source, s, "samples", "expected a pair [a, b]");
        samples.push_back({detail::as_real(s[0], source, "samples"), detail::as_real(s[1], source, "samples")});
    }
    if (samples.size() != complex->vertex_count())
        throw ParseError(source + ": field 'samples': " + std::to_string(samples.size()) + " samples for a complex with " +
                         std::to_string(complex->vertex_count()) + " vertices");
    return FramedField(complex, std::move(samples), tol);
}

inline Cycle parse_cycle(const std::string& text, const SimplicialComplex& complex,
                         const std::string& source = "<cycle>") {
    const YAML::Node root = detail::load(text, source);
    detail::allow_only(root, source, {"name", "loop", "chain"});
    if (root["loop"] && root["chain"]) throw ParseError(source + ": give either 'loop' or 'chain', not both");
    try {
        if (root["loop"]) {
            std::vector<std::size_t> vertices;
            for (const auto& v : detail::sequence(root, "loop", source, true))
                vertices.push_back(detail::as_index(v, source, "loop"));
            if (vertices.size() < 2) detail::fail(source, root["loop"], "loop", "a closed loop needs at least 2 vertices");
            return Cycle::from_loop(complex, vertices);
        }
        Chain chain = Chain::zero(complex, 1);
        for (const auto& item : detail::sequence(root, "chain", source, true)) {
            if (!item.IsSequence() || item.size() != 3)
                detail::fail(source, item, "chain", "expected [i, j, coefficient]");
            const std::size_t a = detail::as_index(item[0], source, "chain");
            const std::size_t b = detail::as_index(item[1], source, "chain");
            auto idx = complex.edge_index(std::min(a, b), std::max(a, b));
            if (!idx || a == b)
                detail::fail(source, item, "chain", "[" + std::to_string(a) + "," + std::to_string(b) + "] is not an edge");
            const Integer c = detail::as_integer(item[2], source, "chain");
            chain.coefficients[*idx] += a < b ? c : Integer(-c);
        }
        return Cycle::from_chain(complex, std::move(chain));
    } catch (const NotACycleError& e) {
        throw NotACycleError(source + ": " + e.what());
    }
}

/// Columns of a lattice file. `rows` from the file, when present, must match
/// every column; an empty column list needs the caller to supply the row count.
inline std::vector<IntVector> parse_lattice_columns(const std::string& text, const std::string& source = "<lattice>") {
    const YAML::Node root = detail::load(text, source);
    detail::allow_only(root, source, {"name", "rows", "columns"});
    std::vector<IntVector> cols;
    std::optional<std::size_t> rows;
    if (root["rows"]) rows = detail::as_index(root["rows"], source, "rows");
    for (const auto& c : detail::sequence(root, "columns", source, true)) {
        if (!c.IsSequence()) detail::fail(source, c, "columns", "expected a list of integers");
        IntVector v;
        for (const auto& x : c) v.push_back(detail::as_integer(x, source, "columns"));
        if (!rows) rows = v.size();
        if (v.size() != *rows)
            detail::fail(source, c, "columns", "column has length " + std::to_string(v.size()) + ", expected " +
                                                   std::to_string(*rows));
        cols.push_back(std::move(v));
    }
    return cols;
}

// ---------------------------------------------------------------------------
// Writing input documents (used to export built-in scenarios)

inline std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string write_complex(const SimplicialComplex& c) {
    std::ostringstream os;
    os << "vertices: " << c.vertex_count() << "\nedges: [";
    for (std::size_t i = 0; i < c.edges().size(); ++i)
        os << (i ? "," : "") << "[" << c.edges()[i][0] << "," << c.edges()[i][1] << "]";
    os << "]\ntriangles: [";
    for (std::size_t i = 0; i < c.triangles().size(); ++i) {
        const auto& t = c.triangles()[i];
        os << (i ? "," : "") << "[" << t[0] << "," << t[1] << "," << t[2] << "]";
    }
    os << "]\n";
    return os.str();
}

inline std::string write_field(const FramedField& f) {
    std::ostringstream os;
    os << "samples: [";
    for (std::size_t v = 0; v < f.samples().size(); ++v)
        os << (v ? "," : "") << "[" << format_real(f.samples()[v][0]) << "," << format_real(f.samples()[v][1]) << "]";
    os << "]\n";
    return os.str();
}

inline std::string write_cycle(const Cycle& c, const SimplicialComplex& k) {
    std::ostringstream os;
    os << "chain: [";
    bool first = true;
    for (std::size_t e = 0; e < c.chain().coefficients.size(); ++e) {
        if (c.chain().coefficients[e] == 0) continue;
        os << (first ? "" : ",") << "[" << k.edges()[e][0] << "," << k.edges()[e][1] << ","
           << c.chain().coefficients[e] << "]";
        first = false;
    }
    os << "]\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const Integer& x) {
    if (x.fits_slong_p()) return json(x.get_si());
    return json(x.get_str());
}

inline json to_json(const IntVector& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

inline Integer integer_from_json(const json& j) {
    if (j.is_number_integer()) return Integer(j.get<long>());
    if (j.is_string()) return Integer(j.get<std::string>(), 10);
    throw ParseError("report: expected an integer, got " + j.dump());
}

inline IntVector vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("report: expected an integer list, got " + j.dump());
    IntVector v;
    for (const auto& x : j) v.push_back(integer_from_json(x));
    return v;
}

inline json columns_json(const IntMatrix& m) {
    json out = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(to_json(m.column(j)));
    return out;
}

inline json tolerances_json(const Tolerances& t) {
    return json{{"zero-relative", t.zero_relative}, {"adequacy-margin", t.adequacy_margin}, {"rounding", t.rounding}};
}

/// Edge chain as [[i, j, c], ...] over edges with nonzero coefficient.
inline json chain_json(const Chain& c, const SimplicialComplex& k) {
    json out = json::array();
    for (std::size_t s = 0; s < c.coefficients.size(); ++s) {
        if (c.coefficients[s] == 0) continue;
        json item = json::array();
        if (c.dimension == 0) item.push_back(s);
        if (c.dimension == 1) item = json::array({k.edges()[s][0], k.edges()[s][1]});
        if (c.dimension == 2) item = json::array({k.triangles()[s][0], k.triangles()[s][1], k.triangles()[s][2]});
        item.push_back(to_json(c.coefficients[s]));
        out.push_back(std::move(item));
    }
    return out;
}

inline json homology_json(const HomologyGroup& h) {
    json gens = json::array();
    for (std::size_t i = 0; i < h.generator_count(); ++i)
        gens.push_back(json{{"order", to_json(h.order(i))}, {"cycle", chain_json(h.generators[i].chain(), *h.complex)}});
    return json{{"degree", h.degree}, {"group", h.to_string()}, {"generators", std::move(gens)}};
}

/// (1, 2) -> "e1 + 2e2"; the zero vector -> "0".
inline std::string format_class(const IntVector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        const Integer a = abs(v[i]);
        const std::string term = (a == 1 ? "" : a.get_str()) + "e" + std::to_string(i + 1);
        if (out.empty()) out = (v[i] < 0 ? "-" : "") + term;
        else out += (v[i] < 0 ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

inline std::string format_vector(const IntVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].get_str();
    return out + ")";
}

inline const char* outcome_name(CompareVerdict::Outcome o) {
    return o == CompareVerdict::Outcome::Equal ? "Equal" : "Distinct";
}
inline const char* outcome_name(StabilizabilityVerdict::Outcome o) {
    return o == StabilizabilityVerdict::Outcome::Pass ? "Pass" : "Fail";
}

inline json to_json(const CompareVerdict& v) {
    json classes_x = json::array(), classes_y = json::array();
    for (const auto& c : v.x_classes) classes_x.push_back(to_json(c.stacked()));
    for (const auto& c : v.y_classes) classes_y.push_back(to_json(c.stacked()));
    json witness = nullptr;
    if (v.distinct())
        witness = json{{"generator", *v.witness_generator}, {"windings", json::array({v.winding_x, v.winding_y})}};
    return json{{"theorem", theorem::homotopy},
                {"outcome", outcome_name(v.outcome)},
                {"inconclusive", !v.distinct()},
                {"witness", std::move(witness)},
                {"coefficients", nullptr},
                {"degrees-checked", v.degrees_checked},
                {"classes", json{{"x", std::move(classes_x)}, {"y", std::move(classes_y)}}},
                {"interpretation", v.interpretation()}};
}

inline json to_json(const StabilizabilityVerdict& v) {
    json y_classes = json::array();
    for (const auto& c : v.y_classes) y_classes.push_back(to_json(c.stacked()));
    json witness = nullptr;
    json coefficients = nullptr;
    if (v.failed()) {
        witness = json{{"generator", *v.witness_generator},
                       {"class", to_json(v.witness->stacked())},
                       {"refutation", json{{"functional", to_json(v.refutation->functional)},
                                           {"modulus", to_json(v.refutation->modulus)}}}};
    } else {
        coefficients = json::array();
        for (const auto& c : v.coefficients) coefficients.push_back(to_json(c));
    }
    return json{{"theorem", theorem::inclusion},
                {"outcome", outcome_name(v.outcome)},
                {"inconclusive", !v.failed()},
                {"witness", std::move(witness)},
                {"coefficients", std::move(coefficients)},
                {"y-classes", std::move(y_classes)},
                {"image", columns_json(v.image.generators)},
                {"lattice", columns_json(v.effective_lattice)},
                {"interpretation", v.interpretation()}};
}

inline json to_json(const IndexVerdict& v) {
    return json{{"theorem", theorem::index},
                {"outcome", v.pass ? "Pass" : "Fail"},
                {"inconclusive", v.pass},
                {"witness", json{{"winding", v.winding}, {"reference", 1}}},
                {"coefficients", nullptr},
                {"interpretation", v.interpretation()}};
}

/// Re-derives a verdict from the data recorded in a report, without the
/// original inputs. True when the recorded outcome is reproduced.
inline bool reverify(const json& report) {
    const std::string theorem = report.at("theorem").get<std::string>();
    const std::string outcome = report.at("outcome").get<std::string>();
    if (theorem == theorem::inclusion) {
        std::vector<IntVector> cols;
        for (const auto& c : report.at("lattice")) cols.push_back(vector_from_json(c));
        std::vector<IntVector> ys;
        for (const auto& c : report.at("y-classes")) ys.push_back(vector_from_json(c));
        const std::size_t rows = !ys.empty() ? ys.front().size() : (!cols.empty() ? cols.front().size() : 0);
        const IntMatrix lattice = IntMatrix::from_columns(cols, rows);
        if (outcome == "Fail") {
            const IntVector w = vector_from_json(report.at("witness").at("class"));
            const Refutation r{vector_from_json(report.at("witness").at("refutation").at("functional")),
                               integer_from_json(report.at("witness").at("refutation").at("modulus"))};
            return !lattice_member(w, lattice).member && refutes(r, lattice, w);
        }
        const auto& coeffs = report.at("coefficients");
        if (!coeffs.is_array() || coeffs.size() != ys.size()) return false;
        for (std::size_t i = 0; i < ys.size(); ++i)
            if (lattice * vector_from_json(coeffs[i]) != ys[i]) return false;
        return true;
    }
    if (theorem == theorem::homotopy) {
        const auto& xs = report.at("classes").at("x");
        const auto& ys = report.at("classes").at("y");
        if (outcome == "Distinct") {
            const auto g = report.at("witness").at("generator").get<std::size_t>();
            const auto w = report.at("witness").at("windings");
            const IntVector x = vector_from_json(xs.at(g)), y = vector_from_json(ys.at(g));
            return x != y && x.back() == integer_from_json(w[0]) && y.back() == integer_from_json(w[1]);
        }
        return xs == ys;
    }
    if (theorem == theorem::index) {
        const long w = report.at("witness").at("winding").get<long>();
        return (w == 1) == (outcome == "Pass");
    }
    throw ParseError("report: unknown theorem '" + theorem + "'");
}

}  // namespace stabcheck::io
