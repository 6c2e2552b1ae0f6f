#pragma once

// Built-in worked examples: triangulated punctured neighbourhoods, framed
// fields on them, distinguished cycles and the verdicts the engines must
// reproduce.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stabcheck/attraction.hpp"
#include "stabcheck/complex.hpp"
#include "stabcheck/field.hpp"
#include "stabcheck/stabilize.hpp"

namespace stabcheck {

struct WindingExpectation {
    std::string field;
    std::string cycle;
    long value = 0;
};

struct CompareExpectation {
    std::string x;
    std::string y;
    CompareVerdict::Outcome outcome = CompareVerdict::Outcome::Equal;
};

/// check_stabilizability(y, single_input_image(input)).
struct CheckExpectation {
    std::string y;
    std::string input;
    StabilizabilityVerdict::Outcome outcome = StabilizabilityVerdict::Outcome::Pass;
    IntVector witness;  ///< stacked witness class when the outcome is Fail
};

struct IndexExpectation {
    std::string field;
    std::string cycle;
    long winding = 0;
    bool pass = false;
};

struct AttractionSetup {
    std::string name;
    Sampler<2> field;
    TargetSet<2> target;
    std::vector<State<2>> starts;
    double horizon = 20.0;
    double step = 0.01;
    Attraction expected = Attraction::Converged;
};

struct Scenario {
    std::string name;
    std::string description;
    std::string frame;  ///< which frame the sample coordinates refer to
    ComplexPtr complex;
    std::vector<State<2>> coordinates;  ///< chart position of each vertex
    std::map<std::string, FramedField> fields;
    std::map<std::string, Cycle> cycles;
    std::vector<std::string> basis;  ///< cycles used as the free basis of H_1
    bool planar = false;

    std::vector<WindingExpectation> windings;
    std::vector<CompareExpectation> compares;
    std::vector<CheckExpectation> checks;
    std::vector<IndexExpectation> indices;
    std::vector<AttractionSetup> attraction;

    /// Throws if any referenced field or cycle is missing or lives elsewhere.
    void validate() const {
        if (!complex) throw PreconditionError("scenario " + name + ": no complex");
        require_valid(*complex);
        if (coordinates.size() != complex->vertex_count())
            throw DimensionError("scenario " + name + ": one coordinate per vertex required");
        for (const auto& [n, f] : fields)
            if (!same_complex(f.complex(), complex))
                throw DimensionError("scenario " + name + ": field " + n + " is on another complex");
        for (const auto& [n, c] : cycles) Cycle::from_chain(*complex, c.chain());
        auto need_field = [&](const std::string& n) {
            if (!fields.count(n)) throw PreconditionError("scenario " + name + ": unknown field " + n);
        };
        auto need_cycle = [&](const std::string& n) {
            if (!cycles.count(n)) throw PreconditionError("scenario " + name + ": unknown cycle " + n);
        };
        for (const auto& b : basis) need_cycle(b);
        for (const auto& w : windings) need_field(w.field), need_cycle(w.cycle);
        for (const auto& c : compares) need_field(c.x), need_field(c.y);
        for (const auto& c : checks) need_field(c.y), need_field(c.input);
        for (const auto& i : indices) need_field(i.field), need_cycle(i.cycle);
    }

    const FramedField& field(const std::string& n) const { return fields.at(n); }
    const Cycle& cycle(const std::string& n) const { return cycles.at(n); }
};

namespace detail {

/// Strip of quads between consecutive columns (cyclic in the column index)
/// and consecutive levels; each quad split along its (k,j)-(k+1,j+1) diagonal.
/// `vertex(k, j)` gives the vertex index of column k, level j.
template <class VertexOf>
void triangulate_cyclic_strip(std::size_t columns, std::size_t levels, VertexOf vertex, std::set<Edge>& edges,
                              std::set<Triangle>& triangles) {
    auto add_triangle = [&](std::size_t a, std::size_t b, std::size_t c) {
        std::array<std::size_t, 3> t{a, b, c};
        std::sort(t.begin(), t.end());
        triangles.insert(t);
        edges.insert({t[0], t[1]});
        edges.insert({t[0], t[2]});
        edges.insert({t[1], t[2]});
    };
    for (std::size_t k = 0; k < columns; ++k)
        for (std::size_t j = 0; j + 1 < levels; ++j) {
            const std::size_t a = vertex(k, j), b = vertex((k + 1) % columns, j);
            const std::size_t c = vertex(k, j + 1), d = vertex((k + 1) % columns, j + 1);
            add_triangle(a, b, d);
            add_triangle(a, d, c);
        }
}

inline ComplexPtr complex_from_sets(std::size_t vertices, const std::set<Edge>& edges,
                                    const std::set<Triangle>& triangles) {
    return make_complex(vertices, {edges.begin(), edges.end()}, {triangles.begin(), triangles.end()});
}

}  // namespace detail

/// Flow of -y d/dy in the (x, y) chart of the band.
inline Sampler<2> mobius_y_sampler() {
    return [](const State<2>& p) -> std::optional<State<2>> { return State<2>{0.0, -p[1]}; };
}

/// Mobius band R^2 / (x, y) ~ (x + 2 pi, -y) around its core A = {y = 0},
/// with the core strip removed: |y| in {1/2, 1, 3} (eps = 1), so the region
/// is the annulus that double covers the core. Columns 0..n-1 are the upper
/// sheet y > 0, columns n..2n-1 the lower sheet; crossing x = 2 pi flips the
/// sheet, which is the gluing. Frame: (d/dtheta, Y) with Y = -y d/dy.
inline Scenario build_mobius(std::size_t x_subdivisions = 32) {
    if (x_subdivisions < 2) throw PreconditionError("build_mobius: need at least 2 subdivisions");
    const std::size_t n = x_subdivisions;
    const std::array<double, 3> levels{0.5, 1.0, 3.0};
    auto vertex = [](std::size_t k, std::size_t j) { return k * 3 + j; };

    std::set<Edge> edges;
    std::set<Triangle> triangles;
    detail::triangulate_cyclic_strip(2 * n, levels.size(), vertex, edges, triangles);

    Scenario s;
    s.name = "mobius";
    s.description = "Mobius band around its core circle; single-input control along cos(theta) d/dtheta + sin(theta) Y";
    s.frame = "(d/dtheta, Y) where Y = -y d/dy descends to the band";
    s.complex = detail::complex_from_sets(2 * n * 3, edges, triangles);

    std::vector<Sample> x_samples, y_samples;
    std::vector<std::size_t> core_loop;
    for (std::size_t k = 0; k < 2 * n; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
        const double sheet = k < n ? 1.0 : -1.0;
        for (std::size_t j = 0; j < levels.size(); ++j) {
            s.coordinates.push_back({theta, sheet * levels[j]});
            x_samples.push_back({std::cos(theta), std::sin(theta)});
            y_samples.push_back({0.0, 1.0});
        }
        core_loop.push_back(vertex(k, 1));
    }
    s.fields.emplace("X", FramedField(s.complex, x_samples));
    s.fields.emplace("Y", FramedField(s.complex, y_samples));
    s.cycles.emplace("C_eps", Cycle::from_loop(*s.complex, core_loop));
    s.basis = {"C_eps"};

    s.windings = {{"X", "C_eps", 2}, {"Y", "C_eps", 0}};
    s.compares = {{"X", "Y", CompareVerdict::Outcome::Distinct}};
    s.checks = {{"Y", "X", StabilizabilityVerdict::Outcome::Fail, int_vector({1, 0})}};

    AttractionSetup core;
    core.name = "Y toward core";
    core.field = mobius_y_sampler();
    core.target = {[](const State<2>& p) { return std::abs(p[1]); }, 3.0};
    core.starts = {{0.0, 1.0}, {std::numbers::pi, -1.0}};
    core.expected = Attraction::Converged;
    s.attraction.push_back(std::move(core));

    s.validate();
    return s;
}

/// Polar chart (phi, r) around the orbit r = 1.
inline Sampler<2> orbit_sampler(bool attracting) {
    return [attracting](const State<2>& p) -> std::optional<State<2>> {
        if (!(p[1] > 0)) return std::nullopt;
        const double radial = attracting ? 1.0 - p[1] : p[1] - 1.0;
        return State<2>{1.0, radial};
    };
}

/// Punctured neighbourhood of the circular periodic orbit r = 1: two rings
/// r in [1/2, 3/4] and r in [5/4, 3/2]. Frame (d/dphi, d/dr). Both fields
/// circulate with unit angular speed; one attracts to the orbit, the other
/// repels from it, yet their induced homology data coincide.
inline Scenario build_annulus_orbit(std::size_t angular_subdivisions = 32) {
    if (angular_subdivisions < 3) throw PreconditionError("build_annulus_orbit: need at least 3 subdivisions");
    const std::size_t n = angular_subdivisions;
    const std::array<std::array<double, 2>, 2> rings{{{0.5, 0.75}, {1.25, 1.5}}};

    std::set<Edge> edges;
    std::set<Triangle> triangles;
    for (std::size_t ring = 0; ring < 2; ++ring)
        detail::triangulate_cyclic_strip(
            n, 2, [&](std::size_t k, std::size_t j) { return ring * 2 * n + k * 2 + j; }, edges, triangles);

    Scenario s;
    s.name = "annulus-orbit";
    s.description = "punctured neighbourhood of a circular periodic orbit; attracting vs repelling orbit fields";
    s.frame = "(d/dphi, d/dr), aligned with the orbit";
    s.complex = detail::complex_from_sets(4 * n, edges, triangles);

    std::vector<Sample> attracting, repelling;
    std::vector<std::size_t> inner, outer;
    for (std::size_t ring = 0; ring < 2; ++ring)
        for (std::size_t k = 0; k < n; ++k) {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            for (std::size_t j = 0; j < 2; ++j) {
                const double r = rings[ring][j];
                s.coordinates.push_back({r * std::cos(phi), r * std::sin(phi)});
                attracting.push_back({1.0, 1.0 - r});
                repelling.push_back({1.0, r - 1.0});
            }
            (ring == 0 ? inner : outer).push_back(ring * 2 * n + k * 2 + (ring == 0 ? 1 : 0));
        }
    s.fields.emplace("attracting", FramedField(s.complex, attracting));
    s.fields.emplace("repelling", FramedField(s.complex, repelling));
    s.cycles.emplace("inner", Cycle::from_loop(*s.complex, inner));
    s.cycles.emplace("outer", Cycle::from_loop(*s.complex, outer));
    s.basis = {"inner", "outer"};

    s.windings = {{"attracting", "inner", 0},
                  {"attracting", "outer", 0},
                  {"repelling", "inner", 0},
                  {"repelling", "outer", 0}};
    s.compares = {{"attracting", "repelling", CompareVerdict::Outcome::Equal}};

    const TargetSet<2> orbit{[](const State<2>& p) { return std::abs(p[1] - 1.0); }, 0.5};
    s.attraction.push_back({"attracting orbit", orbit_sampler(true), orbit, {{0.0, 0.6}, {0.0, 1.4}}, 20.0, 0.01,
                            Attraction::Converged});
    s.attraction.push_back({"repelling orbit", orbit_sampler(false), orbit, {{0.0, 0.9}, {0.0, 1.1}}, 20.0, 0.01,
                            Attraction::Diverged});

    s.validate();
    return s;
}

/// Cartesian samplers for the planar sink scenario.
inline Sampler<2> radial_sampler(double sign) {
    return [sign](const State<2>& p) -> std::optional<State<2>> { return State<2>{sign * p[0], sign * p[1]}; };
}

/// Annulus 1/2 <= r <= 3/2 around the origin in the plane, standard frame.
inline Scenario build_planar_sink(std::size_t angular_subdivisions = 32) {
    if (angular_subdivisions < 3) throw PreconditionError("build_planar_sink: need at least 3 subdivisions");
    const std::size_t n = angular_subdivisions;
    const std::array<double, 3> levels{0.5, 1.0, 1.5};
    auto vertex = [](std::size_t k, std::size_t j) { return k * 3 + j; };

    std::set<Edge> edges;
    std::set<Triangle> triangles;
    detail::triangulate_cyclic_strip(n, levels.size(), vertex, edges, triangles);

    Scenario s;
    s.name = "planar-sink";
    s.description = "punctured neighbourhood of a candidate equilibrium at the origin of the plane";
    s.frame = "standard basis (d/dx, d/dy)";
    s.complex = detail::complex_from_sets(3 * n, edges, triangles);
    s.planar = true;

    std::vector<Sample> radial, constant, squared;
    std::vector<std::size_t> circle;
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        for (double r : levels) {
            const double x = r * std::cos(phi), y = r * std::sin(phi);
            s.coordinates.push_back({x, y});
            radial.push_back({-x, -y});
            constant.push_back({1.0, 0.0});
            squared.push_back({x * x - y * y, 2.0 * x * y});
        }
        circle.push_back(vertex(k, 1));
    }
    s.fields.emplace("radial", FramedField(s.complex, radial));
    s.fields.emplace("constant", FramedField(s.complex, constant));
    s.fields.emplace("squared", FramedField(s.complex, squared));
    s.cycles.emplace("unit-circle", Cycle::from_loop(*s.complex, circle));
    s.basis = {"unit-circle"};

    s.windings = {{"radial", "unit-circle", 1}, {"constant", "unit-circle", 0}, {"squared", "unit-circle", 2}};
    s.compares = {{"radial", "constant", CompareVerdict::Outcome::Distinct}};
    s.indices = {{"radial", "unit-circle", 1, true},
                 {"constant", "unit-circle", 0, false},
                 {"squared", "unit-circle", 2, false}};

    const TargetSet<2> origin{[](const State<2>& p) { return std::hypot(p[0], p[1]); }, 1.5};
    s.attraction.push_back({"radial sink", radial_sampler(-1.0), origin, {{1.0, 0.0}}, 20.0, 0.01,
                            Attraction::Converged});
    s.attraction.push_back({"radial source", radial_sampler(1.0), origin, {{0.1, 0.0}}, 20.0, 0.01,
                            Attraction::Diverged});

    s.validate();
    return s;
}

inline std::vector<std::string> scenario_names() { return {"mobius", "annulus-orbit", "planar-sink"}; }

inline Scenario build_scenario(const std::string& name) {
    if (name == "mobius") return build_mobius();
    if (name == "annulus-orbit") return build_annulus_orbit();
    if (name == "planar-sink") return build_planar_sink();
    throw PreconditionError("unknown scenario '" + name + "' (known: mobius, annulus-orbit, planar-sink)");
}

// ---------------------------------------------------------------------------
// Evaluation

struct ScenarioResult {
    struct Winding {
        WindingExpectation expected;
        long actual = 0;
        bool matched = false;
    };
    struct Compare {
        CompareExpectation expected;
        CompareVerdict verdict;
        bool matched = false;
    };
    struct Check {
        CheckExpectation expected;
        StabilizabilityVerdict verdict;
        bool matched = false;
    };
    struct Index {
        IndexExpectation expected;
        IndexVerdict verdict;
        bool matched = false;
    };
    struct AttractionRun {
        std::string name;
        Attraction expected = Attraction::Converged;
        AttractionReport<2> report;
        bool matched = false;
    };

    HomologyGroup h0;
    HomologyGroup h1;
    std::vector<Winding> windings;
    std::vector<Compare> compares;
    std::vector<Check> checks;
    std::vector<Index> indices;
    std::vector<AttractionRun> attraction;  ///< advisory; never part of verdicts

    /// Every expected verdict reproduced (attraction runs included).
    bool all_matched() const {
        auto ok = [](const auto& v) {
            return std::all_of(v.begin(), v.end(), [](const auto& x) { return x.matched; });
        };
        return ok(windings) && ok(compares) && ok(checks) && ok(indices) && ok(attraction);
    }

    /// Some verdict certifies an obstruction.
    bool obstruction_found() const {
        return std::any_of(compares.begin(), compares.end(), [](const auto& c) { return c.verdict.distinct(); }) ||
               std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict.failed(); }) ||
               std::any_of(indices.begin(), indices.end(), [](const auto& i) { return !i.verdict.pass; });
    }
};

inline ScenarioResult evaluate(const Scenario& s, bool run_attraction = true) {
    s.validate();
    ScenarioResult out;
    out.h0 = homology(s.complex, 0);
    out.h1 = homology(s.complex, 1);
    if (!s.basis.empty()) {
        std::vector<Cycle> basis;
        for (const auto& b : s.basis) basis.push_back(s.cycle(b));
        out.h1 = rebase(out.h1, basis);
    }

    for (const auto& w : s.windings) {
        const long actual = winding_number(s.field(w.field), s.cycle(w.cycle));
        out.windings.push_back({w, actual, actual == w.value});
    }
    for (const auto& c : s.compares) {
        CompareVerdict v = compare_vector_fields(s.field(c.x), s.field(c.y), out.h1);
        const bool matched = v.outcome == c.outcome;
        out.compares.push_back({c, std::move(v), matched});
    }
    for (const auto& c : s.checks) {
        StabilizabilityVerdict v =
            check_stabilizability(s.field(c.y), single_input_image(s.field(c.input), out.h1), out.h1);
        bool matched = v.outcome == c.outcome;
        if (matched && v.failed()) matched = v.witness->stacked() == c.witness;
        out.checks.push_back({c, std::move(v), matched});
    }
    for (const auto& i : s.indices) {
        IndexVerdict v = index_test(s.field(i.field), s.cycle(i.cycle), s.planar);
        const bool matched = v.pass == i.pass && v.winding == i.winding;
        out.indices.push_back({i, v, matched});
    }
    if (run_attraction) {
        for (const auto& a : s.attraction) {
            auto report = verify_attraction<2>(a.field, a.target, a.starts, a.horizon, a.step);
            const bool matched = report.verdict == a.expected;
            out.attraction.push_back({a.name, a.expected, std::move(report), matched});
        }
    }
    return out;
}

}  // namespace stabcheck
