// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "stabcheck/cli.hpp"
#include "support.hpp"

using namespace stabcheck;
using namespace stabcheck::testing;

namespace {

// Pinned thresholds.
constexpr double golden_budget_s = 1.0;
constexpr double homology_budget_s = 1.0;
constexpr double smith_budget_s = 10.0;
constexpr long membership_bound = 50;
constexpr double closed_form_rel_tol = 1e-6;
constexpr double dense_oracle_tol = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body, double budget_s = 0.0) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_s > 0 && elapsed >= budget_s) {
        o.require(false, "runtime " + std::to_string(elapsed) + " s exceeds " + std::to_string(budget_s) + " s");
    }
    if (!o.pass) ++failures;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", elapsed);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " (" << timing << ")";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << "\n";
}

Outcome mobius_golden() {
    Outcome o;
    std::ostringstream out, err;
    const int status = cli::run({"scenario", "mobius"}, out, err);
    const std::string text = out.str();
    o.require(status == cli::exit_obstruction, "exit status " + std::to_string(status));
    o.require(text.find("winding X along C_eps = 2 ") != std::string::npos, "winding(X) != 2");
    o.require(text.find("winding Y along C_eps = 0 ") != std::string::npos, "winding(Y) != 0");
    o.require(text.find("X vs Y: Distinct") != std::string::npos, "compare not Distinct");
    o.require(text.find("Fail, witness e1 = (1, 0) not in span{(1, 2)}") != std::string::npos, "check witness");

    // Same verdicts from the library route, compared as integers.
    const ScenarioResult r = evaluate(build_mobius(), false);
    o.require(r.windings.at(0).actual == 2 && r.windings.at(1).actual == 0, "library windings");
    o.require(r.compares.at(0).verdict.distinct(), "library compare");
    const auto& v = r.checks.at(0).verdict;
    o.require(v.failed() && v.witness->stacked() == int_vector({1, 0}), "library witness");
    o.require(v.image.generators == IntMatrix::from_rows({{1}, {2}}), "image lattice != Z(e1 + 2e2)");
    return o;
}

Outcome homology_suite() {
    Outcome o;
    const auto circle = circle_complex();
    o.require(homology(circle, 0).to_string() == "Z" && homology(circle, 1).to_string() == "Z", "circle");
    const auto triangle = make_complex(3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}});
    o.require(homology(triangle, 0).to_string() == "Z" && homology(triangle, 1).to_string() == "0", "triangle");
    o.require(homology(build_mobius().complex, 1).to_string() == "Z", "Mobius region");
    o.require(homology(rp2_complex(), 1).to_string() == "Z/2", "projective plane");
    return o;
}

Outcome smith_suite() {
    Outcome o;
    Rng rng(1000);
    for (int trial = 0; trial < 1000 && o.pass; ++trial) {
        const auto r = static_cast<std::size_t>(uniform_int(rng, 1, 6));
        const auto c = static_cast<std::size_t>(uniform_int(rng, 1, 6));
        const IntMatrix a = random_structured_matrix(rng, r, c, 9);
        const std::string tag = "matrix " + std::to_string(trial) + " " + a.to_string();

        const SmithForm f = smith_normal_form(a);
        IntMatrix s(r, c);
        for (std::size_t i = 0; i < f.rank(); ++i) s(i, i) = f.diag[i];
        o.require(f.s == s, "S not diagonal: " + tag);
        o.require(f.u * s * f.v == a, "A != U S V: " + tag);
        o.require(abs(determinant(f.u)) == 1 && abs(determinant(f.v)) == 1, "U or V not unimodular: " + tag);
        for (std::size_t i = 0; i + 1 < f.rank(); ++i)
            o.require(f.diag[i] > 0 && f.diag[i + 1] % f.diag[i] == 0, "divisibility: " + tag);
        o.require(f.rank() == rank(a), "rank: " + tag);

        const HermiteForm h = hermite_normal_form(a);
        o.require(h.u * a == h.h && abs(determinant(h.u)) == 1, "HNF: " + tag);
        o.require(h.pivot_columns.size() == f.rank(), "HNF rank: " + tag);
    }
    return o;
}

Outcome membership_suite() {
    Outcome o;
    Rng rng(500);
    for (int trial = 0; trial < 500 && o.pass; ++trial) {
        const auto cols = static_cast<std::size_t>(uniform_int(rng, 1, 3));
        const IntMatrix l = random_structured_matrix(rng, 3, cols, 4);
        std::vector<long> b(3);
        if (trial % 2 == 0) {
            const IntVector lc = l * random_matrix(rng, cols, 1, 4).column(0);
            for (std::size_t i = 0; i < 3; ++i) b[i] = lc[i].get_si();
        } else {
            for (auto& x : b) x = uniform_int(rng, -8, 8);
        }
        const IntVector bv = int_vector({b[0], b[1], b[2]});
        const Membership m = lattice_member(bv, l);
        const std::string tag = "instance " + std::to_string(trial) + " " + l.to_string();
        o.require(m.member == brute_force_member(l, b, membership_bound), "disagreement: " + tag);
        if (m.member) o.require(l * m.coefficients == bv, "bad coefficients: " + tag);
        else o.require(m.refutation && refutes(*m.refutation, l, bv), "bad refutation: " + tag);
    }
    return o;
}

Outcome homotopy_suite() {
    Outcome o;
    const AnnulusFixture a;
    Rng rng(200);
    for (int trial = 0; trial < 200 && o.pass; ++trial) {
        const std::vector<double> base = a.random_angles(rng);
        const double amp = uniform_real(rng, 0.0, 2.5), shift = uniform_real(rng, 0, 6.28);
        std::vector<double> moved(base.size());
        for (std::size_t v = 0; v < base.size(); ++v) moved[v] = base[v] + amp * std::sin(a.phi[v] + shift);
        const FramedField f = a.field_from_angles(base, rng), g = a.field_from_angles(moved, rng);
        for (const auto& c : a.h1.generators)
            o.require(winding_number(f, c) == winding_number(g, c), "pair " + std::to_string(trial));

        std::vector<double> factors(f.samples().size());
        for (auto& x : factors) x = std::exp(uniform_real(rng, -4.6, 4.6));
        o.require(!compare_vector_fields(f, f.scaled(factors), a.h1).distinct(),
                  "scaled pair " + std::to_string(trial));
    }
    return o;
}

Outcome orbit_inconclusive() {
    Outcome o;
    const ScenarioResult r = evaluate(build_annulus_orbit());
    o.require(r.compares.size() == 1 && !r.compares[0].verdict.distinct(), "compare not Equal");
    std::map<std::string, Attraction> verdicts;
    for (const auto& run : r.attraction) verdicts[run.name] = run.report.verdict;
    o.require(verdicts.at("attracting orbit") == Attraction::Converged, "attracting variant did not converge");
    o.require(verdicts.at("repelling orbit") == Attraction::Diverged, "repelling variant did not diverge");
    return o;
}

Outcome planar_index() {
    Outcome o;
    const ScenarioResult r = evaluate(build_planar_sink(), false);
    std::map<std::string, IndexVerdict> v;
    for (const auto& i : r.indices) v[i.expected.field] = i.verdict;
    o.require(v.at("radial").winding == 1 && v.at("radial").pass, "radial");
    o.require(v.at("constant").winding == 0 && !v.at("constant").pass, "constant");
    o.require(v.at("squared").winding == 2 && !v.at("squared").pass, "squared");
    const double dense = dense_squared_winding(64);
    o.require(std::abs(dense - 2.0) < dense_oracle_tol, "dense oracle gives " + std::to_string(dense));
    return o;
}

Outcome mesh_refinement() {
    Outcome o;
    const ScenarioResult coarse = evaluate(build_mobius(32), false), fine = evaluate(build_mobius(64), false);
    o.require(coarse.h0.to_string() == fine.h0.to_string() && coarse.h1.to_string() == fine.h1.to_string(),
              "homology changed");
    for (std::size_t i = 0; i < coarse.windings.size(); ++i)
        o.require(coarse.windings[i].actual == fine.windings[i].actual, "winding changed");
    o.require(coarse.compares[0].verdict.outcome == fine.compares[0].verdict.outcome, "compare changed");
    const auto &vc = coarse.checks[0].verdict, &vf = fine.checks[0].verdict;
    o.require(vc.outcome == vf.outcome && vc.witness == vf.witness && vc.image.generators == vf.image.generators,
              "check changed");
    return o;
}

Outcome closed_form() {
    Outcome o;
    const Sampler<1> decay = [](const State<1>& x) -> std::optional<State<1>> { return State<1>{-x[0]}; };
    const TargetSet<1> origin{[](const State<1>& x) { return std::abs(x[0]); }, 1e6};
    for (double y0 : {-3.0, 0.25, 1.0, 7.5}) {
        for (double horizon : {0.25, 0.5, 1.0}) {
            const auto r = verify_attraction<1>(decay, origin, {State<1>{y0}}, horizon, 1e-3);
            const double exact = y0 * std::exp(-horizon);
            const double rel = std::abs(r.trajectories[0].final[0] - exact) / std::abs(exact);
            o.require(rel < closed_form_rel_tol, "relative error " + std::to_string(rel));
        }
    }
    return o;
}

}  // namespace

int main() {
    criterion("Mobius golden test", mobius_golden, golden_budget_s);
    criterion("Homology suite", homology_suite, homology_budget_s);
    criterion("SNF/HNF property suite (1000 matrices)", smith_suite, smith_budget_s);
    criterion("Lattice membership vs brute force (500 instances)", membership_suite);
    criterion("Homotopy invariance on the annulus (200 pairs)", homotopy_suite);
    criterion("Periodic-orbit inconclusiveness", orbit_inconclusive);
    criterion("Planar index", planar_index);
    criterion("Mesh-refinement stability", mesh_refinement);
    criterion("verify_attraction vs closed form", closed_form);
    std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
