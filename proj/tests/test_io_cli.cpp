#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "stabcheck/cli.hpp"
#include "support.hpp"

using namespace stabcheck;
using namespace stabcheck::testing;

namespace {

const std::string data_dir = STABCHECK_DATA_DIR;

std::string data(const std::string& name) { return data_dir + "/" + name; }

struct Run {
    int status;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("stabcheck-test-" + name)).string();
}

}  // namespace

TEST(Parse, ComplexRoundTrip) {
    const auto c = rp2_complex();
    EXPECT_EQ(io::parse_complex(io::write_complex(*c)), *c);
}

TEST(Parse, FieldRoundTripIsExact) {
    const Scenario s = build_planar_sink();
    const FramedField& f = s.field("squared");
    EXPECT_EQ(io::parse_field(io::write_field(f), s.complex).samples(), f.samples());
}

TEST(Parse, CycleRoundTrip) {
    const Scenario s = build_mobius();
    const Cycle& c = s.cycle("C_eps");
    EXPECT_EQ(io::parse_cycle(io::write_cycle(c, *s.complex), *s.complex).chain(), c.chain());
}

TEST(Parse, RejectsTetrahedraAndUnknownKeys) {
    EXPECT_THROW(io::parse_complex("vertices: 4\ntetrahedra: [[0,1,2,3]]\n"), ParseError);
    EXPECT_THROW(io::parse_complex("vertices: 3\nedgez: []\n"), ParseError);
    EXPECT_THROW(io::parse_complex("vertices: [1\n"), ParseError);
}

TEST(Parse, ErrorsCarryLocation) {
    try {
        io::parse_complex("vertices: 3\nedges: [[0, x]]\n", "bad.yaml");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.yaml:2"), std::string::npos) << e.what();
    }
}

TEST(Parse, LatticeColumns) {
    const auto cols = io::parse_lattice_columns("rows: 2\ncolumns:\n  - [1, 2]\n  - [0, 3]\n");
    ASSERT_EQ(cols.size(), 2u);
    EXPECT_EQ(cols[1], int_vector({0, 3}));
    EXPECT_THROW(io::parse_lattice_columns("rows: 3\ncolumns:\n  - [1, 2]\n"), ParseError);
}

TEST(Json, LargeIntegersBecomeStrings) {
    const Integer big("123456789012345678901234567890");
    EXPECT_TRUE(io::to_json(big).is_string());
    EXPECT_EQ(io::integer_from_json(io::to_json(big)), big);
    EXPECT_EQ(io::to_json(Integer(-7)), -7);
}

TEST(Json, ReportsAreDeterministicAndReverify) {
    const ScenarioResult r = evaluate(build_mobius(), false);
    const auto a = io::to_json(r.checks[0].verdict), b = io::to_json(evaluate(build_mobius(), false).checks[0].verdict);
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_TRUE(io::reverify(a));
    EXPECT_TRUE(io::reverify(io::to_json(r.compares[0].verdict)));

    // A tampered witness no longer reproduces.
    auto tampered = a;
    tampered["witness"]["class"] = io::json::array({1, 2});
    EXPECT_FALSE(io::reverify(tampered));
}

TEST(Cli, HomologyOfData) {
    auto r = run({"homology", data("circle.yaml")});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("H0 = Z, H1 = Z"), std::string::npos) << r.out;
    r = run({"homology", data("rp2.yaml"), "--degree", "1"});
    EXPECT_NE(r.out.find("H1 = Z/2"), std::string::npos) << r.out;
    r = run({"homology", data("triangle.yaml")});
    EXPECT_NE(r.out.find("H0 = Z, H1 = 0, H2 = 0"), std::string::npos) << r.out;
}

TEST(Cli, TextReportCarriesTolerances) {
    const auto r = run({"--eps-zero", "1e-8", "homology", data("circle.yaml")});
    EXPECT_EQ(r.out.rfind("# tolerances: zero-relative=1e-08", 0), 0u) << r.out;
}

TEST(Cli, MobiusScenario) {
    const auto r = run({"scenario", "mobius"});
    EXPECT_EQ(r.status, cli::exit_obstruction);
    EXPECT_NE(r.out.find("winding X along C_eps = 2"), std::string::npos);
    EXPECT_NE(r.out.find("winding Y along C_eps = 0"), std::string::npos);
    EXPECT_NE(r.out.find("Fail, witness e1 = (1, 0) not in span{(1, 2)}"), std::string::npos) << r.out;
}

TEST(Cli, AnnulusScenarioExitsZero) { EXPECT_EQ(run({"scenario", "annulus-orbit"}).status, cli::exit_ok); }

TEST(Cli, CompareAndCheckExitCodes) {
    EXPECT_EQ(run({"compare", data("circle.yaml"), data("circle-rotating.yaml"), data("circle-constant.yaml")}).status,
              cli::exit_obstruction);
    EXPECT_EQ(run({"compare", data("circle.yaml"), data("circle-constant.yaml"), data("circle-constant.yaml")}).status,
              cli::exit_ok);
    EXPECT_EQ(run({"check", data("circle.yaml"), data("circle-constant.yaml"), "--image", data("circle-image.yaml")})
                  .status,
              cli::exit_ok);
    EXPECT_EQ(run({"check", data("circle.yaml"), data("circle-rotating.yaml"), "--image", data("circle-image.yaml")})
                  .status,
              cli::exit_obstruction);
}

TEST(Cli, CheckNeedsExactlyOneImageSource) {
    EXPECT_EQ(run({"check", data("circle.yaml"), data("circle-constant.yaml")}).status, cli::exit_error);
    EXPECT_EQ(run({"check", data("circle.yaml"), data("circle-constant.yaml"), "--image", data("circle-image.yaml"),
                   "--single-input", data("circle-constant.yaml")})
                  .status,
              cli::exit_error);
}

TEST(Cli, WindingWithBasisAndGeneratorIndex) {
    auto r = run({"winding", data("circle.yaml"), data("circle-rotating.yaml"), data("circle-loop.yaml")});
    EXPECT_NE(r.out.find("= 1"), std::string::npos) << r.out;
    r = run({"winding", data("circle.yaml"), data("circle-rotating.yaml"), "H1:0", "--basis", data("circle-loop.yaml")});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("= 1"), std::string::npos) << r.out;
    EXPECT_EQ(run({"winding", data("circle.yaml"), data("circle-rotating.yaml"), "H1:5"}).status, cli::exit_error);
}

TEST(Cli, FieldMustMatchNamedComplex) {
    const std::string path = temp_path("wrong-complex.yaml");
    io::write_file(path, "complex: rp2\nsamples: [[1, 0], [1, 0], [1, 0]]\n");
    const auto r = run({"winding", data("circle.yaml"), path, data("circle-loop.yaml")});
    EXPECT_EQ(r.status, cli::exit_error);
    EXPECT_NE(r.err.find("belongs to complex 'rp2'"), std::string::npos) << r.err;
    std::filesystem::remove(path);
}

TEST(Cli, ErrorsExitOne) {
    EXPECT_EQ(run({"homology", data("does-not-exist.yaml")}).status, cli::exit_error);
    EXPECT_EQ(run({"scenario", "torus"}).status, cli::exit_error);
    EXPECT_EQ(run({}).status, cli::exit_error);
    EXPECT_EQ(run({"homology"}).status, cli::exit_error);
}

TEST(Cli, StructuredReportVerifies) {
    const std::string path = temp_path("compare.json");
    const auto r = run({"--format", "json", "--output", path, "compare", data("circle.yaml"),
                        data("circle-rotating.yaml"), data("circle-constant.yaml")});
    ASSERT_EQ(r.status, cli::exit_obstruction);
    const auto doc = io::json::parse(io::read_file(path));
    EXPECT_EQ(doc.at("theorem"), "homotopy-obstruction");
    EXPECT_EQ(doc.at("outcome"), "Distinct");
    EXPECT_EQ(doc.at("inputs-digest").get<std::string>().rfind("sha256:", 0), 0u);
    EXPECT_EQ(run({"verify", path}).status, cli::exit_ok);
    std::filesystem::remove(path);
}

TEST(Cli, ScenarioReportVerifiesAndIsDeterministic) {
    const auto a = run({"--format", "json", "scenario", "mobius"});
    const auto b = run({"--format", "json", "scenario", "mobius"});
    EXPECT_EQ(a.out, b.out);
    const std::string path = temp_path("mobius.json");
    io::write_file(path, a.out);
    EXPECT_EQ(run({"verify", path}).status, cli::exit_ok);
    std::filesystem::remove(path);
}

TEST(Cli, ExportedScenarioMatchesFileRoute) {
    const std::string dir = temp_path("export");
    ASSERT_EQ(run({"scenario", "mobius", "--export", dir}).status, cli::exit_obstruction);
    const auto r = run({"check", dir + "/complex.yaml", dir + "/field-Y.yaml", "--single-input", dir + "/field-X.yaml",
                        "--basis", dir + "/cycle-C_eps.yaml"});
    EXPECT_EQ(r.status, cli::exit_obstruction);
    EXPECT_NE(r.out.find("witness e1 = (1, 0)"), std::string::npos) << r.out;
    std::filesystem::remove_all(dir);
}
