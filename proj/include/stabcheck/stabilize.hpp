#pragma once

// Necessary conditions for asymptotic stability and feedback
// stabilizability, decided from induced homology data.
//
// compare_vector_fields: two fields that both render A asymptotically stable
//   are homotopic through nowhere-zero fields on a small punctured
//   neighbourhood, so their induced maps on homology coincide. Different
//   induced data therefore rule out one of the two.
// check_stabilizability: if some feedback renders A asymptotically stable,
//   then Y_* H(U \ A) must lie in the image f_* H(p^-1(U \ A) \ f^-1(0)).
// index_test: a stable equilibrium in the plane has index 1.
//
// Verdicts that find no obstruction are inconclusive; nothing here certifies
// that a stabilizing feedback exists.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stabcheck/abelian.hpp"
#include "stabcheck/complex.hpp"
#include "stabcheck/error.hpp"
#include "stabcheck/field.hpp"

namespace stabcheck {

namespace theorem {
inline constexpr const char* homotopy = "homotopy-obstruction";
inline constexpr const char* inclusion = "homology-inclusion";
inline constexpr const char* index = "equilibrium-index";
}  // namespace theorem

struct CompareVerdict {
    enum class Outcome { Equal, Distinct };

    Outcome outcome = Outcome::Equal;
    std::vector<int> degrees_checked;
    std::vector<ProductClass> x_classes;
    std::vector<ProductClass> y_classes;
    std::optional<std::size_t> witness_generator;  ///< first generator on which the windings differ
    long winding_x = 0;
    long winding_y = 0;

    bool distinct() const noexcept { return outcome == Outcome::Distinct; }

    std::string interpretation() const {
        if (distinct())
            return "the fields are not homotopic through nowhere-zero fields on this punctured region "
                   "(windings " + std::to_string(winding_x) + " and " + std::to_string(winding_y) +
                   " on generator " + std::to_string(*witness_generator) +
                   "), so at most one of them renders A asymptotically stable";
        return "induced homology data agree in every checked degree; inconclusive for stability";
    }
};

inline CompareVerdict compare_vector_fields(const FramedField& x, const FramedField& y, const HomologyGroup& h1) {
    if (!same_complex(x.complex(), y.complex()))
        throw DimensionError("compare_vector_fields: the fields live on different complexes");
    CompareVerdict v;

    const HomologyGroup h0 = homology(x.complex(), 0);
    if (!(induced_map_h0(x, h0) == induced_map_h0(y, h0)))
        throw std::logic_error("compare_vector_fields: degree-0 images differ");
    v.degrees_checked.push_back(0);

    v.x_classes = induced_map_h1(x, h1);
    v.y_classes = induced_map_h1(y, h1);
    v.degrees_checked.push_back(1);
    for (std::size_t i = 0; i < v.x_classes.size(); ++i) {
        if (v.x_classes[i] == v.y_classes[i]) continue;
        v.outcome = CompareVerdict::Outcome::Distinct;
        v.witness_generator = i;
        v.winding_x = v.x_classes[i].fiber.get_si();
        v.winding_y = v.y_classes[i].fiber.get_si();
        break;
    }
    return v;
}

struct StabilizabilityVerdict {
    enum class Outcome { Pass, Fail };

    Outcome outcome = Outcome::Pass;
    std::vector<ProductClass> y_classes;
    ImageLattice image;
    /// Image generators plus the torsion relations of H_1; membership is
    /// decided against this lattice.
    IntMatrix effective_lattice;
    std::vector<IntVector> coefficients;  ///< Pass: per Y-class, w.r.t. effective_lattice columns
    std::optional<std::size_t> witness_generator;
    std::optional<ProductClass> witness;
    std::optional<Refutation> refutation;

    bool failed() const noexcept { return outcome == Outcome::Fail; }

    std::string interpretation() const {
        if (failed())
            return "Y-class of generator " + std::to_string(*witness_generator) +
                   " is not in the image lattice, so no feedback law renders A asymptotically stable "
                   "(given that A is asymptotically stable for Y)";
        return "every Y-class lies in the image lattice; inconclusive for stability";
    }
};

inline StabilizabilityVerdict check_stabilizability(const FramedField& y, const ImageLattice& image,
                                                    const HomologyGroup& h1) {
    const std::size_t n = h1.generator_count();
    if (image.generators.rows() != n + 1)
        throw DimensionError("check_stabilizability: image lattice columns have length " +
                             std::to_string(image.generators.rows()) + ", expected " + std::to_string(n + 1) +
                             " (H_1 generators + winding)");
    StabilizabilityVerdict v;
    v.y_classes = induced_map_h1(y, h1);
    v.image = image;

    std::vector<IntVector> cols = image.generators.columns();
    for (std::size_t i = h1.free_rank; i < n; ++i) {
        IntVector rel(n + 1);
        rel[i] = h1.order(i);
        cols.push_back(std::move(rel));
    }
    v.effective_lattice = IntMatrix::from_columns(cols, n + 1);

    std::vector<IntVector> y_cols;
    for (const auto& pc : v.y_classes) y_cols.push_back(pc.stacked());
    SubsetResult sub = lattice_subset(IntMatrix::from_columns(y_cols, n + 1), v.effective_lattice);
    if (sub.holds) {
        v.outcome = StabilizabilityVerdict::Outcome::Pass;
        v.coefficients = std::move(sub.coefficients);
    } else {
        v.outcome = StabilizabilityVerdict::Outcome::Fail;
        v.witness_generator = sub.witness_column;
        v.witness = v.y_classes[*sub.witness_column];
        v.refutation = std::move(sub.refutation);
    }
    return v;
}

struct IndexVerdict {
    long winding = 0;
    bool pass = false;

    std::string interpretation() const {
        if (pass) return "winding 1 matches a stable planar equilibrium; inconclusive for stability";
        return "winding " + std::to_string(winding) +
               " differs from 1, so the enclosed equilibrium is not asymptotically stable";
    }
};

/// `cycle` must encircle the candidate equilibrium once, positively, in a
/// planar region framed by the standard basis.
inline IndexVerdict index_test(const FramedField& x, const Cycle& cycle, bool planar) {
    if (!planar)
        throw PreconditionError("index_test: the reference index 1 only applies to planar regions in the standard frame");
    IndexVerdict v;
    v.winding = winding_number(x, cycle);
    v.pass = v.winding == 1;
    return v;
}

}  // namespace stabcheck
