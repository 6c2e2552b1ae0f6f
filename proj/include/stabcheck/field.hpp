#pragma once

// Nowhere-zero vector fields sampled at the vertices of a region whose
// tangent bundle carries a fixed 2-dimensional frame. Under the frame the
// punctured tangent bundle is (region) x (R^2 \ 0), so the class a field
// induces on a 1-cycle c is ([c], winding of the field along c).

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "stabcheck/abelian.hpp"
#include "stabcheck/complex.hpp"
#include "stabcheck/error.hpp"

namespace stabcheck {

struct Tolerances {
    /// A sample is zero when its norm is <= zero_relative * (largest sample norm).
    double zero_relative = 1e-9;
    /// Consecutive samples along an edge must differ in angle by < pi - adequacy_margin.
    double adequacy_margin = 1e-6;
    /// Accumulated angle / 2pi must lie within this distance of an integer.
    double rounding = 1e-6;
};

inline void require_positive(const Tolerances& t) {
    if (!(t.zero_relative > 0) || !(t.adequacy_margin > 0) || !(t.rounding > 0))
        throw PreconditionError("tolerances must be positive");
}

/// Coordinates (a, b) of a tangent vector in the frame (first, second).
using Sample = std::array<double, 2>;

class FramedField {
public:
    FramedField(ComplexPtr complex, std::vector<Sample> samples, Tolerances tol = {})
        : complex_(std::move(complex)), samples_(std::move(samples)), tol_(tol) {
        if (!complex_) throw PreconditionError("framed field: null complex");
        require_positive(tol_);
        if (samples_.size() != complex_->vertex_count())
            throw DimensionError("framed field: " + std::to_string(samples_.size()) + " samples for " +
                                 std::to_string(complex_->vertex_count()) + " vertices");
        double largest = 0.0;
        for (const auto& s : samples_) {
            if (!std::isfinite(s[0]) || !std::isfinite(s[1]))
                throw PreconditionError("framed field: non-finite sample");
            largest = std::max(largest, std::hypot(s[0], s[1]));
        }
        const double floor = tol_.zero_relative * largest;
        for (std::size_t v = 0; v < samples_.size(); ++v) {
            if (!(std::hypot(samples_[v][0], samples_[v][1]) > floor))
                throw ZeroSampleError(v, "field vanishes at vertex " + std::to_string(v) +
                                             " (sample norm <= " + std::to_string(tol_.zero_relative) +
                                             " x largest norm); the region must exclude zeros of the field");
        }
    }

    const ComplexPtr& complex() const noexcept { return complex_; }
    const std::vector<Sample>& samples() const noexcept { return samples_; }
    const Sample& sample(std::size_t v) const { return samples_.at(v); }
    const Tolerances& tolerances() const noexcept { return tol_; }

    FramedField negated() const {
        std::vector<Sample> s = samples_;
        for (auto& x : s) x = {-x[0], -x[1]};
        return {complex_, std::move(s), tol_};
    }

    /// Per-vertex positive rescaling.
    FramedField scaled(const std::vector<double>& factors) const {
        if (factors.size() != samples_.size()) throw DimensionError("scaled: one factor per vertex required");
        std::vector<Sample> s = samples_;
        for (std::size_t v = 0; v < s.size(); ++v) {
            if (!(factors[v] > 0)) throw PreconditionError("scaled: factors must be positive");
            s[v] = {s[v][0] * factors[v], s[v][1] * factors[v]};
        }
        return {complex_, std::move(s), tol_};
    }

private:
    ComplexPtr complex_;
    std::vector<Sample> samples_;
    Tolerances tol_;
};

/// Signed angle turning `from` into `to`, in (-pi, pi].
inline double signed_angle(const Sample& from, const Sample& to) {
    return std::atan2(from[0] * to[1] - from[1] * to[0], from[0] * to[0] + from[1] * to[1]);
}

/// Degree of the direction map along a 1-cycle: the weighted sum of angle
/// increments over the cycle's edges, divided by 2 pi.
inline long winding_number(const FramedField& f, const Cycle& c) {
    const SimplicialComplex& k = *f.complex();
    if (c.dimension() != 1) throw DimensionError("winding_number: cycle must be 1-dimensional");
    if (c.chain().coefficients.size() != k.edges().size())
        throw DimensionError("winding_number: cycle does not belong to the field's complex");
    if (!boundary(k, c.chain()).is_zero())
        throw NotACycleError("winding_number: chain does not decompose into closed edge loops");

    const double limit = std::numbers::pi - f.tolerances().adequacy_margin;
    double total = 0.0;
    for (std::size_t e = 0; e < k.edges().size(); ++e) {
        const Integer& weight = c.chain().coefficients[e];
        if (weight == 0) continue;
        const auto [a, b] = k.edges()[e];
        const double step = signed_angle(f.sample(a), f.sample(b));
        if (!(std::abs(step) < limit))
            throw AdequacyError(e, "edge " + std::to_string(e) + " [" + std::to_string(a) + "," + std::to_string(b) +
                                       "]: field turns by " + std::to_string(std::abs(step)) +
                                       " rad across it; refine the mesh there");
        total += weight.get_d() * step;
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > f.tolerances().rounding)
        throw PreconditionError("winding_number: accumulated angle is " + std::to_string(turns) +
                                " turns, not within tolerance of an integer");
    return static_cast<long>(rounded);
}

/// Element of H_1(region) + Z: base coordinates in the homology basis and
/// the winding (fiber) component.
struct ProductClass {
    IntVector base;
    Integer fiber;

    IntVector stacked() const {
        IntVector v = base;
        v.push_back(fiber);
        return v;
    }

    friend bool operator==(const ProductClass&, const ProductClass&) = default;
};

/// Sub-lattice of H_1(region) + Z; columns are stacked ProductClass vectors.
struct ImageLattice {
    IntMatrix generators;

    std::size_t base_rank() const { return generators.rows() == 0 ? 0 : generators.rows() - 1; }
};

namespace detail {

inline void require_h1_for(const FramedField& f, const HomologyGroup& h) {
    if (h.degree != 1) throw DimensionError("expected H_1, got H_" + std::to_string(h.degree));
    if (!same_complex(f.complex(), h.complex))
        throw DimensionError("field and homology group live on different complexes");
}

}  // namespace detail

/// Generator g_i maps to (e_i, winding of f along g_i).
inline std::vector<ProductClass> induced_map_h1(const FramedField& f, const HomologyGroup& h) {
    detail::require_h1_for(f, h);
    std::vector<ProductClass> out;
    out.reserve(h.generator_count());
    for (std::size_t i = 0; i < h.generator_count(); ++i) {
        ProductClass pc{IntVector(h.generator_count()), winding_number(f, h.generators[i])};
        pc.base[i] = 1;
        out.push_back(std::move(pc));
    }
    return out;
}

/// Degree-0 data: each component class maps to (component, point class) no
/// matter which nowhere-zero field is used.
struct DegreeZeroImage {
    std::vector<std::size_t> components;

    friend bool operator==(const DegreeZeroImage&, const DegreeZeroImage&) = default;
};

inline DegreeZeroImage induced_map_h0(const FramedField& f, const HomologyGroup& h0) {
    if (h0.degree != 0) throw DimensionError("induced_map_h0: expected H_0, got H_" + std::to_string(h0.degree));
    if (!same_complex(f.complex(), h0.complex))
        throw DimensionError("induced_map_h0: field and homology group live on different complexes");
    DegreeZeroImage out;
    for (std::size_t i = 0; i < h0.generator_count(); ++i) out.components.push_back(i);
    return out;
}

/// Image lattice of a single-input system x' = g(x) u, u in R. With g
/// nowhere zero, p^-1(region) \ f^-1(0) is region x (R \ 0); both sheets
/// induce the classes (e_i, w(g, g_i)) since negation preserves windings.
inline ImageLattice single_input_image(const FramedField& g, const HomologyGroup& h) {
    const auto classes = induced_map_h1(g, h);
    std::vector<IntVector> cols;
    cols.reserve(classes.size());
    for (const auto& pc : classes) cols.push_back(pc.stacked());
    return ImageLattice{IntMatrix::from_columns(cols, h.generator_count() + 1)};
}

}  // namespace stabcheck
