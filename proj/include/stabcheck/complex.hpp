#pragma once

// Simplicial complexes of dimension <= 2, boundary operators and integral
// homology with explicit generator cycles.

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stabcheck/abelian.hpp"
#include "stabcheck/error.hpp"

namespace stabcheck {

using Edge = std::array<std::size_t, 2>;
using Triangle = std::array<std::size_t, 3>;

/// Oriented simplices are strictly increasing vertex tuples; the orientation
/// is the one induced by that order.
class SimplicialComplex {
public:
    SimplicialComplex() = default;
    SimplicialComplex(std::size_t vertex_count, std::vector<Edge> edges, std::vector<Triangle> triangles)
        : vertex_count_(vertex_count), edges_(std::move(edges)), triangles_(std::move(triangles)) {
        for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_.emplace(edges_[i], i);
        for (std::size_t i = 0; i < triangles_.size(); ++i) triangle_index_.emplace(triangles_[i], i);
    }

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Triangle>& triangles() const noexcept { return triangles_; }

    /// Number of k-simplices; 0 for k > 2.
    std::size_t count(std::size_t k) const noexcept {
        switch (k) {
            case 0: return vertex_count_;
            case 1: return edges_.size();
            case 2: return triangles_.size();
            default: return 0;
        }
    }

    int dimension() const noexcept {
        if (!triangles_.empty()) return 2;
        if (!edges_.empty()) return 1;
        return vertex_count_ > 0 ? 0 : -1;
    }

    std::optional<std::size_t> edge_index(std::size_t a, std::size_t b) const {
        auto it = edge_index_.find(Edge{a, b});
        if (it == edge_index_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<std::size_t> triangle_index(const Triangle& t) const {
        auto it = triangle_index_.find(t);
        if (it == triangle_index_.end()) return std::nullopt;
        return it->second;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
        return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_ && a.triangles_ == b.triangles_;
    }

private:
    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::map<Edge, std::size_t> edge_index_;
    std::map<Triangle, std::size_t> triangle_index_;
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

inline ComplexPtr make_complex(std::size_t vertex_count, std::vector<Edge> edges,
                               std::vector<Triangle> triangles) {
    return std::make_shared<const SimplicialComplex>(vertex_count, std::move(edges), std::move(triangles));
}

inline bool same_complex(const ComplexPtr& a, const ComplexPtr& b) {
    return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------
// Validation

struct ComplexDefect {
    enum class Kind { VertexOutOfRange, NotIncreasing, Duplicate, MissingFace, BoundaryNotNilpotent };
    Kind kind;
    std::size_t dimension;  ///< dimension of the offending simplex
    std::size_t index;      ///< its position in the input list
    std::string message;
};

/// Boundary operator d_k : C_k -> C_{k-1}. Column j is the alternating face
/// expansion of the j-th k-simplex. Only 1 <= k <= 2.
inline IntMatrix boundary_matrix(const SimplicialComplex& k_complex, std::size_t k) {
    if (k == 1) {
        IntMatrix d(k_complex.vertex_count(), k_complex.edges().size());
        for (std::size_t j = 0; j < k_complex.edges().size(); ++j) {
            const auto& e = k_complex.edges()[j];
            if (e[0] >= k_complex.vertex_count() || e[1] >= k_complex.vertex_count())
                throw InvalidComplexError("edge " + std::to_string(j) + " references a missing vertex");
            d(e[0], j) -= 1;
            d(e[1], j) += 1;
        }
        return d;
    }
    if (k == 2) {
        IntMatrix d(k_complex.edges().size(), k_complex.triangles().size());
        for (std::size_t j = 0; j < k_complex.triangles().size(); ++j) {
            const auto& t = k_complex.triangles()[j];
            const std::array<std::pair<Edge, int>, 3> faces{{{Edge{t[1], t[2]}, 1},
                                                             {Edge{t[0], t[2]}, -1},
                                                             {Edge{t[0], t[1]}, 1}}};
            for (const auto& [face, sign] : faces) {
                auto idx = k_complex.edge_index(face[0], face[1]);
                if (!idx)
                    throw InvalidComplexError("triangle " + std::to_string(j) + " is missing its edge [" +
                                              std::to_string(face[0]) + "," + std::to_string(face[1]) + "]");
                d(*idx, j) += sign;
            }
        }
        return d;
    }
    throw DimensionError("boundary_matrix: degree " + std::to_string(k) + " is outside 1..2");
}

namespace detail {

/// d_k for every k, including the zero maps d_0 : C_0 -> 0 and d_3 : 0 -> C_2.
inline IntMatrix full_boundary(const SimplicialComplex& c, std::size_t k) {
    if (k == 0) return IntMatrix(0, c.vertex_count());
    if (k == 1 || k == 2) return boundary_matrix(c, k);
    if (k == 3) return IntMatrix(c.triangles().size(), 0);
    throw DimensionError("degree " + std::to_string(k) + " is outside 0..3");
}

}  // namespace detail

/// Returns the first defect found, or nullopt when the complex is valid.
inline std::optional<ComplexDefect> validate(const SimplicialComplex& c) {
    using Kind = ComplexDefect::Kind;
    const std::size_t n = c.vertex_count();

    std::map<Edge, std::size_t> seen_edges;
    for (std::size_t j = 0; j < c.edges().size(); ++j) {
        const auto& e = c.edges()[j];
        const std::string name = "edge " + std::to_string(j) + " [" + std::to_string(e[0]) + "," +
                                 std::to_string(e[1]) + "]";
        if (e[0] >= n || e[1] >= n) return ComplexDefect{Kind::VertexOutOfRange, 1, j, name + ": vertex out of range"};
        if (e[0] >= e[1]) return ComplexDefect{Kind::NotIncreasing, 1, j, name + ": vertices not strictly increasing"};
        if (!seen_edges.emplace(e, j).second)
            return ComplexDefect{Kind::Duplicate, 1, j, name + ": duplicate of edge " + std::to_string(seen_edges[e])};
    }

    std::map<Triangle, std::size_t> seen_triangles;
    for (std::size_t j = 0; j < c.triangles().size(); ++j) {
        const auto& t = c.triangles()[j];
        const std::string name = "triangle " + std::to_string(j) + " [" + std::to_string(t[0]) + "," +
                                 std::to_string(t[1]) + "," + std::to_string(t[2]) + "]";
        if (t[0] >= n || t[1] >= n || t[2] >= n)
            return ComplexDefect{Kind::VertexOutOfRange, 2, j, name + ": vertex out of range"};
        if (t[0] >= t[1] || t[1] >= t[2])
            return ComplexDefect{Kind::NotIncreasing, 2, j, name + ": vertices not strictly increasing"};
        if (!seen_triangles.emplace(t, j).second)
            return ComplexDefect{Kind::Duplicate, 2, j,
                                 name + ": duplicate of triangle " + std::to_string(seen_triangles[t])};
        for (const Edge& f : {Edge{t[1], t[2]}, Edge{t[0], t[2]}, Edge{t[0], t[1]}})
            if (!seen_edges.count(f))
                return ComplexDefect{Kind::MissingFace, 2, j,
                                     name + ": missing face [" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "]"};
    }

    const IntMatrix dd = boundary_matrix(c, 1) * boundary_matrix(c, 2);
    for (std::size_t j = 0; j < dd.cols(); ++j)
        for (std::size_t i = 0; i < dd.rows(); ++i)
            if (dd(i, j) != 0)
                return ComplexDefect{Kind::BoundaryNotNilpotent, 2, j,
                                     "triangle " + std::to_string(j) + ": composed boundary is nonzero"};
    return std::nullopt;
}

inline void require_valid(const SimplicialComplex& c) {
    if (auto defect = validate(c)) throw InvalidComplexError("invalid complex: " + defect->message);
}

// ---------------------------------------------------------------------------
// Chains and cycles

struct Chain {
    std::size_t dimension = 0;
    IntVector coefficients;  ///< indexed by the dimension-k simplices of the complex

    static Chain zero(const SimplicialComplex& c, std::size_t k) { return Chain{k, IntVector(c.count(k))}; }

    bool is_zero() const { return stabcheck::is_zero(coefficients); }

    Chain& operator+=(const Chain& o) {
        if (o.dimension != dimension || o.coefficients.size() != coefficients.size())
            throw DimensionError("chain sum: chains live in different groups");
        for (std::size_t i = 0; i < coefficients.size(); ++i) coefficients[i] += o.coefficients[i];
        return *this;
    }
    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend Chain operator*(const Integer& s, Chain a) {
        for (auto& x : a.coefficients) x *= s;
        return a;
    }
    friend Chain operator-(Chain a, const Chain& b) { return a += Integer(-1) * b; }
    friend bool operator==(const Chain& a, const Chain& b) {
        return a.dimension == b.dimension && a.coefficients == b.coefficients;
    }
};

inline Chain boundary(const SimplicialComplex& c, const Chain& chain) {
    if (chain.coefficients.size() != c.count(chain.dimension))
        throw DimensionError("boundary: chain does not belong to this complex");
    if (chain.dimension == 0) return Chain{0, {}};
    return Chain{chain.dimension - 1, boundary_matrix(c, chain.dimension) * chain.coefficients};
}

/// A chain with zero boundary.
class Cycle {
public:
    static Cycle from_chain(const SimplicialComplex& c, Chain chain) {
        if (chain.coefficients.size() != c.count(chain.dimension))
            throw DimensionError("cycle: chain has " + std::to_string(chain.coefficients.size()) +
                                 " coefficients but the complex has " + std::to_string(c.count(chain.dimension)) +
                                 " simplices of dimension " + std::to_string(chain.dimension));
        if (!boundary(c, chain).is_zero()) throw NotACycleError("chain is not a cycle: its boundary is nonzero");
        return Cycle(std::move(chain));
    }

    /// Closed edge path v0 -> v1 -> ... -> v_{n-1} -> v0.
    static Cycle from_loop(const SimplicialComplex& c, const std::vector<std::size_t>& vertices) {
        Chain chain = Chain::zero(c, 1);
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            const std::size_t a = vertices[i];
            const std::size_t b = vertices[(i + 1) % vertices.size()];
            auto idx = c.edge_index(std::min(a, b), std::max(a, b));
            if (!idx)
                throw NotACycleError("loop step " + std::to_string(a) + " -> " + std::to_string(b) +
                                     " is not an edge of the complex");
            chain.coefficients[*idx] += a < b ? 1 : -1;
        }
        return from_chain(c, std::move(chain));
    }

    const Chain& chain() const noexcept { return chain_; }
    std::size_t dimension() const noexcept { return chain_.dimension; }

    friend bool operator==(const Cycle& a, const Cycle& b) { return a.chain_ == b.chain_; }

private:
    explicit Cycle(Chain c) : chain_(std::move(c)) {}
    Chain chain_;
};

// ---------------------------------------------------------------------------
// Homology

/// H_k of a complex with explicit generator cycles: free generators first,
/// then torsion generators in divisibility order.
struct HomologyGroup {
    ComplexPtr complex;
    std::size_t degree = 0;
    std::size_t free_rank = 0;
    IntVector torsion;
    std::vector<Cycle> generators;
    /// Row i maps a k-cycle to its i-th coordinate (reduced mod the order for
    /// torsion generators).
    IntMatrix coordinate_map;

    std::size_t generator_count() const noexcept { return generators.size(); }

    /// 0 for a free generator, its order otherwise.
    Integer order(std::size_t i) const { return i < free_rank ? Integer(0) : torsion.at(i - free_rank); }

    FgAbGroup group() const {
        FgAbGroup g{free_rank, torsion, {}};
        for (const auto& c : generators) g.generators.push_back(c.chain().coefficients);
        return g;
    }

    std::string to_string() const { return group().to_string(); }
};

inline HomologyGroup homology(const ComplexPtr& complex, std::size_t k) {
    if (!complex) throw PreconditionError("homology: null complex");
    if (k > 2) throw DimensionError("homology: degree " + std::to_string(k) + " is outside 0..2");
    require_valid(*complex);
    const SimplicialComplex& c = *complex;

    // Kernel of d_k: trailing columns of the right transform of its Smith form.
    const SmithForm snf_k = smith_normal_form(detail::full_boundary(c, k));
    const std::size_t r = snf_k.rank();
    const std::size_t nk = c.count(k);
    const IntMatrix kernel_basis = snf_k.v_inv.column_block(r, nk);   // nk x z
    const IntMatrix kernel_coords = snf_k.v.row_block(r, nk);         // z x nk

    // Boundaries written in the kernel basis, then diagonalised.
    const IntMatrix relations = kernel_coords * detail::full_boundary(c, k + 1);
    const SmithForm snf_rel = smith_normal_form(relations);
    const IntMatrix basis = kernel_basis * snf_rel.u;
    const IntMatrix coords = snf_rel.u_inv * kernel_coords;
    const std::size_t z = kernel_basis.cols();

    HomologyGroup h;
    h.complex = complex;
    h.degree = k;
    std::vector<std::size_t> picked;
    for (std::size_t i = snf_rel.rank(); i < z; ++i) picked.push_back(i);
    h.free_rank = picked.size();
    for (std::size_t i = 0; i < snf_rel.rank(); ++i)
        if (snf_rel.diag[i] != 1) {
            picked.push_back(i);
            h.torsion.push_back(snf_rel.diag[i]);
        }

    h.coordinate_map = IntMatrix(picked.size(), nk);
    for (std::size_t g = 0; g < picked.size(); ++g) {
        h.generators.push_back(Cycle::from_chain(c, Chain{k, basis.column(picked[g])}));
        for (std::size_t j = 0; j < nk; ++j) h.coordinate_map(g, j) = coords(picked[g], j);
    }
    return h;
}

struct HomologyCoordinates {
    IntVector coordinates;  ///< one per generator of the group
    Chain certificate;      ///< (k+1)-chain with c - sum x_i g_i = boundary(certificate)
};

inline HomologyCoordinates express_in_homology(const Cycle& cycle, const HomologyGroup& h) {
    const SimplicialComplex& c = *h.complex;
    if (cycle.dimension() != h.degree)
        throw DimensionError("express_in_homology: cycle has dimension " + std::to_string(cycle.dimension()) +
                             " but the group is H_" + std::to_string(h.degree));
    if (cycle.chain().coefficients.size() != c.count(h.degree))
        throw DimensionError("express_in_homology: cycle does not belong to this complex");
    if (!boundary(c, cycle.chain()).is_zero()) throw NotACycleError("express_in_homology: chain is not a cycle");

    HomologyCoordinates out;
    out.coordinates = h.coordinate_map * cycle.chain().coefficients;
    for (std::size_t i = 0; i < out.coordinates.size(); ++i) {
        const Integer ord = h.order(i);
        if (ord != 0) mpz_fdiv_r(out.coordinates[i].get_mpz_t(), out.coordinates[i].get_mpz_t(), ord.get_mpz_t());
    }

    Chain residual = cycle.chain();
    for (std::size_t i = 0; i < out.coordinates.size(); ++i)
        residual = residual - out.coordinates[i] * h.generators[i].chain();

    const IntMatrix d_up = detail::full_boundary(c, h.degree + 1);
    const Membership m = lattice_member(residual.coefficients, d_up);
    if (!m.member)
        throw PreconditionError("express_in_homology: cycle is not expressible in the given generators");
    out.certificate = Chain{h.degree + 1, m.coefficients};
    return out;
}

/// Replaces the free generators with the given cycles. They must form a basis
/// of the free part: their free coordinates form a unimodular matrix and
/// their torsion coordinates vanish.
inline HomologyGroup rebase(const HomologyGroup& h, const std::vector<Cycle>& free_generators) {
    if (free_generators.size() != h.free_rank)
        throw DimensionError("rebase: expected " + std::to_string(h.free_rank) + " cycles, got " +
                             std::to_string(free_generators.size()));
    const std::size_t f = h.free_rank;
    IntMatrix change(f, f);
    for (std::size_t j = 0; j < f; ++j) {
        const IntVector x = express_in_homology(free_generators[j], h).coordinates;
        for (std::size_t i = 0; i < f; ++i) change(i, j) = x[i];
        for (std::size_t i = f; i < x.size(); ++i)
            if (x[i] != 0) throw PreconditionError("rebase: cycle " + std::to_string(j) + " has a torsion component");
    }
    const Integer det = determinant(change);
    if (det != 1 && det != -1)
        throw PreconditionError("rebase: cycles do not form a basis of the free part (determinant " + det.get_str() +
                                ")");

    // New coordinates are change^-1 times the old ones; the inverse is exact
    // because change is unimodular.
    const SmithForm snf = smith_normal_form(change);
    const IntMatrix inverse = snf.v_inv * snf.u_inv;

    HomologyGroup out = h;
    const IntMatrix free_map = inverse * h.coordinate_map.row_block(0, f);
    for (std::size_t i = 0; i < f; ++i) {
        out.generators[i] = free_generators[i];
        for (std::size_t j = 0; j < out.coordinate_map.cols(); ++j) out.coordinate_map(i, j) = free_map(i, j);
    }
    return out;
}

}  // namespace stabcheck
