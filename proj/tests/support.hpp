#pragma once

// Generators and independent oracles shared by the unit, property and
// acceptance tests. The oracles deliberately avoid the library's
// Smith/Hermite code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "stabcheck/stabcheck.hpp"

namespace stabcheck::testing {

using Rng = std::mt19937_64;

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long bound) {
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform_int(rng, -bound, bound);
    return m;
}

/// Low-rank matrices exercise nontrivial kernels and torsion.
inline IntMatrix random_structured_matrix(Rng& rng, std::size_t rows, std::size_t cols, long bound) {
    const auto kind = uniform_int(rng, 0, 3);
    if (kind == 0 && rows > 1 && cols > 1) {
        IntMatrix a = random_matrix(rng, rows, 1, 3), b = random_matrix(rng, 1, cols, 3);
        IntMatrix c = random_matrix(rng, rows, 1, 3), d = random_matrix(rng, 1, cols, 3);
        IntMatrix m = a * b;
        const IntMatrix n = c * d;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                m(i, j) += n(i, j);
                m(i, j) = std::clamp(m(i, j), Integer(-bound), Integer(bound));
            }
        return m;
    }
    if (kind == 1) {
        IntMatrix m = random_matrix(rng, rows, cols, bound);
        const Integer f = uniform_int(rng, 2, 3);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                m(i, j) = f * (m(i, j) / f);
            }
        return m;
    }
    return random_matrix(rng, rows, cols, bound);
}

/// gcd of all k x k minors (the k-th determinantal divisor), by expansion.
inline Integer determinantal_divisor(const IntMatrix& a, std::size_t k) {
    std::vector<std::size_t> rows(k), cols(k);
    Integer g = 0;
    std::vector<bool> rsel(a.rows(), false), csel(a.cols(), false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
    do {
        std::fill(csel.begin(), csel.end(), false);
        std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
        do {
            IntMatrix sub(k, k);
            std::size_t r = 0;
            for (std::size_t i = 0; i < a.rows(); ++i) {
                if (!rsel[i]) continue;
                std::size_t c = 0;
                for (std::size_t j = 0; j < a.cols(); ++j)
                    if (csel[j]) sub(r, c++) = a(i, j);
                ++r;
            }
            g = gcd(g, determinant(sub));
        } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
    return abs(g);
}

/// Membership of b in the span of L's columns (3 rows, up to 3 columns),
/// enumerating coefficient vectors in [-bound, bound]. The last coefficient
/// is solved for directly, which visits exactly the same candidates.
inline bool brute_force_member(const IntMatrix& lattice, const std::vector<long>& b, long bound) {
    const std::size_t rows = lattice.rows(), cols = lattice.cols();
    std::vector<std::vector<long>> l(rows, std::vector<long>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) l[i][j] = lattice(i, j).get_si();
    if (cols == 0) return std::all_of(b.begin(), b.end(), [](long x) { return x == 0; });

    std::vector<long> c(cols, -bound);
    const std::size_t last = cols - 1;
    std::optional<std::size_t> pivot;
    for (std::size_t i = 0; i < rows; ++i)
        if (l[i][last] != 0) {
            pivot = i;
            break;
        }
    auto residual = [&](std::size_t i) {
        long r = b[i];
        for (std::size_t j = 0; j < last; ++j) r -= l[i][j] * c[j];
        return r;
    };
    while (true) {
        long c_last = 0;
        bool ok = true;
        if (pivot) {
            const long r = residual(*pivot);
            if (r % l[*pivot][last] != 0) ok = false;
            else c_last = r / l[*pivot][last];
            if (std::abs(c_last) > bound) ok = false;
        }
        if (ok) {
            for (std::size_t i = 0; i < rows && ok; ++i) ok = residual(i) - l[i][last] * c_last == 0;
            if (ok) return true;
        }
        std::size_t k = 0;
        while (k < last && c[k] == bound) c[k++] = -bound;
        if (k == last) return false;
        ++c[k];
    }
}

/// Betti number from ranks over Q (fraction-free elimination, not SNF).
inline std::size_t betti(const SimplicialComplex& c, std::size_t k) {
    const std::size_t rk = k == 0 ? 0 : rank(boundary_matrix(c, k));
    const std::size_t rk1 = k >= 2 ? 0 : rank(boundary_matrix(c, k + 1));
    return c.count(k) - rk - rk1;
}

/// Random 2-complex: random triangles on n vertices plus random stray edges,
/// closed under faces.
inline ComplexPtr random_complex(Rng& rng, std::size_t n, std::size_t triangles, std::size_t extra_edges) {
    std::set<Triangle> ts;
    std::set<Edge> es;
    for (std::size_t t = 0; t < triangles; ++t) {
        std::array<std::size_t, 3> v{};
        do {
            for (auto& x : v) x = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n) - 1));
            std::sort(v.begin(), v.end());
        } while (v[0] == v[1] || v[1] == v[2]);
        ts.insert(Triangle{v[0], v[1], v[2]});
        es.insert(Edge{v[0], v[1]});
        es.insert(Edge{v[0], v[2]});
        es.insert(Edge{v[1], v[2]});
    }
    for (std::size_t e = 0; e < extra_edges; ++e) {
        auto a = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n) - 1));
        auto b = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n) - 1));
        if (a == b) continue;
        es.insert(Edge{std::min(a, b), std::max(a, b)});
    }
    return make_complex(n, {es.begin(), es.end()}, {ts.begin(), ts.end()});
}

inline ComplexPtr circle_complex() { return make_complex(3, {{0, 1}, {0, 2}, {1, 2}}, {}); }

inline ComplexPtr rp2_complex() {
    const std::vector<std::array<std::size_t, 3>> one_based{{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 6, 2},
                                                            {2, 3, 5}, {3, 4, 6}, {4, 5, 2}, {5, 6, 3}, {6, 2, 4}};
    std::set<Triangle> ts;
    std::set<Edge> es;
    for (auto t : one_based) {
        for (auto& x : t) --x;
        std::sort(t.begin(), t.end());
        ts.insert(Triangle{t[0], t[1], t[2]});
        es.insert(Edge{t[0], t[1]});
        es.insert(Edge{t[0], t[2]});
        es.insert(Edge{t[1], t[2]});
    }
    return make_complex(6, {es.begin(), es.end()}, {ts.begin(), ts.end()});
}

/// Polar angle of every vertex of the annulus-orbit complex, read off its
/// attracting field (whose radial part is small next to the tangential one).
struct AnnulusFixture {
    Scenario scenario = build_annulus_orbit();
    HomologyGroup h1 = homology(scenario.complex, 1);
    std::vector<double> phi;

    AnnulusFixture() {
        // vertex index = ring * 2n + k * 2 + j with n = 32 angular steps.
        const std::size_t n = 32;
        phi.resize(scenario.complex->vertex_count());
        for (std::size_t v = 0; v < phi.size(); ++v) {
            const std::size_t k = (v % (2 * n)) / 2;
            phi[v] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        }
    }

    FramedField field_from_angles(const std::vector<double>& angle, Rng& rng) const {
        std::vector<Sample> s(angle.size());
        for (std::size_t v = 0; v < s.size(); ++v) {
            const double r = uniform_real(rng, 0.5, 2.0);
            s[v] = {r * std::cos(angle[v]), r * std::sin(angle[v])};
        }
        return {scenario.complex, std::move(s)};
    }

    /// Angle m * phi + phase + small jitter: adequate on this mesh for |m| <= 2.
    std::vector<double> random_angles(Rng& rng) const {
        const double m = static_cast<double>(uniform_int(rng, -2, 2));
        const double phase = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
        std::vector<double> a(phi.size());
        for (std::size_t v = 0; v < a.size(); ++v) a[v] = m * phi[v] + phase + uniform_real(rng, -0.1, 0.1);
        return a;
    }
};

/// Winding of z -> z^2 around the unit circle from a dense polygon, summing
/// unwrapped angle increments of the analytic direction.
inline double dense_squared_winding(std::size_t points) {
    double total = 0.0;
    auto angle_at = [&](std::size_t i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i % points) / static_cast<double>(points);
        const double x = std::cos(t), y = std::sin(t);
        return std::atan2(2 * x * y, x * x - y * y);
    };
    for (std::size_t i = 0; i < points; ++i) {
        double d = angle_at(i + 1) - angle_at(i);
        while (d > std::numbers::pi) d -= 2 * std::numbers::pi;
        while (d <= -std::numbers::pi) d += 2 * std::numbers::pi;
        total += d;
    }
    return total / (2.0 * std::numbers::pi);
}

}  // namespace stabcheck::testing
