#pragma once

// Exact integer linear algebra: Hermite and Smith normal forms, integer
// solving, lattice membership/inclusion and cokernel presentations.
//
// Every entry is an arbitrary-precision integer (GMP). Nothing here rounds.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stabcheck/error.hpp"

namespace stabcheck {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

inline IntVector int_vector(std::initializer_list<long> values) {
    IntVector out;
    out.reserve(values.size());
    for (long v : values) out.emplace_back(v);
    return out;
}

inline bool is_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

inline Integer dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    Integer acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

/// Dense row-major integer matrix.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        IntMatrix m(r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c) throw DimensionError("from_rows: ragged rows");
            std::size_t j = 0;
            for (long v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    /// Columns must all have length `rows`; an empty list gives rows x 0.
    static IntMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows) {
        IntMatrix m(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != rows) throw DimensionError("from_columns: column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector row(std::size_t i) const {
        return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    IntVector column(std::size_t j) const {
        IntVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    std::vector<IntVector> columns() const {
        std::vector<IntVector> out;
        out.reserve(cols_);
        for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
        return out;
    }

    /// Rows [first, last) as a new matrix.
    IntMatrix row_block(std::size_t first, std::size_t last) const {
        IntMatrix out(last - first, cols_);
        for (std::size_t i = first; i < last; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(i - first, j) = (*this)(i, j);
        return out;
    }

    /// Columns [first, last) as a new matrix.
    IntMatrix column_block(std::size_t first, std::size_t last) const {
        IntMatrix out(rows_, last - first);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = first; j < last; ++j) out(i, j - first) = (*this)(i, j);
        return out;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    /// row dst += factor * row src
    void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
        if (factor == 0) return;
        for (std::size_t j = 0; j < cols_; ++j) {
            const Integer& x = (*this)(src, j);
            if (sgn(x) != 0) mpz_addmul((*this)(dst, j).get_mpz_t(), factor.get_mpz_t(), x.get_mpz_t());
        }
    }
    /// col dst += factor * col src
    void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
        if (factor == 0) return;
        for (std::size_t i = 0; i < rows_; ++i) {
            const Integer& x = (*this)(i, src);
            if (sgn(x) != 0) mpz_addmul((*this)(i, dst).get_mpz_t(), factor.get_mpz_t(), x.get_mpz_t());
        }
    }
    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
    }
    void negate_col(std::size_t j) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (sgn(aik) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const Integer& bkj = b(k, j);
                    if (sgn(bkj) != 0) mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
                }
            }
        return c;
    }

    friend IntVector operator*(const IntMatrix& a, const IntVector& x) {
        if (a.cols_ != x.size()) throw DimensionError("matrix-vector product: length mismatch");
        IntVector y(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j)
                if (sgn(a(i, j)) != 0 && sgn(x[j]) != 0) mpz_addmul(y[i].get_mpz_t(), a(i, j).get_mpz_t(), x[j].get_mpz_t());
        return y;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
        }
        os << ']';
        return os.str();
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// Exact determinant by Bareiss fraction-free elimination.
inline Integer determinant(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("determinant: matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = t;
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/// Exact rank by fraction-free elimination. Independent of the normal forms
/// below, so it can serve as a cross-check for them.
inline std::size_t rank(const IntMatrix& a) {
    IntMatrix m = a;
    std::size_t r = 0;
    Integer prev = 1;
    for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
        std::size_t p = r;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            for (std::size_t j = col + 1; j < m.cols(); ++j) {
                Integer t = m(i, j) * m(r, col) - m(i, col) * m(r, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = t;
            }
            m(i, col) = 0;
        }
        prev = m(r, col);
        ++r;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Hermite normal form

struct HermiteForm {
    IntMatrix h;  ///< row echelon, positive pivots, entries above pivots in [0, pivot)
    IntMatrix u;  ///< unimodular, h = u * a
    std::vector<std::size_t> pivot_columns;
};

inline HermiteForm hermite_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows();
    HermiteForm out{a, IntMatrix::identity(m), {}};
    IntMatrix& h = out.h;
    IntMatrix& u = out.u;
    auto add = [&](std::size_t dst, std::size_t src, const Integer& f) {
        h.add_row_multiple(dst, src, f);
        u.add_row_multiple(dst, src, f);
    };

    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < m; ++col) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = row; i < m; ++i) {
                const Integer& x = h(i, col);
                if (sgn(x) == 0) continue;
                if (!best || mpz_cmpabs(x.get_mpz_t(), h(*best, col).get_mpz_t()) < 0) best = i;
                if (mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0) break;
            }
            if (!best) break;
            h.swap_rows(row, *best);
            u.swap_rows(row, *best);
            bool cleared = true;
            for (std::size_t i = row + 1; i < m; ++i) {
                if (h(i, col) == 0) continue;
                Integer q = h(i, col) / h(row, col);
                add(i, row, -q);
                if (h(i, col) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (h(row, col) == 0) continue;
        if (h(row, col) < 0) {
            h.negate_row(row);
            u.negate_row(row);
        }
        for (std::size_t i = 0; i < row; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(row, col).get_mpz_t());
            add(i, row, -q);
        }
        out.pivot_columns.push_back(col);
        ++row;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace detail {

/// Position of a nonzero entry of least absolute value in the submatrix
/// starting at (row0, col0); the first one in row-major order on ties.
inline std::optional<std::pair<std::size_t, std::size_t>> min_abs_entry(const IntMatrix& a, std::size_t row0,
                                                                        std::size_t col0) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    const Integer* best_value = nullptr;
    for (std::size_t i = row0; i < a.rows(); ++i)
        for (std::size_t j = col0; j < a.cols(); ++j) {
            const Integer& x = a(i, j);
            if (sgn(x) == 0) continue;
            if (!best || mpz_cmpabs(x.get_mpz_t(), best_value->get_mpz_t()) < 0) {
                best = {i, j};
                best_value = &x;
                if (mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0) return best;
            }
        }
    return best;
}

}  // namespace detail

/// a = u * s * v with u, v unimodular; s = u_inv * a * v_inv.
struct SmithForm {
    IntMatrix s;
    IntMatrix u;
    IntMatrix v;
    IntMatrix u_inv;
    IntMatrix v_inv;
    IntVector diag;  ///< nonzero diagonal d_1 | d_2 | ... | d_r, all positive

    std::size_t rank() const noexcept { return diag.size(); }
};

/// Pivot rule: nonzero entry of minimal absolute value in the remaining
/// submatrix (first in row-major order on ties).
inline SmithForm smith_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    IntMatrix s = a;
    IntMatrix p = IntMatrix::identity(m), p_inv = IntMatrix::identity(m);
    IntMatrix q = IntMatrix::identity(n), q_inv = IntMatrix::identity(n);

    // Every row operation E on s is mirrored as p <- E p, p_inv <- p_inv E^-1;
    // every column operation F as q <- q F, q_inv <- F^-1 q_inv.
    auto row_add = [&](std::size_t i, std::size_t j, const Integer& c) {
        s.add_row_multiple(i, j, c);
        p.add_row_multiple(i, j, c);
        p_inv.add_col_multiple(j, i, -c);
    };
    auto row_swap = [&](std::size_t i, std::size_t j) {
        s.swap_rows(i, j);
        p.swap_rows(i, j);
        p_inv.swap_cols(i, j);
    };
    auto row_negate = [&](std::size_t i) {
        s.negate_row(i);
        p.negate_row(i);
        p_inv.negate_col(i);
    };
    auto col_add = [&](std::size_t j, std::size_t i, const Integer& c) {
        s.add_col_multiple(j, i, c);
        q.add_col_multiple(j, i, c);
        q_inv.add_row_multiple(i, j, -c);
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        s.swap_cols(i, j);
        q.swap_cols(i, j);
        q_inv.swap_rows(i, j);
    };

    IntVector diag;
    const std::size_t steps = std::min(m, n);
    for (std::size_t t = 0; t < steps; ++t) {
        bool exhausted = false;
        for (;;) {
            const auto best = detail::min_abs_entry(s, t, t);
            if (!best) {
                exhausted = true;
                break;
            }
            row_swap(t, best->first);
            col_swap(t, best->second);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (s(i, t) == 0) continue;
                Integer f = s(i, t) / s(t, t);
                row_add(i, t, -f);
                if (s(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (s(t, j) == 0) continue;
                Integer f = s(t, j) / s(t, t);
                col_add(j, t, -f);
                if (s(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            // Divisibility: pull a non-multiple into row t and go again.
            std::optional<std::size_t> offender;
            if (mpz_cmpabs_ui(s(t, t).get_mpz_t(), 1) == 0) break;
            for (std::size_t i = t + 1; i < m && !offender; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(s(i, j).get_mpz_t(), s(t, t).get_mpz_t())) {
                        offender = i;
                        break;
                    }
            if (!offender) break;
            row_add(t, *offender, 1);
        }
        if (exhausted) break;
        if (s(t, t) < 0) row_negate(t);
        diag.push_back(s(t, t));
    }

    return SmithForm{std::move(s), std::move(p_inv), std::move(q_inv), std::move(p), std::move(q),
                     std::move(diag)};
}

// ---------------------------------------------------------------------------
// Lattices. A lattice is given by an IntMatrix whose columns generate it; a
// matrix with zero columns is the trivial lattice.

/// Certificate that b is not in the lattice L: an integer functional z with
/// z.L_j = 0 (mod modulus) for every generator but z.b != 0 (mod modulus).
/// modulus 0 means exact equality.
struct Refutation {
    IntVector functional;
    Integer modulus;
};

struct Membership {
    bool member = false;
    IntVector coefficients;             ///< L * coefficients == b, when member
    std::optional<Refutation> refutation;  ///< present when not a member
};

inline bool refutes(const Refutation& r, const IntMatrix& lattice, const IntVector& b) {
    if (r.functional.size() != lattice.rows() || b.size() != lattice.rows()) return false;
    auto vanishes = [&](const Integer& x) {
        return r.modulus == 0 ? x == 0 : mpz_divisible_p(x.get_mpz_t(), r.modulus.get_mpz_t()) != 0;
    };
    for (std::size_t j = 0; j < lattice.cols(); ++j)
        if (!vanishes(dot(r.functional, lattice.column(j)))) return false;
    return !vanishes(dot(r.functional, b));
}

namespace detail {

inline Refutation smith_refutation(const IntMatrix& lattice, const IntVector& b) {
    const SmithForm snf = smith_normal_form(lattice);
    const IntVector c = snf.u_inv * b;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < snf.rank()) {
            if (!mpz_divisible_p(c[i].get_mpz_t(), snf.diag[i].get_mpz_t()))
                return {snf.u_inv.row(i), snf.diag[i]};
        } else if (c[i] != 0) {
            return {snf.u_inv.row(i), 0};
        }
    }
    throw std::logic_error("smith_refutation: vector is a lattice member");
}

}  // namespace detail

/// Decides b in span_Z(columns of lattice). Membership is decided on the
/// Hermite form of the transposed generator matrix; a refutation is read off
/// the Smith form, and the two routes must agree.
inline Membership lattice_member(const IntVector& b, const IntMatrix& lattice) {
    if (b.size() != lattice.rows())
        throw DimensionError("lattice_member: vector has length " + std::to_string(b.size()) +
                             " but lattice generators have length " + std::to_string(lattice.rows()));

    const HermiteForm hnf = hermite_normal_form(lattice.transpose());
    IntVector residual = b;
    IntVector y(lattice.cols());
    bool member = true;
    for (std::size_t k = 0; k < hnf.pivot_columns.size(); ++k) {
        const std::size_t pc = hnf.pivot_columns[k];
        if (residual[pc] == 0) continue;
        if (!mpz_divisible_p(residual[pc].get_mpz_t(), hnf.h(k, pc).get_mpz_t())) {
            member = false;
            break;
        }
        y[k] = residual[pc] / hnf.h(k, pc);
        for (std::size_t j = 0; j < residual.size(); ++j) residual[j] -= y[k] * hnf.h(k, j);
    }
    if (member && !is_zero(residual)) member = false;

    Membership out;
    out.member = member;
    if (member) {
        out.coefficients = hnf.u.transpose() * y;
        if (lattice * out.coefficients != b)
            throw std::logic_error("lattice_member: coefficients fail to reconstruct");
    } else {
        out.refutation = detail::smith_refutation(lattice, b);
    }
    return out;
}

struct SubsetResult {
    bool holds = false;
    std::vector<IntVector> coefficients;  ///< one per column of the sub-lattice, when holds
    std::optional<std::size_t> witness_column;
    IntVector witness;
    std::optional<Refutation> refutation;
};

inline SubsetResult lattice_subset(const IntMatrix& sub, const IntMatrix& sup) {
    if (sub.rows() != sup.rows())
        throw DimensionError("lattice_subset: generators have lengths " + std::to_string(sub.rows()) +
                             " and " + std::to_string(sup.rows()));
    SubsetResult out;
    for (std::size_t j = 0; j < sub.cols(); ++j) {
        IntVector col = sub.column(j);
        Membership m = lattice_member(col, sup);
        if (!m.member) {
            out.holds = false;
            out.coefficients.clear();
            out.witness_column = j;
            out.witness = std::move(col);
            out.refutation = std::move(m.refutation);
            return out;
        }
        out.coefficients.push_back(std::move(m.coefficients));
    }
    out.holds = true;
    return out;
}

// ---------------------------------------------------------------------------
// Finitely generated abelian groups

struct FgAbGroup {
    std::size_t free_rank = 0;
    IntVector torsion;                ///< entries > 1, each dividing the next
    std::vector<IntVector> generators;  ///< free generators first, then torsion

    bool trivial() const { return free_rank == 0 && torsion.empty(); }

    std::string to_string() const {
        if (trivial()) return "0";
        std::string out;
        if (free_rank == 1) out = "Z";
        else if (free_rank > 1) out = "Z^" + std::to_string(free_rank);
        for (const auto& d : torsion) out += (out.empty() ? "" : " + ") + ("Z/" + d.get_str());
        return out;
    }
};

/// Z^rows / (column span of relations).
inline FgAbGroup cokernel(const IntMatrix& relations) {
    const SmithForm snf = smith_normal_form(relations);
    FgAbGroup g;
    g.free_rank = relations.rows() - snf.rank();
    for (std::size_t i = snf.rank(); i < relations.rows(); ++i) g.generators.push_back(snf.u.column(i));
    for (std::size_t i = 0; i < snf.rank(); ++i) {
        if (snf.diag[i] == 1) continue;
        g.torsion.push_back(snf.diag[i]);
        g.generators.push_back(snf.u.column(i));
    }
    return g;
}

}  // namespace stabcheck
