#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "graphjac/matrix.hpp"

namespace graphjac {

// Smith normal form u*m*v = d with u, v unimodular, d diagonal with
// d1 | d2 | ... and nonzero entries first. Pivot choice: the remaining entry
// of minimal nonzero absolute value, which keeps intermediate growth tame at
// desk scale.
struct SnfResult {
    IntMatrix u, d, v;
};

namespace detail {

struct SnfFull {
    IntMatrix u, d, v, u_inv;
    std::size_t rank = 0;
};

inline SnfFull snf_full(const IntMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    SnfFull s;
    s.d = m;
    s.u = IntMatrix::identity(R);
    s.u_inv = IntMatrix::identity(R);
    s.v = IntMatrix::identity(C);
    IntMatrix& a = s.d;

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        a.swap_rows(i, j);
        s.u.swap_rows(i, j);
        s.u_inv.swap_cols(i, j);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        a.swap_cols(i, j);
        s.v.swap_cols(i, j);
    };
    auto row_op = [&](std::size_t i, std::size_t j, const Int& c) {
        // row_i += c*row_j
        a.add_row_multiple(i, j, c);
        s.u.add_row_multiple(i, j, c);
        s.u_inv.add_col_multiple(j, i, -c);
    };
    auto col_op = [&](std::size_t i, std::size_t j, const Int& c) {
        // col_i += c*col_j
        a.add_col_multiple(i, j, c);
        s.v.add_col_multiple(i, j, c);
    };
    auto negate_row = [&](std::size_t i) {
        a.negate_row(i);
        s.u.negate_row(i);
        s.u_inv.negate_col(i);
    };

    std::size_t t = 0;
    const std::size_t lim = R < C ? R : C;
    while (t < lim) {
        // minimal |entry| pivot over the trailing block
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best = 0;
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j) {
                if (a(i, j) == 0) continue;
                Int v = int_abs(a(i, j));
                if (!found || v < best) {
                    found = true;
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        swap_rows(t, pi);
        swap_cols(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (a(i, t) == 0) continue;
                Int q = div_round_nearest(a(i, t), a(t, t));
                row_op(i, t, -q);
                if (a(i, t) != 0) {
                    // remainder strictly smaller: promote it to the pivot
                    swap_rows(t, i);
                    clean = false;
                }
            }
            if (!clean) continue;
            for (std::size_t j = t + 1; j < C; ++j) {
                if (a(t, j) == 0) continue;
                Int q = div_round_nearest(a(t, j), a(t, t));
                col_op(j, t, -q);
                if (a(t, j) != 0) {
                    swap_cols(t, j);
                    clean = false;
                }
            }
        }

        // divisibility fix: pivot must divide the rest of the block
        bool redo = false;
        for (std::size_t i = t + 1; i < R && !redo; ++i)
            for (std::size_t j = t + 1; j < C && !redo; ++j)
                if (a(i, j) % a(t, t) != 0) {
                    row_op(t, i, 1);
                    redo = true;
                }
        if (redo) continue;

        if (a(t, t) < 0) negate_row(t);
        ++t;
    }
    s.rank = t;
    return s;
}

}  // namespace detail

inline SnfResult snf(const IntMatrix& m) {
    detail::SnfFull f = detail::snf_full(m);
    // invariants are cheap at desk scale; keep them always on
    if (f.u * m * f.v != f.d) throw Error("snf: u*m*v != d");
    if (!is_unimodular(f.u) || !is_unimodular(f.v)) throw Error("snf: non-unimodular transform");
    const std::size_t lim = std::min(m.rows(), m.cols());
    for (std::size_t i = 0; i + 1 < lim; ++i) {
        if (f.d(i, i) == 0 && f.d(i + 1, i + 1) != 0) throw Error("snf: zero before nonzero");
        if (f.d(i, i) != 0 && f.d(i + 1, i + 1) % f.d(i, i) != 0)
            throw Error("snf: divisibility chain broken");
    }
    return SnfResult{f.u, f.d, f.v};
}

// Solve m*x = b repeatedly against one factorization.
class SnfSolver {
public:
    explicit SnfSolver(const IntMatrix& m) : m_(m), f_(detail::snf_full(m)) {}

    const IntMatrix& matrix() const { return m_; }
    std::size_t rank() const { return f_.rank; }

    std::optional<Vec> solve(const Vec& b) const {
        if (b.size() != m_.rows()) throw Error("solve: bad rhs length");
        Vec c = f_.u * b;
        Vec y(m_.cols(), Int(0));
        for (std::size_t i = 0; i < f_.rank; ++i) {
            if (c[i] % f_.d(i, i) != 0) return std::nullopt;
            y[i] = c[i] / f_.d(i, i);
        }
        for (std::size_t i = f_.rank; i < m_.rows(); ++i)
            if (c[i] != 0) return std::nullopt;
        return f_.v * y;
    }

    // Basis of {x : m*x = 0}, always saturated: the columns extend to a basis
    // of the ambient lattice (they are columns of a unimodular matrix).
    IntMatrix kernel() const {
        std::vector<std::size_t> idx;
        for (std::size_t j = f_.rank; j < m_.cols(); ++j) idx.push_back(j);
        return f_.v.take_cols(idx);
    }

private:
    IntMatrix m_;
    detail::SnfFull f_;
};

inline std::optional<Vec> solve_integer(const IntMatrix& m, const Vec& b) {
    return SnfSolver(m).solve(b);
}

inline IntMatrix kernel_basis(const IntMatrix& m) { return SnfSolver(m).kernel(); }

// Row-style Hermite normal form: returns H with transform*m = H, pivots
// positive, entries above each pivot reduced into [0, pivot), pivot columns
// strictly increasing. Canonical for the row lattice.
struct HnfResult {
    IntMatrix h, transform;
};

inline HnfResult row_hnf(const IntMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(R);
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        // minimal |entry| pivot in column c among rows >= r
        std::size_t best_i = r;
        bool found = false;
        Int best = 0;
        for (std::size_t i = r; i < R; ++i) {
            if (h(i, c) == 0) continue;
            Int v = int_abs(h(i, c));
            if (!found || v < best) {
                found = true;
                best = v;
                best_i = i;
            }
        }
        if (!found) continue;
        h.swap_rows(r, best_i);
        u.swap_rows(r, best_i);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = r + 1; i < R; ++i) {
                if (h(i, c) == 0) continue;
                Int q = div_round_nearest(h(i, c), h(r, c));
                h.add_row_multiple(i, r, -q);
                u.add_row_multiple(i, r, -q);
                if (h(i, c) != 0) {
                    h.swap_rows(r, i);
                    u.swap_rows(r, i);
                    clean = false;
                }
            }
        }
        if (h(r, c) < 0) {
            h.negate_row(r);
            u.negate_row(r);
        }
        // reduce entries above the pivot into [0, pivot)
        for (std::size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
            h.add_row_multiple(i, r, -q);
            u.add_row_multiple(i, r, -q);
        }
        ++r;
    }
    return HnfResult{h, u};
}

// Canonical basis of the column lattice of m (zero columns dropped).
inline IntMatrix image_basis(const IntMatrix& m) {
    IntMatrix ht = row_hnf(m.transpose()).h;
    std::vector<std::size_t> nz;
    IntMatrix h = ht.transpose();
    for (std::size_t j = 0; j < h.cols(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < h.rows(); ++i)
            if (h(i, j) != 0) {
                zero = false;
                break;
            }
        if (!zero) nz.push_back(j);
    }
    return h.take_cols(nz);
}

inline bool lattice_equal(const IntMatrix& a, const IntMatrix& b) {
    return image_basis(a) == image_basis(b);
}

inline IntMatrix inverse_unimodular(const IntMatrix& m) {
    HnfResult r = row_hnf(m);
    if (r.h != IntMatrix::identity(m.rows())) throw Error("inverse of non-unimodular matrix");
    return r.transform;
}

// For a saturated sublattice given by basis columns n, a complement c such
// that [n | c] is a basis of the ambient lattice.
inline IntMatrix saturation_complement(const IntMatrix& n) {
    detail::SnfFull f = detail::snf_full(n);
    if (f.rank != n.cols()) throw Error("saturation_complement: columns not independent");
    for (std::size_t i = 0; i < f.rank; ++i)
        if (f.d(i, i) != 1) throw Error("saturation_complement: lattice not saturated");
    std::vector<std::size_t> idx;
    for (std::size_t j = n.cols(); j < n.rows(); ++j) idx.push_back(j);
    return f.u_inv.take_cols(idx);
}

}  // namespace graphjac
