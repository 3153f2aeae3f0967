#pragma once

#include <algorithm>
#include <cassert>
#include <limits>
#include <string>
#include <vector>

#include "betafam/ring.hpp"
#include "betafam/smith.hpp"

namespace betafam {

/* A basis slot of a presented slice.  `mono` is the underlying monomial,
 * `pow3` the accumulated divisibility (the slot generates 3^pow3 · mono
 * inside the ambient E2 lattice), `boundary` marks classes of the form
 * ∂(mono) coming from the fibre-sequence boundary, `bracket` marks survivor
 * names promoted to homotopy generators, `mixed` flags a generator whose
 * cycle representative has lower-order terms beyond the leading monomial. */
struct Label {
    Monomial mono;
    int pow3 = 0;
    bool boundary = false;
    bool bracket = false;
    bool mixed = false;

    enum class Color { Blue, Red, Yellow };
    Color color() const {
        if (!boundary) return Color::Blue;
        return mono.is_torsion() ? Color::Red : Color::Yellow;
    }

    std::string str() const {
        std::string core = boundary ? "∂(" + mono.str() + ")" : mono.str();
        std::string out;
        if (pow3 == 1)
            out = "3·" + core;
        else if (pow3 >= 2)
            out = "3^" + std::to_string(pow3) + "·" + core;
        else
            out = core;
        if (bracket) {
            /* survivor names render compactly: [3Δ], [c4Δ^2], [αΔ] */
            std::string inner = mono.str(true);
            if (pow3 > 0) inner = LocalInt::prime_power(pow3).str() + inner;
            out = "[" + inner + "]";
        }
        if (mixed) out += "+…";
        return out;
    }
    friend bool operator==(const Label&, const Label&) = default;
};

/* Invariant-factor shape of a finitely generated module over Z_(3). */
struct Shape {
    int free_rank = 0;
    std::vector<int> torsion; /* exponents e with a Z/3^e summand, ascending */
    int torsion_length() const {
        int t = 0;
        for (int e : torsion) t += e;
        return t;
    }
    friend bool operator==(const Shape&, const Shape&) = default;
    std::string str() const {
        std::string out = "Z^" + std::to_string(free_rank);
        for (int e : torsion) out += " + Z/3^" + std::to_string(e);
        return out;
    }
};

/* One bidegree of a bigraded module: labeled generators and a relation
 * lattice among them. */
struct Slice {
    std::vector<Label> labels;
    Mat rels; /* labels.size() x (#relations) */

    int n() const { return static_cast<int>(labels.size()); }
    Shape shape() const {
        Shape sh;
        if (n() == 0) return sh;
        Smith s = smith_normal_form(rels);
        sh.free_rank = n() - s.rank;
        for (int e : s.exponents)
            if (e > 0) sh.torsion.push_back(e);
        std::sort(sh.torsion.begin(), sh.torsion.end());
        return sh;
    }
    bool is_zero() const {
        Shape sh = shape();
        return sh.free_rank == 0 && sh.torsion.empty();
    }
    /* v is zero in the module iff it lies in the relation lattice */
    bool vanishes(const Vec& v) const { return in_span(rels, v); }

    static Slice free_slice(std::vector<Label> ls) {
        Slice s;
        s.rels = Mat(ls.size(), 0);
        s.labels = std::move(ls);
        return s;
    }
};

/* Canonical column form over Z_(3): every surviving column has a pivot row
 * where its entry is a plain power of 3 and all other columns vanish, and
 * columns are ordered by pivot row.  Dependent input columns are cleared by
 * the sweep and dropped, so the result is a basis of the column span. */
inline Mat hermite_columns(Mat C) {
    const int rows = static_cast<int>(C.rows()), cols = static_cast<int>(C.cols());
    std::vector<int> pivot_row(cols, -1);
    for (int i = 0; i < rows; ++i) {
        int best = -1, bestv = std::numeric_limits<int>::max();
        for (int j = 0; j < cols; ++j) {
            if (pivot_row[j] >= 0 || C(i, j).is_zero()) continue;
            int v = C(i, j).valuation();
            if (v < bestv) bestv = v, best = j;
        }
        if (best < 0) continue;
        LocalInt u = C(i, best).unit_part();
        if (u != LocalInt(1)) C.col(best) *= u.inverse();
        for (int j = 0; j < cols; ++j) {
            if (j == best || C(i, j).is_zero()) continue;
            if (C(i, j).valuation() >= bestv) {
                LocalInt f = C(i, j).div_exact(C(i, best));
                C.col(j) -= f * C.col(best);
            }
        }
        pivot_row[best] = i;
    }
    std::vector<int> order;
    for (int j = 0; j < cols; ++j) {
        if (pivot_row[j] < 0) {
            /* a column without a pivot was fully cleared by earlier sweeps */
            for (int i = 0; i < rows; ++i) assert(C(i, j).is_zero());
            continue;
        }
        order.push_back(j);
    }
    std::sort(order.begin(), order.end(), [&](int x, int y) { return pivot_row[x] < pivot_row[y]; });
    Mat out(rows, order.size());
    for (size_t j = 0; j < order.size(); ++j) out.col(j) = C.col(order[j]);
    return out;
}

inline int pivot_row_of(const Mat& C, int j, int* valuation_out) {
    int best = -1, bestv = std::numeric_limits<int>::max();
    for (int i = 0; i < C.rows(); ++i) {
        if (C(i, j).is_zero()) continue;
        int v = C(i, j).valuation();
        if (v < bestv) bestv = v, best = i;
    }
    if (valuation_out) *valuation_out = bestv;
    return best;
}

/* Labels for a canonicalised generator matrix: each column is named by its
 * pivot slot with the pivot's 3-valuation added to pow3. */
inline std::vector<Label> derive_labels(const Mat& C, const std::vector<Label>& old) {
    std::vector<Label> out;
    for (int j = 0; j < C.cols(); ++j) {
        int v = 0;
        int i = pivot_row_of(C, j, &v);
        assert(i >= 0);
        Label l = old[i];
        l.pow3 += v;
        int nonzeros = 0;
        for (int r = 0; r < C.rows(); ++r)
            if (!C(r, j).is_zero()) ++nonzeros;
        l.mixed = l.mixed || nonzeros > 1;
        out.push_back(l);
    }
    return out;
}

/* Strip generators forced to zero by a unit relation, keeping the rest of
 * the presentation intact.  Returns the indices of surviving generators. */
inline std::vector<int> minimalize(Slice& s) {
    std::vector<int> all(s.n());
    for (int i = 0; i < s.n(); ++i) all[i] = i;
    if (s.n() == 0) return all;
    /* drop zero relation columns first */
    {
        std::vector<int> keep;
        for (int j = 0; j < s.rels.cols(); ++j) {
            bool nz = false;
            for (int i = 0; i < s.rels.rows(); ++i)
                if (!s.rels(i, j).is_zero()) nz = true;
            if (nz) keep.push_back(j);
        }
        Mat R(s.rels.rows(), keep.size());
        for (size_t j = 0; j < keep.size(); ++j) R.col(j) = s.rels.col(keep[j]);
        s.rels = R;
    }
    if (s.rels.cols() == 0) return all;
    Mat H = hermite_columns(s.rels);
    std::vector<bool> dead_row(s.n(), false), dead_col(H.cols(), false);
    for (int j = 0; j < H.cols(); ++j) {
        int v = 0;
        int i = pivot_row_of(H, j, &v);
        if (v == 0) {
            /* unit pivot: generator i is zero; hermite cleared row i elsewhere */
            dead_row[i] = true;
            dead_col[j] = true;
        }
    }
    std::vector<int> rows, cols;
    for (int i = 0; i < s.n(); ++i)
        if (!dead_row[i]) rows.push_back(i);
    for (int j = 0; j < H.cols(); ++j)
        if (!dead_col[j]) cols.push_back(j);
    Mat R(rows.size(), cols.size());
    std::vector<Label> ls;
    for (size_t i = 0; i < rows.size(); ++i) ls.push_back(s.labels[rows[i]]);
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < rows.size(); ++i) R(i, j) = H(rows[i], cols[j]);
    s.labels = std::move(ls);
    s.rels = std::move(R);
    return rows;
}

/* Prune the columns of `coords` to the surviving generators of a
 * minimalized slice. */
inline Mat select_columns(const Mat& coords, const std::vector<int>& keep) {
    Mat out(coords.rows(), keep.size());
    for (size_t j = 0; j < keep.size(); ++j) out.col(j) = coords.col(keep[j]);
    return out;
}

/* Homology of  src --d_in--> M --d_out--> tgt  at M.
 * Returns the subquotient with re-derived labels plus the cycle matrix
 * expressing each new generator in M's coordinates. */
struct Homology {
    Slice H;
    Mat cycles; /* M.n x H.n, column j represents H.labels[j] */
};

inline Homology homology(const Slice& M, const Mat& d_in, const Slice& tgt, const Mat& d_out) {
    Homology out;
    if (M.n() == 0) {
        out.cycles = Mat(0, 0);
        return out;
    }
    assert(d_out.cols() == M.n());
    assert(d_in.rows() == M.n() || d_in.cols() == 0);

    Mat Z;
    if (d_out.rows() == 0) {
        Z = Mat::Identity(M.n(), M.n());
    } else {
        Z = hermite_columns(preimage_lattice(d_out, tgt.rels));
    }

    Mat B(M.n(), d_in.cols() + M.rels.cols());
    if (d_in.cols() > 0) B.leftCols(d_in.cols()) = d_in;
    B.rightCols(M.rels.cols()) = M.rels;

    Mat X;
    bool ok = solve_columns(Z, B, &X);
    assert(ok && "boundaries not contained in cycles (d∘d ≠ 0?)");

    out.H.labels = derive_labels(Z, M.labels);
    out.H.rels = X;
    std::vector<int> keep = minimalize(out.H);
    out.cycles = select_columns(Z, keep);
    return out;
}

/* Kernel and cokernel of a map of presented slices, with the cokernel's
 * generators optionally tagged as boundary classes ∂(x). */
struct KernelCokernel {
    Slice kernel;
    Mat kernel_cycles; /* src coords of kernel generators */
    Slice cokernel;
};

inline KernelCokernel kernel_cokernel(const Mat& F, const Slice& src, const Slice& tgt,
                                      bool tag_boundary = false) {
    KernelCokernel out;
    assert(F.rows() == tgt.n() && F.cols() == src.n());

    if (src.n() > 0) {
        Mat Z = tgt.n() == 0 ? Mat(Mat::Identity(src.n(), src.n()))
                             : hermite_columns(preimage_lattice(F, tgt.rels));
        Mat X;
        bool ok = solve_columns(Z, src.rels, &X);
        assert(ok && "relations are always cycles");
        out.kernel.labels = derive_labels(Z, src.labels);
        out.kernel.rels = X;
        std::vector<int> keep = minimalize(out.kernel);
        out.kernel_cycles = select_columns(Z, keep);
    } else {
        out.kernel_cycles = Mat(0, 0);
    }

    out.cokernel.labels = tgt.labels;
    if (tag_boundary)
        for (Label& l : out.cokernel.labels) l.boundary = true;
    out.cokernel.rels = Mat(tgt.n(), F.cols() + tgt.rels.cols());
    if (tgt.n() > 0) {
        out.cokernel.rels.leftCols(F.cols()) = F;
        out.cokernel.rels.rightCols(tgt.rels.cols()) = tgt.rels;
    }
    minimalize(out.cokernel);
    return out;
}

}  // namespace betafam
