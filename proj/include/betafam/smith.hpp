#pragma once

#include <Eigen/Core>
#include <cassert>
#include <vector>

#include "betafam/localint.hpp"
#include "betafam/util.hpp"

namespace betafam {

/* Smith normal form over the local ring Z_(p).  Every nonzero element is
 * p^v * unit, so a single sweep with a minimal-valuation pivot produces a
 * diagonal of prime powers with non-decreasing exponents: after clearing with
 * the minimal-valuation pivot, every remaining entry still has valuation >=
 * the pivot's, so no second pass is ever needed. */
struct Smith {
    Mat U, D, V;     /* U * A * V = D, with U, V invertible over Z_(p) */
    Mat Uinv, Vinv;  /* tracked alongside; A = Uinv * D * Vinv */
    int rank = 0;
    std::vector<int> exponents;  /* D(i,i) = p^exponents[i], i < rank */
};

inline Smith smith_normal_form(const Mat& A) {
    const int rows = static_cast<int>(A.rows()), cols = static_cast<int>(A.cols());
    Smith s;
    s.D = A;
    s.U = Mat::Identity(rows, rows);
    s.Uinv = Mat::Identity(rows, rows);
    s.V = Mat::Identity(cols, cols);
    s.Vinv = Mat::Identity(cols, cols);

    int t = 0;
    while (t < rows && t < cols) {
        /* pivot = entry of minimal valuation in the trailing submatrix */
        int pi = -1, pj = -1, pv = std::numeric_limits<int>::max();
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                if (s.D(i, j).is_zero()) continue;
                int v = s.D(i, j).valuation();
                if (v < pv) pv = v, pi = i, pj = j;
            }
        if (pi < 0) break;

        if (pi != t) {
            s.D.row(t).swap(s.D.row(pi));
            s.U.row(t).swap(s.U.row(pi));
            s.Uinv.col(t).swap(s.Uinv.col(pi));
        }
        if (pj != t) {
            s.D.col(t).swap(s.D.col(pj));
            s.V.col(t).swap(s.V.col(pj));
            s.Vinv.row(t).swap(s.Vinv.row(pj));
        }

        /* clear column t below the pivot, then row t right of it */
        for (int i = t + 1; i < rows; ++i) {
            if (s.D(i, t).is_zero()) continue;
            LocalInt f = s.D(i, t).div_exact(s.D(t, t));
            s.D.row(i) -= f * s.D.row(t);
            s.U.row(i) -= f * s.U.row(t);
            s.Uinv.col(t) += f * s.Uinv.col(i);
        }
        for (int j = t + 1; j < cols; ++j) {
            if (s.D(t, j).is_zero()) continue;
            LocalInt f = s.D(t, j).div_exact(s.D(t, t));
            s.D.col(j) -= f * s.D.col(t);
            s.V.col(j) -= f * s.V.col(t);
            s.Vinv.row(t) += f * s.Vinv.row(j);
        }

        /* normalise the pivot to a plain prime power */
        LocalInt u = s.D(t, t).unit_part();
#ifdef BETAFAM_SNF_DEBUG
        std::cerr << "t=" << t << " pivot=" << s.D(t, t) << " u=" << u << "\n";
#endif
        if (u != LocalInt(1)) {
            LocalInt ui = u.inverse();
            s.D.row(t) *= ui;
            s.U.row(t) *= ui;
            s.Uinv.col(t) *= u;
        }
        s.exponents.push_back(pv);
        ++t;
    }
    s.rank = t;
    return s;
}

/* Basis of {x : A x = 0}, as matrix columns.  The kernel of a map of free
 * modules over Z_(p) is a direct summand, and the trailing columns of V give
 * a basis for it. */
inline Mat kernel_basis(const Mat& A) {
    Smith s = smith_normal_form(A);
    const int n = static_cast<int>(A.cols());
    return s.V.rightCols(n - s.rank);
}

/* Basis of the column span of A as a lattice (submodule of the ambient free
 * module): the first `rank` columns of Uinv, scaled by the diagonal. */
inline Mat image_lattice(const Mat& A) {
    Smith s = smith_normal_form(A);
    Mat L = s.Uinv.leftCols(s.rank);
    for (int i = 0; i < s.rank; ++i) L.col(i) *= s.D(i, i);
    return L;
}

/* Solve A x = b over Z_(p).  Returns false when b is outside the column
 * span (including the case where the division would leave the ring). */
inline bool solve_in_lattice(const Smith& s, const Vec& b, Vec* x_out) {
    Vec c = s.U * b;
    const int rows = static_cast<int>(s.U.rows()), cols = static_cast<int>(s.V.rows());
    Vec y = Vec::Constant(cols, LocalInt(0));
    for (int i = 0; i < rows; ++i) {
        if (i < s.rank) {
            if (c(i).is_zero()) continue;
            if (c(i).valuation() < s.exponents[i]) return false;
            y(i) = c(i).div_exact(s.D(i, i));
        } else if (!c(i).is_zero()) {
            return false;
        }
    }
    if (x_out) *x_out = s.V * y;
    return true;
}

inline bool solve_in_lattice(const Mat& A, const Vec& b, Vec* x_out = nullptr) {
    Smith s = smith_normal_form(A);
    return solve_in_lattice(s, b, x_out);
}

inline bool in_span(const Mat& A, const Vec& b) { return solve_in_lattice(A, b, nullptr); }

/* Solve A X = B column-by-column; false when any column fails. */
inline bool solve_columns(const Mat& A, const Mat& B, Mat* X_out) {
    Smith s = smith_normal_form(A);
    Mat X(A.cols(), B.cols());
    for (int j = 0; j < B.cols(); ++j) {
        Vec x;
        if (!solve_in_lattice(s, Vec(B.col(j)), &x)) return false;
        X.col(j) = x;
    }
    if (X_out) *X_out = X;
    return true;
}

/* Basis for {x : A x in span(L)}: project the kernel of [A | -L] onto the
 * x-block and take a lattice basis of the projection. */
inline Mat preimage_lattice(const Mat& A, const Mat& L) {
    const int n = static_cast<int>(A.cols());
    Mat blocked(A.rows(), n + L.cols());
    blocked.leftCols(n) = A;
    blocked.rightCols(L.cols()) = -L;
    Mat K = kernel_basis(blocked);
    Mat P = K.topRows(n);
    return image_lattice(P);
}

/* Cokernel of A inside the ambient free module: invariant factors p^e
 * (e > 0 only; unit factors are trivial) plus the free rank. */
struct CokernelShape {
    std::vector<int> torsion_exponents;
    int free_rank = 0;
};

inline CokernelShape cokernel_shape(const Mat& A) {
    Smith s = smith_normal_form(A);
    CokernelShape c;
    for (int e : s.exponents)
        if (e > 0) c.torsion_exponents.push_back(e);
    c.free_rank = static_cast<int>(A.rows()) - s.rank;
    return c;
}

}  // namespace betafam
