#pragma once

#include "motpaver/linprog.hpp"
#include "motpaver/measures.hpp"

#include <algorithm>
#include <vector>

namespace motpaver {

/// Affine subspace of R^d in base-point/direction form. The basis vectors are
/// kept in row-echelon order (pivot columns strictly increasing in exact mode).
template <class T>
struct AffineSubspace {
    Vec<T> base;
    std::vector<Vec<T>> basis;
    std::vector<int> pivots;  // pivot coordinate of each basis vector
    int dim = 0;

    int ambient() const { return static_cast<int>(base.size()); }
};

namespace detail {

// Reduces v against echelon rows; returns the residual.
template <class T>
Vec<T> eliminate(Vec<T> v, const std::vector<Vec<T>>& rows, const std::vector<int>& pivots) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int p = pivots[r];
        if (v[p] == 0) continue;
        T f = v[p] / rows[r][p];
        for (std::size_t k = 0; k < v.size(); ++k)
            if (rows[r][k] != 0) v[k] -= f * rows[r][k];
        v[p] = T(0);
    }
    return v;
}

template <class T>
int residual_pivot(const Vec<T>& v, const Numerics<T>& num) {
    if constexpr (is_exact_v<T>) {
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] != 0) return static_cast<int>(k);
        return -1;
    } else {
        int best = -1;
        T mag(0);
        for (std::size_t k = 0; k < v.size(); ++k) {
            T a = std::abs(v[k]);
            if (a > mag) {
                mag = a;
                best = static_cast<int>(k);
            }
        }
        return num.is_zero(mag) ? -1 : best;
    }
}

}  // namespace detail

template <class T>
AffineSubspace<T> affine_hull(const std::vector<Vec<T>>& points, const Numerics<T>& num) {
    if (points.empty()) throw std::invalid_argument("affine_hull of empty set");
    AffineSubspace<T> s;
    s.base = points[0];
    for (std::size_t i = 1; i < points.size(); ++i) {
        Vec<T> v = detail::eliminate(sub(points[i], s.base), s.basis, s.pivots);
        int p = detail::residual_pivot(v, num);
        if (p >= 0) {
            s.basis.push_back(std::move(v));
            s.pivots.push_back(p);
        }
    }
    s.dim = static_cast<int>(s.basis.size());
    return s;
}

template <class T>
bool affine_contains(const AffineSubspace<T>& s, const Vec<T>& x, const Numerics<T>& num) {
    Vec<T> r = detail::eliminate(sub(x, s.base), s.basis, s.pivots);
    return detail::residual_pivot(r, num) < 0;
}

/// Orthogonal projection of a vector onto the direction space of the
/// subspace, via the normal equations over the (not necessarily orthogonal)
/// basis.
template <class T>
Vec<T> project_direction(const AffineSubspace<T>& s, const Vec<T>& v) {
    const int k = s.dim;
    Vec<T> out(v.size(), T(0));
    if (k == 0) return out;
    std::vector<std::vector<T>> M(k, std::vector<T>(k + 1, T(0)));
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) M[a][b] = dot(s.basis[a], s.basis[b]);
        M[a][k] = dot(s.basis[a], v);
    }
    // Gram matrix of an independent family is invertible; plain elimination
    for (int c = 0; c < k; ++c) {
        int piv = c;
        if constexpr (!is_exact_v<T>) {
            for (int r = c + 1; r < k; ++r)
                if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
        } else {
            while (M[piv][c] == 0) ++piv;
        }
        std::swap(M[c], M[piv]);
        for (int r = 0; r < k; ++r) {
            if (r == c || M[r][c] == 0) continue;
            T f = M[r][c] / M[c][c];
            for (int j = c; j <= k; ++j)
                if (M[c][j] != 0) M[r][j] -= f * M[c][j];
            M[r][c] = T(0);
        }
    }
    for (int a = 0; a < k; ++a) {
        T coef = M[a][k] / M[a][a];
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += coef * s.basis[a][j];
    }
    return out;
}

/// Polytope in V-representation: generating points plus their affine hull.
/// Relative-interior semantics are supplied by the predicates below, never by
/// facet enumeration.
template <class T>
struct Polytope {
    std::vector<Vec<T>> gens;
    AffineSubspace<T> hull;
    int dim = 0;
};

template <class T>
Polytope<T> make_polytope(const std::vector<Vec<T>>& points, const Numerics<T>& num) {
    if (points.empty()) throw std::invalid_argument("polytope needs generating points");
    Polytope<T> P;
    for (const auto& p : points) {
        bool dup = false;
        for (const auto& q : P.gens)
            if (vec_eq(p, q, num)) {
                dup = true;
                break;
            }
        if (!dup) P.gens.push_back(p);
    }
    P.hull = affine_hull(P.gens, num);
    P.dim = P.hull.dim;
    return P;
}

namespace detail {

// max eps s.t. x = sum lambda_s s, sum lambda = 1, lambda_s >= eps, written
// with lambda = m + eps, m >= 0. Additional generator blocks share eps.
template <class T>
struct RiProgram {
    LinearProgram<T> lp;
    int eps = -1;

    explicit RiProgram(int ambient) {
        eps = lp.add_var(T(1), /*free=*/true);
        for (int k = 0; k < ambient; ++k) lp.add_row(RowSense::EQ, T(0));
    }
    // rows [block_offset, block_offset+ambient) carry the point equations,
    // row block uses its own convexity row appended by caller
    void add_block(const std::vector<Vec<T>>& gens, const Vec<T>* target, int ambient, T sign) {
        int conv_row = lp.add_row(RowSense::EQ, T(1));
        Vec<T> gsum(ambient, T(0));
        for (const auto& g : gens) {
            int v = lp.add_var(T(0));
            for (int k = 0; k < ambient; ++k)
                if (g[k] != 0) lp.set(k, v, sign * g[k]);
            lp.set(conv_row, v, T(1));
            for (int k = 0; k < ambient; ++k) gsum[k] += g[k];
        }
        for (int k = 0; k < ambient; ++k)
            if (gsum[k] != 0) lp.set(k, eps, sign * gsum[k]);
        lp.set(conv_row, eps, T(static_cast<int>(gens.size())));
        if (target)
            for (int k = 0; k < ambient; ++k) lp.rhs[k] += sign * (*target)[k];
    }
};

}  // namespace detail

/// x in ri conv(gens), decided by LP: the optimum of max eps over
/// x = sum lambda_s s, sum lambda = 1, lambda_s >= eps is positive exactly
/// when x is a strictly positive convex combination of all generators.
template <class T>
bool ri_contains(const Polytope<T>& P, const Vec<T>& x, const Numerics<T>& num) {
    const int d = static_cast<int>(x.size());
    detail::RiProgram<T> prog(d);
    prog.add_block(P.gens, &x, d, T(1));
    typename Simplex<T>::Options opt;
    opt.num = num;
    auto sol = solve(prog.lp, opt);
    return sol.status == LPStatus::Optimal && num.is_pos(sol.objective);
}

/// ri conv(P1) intersects ri conv(P2): joint positive-combination LP.
template <class T>
bool ri_intersects(const Polytope<T>& P1, const Polytope<T>& P2, const Numerics<T>& num) {
    const int d = P1.hull.ambient();
    if (d != P2.hull.ambient()) throw std::invalid_argument("ambient dimension mismatch");
    detail::RiProgram<T> prog(d);
    prog.add_block(P1.gens, nullptr, d, T(1));
    prog.add_block(P2.gens, nullptr, d, T(-1));
    typename Simplex<T>::Options opt;
    opt.num = num;
    auto sol = solve(prog.lp, opt);
    return sol.status == LPStatus::Optimal && num.is_pos(sol.objective);
}

/// x in conv(gens): plain feasibility LP.
template <class T>
bool closure_contains(const Polytope<T>& P, const Vec<T>& x, const Numerics<T>& num) {
    const int d = static_cast<int>(x.size());
    LinearProgram<T> lp;
    for (std::size_t s = 0; s < P.gens.size(); ++s) lp.add_var(T(0));
    for (int k = 0; k < d; ++k) {
        lp.add_row(RowSense::EQ, x[k]);
        for (std::size_t s = 0; s < P.gens.size(); ++s)
            if (P.gens[s][k] != 0) lp.set(k, static_cast<int>(s), P.gens[s][k]);
    }
    int conv_row = lp.add_row(RowSense::EQ, T(1));
    for (std::size_t s = 0; s < P.gens.size(); ++s) lp.set(conv_row, static_cast<int>(s), T(1));
    typename Simplex<T>::Options opt;
    opt.num = num;
    Simplex<T> sx(lp, opt);
    return sx.feasible();
}

/// Set equality of conv(P1) and conv(P2): mutual membership of all
/// generators plus equal dimension.
template <class T>
bool hull_equal(const Polytope<T>& P1, const Polytope<T>& P2, const Numerics<T>& num) {
    if (P1.dim != P2.dim) return false;
    for (const auto& g : P1.gens)
        if (!closure_contains(P2, g, num)) return false;
    for (const auto& g : P2.gens)
        if (!closure_contains(P1, g, num)) return false;
    return true;
}

/// Irredundant vertex list, sorted lexicographically: a generator is a vertex
/// iff it is outside the hull of the remaining generators.
template <class T>
std::vector<Vec<T>> vertices(const Polytope<T>& P, const Numerics<T>& num) {
    std::vector<Vec<T>> out;
    if (P.gens.size() == 1) return P.gens;
    for (std::size_t i = 0; i < P.gens.size(); ++i) {
        std::vector<Vec<T>> rest;
        for (std::size_t j = 0; j < P.gens.size(); ++j)
            if (j != i) rest.push_back(P.gens[j]);
        Polytope<T> Q;
        Q.gens = std::move(rest);
        if (!closure_contains(Q, P.gens[i], num)) out.push_back(P.gens[i]);
    }
    std::sort(out.begin(), out.end(),
              [](const Vec<T>& a, const Vec<T>& b) { return a < b; });
    return out;
}

}  // namespace motpaver
