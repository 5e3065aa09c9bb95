// Test-side oracles kept independent of the solver code paths they check:
// brute-force vertex enumeration over basis subsets, and random instance
// generators whose convex order holds by construction.
#pragma once

#include "motpaver/linprog.hpp"
#include "motpaver/measures.hpp"

#include <random>
#include <set>
#include <vector>

namespace oracles {

using motpaver::DiscreteMeasure;
using motpaver::LinearProgram;
using motpaver::Numerics;
using motpaver::Rational;
using motpaver::Vec;

using R = Rational;
using Matrix = std::vector<std::vector<R>>;

inline Matrix dense_rows(const LinearProgram<R>& lp) {
    Matrix A(lp.num_rows(), std::vector<R>(lp.num_vars, R(0)));
    for (const auto& e : lp.entries) A[e.row][e.col] += e.value;
    return A;
}

// Gaussian elimination on [A | b]; returns rank, leaves the system reduced.
inline int reduce(Matrix& M) {
    const int rows = static_cast<int>(M.size());
    const int cols = rows ? static_cast<int>(M[0].size()) : 0;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (M[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || M[r][c] == 0) continue;
            R f = M[r][c] / M[rank][c];
            for (int k = c; k < cols; ++k)
                if (M[rank][k] != 0) M[r][k] -= f * M[rank][k];
            M[r][c] = R(0);
        }
        ++rank;
    }
    return rank;
}

// All vertices of {x >= 0 : Ax = b} for an equality-only program, by solving
// every full-rank column subset. Exponential, fine at test scale.
inline std::vector<std::vector<R>> enumerate_vertices(const LinearProgram<R>& lp) {
    const int n = lp.num_vars;
    Matrix A = dense_rows(lp);
    Matrix probe = A;
    const int rank = reduce(probe);

    std::vector<std::vector<R>> out;
    std::vector<int> subset(rank);
    auto try_subset = [&]() {
        const int m = lp.num_rows();
        Matrix M(m, std::vector<R>(rank + 1, R(0)));
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < rank; ++c) M[r][c] = A[r][subset[c]];
            M[r][rank] = lp.rhs[r];
        }
        // column rank must equal `rank`, and the system must be consistent
        Matrix W = M;
        int wr = reduce(W);
        for (const auto& row : W) {
            bool zero_lhs = true;
            for (int c = 0; c < rank; ++c)
                if (row[c] != 0) zero_lhs = false;
            if (zero_lhs && row[rank] != 0) return;  // inconsistent
        }
        int lhs_rank = 0;
        {
            Matrix L(m, std::vector<R>(rank, R(0)));
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < rank; ++c) L[r][c] = M[r][c];
            lhs_rank = reduce(L);
        }
        if (lhs_rank < rank) return;  // not a basis
        (void)wr;
        // back-substitute from the reduced form
        std::vector<R> xs(rank, R(0));
        for (const auto& row : W) {
            int lead = -1;
            for (int c = 0; c < rank; ++c)
                if (row[c] != 0) {
                    lead = c;
                    break;
                }
            if (lead < 0) continue;
            R v = row[rank];
            for (int c = lead + 1; c < rank; ++c) v -= row[c] * xs[c];
            xs[lead] = v / row[lead];
        }
        // recompute in order (reduced form is fully eliminated, so direct)
        for (int c = 0; c < rank; ++c)
            if (xs[c] < 0) return;
        std::vector<R> x(n, R(0));
        for (int c = 0; c < rank; ++c) x[subset[c]] = xs[c];
        // verify Ax = b outright
        for (int r = 0; r < lp.num_rows(); ++r) {
            R lhs(0);
            for (int j = 0; j < n; ++j)
                if (A[r][j] != 0 && x[j] != 0) lhs += A[r][j] * x[j];
            if (lhs != lp.rhs[r]) return;
        }
        for (const auto& seen : out)
            if (seen == x) return;
        out.push_back(std::move(x));
    };

    // iterate over all rank-subsets of columns
    std::vector<int> idx(rank);
    for (int i = 0; i < rank; ++i) idx[i] = i;
    if (rank == 0) return out;
    for (;;) {
        subset = idx;
        try_subset();
        int i = rank - 1;
        while (i >= 0 && idx[i] == n - rank + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < rank; ++k) idx[k] = idx[k - 1] + 1;
    }
    return out;
}

inline R max_over_vertices(const std::vector<std::vector<R>>& verts, const std::vector<R>& obj) {
    R best(0);
    bool first = true;
    for (const auto& v : verts) {
        R val(0);
        for (std::size_t j = 0; j < obj.size(); ++j)
            if (obj[j] != 0 && v[j] != 0) val += obj[j] * v[j];
        if (first || val > best) {
            best = val;
            first = false;
        }
    }
    return best;
}

/// Random rational instances in convex order by construction: nu has distinct
/// integer-grid atoms, mu sits at conditional means of a random kernel, so the
/// kernel itself is a feasible martingale coupling.
struct InstanceGen {
    std::mt19937 rng;
    explicit InstanceGen(unsigned seed) : rng(seed) {}

    DiscreteMeasure<R> random_target(int d, int max_atoms, int span = 6) {
        static const auto EX = Numerics<R>::exact();
        std::uniform_int_distribution<int> n_atoms(std::min(2, max_atoms), max_atoms);
        std::uniform_int_distribution<int> coord(-span, span), wt(1, 8);
        int n = n_atoms(rng);
        std::set<std::vector<int>> used;
        std::vector<Vec<R>> atoms;
        std::vector<R> w;
        R total(0);
        while (static_cast<int>(atoms.size()) < n) {
            std::vector<int> raw(d);
            for (auto& c : raw) c = coord(rng);
            if (!used.insert(raw).second) continue;
            Vec<R> a(d);
            for (int k = 0; k < d; ++k) a[k] = R(raw[k]);
            atoms.push_back(a);
            w.push_back(R(wt(rng)));
            total += w.back();
        }
        for (auto& v : w) v /= total;
        return make_measure<R>(d, atoms, w, EX);
    }

    DiscreteMeasure<R> contracted(const DiscreteMeasure<R>& nu, int groups) {
        static const auto EX = Numerics<R>::exact();
        std::uniform_int_distribution<int> pick(0, groups - 1);
        const int d = nu.dim;
        std::vector<R> mass(groups, R(0));
        std::vector<Vec<R>> moment(groups, Vec<R>(d, R(0)));
        for (int j = 0; j < nu.size(); ++j) {
            int g = pick(rng);
            mass[g] += nu.weights[j];
            for (int k = 0; k < d; ++k) moment[g][k] += nu.weights[j] * nu.atoms[j][k];
        }
        std::vector<Vec<R>> atoms;
        std::vector<R> w;
        for (int g = 0; g < groups; ++g)
            if (mass[g] != 0) {
                Vec<R> a(d);
                for (int k = 0; k < d; ++k) a[k] = moment[g][k] / mass[g];
                atoms.push_back(a);
                w.push_back(mass[g]);
            }
        return make_measure<R>(d, atoms, w, EX);
    }

    std::pair<DiscreteMeasure<R>, DiscreteMeasure<R>> ordered_pair(int d, int mu_max, int nu_max) {
        auto nu = random_target(d, nu_max);
        std::uniform_int_distribution<int> groups(1, mu_max);
        auto mu = contracted(nu, groups(rng));
        return {mu, nu};
    }

    std::vector<std::vector<R>> random_cost(int m, int n, int lo = 0, int hi = 6) {
        std::uniform_int_distribution<int> val(lo, hi), den(1, 4);
        std::vector<std::vector<R>> c(m, std::vector<R>(n));
        for (auto& row : c)
            for (auto& v : row) v = R(val(rng)) / den(rng);
        return c;
    }
};

}  // namespace oracles
