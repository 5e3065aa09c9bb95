#pragma once

#include "motpaver/measures.hpp"
#include "motpaver/transport.hpp"

#include <vector>

namespace motpaver {

/// Planar instance with two triangular components: three mu-atoms, five
/// nu-atoms. extreme1/extreme2 are two vertices of the coupling polytope;
/// extreme2 concentrates on the support that the indicator costs below care
/// about. Indices name the atoms in construction order.
struct TwoTrianglesInstance {
    DiscreteMeasure<Rational> mu, nu;
    int x0 = 0, x1 = 1, xm1 = 2;
    int ym2 = 0, y2 = 1, y0 = 2, y1 = 3, ym1 = 4;
    std::vector<std::vector<Rational>> extreme1, extreme2;
};

inline TwoTrianglesInstance two_triangles_instance() {
    using R = Rational;
    const auto num = Numerics<R>::exact();
    TwoTrianglesInstance g;
    auto p = [](R a, R b) { return Vec<R>{a, b}; };
    g.mu = make_measure<R>(2, {p(-1, 0), p(R(1) / 2, R(1) / 2), p(R(1) / 2, R(-1) / 2)},
                           {R(1) / 3, R(1) / 3, R(1) / 3}, num);
    g.nu = make_measure<R>(2, {p(-2, 0), p(2, 0), p(0, 0), p(0, 1), p(0, -1)},
                           {R(1) / 6, R(1) / 6, R(1) / 6, R(1) / 4, R(1) / 4}, num);
    g.extreme1.assign(3, std::vector<R>(5, R(0)));
    g.extreme2.assign(3, std::vector<R>(5, R(0)));
    auto& P1 = g.extreme1;
    auto& P2 = g.extreme2;
    P1[g.x0][g.ym2] = R(1) / 6;
    P1[g.x0][g.y0] = R(1) / 6;
    P1[g.x1][g.y2] = R(1) / 12;
    P1[g.x1][g.y1] = R(5) / 24;
    P1[g.x1][g.ym1] = R(1) / 24;
    P1[g.xm1][g.y2] = R(1) / 12;
    P1[g.xm1][g.ym1] = R(5) / 24;
    P1[g.xm1][g.y1] = R(1) / 24;
    P2[g.x0][g.ym2] = R(1) / 6;
    P2[g.x0][g.y1] = R(1) / 12;
    P2[g.x0][g.ym1] = R(1) / 12;
    P2[g.x1][g.y1] = R(1) / 6;
    P2[g.x1][g.y0] = R(1) / 12;
    P2[g.x1][g.y2] = R(1) / 12;
    P2[g.xm1][g.ym1] = R(1) / 6;
    P2[g.xm1][g.y0] = R(1) / 12;
    P2[g.xm1][g.y2] = R(1) / 12;
    return g;
}

/// One-dimensional instance: mu uniform on {-1, 1}; nu carries a flat density
/// of 1/8 on [-2,2], discretized into n equal cells at their midpoints, plus
/// atoms of weight 1/8, 1/4, 1/8 at -2, 0, 2. The paving splits at 0.
struct KinkedTargetInstance {
    DiscreteMeasure<Rational> mu, nu;
    int left_end = -1, middle = -1, right_end = -1;  // nu indices of -2, 0, 2
};

inline KinkedTargetInstance kinked_target_instance(int n) {
    using R = Rational;
    const auto num = Numerics<R>::exact();
    if (n < 2) throw std::invalid_argument("grid must have at least two cells");
    KinkedTargetInstance g;
    g.mu = make_measure<R>(1, {{R(-1)}, {R(1)}}, {R(1) / 2, R(1) / 2}, num);
    std::vector<Vec<R>> atoms;
    std::vector<R> weights;
    atoms.push_back({R(-2)});
    weights.push_back(R(1) / 8);
    atoms.push_back({R(0)});
    weights.push_back(R(1) / 4);
    atoms.push_back({R(2)});
    weights.push_back(R(1) / 8);
    for (int k = 0; k < n; ++k) {
        // midpoint of cell k of [-2,2]: -2 + (2k+1) * (2/n)
        atoms.push_back({R(-2) + R(4 * k + 2) / n});
        weights.push_back(R(1) / (2 * n));
    }
    g.nu = make_measure<R>(1, atoms, weights, num);
    for (int j = 0; j < g.nu.size(); ++j) {
        if (g.nu.atoms[j][0] == R(-2)) g.left_end = j;
        if (g.nu.atoms[j][0] == R(0)) g.middle = j;
        if (g.nu.atoms[j][0] == R(2)) g.right_end = j;
    }
    return g;
}

/// Planar instance: mu puts 1/2 at (-1/2,0) and 1/4 at (1/2,+-1/2); nu is the
/// uniform density on the square [-1,1]^2 discretized into n x n equal cells
/// at their centers. The coupling is unique at every grid level.
struct QuadrantGridInstance {
    DiscreteMeasure<Rational> mu, nu;
};

inline QuadrantGridInstance quadrant_grid_instance(int n) {
    using R = Rational;
    const auto num = Numerics<R>::exact();
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("grid size must be even and >= 2");
    QuadrantGridInstance g;
    g.mu = make_measure<R>(
        2, {{R(-1) / 2, R(0)}, {R(1) / 2, R(1) / 2}, {R(1) / 2, R(-1) / 2}},
        {R(1) / 2, R(1) / 4, R(1) / 4}, num);
    std::vector<Vec<R>> atoms;
    std::vector<R> weights;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // cell centers -1 + (2k+1)/n
            atoms.push_back({R(-1) + R(2 * a + 1) / n, R(-1) + R(2 * b + 1) / n});
            weights.push_back(R(1) / (n * n));
        }
    g.nu = make_measure<R>(2, atoms, weights, num);
    return g;
}

/// Componentwise copy into another scalar type (exact -> double for the
/// float-mode paths). Same-type conversion is the identity, never a
/// double round-trip.
template <class To, class From>
DiscreteMeasure<To> convert_measure(const DiscreteMeasure<From>& m) {
    if constexpr (std::is_same_v<To, From>) {
        return m;
    } else {
        DiscreteMeasure<To> out;
        out.dim = m.dim;
        for (const auto& a : m.atoms) {
            Vec<To> v;
            for (const auto& c : a) v.push_back(To(to_double(c)));
            out.atoms.push_back(std::move(v));
        }
        for (const auto& w : m.weights) out.weights.push_back(To(to_double(w)));
        return out;
    }
}

template <class To, class From>
std::vector<std::vector<To>> convert_matrix(const std::vector<std::vector<From>>& m) {
    if constexpr (std::is_same_v<To, From>) {
        return m;
    } else {
        std::vector<std::vector<To>> out;
        for (const auto& row : m) {
            std::vector<To> r;
            for (const auto& v : row) r.push_back(To(to_double(v)));
            out.push_back(std::move(r));
        }
        return out;
    }
}

}  // namespace motpaver
