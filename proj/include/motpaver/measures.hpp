#pragma once

#include "motpaver/numerics.hpp"

#include <stdexcept>
#include <vector>

namespace motpaver {

template <class T>
using Vec = std::vector<T>;

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
    T s(0);
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

template <class T>
Vec<T> sub(const Vec<T>& a, const Vec<T>& b) {
    Vec<T> r(a);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    return r;
}

template <class T>
bool vec_eq(const Vec<T>& a, const Vec<T>& b, const Numerics<T>& num) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!num.eq(a[k], b[k])) return false;
    return true;
}

/// Finitely supported probability measure on R^d.
template <class T>
struct DiscreteMeasure {
    int dim = 0;
    std::vector<Vec<T>> atoms;
    std::vector<T> weights;

    int size() const { return static_cast<int>(atoms.size()); }

    Vec<T> barycenter() const {
        Vec<T> b(dim, T(0));
        for (int i = 0; i < size(); ++i)
            for (int k = 0; k < dim; ++k) b[k] += weights[i] * atoms[i][k];
        return b;
    }

    /// Integral of a function given by its values on the atoms.
    T integrate(const std::vector<T>& values) const {
        T s(0);
        for (int i = 0; i < size(); ++i) s += weights[i] * values[i];
        return s;
    }
};

/// Validating constructor. Duplicate atoms are merged with summed weights;
/// weights must be positive and sum to one (within tau in float mode).
template <class T>
DiscreteMeasure<T> make_measure(int dim, std::vector<Vec<T>> atoms, std::vector<T> weights,
                                const Numerics<T>& num) {
    if (dim < 1) throw std::invalid_argument("measure dimension must be positive");
    if (atoms.size() != weights.size() || atoms.empty())
        throw std::invalid_argument("measure needs matching, nonempty atom/weight lists");
    DiscreteMeasure<T> m;
    m.dim = dim;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (static_cast<int>(atoms[i].size()) != dim)
            throw std::invalid_argument("atom has wrong dimension");
        if constexpr (!is_exact_v<T>) {
            for (const auto& c : atoms[i])
                if (!std::isfinite(c)) throw std::invalid_argument("non-finite atom coordinate");
            if (!std::isfinite(weights[i])) throw std::invalid_argument("non-finite weight");
        }
        int found = -1;
        for (int j = 0; j < m.size(); ++j)
            if (vec_eq(m.atoms[j], atoms[i], num)) {
                found = j;
                break;
            }
        if (found >= 0) m.weights[found] += weights[i];
        else {
            m.atoms.push_back(std::move(atoms[i]));
            m.weights.push_back(weights[i]);
        }
    }
    T total(0);
    for (const auto& w : m.weights) {
        if (!num.is_pos(w)) throw std::invalid_argument("weights must be strictly positive");
        total += w;
    }
    if (!num.eq(total, T(1))) throw std::invalid_argument("weights must sum to one");
    return m;
}

/// Point mass at x.
template <class T>
DiscreteMeasure<T> dirac(const Vec<T>& x) {
    DiscreteMeasure<T> m;
    m.dim = static_cast<int>(x.size());
    m.atoms = {x};
    m.weights = {T(1)};
    return m;
}

/// Mixture (a*mu + b*nu)/(a+b), defined on the merged atom set.
template <class T>
DiscreteMeasure<T> mix(const DiscreteMeasure<T>& mu, const T& a, const DiscreteMeasure<T>& nu,
                       const T& b, const Numerics<T>& num) {
    std::vector<Vec<T>> atoms = mu.atoms;
    std::vector<T> weights;
    const T total = a + b;
    for (const auto& w : mu.weights) weights.push_back(w * a / total);
    for (int j = 0; j < nu.size(); ++j) {
        atoms.push_back(nu.atoms[j]);
        weights.push_back(nu.weights[j] * b / total);
    }
    return make_measure(mu.dim, std::move(atoms), std::move(weights), num);
}

/// Independent one-dimensional convex-order test via potential functions:
/// mu <= nu iff barycenters agree and u_mu <= u_nu at every atom of either
/// measure, where u_m(k) = sum_i w_i |x_i - k|.
template <class T>
bool oracle_convex_order_1d(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                            const Numerics<T>& num) {
    if (mu.dim != 1 || nu.dim != 1)
        throw std::invalid_argument("oracle_convex_order_1d requires d == 1");
    if (!num.eq(mu.barycenter()[0], nu.barycenter()[0])) return false;
    auto potential = [](const DiscreteMeasure<T>& m, const T& k) {
        T u(0);
        for (int i = 0; i < m.size(); ++i) {
            T diff = m.atoms[i][0] - k;
            u += m.weights[i] * (diff < 0 ? -diff : diff);
        }
        return u;
    };
    for (const DiscreteMeasure<T>* m : {&mu, &nu})
        for (int i = 0; i < m->size(); ++i) {
            const T& k = m->atoms[i][0];
            if (!num.le(potential(mu, k), potential(nu, k))) return false;
        }
    return true;
}

}  // namespace motpaver
