#pragma once

#include "motpaver/linprog.hpp"
#include "motpaver/measures.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace motpaver {

template <class T>
struct CostMatrix {
    std::vector<std::vector<T>> values;  // |mu| x |nu|
    bool nonneg = false;

    int rows() const { return static_cast<int>(values.size()); }
    int cols() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }
};

template <class T>
CostMatrix<T> make_cost(std::vector<std::vector<T>> values, bool nonneg, const Numerics<T>& num) {
    CostMatrix<T> c;
    c.values = std::move(values);
    c.nonneg = nonneg;
    for (const auto& row : c.values) {
        if (row.size() != c.values[0].size())
            throw std::invalid_argument("ragged cost matrix");
        for (const auto& v : row) {
            if constexpr (!is_exact_v<T>) {
                if (!std::isfinite(v)) throw std::invalid_argument("cost entries must be finite");
            }
            if (nonneg && num.is_neg(v))
                throw std::invalid_argument("cost flagged nonnegative has a negative entry");
        }
    }
    return c;
}

template <class T>
CostMatrix<T> indicator_cost(int rows, int cols, int i, int j) {
    CostMatrix<T> c;
    c.values.assign(rows, std::vector<T>(cols, T(0)));
    c.values[i][j] = T(1);
    c.nonneg = true;
    return c;
}

/// Joint mass matrix on atoms of (mu, nu) subject to marginal and martingale
/// constraints.
template <class T>
struct Coupling {
    DiscreteMeasure<T> mu, nu;
    std::vector<std::vector<T>> p;  // |mu| x |nu|

    T expect(const CostMatrix<T>& c) const {
        T s(0);
        for (int i = 0; i < mu.size(); ++i)
            for (int j = 0; j < nu.size(); ++j)
                if (p[i][j] != 0) s += p[i][j] * c.values[i][j];
        return s;
    }

    /// Conditional barycenter of the kernel at mu-atom i.
    Vec<T> kernel_barycenter(int i) const {
        Vec<T> b(mu.dim, T(0));
        T mass(0);
        for (int j = 0; j < nu.size(); ++j) {
            mass += p[i][j];
            for (int k = 0; k < mu.dim; ++k) b[k] += p[i][j] * nu.atoms[j][k];
        }
        for (int k = 0; k < mu.dim; ++k) b[k] /= mass;
        return b;
    }
};

template <class T>
std::vector<std::pair<int, int>> support_pairs(const Coupling<T>& c, const Numerics<T>& num) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < c.mu.size(); ++i)
        for (int j = 0; j < c.nu.size(); ++j)
            if (num.is_pos(c.p[i][j])) out.push_back({i, j});
    return out;
}

/// Checks the three Coupling invariants; returns true when all hold.
template <class T>
bool coupling_feasible(const Coupling<T>& c, const Numerics<T>& num) {
    const int m = c.mu.size(), n = c.nu.size(), d = c.mu.dim;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (num.is_neg(c.p[i][j])) return false;
    for (int i = 0; i < m; ++i) {
        T row(0);
        Vec<T> moment(d, T(0));
        for (int j = 0; j < n; ++j) {
            row += c.p[i][j];
            for (int k = 0; k < d; ++k) moment[k] += c.p[i][j] * c.nu.atoms[j][k];
        }
        if (!num.eq(row, c.mu.weights[i])) return false;
        for (int k = 0; k < d; ++k)
            if (!num.eq(moment[k], c.mu.weights[i] * c.mu.atoms[i][k])) return false;
    }
    for (int j = 0; j < n; ++j) {
        T col(0);
        for (int i = 0; i < m; ++i) col += c.p[i][j];
        if (!num.eq(col, c.nu.weights[j])) return false;
    }
    return true;
}

/// Superhedging triple on atoms: phi per mu-atom, psi per nu-atom, h per
/// mu-atom. Admissible when every slack phi_i + psi_j + h_i.(y_j - x_i) - c_ij
/// is nonnegative on the declared scope.
template <class T>
struct DualCertificate {
    std::vector<T> phi;
    std::vector<T> psi;
    std::vector<Vec<T>> h;
    T value{};  // mu[phi] + nu[psi]

    T slack(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, const CostMatrix<T>& c,
            int i, int j) const {
        return phi[i] + psi[j] + dot(h[i], sub(nu.atoms[j], mu.atoms[i])) - c.values[i][j];
    }
};

/// Separating triple witnessing failure of convex order:
/// phi + psi + h.(y - x) >= 0 on all atom pairs while mu[phi] + nu[psi] < 0.
template <class T>
struct SeparatingTriple {
    std::vector<T> phi;
    std::vector<T> psi;
    std::vector<Vec<T>> h;
};

template <class T>
struct OrderCertificate {
    bool ordered = false;
    std::optional<Coupling<T>> coupling;         // set when ordered
    std::optional<SeparatingTriple<T>> separation;  // set when not ordered
};

struct NotInConvexOrder : std::runtime_error {
    explicit NotInConvexOrder(const std::string& what) : std::runtime_error(what) {}
};

template <class T>
struct NotInConvexOrderError : NotInConvexOrder {
    OrderCertificate<T> certificate;
    explicit NotInConvexOrderError(OrderCertificate<T> cert)
        : NotInConvexOrder("marginals are not in convex order"), certificate(std::move(cert)) {}
};

/// Row layout of the coupling LP shared by assembly and dual extraction.
struct TransportRows {
    int m = 0, n = 0, d = 0;
    int x_row(int i) const { return i; }
    int y_row(int j) const { return m + j; }
    int mart_row(int i, int k) const { return m + n + i * d + k; }
    int var(int i, int j) const { return i * n + j; }
    int num_rows() const { return m + n + m * d; }
    int num_vars() const { return m * n; }
};

/// Builds the martingale transport polytope (constraints only): variables
/// p_ij >= 0, rows for both marginals and the d|mu| martingale equalities
/// sum_j p_ij (y_j - x_i) = 0.
template <class T>
LinearProgram<T> assemble(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
    if (mu.dim != nu.dim) throw std::invalid_argument("marginal dimension mismatch");
    TransportRows L{mu.size(), nu.size(), mu.dim};
    LinearProgram<T> lp;
    for (int v = 0; v < L.num_vars(); ++v) lp.add_var(T(0));
    for (int i = 0; i < L.m; ++i) lp.add_row(RowSense::EQ, mu.weights[i]);
    for (int j = 0; j < L.n; ++j) lp.add_row(RowSense::EQ, nu.weights[j]);
    for (int i = 0; i < L.m; ++i)
        for (int k = 0; k < L.d; ++k) lp.add_row(RowSense::EQ, T(0));
    for (int i = 0; i < L.m; ++i)
        for (int j = 0; j < L.n; ++j) {
            const int v = L.var(i, j);
            lp.set(L.x_row(i), v, T(1));
            lp.set(L.y_row(j), v, T(1));
            for (int k = 0; k < L.d; ++k) {
                T diff = nu.atoms[j][k] - mu.atoms[i][k];
                if (diff != 0) lp.set(L.mart_row(i, k), v, diff);
            }
        }
    return lp;
}

/// Phase-1-once wrapper around the coupling polytope. All transport, paving
/// and disintegration solves of one instance share this object so that each
/// new objective is a warm re-optimization.
template <class T>
class CouplingSolver {
public:
    CouplingSolver(DiscreteMeasure<T> mu, DiscreteMeasure<T> nu, const Numerics<T>& num)
        : mu_(std::move(mu)), nu_(std::move(nu)), num_(num), layout_{mu_.size(), nu_.size(), mu_.dim} {
        typename Simplex<T>::Options opt;
        opt.num = num_;
        simplex_ = std::make_unique<Simplex<T>>(assemble(mu_, nu_), opt);
    }

    const DiscreteMeasure<T>& mu() const { return mu_; }
    const DiscreteMeasure<T>& nu() const { return nu_; }
    const TransportRows& layout() const { return layout_; }
    bool feasible() const { return simplex_->feasible(); }

    OrderCertificate<T> order_certificate() {
        OrderCertificate<T> cert;
        if (simplex_->feasible()) {
            cert.ordered = true;
            std::vector<T> zero(layout_.num_vars(), T(0));
            cert.coupling = to_coupling(simplex_->optimize(zero, Sense::Maximize).x);
        } else {
            cert.ordered = false;
            const auto& y = simplex_->farkas();
            SeparatingTriple<T> sep;
            for (int i = 0; i < layout_.m; ++i) sep.phi.push_back(-y[layout_.x_row(i)]);
            for (int j = 0; j < layout_.n; ++j) sep.psi.push_back(-y[layout_.y_row(j)]);
            for (int i = 0; i < layout_.m; ++i) {
                Vec<T> hi(layout_.d);
                for (int k = 0; k < layout_.d; ++k) hi[k] = -y[layout_.mart_row(i, k)];
                sep.h.push_back(std::move(hi));
            }
            cert.separation = std::move(sep);
        }
        return cert;
    }

    void require_order() {
        if (!simplex_->feasible()) throw NotInConvexOrderError<T>(order_certificate());
    }

    /// Optimizes an arbitrary linear functional of the mass matrix.
    LPSolution<T> optimize(const std::vector<T>& flat_obj, Sense sense) {
        require_order();
        return simplex_->optimize(flat_obj, sense);
    }

    struct Solved {
        Coupling<T> coupling;
        T value{};
        DualCertificate<T> dual;
    };

    /// Primal S(c) together with the LP dual triple; zero gap by strong duality.
    Solved maximize(const CostMatrix<T>& c) {
        require_order();
        auto sol = simplex_->optimize(flatten(c), Sense::Maximize);
        if (sol.status != LPStatus::Optimal)
            throw std::logic_error("coupling polytope is compact; solve cannot be unbounded");
        Solved out{to_coupling(sol.x), sol.objective, extract_dual_from(sol)};
        return out;
    }

    Coupling<T> to_coupling(const std::vector<T>& x) const {
        Coupling<T> c{mu_, nu_, {}};
        c.p.assign(layout_.m, std::vector<T>(layout_.n, T(0)));
        for (int i = 0; i < layout_.m; ++i)
            for (int j = 0; j < layout_.n; ++j) c.p[i][j] = x[layout_.var(i, j)];
        return c;
    }

    std::vector<T> flatten(const CostMatrix<T>& c) const {
        std::vector<T> obj(layout_.num_vars(), T(0));
        for (int i = 0; i < layout_.m; ++i)
            for (int j = 0; j < layout_.n; ++j) obj[layout_.var(i, j)] = c.values[i][j];
        return obj;
    }

private:
    DiscreteMeasure<T> mu_, nu_;
    Numerics<T> num_;
    TransportRows layout_;
    std::unique_ptr<Simplex<T>> simplex_;

    DualCertificate<T> extract_dual_from(const LPSolution<T>& sol) const {
        DualCertificate<T> cert;
        for (int i = 0; i < layout_.m; ++i) cert.phi.push_back(sol.row_duals[layout_.x_row(i)]);
        for (int j = 0; j < layout_.n; ++j) cert.psi.push_back(sol.row_duals[layout_.y_row(j)]);
        for (int i = 0; i < layout_.m; ++i) {
            Vec<T> hi(layout_.d);
            for (int k = 0; k < layout_.d; ++k) hi[k] = sol.row_duals[layout_.mart_row(i, k)];
            cert.h.push_back(std::move(hi));
        }
        cert.value = mu_.integrate(cert.phi) + nu_.integrate(cert.psi);
        return cert;
    }
};

/// Decides mu <= nu in convex order via feasibility of the martingale
/// transport polytope; both verdicts come with a checkable witness.
template <class T>
OrderCertificate<T> convex_order_check(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                       const Numerics<T>& num) {
    CouplingSolver<T> solver(mu, nu, num);
    return solver.order_certificate();
}

template <class T>
std::pair<Coupling<T>, T> solve_primal(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                       const CostMatrix<T>& c, const Numerics<T>& num) {
    CouplingSolver<T> solver(mu, nu, num);
    auto out = solver.maximize(c);
    return {std::move(out.coupling), out.value};
}

template <class T>
DualCertificate<T> extract_dual(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                const CostMatrix<T>& c, const Numerics<T>& num) {
    CouplingSolver<T> solver(mu, nu, num);
    return solver.maximize(c).dual;
}

/// One violated pair of a certificate check.
template <class T>
struct SlackViolation {
    int i = 0, j = 0;
    T slack{};
};

/// Recomputes every slack on the given scope (all pairs when `pairs` is
/// empty) and lists the violations; empty result means admissible.
template <class T>
std::vector<SlackViolation<T>> verify_certificate(const DualCertificate<T>& cert,
                                                  const DiscreteMeasure<T>& mu,
                                                  const DiscreteMeasure<T>& nu,
                                                  const CostMatrix<T>& c, const Numerics<T>& num,
                                                  const std::vector<std::pair<int, int>>& pairs = {}) {
    std::vector<SlackViolation<T>> out;
    auto check = [&](int i, int j) {
        T s = cert.slack(mu, nu, c, i, j);
        if (num.is_neg(s)) out.push_back({i, j, s});
    };
    if (pairs.empty()) {
        for (int i = 0; i < mu.size(); ++i)
            for (int j = 0; j < nu.size(); ++j) check(i, j);
    } else {
        for (const auto& [i, j] : pairs) check(i, j);
    }
    return out;
}

/// Verifies a separating triple by direct substitution.
template <class T>
bool separation_valid(const SeparatingTriple<T>& sep, const DiscreteMeasure<T>& mu,
                      const DiscreteMeasure<T>& nu, const Numerics<T>& num) {
    T objective = mu.integrate(sep.phi) + nu.integrate(sep.psi);
    if (!num.is_neg(objective)) return false;
    for (int i = 0; i < mu.size(); ++i)
        for (int j = 0; j < nu.size(); ++j) {
            T v = sep.phi[i] + sep.psi[j] + dot(sep.h[i], sub(nu.atoms[j], mu.atoms[i]));
            if (num.is_neg(v)) return false;
        }
    return true;
}

}  // namespace motpaver
