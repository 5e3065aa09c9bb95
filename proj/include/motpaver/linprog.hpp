#pragma once

#include "motpaver/numerics.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace motpaver {

enum class Sense { Maximize, Minimize };
enum class RowSense { LE, EQ, GE };
enum class LPStatus { Optimal, Infeasible, Unbounded };

/// Thrown when the pivot count exceeds the cap. With Bland's rule this
/// signals a kernel bug, not a hard instance.
struct IterationLimitError : std::runtime_error {
    explicit IterationLimitError(const std::string& what) : std::runtime_error(what) {}
};

template <class T>
struct LinearProgram {
    struct Entry {
        int row;
        int col;
        T value;
    };

    Sense sense = Sense::Maximize;
    int num_vars = 0;
    std::vector<T> objective;                // size num_vars
    std::vector<Entry> entries;              // duplicates are summed
    std::vector<RowSense> row_sense;
    std::vector<T> rhs;
    std::vector<bool> free_var;              // false: x >= 0, true: x free
    std::vector<std::optional<T>> upper;     // finite upper bounds, empty slot = +inf

    int num_rows() const { return static_cast<int>(rhs.size()); }

    int add_var(const T& obj, bool is_free = false) {
        objective.push_back(obj);
        free_var.push_back(is_free);
        upper.push_back(std::nullopt);
        return num_vars++;
    }
    int add_row(RowSense s, const T& b) {
        row_sense.push_back(s);
        rhs.push_back(b);
        return num_rows() - 1;
    }
    void set(int row, int col, const T& v) { entries.push_back(Entry{row, col, v}); }
};

template <class T>
struct LPSolution {
    LPStatus status = LPStatus::Optimal;
    std::vector<T> x;          // primal values, original variables
    std::vector<T> row_duals;  // one multiplier per original row
    T objective{};
    // Infeasibility certificate y:
    //   sum_i y_i A_ij <= 0 for every x_j >= 0 column (== 0 for free columns),
    //   y_i <= 0 on LE rows, y_i >= 0 on GE rows, and y.b > 0.
    // Entries beyond the original rows belong to the internally appended
    // upper-bound rows (x_j <= u_j), in increasing variable order.
    std::vector<T> farkas;
    long iterations = 0;
};

/// Dense two-phase primal simplex with Bland's rule. Phase 1 runs once at
/// construction; optimize() re-prices over the same basis, so a family of
/// objectives over one polytope costs a single phase 1.
template <class T>
class Simplex {
public:
    struct Options {
        Numerics<T> num{};
        long max_iterations = 0;  // 0: 10*(rows+cols)^2
    };

    Simplex(const LinearProgram<T>& lp, Options opt = {}) : lp_(lp), opt_(opt) {
        build();
        phase1();
    }

    bool feasible() const { return feasible_; }
    const std::vector<T>& farkas() const { return farkas_; }
    long iterations() const { return iterations_; }

    /// Maximizes (or minimizes) the given objective over the feasible region.
    /// Requires feasible(). The tableau keeps the final basis, so consecutive
    /// calls warm-start each other.
    LPSolution<T> optimize(const std::vector<T>& objective, Sense sense) {
        if (!feasible_) throw std::logic_error("Simplex::optimize on infeasible program");
        if (static_cast<int>(objective.size()) != lp_.num_vars)
            throw std::invalid_argument("objective size mismatch");
        std::vector<T> c(ncols_, T(0));
        for (int j = 0; j < lp_.num_vars; ++j) {
            T cj = sense == Sense::Maximize ? objective[j] : -objective[j];
            c[pos_col_[j]] = cj;
            if (neg_col_[j] >= 0) c[neg_col_[j]] = -cj;
        }
        rebuild_costs(c);
        bool bounded = run();

        LPSolution<T> sol;
        sol.iterations = iterations_;
        if (!bounded) {
            sol.status = LPStatus::Unbounded;
            return sol;
        }
        sol.status = LPStatus::Optimal;
        sol.objective = sense == Sense::Maximize ? objval_ : -objval_;
        sol.x.assign(lp_.num_vars, T(0));
        std::vector<T> colval(ncols_, T(0));
        for (int r = 0; r < nrows_; ++r) colval[basis_[r]] = tab_[r][ncols_];
        for (int j = 0; j < lp_.num_vars; ++j) {
            sol.x[j] = colval[pos_col_[j]];
            if (neg_col_[j] >= 0) sol.x[j] -= colval[neg_col_[j]];
        }
        sol.row_duals.assign(lp_.num_rows(), T(0));
        for (int i = 0; i < lp_.num_rows(); ++i) {
            // init_col_[i] is the slack or artificial whose initial column was e_i,
            // so its reduced cost recovers y_i = -redcost[init_col].
            T y = -redcost_[init_col_[i]];
            if (row_flip_[i]) y = -y;
            sol.row_duals[i] = sense == Sense::Maximize ? y : -y;
        }
        return sol;
    }

private:
    const LinearProgram<T> lp_;
    Options opt_;
    Numerics<T> num_;

    int nrows_ = 0;             // internal rows (original + upper-bound rows)
    int ncols_ = 0;             // internal columns incl. slacks and artificials
    int first_artificial_ = 0;  // columns >= this are artificials
    std::vector<std::vector<T>> tab_;  // nrows x (ncols+1), last column = rhs
    std::vector<int> basis_;           // basic column per row
    std::vector<int> pos_col_, neg_col_;  // original var -> internal columns
    std::vector<int> init_col_;           // row -> its initial unit column
    std::vector<bool> row_flip_;          // row negated during normalization
    std::vector<T> redcost_;              // current reduced costs, size ncols
    T objval_{};
    T drop_tol_{};                        // float mode: snap-to-zero threshold
    bool feasible_ = false;
    std::vector<T> farkas_;
    long iterations_ = 0;
    long max_iterations_ = 0;

    void build() {
        num_ = opt_.num;
        const int n = lp_.num_vars;
        const int m = lp_.num_rows();
        if (static_cast<int>(lp_.objective.size()) != n ||
            static_cast<int>(lp_.free_var.size()) != n ||
            static_cast<int>(lp_.upper.size()) != n ||
            static_cast<int>(lp_.row_sense.size()) != m)
            throw std::invalid_argument("inconsistent LinearProgram dimensions");
        if constexpr (!is_exact_v<T>) {
            for (const auto& e : lp_.entries)
                if (!std::isfinite(e.value)) throw std::invalid_argument("non-finite coefficient");
            for (const auto& b : lp_.rhs)
                if (!std::isfinite(b)) throw std::invalid_argument("non-finite rhs");
        }

        pos_col_.assign(n, -1);
        neg_col_.assign(n, -1);
        int col = 0;
        for (int j = 0; j < n; ++j) {
            pos_col_[j] = col++;
            if (lp_.free_var[j]) neg_col_[j] = col++;
        }

        // rows: originals, then one row per finite upper bound
        std::vector<RowSense> sense(lp_.row_sense);
        std::vector<T> rhs(lp_.rhs);
        std::vector<std::vector<std::pair<int, T>>> rows(m);
        for (const auto& e : lp_.entries) {
            if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n)
                throw std::invalid_argument("entry out of range");
            rows[e.row].push_back({e.col, e.value});
        }
        for (int j = 0; j < n; ++j) {
            if (lp_.upper[j]) {
                rows.push_back({{j, T(1)}});
                sense.push_back(RowSense::LE);
                rhs.push_back(*lp_.upper[j]);
            }
        }
        nrows_ = static_cast<int>(rows.size());

        row_flip_.assign(nrows_, false);
        for (int i = 0; i < nrows_; ++i) {
            if (rhs[i] < 0) {
                row_flip_[i] = true;
                rhs[i] = -rhs[i];
                for (auto& [c, v] : rows[i]) v = -v;
                if (sense[i] == RowSense::LE) sense[i] = RowSense::GE;
                else if (sense[i] == RowSense::GE) sense[i] = RowSense::LE;
            }
        }

        int nslack = 0, nart = 0;
        for (int i = 0; i < nrows_; ++i) {
            if (sense[i] != RowSense::EQ) ++nslack;
            if (sense[i] != RowSense::LE) ++nart;
        }
        first_artificial_ = col + nslack;
        ncols_ = first_artificial_ + nart;

        tab_.assign(nrows_, std::vector<T>(ncols_ + 1, T(0)));
        basis_.assign(nrows_, -1);
        init_col_.assign(nrows_, -1);
        int scol = col, acol = first_artificial_;
        for (int i = 0; i < nrows_; ++i) {
            auto& row = tab_[i];
            for (const auto& [c, v] : rows[i]) {
                row[pos_col_[c]] += v;
                if (neg_col_[c] >= 0) row[neg_col_[c]] -= v;
            }
            row[ncols_] = rhs[i];
            if (sense[i] == RowSense::LE) {
                row[scol] = T(1);
                basis_[i] = init_col_[i] = scol++;
            } else if (sense[i] == RowSense::GE) {
                row[scol++] = T(-1);
                row[acol] = T(1);
                basis_[i] = init_col_[i] = acol++;
            } else {
                row[acol] = T(1);
                basis_[i] = init_col_[i] = acol++;
            }
        }
        max_iterations_ = opt_.max_iterations > 0
                              ? opt_.max_iterations
                              : 10L * (nrows_ + ncols_) * (nrows_ + ncols_);
        if constexpr (!is_exact_v<T>) drop_tol_ = num_.tol * T(1e-3);
    }

    void rebuild_costs(const std::vector<T>& c) {
        redcost_ = c;
        objval_ = T(0);
        for (int r = 0; r < nrows_; ++r) {
            const T& cb = c[basis_[r]];
            if (cb == 0) continue;
            objval_ += cb * tab_[r][ncols_];
            for (int j = 0; j < ncols_; ++j)
                if (tab_[r][j] != 0) redcost_[j] -= cb * tab_[r][j];
        }
    }

    // In float mode, entries below the drop threshold are snapped to an exact
    // zero. Degenerate bases then stay exactly degenerate, which keeps
    // Bland's tie-breaking effective; without this the grid instances stall
    // on endless near-zero pivots.
    T clean(const T& v) const {
        if constexpr (!is_exact_v<T>) {
            if (std::abs(v) < drop_tol_) return T(0);
        }
        return v;
    }

    void pivot(int r, int c) {
        auto& prow = tab_[r];
        const T piv = prow[c];
        if (piv != 1) {
            for (auto& v : prow)
                if (v != 0) v = clean(v / piv);
            prow[c] = T(1);
        }
        for (int i = 0; i < nrows_; ++i) {
            if (i == r) continue;
            T f = tab_[i][c];
            if (f == 0) continue;
            auto& row = tab_[i];
            for (int j = 0; j <= ncols_; ++j)
                if (prow[j] != 0) row[j] = clean(row[j] - f * prow[j]);
            row[c] = T(0);
        }
        T f = redcost_[c];
        if (f != 0) {
            objval_ += f * prow[ncols_];
            for (int j = 0; j < ncols_; ++j)
                if (prow[j] != 0) redcost_[j] = clean(redcost_[j] - f * prow[j]);
            redcost_[c] = T(0);
        }
        basis_[r] = c;
        ++iterations_;
        if (iterations_ > max_iterations_)
            throw IterationLimitError("simplex exceeded " + std::to_string(max_iterations_) +
                                      " pivots; this indicates a kernel bug");
    }

    /// Bland loop for the current redcost_ row. Returns false on unbounded.
    /// Artificials never re-enter; they may only sit basic at zero.
    bool run() {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < first_artificial_; ++j) {
                if (num_.is_pos(redcost_[j])) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            T best{};
            for (int r = 0; r < nrows_; ++r) {
                const T& a = tab_[r][enter];
                if (!num_.is_pos(a)) continue;
                T ratio = tab_[r][ncols_] / a;
                if (leave < 0 || num_.lt(ratio, best)) {
                    leave = r;
                    best = ratio;
                } else if (num_.eq(ratio, best) && basis_[r] < basis_[leave]) {
                    leave = r;
                    if (ratio < best) best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    void phase1() {
        std::vector<T> c1(ncols_, T(0));
        for (int j = first_artificial_; j < ncols_; ++j) c1[j] = T(-1);
        rebuild_costs(c1);
        run();
        if (num_.is_neg(objval_)) {
            feasible_ = false;
            extract_farkas(c1);
            return;
        }
        feasible_ = true;
        drive_out_artificials();
    }

    void extract_farkas(const std::vector<T>& c1) {
        farkas_.assign(nrows_, T(0));
        for (int i = 0; i < nrows_; ++i) {
            T y = c1[init_col_[i]] - redcost_[init_col_[i]];
            if (row_flip_[i]) y = -y;
            farkas_[i] = -y;
        }
    }

    void drive_out_artificials() {
        for (int r = 0; r < nrows_; ++r) {
            if (basis_[r] < first_artificial_) continue;
            int enter = -1;
            for (int j = 0; j < first_artificial_; ++j) {
                if (!num_.is_zero(tab_[r][j])) {
                    enter = j;
                    break;
                }
            }
            // No real column left: the row is linearly dependent and the
            // artificial stays basic at zero for good.
            if (enter >= 0) pivot(r, enter);
        }
    }
};

/// One-shot interface over Simplex.
template <class T>
LPSolution<T> solve(const LinearProgram<T>& lp, typename Simplex<T>::Options opt = {}) {
    Simplex<T> s(lp, opt);
    if (!s.feasible()) {
        LPSolution<T> sol;
        sol.status = LPStatus::Infeasible;
        sol.farkas = s.farkas();
        sol.iterations = s.iterations();
        return sol;
    }
    return s.optimize(lp.objective, lp.sense);
}

}  // namespace motpaver
