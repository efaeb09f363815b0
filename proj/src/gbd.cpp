#include "d2d/gbd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "d2d/greedy.hpp"
#include "d2d/heuristic.hpp"

namespace d2d::gbd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCutMargin = 1e-6;
constexpr double kFeasTol = 1e-9;

using BinaryMatrix = std::vector<std::vector<uint8_t>>;

std::string key_of(const BinaryMatrix& y) {
    std::string s;
    for (const auto& row : y)
        for (uint8_t v : row) s.push_back(v ? '1' : '0');
    return s;
}

// ---------- dense two-phase simplex ----------
// minimize c.x  s.t.  A x <= b, x >= 0.

class Simplex {
public:
    enum class Status { Optimal, Infeasible, Unbounded, Stalled };

    explicit Simplex(int n) : n_(n) {}

    void add_row(std::vector<double> coefs, double rhs) {
        coefs.resize(static_cast<size_t>(n_), 0.0);
        rows_.push_back(std::move(coefs));
        rhs_.push_back(rhs);
    }

    Status solve(const std::vector<double>& cost, std::vector<double>& x, double& obj) {
        const int m = static_cast<int>(rows_.size());
        int n_art = 0;
        for (double b : rhs_)
            if (b < 0.0) ++n_art;
        const int total = n_ + m + n_art;
        T_.assign(static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(total) + 1, 0.0));
        basis_.assign(static_cast<size_t>(m), -1);
        art_start_ = n_ + m;

        int art = art_start_;
        for (int i = 0; i < m; ++i) {
            auto& row = T_[static_cast<size_t>(i)];
            const double sgn = rhs_[static_cast<size_t>(i)] < 0.0 ? -1.0 : 1.0;
            for (int j = 0; j < n_; ++j) row[static_cast<size_t>(j)] = sgn * rows_[static_cast<size_t>(i)][static_cast<size_t>(j)];
            row[static_cast<size_t>(n_ + i)] = sgn;  // slack
            row[static_cast<size_t>(total)] = sgn * rhs_[static_cast<size_t>(i)];
            if (sgn < 0.0) {
                row[static_cast<size_t>(art)] = 1.0;
                basis_[static_cast<size_t>(i)] = art++;
            } else {
                basis_[static_cast<size_t>(i)] = n_ + i;
            }
        }

        if (n_art > 0) {
            std::vector<double> phase1(static_cast<size_t>(total), 0.0);
            for (int j = art_start_; j < total; ++j) phase1[static_cast<size_t>(j)] = 1.0;
            const Status st = run(phase1, total);
            if (st != Status::Optimal) return st == Status::Unbounded ? Status::Stalled : st;
            double infeas = 0.0;
            for (int i = 0; i < m; ++i)
                if (basis_[static_cast<size_t>(i)] >= art_start_)
                    infeas += T_[static_cast<size_t>(i)][static_cast<size_t>(total)];
            if (infeas > 1e-7) return Status::Infeasible;
            // pivot leftover artificials out where possible
            for (int i = 0; i < m; ++i) {
                if (basis_[static_cast<size_t>(i)] < art_start_) continue;
                int enter = -1;
                for (int j = 0; j < art_start_; ++j)
                    if (std::abs(T_[static_cast<size_t>(i)][static_cast<size_t>(j)]) > 1e-9) {
                        enter = j;
                        break;
                    }
                if (enter >= 0) pivot(i, enter, total);
            }
        }

        std::vector<double> phase2(static_cast<size_t>(total), 0.0);
        for (int j = 0; j < n_ && j < static_cast<int>(cost.size()); ++j)
            phase2[static_cast<size_t>(j)] = cost[static_cast<size_t>(j)];
        const Status st = run(phase2, total, /*forbid_artificials=*/true);
        if (st != Status::Optimal) return st;

        x.assign(static_cast<size_t>(n_), 0.0);
        obj = 0.0;
        for (int i = 0; i < m; ++i) {
            const int bj = basis_[static_cast<size_t>(i)];
            if (bj < n_) x[static_cast<size_t>(bj)] = T_[static_cast<size_t>(i)][static_cast<size_t>(total)];
        }
        for (int j = 0; j < n_ && j < static_cast<int>(cost.size()); ++j)
            obj += cost[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
        return Status::Optimal;
    }

private:
    Status run(const std::vector<double>& cost, int total, bool forbid_artificials = false) {
        const int m = static_cast<int>(rows_.size());
        std::vector<double> cr(cost);  // reduced costs wrt the current basis
        for (int i = 0; i < m; ++i) {
            const double cb = cost[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
            if (cb == 0.0) continue;
            for (int j = 0; j < total; ++j)
                cr[static_cast<size_t>(j)] -= cb * T_[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        const int limit = forbid_artificials ? art_start_ : total;
        const long max_pivots = 4000 + 40L * (m + total);
        const long bland_after = 1000 + 4L * (m + total);
        long pivots = 0;
        for (;;) {
            if (++pivots > max_pivots) return Status::Stalled;
            int enter = -1;
            if (pivots <= bland_after) {
                double best = -1e-9;
                for (int j = 0; j < limit; ++j)
                    if (cr[static_cast<size_t>(j)] < best) {
                        best = cr[static_cast<size_t>(j)];
                        enter = j;
                    }
            } else {
                for (int j = 0; j < limit; ++j)
                    if (cr[static_cast<size_t>(j)] < -1e-9) {
                        enter = j;
                        break;
                    }
            }
            if (enter < 0) return Status::Optimal;
            int leave = -1;
            double best_ratio = kInf;
            for (int i = 0; i < m; ++i) {
                const double a = T_[static_cast<size_t>(i)][static_cast<size_t>(enter)];
                if (a > 1e-10) {
                    const double ratio = T_[static_cast<size_t>(i)][static_cast<size_t>(total)] / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && leave >= 0 &&
                         basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)])) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return Status::Unbounded;
            const double piv_cr = cr[static_cast<size_t>(enter)];
            pivot(leave, enter, total);
            for (int j = 0; j < total; ++j)
                cr[static_cast<size_t>(j)] -=
                    piv_cr * T_[static_cast<size_t>(leave)][static_cast<size_t>(j)];
            cr[static_cast<size_t>(enter)] = 0.0;
        }
    }

    void pivot(int row, int col, int total) {
        auto& pr = T_[static_cast<size_t>(row)];
        const double p = pr[static_cast<size_t>(col)];
        for (int j = 0; j <= total; ++j) pr[static_cast<size_t>(j)] /= p;
        for (size_t i = 0; i < T_.size(); ++i) {
            if (static_cast<int>(i) == row) continue;
            auto& r = T_[i];
            const double f = r[static_cast<size_t>(col)];
            if (f == 0.0) continue;
            for (int j = 0; j <= total; ++j) r[static_cast<size_t>(j)] -= f * pr[static_cast<size_t>(j)];
            r[static_cast<size_t>(col)] = 0.0;
        }
        basis_[static_cast<size_t>(row)] = col;
    }

    int n_;
    int art_start_ = 0;
    std::vector<std::vector<double>> rows_;
    std::vector<double> rhs_;
    std::vector<std::vector<double>> T_;
    std::vector<int> basis_;
};

// ---------- master helpers ----------

struct CutView {
    const std::vector<Cut>* cuts;
    std::vector<const Cut*> opt;
    std::vector<const Cut*> feas;
};

CutView split_cuts(const std::vector<Cut>& cuts) {
    CutView v;
    v.cuts = &cuts;
    for (const auto& c : cuts)
        (c.kind == Cut::Kind::Optimality ? v.opt : v.feas).push_back(&c);
    return v;
}

double exact_eta(const CutView& cv, const BinaryMatrix& y) {
    double eta = kInf;
    for (const Cut* c : cv.opt) eta = std::min(eta, c->value_at(y));
    return eta;
}

bool satisfies_feas_cuts(const CutView& cv, const BinaryMatrix& y) {
    for (const Cut* c : cv.feas)
        if (c->value_at(y) > kFeasTol) return false;
    return true;
}

bool satisfies_caps(const BinaryMatrix& y, int K, int M, int c1, int c2) {
    for (int k = 0; k < K; ++k) {
        int rc = 0;
        for (int m = 0; m < M; ++m) rc += y[static_cast<size_t>(k)][static_cast<size_t>(m)];
        if (rc > c1) return false;
    }
    for (int m = 0; m < M; ++m) {
        int cc = 0;
        for (int k = 0; k < K; ++k) cc += y[static_cast<size_t>(k)][static_cast<size_t>(m)];
        if (cc > c2) return false;
    }
    return true;
}

// exhaustive master for small instances
MasterResult enumerate_master(const CutView& cv, int K, int M, int c1, int c2) {
    MasterResult best;
    best.feasible = false;
    best.exact = true;
    best.eta = -kInf;
    const int n = K * M;
    BinaryMatrix y(static_cast<size_t>(K), std::vector<uint8_t>(static_cast<size_t>(M), 0));
    std::vector<int> row(static_cast<size_t>(K), 0), col(static_cast<size_t>(M), 0);
    std::vector<double> optval, feasval;
    for (const Cut* c : cv.opt) optval.push_back(c->constant);
    for (const Cut* c : cv.feas) feasval.push_back(c->constant);

    std::function<void(int)> rec = [&](int idx) {
        if (idx == n) {
            for (double fv : feasval)
                if (fv > kFeasTol) return;
            double eta = kInf;
            for (double ov : optval) eta = std::min(eta, ov);
            if (eta > best.eta + 1e-12) {
                best.eta = eta;
                best.y = y;
                best.feasible = true;
            }
            return;
        }
        const int k = idx / M;
        const int m = idx % M;
        rec(idx + 1);
        if (row[static_cast<size_t>(k)] < c1 && col[static_cast<size_t>(m)] < c2) {
            y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 1;
            ++row[static_cast<size_t>(k)];
            ++col[static_cast<size_t>(m)];
            for (size_t j = 0; j < optval.size(); ++j)
                optval[j] += cv.opt[j]->coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)];
            for (size_t j = 0; j < feasval.size(); ++j)
                feasval[j] += cv.feas[j]->coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)];
            rec(idx + 1);
            y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 0;
            --row[static_cast<size_t>(k)];
            --col[static_cast<size_t>(m)];
            for (size_t j = 0; j < optval.size(); ++j)
                optval[j] -= cv.opt[j]->coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)];
            for (size_t j = 0; j < feasval.size(); ++j)
                feasval[j] -= cv.feas[j]->coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)];
        }
    };
    rec(0);
    return best;
}

// LP relaxation of the master restricted by a partial fixing.
struct NodeLp {
    Simplex::Status status = Simplex::Status::Infeasible;
    double bound = -kInf;
    std::vector<double> y_frac;  // per free variable
};

NodeLp solve_node_lp(const CutView& cv, int K, int M, int c1, int c2,
                     const std::vector<int8_t>& fix, double eta_lo) {
    NodeLp out;
    std::vector<int> free_idx;
    for (int i = 0; i < K * M; ++i)
        if (fix[static_cast<size_t>(i)] < 0) free_idx.push_back(i);
    const int F = static_cast<int>(free_idx.size());
    std::vector<int> pos(static_cast<size_t>(K * M), -1);
    for (int j = 0; j < F; ++j) pos[static_cast<size_t>(free_idx[static_cast<size_t>(j)])] = j;

    Simplex lp(1 + F);
    // optimality cuts: eta_shift - sum coef*y_free <= const + fixed part - eta_lo
    for (const Cut* c : cv.opt) {
        std::vector<double> row(static_cast<size_t>(1 + F), 0.0);
        row[0] = 1.0;
        double rhs = c->constant - eta_lo;
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m) {
                const int flat = k * M + m;
                const double w = c->coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)];
                if (fix[static_cast<size_t>(flat)] >= 0)
                    rhs += w * fix[static_cast<size_t>(flat)];
                else
                    row[static_cast<size_t>(1 + pos[static_cast<size_t>(flat)])] = -w;
            }
        lp.add_row(std::move(row), rhs);
    }
    for (const Cut* c : cv.feas) {
        std::vector<double> row(static_cast<size_t>(1 + F), 0.0);
        double rhs = -c->constant;
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m) {
                const int flat = k * M + m;
                const double w = c->coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)];
                if (fix[static_cast<size_t>(flat)] >= 0)
                    rhs -= w * fix[static_cast<size_t>(flat)];
                else
                    row[static_cast<size_t>(1 + pos[static_cast<size_t>(flat)])] = w;
            }
        lp.add_row(std::move(row), rhs);
    }
    for (int k = 0; k < K; ++k) {
        std::vector<double> row(static_cast<size_t>(1 + F), 0.0);
        int fixed = 0;
        bool any_free = false;
        for (int m = 0; m < M; ++m) {
            const int flat = k * M + m;
            if (fix[static_cast<size_t>(flat)] >= 0) {
                fixed += fix[static_cast<size_t>(flat)];
            } else {
                row[static_cast<size_t>(1 + pos[static_cast<size_t>(flat)])] = 1.0;
                any_free = true;
            }
        }
        if (fixed > c1) return out;  // infeasible node
        if (any_free) lp.add_row(std::move(row), c1 - fixed);
    }
    for (int m = 0; m < M; ++m) {
        std::vector<double> row(static_cast<size_t>(1 + F), 0.0);
        int fixed = 0;
        bool any_free = false;
        for (int k = 0; k < K; ++k) {
            const int flat = k * M + m;
            if (fix[static_cast<size_t>(flat)] >= 0) {
                fixed += fix[static_cast<size_t>(flat)];
            } else {
                row[static_cast<size_t>(1 + pos[static_cast<size_t>(flat)])] = 1.0;
                any_free = true;
            }
        }
        if (fixed > c2) return out;
        if (any_free) lp.add_row(std::move(row), c2 - fixed);
    }
    for (int j = 0; j < F; ++j) {
        std::vector<double> row(static_cast<size_t>(1 + F), 0.0);
        row[static_cast<size_t>(1 + j)] = 1.0;
        lp.add_row(std::move(row), 1.0);
    }

    std::vector<double> cost(static_cast<size_t>(1 + F), 0.0);
    cost[0] = -1.0;  // maximize eta_shift
    std::vector<double> x;
    double obj = 0.0;
    out.status = lp.solve(cost, x, obj);
    if (out.status != Simplex::Status::Optimal) return out;
    out.bound = eta_lo + x[0];
    out.y_frac.assign(x.begin() + 1, x.end());
    return out;
}

MasterResult branch_and_bound_master(const CutView& cv, int K, int M, int c1, int c2,
                                     int node_budget,
                                     const std::vector<BinaryMatrix>& candidates) {
    MasterResult res;
    res.feasible = false;
    res.exact = true;
    res.eta = -kInf;

    double eta_lo = kInf;
    for (const Cut* c : cv.opt) {
        double v = c->constant;
        for (const auto& row : c->coeffs)
            for (double w : row) v += std::min(w, 0.0);
        eta_lo = std::min(eta_lo, v);
    }
    eta_lo -= 1.0;

    double inc_eta = -kInf;
    BinaryMatrix inc_y;
    for (const auto& y : candidates) {
        if (!satisfies_caps(y, K, M, c1, c2) || !satisfies_feas_cuts(cv, y)) continue;
        const double eta = exact_eta(cv, y);
        if (eta > inc_eta) {
            inc_eta = eta;
            inc_y = y;
        }
    }

    struct Node {
        double bound;
        long id;
        std::vector<int8_t> fix;
    };
    auto cmp = [](const Node& a, const Node& b) {
        if (a.bound != b.bound) return a.bound < b.bound;
        return a.id > b.id;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);
    long next_id = 0;

    std::vector<int8_t> root_fix(static_cast<size_t>(K * M), -1);
    const NodeLp root = solve_node_lp(cv, K, M, c1, c2, root_fix, eta_lo);
    double open_max = -kInf;  // upper bound over subtrees not searched to the end
    if (root.status == Simplex::Status::Optimal) {
        open.push({root.bound, next_id++, std::move(root_fix)});
    } else if (root.status != Simplex::Status::Infeasible) {
        res.exact = false;  // LP trouble at the root: no usable bound at all
        open_max = kInf;
    }

    int pops = 0;
    while (!open.empty()) {
        if (pops >= node_budget) {
            res.exact = false;
            open_max = std::max(open_max, open.top().bound);
            break;
        }
        Node node = open.top();
        open.pop();
        ++pops;
        if (node.bound <= inc_eta + 1e-9) break;  // best-first: done

        const NodeLp lp = solve_node_lp(cv, K, M, c1, c2, node.fix, eta_lo);
        if (lp.status == Simplex::Status::Infeasible) continue;
        if (lp.status != Simplex::Status::Optimal) {
            res.exact = false;
            open_max = std::max(open_max, node.bound);  // dropped subtree keeps its bound
            continue;
        }
        if (lp.bound <= inc_eta + 1e-9) continue;

        // collect fractional variables
        int branch_flat = -1;
        double branch_score = -1.0;
        int fpos = 0;
        for (int flat = 0; flat < K * M; ++flat) {
            if (node.fix[static_cast<size_t>(flat)] >= 0) continue;
            const double v = lp.y_frac[static_cast<size_t>(fpos++)];
            const double frac = std::min(v, 1.0 - v);
            if (frac > 1e-6 && frac > branch_score + 1e-12) {
                branch_score = frac;
                branch_flat = flat;
            }
        }
        if (branch_flat < 0) {
            // integral LP solution: round and verify exactly
            BinaryMatrix y(static_cast<size_t>(K), std::vector<uint8_t>(static_cast<size_t>(M), 0));
            fpos = 0;
            for (int flat = 0; flat < K * M; ++flat) {
                const int k = flat / M;
                const int m = flat % M;
                uint8_t v;
                if (node.fix[static_cast<size_t>(flat)] >= 0)
                    v = static_cast<uint8_t>(node.fix[static_cast<size_t>(flat)]);
                else
                    v = lp.y_frac[static_cast<size_t>(fpos)] > 0.5 ? 1 : 0, ++fpos;
                y[static_cast<size_t>(k)][static_cast<size_t>(m)] = v;
            }
            if (satisfies_caps(y, K, M, c1, c2) && satisfies_feas_cuts(cv, y)) {
                const double eta = exact_eta(cv, y);
                if (eta > inc_eta) {
                    inc_eta = eta;
                    inc_y = std::move(y);
                }
            }
            continue;
        }
        for (int val = 0; val <= 1; ++val) {
            Node child;
            child.fix = node.fix;
            child.fix[static_cast<size_t>(branch_flat)] = static_cast<int8_t>(val);
            child.bound = lp.bound;
            child.id = next_id++;
            open.push(std::move(child));
        }
    }

    if (inc_y.empty()) {
        // no integral point seen: fall back to the all-zero allocation, which
        // every valid feasibility cut admits
        BinaryMatrix zero(static_cast<size_t>(K), std::vector<uint8_t>(static_cast<size_t>(M), 0));
        if (satisfies_feas_cuts(cv, zero)) {
            inc_y = std::move(zero);
            inc_eta = exact_eta(cv, inc_y);
        } else {
            return res;  // master infeasible
        }
    }
    res.feasible = true;
    res.y = inc_y;
    res.eta = res.exact ? inc_eta : std::max(inc_eta, open_max);
    return res;
}

}  // namespace

Cut optimality_cut(const convex::PrimalOutcome& primal, const convex::GateConstants& constants,
                   int iteration) {
    if (primal.status != convex::SolveStatus::Optimal)
        throw std::logic_error("optimality_cut: primal not optimal");
    const auto& prog = primal.program;
    const auto& sol = primal.solution;
    if (sol.multipliers.size() != prog.constraints.size() ||
        sol.g_values.size() != prog.constraints.size())
        throw std::logic_error("optimality_cut: missing multiplier for a tagged constraint");

    const int K = prog.y_rows;
    const int M = prog.y_cols;
    const auto& y = primal.assignment.y;
    Cut cut;
    cut.kind = Cut::Kind::Optimality;
    cut.source_iteration = iteration;
    cut.coeffs.assign(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(M), 0.0));
    cut.constant = primal.objective;

    for (size_t q = 0; q < prog.constraints.size(); ++q) {
        const double lam = sol.multipliers[q];
        if (lam == 0.0) continue;
        cut.constant -= lam * sol.g_values[q];
        for (const auto& [flat, w] : prog.constraints[q].y_coef) {
            const int k = flat / M;
            const int m = flat % M;
            cut.constant += lam * w * (y[static_cast<size_t>(k)][static_cast<size_t>(m)] ? 1.0 : 0.0);
            cut.coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)] -= lam * w;
        }
    }
    // closed-form multipliers of the eliminated rate gates
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) {
            if (y[static_cast<size_t>(k)][static_cast<size_t>(m)]) {
                cut.constant += constants.c_a[static_cast<size_t>(k)][static_cast<size_t>(m)];
                cut.coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)] -=
                    constants.c_a[static_cast<size_t>(k)][static_cast<size_t>(m)];
            } else {
                cut.coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)] +=
                    constants.c_b[static_cast<size_t>(k)][static_cast<size_t>(m)];
            }
        }
    cut.constant += kCutMargin;
    if (!std::isfinite(cut.constant))
        throw std::logic_error("optimality_cut: non-finite constant");
    for (const auto& row : cut.coeffs)
        for (double w : row)
            if (!std::isfinite(w)) throw std::logic_error("optimality_cut: non-finite coefficient");
    return cut;
}

Cut feasibility_cut(const convex::FeasibilityOutcome& feas, const BinaryMatrix& y_fixed,
                    int iteration) {
    if (!(feas.alpha_sum > 0.0))
        throw std::logic_error("feasibility_cut: alpha_sum is zero (primal was feasible)");
    const auto& prog = feas.program;
    const auto& sol = feas.solution;
    const int K = prog.y_rows;
    const int M = prog.y_cols;
    Cut cut;
    cut.kind = Cut::Kind::Feasibility;
    cut.source_iteration = iteration;
    cut.coeffs.assign(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(M), 0.0));
    cut.constant = 0.0;
    for (size_t q = 0; q < prog.constraints.size(); ++q) {
        const double lam = sol.multipliers[q];
        if (lam == 0.0) continue;
        cut.constant += lam * sol.g_values[q];
        for (const auto& [flat, w] : prog.constraints[q].y_coef) {
            const int k = flat / M;
            const int m = flat % M;
            cut.constant -=
                lam * w * (y_fixed[static_cast<size_t>(k)][static_cast<size_t>(m)] ? 1.0 : 0.0);
            cut.coeffs[static_cast<size_t>(k)][static_cast<size_t>(m)] += lam * w;
        }
    }
    cut.constant -= kCutMargin;
    if (!std::isfinite(cut.constant))
        throw std::logic_error("feasibility_cut: non-finite constant");
    for (const auto& row : cut.coeffs)
        for (double w : row)
            if (!std::isfinite(w)) throw std::logic_error("feasibility_cut: non-finite coefficient");
    return cut;
}

MasterResult solve_relaxed_master(const std::vector<Cut>& cuts, int K, int M, int c1, int c2,
                                  int enum_limit, int node_budget,
                                  const std::vector<BinaryMatrix>& incumbent_candidates) {
    const CutView cv = split_cuts(cuts);
    if (cv.opt.empty())
        throw std::logic_error("solve_relaxed_master: needs at least one optimality cut");
    if (K * M <= enum_limit) return enumerate_master(cv, K, M, c1, c2);
    return branch_and_bound_master(cv, K, M, c1, c2, node_budget, incumbent_candidates);
}

SolveReport solve(const NetworkInstance& instance, const SolverConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };
    const int K = instance.num_groups();
    const int M = instance.num_channels();

    SolveReport out;
    out.algorithm = "gbd";

    if (K == 0) {
        out.assignment = Assignment::cellular_only(instance);
        out.report = evaluate(instance, out.assignment);
        out.proven_optimal = true;
        GbdState st;
        st.ubd = st.lbd = out.report.R_sum;
        st.proven_optimal = true;
        out.gbd_state = std::move(st);
        out.wall_time_sec = elapsed();
        return out;
    }

    const convex::GateConstants gc = convex::compute_gate_constants(instance, config);
    GbdState st;
    std::set<std::string> visited;
    std::vector<BinaryMatrix> visited_list;
    bool have_incumbent = false;
    double inc_objective = -kInf;
    Assignment inc_assignment;

    auto run_primal = [&](const BinaryMatrix& y, char kind) {
        ++st.iterations;
        const auto outcome = convex::solve_primal(instance, y, config);
        if (outcome.status == convex::SolveStatus::Optimal) {
            st.cuts.push_back(optimality_cut(outcome, gc, st.iterations));
            st.lbd = std::max(st.lbd, outcome.objective);
            if (outcome.objective > inc_objective) {
                inc_objective = outcome.objective;
                inc_assignment = outcome.assignment;
                have_incumbent = true;
            }
        } else {
            const auto fo = convex::solve_primal_feasibility(instance, y, config);
            if (fo.alpha_sum > 0.0) {
                st.cuts.push_back(feasibility_cut(fo, y, st.iterations));
            }
            kind = 'f';
        }
        visited.insert(key_of(y));
        visited_list.push_back(y);
        st.history.push_back({st.iterations, st.ubd, st.lbd, kind, y});
        if (config.trace)
            *config.trace << "gbd iter=" << st.iterations << " kind=" << kind
                          << " ubd=" << st.ubd << " lbd=" << st.lbd << " y=" << key_of(y) << "\n";
    };

    // iteration 1: the all-zero allocation (always cellular-feasible)
    BinaryMatrix y0(static_cast<size_t>(K), std::vector<uint8_t>(static_cast<size_t>(M), 0));
    run_primal(y0, 'o');

    // warm seeds: cheap incumbents whose cuts anchor the master on instances
    // whose binary lattice is too large to enumerate within the iteration cap
    if (config.warm_start && K * M > config.enum_master_limit) {
        SolverConfig sub = config;
        sub.warm_start = false;
        sub.trace = nullptr;
        sub.time_budget_sec = 0.0;
        std::vector<BinaryMatrix> seeds;
        seeds.push_back(heuristic::solve(instance, sub).assignment.y);
        seeds.push_back(greedy::solve(instance, sub).assignment.y);
        for (const auto& y : seeds) {
            if (y.empty() || visited.count(key_of(y))) continue;
            if (st.iterations >= config.max_iterations) break;
            run_primal(y, 's');
        }
    }

    bool revisit_stop = false;
    while (true) {
        if (st.iterations >= config.max_iterations) {
            st.hit_iteration_cap = true;
            break;
        }
        if (config.time_budget_sec > 0.0 && elapsed() > config.time_budget_sec) {
            st.hit_time_budget = true;
            break;
        }
        bool have_opt_cut = false;
        for (const auto& c : st.cuts)
            if (c.kind == Cut::Kind::Optimality) have_opt_cut = true;
        std::vector<Cut> master_cuts = st.cuts;
        if (!have_opt_cut) {
            // no feasible point seen yet: probe the cut-feasible lattice
            Cut dummy;
            dummy.kind = Cut::Kind::Optimality;
            dummy.constant = 0.0;
            dummy.coeffs.assign(static_cast<size_t>(K),
                                std::vector<double>(static_cast<size_t>(M), 0.0));
            master_cuts.push_back(std::move(dummy));
        }
        MasterResult master = solve_relaxed_master(master_cuts, K, M, config.c1, config.c2,
                                                   config.enum_master_limit, 4000, visited_list);
        if (!master.feasible) {
            st.master_exhausted = true;
            st.proven_optimal = have_incumbent;
            break;
        }
        if (have_opt_cut) {
            st.ubd = std::min(st.ubd, master.eta);
            if (st.ubd - st.lbd <= config.gap_tol) {
                st.proven_optimal = true;
                break;
            }
        }
        if (visited.count(key_of(master.y))) {
            revisit_stop = true;
            st.proven_optimal = master.exact && (st.ubd - st.lbd <= config.gap_tol);
            break;
        }
        run_primal(master.y, 'o');
    }
    (void)revisit_stop;

    if (!have_incumbent) {
        out.assignment = Assignment::cellular_only(instance);
        out.found_solution = false;
        try {
            out.report = evaluate(instance, out.assignment);
        } catch (const EvaluationError&) {
        }
    } else {
        out.assignment = inc_assignment;
        out.report = evaluate(instance, out.assignment);
    }
    st.ubd = std::max(st.ubd, st.lbd);
    out.proven_optimal = st.proven_optimal;
    out.gap = (st.ubd == kInf) ? kInf : std::max(0.0, st.ubd - st.lbd);
    out.wall_time_sec = elapsed();
    out.gbd_state = std::move(st);
    return out;
}

}  // namespace d2d::gbd
