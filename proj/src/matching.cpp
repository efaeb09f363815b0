#include "d2d/matching.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace d2d::matching {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost perfect matching on an n x n cost matrix (Jonker-Volgenant style
// shortest augmenting paths with potentials). Returns row -> column.
std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, kInf);
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const int i0 = p[static_cast<size_t>(j0)];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] -
                                   u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<size_t>(j)] > 0) row_to_col[static_cast<size_t>(p[static_cast<size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

double match_total(const std::vector<std::vector<double>>& w, const std::vector<int>& rc) {
    double t = 0.0;
    for (size_t i = 0; i < rc.size(); ++i)
        if (rc[i] >= 0) t += w[i][static_cast<size_t>(rc[i])];
    return t;
}

// best total on the padded square matrix
std::vector<int> solve_square(const std::vector<std::vector<double>>& w) {
    const int n = static_cast<int>(w.size());
    double wmax = 0.0;
    for (const auto& row : w)
        for (double v : row) wmax = std::max(wmax, std::abs(v));
    std::vector<std::vector<double>> cost(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost[static_cast<size_t>(i)][static_cast<size_t>(j)] = wmax - w[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return assign_min_cost(cost);
}

}  // namespace

std::vector<int> hungarian_max(const std::vector<std::vector<double>>& weights) {
    const int K = static_cast<int>(weights.size());
    if (K == 0) return {};
    const int M = static_cast<int>(weights[0].size());
    // pad to (K+M)-square with zero-weight dummies so any row or column may
    // stay unmatched: the result is a maximum-weight partial matching
    const int n = K + M;
    std::vector<std::vector<double>> w(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) w[static_cast<size_t>(k)][static_cast<size_t>(m)] = weights[static_cast<size_t>(k)][static_cast<size_t>(m)];

    std::vector<int> rc = solve_square(w);
    const double best = match_total(w, rc);

    // deterministic tie-break: lexicographically smallest assignment vector,
    // fixed row by row (exact re-solves; the matrices here are small)
    if (n <= 24) {
        std::vector<int> result(static_cast<size_t>(K), -1);
        std::vector<char> col_used(static_cast<size_t>(n), 0);
        double fixed_weight = 0.0;

        for (int k = 0; k < K; ++k) {
            // candidate columns in preference order: real channels ascending,
            // then "unmatched" (any dummy column)
            std::vector<int> options;
            for (int m = 0; m < n; ++m)
                if (!col_used[static_cast<size_t>(m)]) options.push_back(m);
            std::stable_sort(options.begin(), options.end(), [&](int a, int b) {
                const bool da = a >= M, db = b >= M;
                if (da != db) return db;  // real columns first
                return a < b;
            });
            for (int m : options) {
                // total if (k,m) is forced and the rest is re-optimized
                std::vector<int> rows2, cols2;
                for (int i = k + 1; i < n; ++i) rows2.push_back(i);
                for (int j = 0; j < n; ++j)
                    if (!col_used[static_cast<size_t>(j)] && j != m) cols2.push_back(j);
                double sub_best = 0.0;
                if (!rows2.empty()) {
                    std::vector<std::vector<double>> sub(
                        rows2.size(), std::vector<double>(cols2.size(), 0.0));
                    for (size_t a = 0; a < rows2.size(); ++a)
                        for (size_t b = 0; b < cols2.size(); ++b)
                            sub[a][b] = w[static_cast<size_t>(rows2[a])][static_cast<size_t>(cols2[b])];
                    std::vector<int> sub_rc = solve_square(sub);
                    sub_best = match_total(sub, sub_rc);
                }
                const double total = fixed_weight + w[static_cast<size_t>(k)][static_cast<size_t>(m)] + sub_best;
                if (total >= best - 1e-9) {
                    col_used[static_cast<size_t>(m)] = 1;
                    fixed_weight += w[static_cast<size_t>(k)][static_cast<size_t>(m)];
                    result[static_cast<size_t>(k)] = (m < M) ? m : -1;
                    break;
                }
            }
        }
        return result;
    }

    std::vector<int> result(static_cast<size_t>(K), -1);
    for (int k = 0; k < K; ++k)
        if (rc[static_cast<size_t>(k)] >= 0 && rc[static_cast<size_t>(k)] < M) result[static_cast<size_t>(k)] = rc[static_cast<size_t>(k)];
    return result;
}

WeightMatrix build_weights(const NetworkInstance& instance, const SolverConfig& config) {
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    WeightMatrix wm;
    wm.w.assign(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(M), 0.0));
    wm.candidate.assign(static_cast<size_t>(K), std::vector<uint8_t>(static_cast<size_t>(M), 0));
    wm.pair.assign(static_cast<size_t>(K), std::vector<convex::PairSolution>(static_cast<size_t>(M)));
    wm.cu_only.assign(static_cast<size_t>(M), 0.0);
    for (int m = 0; m < M; ++m)
        wm.cu_only[static_cast<size_t>(m)] =
            std::log2(instance.constants.p_max_cell_mw * instance.gains.g_cell[static_cast<size_t>(m)] /
                      instance.constants.noise_mw);
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) {
            convex::PairSolution ps;
            try {
                ps = convex::solve_pair(instance, k, m, config);
            } catch (const std::exception& e) {
                if (config.trace)
                    *config.trace << "pair (" << k << "," << m << ") solver failure: " << e.what()
                                  << "\n";
                ps.feasible = false;
            }
            if (ps.feasible) {
                wm.candidate[static_cast<size_t>(k)][static_cast<size_t>(m)] = 1;
                wm.pair[static_cast<size_t>(k)][static_cast<size_t>(m)] = ps;
                wm.w[static_cast<size_t>(k)][static_cast<size_t>(m)] = ps.objective;
            } else {
                wm.w[static_cast<size_t>(k)][static_cast<size_t>(m)] = wm.cu_only[static_cast<size_t>(m)];
            }
        }
    return wm;
}

void dump_weights(std::ostream& os, const WeightMatrix& wm) {
    os << "k\\m";
    for (size_t m = 0; m < wm.cu_only.size(); ++m) os << '\t' << m;
    os << "\n";
    for (size_t k = 0; k < wm.w.size(); ++k) {
        os << k;
        for (size_t m = 0; m < wm.w[k].size(); ++m)
            os << '\t' << wm.w[k][m] << (wm.candidate[k][m] ? "" : "*");
        os << "\n";
    }
    os << "cu_only";
    for (double v : wm.cu_only) os << '\t' << v;
    os << "\n(* = not a candidate pair)\n";
}

SolveReport solve(const NetworkInstance& instance, const SolverConfig& config) {
    if (config.c1 != 1 || config.c2 != 1)
        throw std::invalid_argument("matching::solve requires C1 = C2 = 1");
    const auto t0 = std::chrono::steady_clock::now();
    const int K = instance.num_groups();
    const int M = instance.num_channels();

    SolveReport out;
    out.algorithm = "matching";
    out.assignment = Assignment::cellular_only(instance);

    if (K > 0) {
        const WeightMatrix wm = build_weights(instance, config);

        // match on the improvement over the cellular-only value of each
        // channel; non-candidates improve nothing and are never activated
        std::vector<std::vector<double>> gain(static_cast<size_t>(K),
                                              std::vector<double>(static_cast<size_t>(M), 0.0));
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m)
                if (wm.candidate[static_cast<size_t>(k)][static_cast<size_t>(m)])
                    gain[static_cast<size_t>(k)][static_cast<size_t>(m)] =
                        wm.w[static_cast<size_t>(k)][static_cast<size_t>(m)] - wm.cu_only[static_cast<size_t>(m)];
        std::vector<int> match = hungarian_max(gain);

        for (int k = 0; k < K; ++k) {
            const int m = match[static_cast<size_t>(k)];
            if (m < 0 || !wm.candidate[static_cast<size_t>(k)][static_cast<size_t>(m)]) continue;
            if (gain[static_cast<size_t>(k)][static_cast<size_t>(m)] <= 1e-12) continue;
            const auto& ps = wm.pair[static_cast<size_t>(k)][static_cast<size_t>(m)];
            out.assignment.y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 1;
            out.assignment.p_d2d[static_cast<size_t>(k)][static_cast<size_t>(m)] = ps.p_d2d;
            out.assignment.p_cell[static_cast<size_t>(m)] = ps.p_cell;
        }
    }
    out.report = evaluate(instance, out.assignment);
    out.proven_optimal = true;  // exact for the 1/1 caps
    out.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace d2d::matching
