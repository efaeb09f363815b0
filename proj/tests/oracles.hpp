#ifndef D2D_TEST_ORACLES_HPP
#define D2D_TEST_ORACLES_HPP

// Independent oracles used by the test suites. Everything here recomputes
// results from first principles (grids, enumeration) and must stay clear of
// the solver code paths it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "d2d/model.hpp"

namespace d2d::test {

struct PairOracle {
    bool feasible = false;
    double objective = -std::numeric_limits<double>::infinity();
    double p_d2d = 0.0;
    double p_cell = 0.0;
};

// Refined 2-D grid search over the pair power problem in log space.
inline PairOracle grid_search_pair(const NetworkInstance& in, int k, int m, int n = 400,
                                   int refine = 3) {
    const auto ku = static_cast<size_t>(k);
    const auto mu = static_cast<size_t>(m);
    const auto& g = in.gains;
    const auto& rc = in.constants;
    const int D = in.group_size(k);

    auto objective_at = [&](double pd, double pc, double& obj) {
        double beta_d = std::numeric_limits<double>::infinity();
        for (int d = 0; d < D; ++d)
            beta_d = std::min(beta_d, g.g_d2d_self[ku][mu][static_cast<size_t>(d)] /
                                          (rc.noise_mw + pc * g.g_c2d[ku][mu][static_cast<size_t>(d)]));
        const double beta_c = g.g_cell[mu] / (rc.noise_mw + pd * g.g_d2c[ku][mu]);
        if (pd * beta_d < rc.gamma_d2d || pc * beta_c < rc.gamma_cell) return false;
        obj = D * std::log2(pd * beta_d) + std::log2(pc * beta_c);
        return true;
    };

    PairOracle best;
    double lo_d = std::log(rc.p_max_d2d_mw) - 30.0, hi_d = std::log(rc.p_max_d2d_mw);
    double lo_c = std::log(rc.p_max_cell_mw) - 30.0, hi_c = std::log(rc.p_max_cell_mw);
    for (int round = 0; round <= refine; ++round) {
        double arg_d = 0.0, arg_c = 0.0;
        bool found = false;
        double round_best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double pd = std::exp(lo_d + (hi_d - lo_d) * i / n);
                const double pc = std::exp(lo_c + (hi_c - lo_c) * j / n);
                double obj = 0.0;
                if (!objective_at(pd, pc, obj)) continue;
                if (obj > round_best) {
                    round_best = obj;
                    arg_d = lo_d + (hi_d - lo_d) * i / n;
                    arg_c = lo_c + (hi_c - lo_c) * j / n;
                    found = true;
                }
            }
        if (!found) return best;  // infeasible on the grid
        best.feasible = true;
        if (round_best > best.objective) {
            best.objective = round_best;
            best.p_d2d = std::exp(arg_d);
            best.p_cell = std::exp(arg_c);
        }
        const double step_d = 2.0 * (hi_d - lo_d) / n;
        const double step_c = 2.0 * (hi_c - lo_c) / n;
        lo_d = arg_d - step_d;
        hi_d = std::min(arg_d + step_d, std::log(rc.p_max_d2d_mw));
        lo_c = arg_c - step_c;
        hi_c = std::min(arg_c + step_c, std::log(rc.p_max_cell_mw));
    }
    return best;
}

// Every cap-feasible binary matrix, lexicographic order.
inline std::vector<std::vector<std::vector<uint8_t>>> enumerate_binary(int K, int M, int c1,
                                                                       int c2) {
    std::vector<std::vector<std::vector<uint8_t>>> out;
    std::vector<std::vector<uint8_t>> y(static_cast<size_t>(K),
                                        std::vector<uint8_t>(static_cast<size_t>(M), 0));
    std::vector<int> row(static_cast<size_t>(K), 0), col(static_cast<size_t>(M), 0);
    std::function<void(int)> rec = [&](int idx) {
        if (idx == K * M) {
            out.push_back(y);
            return;
        }
        const int k = idx / M;
        const int m = idx % M;
        rec(idx + 1);
        if (row[static_cast<size_t>(k)] < c1 && col[static_cast<size_t>(m)] < c2) {
            y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 1;
            ++row[static_cast<size_t>(k)];
            ++col[static_cast<size_t>(m)];
            rec(idx + 1);
            y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 0;
            --row[static_cast<size_t>(k)];
            --col[static_cast<size_t>(m)];
        }
    };
    rec(0);
    return out;
}

}  // namespace d2d::test

#endif
