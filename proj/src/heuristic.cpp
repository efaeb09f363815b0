#include "d2d/heuristic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>

#include "d2d/convex.hpp"

namespace d2d::heuristic {

Aggregates compute_aggregates(const NetworkInstance& instance) {
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    Aggregates agg;
    agg.g_c2d_min.assign(static_cast<size_t>(M), std::vector<double>(static_cast<size_t>(K), 0.0));
    agg.g_d2d_cross_min.assign(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(K), 0.0));
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k) {
            double mn = std::numeric_limits<double>::infinity();
            for (double v : instance.gains.g_c2d[static_cast<size_t>(k)][static_cast<size_t>(m)])
                mn = std::min(mn, v);
            agg.g_c2d_min[static_cast<size_t>(m)][static_cast<size_t>(k)] = mn;
        }
    for (int k = 0; k < K; ++k)
        for (int kp = 0; kp < K; ++kp) {
            if (kp == k) continue;
            double mn = std::numeric_limits<double>::infinity();
            for (double v : instance.gains.g_d2d_cross[static_cast<size_t>(k)][static_cast<size_t>(kp)])
                mn = std::min(mn, v);
            agg.g_d2d_cross_min[static_cast<size_t>(k)][static_cast<size_t>(kp)] = mn;
        }
    return agg;
}

SolveReport solve(const NetworkInstance& instance, const SolverConfig& config, Stats* stats) {
    const auto t0 = std::chrono::steady_clock::now();
    const int K = instance.num_groups();
    const int M = instance.num_channels();

    SolveReport out;
    out.algorithm = "heuristic";

    // channels in decreasing CU link gain, ties to the lower index
    std::vector<int> order(static_cast<size_t>(M));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return instance.gains.g_cell[static_cast<size_t>(a)] > instance.gains.g_cell[static_cast<size_t>(b)];
    });

    const Aggregates agg = compute_aggregates(instance);
    std::vector<std::vector<uint8_t>> y(static_cast<size_t>(K),
                                        std::vector<uint8_t>(static_cast<size_t>(M), 0));
    std::vector<int> row_count(static_cast<size_t>(K), 0);
    // current powers: CU at cap, D2D silent until assigned
    std::vector<double> p_cell(static_cast<size_t>(M), instance.constants.p_max_cell_mw);
    std::vector<std::vector<double>> p_d2d(static_cast<size_t>(K),
                                           std::vector<double>(static_cast<size_t>(M), 0.0));
    std::optional<convex::PrimalOutcome> accepted;
    Stats local{};

    for (int m : order) {
        int assigned = 0;
        std::vector<uint8_t> tried(static_cast<size_t>(K), 0);
        while (assigned < config.c2) {
            int kstar = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < K; ++k) {
                if (tried[static_cast<size_t>(k)] || row_count[static_cast<size_t>(k)] >= config.c1)
                    continue;
                double interference = p_cell[static_cast<size_t>(m)] *
                                      agg.g_c2d_min[static_cast<size_t>(m)][static_cast<size_t>(k)];
                for (int kp = 0; kp < K; ++kp) {
                    if (kp == k) continue;
                    interference += p_d2d[static_cast<size_t>(kp)][static_cast<size_t>(m)] *
                                    agg.g_d2d_cross_min[static_cast<size_t>(k)][static_cast<size_t>(kp)];
                }
                if (interference < best - 1e-15) {
                    best = interference;
                    kstar = k;
                }
            }
            if (kstar < 0) break;
            tried[static_cast<size_t>(kstar)] = 1;

            y[static_cast<size_t>(kstar)][static_cast<size_t>(m)] = 1;
            ++local.power_solves;
            convex::PrimalOutcome outcome;
            bool ok = false;
            try {
                outcome = convex::solve_primal(instance, y, config);
                ok = outcome.status == convex::SolveStatus::Optimal;
            } catch (const std::exception&) {
                ok = false;
            }
            if (ok) {
                ++assigned;
                ++row_count[static_cast<size_t>(kstar)];
                p_cell = outcome.assignment.p_cell;
                p_d2d = outcome.assignment.p_d2d;
                accepted = std::move(outcome);
                if (config.trace)
                    *config.trace << "heuristic: channel " << m << " <- group " << kstar << "\n";
            } else {
                y[static_cast<size_t>(kstar)][static_cast<size_t>(m)] = 0;
                ++local.reverts;
                if (config.trace)
                    *config.trace << "heuristic: channel " << m << " revert group " << kstar << "\n";
            }
        }
    }

    out.assignment = accepted ? accepted->assignment : Assignment::cellular_only(instance);
    out.report = evaluate(instance, out.assignment);
    out.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (stats) *stats = local;
    return out;
}

}  // namespace d2d::heuristic
