#include "d2d/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>

#include "d2d/convex.hpp"

namespace d2d::greedy {

SolveReport solve(const NetworkInstance& instance, const SolverConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const int K = instance.num_groups();
    const int M = instance.num_channels();

    SolveReport out;
    out.algorithm = "greedy";

    std::vector<std::vector<uint8_t>> y(static_cast<size_t>(K),
                                        std::vector<uint8_t>(static_cast<size_t>(M), 0));
    std::vector<std::vector<uint8_t>> live = y;
    for (auto& row : live) std::fill(row.begin(), row.end(), 1);
    std::vector<int> row_count(static_cast<size_t>(K), 0), col_count(static_cast<size_t>(M), 0);

    double current = 0.0;  // cellular-only baseline
    for (int m = 0; m < M; ++m)
        current += std::log2(instance.constants.p_max_cell_mw *
                             instance.gains.g_cell[static_cast<size_t>(m)] /
                             instance.constants.noise_mw);

    std::optional<convex::PrimalOutcome> accepted;
    int round = 0;
    while (true) {
        ++round;
        // drop pairs blocked by the caps; they can never come back
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m) {
                if (!live[static_cast<size_t>(k)][static_cast<size_t>(m)]) continue;
                if (row_count[static_cast<size_t>(k)] >= config.c1 ||
                    col_count[static_cast<size_t>(m)] >= config.c2)
                    live[static_cast<size_t>(k)][static_cast<size_t>(m)] = 0;
            }

        int best_k = -1, best_m = -1;
        double best_t = -std::numeric_limits<double>::infinity();
        std::optional<convex::PrimalOutcome> best_outcome;
        int candidates = 0;
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m) {
                if (!live[static_cast<size_t>(k)][static_cast<size_t>(m)]) continue;
                ++candidates;
                y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 1;
                convex::PrimalOutcome outcome;
                bool failed = false;
                try {
                    outcome = convex::solve_primal(instance, y, config);
                } catch (const std::exception&) {
                    failed = true;
                }
                y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 0;
                if (failed || outcome.status != convex::SolveStatus::Optimal) {
                    live[static_cast<size_t>(k)][static_cast<size_t>(m)] = 0;
                    continue;
                }
                if (outcome.objective > best_t + 1e-12) {
                    best_t = outcome.objective;
                    best_k = k;
                    best_m = m;
                    best_outcome = std::move(outcome);
                }
            }
        if (candidates == 0 || best_k < 0 || best_t <= current + 1e-7) break;

        y[static_cast<size_t>(best_k)][static_cast<size_t>(best_m)] = 1;
        live[static_cast<size_t>(best_k)][static_cast<size_t>(best_m)] = 0;
        ++row_count[static_cast<size_t>(best_k)];
        ++col_count[static_cast<size_t>(best_m)];
        current = best_t;
        accepted = std::move(best_outcome);
        if (config.trace)
            *config.trace << "greedy round=" << round << " candidates=" << candidates
                          << " chose=(" << best_k << "," << best_m << ") t_sum=" << best_t << "\n";
    }

    out.assignment = accepted ? accepted->assignment : Assignment::cellular_only(instance);
    out.report = evaluate(instance, out.assignment);
    out.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace d2d::greedy
