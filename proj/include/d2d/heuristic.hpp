#ifndef D2D_HEURISTIC_HPP
#define D2D_HEURISTIC_HPP

#include "d2d/report.hpp"

// Low-complexity allocation: walk the channels in decreasing CU link gain and
// fill each with the groups that currently receive the least interference,
// re-optimizing powers after every tentative addition.

namespace d2d::heuristic {

/// Per-channel minima of the interfering link gains used by the selection rule.
struct Aggregates {
    std::vector<std::vector<double>> g_c2d_min;        // [m][k] min over receivers of group k
    std::vector<std::vector<double>> g_d2d_cross_min;  // [k][kp] min over receivers of group k
};
Aggregates compute_aggregates(const NetworkInstance& instance);

struct Stats {
    int power_solves = 0;
    int reverts = 0;
};

SolveReport solve(const NetworkInstance& instance, const SolverConfig& config,
                  Stats* stats = nullptr);

}  // namespace d2d::heuristic

#endif  // D2D_HEURISTIC_HPP
