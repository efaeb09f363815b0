#ifndef D2D_MATCHING_HPP
#define D2D_MATCHING_HPP

#include "d2d/convex.hpp"
#include "d2d/report.hpp"

// Exact polynomial solver for the one-channel-per-group, one-group-per-channel
// case: a per-pair power-control sweep followed by maximum-weight bipartite
// matching.

namespace d2d::matching {

struct WeightMatrix {
    std::vector<std::vector<double>> w;           // [k][m] pair sum rate or CU-only rate
    std::vector<std::vector<uint8_t>> candidate;  // pair solved feasibly
    std::vector<std::vector<convex::PairSolution>> pair;
    std::vector<double> cu_only;                  // log2(pmax * g_cell / noise)
};

/// K x M sweep of the per-pair power optimization; non-candidates carry the
/// CU-only weight so leaving a channel unshared is always expressible.
WeightMatrix build_weights(const NetworkInstance& instance, const SolverConfig& config);

/// Tab-separated dump of the weight matrix for inspection.
void dump_weights(std::ostream& os, const WeightMatrix& wm);

/// Maximum-weight one-to-one assignment of rows to columns (rectangular
/// matrices handled by padding). Returns for each row its column, or -1.
/// Ties are broken toward the lexicographically smallest assignment vector.
std::vector<int> hungarian_max(const std::vector<std::vector<double>>& weights);

/// Requires C1 = C2 = 1 in the config.
SolveReport solve(const NetworkInstance& instance, const SolverConfig& config);

}  // namespace d2d::matching

#endif  // D2D_MATCHING_HPP
