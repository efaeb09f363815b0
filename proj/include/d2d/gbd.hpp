#ifndef D2D_GBD_HPP
#define D2D_GBD_HPP

#include "d2d/convex.hpp"
#include "d2d/report.hpp"

// Benders-style decomposition of the allocation MINLP: continuous primal
// solves produce Lagrangian cuts that are exact affine functions of the
// binary matrix; a relaxed master maximizes the resulting bound over binary
// allocations under the C1/C2 caps.

namespace d2d::gbd {

/// Builds the optimality cut for a solved primal: the Lagrange function
/// evaluated at the primal optimum, expanded symbolically in Y. Multipliers
/// of the eliminated gate rows of the reduced primal are completed in closed
/// form (they equal one on both sides of the rate epigraph).
Cut optimality_cut(const convex::PrimalOutcome& primal, const convex::GateConstants& constants,
                   int iteration);

/// Feasibility cut from an l1-infeasible primal: sum of simplex-normalized
/// multipliers times constraint values, affine in Y; positive at the
/// generating point. Throws std::logic_error when alpha_sum is zero.
Cut feasibility_cut(const convex::FeasibilityOutcome& feas,
                    const std::vector<std::vector<uint8_t>>& y_fixed, int iteration);

struct MasterResult {
    bool feasible = false;
    bool exact = true;       // false when the node budget truncated the search
    double eta = 0.0;        // valid upper bound on the master optimum
    std::vector<std::vector<uint8_t>> y;
};

/// Exact solve of the relaxed master: maximize eta subject to all cuts and
/// the row/column caps, y binary. Exhaustive enumeration for K*M <= enum_limit,
/// LP-based branch-and-bound otherwise. Requires at least one optimality cut.
MasterResult solve_relaxed_master(const std::vector<Cut>& cuts, int K, int M, int c1, int c2,
                                  int enum_limit = 12, int node_budget = 4000,
                                  const std::vector<std::vector<std::vector<uint8_t>>>&
                                      incumbent_candidates = {});

/// Full decomposition loop (Algorithm-1 shape): primal at the all-zero
/// allocation, then master/primal alternation until the bound gap closes or
/// a budget is hit. Returns the incumbent with its evaluation and the
/// recorded bound history.
SolveReport solve(const NetworkInstance& instance, const SolverConfig& config);

}  // namespace d2d::gbd

#endif  // D2D_GBD_HPP
