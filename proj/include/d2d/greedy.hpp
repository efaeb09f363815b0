#ifndef D2D_GREEDY_HPP
#define D2D_GREEDY_HPP

#include "d2d/report.hpp"

// Incremental pair selection: each round solves the power problem for every
// live (group, channel) candidate added to the current selection and keeps
// the best strictly-improving one. Pairs that are infeasible or blocked by
// the caps are removed for good.

namespace d2d::greedy {

SolveReport solve(const NetworkInstance& instance, const SolverConfig& config);

}  // namespace d2d::greedy

#endif  // D2D_GREEDY_HPP
