#ifndef D2D_REPORT_HPP
#define D2D_REPORT_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "d2d/model.hpp"

namespace d2d::gbd {

/// One affine-in-Y master cut. An optimality cut encodes
/// eta <= constant + sum coeffs[k][m] * y[k][m]; a feasibility cut encodes
/// constant + sum coeffs[k][m] * y[k][m] <= 0.
struct Cut {
    enum class Kind { Optimality, Feasibility };
    Kind kind = Kind::Optimality;
    double constant = 0.0;
    std::vector<std::vector<double>> coeffs;  // [k][m]
    int source_iteration = 0;

    double value_at(const std::vector<std::vector<uint8_t>>& y) const {
        double v = constant;
        for (size_t k = 0; k < coeffs.size(); ++k)
            for (size_t m = 0; m < coeffs[k].size(); ++m)
                if (y[k][m]) v += coeffs[k][m];
        return v;
    }
};

struct GbdIterate {
    int iteration = 0;
    double ubd = std::numeric_limits<double>::infinity();
    double lbd = -std::numeric_limits<double>::infinity();
    char cut_kind = '-';  // 'o' optimality, 'f' feasibility, 's' warm seed
    std::vector<std::vector<uint8_t>> y;
};

struct GbdState {
    int iterations = 0;
    double ubd = std::numeric_limits<double>::infinity();
    double lbd = -std::numeric_limits<double>::infinity();
    std::vector<Cut> cuts;
    std::vector<GbdIterate> history;
    bool proven_optimal = false;
    bool master_exhausted = false;
    bool hit_iteration_cap = false;
    bool hit_time_budget = false;
};

}  // namespace d2d::gbd

namespace d2d {

/// Common result of every allocation algorithm.
struct SolveReport {
    std::string algorithm;
    Assignment assignment;
    EvaluationReport report;
    bool found_solution = true;   // false when even the cellular-only point fails
    bool proven_optimal = false;
    double gap = 0.0;             // UBD - LBD, decomposition only
    double wall_time_sec = 0.0;
    std::optional<gbd::GbdState> gbd_state;
};

}  // namespace d2d

#endif  // D2D_REPORT_HPP
