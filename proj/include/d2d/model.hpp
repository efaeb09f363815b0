#ifndef D2D_MODEL_HPP
#define D2D_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "d2d/types.hpp"

namespace d2d {

/// All derived quantities of an (instance, assignment) pair. Rates come in
/// two flavors: the high-SINR log2(P*beta) values used by every solver, and
/// the exact log2(1+P*beta) values kept alongside so the approximation error
/// stays observable. Optimality comparisons always use the high-SINR set.
struct EvaluationReport {
    std::vector<std::vector<double>> beta_d2d;  // [k][m]
    std::vector<double> beta_cell;              // [m]

    std::vector<double> r_d2d;    // per-group spectral rate, high-SINR
    std::vector<double> R_d2d;    // |D_k| * r_d2d[k]
    std::vector<double> R_cell;   // per-CU rate, high-SINR
    double R_d2d_total = 0.0;
    double R_cell_total = 0.0;
    double R_sum = 0.0;

    // exact-capacity variants
    std::vector<double> r_d2d_exact;
    std::vector<double> R_d2d_exact;
    std::vector<double> R_cell_exact;
    double R_sum_exact = 0.0;

    double R_cell_max = 0.0;  // cellular-only benchmark at full CU power

    std::vector<int> admitted;             // groups with at least one channel
    std::optional<double> success_rate;    // empty when K = 0
    std::optional<double> fairness;        // empty when no group is admitted
};

struct Violation {
    enum class Kind {
        RowCap,        // sum_m y[k][m] > C1
        ColCap,        // sum_k y[k][m] > C2
        SinrD2D,       // P*beta below gamma_d2d on an active link
        SinrCell,      // P*beta below gamma_cell for a CU
        CellPowerCap,  // p_cell outside (0, p_max_cell]
        D2DPowerBudget,// sum_m p_d2d[k][m] > p_max_d2d
        NegativePower, // p_d2d < 0
        InactivePower, // p_d2d > 0 on an inactive link
        Shape,         // dimension mismatch
    };
    Kind kind;
    int k = -1;
    int m = -1;
    double value = 0.0;
    double bound = 0.0;

    std::string describe() const;
};

class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, int k, int m)
        : std::runtime_error(what), k(k), m(m) {}
    int k;
    int m;
};

/// Path-loss/fading link gain: fading * (distance / 1 m)^(-alpha).
/// Throws std::domain_error on non-positive distance or fading.
double link_gain(double distance_m, double fading, double alpha);

/// Worst-receiver channel quality of group k on channel m. Co-channel D2D
/// interference counts only groups with y[k'][m] = 1.
double beta_d2d(const NetworkInstance& instance, const Assignment& assignment, int k, int m);

/// Channel quality of CU m; D2D interference gated by y.
double beta_cell(const NetworkInstance& instance, const Assignment& assignment, int m);

/// Full metric evaluation. Throws EvaluationError if an active link has a
/// non-positive rate argument.
EvaluationReport evaluate(const NetworkInstance& instance, const Assignment& assignment);

/// Checks caps, SINR thresholds and power limits; returns every violation,
/// not just the first. An empty vector means the assignment is feasible.
std::vector<Violation> validate(const NetworkInstance& instance, const Assignment& assignment,
                                const SolverConfig& config);

/// Jain index over the given rates; empty when the set is empty.
std::optional<double> fairness_index(const std::vector<double>& rates);

/// Fraction of groups with at least one assigned channel; empty when K = 0.
std::optional<double> success_rate(const Assignment& assignment, int num_groups);

}  // namespace d2d

#endif  // D2D_MODEL_HPP
