#ifndef D2D_CONVEX_HPP
#define D2D_CONVEX_HPP

#include <string>
#include <utility>
#include <vector>

#include "d2d/types.hpp"

// Continuous subproblems of the allocation MINLP. Fixing the binary matrix
// turns the power-control problem into a geometric program; everything here
// works on its log-transformed convex form, built from two atom kinds only:
// affine expressions and log-sum-exp of affine expressions.

namespace d2d::convex {

enum class Family {
    RateGateUb,    // r - a(u+b) + cA*y - cA <= 0            per (k,m)
    RateGateOn,    // r - cB*y <= 0                          per (k,m)
    BetaCell,      // beta_cell upper bound (log-sum-exp)    per m
    BetaD2D,       // beta_d2d upper bound (log-sum-exp)     per (k,m,d)
    SinrD2D,       // ln g_d - u - b - S(1-y) <= 0           per (k,m)
    SinrCell,      // ln g_c - v - c <= 0                    per m
    CellPowerCap,  // v - ln pmax_cell <= 0                  per m
    D2DBudget,     // log-sum-exp power budget               per k
    LinkUb,        // power-activation upper link            per (k,m)
    LinkLb,        // power-activation lower link            per (k,m)
    BoxLo,         // variable box, lower (k = var index)
    BoxHi,         // variable box, upper (k = var index)
};

struct ConstraintTag {
    Family family;
    int k = -1;
    int m = -1;
    int d = -1;
    friend bool operator==(const ConstraintTag&, const ConstraintTag&) = default;
};
std::string to_string(const ConstraintTag& tag);

struct AffineTerm {
    int var;
    double coef;
};

struct AffineExpr {
    std::vector<AffineTerm> terms;
    double constant = 0.0;
    double eval(const std::vector<double>& x) const {
        double v = constant;
        for (const auto& t : terms) v += t.coef * x[static_cast<size_t>(t.var)];
        return v;
    }
};

/// One convex inequality G(x) <= 0: either affine, or ln(sum_j exp(e_j(x)))
/// with affine exponents e_j. `y_coef` records dG/dy_{k,m} of the constraint's
/// symbolic dependence on the binary matrix (flat index k*M+m), which is what
/// makes Lagrangian cuts affine in Y.
struct Constraint {
    ConstraintTag tag;
    bool is_lse = false;
    AffineExpr affine;
    std::vector<AffineExpr> exps;
    std::vector<std::pair<int, double>> y_coef;
    bool relaxable = true;  // participates in phase-I / l1 relaxation

    double value(const std::vector<double>& x) const;
};

struct ConvexProgram {
    int num_vars = 0;
    int y_rows = 0;  // K of the originating instance (0 for ad-hoc programs)
    int y_cols = 0;  // M
    AffineExpr objective;  // maximized
    std::vector<Constraint> constraints;
    std::vector<double> x_init;  // strictly inside all box constraints
    std::vector<std::string> var_names;
};

enum class SolveStatus { Optimal, Infeasible, IterationLimit };

struct KktInfo {
    double stationarity = 0.0;    // inf-norm of objective minus multiplier combination
    double complementarity = 0.0; // max |lambda_q * G_q|
    double duality_gap = 0.0;     // Q / t at the final barrier stage
    int newton_iters = 0;
};

struct PrimalSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    std::vector<double> multipliers;  // one per constraint, in program-constraint units
    std::vector<double> g_values;     // constraint values at x
    KktInfo kkt;
};

/// Path-following barrier solve of a convex program (phase-I included).
PrimalSolution solve(const ConvexProgram& program, const BarrierOptions& options);

struct FeasibilitySolution {
    SolveStatus status = SolveStatus::Optimal;
    double alpha_sum = 0.0;
    std::vector<double> x;
    std::vector<double> multipliers;  // normalized onto the simplex; 0 for boxes
    std::vector<double> alphas;       // slacks per constraint; 0 for boxes
    std::vector<double> g_values;
};

/// l1 slack minimization: min sum(alpha) s.t. G_q(x) <= alpha_q, alpha >= 0.
FeasibilitySolution solve_l1(const ConvexProgram& program, const BarrierOptions& options);

// ---------- instance-derived constants ----------

/// Gate and linking constants of the binary-separated transformation, scaled
/// per pair from achievable-rate bounds so master cuts keep usable slopes.
struct GateConstants {
    double big_c = 0.0;       // global big constant (factor x max single-link rate)
    double p_floor_on = 0.0;  // lower power bound of an active link
    double p_floor_off = 0.0; // lower power bound of an inactive link
    double c_link = 0.0;      // linking constant: y + eps <= c_link * P
    std::vector<double> a;    // |D_k| / ln 2
    std::vector<std::vector<double>> c_a;      // rate-gate release constants
    std::vector<std::vector<double>> c_b;      // per-pair activation rate bounds
    std::vector<std::vector<double>> s_width;  // SINR-gate release widths
    std::vector<std::vector<double>> b_ub;     // interference-free ln beta_d2d bounds
    std::vector<std::vector<double>> b_lb;     // full-interference ln beta_d2d bounds
};
GateConstants compute_gate_constants(const NetworkInstance& instance, const SolverConfig& config);

// ---------- problem builders and high-level solves ----------

using BinaryMatrix = std::vector<std::vector<uint8_t>>;

/// Full log-transformed primal for a fixed binary matrix: log-power, log-beta
/// and auxiliary per-channel rate variables, big-constant gates, power
/// linking, SINR thresholds and power caps. Throws on a non-binary or
/// cap-violating matrix.
ConvexProgram build_primal(const NetworkInstance& instance, const BinaryMatrix& y,
                           const SolverConfig& config);

/// l1 feasibility check of the primal at the given binary matrix.
FeasibilitySolution solve_feasibility(const NetworkInstance& instance, const BinaryMatrix& y,
                                      const SolverConfig& config);

struct PairSolution {
    bool feasible = false;
    double p_d2d = 0.0;
    double p_cell = 0.0;
    double rate_d2d = 0.0;   // |D_k| * log2(P beta), recomputed at the optimum
    double rate_cell = 0.0;  // log2(P beta)
    double objective = 0.0;  // rate_d2d + rate_cell
};

/// Two-transmitter power optimization for one (group, channel) pair with no
/// cross-group interference; the building block of the matching solver.
PairSolution solve_pair(const NetworkInstance& instance, int k, int m, const SolverConfig& config);

// ---------- reduced-path solves (hot path of the search loops) ----------
//
// The gated problem only involves powers of active pairs; the reduced program
// drops inactive-pair variables and gate rows entirely. Multipliers of the
// eliminated constraints are known in closed form (the rate epigraph forces
// gate multipliers of 1), so decomposition cuts can be completed analytically;
// see gbd.cpp.

struct PrimalOutcome {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    Assignment assignment;
    ConvexProgram program;    // reduced program with tags and y-coefficients
    PrimalSolution solution;  // aligned with `program`
};
PrimalOutcome solve_primal(const NetworkInstance& instance, const BinaryMatrix& y,
                           const SolverConfig& config);

struct FeasibilityOutcome {
    SolveStatus status = SolveStatus::Optimal;
    double alpha_sum = 0.0;
    ConvexProgram program;
    FeasibilitySolution solution;
};
FeasibilityOutcome solve_primal_feasibility(const NetworkInstance& instance, const BinaryMatrix& y,
                                            const SolverConfig& config);

}  // namespace d2d::convex

#endif  // D2D_CONVEX_HPP
