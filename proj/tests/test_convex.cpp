#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "d2d/convex.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace d2d;
using namespace d2d::convex;

namespace {

// maximize ln x subject to x <= cap, expressed in xi = ln x
ConvexProgram one_dim_program(double cap) {
    ConvexProgram p;
    p.num_vars = 1;
    p.objective.terms = {{0, 1.0}};
    Constraint c;
    c.tag = {Family::CellPowerCap, -1, 0, -1};
    c.is_lse = true;
    c.exps.push_back({{{0, 1.0}}, -std::log(cap)});
    p.constraints.push_back(std::move(c));
    Constraint lo;
    lo.tag = {Family::BoxLo, 0, -1, -1};
    lo.relaxable = false;
    lo.affine.terms = {{0, -1.0}};
    lo.affine.constant = -10.0;
    p.constraints.push_back(std::move(lo));
    Constraint hi;
    hi.tag = {Family::BoxHi, 0, -1, -1};
    hi.relaxable = false;
    hi.affine.terms = {{0, 1.0}};
    hi.affine.constant = -10.0;
    p.constraints.push_back(std::move(hi));
    p.x_init = {0.0};
    return p;
}

}  // namespace

TEST_CASE("barrier solve of max ln x s.t. x <= 2 recovers the hand KKT point") {
    BarrierOptions opt;
    const auto sol = solve(one_dim_program(2.0), opt);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const double x = std::exp(sol.x[0]);
    CHECK(x == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sol.objective == doctest::Approx(std::log(2.0)).epsilon(1e-8));
    // multiplier of the program constraint ln(x/2) <= 0 is 1; in units of the
    // original inequality x - 2 <= 0 it is 1 * dln(x/2)/dx = 1/x = 0.5
    const double lambda_log = sol.multipliers[0];
    CHECK(lambda_log == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(lambda_log / x == doctest::Approx(0.5).epsilon(1e-5));
    // KKT residuals
    CHECK(sol.kkt.stationarity <= 1e-6);
    for (size_t q = 0; q < sol.multipliers.size(); ++q)
        CHECK(std::abs(sol.multipliers[q] * sol.g_values[q]) <= 1e-6);
}

TEST_CASE("perturbing a tight constraint moves the optimum by lambda * delta") {
    BarrierOptions opt;
    const auto base = solve(one_dim_program(2.0), opt);
    const double delta = 1e-3;
    const auto moved = solve(one_dim_program(2.0 * std::exp(delta)), opt);
    const double predicted = base.multipliers[0] * delta;
    CHECK(moved.objective - base.objective == doctest::Approx(predicted).epsilon(0.01));
}

TEST_CASE("infeasible box is certified") {
    // x <= 1 together with x >= 2
    ConvexProgram p;
    p.num_vars = 1;
    p.objective.terms = {{0, 1.0}};
    Constraint a;
    a.tag = {Family::CellPowerCap, -1, 0, -1};
    a.affine.terms = {{0, 1.0}};
    a.affine.constant = -std::log(1.0);
    p.constraints.push_back(std::move(a));
    Constraint b;
    b.tag = {Family::SinrCell, -1, 0, -1};
    b.affine.terms = {{0, -1.0}};
    b.affine.constant = std::log(2.0);
    p.constraints.push_back(std::move(b));
    Constraint lo;
    lo.tag = {Family::BoxLo, 0, -1, -1};
    lo.relaxable = false;
    lo.affine.terms = {{0, -1.0}};
    lo.affine.constant = -20.0;
    p.constraints.push_back(std::move(lo));
    Constraint hi;
    hi.tag = {Family::BoxHi, 0, -1, -1};
    hi.relaxable = false;
    hi.affine.terms = {{0, 1.0}};
    hi.affine.constant = -20.0;
    p.constraints.push_back(std::move(hi));
    p.x_init = {0.5};

    BarrierOptions opt;
    CHECK(solve(p, opt).status == SolveStatus::Infeasible);
}

TEST_CASE("full primal build: structure and tags") {
    auto in = test::random_instance(5, 1, 1);
    SolverConfig cfg;
    cfg.c1 = cfg.c2 = 1;

    SUBCASE("K=1, M=1, active pair") {
        const BinaryMatrix y = {{1}};
        const auto prog = build_primal(in, y, cfg);
        CHECK(prog.num_vars == 5);  // two powers, two betas, one rate
        // all families present, tags unique
        std::vector<ConstraintTag> seen;
        bool fam[12] = {};
        for (const auto& c : prog.constraints) {
            for (const auto& t : seen) CHECK(!(t == c.tag));
            seen.push_back(c.tag);
            fam[static_cast<int>(c.tag.family)] = true;
        }
        for (int f = 0; f < 12; ++f) CHECK(fam[f]);
    }
    SUBCASE("all-off matrix pins the D2D power to the linking window") {
        const BinaryMatrix y = {{0}};
        const auto prog = build_primal(in, y, cfg);
        BarrierOptions opt;
        const auto sol = solve(prog, opt);
        REQUIRE(sol.status == SolveStatus::Optimal);
        const auto gc = compute_gate_constants(in, cfg);
        const double p = std::exp(sol.x[0]);
        CHECK(p >= gc.p_floor_off * 0.5);
        CHECK(p <= cfg.epsilon * in.constants.p_max_d2d_mw * 1.5);
        // objective reduces to the cellular term
        const double r_cell_max = std::log2(in.constants.p_max_cell_mw *
                                            in.gains.g_cell[0] / in.constants.noise_mw);
        CHECK(sol.objective == doctest::Approx(r_cell_max).epsilon(1e-3));
    }
    SUBCASE("unreachable cellular threshold: construction works, solve is infeasible") {
        auto hard = in;
        hard.constants.gamma_cell = 1e30;
        const BinaryMatrix y = {{0}};
        const auto prog = build_primal(hard, y, cfg);
        BarrierOptions opt;
        CHECK(solve(prog, opt).status == SolveStatus::Infeasible);
    }
    SUBCASE("non-binary or cap-violating matrices are rejected") {
        CHECK_THROWS_AS(build_primal(in, {{2}}, cfg), std::invalid_argument);
        auto in2 = test::random_instance(6, 2, 1);
        CHECK_THROWS_AS(build_primal(in2, {{1, 1}}, cfg), std::invalid_argument);  // C1 = 1
    }
}

TEST_CASE("solve_pair: interference-free pairs sit at both power caps") {
    auto in = test::manual_instance(1, {3}, 2e-7, 1e-30, 4e-7, 1e-30);
    SolverConfig cfg;
    const auto ps = solve_pair(in, 0, 0, cfg);
    REQUIRE(ps.feasible);
    const auto& rc = in.constants;
    CHECK(ps.p_d2d == doctest::Approx(rc.p_max_d2d_mw).epsilon(1e-5));
    CHECK(ps.p_cell == doctest::Approx(rc.p_max_cell_mw).epsilon(1e-5));
    CHECK(ps.rate_d2d ==
          doctest::Approx(3.0 * std::log2(rc.p_max_d2d_mw * 4e-7 / rc.noise_mw)).epsilon(1e-6));
    CHECK(ps.rate_cell ==
          doctest::Approx(std::log2(rc.p_max_cell_mw * 2e-7 / rc.noise_mw)).epsilon(1e-6));
}

TEST_CASE("solve_pair matches the refined grid-search oracle") {
    int checked = 0;
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        const auto in = test::random_instance(seed, 2, 2);
        SolverConfig cfg;
        for (int k = 0; k < 2; ++k)
            for (int m = 0; m < 2; ++m) {
                const auto ps = solve_pair(in, k, m, cfg);
                const auto oracle = test::grid_search_pair(in, k, m);
                CHECK(ps.feasible == oracle.feasible);
                if (ps.feasible && oracle.feasible) {
                    CHECK(std::abs(ps.objective - oracle.objective) <= 1e-3);
                    ++checked;
                }
            }
    }
    CHECK(checked >= 4);  // the batch must actually exercise feasible pairs
}

TEST_CASE("solve_pair: unreachable D2D threshold is infeasible") {
    auto in = test::random_instance(3, 1, 1);
    in.constants.gamma_d2d = 1e30;
    SolverConfig cfg;
    CHECK(!solve_pair(in, 0, 0, cfg).feasible);
}

TEST_CASE("pair objective equals the full primal on the 1x1 instance") {
    for (uint64_t seed = 21; seed <= 23; ++seed) {
        const auto in = test::random_instance(seed, 1, 1);
        SolverConfig cfg;
        cfg.c1 = cfg.c2 = 1;
        const auto ps = solve_pair(in, 0, 0, cfg);
        const auto prog = build_primal(in, {{1}}, cfg);
        const auto sol = solve(prog, cfg.barrier);
        if (!ps.feasible) {
            CHECK(sol.status != SolveStatus::Optimal);
            continue;
        }
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(std::abs(ps.objective - sol.objective) <= 1e-6 * (1.0 + std::abs(ps.objective)));
    }
}

TEST_CASE("reduced primal agrees with the full transformation") {
    for (uint64_t seed = 31; seed <= 33; ++seed) {
        const auto in = test::random_instance(seed, 2, 2);
        SolverConfig cfg;
        cfg.c1 = cfg.c2 = 1;
        const BinaryMatrix y = {{1, 0}, {0, 1}};
        const auto reduced = solve_primal(in, y, cfg);
        const auto full = solve(build_primal(in, y, cfg), cfg.barrier);
        REQUIRE(reduced.status == full.status);
        if (reduced.status != SolveStatus::Optimal) continue;
        CHECK(std::abs(reduced.objective - full.objective) <=
              1e-3 * (1.0 + std::abs(full.objective)));
        // returned point satisfies the original constraints
        CHECK(validate(in, reduced.assignment, cfg).empty());
        // reports agree with the solver objective
        const auto rep = evaluate(in, reduced.assignment);
        CHECK(std::abs(rep.R_sum - reduced.objective) <=
              1e-3 * (1.0 + std::abs(reduced.objective)));
    }
}

TEST_CASE("raising the SINR threshold never improves the optimum") {
    const auto in = test::random_instance(41, 2, 2);
    SolverConfig cfg;
    cfg.c1 = cfg.c2 = 1;
    const BinaryMatrix y = {{1, 0}, {0, 1}};
    double prev = std::numeric_limits<double>::infinity();
    for (double gamma_db : {0.0, 5.0, 10.0, 15.0}) {
        auto hard = in;
        hard.constants.gamma_d2d = db_to_lin(gamma_db);
        hard.constants.gamma_cell = db_to_lin(gamma_db);
        const auto out = solve_primal(hard, y, cfg);
        if (out.status != SolveStatus::Optimal) break;  // once infeasible, stays infeasible
        CHECK(out.objective <= prev + 1e-6);
        prev = out.objective;
    }
}

TEST_CASE("l1 feasibility: zero slack on feasible points, positive otherwise") {
    const auto in = test::random_instance(51, 2, 2);
    SolverConfig cfg;
    cfg.c1 = cfg.c2 = 1;
    SUBCASE("feasible matrix") {
        const auto fo = solve_feasibility(in, {{0, 0}, {0, 0}}, cfg);
        CHECK(fo.alpha_sum <= 1e-5);
    }
    SUBCASE("forced infeasibility and simplex normalization") {
        auto hard = in;
        hard.constants.gamma_d2d *= 1e6;
        hard.constants.gamma_cell *= 1e6;
        const auto fo = solve_feasibility(hard, {{1, 0}, {0, 1}}, cfg);
        CHECK(fo.alpha_sum > 1.0);
        double sum = 0.0;
        for (double l : fo.multipliers) {
            CHECK(l >= -1e-12);
            sum += l;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("KKT quality on a representative reduced solve") {
    const auto in = test::random_instance(61, 3, 2);
    SolverConfig cfg;
    cfg.c1 = 2;
    cfg.c2 = 2;
    const BinaryMatrix y = {{1, 1, 0}, {0, 0, 1}};
    const auto out = solve_primal(in, y, cfg);
    if (out.status == SolveStatus::Optimal) {
        CHECK(out.solution.kkt.stationarity <= 1e-6);
        CHECK(out.solution.kkt.complementarity <= 1e-6);
        for (size_t q = 0; q < out.program.constraints.size(); ++q)
            CHECK(out.solution.g_values[q] <= 1e-12);  // strictly feasible point
    }
}
