#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "d2d/bench.hpp"
#include "d2d/gbd.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace d2d;
using namespace d2d::gbd;

namespace {

// synthetic primal outcome for cut-assembly checks
convex::PrimalOutcome synthetic_outcome(double objective, double lambda, double y_coef,
                                        uint8_t y_val) {
    convex::PrimalOutcome out;
    out.status = convex::SolveStatus::Optimal;
    out.objective = objective;
    out.assignment.y = {{y_val}};
    out.program.y_rows = 1;
    out.program.y_cols = 1;
    out.program.num_vars = 1;
    convex::Constraint c;
    c.tag = {convex::Family::RateGateOn, 0, 0, -1};
    c.y_coef = {{0, y_coef}};
    out.program.constraints.push_back(std::move(c));
    out.solution.multipliers = {lambda};
    out.solution.g_values = {0.0};
    return out;
}

convex::GateConstants zero_gates() {
    convex::GateConstants gc;
    gc.a = {1.0};
    gc.c_a = {{0.0}};
    gc.c_b = {{0.0}};
    gc.s_width = {{0.0}};
    gc.b_ub = {{0.0}};
    gc.b_lb = {{0.0}};
    return gc;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("optimality cut: zero multipliers leave a constant cut") {
    const auto cut = optimality_cut(synthetic_outcome(5.0, 0.0, -100.0, 1), zero_gates(), 1);
    CHECK(cut.kind == Cut::Kind::Optimality);
    CHECK(cut.constant == doctest::Approx(5.0).epsilon(1e-5));  // small safety margin included
    CHECK(cut.coeffs[0][0] == doctest::Approx(0.0));
}

TEST_CASE("optimality cut: a binding activation gate contributes lambda * C") {
    const double C = 40.0, lambda = 0.7;
    const auto cut = optimality_cut(synthetic_outcome(9.0, lambda, -C, 1), zero_gates(), 2);
    CHECK(cut.coeffs[0][0] == doctest::Approx(lambda * C).epsilon(1e-12));
    // at the generating point the cut evaluates back to the objective
    CHECK(cut.value_at({{1}}) == doctest::Approx(9.0).epsilon(1e-5));
}

TEST_CASE("cuts from real primal solves are valid under-estimator bounds") {
    SolverConfig cfg;
    cfg.c1 = cfg.c2 = 1;
    const auto gc_list = test::enumerate_binary(2, 2, 1, 1);
    REQUIRE(gc_list.size() == 7);

    for (uint64_t seed : {101u, 102u}) {
        const auto in = test::random_instance(seed, 2, 2);
        const auto gc = convex::compute_gate_constants(in, cfg);
        // value of every cap-feasible binary matrix
        std::vector<double> value(gc_list.size(),
                                  -std::numeric_limits<double>::infinity());
        std::vector<convex::PrimalOutcome> outcomes(gc_list.size());
        for (size_t i = 0; i < gc_list.size(); ++i) {
            outcomes[i] = convex::solve_primal(in, gc_list[i], cfg);
            if (outcomes[i].status == convex::SolveStatus::Optimal)
                value[i] = outcomes[i].objective;
        }
        for (size_t i = 0; i < gc_list.size(); ++i) {
            if (outcomes[i].status != convex::SolveStatus::Optimal) continue;
            const auto cut = optimality_cut(outcomes[i], gc, static_cast<int>(i));
            // exact at its own point
            CHECK(std::abs(cut.value_at(gc_list[i]) - value[i]) <= 1e-4);
            // valid everywhere else
            for (size_t j = 0; j < gc_list.size(); ++j)
                if (std::isfinite(value[j]))
                    CHECK(cut.value_at(gc_list[j]) >= value[j] - 1e-5);
        }
    }
}

TEST_CASE("feasibility cut separates its generator and keeps feasible points") {
    SolverConfig cfg;
    cfg.c1 = cfg.c2 = 1;
    auto in = test::random_instance(103, 2, 2);
    in.constants.gamma_d2d *= 1e6;  // force D2D infeasibility
    const auto ys = test::enumerate_binary(2, 2, 1, 1);
    bool tested = false;
    for (const auto& y : ys) {
        bool any_active = false;
        for (const auto& row : y)
            for (uint8_t v : row) any_active |= v != 0;
        if (!any_active) continue;
        const auto primal = convex::solve_primal(in, y, cfg);
        if (primal.status == convex::SolveStatus::Optimal) continue;
        const auto fo = convex::solve_primal_feasibility(in, y, cfg);
        REQUIRE(fo.alpha_sum > 0.0);
        const auto cut = feasibility_cut(fo, y, 1);
        CHECK(cut.value_at(y) > 0.0);  // separation
        // the always-feasible zero matrix stays inside
        const std::vector<std::vector<uint8_t>> zero = {{0, 0}, {0, 0}};
        CHECK(cut.value_at(zero) <= 1e-9);
        // multipliers arrived normalized
        double sum = 0.0;
        for (double l : fo.solution.multipliers) sum += l;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
        tested = true;
    }
    CHECK(tested);
}

TEST_CASE("feasibility_cut refuses a zero-slack solution") {
    convex::FeasibilityOutcome fo;
    fo.alpha_sum = 0.0;
    CHECK_THROWS_AS(feasibility_cut(fo, {{0}}, 1), std::logic_error);
}

TEST_CASE("relaxed master: single binary examples") {
    SUBCASE("eta <= 5 + 2y") {
        Cut c;
        c.kind = Cut::Kind::Optimality;
        c.constant = 5.0;
        c.coeffs = {{2.0}};
        const auto res = solve_relaxed_master({c}, 1, 1, 1, 1);
        REQUIRE(res.feasible);
        CHECK(res.eta == doctest::Approx(7.0));
        CHECK(res.y[0][0] == 1);
    }
    SUBCASE("row cap binds") {
        Cut c;
        c.kind = Cut::Kind::Optimality;
        c.constant = 0.0;
        c.coeffs = {{1.0, 1.0}};
        const auto res = solve_relaxed_master({c}, 1, 2, 1, 1);
        REQUIRE(res.feasible);
        CHECK(res.eta == doctest::Approx(1.0));
        int active = res.y[0][0] + res.y[0][1];
        CHECK(active == 1);
    }
    SUBCASE("needs an optimality cut") {
        CHECK_THROWS_AS(solve_relaxed_master({}, 1, 1, 1, 1), std::logic_error);
    }
}

TEST_CASE("branch-and-bound master equals enumeration on random cut sets") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> coef(0.0, 2.0);
    std::uniform_real_distribution<double> cons(-1.0, 6.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Cut> cuts;
        const int n_opt = 1 + static_cast<int>(rng() % 4);
        const int n_feas = static_cast<int>(rng() % 3);
        for (int i = 0; i < n_opt; ++i) {
            Cut c;
            c.kind = Cut::Kind::Optimality;
            c.constant = cons(rng);
            c.coeffs.assign(3, std::vector<double>(3, 0.0));
            for (auto& row : c.coeffs)
                for (double& v : row) v = coef(rng);
            cuts.push_back(std::move(c));
        }
        for (int i = 0; i < n_feas; ++i) {
            Cut c;
            c.kind = Cut::Kind::Feasibility;
            c.constant = cons(rng) - 4.0;  // keep the zero matrix feasible
            c.coeffs.assign(3, std::vector<double>(3, 0.0));
            for (auto& row : c.coeffs)
                for (double& v : row) v = std::abs(coef(rng));
            if (c.constant > 0.0) c.constant = -c.constant;
            cuts.push_back(std::move(c));
        }
        const int c1 = 1 + static_cast<int>(rng() % 2);
        const int c2 = 1 + static_cast<int>(rng() % 2);
        const auto by_enum = solve_relaxed_master(cuts, 3, 3, c1, c2, /*enum_limit=*/12);
        const auto by_bnb = solve_relaxed_master(cuts, 3, 3, c1, c2, /*enum_limit=*/0);
        REQUIRE(by_enum.feasible == by_bnb.feasible);
        if (by_enum.feasible) {
            CHECK(by_bnb.exact);
            CHECK(by_bnb.eta == doctest::Approx(by_enum.eta).epsilon(1e-7));
        }
    }
}

TEST_CASE("decomposition solve: no groups short-circuits to the cellular benchmark") {
    const auto in = test::random_instance(111, 3, 0);
    SolverConfig cfg;
    const auto rep = solve(in, cfg);
    CHECK(rep.proven_optimal);
    CHECK(rep.report.R_sum == rep.report.R_cell_max);
}

TEST_CASE("decomposition solve matches the two-case optimum on 1x1") {
    for (uint64_t seed : {7u, 8u, 9u}) {
        const auto in = test::random_instance(seed, 1, 1);
        SolverConfig cfg;
        cfg.c1 = cfg.c2 = 1;
        const auto rep = solve(in, cfg);
        const auto pair = convex::solve_pair(in, 0, 0, cfg);
        const double cell_only = evaluate(in, Assignment::cellular_only(in)).R_sum;
        const double expect = pair.feasible ? std::max(cell_only, pair.objective) : cell_only;
        CHECK(rel_diff(rep.report.R_sum, expect) <= 1e-3);
        CHECK(rep.proven_optimal);
    }
}

TEST_CASE("decomposition solve equals enumeration on 2x2 under unit caps") {
    for (uint64_t seed : {13u, 14u, 15u, 16u}) {
        const auto in = test::random_instance(seed, 2, 2);
        SolverConfig cfg;
        cfg.c1 = cfg.c2 = 1;
        const auto rep = solve(in, cfg);

        double best = -std::numeric_limits<double>::infinity();
        for (const auto& y : test::enumerate_binary(2, 2, 1, 1)) {
            const auto out = convex::solve_primal(in, y, cfg);
            if (out.status == convex::SolveStatus::Optimal)
                best = std::max(best, out.objective);
        }
        CHECK(rel_diff(rep.report.R_sum, best) <= 1e-3);
        CHECK(rep.proven_optimal);
        CHECK(validate(in, rep.assignment, cfg).empty());

        // bound bookkeeping
        REQUIRE(rep.gbd_state.has_value());
        const auto& st = *rep.gbd_state;
        double prev_ubd = std::numeric_limits<double>::infinity();
        double prev_lbd = -std::numeric_limits<double>::infinity();
        std::set<std::string> seen;
        for (const auto& it : st.history) {
            CHECK(it.ubd <= prev_ubd + 1e-9);
            CHECK(it.lbd >= prev_lbd - 1e-9);
            CHECK(it.ubd >= it.lbd - 1e-6);
            prev_ubd = it.ubd;
            prev_lbd = it.lbd;
            std::string key;
            for (const auto& row : it.y)
                for (uint8_t v : row) key.push_back(v ? '1' : '0');
            CHECK(!seen.count(key));  // every visited matrix is new
            seen.insert(key);
        }
        // final bound consistency with the incumbent report
        CHECK(std::abs(st.lbd - rep.report.R_sum) <= 1e-2 * (1.0 + std::abs(st.lbd)));
    }
}

TEST_CASE("iteration cap returns a flagged incumbent") {
    const auto in = test::random_instance(19, 3, 2);
    SolverConfig cfg;
    cfg.c1 = 2;
    cfg.c2 = 2;
    cfg.max_iterations = 2;
    cfg.warm_start = false;
    const auto rep = solve(in, cfg);
    CHECK(rep.gbd_state->hit_iteration_cap);
    CHECK(!rep.proven_optimal);
    CHECK(rep.gap >= 0.0);
    CHECK(validate(in, rep.assignment, cfg).empty());
}

TEST_CASE("verbose traces emit per-iteration text") {
    const auto in = test::random_instance(201, 2, 1);
    SolverConfig cfg;
    cfg.c1 = cfg.c2 = 1;
    std::ostringstream os;
    cfg.trace = &os;
    (void)solve(in, cfg);
    CHECK(os.str().find("gbd iter=") != std::string::npos);
    CHECK(os.str().find("ubd=") != std::string::npos);

    std::ostringstream bs;
    SolverConfig cfg2;
    cfg2.c1 = cfg2.c2 = 1;
    cfg2.barrier.trace = &bs;
    (void)convex::solve_primal(in, {{1, 0}}, cfg2);
    CHECK(bs.str().find("barrier t=") != std::string::npos);
    CHECK(bs.str().find("gap=") != std::string::npos);
}
