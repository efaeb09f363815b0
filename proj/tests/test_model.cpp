#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "d2d/model.hpp"
#include "helpers.hpp"

using namespace d2d;

TEST_CASE("link_gain follows the power law") {
    CHECK(link_gain(1.0, 1.0, 3.0) == doctest::Approx(1.0));
    CHECK(link_gain(100.0, 1.0, 3.0) == doctest::Approx(1e-6));
    CHECK(link_gain(10.0, 0.5, 3.0) == doctest::Approx(5e-4));
    CHECK_THROWS_AS(link_gain(0.0, 1.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(link_gain(-1.0, 1.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(link_gain(1.0, 0.0, 3.0), std::domain_error);
}

TEST_CASE("unit conversions round-trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dbm(-140.0, 40.0);
    for (int i = 0; i < 200; ++i) {
        const double x = dbm(rng);
        CHECK(mw_to_dbm(dbm_to_mw(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK(dbm_to_mw(-114.0) == doctest::Approx(3.9810717055e-12).epsilon(1e-9));
}

TEST_CASE("beta_d2d: noise-only, worst receiver, and gating") {
    SUBCASE("single receiver over noise") {
        auto in = test::manual_instance(1, {1}, 1.0, 1e-30, 1e-6, 1e-30);
        in.constants.noise_mw = 1e-11;
        auto a = test::zero_assignment(in);
        a.p_cell[0] = 0.0;  // isolate the noise term
        a.y[0][0] = 1;
        CHECK(beta_d2d(in, a, 0, 0) == doctest::Approx(1e5));
    }
    SUBCASE("minimum over receivers") {
        auto in = test::manual_instance(1, {2});
        in.constants.noise_mw = 1.0;
        in.gains.g_d2d_self[0][0] = {3.0, 5.0};
        auto a = test::zero_assignment(in);
        a.p_cell[0] = 0.0;
        CHECK(beta_d2d(in, a, 0, 0) == doctest::Approx(3.0));
    }
    SUBCASE("interferer with y = 0 is invisible") {
        auto in = test::manual_instance(1, {1, 1}, 1.0, 1e-30, 1e-6, 1e-30, 0.5);
        in.constants.noise_mw = 1e-11;
        auto a = test::zero_assignment(in);
        a.p_cell[0] = 0.0;
        a.y[0][0] = 1;
        const double before = beta_d2d(in, a, 0, 0);
        a.p_d2d[1][0] = 50.0;  // powered but not assigned
        CHECK(beta_d2d(in, a, 0, 0) == before);
        a.y[1][0] = 1;
        CHECK(beta_d2d(in, a, 0, 0) < before);
    }
}

TEST_CASE("beta_cell: noise-only, one reuser, gating") {
    auto in = test::manual_instance(1, {1}, 1e-9, 3e-12);
    in.constants.noise_mw = 1e-12;
    auto a = test::zero_assignment(in);
    CHECK(beta_cell(in, a, 0) == doctest::Approx(1e3));

    a.p_d2d[0][0] = 3.0;  // P * G^{D2C} = 9e-12
    CHECK(beta_cell(in, a, 0) == doctest::Approx(1e3));  // y still 0
    a.y[0][0] = 1;
    CHECK(beta_cell(in, a, 0) == doctest::Approx(1e-9 / (1e-12 + 9e-12)));
}

TEST_CASE("evaluate: cellular-only reproduces the benchmark bit for bit") {
    auto in = test::manual_instance(3, {1, 2});
    const auto a = test::zero_assignment(in);
    const auto rep = evaluate(in, a);
    CHECK(rep.R_sum == rep.R_cell_max);  // exact equality
    CHECK(rep.R_d2d_total == 0.0);
    CHECK(rep.admitted.empty());
    CHECK(!rep.fairness.has_value());
    REQUIRE(rep.success_rate.has_value());
    CHECK(*rep.success_rate == 0.0);
}

TEST_CASE("evaluate: known logs") {
    // single D2D link with P*beta = 8 and |D| = 3; CU with P*beta = 1024
    auto in = test::manual_instance(1, {3}, 1024.0, 1e-30, 8.0, 1e-30);
    in.constants.noise_mw = 1.0;
    auto a = test::zero_assignment(in);
    a.p_cell[0] = 1.0;
    a.y[0][0] = 1;
    a.p_d2d[0][0] = 1.0;
    const auto rep = evaluate(in, a);
    CHECK(rep.r_d2d[0] == doctest::Approx(3.0));
    CHECK(rep.R_d2d[0] == doctest::Approx(9.0));
    CHECK(rep.R_cell[0] == doctest::Approx(10.0));
    CHECK(rep.R_sum == doctest::Approx(19.0));
    CHECK(rep.R_sum == doctest::Approx(rep.R_d2d_total + rep.R_cell_total));
    // exact-capacity variant sits above the high-SINR one... for log2(1+x) vs log2(x)
    CHECK(rep.R_sum_exact > rep.R_sum);
}

TEST_CASE("evaluate: error names the offending link") {
    auto in = test::manual_instance(1, {1});
    auto a = test::zero_assignment(in);
    a.y[0][0] = 1;  // active link with zero power
    CHECK_THROWS_AS(evaluate(in, a), EvaluationError);
    try {
        evaluate(in, a);
    } catch (const EvaluationError& e) {
        CHECK(e.k == 0);
        CHECK(e.m == 0);
    }
}

TEST_CASE("validate: caps and thresholds") {
    SolverConfig cfg;
    SUBCASE("all-zero assignment is feasible") {
        auto in = test::manual_instance(2, {1});
        const auto a = test::zero_assignment(in);
        CHECK(validate(in, a, cfg).empty());
    }
    SUBCASE("row cap violation reported with its group") {
        auto in = test::manual_instance(3, {1}, 1.0, 1e-30, 1e3, 1e-30);
        in.constants.noise_mw = 1e-3;
        cfg.c1 = 2;
        cfg.c2 = 3;
        auto a = test::zero_assignment(in);
        for (int m = 0; m < 3; ++m) {
            a.y[0][static_cast<size_t>(m)] = 1;
            a.p_d2d[0][static_cast<size_t>(m)] = 0.01;
        }
        const auto v = validate(in, a, cfg);
        bool found = false;
        for (const auto& viol : v)
            if (viol.kind == Violation::Kind::RowCap && viol.k == 0) found = true;
        CHECK(found);
    }
    SUBCASE("identity assignment under unit caps is feasible") {
        auto in = test::manual_instance(2, {1, 1}, 1.0, 1e-30, 1e3, 1e-30, 1e-30);
        in.constants.noise_mw = 1e-3;
        cfg.c1 = cfg.c2 = 1;
        auto a = test::zero_assignment(in);
        a.y[0][0] = a.y[1][1] = 1;
        a.p_d2d[0][0] = a.p_d2d[1][1] = 1.0;
        CHECK(validate(in, a, cfg).empty());
    }
    SUBCASE("violations accumulate instead of stopping at the first") {
        auto in = test::manual_instance(2, {1, 1}, 1.0, 1e-30, 1e3, 1e-30, 1e-30);
        cfg.c1 = cfg.c2 = 1;
        auto a = test::zero_assignment(in);
        a.y[0][0] = a.y[0][1] = a.y[1][0] = a.y[1][1] = 1;  // every cap broken
        a.p_d2d = {{1.0, 1.0}, {1.0, 1.0}};
        const auto v = validate(in, a, cfg);
        int row = 0, col = 0;
        for (const auto& viol : v) {
            row += viol.kind == Violation::Kind::RowCap;
            col += viol.kind == Violation::Kind::ColCap;
        }
        CHECK(row == 2);
        CHECK(col == 2);
    }
}

TEST_CASE("fairness index") {
    CHECK(*fairness_index({1.0, 1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(*fairness_index({1.0, 3.0}) == doctest::Approx(0.8));
    CHECK(!fairness_index({}).has_value());

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> rate(0.1, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> rates;
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) rates.push_back(rate(rng));
        const double f = *fairness_index(rates);
        CHECK(f > 0.0);
        CHECK(f <= 1.0 + 1e-12);
        bool all_equal = true;
        for (double r : rates) all_equal = all_equal && r == rates[0];
        if (f > 1.0 - 1e-12) {
            // equality only at equal rates
            for (double r : rates) CHECK(r == doctest::Approx(rates[0]));
        }
        if (all_equal) CHECK(f == doctest::Approx(1.0));
    }
}

TEST_CASE("success rate") {
    auto in = test::manual_instance(4, {1, 1, 1, 1});
    auto a = test::zero_assignment(in);
    a.y[0][0] = a.y[1][1] = a.y[2][2] = 1;
    CHECK(*success_rate(a, 4) == doctest::Approx(0.75));
    a.y[3][3] = 1;
    CHECK(*success_rate(a, 4) == doctest::Approx(1.0));
    CHECK(!success_rate(a, 0).has_value());
}

TEST_CASE("monotonicity of the interference terms") {
    auto in = test::manual_instance(1, {2, 1}, 1.0, 1e-10, 1e-5, 1e-9, 2e-9);
    in.constants.noise_mw = 1e-11;
    auto a = test::zero_assignment(in);
    a.y[0][0] = a.y[1][0] = 1;
    a.p_d2d[0][0] = 0.5;
    a.p_d2d[1][0] = 0.5;

    double prev_bd = beta_d2d(in, a, 0, 0);
    double prev_bc = beta_cell(in, a, 0);
    for (double scale : {1.5, 3.0, 10.0}) {
        auto b = a;
        b.p_cell[0] = in.constants.p_max_cell_mw * scale;  // raise CU power
        CHECK(beta_d2d(in, b, 0, 0) <= prev_bd);
        b = a;
        b.p_d2d[1][0] *= scale;  // raise co-channel D2D power
        CHECK(beta_d2d(in, b, 0, 0) <= prev_bd);
        CHECK(beta_cell(in, b, 0) <= prev_bc);
    }

    // min-consistency: the group beta never exceeds any per-receiver ratio
    for (int d = 0; d < 2; ++d) {
        const double per =
            in.gains.g_d2d_self[0][0][static_cast<size_t>(d)] /
            (in.constants.noise_mw + a.p_cell[0] * in.gains.g_c2d[0][0][static_cast<size_t>(d)] +
             a.p_d2d[1][0] * in.gains.g_d2d_cross[0][1][static_cast<size_t>(d)]);
        CHECK(beta_d2d(in, a, 0, 0) <= per + 1e-18);
    }
}

TEST_CASE("generated instances evaluate consistently") {
    const auto in = test::random_instance(11, 3, 2);
    const auto a = test::zero_assignment(in);
    const auto rep = evaluate(in, a);
    CHECK(rep.R_sum == rep.R_cell_max);
    CHECK(rep.R_sum == doctest::Approx(rep.R_d2d_total + rep.R_cell_total));
}
