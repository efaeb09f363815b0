// Command-line front end: scenario generation, single-instance solves and
// Monte-Carlo benchmark runs with CSV output.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "d2d/bench.hpp"
#include "d2d/gbd.hpp"
#include "d2d/greedy.hpp"
#include "d2d/heuristic.hpp"
#include "d2d/io.hpp"
#include "d2d/matching.hpp"

namespace {

std::vector<d2d::bench::Algo> parse_algos(const std::string& csv) {
    std::vector<d2d::bench::Algo> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        const auto a = d2d::bench::algo_from_string(tok);
        if (!a) throw CLI::ValidationError("unknown algorithm: " + tok);
        out.push_back(*a);
    }
    if (out.empty()) throw CLI::ValidationError("no algorithms given");
    return out;
}

void print_report(const d2d::SolveReport& rep) {
    const auto& r = rep.report;
    std::cout << "algorithm:      " << rep.algorithm << "\n";
    std::cout << "R_sum:          " << r.R_sum << " bit/s/Hz (exact-capacity " << r.R_sum_exact
              << ")\n";
    std::cout << "R_D2D total:    " << r.R_d2d_total << "\n";
    std::cout << "R_cell total:   " << r.R_cell_total << "\n";
    std::cout << "R_cell_max:     " << r.R_cell_max << "\n";
    std::cout << "admitted:       " << r.admitted.size() << " group(s)\n";
    if (r.success_rate) std::cout << "success rate:   " << *r.success_rate << "\n";
    if (r.fairness) std::cout << "fairness:       " << *r.fairness << "\n";
    if (rep.gbd_state)
        std::cout << "bound gap:      " << rep.gap
                  << (rep.proven_optimal ? " (proven optimal)" : " (not proven)") << "\n";
    std::cout << "wall time:      " << rep.wall_time_sec << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint power control and channel allocation for multicast D2D underlay"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a scenario instance file");
    std::string gen_config, gen_out = "instance.json";
    uint64_t gen_seed = 0;
    bool gen_skip_gains = false;
    gen->add_option("config", gen_config, "scenario config JSON")->required();
    gen->add_option("--seed", gen_seed, "override the scenario seed");
    gen->add_option("--out", gen_out, "output instance file");
    gen->add_flag("--skip-gains", gen_skip_gains,
                  "store positions and fading seed only (gains are regenerated on load)");

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "solve one instance file");
    std::string solve_instance, solve_algo = "gbd";
    int solve_c1 = 1, solve_c2 = 1;
    double solve_gamma_db = std::numeric_limits<double>::quiet_NaN();
    double solve_time_budget = 0.0;
    bool solve_verbose = false;
    solve->add_option("instance", solve_instance, "instance JSON file")->required();
    solve->add_option("--algo", solve_algo, "gbd|matching|greedy|heuristic|brute");
    solve->add_option("--c1", solve_c1, "max channels per D2D group");
    solve->add_option("--c2", solve_c2, "max D2D groups per channel");
    solve->add_option("--gamma-db", solve_gamma_db, "override both SINR thresholds (dB)");
    solve->add_option("--time-budget", solve_time_budget, "wall-clock budget for gbd (s)");
    solve->add_flag("--verbose", solve_verbose, "per-iteration trace to stderr");

    // ---- bench ----
    auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo benchmark over a scenario config");
    std::string bench_config, bench_out = "results.csv", bench_algos = "gbd,greedy,heuristic";
    std::string bench_sweep, bench_agg;
    double bench_time_budget = 0.0;
    bench_cmd->add_option("config", bench_config, "scenario config JSON")->required();
    bench_cmd->add_option("--out", bench_out, "per-trial CSV output");
    bench_cmd->add_option("--algos", bench_algos, "comma-separated algorithm list");
    bench_cmd->add_option("--sweep", bench_sweep, "param=v1,v2,... sweep specification");
    bench_cmd->add_option("--agg", bench_agg, "aggregate CSV output (default <out>.agg.csv)");
    bench_cmd->add_option("--time-budget", bench_time_budget, "per-solve gbd budget (s)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto config = d2d::io::read_scenario_file(gen_config);
            const uint64_t seed = gen->count("--seed") ? gen_seed : config.rng_seed;
            const auto instance = d2d::bench::generate(config, seed);
            d2d::io::write_instance_file(gen_out, instance, d2d::bench::derive_fading_seed(seed),
                                         !gen_skip_gains);
            std::cout << "wrote " << gen_out << " (M=" << instance.num_channels()
                      << ", K=" << instance.num_groups() << ")\n";
            return 0;
        }
        if (*solve) {
            auto instance = d2d::io::read_instance_file(solve_instance);
            if (!std::isnan(solve_gamma_db)) {
                instance.constants.gamma_d2d = d2d::db_to_lin(solve_gamma_db);
                instance.constants.gamma_cell = d2d::db_to_lin(solve_gamma_db);
            }
            d2d::SolverConfig cfg;
            cfg.c1 = solve_c1;
            cfg.c2 = solve_c2;
            cfg.time_budget_sec = solve_time_budget;
            if (solve_verbose) cfg.trace = &std::cerr;
            const auto algo = d2d::bench::algo_from_string(solve_algo);
            if (!algo) throw std::invalid_argument("unknown algorithm: " + solve_algo);
            d2d::SolveReport rep;
            switch (*algo) {
                case d2d::bench::Algo::Gbd: rep = d2d::gbd::solve(instance, cfg); break;
                case d2d::bench::Algo::Matching: rep = d2d::matching::solve(instance, cfg); break;
                case d2d::bench::Algo::Greedy: rep = d2d::greedy::solve(instance, cfg); break;
                case d2d::bench::Algo::Heuristic: rep = d2d::heuristic::solve(instance, cfg); break;
                case d2d::bench::Algo::Brute: rep = d2d::bench::brute_force(instance, cfg); break;
            }
            print_report(rep);
            return 0;
        }
        if (*bench_cmd) {
            auto config = d2d::io::read_scenario_file(bench_config);
            d2d::SolverConfig cfg;
            cfg.time_budget_sec = bench_time_budget;
            const auto algos = parse_algos(bench_algos);
            if (bench_sweep.empty()) {
                const auto records = d2d::bench::run(config, cfg, algos);
                std::ofstream os(bench_out);
                if (!os) throw std::runtime_error("cannot open " + bench_out);
                d2d::io::write_records_csv(os, records);
                std::cout << "wrote " << bench_out << " (" << records.size() << " rows)\n";
            } else {
                const auto eq = bench_sweep.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--sweep expects param=v1,v2,...");
                const std::string param = bench_sweep.substr(0, eq);
                std::vector<double> values;
                std::istringstream vs(bench_sweep.substr(eq + 1));
                std::string tok;
                while (std::getline(vs, tok, ',')) values.push_back(std::stod(tok));
                const auto sweep = d2d::bench::run_sweep(config, cfg, algos, param, values);
                std::ofstream os(bench_out);
                if (!os) throw std::runtime_error("cannot open " + bench_out);
                std::vector<d2d::bench::TrialRecord> all;
                for (const auto& pt : sweep)
                    for (const auto& r : pt.records) all.push_back(r);
                d2d::io::write_records_csv(os, all);
                const std::string agg_path = bench_agg.empty() ? bench_out + ".agg.csv" : bench_agg;
                std::ofstream as(agg_path);
                if (!as) throw std::runtime_error("cannot open " + agg_path);
                d2d::io::write_aggregates_csv(as, sweep);
                std::cout << "wrote " << bench_out << " and " << agg_path << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
