#ifndef D2D_BENCH_HPP
#define D2D_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "d2d/report.hpp"

// Scenario generation, Monte-Carlo harness and brute-force oracle.

namespace d2d::bench {

enum class Placement { Clustered, Regular };

struct ScenarioConfig {
    double cell_radius = 1000.0;   // R, meters
    double cluster_radius = 50.0;  // r, meters
    int num_channels = 10;         // M
    int num_groups = 4;            // K
    int group_size = 3;            // |D_k|
    Placement placement = Placement::Clustered;
    int trials = 50;
    uint64_t rng_seed = 1;
    RadioConstants radio;
    int c1 = 4;
    int c2 = 3;
    int workers = 0;  // 0 = hardware concurrency
    // regular placement: (angle degrees, radius as fraction of R) per cluster
    std::vector<std::pair<double, double>> regular_layout;

    void check() const;
};

/// Canonical six-cluster layout used by the regular placement mode; shipped
/// in scenarios/regular_placement.txt as well.
const std::vector<std::pair<double, double>>& default_regular_layout();

/// Deterministic scenario draw: CUs uniform in the disk (with censored CU
/// fading so the cellular-only allocation is always feasible), cluster
/// centers uniform in the shrunken disk, receivers uniform in each cluster,
/// unit-mean exponential fading per link.
NetworkInstance generate(const ScenarioConfig& config, uint64_t seed);

/// Fading-stream seed used by generate() for a given scenario seed; instance
/// files that omit the gain tables must carry this value.
uint64_t derive_fading_seed(uint64_t seed);

/// Rebuilds the gain tables for fixed positions from the fading seed alone.
GainTable gains_from_positions(const std::vector<Point2>& cu_positions,
                               const std::vector<D2DGroup>& groups, const RadioConstants& radio,
                               uint64_t fading_seed);

/// Exhaustive oracle over all cap-feasible binary allocations; guarded to
/// K*M <= 12.
SolveReport brute_force(const NetworkInstance& instance, const SolverConfig& config);

enum class Algo { Gbd, Matching, Greedy, Heuristic, Brute };
std::string to_string(Algo a);
std::optional<Algo> algo_from_string(const std::string& s);

struct TrialRecord {
    int trial = 0;
    std::string algorithm;
    double r_sum = 0.0;
    double r_d2d_total = 0.0;
    double r_cell_total = 0.0;
    double r_cell_max = 0.0;
    std::optional<double> success_rate;
    std::optional<double> fairness;
    double wall_time = 0.0;
    std::optional<double> gap;  // decomposition runs only
    bool ok = true;
    std::string error;
};

/// One Monte-Carlo batch: every requested algorithm runs on the identical
/// per-trial instance; failures are recorded in the row, never dropped.
std::vector<TrialRecord> run(const ScenarioConfig& config, const SolverConfig& solver,
                             const std::vector<Algo>& algorithms);

struct SweepPoint {
    std::string param;
    double value = 0.0;
    std::vector<TrialRecord> records;
};

/// Repeats `run` while varying one scenario parameter. Supported names:
/// gamma_db, cluster_radius, cell_radius, num_channels, num_groups, c1, c2,
/// group_size.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& config, const SolverConfig& solver,
                                  const std::vector<Algo>& algorithms, const std::string& param,
                                  const std::vector<double>& values);

struct Aggregate {
    std::string algorithm;
    int n = 0;
    double mean_r_sum = 0.0, std_r_sum = 0.0;
    double mean_r_d2d = 0.0, std_r_d2d = 0.0;
    double mean_r_cell_max = 0.0;
    double mean_success = 0.0, std_success = 0.0;
    double mean_fairness = 0.0, std_fairness = 0.0;  // undefined entries excluded
    int fairness_n = 0;
};
std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records);

}  // namespace d2d::bench

#endif  // D2D_BENCH_HPP
