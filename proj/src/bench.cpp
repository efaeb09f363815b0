#include "d2d/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "d2d/convex.hpp"
#include "d2d/gbd.hpp"
#include "d2d/greedy.hpp"
#include "d2d/heuristic.hpp"
#include "d2d/matching.hpp"
#include "d2d/model.hpp"

namespace d2d::bench {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinLinkDistance = 0.1;  // meters; numerical guard
constexpr double kCuSinrMargin = 1.01;    // CU fading censored to this margin

uint64_t mix(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Point2 uniform_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double theta = 2.0 * kPi * unit(rng);
    return {r * std::cos(theta), r * std::sin(theta)};
}

double guarded_distance(const Point2& a, const Point2& b) {
    return std::max(distance(a, b), kMinLinkDistance);
}

}  // namespace

void ScenarioConfig::check() const {
    if (!(cluster_radius < cell_radius))
        throw std::invalid_argument("scenario: cluster radius must be below the cell radius");
    if (trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
    if (num_channels < 1) throw std::invalid_argument("scenario: need at least one CU");
    if (num_groups < 0 || group_size < 1) throw std::invalid_argument("scenario: bad group shape");
    if (c1 < 1 || c2 < 1) throw std::invalid_argument("scenario: caps must be >= 1");
    radio.check();
}

const std::vector<std::pair<double, double>>& default_regular_layout() {
    static const std::vector<std::pair<double, double>> layout = {
        {15.0, 0.35}, {75.0, 0.55}, {135.0, 0.75}, {195.0, 0.45}, {255.0, 0.65}, {315.0, 0.85},
    };
    return layout;
}

GainTable gains_from_positions(const std::vector<Point2>& cu_positions,
                               const std::vector<D2DGroup>& groups, const RadioConstants& radio,
                               uint64_t fading_seed) {
    // one substream per physical link, keyed by link identity: draws never
    // shift between scenarios that share positions, so parameter sweeps stay
    // paired trial by trial
    auto link_fade = [&](uint64_t category, uint64_t a, uint64_t b, uint64_t c) {
        std::mt19937_64 rng(mix(fading_seed, ((category * 1000003 + a) * 1009 + b) * 8191 + c));
        std::exponential_distribution<double> fade(1.0);
        return fade(rng);
    };
    const Point2 bs{0.0, 0.0};
    const int M = static_cast<int>(cu_positions.size());
    const int K = static_cast<int>(groups.size());
    const double alpha = radio.pathloss_alpha;

    GainTable g;
    g.g_cell.resize(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) {
        const double d = guarded_distance(cu_positions[static_cast<size_t>(m)], bs);
        // censored CU fading: the cellular-only allocation must stay feasible
        const double need =
            radio.gamma_cell * kCuSinrMargin * radio.noise_mw /
            (radio.p_max_cell_mw * std::pow(d, -alpha));
        std::mt19937_64 rng(mix(fading_seed, 1000003ULL * static_cast<uint64_t>(m) + 17));
        std::exponential_distribution<double> fade(1.0);
        double h = fade(rng);
        int guard = 0;
        while (h < need && ++guard < 100000) h = fade(rng);
        if (h < need)
            throw std::runtime_error("scenario: cellular link cannot satisfy its SINR threshold");
        g.g_cell[static_cast<size_t>(m)] = link_gain(d, h, alpha);
    }
    g.g_d2c.assign(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(M), 0.0));
    for (int k = 0; k < K; ++k) {
        const double d = guarded_distance(groups[static_cast<size_t>(k)].transmitter, bs);
        const double gain =
            link_gain(d, link_fade(1, static_cast<uint64_t>(k), 0, 0), alpha);
        // one physical link, identical on every channel
        for (int m = 0; m < M; ++m) g.g_d2c[static_cast<size_t>(k)][static_cast<size_t>(m)] = gain;
    }
    g.g_d2d_self.assign(static_cast<size_t>(K), {});
    for (int k = 0; k < K; ++k) {
        const auto& grp = groups[static_cast<size_t>(k)];
        std::vector<double> per_receiver(static_cast<size_t>(grp.size()));
        for (int d = 0; d < grp.size(); ++d)
            per_receiver[static_cast<size_t>(d)] =
                link_gain(guarded_distance(grp.transmitter, grp.receivers[static_cast<size_t>(d)]),
                          link_fade(2, static_cast<uint64_t>(k), static_cast<uint64_t>(d), 0), alpha);
        g.g_d2d_self[static_cast<size_t>(k)].assign(static_cast<size_t>(M), per_receiver);
    }
    g.g_c2d.assign(static_cast<size_t>(K), {});
    for (int k = 0; k < K; ++k) {
        const auto& grp = groups[static_cast<size_t>(k)];
        g.g_c2d[static_cast<size_t>(k)].assign(static_cast<size_t>(M),
                                               std::vector<double>(static_cast<size_t>(grp.size())));
        for (int m = 0; m < M; ++m)
            for (int d = 0; d < grp.size(); ++d)
                g.g_c2d[static_cast<size_t>(k)][static_cast<size_t>(m)][static_cast<size_t>(d)] =
                    link_gain(guarded_distance(cu_positions[static_cast<size_t>(m)],
                                               grp.receivers[static_cast<size_t>(d)]),
                              link_fade(3, static_cast<uint64_t>(k), static_cast<uint64_t>(m),
                                        static_cast<uint64_t>(d)),
                              alpha);
    }
    g.g_d2d_cross.assign(static_cast<size_t>(K), {});
    for (int k = 0; k < K; ++k) {
        const auto& grp = groups[static_cast<size_t>(k)];
        g.g_d2d_cross[static_cast<size_t>(k)].resize(static_cast<size_t>(K));
        for (int kp = 0; kp < K; ++kp) {
            if (kp == k) continue;  // no self entry
            auto& row = g.g_d2d_cross[static_cast<size_t>(k)][static_cast<size_t>(kp)];
            row.resize(static_cast<size_t>(grp.size()));
            for (int d = 0; d < grp.size(); ++d)
                row[static_cast<size_t>(d)] = link_gain(
                    guarded_distance(groups[static_cast<size_t>(kp)].transmitter,
                                     grp.receivers[static_cast<size_t>(d)]),
                    link_fade(4, static_cast<uint64_t>(k), static_cast<uint64_t>(kp),
                              static_cast<uint64_t>(d)),
                    alpha);
        }
    }
    return g;
}

NetworkInstance generate(const ScenarioConfig& config, uint64_t seed) {
    config.check();
    std::mt19937_64 rng(mix(seed, 0xA11CE));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    NetworkInstance instance;
    instance.cell_radius = config.cell_radius;
    instance.constants = config.radio;
    instance.cu_positions.resize(static_cast<size_t>(config.num_channels));
    for (auto& p : instance.cu_positions) p = uniform_in_disk(rng, config.cell_radius);

    const auto& layout =
        config.regular_layout.empty() ? default_regular_layout() : config.regular_layout;
    if (config.placement == Placement::Regular &&
        config.num_groups > static_cast<int>(layout.size()))
        throw std::invalid_argument("scenario: regular placement supports at most the layout size");

    instance.groups.resize(static_cast<size_t>(config.num_groups));
    for (int k = 0; k < config.num_groups; ++k) {
        auto& grp = instance.groups[static_cast<size_t>(k)];
        grp.id = k;
        if (config.placement == Placement::Regular) {
            const double ang = layout[static_cast<size_t>(k)].first * kPi / 180.0;
            const double rad = layout[static_cast<size_t>(k)].second * config.cell_radius;
            grp.transmitter = {rad * std::cos(ang), rad * std::sin(ang)};
        } else {
            // whole cluster stays inside the cell
            grp.transmitter = uniform_in_disk(rng, config.cell_radius - config.cluster_radius);
        }
        grp.receivers.resize(static_cast<size_t>(config.group_size));
        for (auto& rp : grp.receivers) {
            do {
                const Point2 off = uniform_in_disk(rng, config.cluster_radius);
                rp = {grp.transmitter.x + off.x, grp.transmitter.y + off.y};
            } while (distance(rp, grp.transmitter) < kMinLinkDistance);
        }
    }
    instance.gains = gains_from_positions(instance.cu_positions, instance.groups,
                                          instance.constants, derive_fading_seed(seed));
    instance.check();
    return instance;
}

uint64_t derive_fading_seed(uint64_t seed) { return mix(seed, 0xFADE); }

SolveReport brute_force(const NetworkInstance& instance, const SolverConfig& config) {
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    if (K * M > 12)
        throw std::invalid_argument("brute_force: refusing instances with K*M > 12");
    const auto t0 = std::chrono::steady_clock::now();

    SolveReport out;
    out.algorithm = "brute";
    out.proven_optimal = true;

    std::vector<std::vector<uint8_t>> y(static_cast<size_t>(K),
                                        std::vector<uint8_t>(static_cast<size_t>(M), 0));
    std::vector<int> row(static_cast<size_t>(K), 0), col(static_cast<size_t>(M), 0);
    double best = -std::numeric_limits<double>::infinity();
    Assignment best_assignment = Assignment::cellular_only(instance);
    bool found = false;

    std::function<void(int)> rec = [&](int idx) {
        if (idx == K * M) {
            const convex::ConvexProgram prog = convex::build_primal(instance, y, config);
            const convex::PrimalSolution sol = convex::solve(prog, config.barrier);
            if (sol.status != convex::SolveStatus::Optimal) return;
            if (sol.objective > best + 1e-12) {
                best = sol.objective;
                found = true;
                // decode the full-program point
                Assignment a;
                a.y = y;
                a.p_d2d.assign(static_cast<size_t>(K),
                               std::vector<double>(static_cast<size_t>(M), 0.0));
                a.p_cell.assign(static_cast<size_t>(M), 0.0);
                for (int k = 0; k < K; ++k)
                    for (int m = 0; m < M; ++m)
                        if (y[static_cast<size_t>(k)][static_cast<size_t>(m)])
                            a.p_d2d[static_cast<size_t>(k)][static_cast<size_t>(m)] =
                                std::exp(sol.x[static_cast<size_t>(k * M + m)]);
                for (int m = 0; m < M; ++m)
                    a.p_cell[static_cast<size_t>(m)] = std::exp(sol.x[static_cast<size_t>(K * M + m)]);
                best_assignment = std::move(a);
            }
            return;
        }
        const int k = idx / M;
        const int m = idx % M;
        rec(idx + 1);
        if (row[static_cast<size_t>(k)] < config.c1 && col[static_cast<size_t>(m)] < config.c2) {
            y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 1;
            ++row[static_cast<size_t>(k)];
            ++col[static_cast<size_t>(m)];
            rec(idx + 1);
            y[static_cast<size_t>(k)][static_cast<size_t>(m)] = 0;
            --row[static_cast<size_t>(k)];
            --col[static_cast<size_t>(m)];
        }
    };
    rec(0);

    out.found_solution = found;
    out.assignment = std::move(best_assignment);
    out.report = evaluate(instance, out.assignment);
    out.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::string to_string(Algo a) {
    switch (a) {
        case Algo::Gbd: return "gbd";
        case Algo::Matching: return "matching";
        case Algo::Greedy: return "greedy";
        case Algo::Heuristic: return "heuristic";
        case Algo::Brute: return "brute";
    }
    return "?";
}

std::optional<Algo> algo_from_string(const std::string& s) {
    if (s == "gbd") return Algo::Gbd;
    if (s == "matching") return Algo::Matching;
    if (s == "greedy") return Algo::Greedy;
    if (s == "heuristic") return Algo::Heuristic;
    if (s == "brute") return Algo::Brute;
    return std::nullopt;
}

namespace {

TrialRecord record_from(const SolveReport& rep, int trial) {
    TrialRecord r;
    r.trial = trial;
    r.algorithm = rep.algorithm;
    r.r_sum = rep.report.R_sum;
    r.r_d2d_total = rep.report.R_d2d_total;
    r.r_cell_total = rep.report.R_cell_total;
    r.r_cell_max = rep.report.R_cell_max;
    r.success_rate = rep.report.success_rate;
    r.fairness = rep.report.fairness;
    r.wall_time = rep.wall_time_sec;
    if (rep.gbd_state) r.gap = rep.gap;
    return r;
}

SolveReport dispatch(Algo algo, const NetworkInstance& instance, const SolverConfig& solver) {
    switch (algo) {
        case Algo::Gbd: return gbd::solve(instance, solver);
        case Algo::Matching: return matching::solve(instance, solver);
        case Algo::Greedy: return greedy::solve(instance, solver);
        case Algo::Heuristic: return heuristic::solve(instance, solver);
        case Algo::Brute: return brute_force(instance, solver);
    }
    throw std::logic_error("unknown algorithm");
}

}  // namespace

std::vector<TrialRecord> run(const ScenarioConfig& config, const SolverConfig& solver,
                             const std::vector<Algo>& algorithms) {
    config.check();
    for (Algo a : algorithms)
        if (a == Algo::Matching && (config.c1 != 1 || config.c2 != 1))
            throw std::invalid_argument("bench: matching requires C1 = C2 = 1");

    SolverConfig per_trial = solver;
    per_trial.c1 = config.c1;
    per_trial.c2 = config.c2;
    per_trial.trace = nullptr;

    const int workers = config.workers > 0
                            ? config.workers
                            : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::vector<TrialRecord>> per_trial_records(static_cast<size_t>(config.trials));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= config.trials) return;
            const NetworkInstance instance = generate(config, mix(config.rng_seed, uint64_t(t)));
            for (Algo a : algorithms) {
                TrialRecord rec;
                try {
                    rec = record_from(dispatch(a, instance, per_trial), t);
                } catch (const std::exception& e) {
                    rec.trial = t;
                    rec.algorithm = to_string(a);
                    rec.ok = false;
                    rec.error = e.what();
                }
                per_trial_records[static_cast<size_t>(t)].push_back(std::move(rec));
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<TrialRecord> records;
    for (auto& rs : per_trial_records)
        for (auto& r : rs) records.push_back(std::move(r));
    return records;
}

std::vector<SweepPoint> run_sweep(const ScenarioConfig& config, const SolverConfig& solver,
                                  const std::vector<Algo>& algorithms, const std::string& param,
                                  const std::vector<double>& values) {
    std::vector<SweepPoint> out;
    for (double v : values) {
        ScenarioConfig c = config;
        if (param == "gamma_db") {
            c.radio.gamma_d2d = db_to_lin(v);
            c.radio.gamma_cell = db_to_lin(v);
        } else if (param == "cluster_radius") {
            c.cluster_radius = v;
        } else if (param == "cell_radius") {
            c.cell_radius = v;
        } else if (param == "num_channels") {
            c.num_channels = static_cast<int>(v);
        } else if (param == "num_groups") {
            c.num_groups = static_cast<int>(v);
        } else if (param == "c1") {
            c.c1 = static_cast<int>(v);
        } else if (param == "c2") {
            c.c2 = static_cast<int>(v);
        } else if (param == "group_size") {
            c.group_size = static_cast<int>(v);
        } else {
            throw std::invalid_argument("run_sweep: unknown parameter " + param);
        }
        SweepPoint pt;
        pt.param = param;
        pt.value = v;
        pt.records = run(c, solver, algorithms);
        out.push_back(std::move(pt));
    }
    return out;
}

std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records) {
    std::vector<std::string> algos;
    for (const auto& r : records)
        if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end())
            algos.push_back(r.algorithm);
    std::vector<Aggregate> out;
    for (const auto& name : algos) {
        Aggregate a;
        a.algorithm = name;
        std::vector<double> rs, rd, sr, fr, rcm;
        for (const auto& r : records) {
            if (r.algorithm != name || !r.ok) continue;
            rs.push_back(r.r_sum);
            rd.push_back(r.r_d2d_total);
            rcm.push_back(r.r_cell_max);
            if (r.success_rate) sr.push_back(*r.success_rate);
            if (r.fairness) fr.push_back(*r.fairness);
        }
        auto mean_std = [](const std::vector<double>& v, double& mean, double& sd) {
            mean = 0.0;
            sd = 0.0;
            if (v.empty()) return;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            for (double x : v) sd += (x - mean) * (x - mean);
            sd = v.size() > 1 ? std::sqrt(sd / static_cast<double>(v.size() - 1)) : 0.0;
        };
        a.n = static_cast<int>(rs.size());
        mean_std(rs, a.mean_r_sum, a.std_r_sum);
        mean_std(rd, a.mean_r_d2d, a.std_r_d2d);
        double dummy = 0.0;
        mean_std(rcm, a.mean_r_cell_max, dummy);
        mean_std(sr, a.mean_success, a.std_success);
        mean_std(fr, a.mean_fairness, a.std_fairness);
        a.fairness_n = static_cast<int>(fr.size());
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace d2d::bench
