#ifndef D2D_TEST_HELPERS_HPP
#define D2D_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "d2d/bench.hpp"
#include "d2d/model.hpp"

namespace d2d::test {

// Hand-built instance with uniform gain fill, for targeted overrides.
// All receivers of group k sit at the same synthetic "position"; gains are
// what matter, positions are placeholders.
inline NetworkInstance manual_instance(int M, const std::vector<int>& group_sizes,
                                       double g_cell = 1.0, double g_d2c = 1e-30,
                                       double g_self = 1.0, double g_c2d = 1e-30,
                                       double g_cross = 1e-30) {
    NetworkInstance in;
    in.cell_radius = 1000.0;
    in.constants = RadioConstants{};
    const int K = static_cast<int>(group_sizes.size());
    in.cu_positions.assign(static_cast<size_t>(M), Point2{100.0, 0.0});
    for (int k = 0; k < K; ++k) {
        D2DGroup g;
        g.id = k;
        g.transmitter = {0.0, 500.0 + 10.0 * k};
        g.receivers.assign(static_cast<size_t>(group_sizes[static_cast<size_t>(k)]),
                           Point2{5.0, 500.0 + 10.0 * k});
        in.groups.push_back(std::move(g));
    }
    auto& t = in.gains;
    t.g_cell.assign(static_cast<size_t>(M), g_cell);
    t.g_d2c.assign(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(M), g_d2c));
    t.g_d2d_self.assign(static_cast<size_t>(K), {});
    t.g_c2d.assign(static_cast<size_t>(K), {});
    t.g_d2d_cross.assign(static_cast<size_t>(K), {});
    for (int k = 0; k < K; ++k) {
        const auto D = static_cast<size_t>(group_sizes[static_cast<size_t>(k)]);
        t.g_d2d_self[static_cast<size_t>(k)].assign(static_cast<size_t>(M),
                                                    std::vector<double>(D, g_self));
        t.g_c2d[static_cast<size_t>(k)].assign(static_cast<size_t>(M),
                                               std::vector<double>(D, g_c2d));
        t.g_d2d_cross[static_cast<size_t>(k)].resize(static_cast<size_t>(K));
        for (int kp = 0; kp < K; ++kp)
            if (kp != k)
                t.g_d2d_cross[static_cast<size_t>(k)][static_cast<size_t>(kp)].assign(D, g_cross);
    }
    return in;
}

inline Assignment zero_assignment(const NetworkInstance& in) {
    return Assignment::cellular_only(in);
}

// Small random scenario in the Table-III radio regime.
inline NetworkInstance random_instance(uint64_t seed, int M, int K, int group_size = 3,
                                       double cell_radius = 1000.0, double cluster_radius = 50.0) {
    bench::ScenarioConfig cfg;
    cfg.cell_radius = cell_radius;
    cfg.cluster_radius = cluster_radius;
    cfg.num_channels = M;
    cfg.num_groups = K;
    cfg.group_size = group_size;
    cfg.c1 = 1;
    cfg.c2 = 1;
    return bench::generate(cfg, seed);
}

}  // namespace d2d::test

#endif
