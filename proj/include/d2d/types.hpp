#ifndef D2D_TYPES_HPP
#define D2D_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2d {

// ---------- units ----------
// All powers are stored in linear mW, all gains and SINR ratios as linear
// factors. Conversions happen once, at the edge.

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// ---------- radio constants ----------

/// Radio-level constants of a scenario. Fields are linear (mW / ratios);
/// use from_db() when starting from dBm / dB figures.
struct RadioConstants {
    double noise_mw = dbm_to_mw(-114.0);  // aggregate background noise
    double pathloss_alpha = 3.0;
    double gamma_d2d = db_to_lin(10.0);   // SINR threshold, D2D groups
    double gamma_cell = db_to_lin(10.0);  // SINR threshold, cellular users
    double p_max_cell_mw = dbm_to_mw(20.0);
    double p_max_d2d_mw = dbm_to_mw(20.0);

    static RadioConstants from_db(double noise_dbm, double alpha, double gamma_d2d_db,
                                  double gamma_cell_db, double p_max_cell_dbm,
                                  double p_max_d2d_dbm) {
        RadioConstants c;
        c.noise_mw = dbm_to_mw(noise_dbm);
        c.pathloss_alpha = alpha;
        c.gamma_d2d = db_to_lin(gamma_d2d_db);
        c.gamma_cell = db_to_lin(gamma_cell_db);
        c.p_max_cell_mw = dbm_to_mw(p_max_cell_dbm);
        c.p_max_d2d_mw = dbm_to_mw(p_max_d2d_dbm);
        c.check();
        return c;
    }

    void check() const {
        if (!(noise_mw > 0 && pathloss_alpha > 0 && gamma_d2d > 0 && gamma_cell > 0 &&
              p_max_cell_mw > 0 && p_max_d2d_mw > 0))
            throw std::invalid_argument("RadioConstants: all fields must be strictly positive");
    }
};

// ---------- network entities ----------

/// One multicast D2D group: a single transmitter plus its receiver set.
struct D2DGroup {
    int id = 0;
    Point2 transmitter;
    std::vector<Point2> receivers;

    int size() const { return static_cast<int>(receivers.size()); }
};

/// Link-gain tables, indexed to match the scenario dimensions.
///   g_cell[m]            CU m -> base station
///   g_d2c[k][m]          D2D transmitter k -> base station, channel m
///   g_d2d_self[k][m][d]  D2D transmitter k -> own receiver d, channel m
///   g_c2d[k][m][d]       CU m -> receiver d of group k
///   g_d2d_cross[k][kp][d] transmitter of group kp -> receiver d of group k (kp != k)
struct GainTable {
    std::vector<double> g_cell;
    std::vector<std::vector<double>> g_d2c;
    std::vector<std::vector<std::vector<double>>> g_d2d_self;
    std::vector<std::vector<std::vector<double>>> g_c2d;
    std::vector<std::vector<std::vector<double>>> g_d2d_cross;
};

/// A full scenario: positions, gains, radio constants.
struct NetworkInstance {
    double cell_radius = 1000.0;  // meters
    std::vector<Point2> cu_positions;
    std::vector<D2DGroup> groups;
    GainTable gains;
    RadioConstants constants;

    int num_channels() const { return static_cast<int>(cu_positions.size()); }
    int num_groups() const { return static_cast<int>(groups.size()); }
    int group_size(int k) const { return groups[static_cast<size_t>(k)].size(); }

    /// Throws if dimensions are inconsistent or any gain is non-positive.
    void check() const;
};

// ---------- assignment ----------

/// A channel allocation plus the transmit powers that realize it.
/// y[k][m] = 1 iff group k reuses channel m; p_d2d[k][m] is the matching
/// D2D transmit power (0 on inactive links), p_cell[m] the CU power.
struct Assignment {
    std::vector<std::vector<uint8_t>> y;
    std::vector<std::vector<double>> p_d2d;
    std::vector<double> p_cell;

    static Assignment cellular_only(const NetworkInstance& instance);

    int row_count(int k) const {
        int n = 0;
        for (uint8_t v : y[static_cast<size_t>(k)]) n += v ? 1 : 0;
        return n;
    }
    int col_count(int m) const {
        int n = 0;
        for (const auto& row : y) n += row[static_cast<size_t>(m)] ? 1 : 0;
        return n;
    }
    bool active(int k, int m) const {
        return y[static_cast<size_t>(k)][static_cast<size_t>(m)] != 0;
    }
};

// ---------- solver configuration ----------

struct BarrierOptions {
    double mu = 10.0;              // path-following factor
    double duality_gap = 1e-8;     // stop when Q/t below this
    double armijo = 0.5;           // sufficient-decrease fraction
    double backtrack = 0.9;        // step shrink factor
    int max_newton_iters = 500;
    double newton_tol = 1e-10;     // squared Newton decrement / 2
    double feas_margin = 1e-9;     // phase-I strict feasibility margin
    std::ostream* trace = nullptr; // per-stage gap/residual trace
};

struct SolverConfig {
    int c1 = 1;  // max channels per D2D group
    int c2 = 1;  // max D2D groups per channel

    double epsilon = 1e-6;        // power-linking constant of the MINLP transformation
    double big_c_factor = 100.0;  // big-constant scale (x max achievable single-link rate)

    double gap_tol = 1e-4;        // absolute UBD-LBD stop for the decomposition loop
    int max_iterations = 200;     // outer iteration cap
    double time_budget_sec = 0.0; // wall-clock cap for one solve, 0 = none
    bool warm_start = true;       // seed the decomposition with heuristic incumbents
    int enum_master_limit = 12;   // K*M at or below which the master is enumerated

    BarrierOptions barrier;

    uint64_t rng_seed = 1;
    std::ostream* trace = nullptr;  // per-iteration trace sink (nullptr = silent)
};

}  // namespace d2d

#endif  // D2D_TYPES_HPP
