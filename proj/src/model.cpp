#include "d2d/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace d2d {

namespace {
constexpr double kLog2e = 1.4426950408889634;  // 1/ln(2)

double log2_checked(double arg, int k, int m, const char* what) {
    if (!(arg > 0.0)) {
        std::ostringstream os;
        os << what << " has non-positive rate argument " << arg << " at (k=" << k
           << ", m=" << m << ")";
        throw EvaluationError(os.str(), k, m);
    }
    return std::log2(arg);
}
}  // namespace

void NetworkInstance::check() const {
    const int M = num_channels();
    const int K = num_groups();
    if (M < 1) throw std::invalid_argument("NetworkInstance: need at least one CU");
    constants.check();
    auto positive = [](double g) { return g > 0.0; };
    if (static_cast<int>(gains.g_cell.size()) != M ||
        static_cast<int>(gains.g_d2c.size()) != K ||
        static_cast<int>(gains.g_d2d_self.size()) != K ||
        static_cast<int>(gains.g_c2d.size()) != K ||
        static_cast<int>(gains.g_d2d_cross.size()) != K)
        throw std::invalid_argument("NetworkInstance: gain table dimensions do not match");
    if (!std::all_of(gains.g_cell.begin(), gains.g_cell.end(), positive))
        throw std::invalid_argument("NetworkInstance: non-positive g_cell entry");
    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<size_t>(k);
        if (groups[ku].size() < 1)
            throw std::invalid_argument("NetworkInstance: group with no receivers");
        const auto D = static_cast<size_t>(groups[ku].size());
        if (static_cast<int>(gains.g_d2c[ku].size()) != M ||
            static_cast<int>(gains.g_d2d_self[ku].size()) != M ||
            static_cast<int>(gains.g_c2d[ku].size()) != M)
            throw std::invalid_argument("NetworkInstance: per-channel gain rows mismatch");
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<size_t>(m);
            if (!positive(gains.g_d2c[ku][mu]))
                throw std::invalid_argument("NetworkInstance: non-positive g_d2c entry");
            if (gains.g_d2d_self[ku][mu].size() != D || gains.g_c2d[ku][mu].size() != D)
                throw std::invalid_argument("NetworkInstance: receiver gain rows mismatch");
            for (double g : gains.g_d2d_self[ku][mu])
                if (!positive(g)) throw std::invalid_argument("non-positive g_d2d_self entry");
            for (double g : gains.g_c2d[ku][mu])
                if (!positive(g)) throw std::invalid_argument("non-positive g_c2d entry");
        }
        if (static_cast<int>(gains.g_d2d_cross[ku].size()) != K)
            throw std::invalid_argument("NetworkInstance: cross gain rows mismatch");
        for (int kp = 0; kp < K; ++kp) {
            const auto kpu = static_cast<size_t>(kp);
            if (kp == k) {
                if (!gains.g_d2d_cross[ku][kpu].empty())
                    throw std::invalid_argument("NetworkInstance: cross gain self entry present");
                continue;
            }
            if (gains.g_d2d_cross[ku][kpu].size() != D)
                throw std::invalid_argument("NetworkInstance: cross gain receiver mismatch");
            for (double g : gains.g_d2d_cross[ku][kpu])
                if (!positive(g)) throw std::invalid_argument("non-positive g_d2d_cross entry");
        }
    }
}

Assignment Assignment::cellular_only(const NetworkInstance& instance) {
    Assignment a;
    const auto K = static_cast<size_t>(instance.num_groups());
    const auto M = static_cast<size_t>(instance.num_channels());
    a.y.assign(K, std::vector<uint8_t>(M, 0));
    a.p_d2d.assign(K, std::vector<double>(M, 0.0));
    a.p_cell.assign(M, instance.constants.p_max_cell_mw);
    return a;
}

double link_gain(double distance_m, double fading, double alpha) {
    if (!(distance_m > 0.0)) throw std::domain_error("link_gain: distance must be positive");
    if (!(fading > 0.0)) throw std::domain_error("link_gain: fading must be positive");
    return fading * std::pow(distance_m, -alpha);
}

double beta_d2d(const NetworkInstance& instance, const Assignment& assignment, int k, int m) {
    const auto ku = static_cast<size_t>(k);
    const auto mu = static_cast<size_t>(m);
    const int K = instance.num_groups();
    const int D = instance.group_size(k);
    double worst = std::numeric_limits<double>::infinity();
    for (int d = 0; d < D; ++d) {
        const auto du = static_cast<size_t>(d);
        double denom = instance.constants.noise_mw +
                       assignment.p_cell[mu] * instance.gains.g_c2d[ku][mu][du];
        for (int kp = 0; kp < K; ++kp) {
            if (kp == k || !assignment.active(kp, m)) continue;
            denom += assignment.p_d2d[static_cast<size_t>(kp)][mu] *
                     instance.gains.g_d2d_cross[ku][static_cast<size_t>(kp)][du];
        }
        worst = std::min(worst, instance.gains.g_d2d_self[ku][mu][du] / denom);
    }
    return worst;
}

double beta_cell(const NetworkInstance& instance, const Assignment& assignment, int m) {
    const auto mu = static_cast<size_t>(m);
    double denom = instance.constants.noise_mw;
    for (int k = 0; k < instance.num_groups(); ++k) {
        if (!assignment.active(k, m)) continue;
        denom += assignment.p_d2d[static_cast<size_t>(k)][mu] *
                 instance.gains.g_d2c[static_cast<size_t>(k)][mu];
    }
    return instance.gains.g_cell[mu] / denom;
}

EvaluationReport evaluate(const NetworkInstance& instance, const Assignment& assignment) {
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    EvaluationReport rep;
    rep.beta_d2d.assign(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(M), 0.0));
    rep.beta_cell.assign(static_cast<size_t>(M), 0.0);
    rep.r_d2d.assign(static_cast<size_t>(K), 0.0);
    rep.r_d2d_exact.assign(static_cast<size_t>(K), 0.0);
    rep.R_d2d.assign(static_cast<size_t>(K), 0.0);
    rep.R_d2d_exact.assign(static_cast<size_t>(K), 0.0);
    rep.R_cell.assign(static_cast<size_t>(M), 0.0);
    rep.R_cell_exact.assign(static_cast<size_t>(M), 0.0);

    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<size_t>(k);
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<size_t>(m);
            rep.beta_d2d[ku][mu] = beta_d2d(instance, assignment, k, m);
            if (!assignment.active(k, m)) continue;
            const double arg = assignment.p_d2d[ku][mu] * rep.beta_d2d[ku][mu];
            rep.r_d2d[ku] += log2_checked(arg, k, m, "D2D link");
            rep.r_d2d_exact[ku] += std::log2(1.0 + arg);
        }
        rep.R_d2d[ku] = instance.group_size(k) * rep.r_d2d[ku];
        rep.R_d2d_exact[ku] = instance.group_size(k) * rep.r_d2d_exact[ku];
        rep.R_d2d_total += rep.R_d2d[ku];
        if (assignment.row_count(k) > 0) rep.admitted.push_back(k);
    }
    for (int m = 0; m < M; ++m) {
        const auto mu = static_cast<size_t>(m);
        rep.beta_cell[mu] = beta_cell(instance, assignment, m);
        const double arg = assignment.p_cell[mu] * rep.beta_cell[mu];
        rep.R_cell[mu] = log2_checked(arg, -1, m, "cellular link");
        rep.R_cell_exact[mu] = std::log2(1.0 + arg);
        rep.R_cell_total += rep.R_cell[mu];
        rep.R_cell_max += std::log2(instance.constants.p_max_cell_mw * instance.gains.g_cell[mu] /
                                    instance.constants.noise_mw);
    }
    rep.R_sum = rep.R_d2d_total + rep.R_cell_total;
    double d2d_exact = 0.0, cell_exact = 0.0;
    for (double v : rep.R_d2d_exact) d2d_exact += v;
    for (double v : rep.R_cell_exact) cell_exact += v;
    rep.R_sum_exact = d2d_exact + cell_exact;

    rep.success_rate = success_rate(assignment, K);
    std::vector<double> admitted_rates;
    admitted_rates.reserve(rep.admitted.size());
    for (int k : rep.admitted) admitted_rates.push_back(rep.R_d2d[static_cast<size_t>(k)]);
    rep.fairness = fairness_index(admitted_rates);
    return rep;
}

std::vector<Violation> validate(const NetworkInstance& instance, const Assignment& assignment,
                                const SolverConfig& config) {
    // Violations are data, not errors: collect them all.
    std::vector<Violation> out;
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    const double rel = 1e-9;

    if (static_cast<int>(assignment.y.size()) != K ||
        static_cast<int>(assignment.p_d2d.size()) != K ||
        static_cast<int>(assignment.p_cell.size()) != M) {
        out.push_back({Violation::Kind::Shape, -1, -1, 0.0, 0.0});
        return out;
    }

    for (int k = 0; k < K; ++k) {
        const int rc = assignment.row_count(k);
        if (rc > config.c1)
            out.push_back({Violation::Kind::RowCap, k, -1, double(rc), double(config.c1)});
        double budget = 0.0;
        for (int m = 0; m < M; ++m) {
            const double p = assignment.p_d2d[static_cast<size_t>(k)][static_cast<size_t>(m)];
            if (p < 0.0)
                out.push_back({Violation::Kind::NegativePower, k, m, p, 0.0});
            if (!assignment.active(k, m) && p > 0.0)
                out.push_back({Violation::Kind::InactivePower, k, m, p, 0.0});
            budget += p;
        }
        const double cap = instance.constants.p_max_d2d_mw;
        if (budget > cap * (1.0 + rel))
            out.push_back({Violation::Kind::D2DPowerBudget, k, -1, budget, cap});
    }
    for (int m = 0; m < M; ++m) {
        const int cc = assignment.col_count(m);
        if (cc > config.c2)
            out.push_back({Violation::Kind::ColCap, -1, m, double(cc), double(config.c2)});
        const double pc = assignment.p_cell[static_cast<size_t>(m)];
        const double cap = instance.constants.p_max_cell_mw;
        if (!(pc > 0.0) || pc > cap * (1.0 + rel))
            out.push_back({Violation::Kind::CellPowerCap, -1, m, pc, cap});
    }
    for (int m = 0; m < M; ++m) {
        const double bc = beta_cell(instance, assignment, m);
        const double pc = assignment.p_cell[static_cast<size_t>(m)];
        if (pc > 0.0 && pc * bc < instance.constants.gamma_cell * (1.0 - rel))
            out.push_back({Violation::Kind::SinrCell, -1, m, pc * bc, instance.constants.gamma_cell});
        for (int k = 0; k < K; ++k) {
            if (!assignment.active(k, m)) continue;
            const double sinr =
                assignment.p_d2d[static_cast<size_t>(k)][static_cast<size_t>(m)] *
                beta_d2d(instance, assignment, k, m);
            if (sinr < instance.constants.gamma_d2d * (1.0 - rel))
                out.push_back({Violation::Kind::SinrD2D, k, m, sinr, instance.constants.gamma_d2d});
        }
    }
    return out;
}

std::optional<double> fairness_index(const std::vector<double>& rates) {
    if (rates.empty()) return std::nullopt;
    double sum = 0.0, sumsq = 0.0;
    for (double r : rates) {
        sum += r;
        sumsq += r * r;
    }
    if (sumsq == 0.0) return std::nullopt;
    return (sum * sum) / (static_cast<double>(rates.size()) * sumsq);
}

std::optional<double> success_rate(const Assignment& assignment, int num_groups) {
    if (num_groups <= 0) return std::nullopt;
    int admitted = 0;
    for (int k = 0; k < num_groups; ++k)
        if (assignment.row_count(k) > 0) ++admitted;
    return static_cast<double>(admitted) / static_cast<double>(num_groups);
}

std::string Violation::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::RowCap: os << "group " << k << " uses " << value << " channels > C1=" << bound; break;
        case Kind::ColCap: os << "channel " << m << " shared by " << value << " groups > C2=" << bound; break;
        case Kind::SinrD2D: os << "D2D SINR " << value << " < " << bound << " at (k=" << k << ",m=" << m << ")"; break;
        case Kind::SinrCell: os << "cell SINR " << value << " < " << bound << " at m=" << m; break;
        case Kind::CellPowerCap: os << "CU power " << value << " outside (0," << bound << "] at m=" << m; break;
        case Kind::D2DPowerBudget: os << "D2D power budget " << value << " > " << bound << " for k=" << k; break;
        case Kind::NegativePower: os << "negative D2D power at (k=" << k << ",m=" << m << ")"; break;
        case Kind::InactivePower: os << "positive power on inactive link (k=" << k << ",m=" << m << ")"; break;
        case Kind::Shape: os << "assignment dimensions do not match instance"; break;
    }
    return os.str();
}

}  // namespace d2d
