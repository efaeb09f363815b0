#include "d2d/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace d2d::io {

using nlohmann::json;

namespace {

json point_to_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json constants_to_json(const RadioConstants& c) {
    return json{{"noise_mw", c.noise_mw},
                {"alpha", c.pathloss_alpha},
                {"gamma_d2d", c.gamma_d2d},
                {"gamma_cell", c.gamma_cell},
                {"p_max_cell_mw", c.p_max_cell_mw},
                {"p_max_d2d_mw", c.p_max_d2d_mw}};
}

RadioConstants constants_from_json(const json& j) {
    RadioConstants c;
    // linear fields take precedence; dB variants accepted for hand-written files
    if (j.contains("noise_mw")) c.noise_mw = j.at("noise_mw").get<double>();
    else if (j.contains("noise_dbm")) c.noise_mw = dbm_to_mw(j.at("noise_dbm").get<double>());
    c.pathloss_alpha = j.value("alpha", 3.0);
    if (j.contains("gamma_d2d")) c.gamma_d2d = j.at("gamma_d2d").get<double>();
    else if (j.contains("gamma_d2d_db")) c.gamma_d2d = db_to_lin(j.at("gamma_d2d_db").get<double>());
    if (j.contains("gamma_cell")) c.gamma_cell = j.at("gamma_cell").get<double>();
    else if (j.contains("gamma_cell_db")) c.gamma_cell = db_to_lin(j.at("gamma_cell_db").get<double>());
    if (j.contains("p_max_cell_mw")) c.p_max_cell_mw = j.at("p_max_cell_mw").get<double>();
    else if (j.contains("p_max_cell_dbm")) c.p_max_cell_mw = dbm_to_mw(j.at("p_max_cell_dbm").get<double>());
    if (j.contains("p_max_d2d_mw")) c.p_max_d2d_mw = j.at("p_max_d2d_mw").get<double>();
    else if (j.contains("p_max_d2d_dbm")) c.p_max_d2d_mw = dbm_to_mw(j.at("p_max_d2d_dbm").get<double>());
    c.check();
    return c;
}

}  // namespace

void write_instance(std::ostream& os, const NetworkInstance& instance, uint64_t fading_seed,
                    bool include_gains) {
    json j;
    j["cell_radius"] = instance.cell_radius;
    j["constants"] = constants_to_json(instance.constants);
    j["fading_seed"] = fading_seed;
    j["cu_positions"] = json::array();
    for (const auto& p : instance.cu_positions) j["cu_positions"].push_back(point_to_json(p));
    j["groups"] = json::array();
    for (const auto& g : instance.groups) {
        json jg;
        jg["id"] = g.id;
        jg["transmitter"] = point_to_json(g.transmitter);
        jg["receivers"] = json::array();
        for (const auto& r : g.receivers) jg["receivers"].push_back(point_to_json(r));
        j["groups"].push_back(std::move(jg));
    }
    if (include_gains) {
        json jg;
        jg["g_cell"] = instance.gains.g_cell;
        jg["g_d2c"] = instance.gains.g_d2c;
        jg["g_d2d_self"] = instance.gains.g_d2d_self;
        jg["g_c2d"] = instance.gains.g_c2d;
        jg["g_d2d_cross"] = instance.gains.g_d2d_cross;
        j["gains"] = std::move(jg);
    }
    os << std::setw(1) << j << "\n";
}

NetworkInstance read_instance(std::istream& is) {
    json j;
    is >> j;
    NetworkInstance instance;
    instance.cell_radius = j.value("cell_radius", 1000.0);
    instance.constants = constants_from_json(j.at("constants"));
    for (const auto& p : j.at("cu_positions")) instance.cu_positions.push_back(point_from_json(p));
    int next_id = 0;
    for (const auto& jg : j.value("groups", json::array())) {
        D2DGroup g;
        g.id = jg.value("id", next_id);
        ++next_id;
        g.transmitter = point_from_json(jg.at("transmitter"));
        for (const auto& r : jg.at("receivers")) g.receivers.push_back(point_from_json(r));
        instance.groups.push_back(std::move(g));
    }
    if (j.contains("gains")) {
        const auto& jg = j.at("gains");
        instance.gains.g_cell = jg.at("g_cell").get<std::vector<double>>();
        instance.gains.g_d2c = jg.at("g_d2c").get<std::vector<std::vector<double>>>();
        instance.gains.g_d2d_self =
            jg.at("g_d2d_self").get<std::vector<std::vector<std::vector<double>>>>();
        instance.gains.g_c2d = jg.at("g_c2d").get<std::vector<std::vector<std::vector<double>>>>();
        instance.gains.g_d2d_cross =
            jg.at("g_d2d_cross").get<std::vector<std::vector<std::vector<double>>>>();
    } else {
        instance.gains = bench::gains_from_positions(instance.cu_positions, instance.groups,
                                                     instance.constants,
                                                     j.at("fading_seed").get<uint64_t>());
    }
    instance.check();
    return instance;
}

void write_instance_file(const std::string& path, const NetworkInstance& instance,
                         uint64_t fading_seed, bool include_gains) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_instance(os, instance, fading_seed, include_gains);
}

NetworkInstance read_instance_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_instance(is);
}

bench::ScenarioConfig read_scenario(std::istream& is) {
    json j;
    is >> j;
    bench::ScenarioConfig c;
    c.cell_radius = j.value("cell_radius", c.cell_radius);
    c.cluster_radius = j.value("cluster_radius", c.cluster_radius);
    c.num_channels = j.value("num_channels", c.num_channels);
    c.num_groups = j.value("num_groups", c.num_groups);
    c.group_size = j.value("group_size", c.group_size);
    c.trials = j.value("trials", c.trials);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.c1 = j.value("c1", c.c1);
    c.c2 = j.value("c2", c.c2);
    c.workers = j.value("workers", c.workers);
    const std::string placement = j.value("placement", std::string("clustered"));
    if (placement == "regular")
        c.placement = bench::Placement::Regular;
    else if (placement == "clustered")
        c.placement = bench::Placement::Clustered;
    else
        throw std::invalid_argument("scenario: unknown placement " + placement);
    if (j.contains("radio")) c.radio = constants_from_json(j.at("radio"));
    if (j.contains("regular_layout"))
        for (const auto& row : j.at("regular_layout"))
            c.regular_layout.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    c.check();
    return c;
}

bench::ScenarioConfig read_scenario_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_scenario(is);
}

std::vector<std::pair<double, double>> read_layout_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::vector<std::pair<double, double>> layout;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double ang = 0.0, frac = 0.0;
        if (ls >> ang >> frac) layout.emplace_back(ang, frac);
    }
    return layout;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return "";
    std::ostringstream os;
    os << std::setprecision(12) << *v;
    return os.str();
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<bench::TrialRecord>& records) {
    os << "trial,algorithm,r_sum,r_d2d_total,r_cell_total,r_cell_max,success_rate,fairness,"
          "wall_time,gap\n";
    os << std::setprecision(12);
    for (const auto& r : records) {
        os << r.trial << ',' << r.algorithm << ',';
        if (r.ok)
            os << r.r_sum << ',' << r.r_d2d_total << ',' << r.r_cell_total << ',' << r.r_cell_max;
        else
            os << ",,,";
        os << ',' << opt_str(r.success_rate) << ',' << opt_str(r.fairness) << ',' << r.wall_time
           << ',' << opt_str(r.gap) << "\n";
    }
}

void write_aggregates_csv(std::ostream& os, const std::vector<bench::SweepPoint>& sweep) {
    os << "param,value,algorithm,n,mean_r_sum,std_r_sum,mean_r_d2d,std_r_d2d,mean_r_cell_max,"
          "mean_success_rate,std_success_rate,mean_fairness,std_fairness,fairness_n\n";
    os << std::setprecision(12);
    for (const auto& pt : sweep) {
        for (const auto& a : bench::aggregate(pt.records)) {
            os << pt.param << ',' << pt.value << ',' << a.algorithm << ',' << a.n << ','
               << a.mean_r_sum << ',' << a.std_r_sum << ',' << a.mean_r_d2d << ',' << a.std_r_d2d
               << ',' << a.mean_r_cell_max << ',' << a.mean_success << ',' << a.std_success << ','
               << a.mean_fairness << ',' << a.std_fairness << ',' << a.fairness_n << "\n";
        }
    }
}

}  // namespace d2d::io
