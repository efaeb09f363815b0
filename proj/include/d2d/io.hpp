#ifndef D2D_IO_HPP
#define D2D_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "d2d/bench.hpp"

namespace d2d::io {

/// Instance document: positions in meters, radio constants linear, gains
/// optional (regenerated from positions + fading_seed when absent).
void write_instance(std::ostream& os, const NetworkInstance& instance, uint64_t fading_seed,
                    bool include_gains = true);
NetworkInstance read_instance(std::istream& is);

void write_instance_file(const std::string& path, const NetworkInstance& instance,
                         uint64_t fading_seed, bool include_gains = true);
NetworkInstance read_instance_file(const std::string& path);

bench::ScenarioConfig read_scenario(std::istream& is);
bench::ScenarioConfig read_scenario_file(const std::string& path);

/// Loads an "angle_deg radius_frac" table (comments with '#').
std::vector<std::pair<double, double>> read_layout_file(const std::string& path);

void write_records_csv(std::ostream& os, const std::vector<bench::TrialRecord>& records);
void write_aggregates_csv(std::ostream& os, const std::vector<bench::SweepPoint>& sweep);

}  // namespace d2d::io

#endif  // D2D_IO_HPP
