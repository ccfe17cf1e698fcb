// io.hpp — versioned JSON file formats
//
// Schemas (all files carry a "schema" tag):
//   pulseopt.device/1     per-site {omega, alpha, drive_strength}, couplings, levels
//   pulseopt.schedule/1   dt plus segments with integer start_dt/duration_dt
//   pulseopt.metrics/1    MetricReport
//   pulseopt.run/1        optimization artifact (config echo, seed, trace, best)
//   pulseopt.result/1     experiment result bundle
//   pulseopt.experiment/1 experiment configuration
#pragma once

#include "pulseopt/cost.hpp"
#include "pulseopt/metrics.hpp"
#include "pulseopt/optimize.hpp"
#include "pulseopt/protocols.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>

namespace pulseopt {

using Json = nlohmann::json;

Json device_to_json(const DeviceModel& device);
DeviceModel device_from_json(const Json& j);

// Schedules are snapped to the dt grid on export; reading back reproduces the
// snapped schedule exactly.
Json schedule_to_json(const PulseSchedule& schedule);
PulseSchedule schedule_from_json(const Json& j);

Json metric_report_to_json(const MetricReport& report);
MetricReport metric_report_from_json(const Json& j);

Json optimization_run_to_json(const OptimizationRun& run);
OptimizationRun optimization_run_from_json(const Json& j);

Json state_to_json(const StateVector& psi);
StateVector state_from_json(const Json& j);

Json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace pulseopt
