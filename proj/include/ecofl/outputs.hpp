#pragma once

#include <string>
#include <vector>

#include "ecofl/config.hpp"
#include "ecofl/engine.hpp"

namespace ecofl::out {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Fixed column order, header always present, doubles at 9 significant digits.
std::string metrics_csv(const std::vector<engine::StepMetrics>& metrics);

// Mean/min/max of every CSV column plus mode and seed. No wall-clock content,
// so reruns with the same seed are byte-identical.
std::string summary_json(const cfg::ScenarioConfig& config,
                         const std::vector<engine::StepMetrics>& metrics);

// Every resolved config key, seed, version, output paths, wall-clock duration.
// The wall clock makes this file exempt from byte-identity checks.
std::string manifest_json(const cfg::ScenarioConfig& config, const std::string& out_dir,
                          double wall_seconds, const std::vector<std::string>& files);

std::string suite_csv(const std::vector<engine::SuiteEntry>& entries);

// Per-mode aggregate tables (outage and power/efficiency) plus raw entries.
std::string suite_json(const std::vector<engine::SuiteEntry>& entries);

void write_file(const std::string& path, const std::string& content);

} // namespace ecofl::out
