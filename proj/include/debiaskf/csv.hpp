#pragma once

// CSV and manifest output. Every CSV starts with a versioned schema line
// (`#schema=debiaskf.<kind>.v1`) so downstream figure scripts can pin the
// column contract. Doubles are printed round-trip exact, which makes output
// byte-stable under a fixed seed.

#include <string>
#include <vector>

#include "debiaskf/metrics.hpp"
#include "debiaskf/scenario.hpp"

namespace debiaskf {

std::uint64_t fnv1a64(const std::string& bytes);

struct RunManifest {
    std::string config_path;  // "<builtin>" when defaulted
    std::uint64_t seed = 0;
    std::vector<std::string> filters;
    std::string out_dir;
    std::string tool_version;
    std::uint64_t config_hash = 0;  // fnv1a64 of the config text
    std::string kernel_backend;
    int threads = 1;
};

// Manifest is always written before any result file.
void write_manifest(const std::string& path, const RunManifest& m);

void write_truth_csv(const std::string& path, const ScenarioConfig& cfg,
                     const std::vector<RunTruth>& truth);
void write_bias_csv(const std::string& path, const std::vector<RunTruth>& truth);
void write_measurements_csv(const std::string& path, const ScenarioConfig& cfg,
                            const std::vector<TruthRecord>& records);
void write_estimates_csv(const std::string& path, const FilterEstimates& est);
void write_metrics_csv(const std::string& path, const std::vector<MetricSeries>& series);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace debiaskf
