#include "debiaskf/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace debiaskf {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FilterError("cannot write '" + path + "'");
    return out;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void write_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::json j;
    j["schema"] = "debiaskf.manifest.v1";
    j["config_path"] = m.config_path;
    j["seed"] = m.seed;
    j["filters"] = m.filters;
    j["out_dir"] = m.out_dir;
    j["tool_version"] = m.tool_version;
    j["config_hash_fnv1a64"] = m.config_hash;
    j["kernel_backend"] = m.kernel_backend;
    j["threads"] = m.threads;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_truth_csv(const std::string& path, const ScenarioConfig& cfg,
                     const std::vector<RunTruth>& truth) {
    auto out = open_out(path);
    out << "#schema=debiaskf.truth.v1\n";
    out << "run,step,target";
    for (int i = 0; i < cfg.state_dim(); ++i) out << ",x" << i;
    out << "\n";
    for (size_t run = 0; run < truth.size(); ++run)
        for (size_t k = 0; k < truth[run].states.size(); ++k)
            for (size_t t = 0; t < truth[run].states[k].size(); ++t) {
                out << run << "," << k << "," << t;
                const Vec& x = truth[run].states[k][t];
                for (int i = 0; i < x.size(); ++i) out << "," << num(x[i]);
                out << "\n";
            }
}

void write_bias_csv(const std::string& path, const std::vector<RunTruth>& truth) {
    auto out = open_out(path);
    out << "#schema=debiaskf.bias.v1\n";
    out << "run,sensor,bias_m\n";
    for (size_t run = 0; run < truth.size(); ++run)
        for (int s = 0; s < truth[run].bias.size(); ++s)
            out << run << "," << s << "," << num(truth[run].bias[s]) << "\n";
}

void write_measurements_csv(const std::string& path, const ScenarioConfig& cfg,
                            const std::vector<TruthRecord>& records) {
    auto out = open_out(path);
    out << "#schema=debiaskf.measurements.v1\n";
    out << "run,step,target,sensor,range_m,velocity_mps\n";
    for (size_t run = 0; run < records.size(); ++run)
        for (size_t k = 0; k < records[run].measurements.size(); ++k)
            for (size_t t = 0; t < records[run].measurements[k].size(); ++t) {
                const Vec& z = records[run].measurements[k][t];
                for (int s = 0; s < cfg.n_sensors(); ++s)
                    out << run << "," << k << "," << t << "," << s << "," << num(z[2 * s]) << ","
                        << num(z[2 * s + 1]) << "\n";
            }
}

void write_estimates_csv(const std::string& path, const FilterEstimates& est) {
    auto out = open_out(path);
    out << "#schema=debiaskf.estimates.v1\n";
    if (est.runs.empty() || est.runs.front().empty()) {
        out << "run,step,filter,target\n";
        return;
    }
    const auto& first = est.runs.front().front();
    const int s_dim = first.targets.front().x.size();
    const int b_dim = first.bias.size();
    out << "run,step,filter,target";
    for (int i = 0; i < s_dim; ++i) out << ",x" << i;
    for (int i = 0; i < s_dim; ++i) out << ",p" << i;
    for (int i = 0; i < b_dim; ++i) out << ",b" << i;
    for (int i = 0; i < b_dim; ++i) out << ",pb" << i;
    out << "\n";
    for (size_t run = 0; run < est.runs.size(); ++run)
        for (size_t k = 0; k < est.runs[run].size(); ++k) {
            const StepEstimate& e = est.runs[run][k];
            for (size_t t = 0; t < e.targets.size(); ++t) {
                out << run << "," << k << "," << est.filter << "," << t;
                const auto& te = e.targets[t];
                for (int i = 0; i < s_dim; ++i) out << "," << num(te.x[i]);
                for (int i = 0; i < s_dim; ++i) out << "," << num(te.p(i, i));
                for (int i = 0; i < b_dim; ++i) out << "," << num(e.bias[i]);
                for (int i = 0; i < b_dim; ++i) out << "," << num(e.p_bias(i, i));
                out << "\n";
            }
        }
}

void write_metrics_csv(const std::string& path, const std::vector<MetricSeries>& series) {
    auto out = open_out(path);
    out << "#schema=debiaskf.metrics.v1\n";
    out << "step,metric,filter,id,value,bound_low,bound_high\n";
    for (const auto& s : series)
        for (size_t k = 0; k < s.values.size(); ++k) {
            out << k << "," << s.metric << "," << s.filter << "," << s.id << "," << num(s.values[k]);
            if (s.metric.rfind("nees", 0) == 0)
                out << "," << num(s.bound_low) << "," << num(s.bound_high);
            else
                out << ",,";
            out << "\n";
        }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FilterError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

}  // namespace debiaskf
