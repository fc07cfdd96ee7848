// debiaskf command-line front end.
//
//   simulate     write truth + measurement CSVs for a scenario
//   compare      run filters over Monte-Carlo batches, write metric CSVs
//   equivalence  randomized check that the decoupled bank matches the
//                joint filter on linear systems (exit 1 on breach)
//   bench        closed-form counts and wall-clock scaling over N
//
// Exit codes: 0 ok, 1 equivalence breach, 2 config/usage error, 3 runtime.

#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "debiaskf/complexity.hpp"
#include "debiaskf/config.hpp"
#include "debiaskf/csv.hpp"
#include "debiaskf/equivalence.hpp"
#include "debiaskf/kernels.hpp"
#include "debiaskf/metrics.hpp"
#include "debiaskf/parallel.hpp"
#include "debiaskf/version.hpp"

namespace {

using namespace debiaskf;

constexpr int kExitOk = 0;
constexpr int kExitBreach = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int mc_runs = 0;
};

ScenarioConfig resolve_config(const CommonOpts& opts, std::string& config_text, std::string& origin) {
    ScenarioConfig cfg;
    if (opts.config_path.empty()) {
        cfg = ScenarioConfig::default_config();
        origin = "<builtin>";
    } else {
        cfg = load_config_file(opts.config_path);
        origin = opts.config_path;
    }
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.mc_runs > 0) cfg.n_monte_carlo = opts.mc_runs;
    cfg.validate();
    config_text = cfg.to_text();
    return cfg;
}

RunManifest make_manifest(const CommonOpts& opts, const ScenarioConfig& cfg,
                          const std::string& config_text, const std::string& origin,
                          std::vector<std::string> filters) {
    RunManifest m;
    m.config_path = origin;
    m.seed = cfg.seed;
    m.filters = std::move(filters);
    m.out_dir = opts.out_dir;
    m.tool_version = kVersion;
    m.config_hash = fnv1a64(config_text);
    m.kernel_backend = kernels::backend_name();
    m.threads = thread_cap();
    return m;
}

std::set<FilterKind> parse_filters(const std::string& list) {
    std::set<FilterKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "askf")
            out.insert(FilterKind::askf);
        else if (item == "decoupled")
            out.insert(FilterKind::decoupled);
        else if (item == "approx")
            out.insert(FilterKind::approx);
        else if (!item.empty())
            throw ConfigError("unknown filter '" + item + "' (expected askf, decoupled, approx)");
    }
    if (out.empty()) throw ConfigError("no filters selected");
    return out;
}

int cmd_simulate(const CommonOpts& opts) {
    std::string config_text, origin;
    const ScenarioConfig cfg = resolve_config(opts, config_text, origin);
    std::filesystem::create_directories(opts.out_dir);
    const auto path = [&](const char* name) { return opts.out_dir + "/" + name; };

    write_manifest(path("manifest.json"), make_manifest(opts, cfg, config_text, origin, {}));
    write_file(path("config.txt"), config_text);

    std::vector<TruthRecord> records(static_cast<size_t>(cfg.n_monte_carlo));
    parallel_for(cfg.n_monte_carlo,
                 [&](int run) { records[static_cast<size_t>(run)] = simulate_truth(cfg, static_cast<std::uint64_t>(run)); });
    std::vector<RunTruth> truth;
    truth.reserve(records.size());
    for (const auto& r : records) truth.push_back(r.truth);

    write_truth_csv(path("truth.csv"), cfg, truth);
    write_bias_csv(path("biases.csv"), truth);
    write_measurements_csv(path("measurements.csv"), cfg, records);
    std::cout << "simulate: " << cfg.n_monte_carlo << " runs x " << cfg.n_steps() + 1 << " scans x "
              << cfg.n_targets() << " targets -> " << opts.out_dir << "\n";
    return kExitOk;
}

int cmd_compare(const CommonOpts& opts, const std::string& filter_spec, bool shared_linearization) {
    std::string config_text, origin;
    const ScenarioConfig cfg = resolve_config(opts, config_text, origin);
    const std::set<FilterKind> filters = parse_filters(filter_spec);
    std::filesystem::create_directories(opts.out_dir);
    const auto path = [&](const std::string& name) { return opts.out_dir + "/" + name; };

    std::vector<std::string> names;
    for (FilterKind k : filters) names.emplace_back(filter_name(k));
    write_manifest(path("manifest.json"), make_manifest(opts, cfg, config_text, origin, names));
    write_file(path("config.txt"), config_text);

    const McResult mc = run_monte_carlo(cfg, filters, shared_linearization);
    const auto pos_idx = position_indices(cfg.dims());
    for (const auto& [kind, est] : mc.estimates) {
        std::vector<MetricSeries> series;
        for (auto& s : rmse_location(est, mc.truth, pos_idx)) series.push_back(s);
        series.push_back(rmse_bias(est, mc.truth, cfg.n_sensors()));
        series.push_back(rmse_bias_per_sensor(est, mc.truth));
        for (auto& s : nees_location(est, mc.truth, pos_idx)) series.push_back(s);
        series.push_back(nees_bias(est, mc.truth));
        write_metrics_csv(path(std::string("metrics_") + filter_name(kind) + ".csv"), series);
        write_estimates_csv(path(std::string("estimates_") + filter_name(kind) + ".csv"), est);
        std::cout << "compare[" << filter_name(kind)
                  << "]: bias rmse at final step = " << series[static_cast<size_t>(cfg.n_targets())].values.back()
                  << " m\n";
    }
    return kExitOk;
}

int cmd_equivalence(int n_cases, std::uint64_t seed, int steps) {
    if (n_cases == 0) {
        std::cout << "equivalence: no cases requested, vacuously passing\n";
        return kExitOk;
    }
    const int n_choices[] = {1, 2, 3, 4};
    const int s_choices[] = {2, 4, 6};
    const int b_choices[] = {1, 3, 5};
    const int m_choices[] = {2, 4};
    Rng rng(seed);
    double worst = 0.0;
    int worst_case = -1;
    for (int c = 0; c < n_cases; ++c) {
        const int n = n_choices[rng.uniform_int(0, 3)];
        const int s = s_choices[rng.uniform_int(0, 2)];
        const int b = b_choices[rng.uniform_int(0, 2)];
        const int m = m_choices[rng.uniform_int(0, 1)];
        LinearSystem sys = make_random_system(rng, n, s, b, m);
        const EquivalenceReport rep = run_equivalence(sys, steps, seed + static_cast<std::uint64_t>(c));
        std::cout << "case " << c << ": N=" << n << " S=" << s << " B=" << b << " M=" << m
                  << " max deviation " << rep.max_overall() << " (step " << rep.worst_step << ")\n";
        if (rep.max_overall() > worst) {
            worst = rep.max_overall();
            worst_case = c;
        }
    }
    std::cout << "worst deviation " << worst << " (case " << worst_case << "), threshold 1e-8\n";
    if (worst >= 1e-8) {
        std::cerr << "equivalence BREACH: deviation " << worst << " in case " << worst_case << "\n";
        return kExitBreach;
    }
    return kExitOk;
}

int cmd_bench(const std::vector<int>& n_list, const std::string& out_path, long long s_dim,
              long long b_dim, long long m_dim, double target_ms, std::uint64_t seed) {
    CountModel shape{0, s_dim, b_dim, m_dim};
    std::ostringstream report;
    report << "#schema=debiaskf.bench.v1\n";
    report << "filter,n_targets,sec_per_step,mult_count,loglog_slope\n";
    for (BenchFilter f : {BenchFilter::decoupled, BenchFilter::askf}) {
        const BenchResult r = scaling_benchmark(f, n_list, shape, target_ms, seed);
        const char* name = f == BenchFilter::askf ? "askf" : "decoupled";
        for (const auto& p : r.points) {
            CountModel cm = shape;
            cm.n_targets = p.n_targets;
            const long long count =
                f == BenchFilter::askf ? askf_mult_count(cm) : decoupled_mult_count(cm);
            report << name << "," << p.n_targets << "," << p.sec_per_step << "," << count << ","
                   << r.loglog_slope << "\n";
        }
        std::cout << name << " log-log slope vs N: " << r.loglog_slope << "\n";
    }
    if (!out_path.empty()) write_file(out_path, report.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decoupled Kalman filtering for multitarget tracking with sensor bias"};
    app.set_version_flag("--version", debiaskf::kVersion);
    app.require_subcommand(1);

    CommonOpts opts;
    std::string filter_spec = "decoupled,askf,approx";
    bool shared_linearization = false;
    int n_cases = 20, eq_steps = 50;
    std::uint64_t eq_seed = 7;
    std::vector<int> n_list{2, 4, 8, 16, 32};
    std::string bench_out;
    long long bench_s = 6, bench_b = 5, bench_m = 2;
    double bench_ms = 150.0;

    auto add_common = [&](CLI::App* cmd, bool with_mc) {
        cmd->add_option("--config", opts.config_path, "scenario config file (builtin default when omitted)");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--seed", opts.seed, "override scenario seed")->each([&](const std::string&) {
            opts.seed_set = true;
        });
        if (with_mc) cmd->add_option("--mc-runs", opts.mc_runs, "override Monte-Carlo run count");
    };

    CLI::App* sim = app.add_subcommand("simulate", "write truth and measurement CSVs");
    add_common(sim, true);

    CLI::App* cmp = app.add_subcommand("compare", "run filters and write metric CSVs");
    add_common(cmp, true);
    cmp->add_option("--filters", filter_spec, "comma list: decoupled,askf,approx");
    cmp->add_flag("--shared-linearization", shared_linearization,
                  "joint filter linearizes at the decoupled branch predictions");

    CLI::App* eq = app.add_subcommand("equivalence", "randomized decoupled-vs-joint check");
    eq->add_option("--n-cases", n_cases, "number of random systems");
    eq->add_option("--seed", eq_seed, "rng seed");
    eq->add_option("--steps", eq_steps, "steps per case");

    CLI::App* bench = app.add_subcommand("bench", "complexity scaling benchmark");
    bench->add_option("--n-list", n_list, "target counts to sweep");
    bench->add_option("--out", bench_out, "report CSV path");
    bench->add_option("--s-dim", bench_s, "per-target state dim");
    bench->add_option("--b-dim", bench_b, "bias dim");
    bench->add_option("--m-dim", bench_m, "per-target measurement dim");
    bench->add_option("--budget-ms", bench_ms, "timing budget per sweep point");
    bench->add_option("--seed", eq_seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(opts);
        if (cmp->parsed()) return cmd_compare(opts, filter_spec, shared_linearization);
        if (eq->parsed()) return cmd_equivalence(n_cases, eq_seed, eq_steps);
        if (bench->parsed()) return cmd_bench(n_list, bench_out, bench_s, bench_b, bench_m, bench_ms, eq_seed);
    } catch (const debiaskf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
