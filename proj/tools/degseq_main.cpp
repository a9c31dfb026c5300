#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "degseq/analysis.hpp"
#include "degseq/errors.hpp"
#include "degseq/io.hpp"
#include "degseq/multigraph.hpp"
#include "degseq/params.hpp"
#include "degseq/recurrence.hpp"

namespace {

using nlohmann::json;
using namespace degseq;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitConjectured = 3;
constexpr int kExitNumerical = 4;

struct RunConfig {
    std::string alpha = "1";
    std::string alpha1 = "1";
    int m = 1;
    std::int64_t horizon = 10000;
    int trials = 4;
    std::uint64_t seed = 1;
    double epsilon_fraction = 0.1;
    int cold_start_edges = 1;
    std::int64_t trajectory_stride = 0;   // 0: powers of two
    std::vector<std::int64_t> snapshots;  // empty: powers of two from 1024, plus T
    std::int64_t kmax = -1;               // -1: regime default (2000 power law, 500 otherwise)
    std::int64_t k_report = 30;
    int threads = 0;
    std::string output_dir = "out";
    bool per_trial_counts = false;
    std::vector<double> alpha1_grid;

    json echo() const {
        json j;
        j["alpha"] = alpha;
        j["alpha1"] = alpha1;
        j["m"] = m;
        j["horizon"] = horizon;
        j["trials"] = trials;
        j["seed"] = seed;
        j["epsilon_fraction"] = epsilon_fraction;
        j["cold_start_edges"] = cold_start_edges;
        j["trajectory_stride"] = trajectory_stride;
        j["snapshots"] = snapshots;
        j["kmax"] = kmax;
        j["k_report"] = k_report;
        j["output_dir"] = output_dir;
        j["per_trial_counts"] = per_trial_counts;
        if (!alpha1_grid.empty()) j["alpha1_grid"] = alpha1_grid;
        return j;
    }
};

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw OutOfRange("cannot read config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw OutOfRange("config file " + path + " is not valid JSON: " + e.what());
    }
    try {
        auto set_num_or_string = [&](const char* key, std::string& out) {
            if (!j.contains(key)) return;
            if (j[key].is_string())
                out = j[key].get<std::string>();
            else
                out = format_double(j[key].get<double>());
        };
        set_num_or_string("alpha", cfg.alpha);
        set_num_or_string("alpha1", cfg.alpha1);
        if (j.contains("m")) cfg.m = j["m"].get<int>();
        if (j.contains("horizon")) cfg.horizon = j["horizon"].get<std::int64_t>();
        if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("epsilon_fraction"))
            cfg.epsilon_fraction = j["epsilon_fraction"].get<double>();
        if (j.contains("cold_start_edges"))
            cfg.cold_start_edges = j["cold_start_edges"].get<int>();
        if (j.contains("trajectory_stride"))
            cfg.trajectory_stride = j["trajectory_stride"].get<std::int64_t>();
        if (j.contains("snapshots"))
            cfg.snapshots = j["snapshots"].get<std::vector<std::int64_t>>();
        if (j.contains("kmax")) cfg.kmax = j["kmax"].get<std::int64_t>();
        if (j.contains("k_report")) cfg.k_report = j["k_report"].get<std::int64_t>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
        if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("per_trial_counts"))
            cfg.per_trial_counts = j["per_trial_counts"].get<bool>();
        if (j.contains("alpha1_grid"))
            cfg.alpha1_grid = j["alpha1_grid"].get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw OutOfRange("config file " + path + ": " + e.what());
    }
}

// trials >= 1 and T >= 2 for simulation commands; aggregation needs two
void require_run_bounds(const RunConfig& cfg, int min_trials) {
    if (cfg.trials < min_trials)
        throw OutOfRange("trials = " + std::to_string(cfg.trials) + ", require >= " +
                         std::to_string(min_trials));
    if (cfg.horizon < 2)
        throw OutOfRange("horizon = " + std::to_string(cfg.horizon) + ", require T >= 2");
}

void apply_env(RunConfig& cfg) {
    if (const char* s = std::getenv("DEGSEQ_SEED")) cfg.seed = std::stoull(s);
    if (const char* s = std::getenv("DEGSEQ_OUTDIR")) cfg.output_dir = s;
}

ModelParams make_params(const RunConfig& cfg) {
    if (cfg.alpha.find('/') != std::string::npos && cfg.alpha1.find('/') != std::string::npos)
        return validate(Rational::parse(cfg.alpha), Rational::parse(cfg.alpha1), cfg.m);
    return validate(std::stod(cfg.alpha), std::stod(cfg.alpha1), cfg.m);
}

std::vector<std::int64_t> snapshot_schedule(const RunConfig& cfg) {
    if (!cfg.snapshots.empty()) return cfg.snapshots;
    std::vector<std::int64_t> snaps;
    for (std::int64_t t = 1024; t < cfg.horizon; t *= 2) snaps.push_back(t);
    snaps.push_back(cfg.horizon);
    return snaps;
}

std::int64_t default_kmax(RegimeLabel regime, const RunConfig& cfg) {
    if (cfg.kmax > 0) return cfg.kmax;
    return regime == RegimeLabel::PowerLaw ? 2000 : 500;
}

MeanProfile profile_at(const std::vector<TrialResult>& results, std::size_t snap_index) {
    HistogramMoments moments;
    for (const auto& r : results) moments.add(r.histograms.at(snap_index));
    return finalize(moments);
}

int cmd_simulate(const RunConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    require_run_bounds(cfg, 1);
    const ModelParams params = make_params(cfg);
    const auto snaps = snapshot_schedule(cfg);
    SimOptions opts;
    opts.cold_start_edges = cfg.cold_start_edges == 0 ? params.m : cfg.cold_start_edges;
    opts.trajectory_stride = cfg.trajectory_stride;

    const auto results =
        run_trials(params, cfg.horizon, cfg.trials, cfg.seed, snaps, opts, cfg.threads);

    const std::filesystem::path dir(cfg.output_dir);
    std::vector<std::filesystem::path> artifacts;
    for (std::size_t i = 0; i < results.front().histograms.size(); ++i) {
        const auto t = results.front().histograms[i].t;
        const auto path = dir / ("histogram_t" + std::to_string(t) + ".csv");
        std::vector<DegreeHistogram> per_trial;
        if (cfg.per_trial_counts)
            for (const auto& r : results) per_trial.push_back(r.histograms[i]);
        if (cfg.trials >= 2) {
            write_profile_csv(path, profile_at(results, i), per_trial);
        } else {
            MeanProfile single;
            single.t = t;
            single.trials = 1;
            const auto& h = results.front().histograms[i];
            for (const auto c : h.counts) {
                single.mean.push_back(static_cast<double>(c) / static_cast<double>(t));
                single.se.push_back(0.0);
                single.mean_count.push_back(static_cast<double>(c));
            }
            write_profile_csv(path, single, per_trial);
        }
        artifacts.push_back(path);
    }
    const auto traj_path = dir / "trajectory.csv";
    write_trajectory_csv(traj_path, results);
    artifacts.push_back(traj_path);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    write_json(dir / "manifest.json",
               make_manifest(cfg.echo(), cfg.seed, cfg.trials, wall, artifacts));
    std::cout << "simulate: " << cfg.trials << " trials to T=" << cfg.horizon << ", "
              << artifacts.size() << " artifacts in " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_theory(const RunConfig& cfg) {
    const ModelParams params = make_params(cfg);
    const DerivedConstants constants = derive(params, cfg.epsilon_fraction);
    const RegimeLabel regime = classify(params);
    if (regime == RegimeLabel::Conjectured) {
        std::cerr << "conjectured region: alpha1 >= 2*alpha_c, no theoretical degree sequence\n";
        return kExitConjectured;
    }
    TheoreticalSequence seq = build_sequence(params, constants, default_kmax(regime, cfg));
    seq.C = leading_constant(seq);

    const std::filesystem::path dir(cfg.output_dir);
    write_theory_csv(dir / "theory.csv", seq);
    json j = constants_json(params, constants, regime);
    j["C"] = seq.C;
    j["D"] = seq.D;
    j["d0"] = seq.d0;
    j["kmax"] = seq.kmax;
    const SequenceMass mass = sequence_mass(seq);
    j["vertex_mass"] = mass.vertex_mass;
    j["degree_mass"] = mass.degree_mass;
    write_json(dir / "constants.json", j);
    write_json(dir / "manifest.json", make_manifest(cfg.echo(), cfg.seed, 0, 0.0,
                                                    {dir / "theory.csv", dir / "constants.json"}));
    std::cout << "theory: regime " << to_string(regime) << ", C=" << format_double(seq.C)
              << ", files in " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_special(const RunConfig& cfg) {
    const ModelParams params = make_params(cfg);
    const DerivedConstants constants = derive(params, cfg.epsilon_fraction);
    const RegimeLabel regime = classify(params);
    if (regime == RegimeLabel::Conjectured) {
        std::cerr << "conjectured region: alpha1 >= 2*alpha_c, no homogeneous solution\n";
        return kExitConjectured;
    }
    const KernelSpec kernel = KernelSpec::for_regime(regime, constants);
    const std::filesystem::path dir(cfg.output_dir);
    const std::int64_t hi = std::min<std::int64_t>(default_kmax(regime, cfg), 1024);
    write_ufunction_csv(dir / "u_table.csv", kernel, 1, hi);
    write_json(dir / "manifest.json",
               make_manifest(cfg.echo(), cfg.seed, 0, 0.0, {dir / "u_table.csv"}));
    std::cout << "special: regime " << to_string(regime) << ", u(k) for k in [1," << hi
              << "] in " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    require_run_bounds(cfg, 2);
    const ModelParams params = make_params(cfg);
    const DerivedConstants constants = derive(params, cfg.epsilon_fraction);
    const RegimeLabel regime = classify(params);
    SimOptions opts;
    opts.cold_start_edges = cfg.cold_start_edges == 0 ? params.m : cfg.cold_start_edges;

    const std::vector<std::int64_t> snaps{cfg.horizon};
    const auto results =
        run_trials(params, cfg.horizon, cfg.trials, cfg.seed, snaps, opts, cfg.threads);
    const MeanProfile profile = profile_at(results, 0);

    const std::filesystem::path dir(cfg.output_dir);
    std::vector<std::filesystem::path> artifacts;

    json report;
    if (regime == RegimeLabel::Conjectured) {
        // no theory curve: detected-shape fields only
        report["schema_version"] = kSchemaVersion;
        report["regime_declared"] = to_string(regime);
        try {
            report["regime_detected"] =
                to_string(detect_regime(profile, params.m + 2, cfg.k_report, params.m));
        } catch (const WindowTooSparse&) {
            report["regime_detected"] = nullptr;
        }
        report["t"] = cfg.horizon;
        report["trials"] = cfg.trials;
    } else {
        TheoreticalSequence seq =
            build_sequence(params, constants, default_kmax(regime, cfg));
        seq.C = leading_constant(seq);
        const ComparisonReport cr = compare(profile, seq, cfg.k_report);
        report = comparison_json(cr);
        const auto curve_path = dir / "compare.csv";
        write_compare_csv(curve_path, profile, seq, cfg.k_report);
        artifacts.push_back(curve_path);
    }
    const auto report_path = dir / "report.json";
    write_json(report_path, report);
    artifacts.push_back(report_path);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    write_json(dir / "manifest.json",
               make_manifest(cfg.echo(), cfg.seed, cfg.trials, wall, artifacts));
    std::cout << "compare: " << report.dump() << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.alpha1_grid.empty())
        throw OutOfRange("sweep requires alpha1_grid (config) or --alpha1-grid");
    require_run_bounds(cfg, 2);
    const double alpha = std::stod(cfg.alpha);
    SimOptions opts;
    opts.cold_start_edges = cfg.cold_start_edges;

    std::vector<SweepRow> rows;
    for (const double a1 : cfg.alpha1_grid) {
        const ModelParams params = validate(alpha, a1, cfg.m);
        const DerivedConstants constants = derive(params, cfg.epsilon_fraction);
        const RegimeLabel regime = classify(params);
        SweepRow row;
        row.alpha1 = a1;
        row.declared = regime;
        row.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
        row.fitted_log_gamma = std::numeric_limits<double>::quiet_NaN();
        row.tv = std::numeric_limits<double>::quiet_NaN();

        const std::vector<std::int64_t> snaps{cfg.horizon};
        const auto results =
            run_trials(params, cfg.horizon, cfg.trials, cfg.seed, snaps, opts, cfg.threads);
        const MeanProfile profile = profile_at(results, 0);
        try {
            row.fitted_exponent =
                fit_tail(profile, TailModel::PowerLawSlope, params.m + 2, cfg.k_report, params.m)
                    .value;
        } catch (const WindowTooSparse&) {
        }
        try {
            const double beta_fit =
                constants.beta ? *constants.beta : 0.0;  // shape parameter for the rate fit
            row.fitted_log_gamma =
                fit_tail(profile, TailModel::ExponentialRate, params.m + 2,
                         std::max<std::int64_t>(40, cfg.k_report), params.m, beta_fit, 0.2,
                         FitStyle::Corrected)
                    .value;
        } catch (const WindowTooSparse&) {
        }
        if (regime != RegimeLabel::Conjectured) {
            TheoreticalSequence seq =
                build_sequence(params, constants, default_kmax(regime, cfg));
            const ComparisonReport cr = compare(profile, seq, cfg.k_report);
            row.tv = cr.tv;
            row.pass = cr.pass ? 1 : 0;
        }
        rows.push_back(row);
    }
    const std::filesystem::path dir(cfg.output_dir);
    write_sweep_csv(dir / "sweep.csv", rows);
    write_json(dir / "manifest.json",
               make_manifest(cfg.echo(), cfg.seed, cfg.trials, 0.0, {dir / "sweep.csv"}));
    std::cout << "sweep: " << rows.size() << " grid points in " << cfg.output_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evolving random graph process: simulation, theory, comparison"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.alpha, "vertex+edge step probability; fractions allowed");
        sub->add_option("--alpha1", cfg.alpha1, "vertex step probability; fractions allowed");
        sub->add_option("--m", cfg.m, "edges per step");
        sub->add_option("-T,--horizon", cfg.horizon, "steps per trial");
        sub->add_option("--trials", cfg.trials, "number of trials");
        sub->add_option("--seed", cfg.seed, "base seed (stream id = trial index)");
        sub->add_option("--epsilon-fraction", cfg.epsilon_fraction, "epsilon as a fraction of eta");
        sub->add_option("--cold-start-edges", cfg.cold_start_edges,
                        "edges attached on an empty graph (0 means m)");
        sub->add_option("--trajectory-stride", cfg.trajectory_stride,
                        "trajectory sample stride (0: powers of two)");
        sub->add_option("--snapshots", cfg.snapshots, "histogram snapshot times");
        sub->add_option("--kmax", cfg.kmax, "theory truncation (-1: regime default)");
        sub->add_option("--k-report", cfg.k_report, "comparison window upper end");
        sub->add_option("--threads", cfg.threads, "worker threads (0: hardware)");
        sub->add_option("-o,--output-dir", cfg.output_dir, "output directory");
        sub->add_flag("--per-trial-counts", cfg.per_trial_counts,
                      "include per-trial columns in histogram CSVs");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run trials, write histograms");
    CLI::App* theory = app.add_subcommand("theory", "construct the limiting degree sequence");
    CLI::App* special = app.add_subcommand("special", "tabulate the homogeneous solution u(k)");
    CLI::App* compare_cmd = app.add_subcommand("compare", "simulate and compare against theory");
    CLI::App* sweep = app.add_subcommand("sweep", "scan alpha1 across the critical point");
    for (CLI::App* sub : {simulate, theory, special, compare_cmd, sweep}) {
        sub->fallthrough();  // let --config after the subcommand reach the parent
        add_common(sub);
    }
    sweep->add_option("--alpha1-grid", cfg.alpha1_grid, "alpha1 grid values");

    // precedence: defaults < config file < environment < flags
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig base;
        if (!config_path.empty()) load_config_file(base, config_path);
        apply_env(base);
        cfg = base;
        // re-parse so command-line flags win over file and environment
        try {
            app.clear();
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            return app.exit(e) == 0 ? kExitOk : kExitConfig;
        }

        if (simulate->parsed()) return cmd_simulate(cfg);
        if (theory->parsed()) return cmd_theory(cfg);
        if (special->parsed()) return cmd_special(cfg);
        if (compare_cmd->parsed()) return cmd_compare(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        std::cerr << "no subcommand\n";
        return kExitConfig;
    } catch (const OutOfRange& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DegenerateEpsilon& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConjecturedRegime& e) {
        std::cerr << "conjectured region: " << e.what() << "\n";
        return kExitConjectured;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
