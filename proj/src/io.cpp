#include "degseq/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "degseq/errors.hpp"

namespace degseq {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const std::byte b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for checksum");
    std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fnv1a64(std::as_bytes(std::span<const char>(data)));
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "# degseq csv schema=" << kSchemaVersion << "\n";
    return out;
}

}  // namespace

void write_profile_csv(const std::filesystem::path& path, const MeanProfile& profile,
                       std::span<const DegreeHistogram> per_trial) {
    auto out = open_out(path);
    out << "k,mean,stderr";
    for (std::size_t i = 0; i < per_trial.size(); ++i) out << ",trial" << per_trial[i].trial_id;
    out << "\n";
    for (std::size_t k = 0; k < profile.size(); ++k) {
        out << k << ',' << format_double(profile.mean[k]) << ',' << format_double(profile.se[k]);
        for (const auto& h : per_trial)
            out << ',' << (k < h.counts.size() ? h.counts[k] : 0);
        out << "\n";
    }
}

void write_trajectory_csv(const std::filesystem::path& path, std::span<const TrialResult> trials) {
    auto out = open_out(path);
    out << "t,e_mean,e_min,e_max,v_mean,max_degree_mean,max_degree_max\n";
    if (trials.empty()) return;
    const std::size_t rows = trials.front().trajectory.size();
    for (std::size_t i = 0; i < rows; ++i) {
        const std::int64_t t = trials.front().trajectory[i].t;
        double e_sum = 0, v_sum = 0, d_sum = 0;
        std::uint64_t e_min = ~std::uint64_t{0}, e_max = 0, d_max = 0;
        for (const auto& trial : trials) {
            const auto& s = trial.trajectory.at(i);
            if (s.t != t) throw Error("trajectory cadence mismatch across trials");
            e_sum += static_cast<double>(s.edges);
            v_sum += static_cast<double>(s.vertices);
            d_sum += static_cast<double>(s.max_degree);
            e_min = std::min(e_min, s.edges);
            e_max = std::max(e_max, s.edges);
            d_max = std::max(d_max, s.max_degree);
        }
        const double n = static_cast<double>(trials.size());
        out << t << ',' << format_double(e_sum / n) << ',' << e_min << ',' << e_max << ','
            << format_double(v_sum / n) << ',' << format_double(d_sum / n) << ',' << d_max
            << "\n";
    }
}

void write_theory_csv(const std::filesystem::path& path, const TheoreticalSequence& seq) {
    auto out = open_out(path);
    out << "k,d_k,tail_form,residual\n";
    for (std::int64_t k = -1; k <= seq.kmax; ++k) {
        out << k << ',' << format_double(seq.dk(k)) << ',';
        out << ((k >= 1) ? format_double(seq.tail_form(k)) : "");
        out << ',';
        out << ((k <= seq.kmax - 2) ? format_double(seq.residual(k)) : "");
        out << "\n";
    }
}

void write_ufunction_csv(const std::filesystem::path& path, const KernelSpec& kernel,
                         std::int64_t k_lo, std::int64_t k_hi, double rel_tol) {
    auto out = open_out(path);
    out << "k,u\n";
    for (std::int64_t k = k_lo; k <= k_hi; ++k)
        out << k << ',' << format_double(eval_u(kernel, k, rel_tol)) << "\n";
}

void write_compare_csv(const std::filesystem::path& path, const MeanProfile& profile,
                       const TheoreticalSequence& seq, std::int64_t k_report) {
    auto out = open_out(path);
    out << "k,empirical_mean,stderr,theory,tail_form\n";
    for (std::int64_t k = 0; k <= k_report; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        const double mean = idx < profile.size() ? profile.mean[idx] : 0.0;
        const double se = idx < profile.size() ? profile.se[idx] : 0.0;
        out << k << ',' << format_double(mean) << ',' << format_double(se) << ','
            << format_double(seq.dk(k)) << ','
            << (k >= 1 ? format_double(seq.tail_form(k)) : "") << "\n";
    }
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows) {
    auto out = open_out(path);
    out << "alpha1,regime,fitted_exponent,fitted_log_gamma,tv,pass\n";
    for (const auto& r : rows) {
        out << format_double(r.alpha1) << ',' << to_string(r.declared) << ','
            << format_double(r.fitted_exponent) << ',' << format_double(r.fitted_log_gamma) << ','
            << format_double(r.tv) << ',';
        if (r.pass >= 0) out << r.pass;
        out << "\n";
    }
}

nlohmann::json constants_json(const ModelParams& params, const DerivedConstants& c,
                              RegimeLabel regime) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["regime"] = to_string(regime);
    j["alpha"] = params.alpha;
    j["alpha1"] = params.alpha1;
    j["m"] = params.m;
    j["theorem_applicable"] = params.theorem_applicable;
    j["alpha_c"] = c.alpha_c;
    j["eta"] = c.eta;
    j["epsilon"] = c.epsilon;
    j["rho_eps"] = c.rho_eps;
    if (c.beta) j["beta"] = *c.beta;
    if (std::isfinite(c.gamma)) j["gamma"] = c.gamma;
    j["theta"] = c.theta;
    if (std::isfinite(c.mu)) j["mu"] = c.mu;
    j["A"] = c.A;
    j["B"] = c.B;
    j["zeta"] = c.zeta;
    j["coefficients"] = {{"A0", c.A0}, {"A1", c.A1}, {"A2", c.A2},
                         {"B0", c.B0}, {"B1", c.B1}, {"B2", c.B2}};
    return j;
}

nlohmann::json comparison_json(const ComparisonReport& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["regime_declared"] = to_string(r.declared);
    j["regime_detected"] = to_string(r.detected);
    j["k_report"] = r.k_report;
    j["t"] = r.t;
    j["trials"] = r.trials;
    if (std::isfinite(r.fitted_value)) {
        const char* name =
            r.declared == RegimeLabel::PowerLaw ? "fitted_exponent" : "fitted_log_gamma";
        j[name] = r.fitted_value;
        j["fitted_stderr"] = r.fitted_se;
    }
    j["sup_dist"] = r.sup_dist;
    j["tv"] = r.tv;
    j["pass"] = r.pass;
    j["pointwise_ok"] = r.pointwise_ok;
    j["max_z"] = r.max_z;
    return j;
}

nlohmann::json make_manifest(const nlohmann::json& config_echo, std::uint64_t seed, int trials,
                             double wall_clock_sec,
                             const std::vector<std::filesystem::path>& artifacts) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_echo;
    j["seed"] = seed;
    nlohmann::json streams = nlohmann::json::array();
    for (int i = 0; i < trials; ++i) streams.push_back(i);
    j["trial_streams"] = streams;
    j["wall_clock_sec"] = wall_clock_sec;
    nlohmann::json sums;
    for (const auto& p : artifacts) {
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(file_checksum(p)));
        sums[p.filename().string()] = hex;
    }
    j["artifacts"] = sums;
    return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace degseq
