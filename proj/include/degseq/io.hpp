#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "degseq/analysis.hpp"
#include "degseq/multigraph.hpp"
#include "degseq/recurrence.hpp"

#include <nlohmann/json_fwd.hpp>

namespace degseq {

inline constexpr int kSchemaVersion = 1;

// Locale-independent formatting used for every CSV cell.
std::string format_double(double v);

std::uint64_t fnv1a64(std::span<const std::byte> bytes);
std::uint64_t file_checksum(const std::filesystem::path& path);

void write_profile_csv(const std::filesystem::path& path, const MeanProfile& profile,
                       std::span<const DegreeHistogram> per_trial = {});
void write_trajectory_csv(const std::filesystem::path& path, std::span<const TrialResult> trials);
void write_theory_csv(const std::filesystem::path& path, const TheoreticalSequence& seq);
void write_ufunction_csv(const std::filesystem::path& path, const KernelSpec& kernel,
                         std::int64_t k_lo, std::int64_t k_hi, double rel_tol = 1e-10);
void write_compare_csv(const std::filesystem::path& path, const MeanProfile& profile,
                       const TheoreticalSequence& seq, std::int64_t k_report);

struct SweepRow {
    double alpha1 = 0.0;
    RegimeLabel declared = RegimeLabel::PowerLaw;
    double fitted_exponent = 0.0;  // NaN when not fitted
    double fitted_log_gamma = 0.0;
    double tv = 0.0;   // NaN when no theory exists
    int pass = -1;     // 1/0, -1 when not applicable
};
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows);

nlohmann::json constants_json(const ModelParams& params, const DerivedConstants& c,
                              RegimeLabel regime);
nlohmann::json comparison_json(const ComparisonReport& report);

// Reproducibility record for a run: configuration echo, per-trial stream
// ids, wall clock, and a checksum per artifact.
nlohmann::json make_manifest(const nlohmann::json& config_echo, std::uint64_t seed, int trials,
                             double wall_clock_sec,
                             const std::vector<std::filesystem::path>& artifacts);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace degseq
