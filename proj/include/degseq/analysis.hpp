#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "degseq/multigraph.hpp"
#include "degseq/params.hpp"
#include "degseq/recurrence.hpp"

namespace degseq {

// Mergeable integer moments of per-trial degree counts at a fixed time.
// Sums are exact, so merging is associative and commutative and the final
// profile is independent of trial partitioning.
struct HistogramMoments {
    std::int64_t t = 0;
    std::int64_t trials = 0;
    std::vector<std::uint64_t> sum;    // sum over trials of D_k(t)
    std::vector<std::uint64_t> sumsq;  // sum of D_k(t)^2

    void add(const DegreeHistogram& h);
    void merge(const HistogramMoments& other);
};

// Across-trial mean and standard error of D_k(t)/t.
struct MeanProfile {
    std::int64_t t = 0;
    std::int64_t trials = 0;
    std::vector<double> mean;
    std::vector<double> se;
    std::vector<double> mean_count;  // mean D_k(t), the noise-floor gauge

    std::size_t size() const { return mean.size(); }
};

MeanProfile finalize(const HistogramMoments& moments);
MeanProfile aggregate(std::span<const DegreeHistogram> histograms);

enum class TailModel { PowerLawSlope, ExponentialRate };

// Plain: unweighted two-parameter regression on the binned logs.
// Corrected: adds a 1/k regressor absorbing the kernel prefactor's O(1/k)
// drift and weights points by mean count (inverse variance of the log);
// needed when the fit window cannot reach the asymptotic regime.
enum class FitStyle { Plain, Corrected };

struct TailFit {
    TailModel model;
    double value = 0.0;   // slope of log d vs log k, or log(gamma) vs k
    double se = 0.0;      // standard error of that coefficient
    double intercept = 0.0;
    double sse = 0.0;     // residual sum of squares in the fitted space
    int points = 0;
};

// Least squares on binned logs over [k_lo, k_hi], excluding k < m + 2 and
// degrees with mean count below min_count. PowerLawSlope regresses
// log d_k on log k; ExponentialRate regresses log d_k - (beta-1) log k on k
// and needs beta. Throws WindowTooSparse below 8 usable points.
TailFit fit_tail(const MeanProfile& profile, TailModel model, std::int64_t k_lo, std::int64_t k_hi,
                 int m, double beta = 0.0, double min_count = 10.0,
                 FitStyle style = FitStyle::Plain);

// Which two-parameter tail shape explains the window better (by SSE).
RegimeLabel detect_regime(const MeanProfile& profile, std::int64_t k_lo, std::int64_t k_hi, int m);

struct ConcentrationReport {
    int trials = 0;
    double eta = 0.0;
    double e_band = 0.0;          // band half-width, 0.05*eta by default
    double max_degree_bound = 0;  // T^{rho_eps} (log T)^3
    double frac_e_within = 0.0;   // fraction of trials with |e_T/T - eta| <= band
    double frac_delta_within = 0.0;
};

// Final-time concentration of e_t and the maximum-degree bound, evaluated on
// the last trajectory sample of each trial.
ConcentrationReport check_concentration(std::span<const TrialResult> trials,
                                        const DerivedConstants& constants,
                                        double band_fraction = 0.05);

struct ComparisonReport {
    RegimeLabel declared = RegimeLabel::PowerLaw;
    RegimeLabel detected = RegimeLabel::PowerLaw;
    std::int64_t k_report = 0;
    std::int64_t t = 0;
    int trials = 0;

    double fitted_value = 0.0;  // exponent (PowerLaw) or log gamma (Exponential); NaN Critical
    double fitted_se = 0.0;
    double sup_dist = 0.0;  // sup_{k<=K} |mean_k - d_k|
    double tv = 0.0;        // total variation between renormalized profiles
    bool pass = false;      // tv <= 0.05

    // Critical-regime rule: |mean_k - d_k| <= 3 se_k for k in [m, K].
    bool pointwise_ok = false;
    double max_z = 0.0;
};

ComparisonReport compare(const MeanProfile& profile, const TheoreticalSequence& theory,
                         std::int64_t k_report);

}  // namespace degseq
