#include "degseq/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degseq/errors.hpp"
#include "degseq/rng.hpp"

namespace degseq {

ParticularSolution build_particular(const ModelParams& params, const DerivedConstants& c) {
    ParticularSolution p;
    const int m = params.m;
    if (m == 1) return p;

    p.w.assign(static_cast<std::size_t>(m), 0.0);
    p.w[static_cast<std::size_t>(m - 1)] =
        -params.alpha1 / (static_cast<double>(m - 1) * c.A0);
    for (std::int64_t j = m - 2; j >= 1; --j) {
        const double wj2 = p.at(j + 2);
        const double wj1 = p.at(j + 1);
        p.w[static_cast<std::size_t>(j)] =
            -(c.A2 * static_cast<double>(j + 2) * wj2 +
              (c.A1 * static_cast<double>(j + 1) + c.B1) * wj1) /
            (c.A0 * static_cast<double>(j));
    }
    return p;
}

double TheoreticalSequence::residual(std::int64_t k) const {
    const auto& c = constants;
    double r = c.A2 * static_cast<double>(k + 2) * dk(k + 2) +
               (c.A1 * static_cast<double>(k + 1) + c.B1) * dk(k + 1) +
               c.A0 * static_cast<double>(k) * dk(k);
    if (k == params.m - 1) r += params.alpha1;
    return r;
}

double TheoreticalSequence::residual_scale(std::int64_t k) const {
    const auto& c = constants;
    auto mag = [&](std::int64_t j) -> double {
        if (j < 1) return std::abs(dk(j));
        if (j > kmax) return 0.0;
        return std::abs(D) * gval[static_cast<std::size_t>(j)] + std::abs(w.at(j));
    };
    double s = std::abs(c.A2 * static_cast<double>(k + 2)) * mag(k + 2);
    s = std::max(s, std::abs(c.A1 * static_cast<double>(k + 1) + c.B1) * mag(k + 1));
    s = std::max(s, std::abs(c.A0 * static_cast<double>(k)) * mag(k));
    if (k == params.m - 1) s = std::max(s, params.alpha1);
    return std::max(s, 1e-300);
}

double TheoreticalSequence::tail_form(std::int64_t k) const {
    const double kd = static_cast<double>(k);
    switch (regime) {
        case RegimeLabel::PowerLaw: return C * std::pow(kd, -1.0 - *constants.beta);
        case RegimeLabel::Exponential:
            return C * std::exp(kd * std::log(constants.gamma)) *
                   std::pow(kd, -1.0 + *constants.beta);
        case RegimeLabel::Critical:
            return C * eval_u(KernelSpec::uc(constants.mu), k);
        case RegimeLabel::Conjectured: break;
    }
    throw ConjecturedRegime("no tail form in the conjectured region");
}

TheoreticalSequence build_sequence(const ModelParams& params, const DerivedConstants& c,
                                   std::int64_t kmax, double quad_tol) {
    const RegimeLabel regime = classify(params);
    if (regime == RegimeLabel::Conjectured)
        throw ConjecturedRegime("alpha1 >= 2*alpha_c: no theoretical degree sequence");
    if (kmax < params.m + 2)
        throw TruncationTooSmall("kmax = " + std::to_string(kmax) + " < m + 2");

    TheoreticalSequence seq;
    seq.regime = regime;
    seq.params = params;
    seq.constants = c;
    seq.kmax = kmax;
    seq.w = build_particular(params, c);

    const KernelSpec kernel = KernelSpec::for_regime(regime, c);
    seq.gval.assign(static_cast<std::size_t>(kmax + 1), 0.0);
    for (std::int64_t k = 1; k <= kmax; ++k)
        seq.gval[static_cast<std::size_t>(k)] = eval_u(kernel, k, quad_tol);

    const double g1 = seq.gval[1];
    const double g2 = seq.gval[2];
    const double denom = 2.0 * c.A2 * g2 + (c.A1 + c.B1) * g1;  // = -phi1(0) v(0), nonzero
    if (params.m == 1) {
        seq.D = -params.alpha1 / denom;
    } else {
        seq.D = -(2.0 * c.A2 * seq.w.at(2) + (c.A1 + c.B1) * seq.w.at(1)) / denom;
    }
    seq.d0 = -c.A2 * (seq.D * g1 + seq.w.at(1)) / c.B1;

    seq.d.assign(static_cast<std::size_t>(kmax + 2), 0.0);
    seq.d[0] = 0.0;      // d_{-1}
    seq.d[1] = seq.d0;   // d_0
    for (std::int64_t k = 1; k <= kmax; ++k)
        seq.d[static_cast<std::size_t>(k + 1)] =
            seq.D * seq.gval[static_cast<std::size_t>(k)] + seq.w.at(k);

    seq.C = std::numeric_limits<double>::quiet_NaN();
    return seq;
}

double leading_constant(const TheoreticalSequence& seq) {
    if (seq.regime == RegimeLabel::Critical) return seq.D;
    const KernelSpec kernel = KernelSpec::for_regime(seq.regime, seq.constants);
    const std::vector<std::int64_t> grid{64, 128, 256, 512, 1024};
    const AsymptoticEstimate est = estimate_asymptotic_constant(kernel, grid);
    return seq.D * est.constant;
}

SequenceMass sequence_mass(const TheoreticalSequence& seq) {
    SequenceMass mass;
    // Summing smallest-first keeps the truncated sums accurate.
    for (std::int64_t k = seq.kmax; k >= 0; --k) {
        mass.vertex_mass += seq.dk(k);
        mass.degree_mass += static_cast<double>(k) * seq.dk(k);
    }
    if (seq.regime == RegimeLabel::PowerLaw) {
        // d_k ~ C k^{-1-beta} beyond kmax; Euler-Maclaurin on the power tail.
        const double beta = *seq.constants.beta;
        const double C = std::isnan(seq.C) ? leading_constant(seq) : seq.C;
        const double K = static_cast<double>(seq.kmax);
        mass.vertex_mass += C * (std::pow(K, -beta) / beta - 0.5 * std::pow(K, -1.0 - beta));
        mass.degree_mass +=
            C * (std::pow(K, 1.0 - beta) / (beta - 1.0) - 0.5 * std::pow(K, -beta));
    }
    return mass;
}

std::vector<double> evolve_mean_field(const ModelParams& params, const DerivedConstants& c,
                                      std::int64_t t0, std::int64_t horizon,
                                      const std::vector<double>& init) {
    if (init.empty()) throw OutOfRange("evolve_mean_field: empty initial profile");
    const std::int64_t kmax = static_cast<std::int64_t>(init.size()) - 1;
    // Nonnegativity of the diagonal coefficient t + A1 k + B1 + 1 for k <= kmax:
    // below this start time the iteration drives counts negative.
    const double t_min = std::abs(c.A1) * static_cast<double>(kmax);
    if (static_cast<double>(t0) < t_min)
        throw NegativeMass("evolve_mean_field: t0 = " + std::to_string(t0) +
                           " below stability bound " + std::to_string(t_min));
    if (horizon < t0) throw OutOfRange("evolve_mean_field: horizon < t0");

    std::vector<double> cur = init;
    std::vector<double> next(cur.size(), 0.0);
    const double a1 = params.alpha1;
    const std::int64_t m = params.m;

    for (std::int64_t t = t0; t < horizon; ++t) {
        const double inv_t = 1.0 / static_cast<double>(t);
        double low = 0.0;
        for (std::int64_t k = 0; k <= kmax; ++k) {
            const double up = (k + 1 <= kmax) ? cur[static_cast<std::size_t>(k + 1)] : 0.0;
            const double here = cur[static_cast<std::size_t>(k)];
            const double down = (k >= 1) ? cur[static_cast<std::size_t>(k - 1)] : 0.0;
            double v = here +
                       ((c.A2 * static_cast<double>(k + 1) + c.B2) * up +
                        (c.A1 * static_cast<double>(k) + c.B1 + 1.0) * here +
                        (c.A0 * static_cast<double>(k - 1) + c.B0) * down) *
                           inv_t;
            if (k == m) v += a1;
            next[static_cast<std::size_t>(k)] = v;
            low = std::min(low, v);
        }
        if (low < -1e-9 * static_cast<double>(t))
            throw NegativeMass("mean-field count " + std::to_string(low) + " at t = " +
                               std::to_string(t) + "; increase t0");
        cur.swap(next);
    }

    const double inv_T = 1.0 / static_cast<double>(horizon);
    for (auto& v : cur) v *= inv_T;
    return cur;
}

std::vector<double> warm_start(const TheoreticalSequence& seq, std::int64_t t0, std::int64_t kmax,
                               std::uint64_t seed) {
    if (kmax > seq.kmax) throw OutOfRange("warm_start: kmax exceeds the sequence truncation");
    RngStream rng(seed, 0);
    std::vector<double> init(static_cast<std::size_t>(kmax + 1), 0.0);
    for (std::int64_t k = 0; k <= kmax; ++k) {
        const double noise = 1.0 + 0.5 * (2.0 * rng.uniform01() - 1.0);
        init[static_cast<std::size_t>(k)] =
            std::max(0.0, static_cast<double>(t0) * seq.dk(k) * noise);
    }
    return init;
}

std::vector<double> cold_start(const ModelParams& params, std::int64_t t0, std::int64_t kmax) {
    std::vector<double> init(static_cast<std::size_t>(kmax + 1), 0.0);
    init[static_cast<std::size_t>(params.m)] = params.alpha1 * static_cast<double>(t0);
    return init;
}

}  // namespace degseq
