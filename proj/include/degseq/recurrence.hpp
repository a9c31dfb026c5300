#pragma once

#include <cstdint>
#include <vector>

#include "degseq/params.hpp"
#include "degseq/special.hpp"

namespace degseq {

// w_1..w_{m-1} (empty for m = 1): the particular solution supported below m,
// defined backwards from w_{m-1} = -alpha1/((m-1) A0).
struct ParticularSolution {
    std::vector<double> w;  // w[j] = w_j for j in [1, m-1]; w[0] unused

    double at(std::int64_t k) const {
        return (k >= 1 && k < static_cast<std::int64_t>(w.size())) ? w[static_cast<std::size_t>(k)]
                                                                   : 0.0;
    }
};

ParticularSolution build_particular(const ModelParams& params, const DerivedConstants& constants);

// The limiting degree sequence d_k = D g(k) + w_k (k >= 1) with the boundary
// rows d_{-1} = 0 and d_0 fixed by the k = -1 equation.
struct TheoreticalSequence {
    RegimeLabel regime = RegimeLabel::PowerLaw;
    ModelParams params;
    DerivedConstants constants;
    std::int64_t kmax = 0;

    double D = 0.0;   // mixing constant in front of g
    double d0 = 0.0;  // the constant d
    double C = 0.0;   // leading constant C_1/C_2/C_c (filled by leading_constant)

    std::vector<double> d;     // d[k+1] = d_k for k in [-1, kmax]
    std::vector<double> gval;  // gval[k] = g(k) for k in [1, kmax]
    ParticularSolution w;

    double dk(std::int64_t k) const { return d[static_cast<std::size_t>(k + 1)]; }

    // A2(k+2) d_{k+2} + (A1(k+1)+B1) d_{k+1} + A0 k d_k + alpha1 [k = m-1],
    // which the construction drives to zero for k in [-1, kmax-2].
    double residual(std::int64_t k) const;
    // Magnitude scale for the residual: the largest participating term with
    // d_j measured as |D| g(j) + |w_j| so rows where D g(k) and w_k cancel
    // are not judged against a zero scale.
    double residual_scale(std::int64_t k) const;

    // Asymptotic tail form at k: C k^{-1-beta}, C gamma^k k^{-1+beta}, or
    // C u_c(k). Requires C.
    double tail_form(std::int64_t k) const;
};

// Constructs the sequence on [-1, kmax]. Throws ConjecturedRegime when no
// theory exists and TruncationTooSmall when kmax < m + 2.
TheoreticalSequence build_sequence(const ModelParams& params, const DerivedConstants& constants,
                                   std::int64_t kmax, double quad_tol = 1e-10);

// C_i = D * D_i with D_i the asymptotic constant of the kernel (1 for Uc).
double leading_constant(const TheoreticalSequence& seq);

// Sum of d_k over k >= 0 and of k d_k over k >= 1, with analytic tail
// corrections beyond kmax (power-law regime; geometric tails are negligible).
struct SequenceMass {
    double vertex_mass = 0.0;  // should equal alpha1
    double degree_mass = 0.0;  // should equal 2*eta
};
SequenceMass sequence_mass(const TheoreticalSequence& seq);

// Mean-field iteration of the expected-histogram recurrence from t0 to T;
// returns the normalized profile D_k(T)/T for k in [0, kmax]. init holds
// D_k(t0). Throws NegativeMass if the iteration drives any count below
// -1e-9 * t (the start time was too small).
std::vector<double> evolve_mean_field(const ModelParams& params, const DerivedConstants& constants,
                                      std::int64_t t0, std::int64_t horizon,
                                      const std::vector<double>& init);

// Start-of-iteration profiles used to demonstrate attraction: the sequence
// itself with a +-50% multiplicative perturbation, and the cold profile with
// all mass at degree m.
std::vector<double> warm_start(const TheoreticalSequence& seq, std::int64_t t0, std::int64_t kmax,
                               std::uint64_t seed);
std::vector<double> cold_start(const ModelParams& params, std::int64_t t0, std::int64_t kmax);

}  // namespace degseq
