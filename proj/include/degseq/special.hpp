#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "degseq/params.hpp"

namespace degseq {

// The three homogeneous solutions, as integrals int_0^b t^{k-1} v(t) dt:
//   U1: v = ((1-t)/(1-zeta*t))^beta,          beta > 1,  zeta in [0,1), b = 1
//   U2: gamma^{k-beta} * int_0^1 with v = ((1-t)/(1-gamma*t))^{-beta},
//       beta < -1, gamma in (0,1)   (rescaled form of the [0,gamma] integral)
//   Uc: v = exp(-mu/(1-t)),                    mu > 0,   b = 1
struct KernelSpec {
    enum class Kind { U1, U2, Uc };
    Kind kind = Kind::Uc;
    double beta = 0.0;
    double zeta = 0.0;   // U1 only
    double gamma = 0.0;  // U2 only
    double mu = 0.0;     // Uc only

    static KernelSpec u1(double beta, double zeta);
    static KernelSpec u2(double beta, double gamma);
    static KernelSpec uc(double mu);

    // The regime kernel for the given constants (throws ConjecturedRegime).
    static KernelSpec for_regime(RegimeLabel regime, const DerivedConstants& c);

    // phi1(0) * v(0), the nonzero boundary value at k = 0: B for U1,
    // B*gamma^{-beta} for U2, B*e^{-mu} for Uc. Needs B = phi1(0) from the
    // caller's constants.
    double boundary_value(double B) const;
};

// u(k) to the requested relative tolerance via the t = 1 - e^{-s}
// substitution and adaptive Gauss-Kronrod over a doubling s-range.
double eval_u(const KernelSpec& kernel, std::int64_t k, double rel_tol = 1e-10);

// U2 without the gamma^{k-beta} prefactor (safe at large k where the full
// value would underflow).
double eval_u2_unscaled(const KernelSpec& kernel, std::int64_t k, double rel_tol = 1e-10);

// Memoized evaluator; safe for concurrent use.
class UFunction {
  public:
    explicit UFunction(KernelSpec spec, double rel_tol = 1e-10) : spec_(spec), tol_(rel_tol) {}

    double operator()(std::int64_t k) const;
    const KernelSpec& spec() const { return spec_; }

  private:
    KernelSpec spec_;
    double tol_;
    mutable std::map<std::int64_t, double> memo_;
    mutable std::mutex mutex_;
};

// Finite closed form of u_c(k): alternating double sum times e^{-mu} plus a
// polynomial in mu times int_1^inf t^{-2} e^{-mu t} dt. Validation artifact
// only; loses roughly a digit per unit k, so it is capped at k_ceiling and
// throws UnstableEvaluation when the cancellation estimate exceeds the
// budget.
double uc_closed_form(double mu, std::int64_t k, std::int64_t k_ceiling = 15);

// int_1^inf t^{-2} e^{-mu t} dt by truncated adaptive quadrature.
double exponential_integral_e2(double mu, double rel_tol = 1e-12);

struct AsymptoticEstimate {
    double constant = 0.0;          // D1 (U1) or D2 (U2)
    double convergence_rate = 0.0;  // observed order of the 1/k correction
};

// Limit of u1(k)*k^{1+beta} (or u2(k)*gamma^{-k}*k^{1-beta}) by Richardson
// extrapolation over a doubling k grid; throws NoConvergence when the last
// two extrapolants disagree by more than 1%.
AsymptoticEstimate estimate_asymptotic_constant(const KernelSpec& kernel,
                                                const std::vector<std::int64_t>& k_grid,
                                                double rel_tol = 1e-10);

}  // namespace degseq
