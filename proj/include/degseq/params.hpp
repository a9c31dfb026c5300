#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "degseq/errors.hpp"

namespace degseq {

// Exact fraction, used so the measure-zero critical line alpha1 = alpha_c can
// be requested exactly (inputs like "2/5" keep their meaning under 4a-2).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational parse(const std::string& text);  // "3/5" or a plain integer
    Rational normalized() const;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// sign(a - b) computed exactly in integer arithmetic.
int compare(const Rational& a, const Rational& b);

enum class RegimeLabel { PowerLaw, Exponential, Critical, Conjectured };

const char* to_string(RegimeLabel r);
RegimeLabel regime_from_string(const std::string& s);

struct ModelParams {
    double alpha = 0.0;
    double alpha1 = 0.0;
    int m = 1;
    // alpha1 < 2*alpha_c. False means the conjectured region: simulation is
    // still allowed there but no theoretical curve exists.
    bool theorem_applicable = false;
    // Present when the caller supplied exact fractions.
    std::optional<Rational> alpha_exact;
    std::optional<Rational> alpha1_exact;
};

struct DerivedConstants {
    double alpha_c = 0.0;  // 4*alpha - 2
    double eta = 0.0;      // alpha_c*m/2, limiting edge density
    double epsilon = 0.0;  // epsilon_fraction * eta
    // max{m(alpha_c-alpha1)/(2(eta-epsilon)), 1/2}. Above the critical line
    // the 1/2 floor is not tight (a sharper analysis pushes the exponent
    // toward 0) but this is the definition every bound here uses.
    double rho_eps = 0.0;

    // beta = alpha_c/(alpha_c - alpha1); undefined on the critical line.
    std::optional<double> beta;
    double gamma = 0.0;  // 1 - (alpha1-alpha_c)/(2(1-alpha)); in (0,1) iff alpha1 > alpha_c
    double theta = 0.0;  // (2*alpha_c - alpha1)/(2*alpha_c)
    double mu = 0.0;     // alpha_c/(2(1-alpha))

    // Degree-recurrence coefficients. A2 = (1-a)/(2a-1),
    // A1 = -(2-a1)/(2(2a-1)), A0 = (2a-a1)/(2(2a-1)), B2 = B0 = 0, B1 = -1.
    double A0 = 0.0, A1 = 0.0, A2 = 0.0;
    double B0 = 0.0, B1 = 0.0, B2 = 0.0;

    // Quadratic-kernel form: phi1(t) = A t^2 - (A+B) t + B.
    double A = 0.0;     // equals A2
    double B = 0.0;     // (2a - a1)/alpha_c, equals A0
    double zeta = 0.0;  // A/B, in [0,1) below the critical line
};

// Checks 1/2 < alpha <= 1 and 0 < alpha1 <= alpha and m >= 1; throws
// OutOfRange naming the violated inequality. Never rejects the conjectured
// region, only flags it.
ModelParams validate(double alpha, double alpha1, int m);

// Same, keeping the exact fractions for the critical-line comparison.
ModelParams validate(const Rational& alpha, const Rational& alpha1, int m);

// epsilon = epsilon_fraction * eta. Throws DegenerateEpsilon when the
// resulting rho_eps would reach 1.
DerivedConstants derive(const ModelParams& params, double epsilon_fraction = 0.1);

RegimeLabel classify(const ModelParams& params);

// |alpha1 - alpha_c| tolerance used when no exact fractions are available.
inline constexpr double kCriticalTolerance = 1e-12;

}  // namespace degseq
