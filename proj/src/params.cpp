#include "degseq/params.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

namespace degseq {

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    Rational r;
    std::size_t pos = 0;
    if (slash == std::string::npos) {
        r.num = std::stoll(text, &pos);
        r.den = 1;
        if (pos != text.size()) throw OutOfRange("not a rational: '" + text + "'");
    } else {
        r.num = std::stoll(text.substr(0, slash), &pos);
        if (pos != slash) throw OutOfRange("not a rational: '" + text + "'");
        r.den = std::stoll(text.substr(slash + 1), &pos);
        if (pos != text.size() - slash - 1) throw OutOfRange("not a rational: '" + text + "'");
    }
    if (r.den == 0) throw OutOfRange("rational with zero denominator: '" + text + "'");
    return r.normalized();
}

Rational Rational::normalized() const {
    Rational r = *this;
    if (r.den < 0) {
        r.num = -r.num;
        r.den = -r.den;
    }
    const std::int64_t g = std::gcd(std::abs(r.num), r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

int compare(const Rational& a, const Rational& b) {
    // Denominators are positive after normalization; magnitudes here are tiny
    // (parameter fractions), so the cross products stay well inside int64.
    const std::int64_t lhs = a.num * b.den;
    const std::int64_t rhs = b.num * a.den;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

const char* to_string(RegimeLabel r) {
    switch (r) {
        case RegimeLabel::PowerLaw: return "PowerLaw";
        case RegimeLabel::Exponential: return "Exponential";
        case RegimeLabel::Critical: return "Critical";
        case RegimeLabel::Conjectured: return "Conjectured";
    }
    return "?";
}

RegimeLabel regime_from_string(const std::string& s) {
    if (s == "PowerLaw") return RegimeLabel::PowerLaw;
    if (s == "Exponential") return RegimeLabel::Exponential;
    if (s == "Critical") return RegimeLabel::Critical;
    if (s == "Conjectured") return RegimeLabel::Conjectured;
    throw OutOfRange("unknown regime label '" + s + "'");
}

namespace {

// sign(alpha1 - scale*alpha_c), exact when both inputs were given as
// fractions. scale is 1 for the critical line, 2 for the conjectured border.
int alpha_c_side(const ModelParams& p, std::int64_t scale) {
    if (p.alpha_exact && p.alpha1_exact) {
        const Rational ac{scale * (4 * p.alpha_exact->num - 2 * p.alpha_exact->den),
                          p.alpha_exact->den};
        return compare(*p.alpha1_exact, ac.normalized());
    }
    const double alpha_c = 4.0 * p.alpha - 2.0;
    const double diff = p.alpha1 - static_cast<double>(scale) * alpha_c;
    if (std::abs(diff) <= kCriticalTolerance) return 0;
    return diff < 0 ? -1 : 1;
}

int critical_side(const ModelParams& p) { return alpha_c_side(p, 1); }

ModelParams finish_validate(ModelParams p) {
    if (!(p.alpha > 0.5) || !(p.alpha <= 1.0))
        throw OutOfRange("alpha out of range: require 1/2 < alpha <= 1, got alpha=" +
                         std::to_string(p.alpha));
    if (!(p.alpha1 > 0.0) || !(p.alpha1 <= p.alpha))
        throw OutOfRange("alpha1 out of range: require 0 < alpha1 <= alpha, got alpha1=" +
                         std::to_string(p.alpha1));
    if (p.m < 1) throw OutOfRange("m out of range: require m >= 1, got m=" + std::to_string(p.m));
    p.theorem_applicable = alpha_c_side(p, 2) < 0;
    return p;
}

}  // namespace

ModelParams validate(double alpha, double alpha1, int m) {
    ModelParams p;
    p.alpha = alpha;
    p.alpha1 = alpha1;
    p.m = m;
    return finish_validate(p);
}

ModelParams validate(const Rational& alpha, const Rational& alpha1, int m) {
    ModelParams p;
    p.alpha_exact = alpha.normalized();
    p.alpha1_exact = alpha1.normalized();
    p.alpha = p.alpha_exact->value();
    p.alpha1 = p.alpha1_exact->value();
    p.m = m;
    return finish_validate(p);
}

DerivedConstants derive(const ModelParams& params, double epsilon_fraction) {
    if (!(epsilon_fraction > 0.0) || !(epsilon_fraction < 1.0))
        throw OutOfRange("epsilon_fraction out of range: require 0 < f < 1, got f=" +
                         std::to_string(epsilon_fraction));

    const double a = params.alpha;
    const double a1 = params.alpha1;
    const double m = static_cast<double>(params.m);

    DerivedConstants c;
    c.alpha_c = 4.0 * a - 2.0;
    c.eta = c.alpha_c * m / 2.0;
    c.epsilon = epsilon_fraction * c.eta;

    if (critical_side(params) != 0) c.beta = c.alpha_c / (c.alpha_c - a1);
    c.gamma = 1.0 - (a1 - c.alpha_c) / (2.0 * (1.0 - a));
    c.theta = (2.0 * c.alpha_c - a1) / (2.0 * c.alpha_c);
    c.mu = c.alpha_c / (2.0 * (1.0 - a));

    const double half = 2.0 * (2.0 * a - 1.0);  // = alpha_c, written as in the coefficients
    c.A2 = (1.0 - a) / (2.0 * a - 1.0);
    c.A1 = -(2.0 - a1) / half;
    c.A0 = (2.0 * a - a1) / half;
    c.B2 = 0.0;
    c.B1 = -1.0;
    c.B0 = 0.0;

    c.A = c.A2;
    c.B = (2.0 * a - a1) / c.alpha_c;
    c.zeta = c.A / c.B;

    const double first = m * (c.alpha_c - a1) / (2.0 * (c.eta - c.epsilon));
    c.rho_eps = std::max(first, 0.5);
    if (c.rho_eps >= 1.0)
        throw DegenerateEpsilon("rho_eps = " + std::to_string(c.rho_eps) +
                                " >= 1 for epsilon_fraction = " + std::to_string(epsilon_fraction) +
                                "; decrease epsilon_fraction");
    return c;
}

RegimeLabel classify(const ModelParams& params) {
    if (alpha_c_side(params, 2) >= 0) return RegimeLabel::Conjectured;
    const int side = critical_side(params);
    if (side < 0) return RegimeLabel::PowerLaw;
    if (side > 0) return RegimeLabel::Exponential;
    return RegimeLabel::Critical;
}

}  // namespace degseq
