#include "degseq/special.hpp"

#include <cfloat>
#include <cmath>
#include <string>

#include "degseq/errors.hpp"
#include "degseq/quadrature.hpp"

namespace degseq {

KernelSpec KernelSpec::u1(double beta, double zeta) {
    if (!(beta > 1.0)) throw OutOfRange("U1 requires beta > 1, got " + std::to_string(beta));
    if (!(zeta >= 0.0 && zeta < 1.0))
        throw OutOfRange("U1 requires zeta in [0,1), got " + std::to_string(zeta));
    KernelSpec s;
    s.kind = Kind::U1;
    s.beta = beta;
    s.zeta = zeta;
    return s;
}

KernelSpec KernelSpec::u2(double beta, double gamma) {
    if (!(beta < -1.0)) throw OutOfRange("U2 requires beta < -1, got " + std::to_string(beta));
    if (!(gamma > 0.0 && gamma < 1.0))
        throw OutOfRange("U2 requires gamma in (0,1), got " + std::to_string(gamma));
    KernelSpec s;
    s.kind = Kind::U2;
    s.beta = beta;
    s.gamma = gamma;
    return s;
}

KernelSpec KernelSpec::uc(double mu) {
    if (!(mu > 0.0)) throw OutOfRange("Uc requires mu > 0, got " + std::to_string(mu));
    KernelSpec s;
    s.kind = Kind::Uc;
    s.mu = mu;
    return s;
}

KernelSpec KernelSpec::for_regime(RegimeLabel regime, const DerivedConstants& c) {
    switch (regime) {
        case RegimeLabel::PowerLaw: return u1(*c.beta, c.zeta);
        case RegimeLabel::Exponential: return u2(*c.beta, c.gamma);
        case RegimeLabel::Critical: return uc(c.mu);
        case RegimeLabel::Conjectured:
            throw ConjecturedRegime("no homogeneous solution in the conjectured region");
    }
    throw Error("unreachable");
}

double KernelSpec::boundary_value(double B) const {
    switch (kind) {
        case Kind::U1: return B;
        case Kind::U2: return B * std::pow(gamma, -beta);
        case Kind::Uc: return B * std::exp(-mu);
    }
    return 0.0;
}

namespace {

// Integrands after t = 1 - e^{-s}: positive, smooth, exp-decaying in s.
// ln f(s) = (k-1) ln(1-e^{-s}) + <kernel part>.
struct SIntegrand {
    const KernelSpec& spec;
    std::int64_t k;

    double operator()(double s) const {
        const double em = std::expm1(-s);  // e^{-s} - 1, in (-1, 0]
        // ln t = ln(1 - e^{-s}) = ln(-em)
        double lf = (k > 1) ? static_cast<double>(k - 1) * std::log(-em) : 0.0;
        switch (spec.kind) {
            case KernelSpec::Kind::U1:
                lf += -(spec.beta + 1.0) * s - spec.beta * std::log1p(spec.zeta * em);
                break;
            case KernelSpec::Kind::U2:
                lf += -(1.0 - spec.beta) * s + spec.beta * std::log1p(spec.gamma * em);
                break;
            case KernelSpec::Kind::Uc:
                lf += -spec.mu * std::exp(s) - s;
                break;
        }
        return std::exp(lf);
    }

    // Upper bound on the remaining integral over [S, inf).
    double tail_bound(double S) const {
        switch (spec.kind) {
            case KernelSpec::Kind::U1:
                return std::pow(1.0 - spec.zeta, -spec.beta) *
                       std::exp(-(spec.beta + 1.0) * S) / (spec.beta + 1.0);
            case KernelSpec::Kind::U2:
                return std::pow(1.0 - spec.gamma, spec.beta) *
                       std::exp(-(1.0 - spec.beta) * S) / (1.0 - spec.beta);
            case KernelSpec::Kind::Uc: {
                const double es = std::exp(S);
                return (spec.mu * es > 700.0) ? 0.0 : std::exp(-spec.mu * es) / es;
            }
        }
        return 0.0;
    }
};

// Doubling segments [0,1],[1,2],[2,4],... until the analytic tail bound is
// negligible against the accumulated (positive) mass.
double integrate_s_domain(const SIntegrand& f, double rel_tol) {
    double value = 0.0;
    double err = 0.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 40; ++iter) {
        const double floor_tol = rel_tol * value / 8.0;
        const auto r = integrate(f, lo, hi, rel_tol / 2.0, floor_tol);
        value += r.value;
        err += r.error;
        if (value > 0.0 && f.tail_bound(hi) <= rel_tol * value / 8.0) {
            if (err + f.tail_bound(hi) > rel_tol * value)
                throw QuadratureFailure("u-kernel quadrature: certificate exceeds tolerance");
            return value;
        }
        lo = hi;
        hi = 2.0 * hi;
    }
    throw QuadratureFailure("u-kernel quadrature: integrand mass not located");
}

}  // namespace

double eval_u2_unscaled(const KernelSpec& kernel, std::int64_t k, double rel_tol) {
    if (kernel.kind != KernelSpec::Kind::U2) throw Error("eval_u2_unscaled: kernel is not U2");
    if (k < 1) throw OutOfRange("u(k) requires k >= 1");
    return integrate_s_domain(SIntegrand{kernel, k}, rel_tol);
}

double eval_u(const KernelSpec& kernel, std::int64_t k, double rel_tol) {
    if (k < 1) throw OutOfRange("u(k) requires k >= 1");
    const double base = integrate_s_domain(SIntegrand{kernel, k}, rel_tol);
    if (kernel.kind == KernelSpec::Kind::U2)
        return std::exp((static_cast<double>(k) - kernel.beta) * std::log(kernel.gamma)) * base;
    return base;
}

double UFunction::operator()(std::int64_t k) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
    }
    const double v = eval_u(spec_, k, tol_);
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(k, v);
    return v;
}

double exponential_integral_e2(double mu, double rel_tol) {
    if (!(mu > 0.0)) throw OutOfRange("exponential_integral_e2 requires mu > 0");
    auto f = [mu](double t) { return std::exp(-mu * t) / (t * t); };
    double value = 0.0;
    double lo = 1.0, hi = 2.0;
    for (int iter = 0; iter < 40; ++iter) {
        value += integrate(f, lo, hi, rel_tol / 2.0, rel_tol * value / 8.0).value;
        const double tail = (mu * hi > 700.0) ? 0.0 : std::exp(-mu * hi) / hi;
        if (tail <= rel_tol * value / 8.0) return value;
        lo = hi;
        hi = 2.0 * hi;
    }
    throw QuadratureFailure("exponential_integral_e2: tail did not close");
}

namespace {

// Neumaier compensated accumulator in extended precision, tracking the sum
// of magnitudes for the cancellation estimate.
struct Compensated {
    long double sum = 0.0L;
    long double comp = 0.0L;
    long double abs_sum = 0.0L;

    void add(long double x) {
        const long double t = sum + x;
        if (fabsl(sum) >= fabsl(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
        abs_sum += fabsl(x);
    }
    long double total() const { return sum + comp; }
};

}  // namespace

double uc_closed_form(double mu, std::int64_t k, std::int64_t k_ceiling) {
    if (!(mu > 0.0)) throw OutOfRange("uc_closed_form requires mu > 0");
    if (k < 1 || k > k_ceiling)
        throw OutOfRange("uc_closed_form: k = " + std::to_string(k) + " outside [1, " +
                         std::to_string(k_ceiling) + "]");

    const long double mul = static_cast<long double>(mu);
    const long double e2 = static_cast<long double>(exponential_integral_e2(mu, 1e-12));
    const long double emu = expl(-mul);

    // binom(k-1, i), exact in extended precision for the k range involved
    std::vector<long double> binom(static_cast<std::size_t>(k), 1.0L);
    for (std::size_t i = 1; i < binom.size(); ++i)
        binom[i] = binom[i - 1] * static_cast<long double>(k - static_cast<std::int64_t>(i)) /
                   static_cast<long double>(i);

    // sum_{i=0}^{k-2} sum_{l=0}^{k-2-i} C(k-1,i) (k-i-l-1)!/(k-i)! (-1)^{k-i-l-1} mu^l
    Compensated alt;
    for (std::int64_t i = 0; i + 2 <= k; ++i) {
        long double ratio = 1.0L / static_cast<long double>(k - i);  // l = 0
        long double mu_pow = 1.0L;
        for (std::int64_t l = 0; l <= k - 2 - i; ++l) {
            const int sgn = ((k - i - l - 1) % 2 == 0) ? 1 : -1;
            alt.add(static_cast<long double>(sgn) * binom[static_cast<std::size_t>(i)] * ratio *
                    mu_pow);
            ratio /= static_cast<long double>(k - i - l - 1);
            mu_pow *= mul;
        }
    }

    // sum_{i=0}^{k-1} C(k-1,i) mu^{k-i-1} / (k-i)!   (all positive)
    Compensated pos;
    for (std::int64_t i = 0; i < k; ++i) {
        long double term = binom[static_cast<std::size_t>(i)];
        // pairing one mu with each factorial factor: mu^{k-i-1}/(k-i)!
        for (std::int64_t j = 2; j <= k - i; ++j) term *= mul / static_cast<long double>(j);
        pos.add(term);
    }

    const long double result = alt.total() * emu + pos.total() * e2;
    const long double est_err = 8.0L * LDBL_EPSILON * (alt.abs_sum * emu + pos.abs_sum * e2);
    if (est_err > 1e-8L * fabsl(result))
        throw UnstableEvaluation("uc_closed_form: cancellation estimate " +
                                 std::to_string(static_cast<double>(est_err)) +
                                 " exceeds stability budget at k = " + std::to_string(k));
    return static_cast<double>(result);
}

AsymptoticEstimate estimate_asymptotic_constant(const KernelSpec& kernel,
                                                const std::vector<std::int64_t>& k_grid,
                                                double rel_tol) {
    if (kernel.kind == KernelSpec::Kind::Uc)
        throw OutOfRange("estimate_asymptotic_constant applies to U1 and U2 only");
    if (k_grid.size() < 3) throw OutOfRange("k_grid needs at least 3 points");
    for (std::size_t i = 1; i < k_grid.size(); ++i)
        if (k_grid[i] != 2 * k_grid[i - 1])
            throw OutOfRange("k_grid must double at each step for Richardson extrapolation");
    if (k_grid.back() < 512) throw OutOfRange("k_grid must reach at least 512");

    std::vector<double> scaled;
    scaled.reserve(k_grid.size());
    for (const auto k : k_grid) {
        const double kd = static_cast<double>(k);
        if (kernel.kind == KernelSpec::Kind::U1) {
            scaled.push_back(eval_u(kernel, k, rel_tol) * std::pow(kd, 1.0 + kernel.beta));
        } else {
            // u2(k) gamma^{-k} k^{1-beta} without forming the tiny prefactor
            scaled.push_back(std::pow(kernel.gamma, -kernel.beta) *
                             eval_u2_unscaled(kernel, k, rel_tol) *
                             std::pow(kd, 1.0 - kernel.beta));
        }
    }

    // scaled = c + a/k + O(1/k^2); one Richardson level removes the 1/k term.
    std::vector<double> rich;
    for (std::size_t i = 0; i + 1 < scaled.size(); ++i)
        rich.push_back(2.0 * scaled[i + 1] - scaled[i]);

    AsymptoticEstimate est;
    est.constant = rich.back();
    const std::size_t n = scaled.size();
    const double d1 = scaled[n - 3] - scaled[n - 2];
    const double d2 = scaled[n - 2] - scaled[n - 1];
    est.convergence_rate = (d2 != 0.0) ? std::log2(std::abs(d1 / d2)) : 0.0;

    if (rich.size() >= 2 &&
        std::abs(rich.back() - rich[rich.size() - 2]) > 0.01 * std::abs(rich.back()))
        throw NoConvergence("asymptotic constant: last extrapolants differ by more than 1%");
    return est;
}

}  // namespace degseq
