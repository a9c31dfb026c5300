#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "degseq/errors.hpp"
#include "degseq/params.hpp"
#include "degseq/quadrature.hpp"
#include "degseq/special.hpp"

using namespace degseq;

namespace {

// Brute-force oracle: composite Simpson in the original t variable,
// independent of the exp-substituted adaptive path under test.
double simpson_u(const KernelSpec& spec, std::int64_t k, std::int64_t panels) {
    auto f = [&](double t) -> double {
        if (t >= 1.0) return 0.0;
        double v = 0.0;
        switch (spec.kind) {
            case KernelSpec::Kind::U1:
                v = std::pow((1.0 - t) / (1.0 - spec.zeta * t), spec.beta);
                break;
            case KernelSpec::Kind::U2:
                v = std::pow((1.0 - t) / (1.0 - spec.gamma * t), -spec.beta);
                break;
            case KernelSpec::Kind::Uc:
                v = std::exp(-spec.mu / (1.0 - t));
                break;
        }
        if (k > 1) v *= std::pow(t, static_cast<double>(k - 1));
        return v;
    };
    const double h = 1.0 / static_cast<double>(panels);
    double acc = f(0.0) + f(1.0);
    for (std::int64_t i = 1; i < panels; ++i)
        acc += f(static_cast<double>(i) * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double full_u(const KernelSpec& spec, std::int64_t k, double base) {
    if (spec.kind != KernelSpec::Kind::U2) return base;
    return std::pow(spec.gamma, static_cast<double>(k) - spec.beta) * base;
}

}  // namespace

TEST_CASE("degenerate zeta: u1 is the Beta integral") {
    const KernelSpec u1 = KernelSpec::u1(2.0, 0.0);
    CHECK(eval_u(u1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    // Beta(k, 3) = 2/(k(k+1)(k+2))
    for (const std::int64_t k : {2, 5, 20, 200}) {
        const double exact = 2.0 / (static_cast<double>(k) * static_cast<double>(k + 1) *
                                    static_cast<double>(k + 2));
        CHECK(eval_u(u1, k) == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("uc(1, 0.5) against the 1e7-panel Simpson oracle") {
    const KernelSpec uc = KernelSpec::uc(0.5);
    const double oracle = simpson_u(uc, 1, 10000000);
    const double got = eval_u(uc, 1);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(got == doctest::Approx(0.32664386232455).epsilon(1e-11));  // frozen from the oracle
}

TEST_CASE("spot grid against the Simpson oracle") {
    const std::vector<std::int64_t> ks{1, 2, 3, 5, 8, 13, 34};
    const std::vector<KernelSpec> kernels{
        KernelSpec::u1(1.4285714285714286, 0.41666666666666666),  // alpha=0.75, alpha1=0.3
        KernelSpec::u2(-2.0, 0.75),                               // alpha=0.6, alpha1=0.6
        KernelSpec::uc(0.5),                                      // alpha=0.6, alpha1=0.4
    };
    for (const auto& kern : kernels) {
        for (const auto k : ks) {
            const double oracle = full_u(kern, k, simpson_u(kern, k, 400000));
            const double got = eval_u(kern, k);
            CHECK(got == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("integer-exponent kernels against a geometric-series oracle") {
    // For beta = +-2 the kernel is (1-t)^2 (1-ct)^{-2} with c = zeta or
    // gamma; expanding (1-ct)^{-2} = sum (n+1) c^n t^n gives
    // int = sum_n (n+1) c^n * 2/((k+n)(k+n+1)(k+n+2)).
    auto series = [](double c, std::int64_t k) {
        double acc = 0.0, term = 1.0;
        for (int n = 0; term > 1e-18 * acc || n < 8; ++n) {
            const double kn = static_cast<double>(k + n);
            term = (n + 1) * std::pow(c, n) * 2.0 / (kn * (kn + 1.0) * (kn + 2.0));
            acc += term;
        }
        return acc;
    };
    const KernelSpec u1 = KernelSpec::u1(2.0, 0.41666666666666666);
    const KernelSpec u2 = KernelSpec::u2(-2.0, 0.75);
    for (const std::int64_t k : {1, 2, 7, 33, 150}) {
        CHECK(eval_u(u1, k) == doctest::Approx(series(u1.zeta, k)).epsilon(1e-9));
        CHECK(eval_u2_unscaled(u2, k) == doctest::Approx(series(u2.gamma, k)).epsilon(1e-9));
    }
}

TEST_CASE("uc is bounded by 1/k and strictly decreasing") {
    const KernelSpec uc = KernelSpec::uc(0.5);
    double prev = 1.0;
    for (std::int64_t k = 1; k <= 300; ++k) {
        const double v = eval_u(uc, k);
        CHECK(v > 0.0);
        CHECK(v <= 1.0 / static_cast<double>(k));
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("u1 and u2 are positive and strictly decreasing") {
    for (const auto& kern :
         {KernelSpec::u1(1.4285714285714286, 0.41666666666666666), KernelSpec::u2(-2.0, 0.75)}) {
        double prev = std::numeric_limits<double>::infinity();
        for (std::int64_t k = 1; k <= 300; ++k) {
            const double v = eval_u(kern, k);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

namespace {

// |A2(k+2) u(k+2) + (A1(k+1)+B1) u(k+1) + A0 k u(k)| measured against the
// largest participating term.
void check_homogeneous_rows(const ModelParams& p, const KernelSpec& kern) {
    const DerivedConstants c = derive(p);
    UFunction u(kern);
    for (std::int64_t k = 1; k <= 200; ++k) {
        const double t2 = c.A2 * static_cast<double>(k + 2) * u(k + 2);
        const double t1 = (c.A1 * static_cast<double>(k + 1) + c.B1) * u(k + 1);
        const double t0 = c.A0 * static_cast<double>(k) * u(k);
        const double scale =
            std::max({std::abs(t2), std::abs(t1), std::abs(t0), 1e-300});
        CHECK(std::abs(t2 + t1 + t0) <= 1e-8 * scale);
    }
}

}  // namespace

TEST_CASE("u solves its three-term recurrence in every regime") {
    {
        const ModelParams p = validate(0.75, 0.3, 2);
        check_homogeneous_rows(p, KernelSpec::for_regime(RegimeLabel::PowerLaw, derive(p)));
    }
    {
        const ModelParams p = validate(0.6, 0.6, 2);
        check_homogeneous_rows(p, KernelSpec::for_regime(RegimeLabel::Exponential, derive(p)));
    }
    {
        const ModelParams p = validate(0.6, 0.4, 2);
        check_homogeneous_rows(p, KernelSpec::for_regime(RegimeLabel::Critical, derive(p)));
    }
}

TEST_CASE("boundary row: 2 A2 u(2) + (A1+B1) u(1) = -phi1(0) v(0)") {
    const std::vector<std::pair<double, double>> configs{{0.75, 0.3}, {0.6, 0.6}, {0.6, 0.4}};
    for (const auto& [alpha, alpha1] : configs) {
        const ModelParams p = validate(alpha, alpha1, 2);
        const DerivedConstants c = derive(p);
        const KernelSpec kern = KernelSpec::for_regime(classify(p), c);
        const double lhs = 2.0 * c.A2 * eval_u(kern, 2) + (c.A1 + c.B1) * eval_u(kern, 1);
        const double rhs = -kern.boundary_value(c.B);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        CHECK(rhs != 0.0);
    }
}

TEST_CASE("closed form of uc") {
    SUBCASE("k = 1 collapses to the auxiliary integral") {
        for (const double mu : {0.25, 0.5, 1.0})
            CHECK(uc_closed_form(mu, 1) ==
                  doctest::Approx(exponential_integral_e2(mu)).epsilon(1e-12));
    }
    SUBCASE("matches quadrature over k in [1, 15]") {
        for (const double mu : {0.25, 0.5, 1.0}) {
            const KernelSpec uc = KernelSpec::uc(mu);
            for (std::int64_t k = 1; k <= 15; ++k)
                CHECK(uc_closed_form(mu, k) == doctest::Approx(eval_u(uc, k)).epsilon(1e-8));
        }
    }
    SUBCASE("k = 40 trips the cancellation guard") {
        CHECK_THROWS_AS(uc_closed_form(0.5, 40, 64), UnstableEvaluation);
    }
    SUBCASE("k above the ceiling is rejected") {
        CHECK_THROWS_AS(uc_closed_form(0.5, 16), OutOfRange);
    }
}

TEST_CASE("exponential integral E2 cross-checks against expint") {
    for (const double mu : {0.25, 0.5, 1.0, 3.0}) {
        // E2(mu) = e^{-mu} + mu Ei(-mu)
        const double reference = std::exp(-mu) + mu * std::expint(-mu);
        CHECK(exponential_integral_e2(mu) == doctest::Approx(reference).epsilon(1e-11));
    }
}

TEST_CASE("asymptotic constants") {
    const std::vector<std::int64_t> grid{64, 128, 256, 512, 1024};
    SUBCASE("U1 at zeta = 0 has the Gamma-function constant") {
        const auto est = estimate_asymptotic_constant(KernelSpec::u1(2.0, 0.0), grid);
        CHECK(est.constant == doctest::Approx(2.0).epsilon(1e-3));  // Gamma(beta+1)
        CHECK(est.convergence_rate == doctest::Approx(1.0).epsilon(0.25));
    }
    SUBCASE("U1 doubling ratio approaches 2^{-(1+beta)}") {
        const KernelSpec u1 = KernelSpec::u1(2.0, 0.0);
        const double ratio = eval_u(u1, 1024) / eval_u(u1, 512);
        CHECK(std::abs(ratio - 0.125) <= 0.02 * 0.125);
    }
    SUBCASE("U2 scaled values stabilize to a positive constant") {
        const KernelSpec u2 = KernelSpec::u2(-2.0, 0.75);
        const auto est = estimate_asymptotic_constant(u2, grid);
        CHECK(est.constant > 0.0);
        CHECK(est.convergence_rate == doctest::Approx(1.0).epsilon(0.25));
        // u2(k) gamma^{-k} k^{3} = gamma^{-beta} J(k) k^{3} at k = 512 sits
        // near the extrapolated limit
        const double scaled = std::pow(0.75, 2.0) * eval_u2_unscaled(u2, 512) *
                              std::pow(512.0, 3.0);
        CHECK(scaled == doctest::Approx(est.constant).epsilon(0.05));
    }
    SUBCASE("grid validation") {
        CHECK_THROWS_AS(estimate_asymptotic_constant(KernelSpec::u1(2.0, 0.0), {64, 128}),
                        OutOfRange);
        CHECK_THROWS_AS(estimate_asymptotic_constant(KernelSpec::u1(2.0, 0.0), {64, 128, 200}),
                        OutOfRange);
        CHECK_THROWS_AS(
            estimate_asymptotic_constant(KernelSpec::u1(2.0, 0.0), {32, 64, 128, 256}),
            OutOfRange);
        CHECK_THROWS_AS(estimate_asymptotic_constant(KernelSpec::uc(0.5), {64, 128, 256, 512}),
                        OutOfRange);
    }
}

TEST_CASE("uc interpolates between exponential and power decay") {
    const KernelSpec uc = KernelSpec::uc(0.5);
    double prev_a = std::numeric_limits<double>::infinity();
    double prev_b = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 64; k <= 4096; k *= 2) {
        const double v = eval_u(uc, k);
        const double a = std::log(v) / static_cast<double>(-k);    // -> 0: slower than e^{-ck}
        const double b = -std::log(static_cast<double>(k)) / std::log(v);  // -> 0: faster than poly
        CHECK(a > 0.0);
        CHECK(b > 0.0);
        CHECK(a < prev_a);
        CHECK(b < prev_b);
        prev_a = a;
        prev_b = b;
    }
}

TEST_CASE("kernel construction rejects out-of-regime parameters") {
    CHECK_THROWS_AS(KernelSpec::u1(0.5, 0.2), OutOfRange);
    CHECK_THROWS_AS(KernelSpec::u1(2.0, 1.0), OutOfRange);
    CHECK_THROWS_AS(KernelSpec::u2(-0.5, 0.5), OutOfRange);
    CHECK_THROWS_AS(KernelSpec::u2(-2.0, 1.5), OutOfRange);
    CHECK_THROWS_AS(KernelSpec::uc(0.0), OutOfRange);
    CHECK_THROWS_AS(eval_u(KernelSpec::uc(1.0), 0), OutOfRange);
}

TEST_CASE("memoized evaluator returns the plain evaluation") {
    const KernelSpec spec = KernelSpec::uc(0.5);
    UFunction u(spec);
    const double a = u(10);
    CHECK(a == eval_u(spec, 10));
    CHECK(u(10) == a);
}

TEST_CASE("exhausting the segment budget raises QuadratureFailure") {
    auto kink = [](double x) { return std::sqrt(std::abs(x - 0.31415926)); };
    CHECK_THROWS_AS(integrate(kink, 0.0, 1.0, 1e-13, 0.0, 16), QuadratureFailure);
}
