#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "degseq/errors.hpp"

namespace degseq {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // certified bound estimate
};

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
inline constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kKronrodW[7] * fc;
    double gauss = kGaussW[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * kKronrodX[i];
        const double fs = f(c - x) + f(c + x);
        kron += kKronrodW[i] * fs;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * fs;
    }
    // |K - G| already overestimates the Kronrod error on smooth integrands;
    // keep it as a conservative certificate.
    return {kron * h, std::abs(kron - gauss) * std::abs(h)};
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b]: bisects the worst segment until the
// summed error certificate satisfies the tolerances, or throws
// QuadratureFailure after max_segments splits.
template <class F>
QuadResult integrate(const F& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                     std::size_t max_segments = 2000) {
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk15(f, a, b);
    heap.push({a, b, first.value, first.error});
    double total = first.value;
    double total_err = first.error;

    while (total_err > std::max(rel_tol * std::abs(total), abs_tol)) {
        if (heap.size() >= max_segments)
            throw QuadratureFailure("adaptive quadrature: error " + std::to_string(total_err) +
                                    " not certified at requested tolerance");
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b))
            throw QuadratureFailure("adaptive quadrature: interval exhausted at x=" +
                                    std::to_string(worst.a));
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
    }
    return {total, total_err};
}

}  // namespace degseq
