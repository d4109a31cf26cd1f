#pragma once

// Gauss-Kronrod (7, 15) panels with global adaptive bisection.
//
// Results are summed in left-to-right panel order so the same integrand and
// limits always reproduce the same bits.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

namespace biphoton::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;

    Result& operator+=(const Result& other) noexcept {
        value += other.value;
        abs_error += other.abs_error;
        evaluations += other.evaluations;
        converged = converged && other.converged;
        return *this;
    }
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// One 15-point Kronrod panel; the error is |K15 - G7|.
template <class F>
Result gauss_kronrod15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * detail::kKronrodWeights[7];
    double gauss = fc * detail::kGaussWeights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * detail::kKronrodNodes[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += detail::kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += detail::kGaussWeights[j / 2] * sum;
    }
    Result r;
    r.value = kronrod * half;
    r.abs_error = std::abs((kronrod - gauss) * half);
    r.evaluations = 15;
    return r;
}

struct AdaptiveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_panels = 200;
};

/// Bisects the panel with the largest error estimate until the summed error
/// meets max(abs_tol, rel_tol * |value|) or the panel budget is spent
/// (`converged` is false in that case).
template <class F>
Result integrate(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
    struct Panel {
        double a;
        double b;
        Result r;
    };
    std::vector<Panel> panels;
    panels.push_back({a, b, gauss_kronrod15(f, a, b)});
    std::size_t evaluations = panels.front().r.evaluations;

    const auto totals = [&panels] {
        double v = 0.0;
        double e = 0.0;
        for (const auto& p : panels) {
            v += p.r.value;
            e += p.r.abs_error;
        }
        return std::pair{v, e};
    };

    auto [value, error] = totals();
    while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) &&
           panels.size() < opt.max_panels) {
        const auto worst = std::max_element(
            panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.r.abs_error < y.r.abs_error; });
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b)) break;  // interval at machine resolution
        Panel right{mid, worst->b, gauss_kronrod15(f, mid, worst->b)};
        worst->b = mid;
        worst->r = gauss_kronrod15(f, worst->a, mid);
        evaluations += worst->r.evaluations + right.r.evaluations;
        panels.push_back(right);
        std::tie(value, error) = totals();
    }

    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    Result out;
    for (const auto& p : panels) {
        out.value += p.r.value;
        out.abs_error += p.r.abs_error;
    }
    out.evaluations = evaluations;
    out.converged = out.abs_error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
    return out;
}

}  // namespace biphoton::quad
