#include "biphoton/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/parallel.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton {

namespace {

// One sinc lobe is smooth, so a single Kronrod panel usually suffices.
template <class F>
quad::Result integrate_lobe(F&& f, double a, double b) {
    constexpr double kLobeRelTol = 1e-10;
    quad::Result r = quad::gauss_kronrod15(f, a, b);
    if (r.abs_error <= kLobeRelTol * std::abs(r.value)) return r;
    return quad::integrate(f, a, b, {kLobeRelTol, 0.0, 64});
}

}  // namespace

FExactResult f_exact_detail(double k_minus_x, const SpdcParams& p, const FExactOptions& opt) {
    const double A = p.sinc_scale();
    const double kappa = p.kappa(k_minus_x);
    const double t = p.theta0();
    const double c = 4.0 * t * t - kappa * kappa;
    const auto integrand = [A, c](double q) { return sinc_squared(A * (c - q * q)); };

    // Lobe edges: A (c - q^2) = m pi, walking outward in q from m = floor(A c / pi).
    double m = std::floor(A * c / kPi);
    double q_prev = 0.0;
    quad::Result acc;
    acc.value = 0.0;
    std::size_t lobes = 0;

    for (;; m -= 1.0) {
        const double q_next = std::sqrt(std::max(0.0, c - m * kPi / A));
        if (q_next > q_prev) {
            acc += integrate_lobe(integrand, q_prev, q_next);
            q_prev = q_next;
            ++lobes;
        }
        if (m < 0.0 && q_prev > 0.0) {
            // Beyond the edge s = A (q^2 - c) = -m pi the integrand is
            // sin^2(s)/s^2 dq = (1 - cos 2s)/2 * h(s) ds,  h = 1 / (2 A s^2 q).
            // Mean part exactly; oscillating part by two integrations by
            // parts, whose remainder is bounded by |h''(S)| / 8.
            const double S = -m * kPi;
            const double Q = q_prev;
            const double h = 1.0 / (2.0 * A * S * S * Q);
            const double a = -2.0 / S - 1.0 / (2.0 * A * Q * Q);
            const double da = 2.0 / (S * S) + 1.0 / (2.0 * A * A * Q * Q * Q * Q);
            const double bound = std::abs(h * (a * a + da)) / 8.0;
            if (bound < opt.tail_tol * acc.value) {
                const auto mean_integrand = [A, c](double s) {
                    const double d = 1.0 - c * s * s;
                    return s * s / (2.0 * A * A * d * d);
                };
                const quad::Result mean = quad::integrate(mean_integrand, 0.0, 1.0 / Q, {1e-10, 0.0, 200});
                FExactResult out;
                out.value = 2.0 * (acc.value + mean.value + h * a / 8.0);
                out.abs_error = 2.0 * (acc.abs_error + mean.abs_error + bound);
                out.lobes = lobes;
                out.evaluations = acc.evaluations + mean.evaluations;
                if (!(out.abs_error <= opt.rel_tol * out.value)) {
                    throw AccuracyError("f_exact: error estimate above tolerance", out.value,
                                        out.abs_error);
                }
                return out;
            }
        }
        if (lobes >= opt.max_lobes) {
            std::ostringstream msg;
            msg << "f_exact: lobe budget " << opt.max_lobes << " exhausted at kappa = " << kappa;
            throw AccuracyError(msg.str(), 2.0 * acc.value, std::numeric_limits<double>::infinity());
        }
    }
}

double f_exact(double k_minus_x, const SpdcParams& p, const FExactOptions& opt) {
    return f_exact_detail(k_minus_x, p, opt).value;
}

double f_approx(double k_minus_x, const SpdcParams& p) noexcept {
    const double kappa = p.kappa(k_minus_x);
    const double t = p.theta0();
    const double d = 4.0 * t * t - kappa * kappa;
    if (d > 0.0) return 8.0 * p.n_o() * p.lambda_p_cm() / (p.length() * std::sqrt(d));
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    return 0.0;
}

double width_minus(const SpdcParams& p) noexcept {
    return kSqrt2 * kPi * p.theta0() / p.lambda_p_cm();
}

double width_single(const SpdcParams& p) noexcept { return 0.5 * width_minus(p); }

double width_coincidence(const SpdcParams& p) noexcept { return 1.0 / (2.0 * p.waist()); }

double second_moment_approx(const SpdcParams& p) {
    const double t = p.theta0();
    if (t == 0.0) return 0.0;
    // kappa = 2 theta0 sin(u): f_approx dkappa becomes a constant times du.
    const auto weight = [&](double u) {
        const double kappa = 2.0 * t * std::sin(u);
        return f_approx(p.wavenumber(kappa), p) * 2.0 * t * std::cos(u);
    };
    const auto moment = [&](double u) {
        const double kappa = 2.0 * t * std::sin(u);
        return kappa * kappa * weight(u);
    };
    const quad::AdaptiveOptions opt{1e-12, 0.0, 100};
    const double num = quad::integrate(moment, -0.5 * kPi, 0.5 * kPi, opt).value;
    const double den = quad::integrate(weight, -0.5 * kPi, 0.5 * kPi, opt).value;
    const double scale = kPi / p.lambda_p_cm();
    return num / den * scale * scale;
}

double reduced_bipartite(double k1x, double k2x, const SpdcParams& p, const FExactOptions& opt) {
    const double w = p.waist();
    const double kp = k1x + k2x;
    const double gauss = std::exp(-w * w * kp * kp);
    if (gauss == 0.0) return 0.0;
    return gauss * f_exact(k1x - k2x, p, opt);
}

Grid default_grid(const SpdcParams& p, std::size_t points) {
    const double half = 1.5 * std::max(2.0 * p.theta0(), std::sqrt(p.lambda_p_cm() / p.length()));
    return Grid::uniform(-half, half, points, Axis::kappa);
}

namespace {

double to_wavenumber(double x, Axis axis, const SpdcParams& p) {
    switch (axis) {
        case Axis::kappa: return p.wavenumber(x);
        case Axis::wavenumber: return x;
        case Axis::position: break;
    }
    throw DomainError("momentum curves need a kappa or wavenumber grid");
}

// Cell average of f_approx(2 k1) over [x - h/2, x + h/2] in kappa, used where
// the grid lands exactly on the integrable singularity.
double approx_cell_average(double kappa1, double half_cell, const SpdcParams& p) {
    const double t = p.theta0();
    const double lo = std::clamp(kappa1 - half_cell, -t, t);
    const double hi = std::clamp(kappa1 + half_cell, -t, t);
    const double scale = 4.0 * p.n_o() * p.lambda_p_cm() / p.length();
    const double asin_hi = t > 0.0 ? std::asin(hi / t) : 0.0;
    const double asin_lo = t > 0.0 ? std::asin(lo / t) : 0.0;
    return scale * (asin_hi - asin_lo) / (2.0 * half_cell);
}

}  // namespace

Curve coincidence_curve(double k2x_fixed, const Grid& grid, const SpdcParams& p,
                        const FExactOptions& opt) {
    const double F = f_exact(2.0 * k2x_fixed, p, opt);
    const double w = p.waist();
    std::vector<double> y(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double kp = to_wavenumber(grid.points[i], grid.axis, p) + k2x_fixed;
        y[i] = std::exp(-w * w * kp * kp) * F;
    }
    return Curve(grid.points, std::move(y), grid.axis);
}

Grid coincidence_grid(double k2x_fixed, const SpdcParams& p, std::size_t points, double span) {
    const double half = span / p.waist();
    return Grid::uniform(-k2x_fixed - half, -k2x_fixed + half, points, Axis::wavenumber);
}

Curve single_particle_curve(const Grid& grid, const SpdcParams& p, FModel model,
                            const FExactOptions& opt, unsigned threads) {
    std::vector<double> y(grid.size());
    parallel_for(
        grid.size(),
        [&](std::size_t i) {
            const double k1 = to_wavenumber(grid.points[i], grid.axis, p);
            if (model == FModel::exact) {
                y[i] = f_exact(2.0 * k1, p, opt);
                return;
            }
            y[i] = f_approx(2.0 * k1, p);
            if (std::isinf(y[i])) {
                const std::size_t j = i + 1 < grid.size() ? i + 1 : i - 1;
                const double half_cell = 0.5 * std::abs(p.kappa(to_wavenumber(grid.points[j], grid.axis, p)) -
                                                        p.kappa(k1));
                y[i] = approx_cell_average(p.kappa(k1), half_cell, p);
            }
        },
        threads);
    return Curve(grid.points, std::move(y), grid.axis);
}

Curve plane_restricted_curve(const Grid& grid, const SpdcParams& p, unsigned threads) {
    const double w = p.waist();
    const double reach = 8.0 / w;  // exp(-64) of the Gaussian left out
    const quad::AdaptiveOptions opt{1e-9, 1e-16 * std::sqrt(kPi) / w, 2000};
    std::vector<double> y(grid.size());
    parallel_for(
        grid.size(),
        [&](std::size_t i) {
            const double k1 = to_wavenumber(grid.points[i], grid.axis, p);
            // integrate over k+ = k1 + k2, so k- = 2 k1 - k+
            const auto integrand = [&](double kp) {
                return std::exp(-w * w * kp * kp) * sinc_squared(mismatch_arg(2.0 * k1 - kp, 0.0, p));
            };
            y[i] = quad::integrate(integrand, -reach, reach, opt).value;
        },
        threads);
    return Curve(grid.points, std::move(y), grid.axis);
}

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::noncollinear_broadened: return "noncollinear-broadened";
        case Regime::intermediate: return "intermediate";
        case Regime::collinear: return "collinear";
    }
    return "?";
}

Regime classify_regime(const SpdcParams& p) noexcept {
    const double scale = std::sqrt(p.lambda_p_cm() / p.length());
    if (p.theta0() > 3.0 * scale) return Regime::noncollinear_broadened;
    if (p.theta0() < scale / 3.0) return Regime::collinear;
    return Regime::intermediate;
}

EntanglementReport entanglement_report(const SpdcParams& p) {
    EntanglementReport r;
    r.width_minus = width_minus(p);
    r.width_single = width_single(p);
    r.width_coinc = width_coincidence(p);
    r.ratio_R = r.width_single / r.width_coinc;
    r.regime = classify_regime(p);
    return r;
}

std::string format_report(const EntanglementReport& r, const SpdcParams& p) {
    std::ostringstream out;
    out.precision(10);
    out << "lambda_p_um = " << p.lambda_p_um() << '\n'
        << "waist_cm = " << p.waist() << '\n'
        << "length_cm = " << p.length() << '\n'
        << "theta0_rad = " << p.theta0() << '\n'
        << "n_o = " << p.n_o() << '\n'
        << "width_minus_cm-1 = " << r.width_minus << '\n'
        << "width_single_cm-1 = " << r.width_single << '\n'
        << "width_coincidence_cm-1 = " << r.width_coinc << '\n'
        << "ratio_R = " << r.ratio_R << '\n'
        << "regime = " << to_string(r.regime) << '\n'
        << "collinear_scale_sqrt_lambda_over_L = " << std::sqrt(p.lambda_p_cm() / p.length())
        << '\n';
    if (r.fwhm_single) out << "fwhm_single_cm-1 = " << *r.fwhm_single << '\n';
    return out.str();
}

}  // namespace biphoton
