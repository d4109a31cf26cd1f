#pragma once

// Distributions obtained by integrating |Psi|^2 over the y components of both
// photons, and the width-ratio entanglement quantifier.
//
// The reduced two-photon density is  exp(-w^2 k+x^2) F(k-x)  with
//
//   F(k-x) = integral dq sinc^2[ A (4 theta0^2 - kappa-x^2 - q^2) ],
//   A = pi L / (8 n_o lambda_p),   kappa = lambda_p k / pi.

#include <cstddef>
#include <optional>
#include <string>

#include "biphoton/amplitude.hpp"
#include "biphoton/curve.hpp"

namespace biphoton {

struct FExactOptions {
    /// Target relative accuracy of the returned value.
    double rel_tol = 1e-6;
    /// Lobe summation stops once the bound on the remaining tail drops below
    /// tail_tol times the accumulated integral.
    double tail_tol = 1e-8;
    /// Budget of sinc lobes before giving up with AccuracyError.
    std::size_t max_lobes = 2'000'000;
};

struct FExactResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t lobes = 0;
    std::size_t evaluations = 0;
};

/// Exact F(k-x) by lobe-wise Gauss-Kronrod quadrature. Throws AccuracyError
/// (carrying the estimate) when the lobe budget runs out or the requested
/// accuracy is not reached.
FExactResult f_exact_detail(double k_minus_x, const SpdcParams& p, const FExactOptions& opt = {});
double f_exact(double k_minus_x, const SpdcParams& p, const FExactOptions& opt = {});

/// Delta-function approximation 8 n_o lambda_p / (L sqrt(4 theta0^2 - kappa^2)).
/// Zero outside |kappa| < 2 theta0; +infinity exactly on the cone edge, where
/// the singularity is integrable.
double f_approx(double k_minus_x, const SpdcParams& p) noexcept;

/// Closed-form rms widths, cm^-1.
double width_minus(const SpdcParams& p) noexcept;        // sqrt(2) pi theta0 / lambda_p
double width_single(const SpdcParams& p) noexcept;       // width_minus / 2
double width_coincidence(const SpdcParams& p) noexcept;  // 1 / (2 w_p)

/// <k-x^2> weighted by f_approx, by quadrature after kappa = 2 theta0 sin(u),
/// which removes the inverse-square-root endpoint singularities. cm^-2.
double second_moment_approx(const SpdcParams& p);

/// exp(-w^2 (k1x + k2x)^2) f_exact(k1x - k2x).
double reduced_bipartite(double k1x, double k2x, const SpdcParams& p,
                         const FExactOptions& opt = {});

enum class FModel { exact, approx };

/// Grid spanning |kappa| <= 1.5 max(2 theta0, sqrt(lambda_p / L)) with 2001 points.
Grid default_grid(const SpdcParams& p, std::size_t points = 2001);

/// Conditional density in k1x at fixed k2x: exp(-w^2 (k1x + k2x)^2) F(2 k2x).
/// The grid may be in kappa or wavenumber units.
Curve coincidence_curve(double k2x_fixed, const Grid& grid, const SpdcParams& p,
                        const FExactOptions& opt = {});

/// Grid centred on k1x = -k2x_fixed spanning +-span / w_p (wavenumber units).
Grid coincidence_grid(double k2x_fixed, const SpdcParams& p, std::size_t points = 2001,
                      double span = 6.0);

/// Single-photon density F(2 k1x).
Curve single_particle_curve(const Grid& grid, const SpdcParams& p, FModel model = FModel::exact,
                            const FExactOptions& opt = {}, unsigned threads = 0);

/// integral dk2x |Psi(k1x, k2x, 0, 0)|^2: photons restricted to the (x, z) plane.
Curve plane_restricted_curve(const Grid& grid, const SpdcParams& p, unsigned threads = 0);

enum class Regime { noncollinear_broadened, intermediate, collinear };

const char* to_string(Regime r) noexcept;

/// theta0 against sqrt(lambda_p / L): above 3x is noncollinear-broadened,
/// below 1/3 is collinear.
Regime classify_regime(const SpdcParams& p) noexcept;

struct EntanglementReport {
    double width_single = 0.0;  // cm^-1
    double width_coinc = 0.0;   // cm^-1
    double width_minus = 0.0;   // cm^-1
    double ratio_R = 0.0;
    Regime regime = Regime::intermediate;
    /// Informational, filled by callers that have a sampled single-particle curve.
    std::optional<double> fwhm_single;  // cm^-1
};

EntanglementReport entanglement_report(const SpdcParams& p);

std::string format_report(const EntanglementReport& r, const SpdcParams& p);

}  // namespace biphoton
