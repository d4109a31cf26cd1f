#pragma once

// Transverse-momentum biphoton amplitude in Cartesian components.
//
//   Psi = exp(-w^2 (k+x^2 + k+y^2) / 2)
//       * sinc[ (pi L / (8 n_o lambda_p)) (4 theta0^2 - (lambda_p/pi)^2 (k-x^2 + k-y^2)) ]
//
// with k+- = k1 +- k2. Amplitudes are unnormalized; only shapes matter.

#include <cmath>

#include "biphoton/units.hpp"

namespace biphoton {

class CrystalDispersion;
struct CutConfig;

/// sin(x)/x with sinc(0) == 1 exactly.
inline double sinc(double x) noexcept {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

inline double sinc_squared(double x) noexcept {
    const double s = sinc(x);
    return s * s;
}

class SpdcParams {
public:
    /// lambda_p in um, waist and length in cm, theta0 in rad, n_o = n_o(2 lambda_p).
    /// Throws DomainError when a length is not positive, theta0 < 0 or n_o <= 1.
    SpdcParams(double lambda_p_um, double waist_cm, double length_cm, double theta0,
               double n_o);

    /// Derives theta0 and n_o from the crystal cut. Collinear-impossible cuts
    /// (delta_n >= 0) give theta0 = 0.
    static SpdcParams from_crystal(const CrystalDispersion& disp, const CutConfig& cut,
                                   double waist_cm, double length_cm);

    double lambda_p_um() const noexcept { return lambda_p_um_; }
    double lambda_p_cm() const noexcept { return um_to_cm(lambda_p_um_); }
    double waist() const noexcept { return waist_; }
    double length() const noexcept { return length_; }
    double theta0() const noexcept { return theta0_; }
    double n_o() const noexcept { return n_o_; }

    /// Prefactor pi L / (8 n_o lambda_p) of the sinc argument.
    double sinc_scale() const noexcept { return kPi * length_ / (8.0 * n_o_ * lambda_p_cm()); }

    /// Dimensionless transverse momentum kappa = lambda_p k / pi.
    double kappa(double k) const noexcept { return lambda_p_cm() * k / kPi; }
    double wavenumber(double kappa) const noexcept { return kPi * kappa / lambda_p_cm(); }

    SpdcParams with_theta0(double theta0) const {
        return {lambda_p_um_, waist_, length_, theta0, n_o_};
    }

private:
    double lambda_p_um_;
    double waist_;
    double length_;
    double theta0_;
    double n_o_;
};

struct MomentumPoint4 {
    double k1x = 0.0;
    double k2x = 0.0;
    double k1y = 0.0;
    double k2y = 0.0;

    double plus_x() const noexcept { return k1x + k2x; }
    double minus_x() const noexcept { return k1x - k2x; }
    double plus_y() const noexcept { return k1y + k2y; }
    double minus_y() const noexcept { return k1y - k2y; }

    MomentumPoint4 exchanged() const noexcept { return {k2x, k1x, k2y, k1y}; }
};

double pump_envelope(double k_plus_x, double k_plus_y, const SpdcParams& p) noexcept;

double mismatch_arg(double k_minus_x, double k_minus_y, const SpdcParams& p) noexcept;

double psi(const MomentumPoint4& point, const SpdcParams& p) noexcept;

/// |psi|^2
double density4(const MomentumPoint4& point, const SpdcParams& p) noexcept;

}  // namespace biphoton
