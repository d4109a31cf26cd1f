#include "biphoton/amplitude.hpp"

#include <sstream>

#include "biphoton/crystal.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

SpdcParams::SpdcParams(double lambda_p_um, double waist_cm, double length_cm, double theta0,
                       double n_o)
    : lambda_p_um_(lambda_p_um),
      waist_(waist_cm),
      length_(length_cm),
      theta0_(theta0),
      n_o_(n_o) {
    if (!(lambda_p_um > 0.0) || !(waist_cm > 0.0) || !(length_cm > 0.0) ||
        !(theta0 >= 0.0) || !(n_o > 1.0) || !std::isfinite(theta0)) {
        std::ostringstream msg;
        msg << "invalid SPDC parameters: lambda_p=" << lambda_p_um << " um, w_p=" << waist_cm
            << " cm, L=" << length_cm << " cm, theta0=" << theta0 << ", n_o=" << n_o;
        throw DomainError(msg.str());
    }
}

SpdcParams SpdcParams::from_crystal(const CrystalDispersion& disp, const CutConfig& cut,
                                    double waist_cm, double length_cm) {
    const PhaseMatchResult pm = phase_match(disp, cut);
    return {cut.lambda_p, waist_cm, length_cm, pm.theta0.value_or(0.0), pm.n_o_signal};
}

double pump_envelope(double k_plus_x, double k_plus_y, const SpdcParams& p) noexcept {
    const double w = p.waist();
    return std::exp(-0.5 * w * w * (k_plus_x * k_plus_x + k_plus_y * k_plus_y));
}

double mismatch_arg(double k_minus_x, double k_minus_y, const SpdcParams& p) noexcept {
    const double kx = p.kappa(k_minus_x);
    const double ky = p.kappa(k_minus_y);
    const double t = p.theta0();
    return p.sinc_scale() * (4.0 * t * t - (kx * kx + ky * ky));
}

double psi(const MomentumPoint4& point, const SpdcParams& p) noexcept {
    return pump_envelope(point.plus_x(), point.plus_y(), p) *
           sinc(mismatch_arg(point.minus_x(), point.minus_y(), p));
}

double density4(const MomentumPoint4& point, const SpdcParams& p) noexcept {
    const double a = psi(point, p);
    return a * a;
}

}  // namespace biphoton
