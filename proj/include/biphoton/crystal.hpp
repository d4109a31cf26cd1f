#pragma once

// Dispersion and phase matching for a negative uniaxial crystal pumped by an
// extraordinary wave, emitting two ordinary photons at twice the pump
// wavelength (type-I, frequency-degenerate).

#include <array>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <utility>

namespace biphoton {

/// Four-term Sellmeier law  n^2 = a + b / (lambda^2 - c) - d * lambda^2,  lambda in um.
struct SellmeierCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    double index_squared(double lambda_um) const noexcept {
        const double l2 = lambda_um * lambda_um;
        return a + b / (l2 - c) - d * l2;
    }
};

struct WavelengthRange {
    double min_um = 0.0;
    double max_um = 0.0;

    bool contains(double lambda_um) const noexcept {
        return lambda_um >= min_um && lambda_um <= max_um;
    }
};

class CrystalDispersion {
public:
    CrystalDispersion(std::string name, SellmeierCoefficients ordinary,
                      SellmeierCoefficients extraordinary, WavelengthRange valid_range);

    const std::string& name() const noexcept { return name_; }
    const SellmeierCoefficients& sellmeier_o() const noexcept { return ordinary_; }
    const SellmeierCoefficients& sellmeier_e() const noexcept { return extraordinary_; }
    const WavelengthRange& valid_range() const noexcept { return range_; }

    /// Throws RangeError outside valid_range.
    double index_ordinary(double lambda_um) const;
    double index_extraordinary(double lambda_um) const;

    /// Beta-barium borate, Eimerl et al. (1987) coefficients.
    static CrystalDispersion bbo();

private:
    double evaluate(const SellmeierCoefficients& s, double lambda_um, const char* which) const;

    std::string name_;
    SellmeierCoefficients ordinary_;
    SellmeierCoefficients extraordinary_;
    WavelengthRange range_;
};

/// Parses the key-value crystal format:
///
///     name = BBO
///     sellmeier_o = 2.7405, 0.0184, 0.0179, 0.0155
///     sellmeier_e = 2.3730, 0.0128, 0.0156, 0.0044
///     valid_range = 0.22, 1.06
///
/// `#` starts a comment. Unknown keys, missing keys, duplicate keys, and
/// unparsable numbers raise ConfigError with the offending line number.
CrystalDispersion parse_crystal(std::istream& in);
CrystalDispersion load_crystal(const std::filesystem::path& path);

struct CutConfig {
    double phi0 = 0.0;       // optical axis to pump axis, rad
    double lambda_p = 0.0;   // pump wavelength, um
};

struct PhaseMatchResult {
    double n_p = 0.0;
    double n_o_signal = 0.0;
    double delta_n = 0.0;
    double delta0 = 0.0;               // cm^-1
    std::optional<double> theta0;      // rad, only in the noncollinear regime
};

/// Extraordinary pump index with the pump wave vector along z (no walk-off),
/// so the angle to the optical axis is phi0 itself.
double pump_index(const CrystalDispersion& disp, const CutConfig& cfg);

PhaseMatchResult phase_match(const CrystalDispersion& disp, const CutConfig& cfg);

/// Root of delta_n(phi0) in `bracket`: bisection to 1e-12 rad followed by a
/// single secant step. Throws NoSolutionError without a sign change.
double collinear_cut_angle(const CrystalDispersion& disp, double lambda_p,
                           std::pair<double, double> bracket = {0.0, 1.5707963267948966});

/// Threshold of the square-root interpolation for BBO at 0.4047 um.
inline constexpr double kOpeningFitThreshold = 0.5008;

/// theta0 ~ 0.63 sqrt(phi0 - 0.5008). Throws DomainError below the threshold.
double opening_angle_fit(double phi0);

}  // namespace biphoton
