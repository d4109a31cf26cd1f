#pragma once

// Resolved settings for one CLI run. Layers are applied in order
// defaults -> config file -> command-line flags, later layers winning.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>

#include "biphoton/crystal.hpp"
#include "biphoton/curve.hpp"
#include "biphoton/amplitude.hpp"

namespace biphoton {

struct RunConfig {
    std::filesystem::path crystal;
    double lambda_p = 0.4047;        // um
    std::optional<double> phi0;      // rad
    std::optional<double> theta0;    // rad, overrides the crystal cut
    double waist = 0.1;              // cm
    double length = 0.1;             // cm
    double z = 100.0;                // cm
    std::size_t grid = 2001;
    std::filesystem::path out = ".";
    std::uint64_t seed = 20160329;
    Normalization normalize = Normalization::area;

    // scan settings
    std::size_t pairs = 1'000'000;
    std::size_t scan_lines = 601;
    std::optional<double> slit_width;  // cm, defaults to delta_r / 2
    // distributions settings
    double k2x = 0.0;  // cm^-1, fixed partner momentum of the coincidence curve
    bool sweep = false;

    unsigned threads = 0;

    /// Moderate-parameter defaults: BBO at 0.4047 um, phi0 = 0.5275, w = L = 0.1 cm.
    static RunConfig defaults();

    void set_phi0(double v) { phi0 = v; theta0.reset(); }
    void set_theta0(double v) { theta0 = v; phi0.reset(); }
};

/// Applies `key = value` lines (keys are the RunConfig field names, `#`
/// comments). A file may name phi0 or theta0 but not both.
void apply_config(RunConfig& cfg, std::istream& in);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Throws ConfigError unless every physical field is positive and exactly one
/// of phi0 / theta0 is set.
void validate(const RunConfig& cfg);

/// Loads the crystal and builds the physical parameter set.
struct ResolvedRun {
    CrystalDispersion crystal;
    SpdcParams params;
};
ResolvedRun resolve(const RunConfig& cfg);

/// Every resolved field, for output file headers.
Header config_header(const RunConfig& cfg, const ResolvedRun& run);

}  // namespace biphoton
