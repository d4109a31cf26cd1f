#pragma once

// Detection-plane picture of the emission cone: the ring cut by a plane at
// distance z, vertical-line detector scans over it, and a Monte-Carlo source
// of photon pairs drawn from |Psi|^2.
//
// A photon with transverse wave vector k lands at r = z lambda_p k / pi.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biphoton/amplitude.hpp"
#include "biphoton/curve.hpp"

namespace biphoton {

struct RingGeometry {
    double z = 0.0;        // crystal to detector, cm
    double r0 = 0.0;       // ring radius, cm
    double delta_r = 0.0;  // ring thickness, cm

    double inner() const noexcept { return r0 - 0.5 * delta_r; }
    double outer() const noexcept { return r0 + 0.5 * delta_r; }
    double area() const noexcept;
};

/// r0 = z theta0, delta_r = z * width_coincidence * lambda_p / pi.
/// Throws NoRingError for theta0 = 0 and DomainError for z <= 0.
RingGeometry ring_from_params(const SpdcParams& p, double z);

/// Length of the vertical line x = x_offset inside the annulus (both crossings).
double chord_length(double x_offset, const RingGeometry& ring) noexcept;

/// Annulus area inside the strip |x - x_center| <= width / 2.
double strip_area(double x_center, double width, const RingGeometry& ring) noexcept;

struct PairSample {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;
};

/// Inverse-transform sampler for |k-| (in kappa units). With
/// u = A (4 theta0^2 - rho^2) the radial law rho sinc^2(A(4 theta0^2 - rho^2)) drho
/// becomes sinc^2(u) du / (2A), so the cumulative is tabulated in u on
/// equally spaced knots, `knots_per_lobe` per interval of length pi, with
/// linear (monotone) interpolation. The table reaches 1024 pi below zero and
/// the 1/(2u^2) mean law covers u below that.
class RadialSampler {
public:
    explicit RadialSampler(const SpdcParams& p, std::size_t knots_per_lobe = 64);

    /// Maps two independent uniforms in [0, 1) to |kappa-|.
    double sample(double v_select, double v_tail) const noexcept;

    double u_max() const noexcept { return u_max_; }
    double u_min() const noexcept { return u_min_; }
    double tail_probability() const noexcept { return tail_probability_; }
    /// Tabulated cumulative probability at u (table range only).
    double cdf(double u) const noexcept;

private:
    double kappa_of_u(double u) const noexcept;

    double scale_;   // A
    double theta0_;
    double u_min_;
    double u_max_;
    double du_;
    std::vector<double> cumulative_;  // unnormalized, cumulative_[0] == 0
    double tail_probability_;
};

struct SamplerOptions {
    /// Pairs are split into this many contiguous shards, each with its own
    /// generator seeded from (seed, shard index).
    std::size_t shards = 4;
    unsigned threads = 0;
    /// Rotates the azimuth origin of k-.
    double azimuth_offset = 0.0;
    std::size_t knots_per_lobe = 64;
};

struct PairSet {
    std::vector<PairSample> pairs;
    std::uint64_t seed = 0;
    std::size_t shards = 0;
    double z = 0.0;
};

/// Draws k+ from exp(-w^2 k+^2), |k-| from RadialSampler with uniform azimuth,
/// and maps both photons to the plane at distance z. Identical
/// (seed, shards) give identical output.
PairSet sample_pairs(const SpdcParams& p, std::size_t n, std::uint64_t seed, double z,
                     const SamplerOptions& opt = {});

enum class ScanMode { single, coincidence };
enum class ScanSource { analytic, monte_carlo };

const char* to_string(ScanMode m) noexcept;
const char* to_string(ScanSource s) noexcept;

struct ScanResult {
    std::vector<double> positions;  // scan-line x offsets, cm
    std::vector<double> counts;
    ScanMode mode = ScanMode::single;
    ScanSource source = ScanSource::analytic;
    double line_width = 0.0;  // cm, horizontal width of each scan line
    std::size_t pairs_sampled = 0;
    std::uint64_t seed = 0;
    std::optional<double> d2_position;  // cm
    std::optional<double> slit_width;   // cm, D2 aperture
    bool empty = false;

    double total() const noexcept;
    /// Counts divided by (total * line_width), as a curve over positions.
    Curve density() const;
    /// Same, with the abscissa converted to kappa = x / z.
    Curve density_kappa(double z) const;
};

/// Expected counts for `photons` spread uniformly over the annulus, on
/// vertical strips of width `line_width` (0 gives chord_length densities).
ScanResult scan_single(const RingGeometry& ring, const Grid& positions, double line_width,
                       double photons);

/// Histograms both photons of every pair onto the scan lines. The grid must be
/// uniform; the line width is its spacing.
ScanResult scan_single(const PairSet& samples, const Grid& positions);

/// Coincidences between a vertical D2 slit of `slit_width` centred at
/// x = d2_x and scan lines for the partner photon. Either photon may trigger
/// D2. Requires |d2_x| <= ring.outer(); no captured pair gives `empty`.
ScanResult scan_coincidence(const PairSet& samples, const RingGeometry& ring, double d2_x,
                            double slit_width, const Grid& positions);

/// Uniform position grid (cm) spanning x = z * kappa over `kappa_grid`.
Grid position_grid(const Grid& kappa_grid, double z);

/// `lines` scan lines spaced delta_r / 2 and centred on x = -d2_x, the point
/// diametrically opposite D2.
Grid coincidence_scan_grid(const RingGeometry& ring, double d2_x, std::size_t lines = 121);

/// Unit-area comparison of theory, analytic scan and Monte-Carlo scan on a
/// shared uniform kappa grid. Lines whose extent comes within `exclusion` of
/// |kappa| = theta0 are left out; sup norms are relative to the largest
/// theory value on the included lines.
struct ScanComparison {
    std::vector<double> kappa;
    std::vector<double> theory;
    std::vector<double> analytic;
    std::vector<double> monte_carlo;
    std::vector<bool> included;
    double sup_theory_analytic = 0.0;
    double sup_theory_mc = 0.0;
    double sup_analytic_mc = 0.0;
};

ScanComparison compare_single_scans(const Curve& theory, const ScanResult& analytic,
                                    const ScanResult& monte_carlo, double z, double theta0,
                                    double exclusion = 0.002);

Table scan_table(const ScanResult& r, const std::string& name, Header params = {});
Table comparison_table(const ScanComparison& c, Header params = {});

}  // namespace biphoton
