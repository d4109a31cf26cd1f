#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numeric>

#include "biphoton/crystal.hpp"
#include "biphoton/distributions.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/ring_scan.hpp"
#include "doctest.h"

using namespace biphoton;
using doctest::Approx;

namespace {

const double kNo = CrystalDispersion::bbo().index_ordinary(0.8094);
const SpdcParams kSetA(0.4047, 0.5, 0.5, 0.28, kNo);
const SpdcParams kSetB(0.4047, 0.1, 0.1, 0.1, kNo);
constexpr double kZ = 100.0;

// Fraction of included lines whose counts sit within 3 sigma (Poisson on the
// expectation) of the analytic scan, and the reduced chi^2.
struct Agreement {
    double within = 0.0;
    double chi2_dof = 0.0;
};

Agreement agreement(const ScanResult& expected, const ScanResult& observed, double theta0,
                    double exclusion) {
    const double scale = observed.total() / expected.total();
    std::size_t n = 0, ok = 0;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < expected.counts.size(); ++i) {
        const double kappa = expected.positions[i] / kZ;
        if (std::abs(std::abs(kappa) - theta0) < exclusion + 0.5 * expected.line_width / kZ) continue;
        const double e = expected.counts[i] * scale;
        if (e < 20.0) continue;
        const double d = observed.counts[i] - e;
        ++n;
        if (std::abs(d) <= 3.0 * std::sqrt(e)) ++ok;
        chi2 += d * d / e;
    }
    return {static_cast<double>(ok) / static_cast<double>(n), chi2 / static_cast<double>(n)};
}

}  // namespace

TEST_SUITE("ring_scan") {

TEST_CASE("ring geometry") {
    const RingGeometry ring = ring_from_params(kSetB, kZ);
    CHECK(ring.r0 == Approx(10.0).epsilon(1e-15));
    CHECK(ring.delta_r == Approx(100.0 * 5.0 * 0.4047e-4 / kPi).epsilon(1e-15));
    CHECK(ring.delta_r == Approx(6.44e-3).epsilon(1e-3));
    CHECK(ring.delta_r < ring.r0);
    CHECK_THROWS_AS(ring_from_params(kSetB.with_theta0(0.0), kZ), NoRingError);
    CHECK_THROWS_AS(ring_from_params(kSetB, 0.0), DomainError);
}

TEST_CASE("chord lengths") {
    const RingGeometry ring = ring_from_params(kSetB, kZ);
    CHECK(chord_length(0.0, ring) == Approx(2.0 * ring.delta_r).epsilon(1e-12));
    CHECK(chord_length(ring.outer() + 1e-9, ring) == 0.0);
    CHECK(chord_length(-20.0, ring) == 0.0);
    CHECK(chord_length(ring.inner(), ring) == Approx(2.0 * std::sqrt(ring.outer() * ring.outer() - ring.inner() * ring.inner())));
    CHECK(chord_length(ring.inner(), ring) > 10.0 * chord_length(0.0, ring));
    CHECK(chord_length(3.0, ring) == chord_length(-3.0, ring));
}

TEST_CASE("strips tile the annulus") {
    const RingGeometry ring = ring_from_params(kSetB, kZ);
    const Grid g = Grid::uniform(-12.0, 12.0, 241);
    const double h = g.points[1] - g.points[0];
    double total = 0.0;
    for (double x : g.points) total += strip_area(x, h, ring);
    CHECK(total == Approx(ring.area()).epsilon(1e-12));
    CHECK(strip_area(2.0, 1e-4, ring) == Approx(1e-4 * chord_length(2.0, ring)).epsilon(1e-6));
    const ScanResult s = scan_single(ring, g, h, 1000.0);
    CHECK(s.total() == Approx(1000.0).epsilon(1e-12));
    for (double c : s.counts) CHECK(c >= 0.0);
}

TEST_CASE("radial sampler table") {
    const RadialSampler sampler(kSetA);
    CHECK(sampler.u_max() == Approx(4.0 * kSetA.sinc_scale() * 0.28 * 0.28));
    CHECK(std::abs(std::remainder(sampler.u_min(), kPi)) < 1e-9);
    CHECK(sampler.tail_probability() > 0.0);
    CHECK(sampler.tail_probability() < 1e-3);
    // cumulative law against direct quadrature of sinc^2 from the lower table edge
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double lo = sampler.u_min();
    const double hi = sampler.u_max();
    const double total = GK::integrate(sinc_squared, lo, hi, 20, 1e-13);
    for (double u : {-100.0, -3.0, 0.0, 2.5, 100.0, 500.0}) {
        if (u >= hi) continue;
        const double part = GK::integrate(sinc_squared, lo, u, 20, 1e-13);
        const double expected = sampler.tail_probability() + (1.0 - sampler.tail_probability()) * part / total;
        CHECK(std::abs(sampler.cdf(u) - expected) < 1e-5);
    }
    // above the tail branch |k-| falls as the uniform rises
    double prev = std::numeric_limits<double>::infinity();
    for (double v = sampler.tail_probability() + 1e-9; v < 1.0; v += 0.01) {
        const double k = sampler.sample(v, 0.5);
        CHECK(k >= 0.0);
        CHECK(k <= prev);
        prev = k;
    }
}

TEST_CASE("pair sampling is deterministic") {
    const PairSet a = sample_pairs(kSetB, 5000, 42, kZ);
    const PairSet b = sample_pairs(kSetB, 5000, 42, kZ);
    SamplerOptions one_thread;
    one_thread.threads = 1;
    const PairSet c = sample_pairs(kSetB, 5000, 42, kZ, one_thread);
    const PairSet d = sample_pairs(kSetB, 5000, 43, kZ);
    REQUIRE(a.pairs.size() == 5000);
    bool same = true, same_threads = true, differs = false;
    for (std::size_t i = 0; i < 5000; ++i) {
        same = same && a.pairs[i].x1 == b.pairs[i].x1 && a.pairs[i].y2 == b.pairs[i].y2;
        same_threads = same_threads && a.pairs[i].x1 == c.pairs[i].x1 && a.pairs[i].y2 == c.pairs[i].y2;
        differs = differs || a.pairs[i].x1 != d.pairs[i].x1;
    }
    CHECK(same);
    CHECK(same_threads);
    CHECK(differs);
    CHECK(a.seed == 42);
    CHECK(a.shards == 4);
    CHECK_THROWS_AS(sample_pairs(kSetB, 0, 1, kZ), DomainError);
}

TEST_CASE("sampled pairs follow the reduced distribution") {
    const PairSet s = sample_pairs(kSetB, 400000, 7, kZ);
    const RingGeometry ring = ring_from_params(kSetB, kZ);

    SUBCASE("photons land on the ring") {
        // radial half-width of the sinc main lobe: |u| < pi at kappa- = 2 theta0
        const double lobe = kZ * kPi / (8.0 * kSetB.sinc_scale() * kSetB.theta0());
        std::size_t near = 0;
        for (const auto& p : s.pairs) {
            if (std::abs(std::hypot(p.x1, p.y1) - ring.r0) < 3.0 * lobe) ++near;
        }
        CHECK(static_cast<double>(near) / s.pairs.size() > 0.5);
    }
    SUBCASE("x1 + x2 has the Gaussian pump width") {
        double s2 = 0.0;
        for (const auto& p : s.pairs) s2 += (p.x1 + p.x2) * (p.x1 + p.x2);
        const double rms = std::sqrt(s2 / s.pairs.size());
        // exp(-w^2 k+^2) has rms 1/(sqrt(2) w) per component
        const double expected = kZ * kSetB.lambda_p_cm() / (std::sqrt(2.0) * kSetB.waist() * kPi);
        CHECK(rms == Approx(expected).epsilon(0.01));
    }
    SUBCASE("x1 - x2 follows F") {
        const Grid g = Grid::uniform(-0.3, 0.3, 121);
        const double h = g.points[1] - g.points[0];
        std::vector<double> counts(g.size(), 0.0);
        for (const auto& p : s.pairs) {
            const double k = (p.x1 - p.x2) / kZ;
            const double pos = std::floor((k - g.points.front()) / h + 0.5);
            if (pos >= 0 && pos < static_cast<double>(g.size())) counts[static_cast<std::size_t>(pos)] += 1.0;
        }
        // expected fraction per bin from F integrated over the bin
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        std::vector<double> expect(g.size());
        double norm = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            expect[i] = GK::integrate([&](double k) { return f_exact(kSetB.wavenumber(k), kSetB); },
                                      g.points[i] - 0.5 * h, g.points[i] + 0.5 * h, 3, 1e-6);
            norm += expect[i];
        }
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        double chi2 = 0.0;
        int dof = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double e = expect[i] / norm * total;
            if (e < 20.0) continue;
            chi2 += (counts[i] - e) * (counts[i] - e) / e;
            ++dof;
        }
        CHECK(chi2 / dof < 1.5);
    }
}

TEST_CASE("Monte-Carlo single scan matches the analytic scan") {
    const RingGeometry ring = ring_from_params(kSetA, kZ);
    const Grid kg = Grid::uniform(-1.5 * 0.28, 1.5 * 0.28, 601);
    const Grid pos = position_grid(kg, kZ);
    const double h = pos.points[1] - pos.points[0];
    const ScanResult analytic = scan_single(ring, pos, h, 1.0);
    const PairSet s = sample_pairs(kSetA, 1000000, 2016, kZ);
    const ScanResult mc = scan_single(s, pos);
    CHECK(mc.pairs_sampled == 1000000);
    CHECK(mc.line_width == Approx(h));
    const Agreement a = agreement(analytic, mc, 0.28, 0.002);
    CHECK(a.within >= 0.99);
    CHECK(a.chi2_dof < 1.3);

    SUBCASE("left-right symmetry") {
        double chi2 = 0.0;
        int n = 0;
        for (std::size_t i = 0; i < pos.size() / 2; ++i) {
            const double l = mc.counts[i], r = mc.counts[pos.size() - 1 - i];
            if (l + r < 40.0) continue;
            chi2 += (l - r) * (l - r) / (l + r);
            ++n;
        }
        CHECK(chi2 / n < 1.3);
    }
    SUBCASE("rotating the azimuth origin changes nothing statistically") {
        SamplerOptions rotated;
        rotated.azimuth_offset = 1.234;
        const ScanResult other = scan_single(sample_pairs(kSetA, 1000000, 99, kZ, rotated), pos);
        double chi2 = 0.0;
        int n = 0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const double l = mc.counts[i], r = other.counts[i];
            if (l + r < 40.0) continue;
            chi2 += (l - r) * (l - r) / (l + r);
            ++n;
        }
        CHECK(chi2 / n < 1.3);
    }
}

TEST_CASE("Monte-Carlo error shrinks as 1/sqrt(n)") {
    const RingGeometry ring = ring_from_params(kSetA, kZ);
    const Grid kg = Grid::uniform(-0.2, 0.2, 201);  // plateau only
    const Grid pos = position_grid(kg, kZ);
    const ScanResult analytic = scan_single(ring, pos, pos.points[1] - pos.points[0], 1.0);
    const auto rel_error = [&](std::size_t n, std::uint64_t seed) {
        const ScanResult mc = scan_single(sample_pairs(kSetA, n, seed, kZ), pos);
        const double photons = 2.0 * static_cast<double>(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const double e = analytic.counts[i] * photons;
            const double d = (mc.counts[i] - e) / e;
            sum += d * d;
        }
        return std::sqrt(sum / pos.size());
    };
    const double e1 = rel_error(100000, 11);
    const double e4 = rel_error(400000, 12);
    // quadrupling n halves the error; the spread of an rms over 201 lines is ~5%
    CHECK(e1 / e4 == Approx(2.0).epsilon(0.15));
}

TEST_CASE("coincidence scan") {
    const RingGeometry ring = ring_from_params(kSetB, kZ);
    const PairSet s = sample_pairs(kSetB, 4000000, 5, kZ);
    const double d2 = ring.r0;
    const Grid g = coincidence_scan_grid(ring, d2);
    const double step = g.points[1] - g.points[0];
    const ScanResult c = scan_coincidence(s, ring, d2, 0.5 * ring.delta_r, g);
    REQUIRE_FALSE(c.empty);
    CHECK(c.mode == ScanMode::coincidence);
    CHECK(c.d2_position.value() == d2);
    const Curve d = c.density();
    CHECK(std::abs(d.x()[d.argmax()] + d2) <= step);
    // partner spread: pump Gaussian (rms 1/(sqrt(2) w)) plus the slit width
    const double sigma_plus = kZ * kSetB.lambda_p_cm() / (std::sqrt(2.0) * kSetB.waist() * kPi);
    const double slit = 0.5 * ring.delta_r;
    CHECK(d.rms_central() == Approx(std::sqrt(sigma_plus * sigma_plus + slit * slit / 12.0)).epsilon(0.05));

    SUBCASE("argmax follows D2 around the ring") {
        const double x = -0.6 * ring.r0;
        const Grid g2 = coincidence_scan_grid(ring, x);
        const Curve d3 = scan_coincidence(s, ring, x, 0.5 * ring.delta_r, g2).density();
        CHECK(std::abs(d3.x()[d3.argmax()] - 0.6 * ring.r0) <= g2.points[1] - g2.points[0]);
    }
    SUBCASE("nothing captured") {
        const PairSet few = sample_pairs(kSetB, 1, 5, kZ);
        const ScanResult e = scan_coincidence(few, ring, 0.0, 1e-9, g);
        CHECK(e.empty);
        CHECK(e.total() == 0.0);
    }
    SUBCASE("invalid detector settings") {
        CHECK_THROWS_AS(scan_coincidence(s, ring, 2.0 * ring.r0, 0.001, g), DomainError);
        CHECK_THROWS_AS(scan_coincidence(s, ring, d2, 0.0, g), DomainError);
    }
}

TEST_CASE("scan tables carry the run metadata") {
    const RingGeometry ring = ring_from_params(kSetB, kZ);
    const PairSet s = sample_pairs(kSetB, 1000, 77, kZ);
    const Grid g = coincidence_scan_grid(ring, ring.r0);
    const Table t = scan_table(scan_coincidence(s, ring, ring.r0, ring.delta_r, g), "c", {{"z_cm", "100"}});
    CHECK(t.find("seed").value() == "77");
    CHECK(t.find("pairs_sampled").value() == "1000");
    CHECK(t.find("mode").value() == "coincidence");
    CHECK(t.find("d2_position").has_value());
    CHECK(t.find("z_cm").value() == "100");
    CHECK(t.columns.size() == 2);
}

}  // TEST_SUITE
