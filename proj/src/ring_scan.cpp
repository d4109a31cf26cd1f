#include "biphoton/ring_scan.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "biphoton/distributions.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/parallel.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton {

double RingGeometry::area() const noexcept {
    return kPi * (outer() * outer() - inner() * inner());
}

RingGeometry ring_from_params(const SpdcParams& p, double z) {
    if (!(z > 0.0)) throw DomainError("ring_from_params: z must be positive");
    if (p.theta0() == 0.0) throw NoRingError("ring_from_params: collinear emission has no ring");
    RingGeometry ring;
    ring.z = z;
    ring.r0 = z * p.theta0();
    ring.delta_r = z * width_coincidence(p) * p.lambda_p_cm() / kPi;
    if (!(ring.delta_r < ring.r0)) {
        throw NoRingError("ring_from_params: ring thickness exceeds its radius");
    }
    return ring;
}

namespace {

double half_chord(double radius, double x) noexcept {
    return std::sqrt(std::max(0.0, radius * radius - x * x));
}

// integral_a^b 2 sqrt(R^2 - x^2) dx with the limits clipped to the disc
double disc_strip(double radius, double a, double b) noexcept {
    const auto G = [radius](double x) {
        x = std::clamp(x, -radius, radius);
        return x * half_chord(radius, x) + radius * radius * std::asin(x / radius);
    };
    return G(b) - G(a);
}

}  // namespace

double chord_length(double x_offset, const RingGeometry& ring) noexcept {
    return 2.0 * (half_chord(ring.outer(), x_offset) - half_chord(ring.inner(), x_offset));
}

double strip_area(double x_center, double width, const RingGeometry& ring) noexcept {
    const double a = x_center - 0.5 * width;
    const double b = x_center + 0.5 * width;
    return disc_strip(ring.outer(), a, b) - disc_strip(ring.inner(), a, b);
}

RadialSampler::RadialSampler(const SpdcParams& p, std::size_t knots_per_lobe)
    : scale_(p.sinc_scale()), theta0_(p.theta0()) {
    if (knots_per_lobe < 1) throw DomainError("RadialSampler needs at least one knot per lobe");
    u_max_ = 4.0 * scale_ * theta0_ * theta0_;
    u_min_ = -1024.0 * kPi;  // on a lobe boundary
    const auto cells = static_cast<std::size_t>(
        std::ceil((u_max_ - u_min_) / kPi * static_cast<double>(knots_per_lobe)));
    const std::size_t knots = cells + 1;
    du_ = (u_max_ - u_min_) / static_cast<double>(cells);

    cumulative_.resize(knots);
    cumulative_[0] = 0.0;
    for (std::size_t i = 1; i < knots; ++i) {
        const double a = u_min_ + du_ * static_cast<double>(i - 1);
        const double b = i + 1 == knots ? u_max_ : u_min_ + du_ * static_cast<double>(i);
        cumulative_[i] = cumulative_[i - 1] + quad::gauss_kronrod15(sinc_squared, a, b).value;
    }
    // integral of sin^2 u / u^2 beyond |u_min| on a lobe boundary is 1/(2|u_min|) + O(|u_min|^-3)
    const double tail = 1.0 / (2.0 * -u_min_);
    tail_probability_ = tail / (tail + cumulative_.back());
}

double RadialSampler::kappa_of_u(double u) const noexcept {
    return std::sqrt(std::max(0.0, 4.0 * theta0_ * theta0_ - u / scale_));
}

double RadialSampler::sample(double v_select, double v_tail) const noexcept {
    if (v_select < tail_probability_) {
        // density proportional to 1/u^2 on (-inf, u_min]
        return kappa_of_u(u_min_ / (1.0 - v_tail));
    }
    const double target =
        (v_select - tail_probability_) / (1.0 - tail_probability_) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) return kappa_of_u(u_max_);
    const auto i = static_cast<std::size_t>(it - cumulative_.begin());  // i >= 1
    const double lo = cumulative_[i - 1];
    const double t = (target - lo) / (cumulative_[i] - lo);
    return kappa_of_u(u_min_ + du_ * (static_cast<double>(i - 1) + t));
}

double RadialSampler::cdf(double u) const noexcept {
    const double total = cumulative_.back();
    if (u <= u_min_) return tail_probability_;
    if (u >= u_max_) return 1.0;
    const double pos = (u - u_min_) / du_;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    const double c = cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]);
    return tail_probability_ + (1.0 - tail_probability_) * c / total;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// 53-bit uniform in [0, 1); independent of the standard library's
// distribution implementations so streams are portable.
double uniform01(std::mt19937_64& gen) noexcept {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

PairSet sample_pairs(const SpdcParams& p, std::size_t n, std::uint64_t seed, double z,
                     const SamplerOptions& opt) {
    if (n == 0) throw DomainError("sample_pairs: n must be positive");
    if (!(z > 0.0)) throw DomainError("sample_pairs: z must be positive");
    const std::size_t shards = std::max<std::size_t>(1, opt.shards);
    const RadialSampler radial(p, opt.knots_per_lobe);
    const double sigma_plus = 1.0 / (kSqrt2 * p.waist());  // per component of k+, cm^-1

    PairSet out;
    out.seed = seed;
    out.shards = shards;
    out.z = z;
    out.pairs.resize(n);
    parallel_for(
        shards,
        [&](std::size_t shard) {
            const std::size_t begin = n * shard / shards;
            const std::size_t end = n * (shard + 1) / shards;
            std::mt19937_64 gen(splitmix64(seed ^ splitmix64(shard)));
            for (std::size_t i = begin; i < end; ++i) {
                const double v_select = uniform01(gen);
                const double v_tail = uniform01(gen);
                const double v_phi = uniform01(gen);
                const double v_r = 1.0 - uniform01(gen);
                const double v_a = uniform01(gen);

                const double rho = radial.sample(v_select, v_tail);
                const double phi = 2.0 * kPi * v_phi + opt.azimuth_offset;
                const double kmx = rho * std::cos(phi);
                const double kmy = rho * std::sin(phi);

                const double g = sigma_plus * std::sqrt(-2.0 * std::log(v_r));
                const double kpx = p.kappa(g * std::cos(2.0 * kPi * v_a));
                const double kpy = p.kappa(g * std::sin(2.0 * kPi * v_a));

                PairSample& s = out.pairs[i];
                s.x1 = z * 0.5 * (kpx + kmx);
                s.y1 = z * 0.5 * (kpy + kmy);
                s.x2 = z * 0.5 * (kpx - kmx);
                s.y2 = z * 0.5 * (kpy - kmy);
            }
        },
        opt.threads);
    return out;
}

const char* to_string(ScanMode m) noexcept {
    return m == ScanMode::single ? "single" : "coincidence";
}

const char* to_string(ScanSource s) noexcept {
    return s == ScanSource::analytic ? "analytic" : "monte_carlo";
}

double ScanResult::total() const noexcept {
    double s = 0.0;
    for (double c : counts) s += c;
    return s;
}

Curve ScanResult::density() const {
    const double t = total();
    const double norm = t > 0.0 && line_width > 0.0 ? 1.0 / (t * line_width) : 0.0;
    std::vector<double> y(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) y[i] = counts[i] * norm;
    return Curve(positions, std::move(y), Axis::position,
                 norm > 0.0 ? Normalization::area : Normalization::raw);
}

Curve ScanResult::density_kappa(double z) const {
    const Curve d = density();
    std::vector<double> x(positions.size());
    std::vector<double> y(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        x[i] = positions[i] / z;
        y[i] = d.y()[i] * z;
    }
    return Curve(std::move(x), std::move(y), Axis::kappa, d.normalization());
}

namespace {

double uniform_spacing(const Grid& g) {
    if (g.size() < 2) throw DomainError("scan grid needs at least two lines");
    const double h = (g.points.back() - g.points.front()) / static_cast<double>(g.size() - 1);
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (std::abs(g.points[i] - g.points[i - 1] - h) > 1e-9 * std::abs(h) + 1e-12) {
            throw DomainError("scan grid must be uniform");
        }
    }
    return h;
}

// Index of the line whose strip [x_i - h/2, x_i + h/2) holds x, or npos.
std::size_t line_index(double x, double x0, double h, std::size_t n) noexcept {
    const double pos = std::floor((x - x0) / h + 0.5);
    if (pos < 0.0 || pos >= static_cast<double>(n)) return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(pos);
}

}  // namespace

ScanResult scan_single(const RingGeometry& ring, const Grid& positions, double line_width,
                       double photons) {
    ScanResult r;
    r.positions = positions.points;
    r.counts.resize(positions.size());
    r.mode = ScanMode::single;
    r.source = ScanSource::analytic;
    r.line_width = line_width;
    const double density = photons / ring.area();
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const double x = positions.points[i];
        r.counts[i] = density * (line_width > 0.0 ? strip_area(x, line_width, ring)
                                                  : chord_length(x, ring));
    }
    return r;
}

ScanResult scan_single(const PairSet& samples, const Grid& positions) {
    const double h = uniform_spacing(positions);
    const std::size_t n = positions.size();
    const double x0 = positions.points.front();
    ScanResult r;
    r.positions = positions.points;
    r.counts.assign(n, 0.0);
    r.mode = ScanMode::single;
    r.source = ScanSource::monte_carlo;
    r.line_width = h;
    r.pairs_sampled = samples.pairs.size();
    r.seed = samples.seed;
    for (const PairSample& s : samples.pairs) {
        if (const auto i = line_index(s.x1, x0, h, n); i < n) r.counts[i] += 1.0;
        if (const auto i = line_index(s.x2, x0, h, n); i < n) r.counts[i] += 1.0;
    }
    return r;
}

ScanResult scan_coincidence(const PairSet& samples, const RingGeometry& ring, double d2_x,
                            double slit_width, const Grid& positions) {
    if (std::abs(d2_x) > ring.outer()) {
        std::ostringstream msg;
        msg << "scan_coincidence: D2 at x = " << d2_x << " cm is off the ring (outer radius "
            << ring.outer() << " cm)";
        throw DomainError(msg.str());
    }
    if (!(slit_width > 0.0)) throw DomainError("scan_coincidence: slit width must be positive");
    const double h = uniform_spacing(positions);
    const std::size_t n = positions.size();
    const double x0 = positions.points.front();
    ScanResult r;
    r.positions = positions.points;
    r.counts.assign(n, 0.0);
    r.mode = ScanMode::coincidence;
    r.source = ScanSource::monte_carlo;
    r.line_width = h;
    r.pairs_sampled = samples.pairs.size();
    r.seed = samples.seed;
    r.d2_position = d2_x;
    r.slit_width = slit_width;
    const auto in_slit = [&](double x) { return std::abs(x - d2_x) <= 0.5 * slit_width; };
    for (const PairSample& s : samples.pairs) {
        if (in_slit(s.x2)) {
            if (const auto i = line_index(s.x1, x0, h, n); i < n) r.counts[i] += 1.0;
        }
        if (in_slit(s.x1)) {
            if (const auto i = line_index(s.x2, x0, h, n); i < n) r.counts[i] += 1.0;
        }
    }
    r.empty = r.total() == 0.0;
    return r;
}

Grid position_grid(const Grid& kappa_grid, double z) {
    Grid g;
    g.axis = Axis::position;
    g.points.reserve(kappa_grid.size());
    for (double k : kappa_grid.points) g.points.push_back(z * k);
    return g;
}

Grid coincidence_scan_grid(const RingGeometry& ring, double d2_x, std::size_t lines) {
    const double half = 0.25 * ring.delta_r * static_cast<double>(lines - 1);
    return Grid::uniform(-d2_x - half, -d2_x + half, lines, Axis::position);
}

ScanComparison compare_single_scans(const Curve& theory, const ScanResult& analytic,
                                    const ScanResult& monte_carlo, double z, double theta0,
                                    double exclusion) {
    const std::size_t n = theory.size();
    if (analytic.positions.size() != n || monte_carlo.positions.size() != n) {
        throw DomainError("compare_single_scans: curves are on different grids");
    }
    ScanComparison c;
    c.kappa = theory.x();
    c.theory = theory.normalized(Normalization::area).y();
    c.analytic = analytic.density_kappa(z).y();
    c.monte_carlo = monte_carlo.density_kappa(z).y();
    c.included.resize(n);
    const double half_line = 0.5 * analytic.line_width / z;
    double ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(std::abs(c.kappa[i]) - theta0);
        c.included[i] = d >= exclusion + half_line;
        if (c.included[i]) ref = std::max(ref, c.theory[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!c.included[i]) continue;
        c.sup_theory_analytic = std::max(c.sup_theory_analytic, std::abs(c.theory[i] - c.analytic[i]));
        c.sup_theory_mc = std::max(c.sup_theory_mc, std::abs(c.theory[i] - c.monte_carlo[i]));
        c.sup_analytic_mc = std::max(c.sup_analytic_mc, std::abs(c.analytic[i] - c.monte_carlo[i]));
    }
    if (ref > 0.0) {
        c.sup_theory_analytic /= ref;
        c.sup_theory_mc /= ref;
        c.sup_analytic_mc /= ref;
    }
    return c;
}

Table scan_table(const ScanResult& r, const std::string& name, Header params) {
    Table t;
    t.header.emplace_back("scan", name);
    t.header.emplace_back("mode", to_string(r.mode));
    t.header.emplace_back("source", to_string(r.source));
    t.header.emplace_back("seed", std::to_string(r.seed));
    t.header.emplace_back("pairs_sampled", std::to_string(r.pairs_sampled));
    std::ostringstream fmt;
    fmt.precision(17);
    fmt << r.line_width;
    t.header.emplace_back("line_width_cm", fmt.str());
    if (r.d2_position) {
        fmt.str("");
        fmt << *r.d2_position;
        t.header.emplace_back("d2_position", fmt.str());
    } else {
        t.header.emplace_back("d2_position", "none");
    }
    if (r.slit_width) {
        fmt.str("");
        fmt << *r.slit_width;
        t.header.emplace_back("slit_width_cm", fmt.str());
    }
    t.header.emplace_back("empty", r.empty ? "true" : "false");
    for (auto& kv : params) t.header.push_back(std::move(kv));
    t.columns = {"position_cm", "counts"};
    for (std::size_t i = 0; i < r.positions.size(); ++i) t.rows.push_back({r.positions[i], r.counts[i]});
    return t;
}

Table comparison_table(const ScanComparison& c, Header params) {
    Table t;
    t.header.emplace_back("table", "single_scan_comparison");
    t.header.emplace_back("normalization", "area");
    const auto put = [&t](const char* key, double v) {
        std::ostringstream s;
        s.precision(6);
        s << v;
        t.header.emplace_back(key, s.str());
    };
    put("sup_theory_analytic", c.sup_theory_analytic);
    put("sup_theory_monte_carlo", c.sup_theory_mc);
    put("sup_analytic_monte_carlo", c.sup_analytic_mc);
    for (auto& kv : params) t.header.push_back(std::move(kv));
    t.columns = {"kappa", "theory", "analytic", "monte_carlo", "included"};
    for (std::size_t i = 0; i < c.kappa.size(); ++i) {
        t.rows.push_back({c.kappa[i], c.theory[i], c.analytic[i], c.monte_carlo[i],
                          c.included[i] ? 1.0 : 0.0});
    }
    return t;
}

}  // namespace biphoton
