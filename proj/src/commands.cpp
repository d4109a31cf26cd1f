#include "biphoton/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "biphoton/crystal.hpp"
#include "biphoton/distributions.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/parallel.hpp"
#include "biphoton/ring_scan.hpp"

namespace biphoton {

namespace {

std::string number(double v, int precision = 10) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

void write(CommandResult& result, const RunConfig& cfg, const std::string& file,
           const Table& table) {
    std::filesystem::create_directories(cfg.out);
    const auto path = cfg.out / file;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_table(out, table);
    if (!out) throw Error("write failed: " + path.string());
    result.files.push_back(path);
}

void write_text(CommandResult& result, const RunConfig& cfg, const std::string& file,
                const std::string& text) {
    std::filesystem::create_directories(cfg.out);
    const auto path = cfg.out / file;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    result.files.push_back(path);
}

Curve with_axis_scale(const Curve& c, double factor, Axis axis) {
    std::vector<double> x = c.x();
    for (double& v : x) v *= factor;
    return Curve(std::move(x), c.y(), axis, c.normalization());
}

std::string ring_text(const RingGeometry& ring) {
    std::ostringstream out;
    out.precision(10);
    out << "z_cm = " << ring.z << '\n'
        << "r0_cm = " << ring.r0 << '\n'
        << "delta_r_cm = " << ring.delta_r << '\n'
        << "# delta_r = z * width_coincidence * lambda_p / pi; the often quoted 0.016 cm for\n"
        << "# z = 1 m, theta0 = 0.1, w = 0.1 cm is not reproduced by this formula\n";
    return out.str();
}

}  // namespace

CommandResult cmd_dispersion(const RunConfig& cfg) {
    const ResolvedRun run = resolve(cfg);
    const CrystalDispersion& disp = run.crystal;
    CommandResult result;
    Header params = config_header(cfg, run);

    double root = 0.0;
    try {
        root = collinear_cut_angle(disp, cfg.lambda_p);
    } catch (const NoSolutionError& e) {
        throw ConfigError(e.what());
    }
    params.emplace_back("collinear_cut_angle_rad", number(root, 12));

    Table mismatch;
    mismatch.header = params;
    mismatch.header.insert(mismatch.header.begin(), {"table", "dispersion"});
    mismatch.columns = {"phi0_rad", "n_p", "n_o_signal", "delta_n", "delta0_cm-1", "theta0_rad"};
    constexpr int kSteps = 1200;
    for (int i = 0; i <= kSteps; ++i) {
        const double phi0 = 1.2 * i / kSteps;
        const PhaseMatchResult pm = phase_match(disp, {phi0, cfg.lambda_p});
        mismatch.rows.push_back({phi0, pm.n_p, pm.n_o_signal, pm.delta_n, pm.delta0,
                                 pm.theta0.value_or(0.0)});
    }
    write(result, cfg, "dispersion.csv", mismatch);

    Table fit;
    fit.header = params;
    fit.header.insert(fit.header.begin(), {"table", "opening_angle_fit"});
    fit.columns = {"phi0_rad", "theta0_exact_rad", "theta0_fit_rad", "relative_residual"};
    double worst = 0.0;
    for (int i = 0; i <= 690; ++i) {
        const double phi0 = 0.51 + 0.001 * i;
        const double exact = phase_match(disp, {phi0, cfg.lambda_p}).theta0.value_or(0.0);
        const double approx = opening_angle_fit(phi0);
        const double residual = exact > 0.0 ? (approx - exact) / exact : 0.0;
        worst = std::max(worst, std::abs(residual));
        fit.rows.push_back({phi0, exact, approx, residual});
    }
    write(result, cfg, "opening_angle_fit.csv", fit);

    std::ostringstream s;
    s << "collinear_cut_angle_rad = " << number(root, 12) << '\n'
      << "max_fit_relative_residual = " << number(worst, 6) << '\n';
    for (double phi0 : {0.5275, 0.7}) {
        const PhaseMatchResult pm = phase_match(disp, {phi0, cfg.lambda_p});
        s << "theta0(" << phi0 << ") = " << number(pm.theta0.value_or(0.0), 8) << '\n';
    }
    result.summary = s.str();
    return result;
}

CommandResult cmd_fcurve(const RunConfig& cfg) {
    const ResolvedRun run = resolve(cfg);
    const SpdcParams& p = run.params;
    CommandResult result;
    const Header params = config_header(cfg, run);

    // F(kappa-) is the single-particle curve at kappa1 = kappa- / 2
    const auto emit = [&](const Grid& half_grid, const std::string& name) {
        const Curve exact = single_particle_curve(half_grid, p, FModel::exact, {}, cfg.threads)
                                .normalized(cfg.normalize);
        const Curve approx = single_particle_curve(half_grid, p, FModel::approx, {}, cfg.threads)
                                 .normalized(cfg.normalize);
        Table t;
        t.header = {{"curve", name}, {"axis", "kappa_minus"},
                    {"normalization", to_string(cfg.normalize)}};
        t.header.insert(t.header.end(), params.begin(), params.end());
        t.columns = {"kappa_minus", "f_exact", "f_approx"};
        for (std::size_t i = 0; i < half_grid.size(); ++i) {
            t.rows.push_back({2.0 * half_grid.points[i], exact.y()[i], approx.y()[i]});
        }
        write(result, cfg, name + ".csv", t);
    };

    emit(default_grid(p, cfg.grid), "fcurve");
    if (p.theta0() > 0.0) {
        const double edge = 2.0 * p.theta0();
        emit(Grid::uniform(0.5 * (edge - 0.01), 0.5 * (edge + 0.004), cfg.grid), "fcurve_zoom");
    }
    result.summary = "F(kappa-) written for theta0 = " + number(p.theta0(), 8) + "\n";
    return result;
}

CommandResult cmd_distributions(const RunConfig& cfg) {
    const ResolvedRun run = resolve(cfg);
    const SpdcParams& p = run.params;
    CommandResult result;
    const Header params = config_header(cfg, run);
    const Grid grid = default_grid(p, cfg.grid);

    const Curve single = single_particle_curve(grid, p, FModel::exact, {}, cfg.threads);
    write(result, cfg, "single_particle.csv",
          curve_table(single.normalized(cfg.normalize), "single_particle_exact", params));
    const Curve single_approx = single_particle_curve(grid, p, FModel::approx, {}, cfg.threads);
    write(result, cfg, "single_particle_approx.csv",
          curve_table(single_approx.normalized(cfg.normalize), "single_particle_approx", params));

    Header coinc_params = params;
    coinc_params.emplace_back("k2x_cm-1", number(cfg.k2x, 17));
    const Curve coinc = coincidence_curve(cfg.k2x, coincidence_grid(cfg.k2x, p, cfg.grid), p);
    write(result, cfg, "coincidence.csv",
          curve_table(coinc.normalized(cfg.normalize), "coincidence", coinc_params));

    const Curve plane = plane_restricted_curve(grid, p, cfg.threads);
    write(result, cfg, "plane_restricted.csv",
          curve_table(plane.normalized(cfg.normalize), "plane_restricted", params));

    EntanglementReport report = entanglement_report(p);
    const Curve single_k = with_axis_scale(single, kPi / p.lambda_p_cm(), Axis::wavenumber);
    report.fwhm_single = single_k.fwhm();
    std::string text = format_report(report, p);
    text += "measured_rms_single_cm-1 = " + number(single_k.rms()) + '\n';
    text += "measured_rms_coincidence_cm-1 = " + number(coinc.rms_central()) + '\n';
    write_text(result, cfg, "report.txt", text);

    if (cfg.sweep) {
        const double thetas[] = {0.04, 0.02, 0.0};
        std::vector<Curve> curves(3);
        parallel_for(
            3,
            [&](std::size_t i) {
                const SpdcParams q = p.with_theta0(thetas[i]);
                curves[i] = single_particle_curve(default_grid(q, cfg.grid), q, FModel::exact, {}, 1)
                                .normalized(cfg.normalize);
            },
            cfg.threads);
        for (std::size_t i = 0; i < 3; ++i) {
            Header h = params;
            h.emplace_back("sweep_theta0_rad", number(thetas[i]));
            write(result, cfg, "sweep_theta0_" + number(thetas[i]) + ".csv",
                  curve_table(curves[i], "single_particle_sweep", h));
        }
    }
    result.summary = text;
    return result;
}

CommandResult cmd_scan(const RunConfig& cfg) {
    const ResolvedRun run = resolve(cfg);
    const SpdcParams& p = run.params;
    if (p.theta0() == 0.0) throw ConfigError("scan needs a noncollinear configuration (theta0 > 0)");
    CommandResult result;
    Header params = config_header(cfg, run);
    params.emplace_back("pairs", std::to_string(cfg.pairs));
    params.emplace_back("scan_lines", std::to_string(cfg.scan_lines));

    const RingGeometry ring = ring_from_params(p, cfg.z);
    write_text(result, cfg, "ring.txt", ring_text(ring));

    const Grid kappa_grid = Grid::uniform(-1.5 * p.theta0(), 1.5 * p.theta0(), cfg.scan_lines);
    const Grid positions = position_grid(kappa_grid, cfg.z);
    const double line_width = positions.points[1] - positions.points[0];

    const ScanResult analytic = scan_single(ring, positions, line_width, 2.0 * static_cast<double>(cfg.pairs));
    SamplerOptions opt;
    opt.threads = cfg.threads;
    const PairSet pairs = sample_pairs(p, cfg.pairs, cfg.seed, cfg.z, opt);
    const ScanResult mc = scan_single(pairs, positions);
    write(result, cfg, "scan_single_analytic.csv", scan_table(analytic, "single_analytic", params));
    write(result, cfg, "scan_single_mc.csv", scan_table(mc, "single_monte_carlo", params));

    // The analytic scan is the thin-ring picture, so the matching theory is
    // the delta-function single-particle curve.
    const Curve theory = single_particle_curve(kappa_grid, p, FModel::approx, {}, cfg.threads);
    const ScanComparison cmp = compare_single_scans(theory, analytic, mc, cfg.z, p.theta0());
    Header cmp_params = params;
    cmp_params.emplace_back("theory_model", "f_approx");
    write(result, cfg, "scan_comparison.csv", comparison_table(cmp, cmp_params));

    const double d2 = ring.r0;
    const double slit = cfg.slit_width.value_or(0.5 * ring.delta_r);
    const ScanResult coinc =
        scan_coincidence(pairs, ring, d2, slit, coincidence_scan_grid(ring, d2));
    write(result, cfg, "scan_coincidence.csv", scan_table(coinc, "coincidence_monte_carlo", params));

    std::ostringstream s;
    s << ring_text(ring)
      << "sup_theory_analytic = " << number(cmp.sup_theory_analytic, 6) << '\n'
      << "sup_theory_monte_carlo = " << number(cmp.sup_theory_mc, 6) << '\n'
      << "sup_analytic_monte_carlo = " << number(cmp.sup_analytic_mc, 6) << '\n'
      << "coincidences = " << coinc.total() << '\n';
    if (!coinc.empty) {
        const Curve d = coinc.density();
        s << "coincidence_argmax_cm = " << number(d.x()[d.argmax()]) << '\n'
          << "coincidence_rms_cm = " << number(d.rms_central()) << '\n'
          << "single_rms_cm = " << number(mc.density().rms()) << '\n';
    }
    result.summary = s.str();
    return result;
}

CommandResult cmd_report(const RunConfig& cfg) {
    const ResolvedRun run = resolve(cfg);
    const SpdcParams& p = run.params;
    CommandResult result;
    result.summary = format_report(entanglement_report(p), p);
    if (p.theta0() > 0.0) {
        try {
            result.summary += ring_text(ring_from_params(p, cfg.z));
        } catch (const NoRingError& e) {
            result.summary += std::string("# ") + e.what() + '\n';
        }
    }
    return result;
}

}  // namespace biphoton
