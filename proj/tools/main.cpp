// biphoton command-line front end.
//
// Exit status: 0 success, 2 configuration error, 3 numerical accuracy
// failure, 1 anything else.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "biphoton/commands.hpp"
#include "biphoton/errors.hpp"

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> crystal;
    std::optional<double> lambda_p;
    std::optional<double> phi0;
    std::optional<double> theta0;
    std::optional<double> waist;
    std::optional<double> length;
    std::optional<double> z;
    std::optional<std::size_t> grid;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> normalize;
    std::optional<std::size_t> pairs;
    std::optional<std::size_t> scan_lines;
    std::optional<double> slit_width;
    std::optional<double> k2x;
    std::optional<unsigned> threads;
    bool sweep = false;
};

void add_common(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config, "key = value file with RunConfig fields");
    app.add_option("--crystal", f.crystal, "Sellmeier crystal file");
    app.add_option("--lambda-p", f.lambda_p, "pump wavelength, um");
    auto* phi = app.add_option("--phi0", f.phi0, "optical-axis angle, rad");
    auto* theta = app.add_option("--theta0", f.theta0, "cone opening angle override, rad");
    phi->excludes(theta);
    app.add_option("--waist", f.waist, "pump waist, cm");
    app.add_option("--length", f.length, "crystal length, cm");
    app.add_option("--z", f.z, "crystal to detection plane, cm");
    app.add_option("--grid", f.grid, "curve grid points");
    app.add_option("--seed", f.seed, "Monte-Carlo seed");
    app.add_option("--out", f.out, "output directory");
    app.add_option("--normalize", f.normalize, "raw, area or peak")
        ->check(CLI::IsMember({"raw", "area", "peak"}));
    app.add_option("--threads", f.threads, "worker threads, 0 = all cores");
}

biphoton::RunConfig build_config(const Flags& f) {
    biphoton::RunConfig cfg = biphoton::RunConfig::defaults();
    if (f.config) biphoton::apply_config_file(cfg, *f.config);
    if (f.crystal) cfg.crystal = *f.crystal;
    if (f.lambda_p) cfg.lambda_p = *f.lambda_p;
    if (f.phi0) cfg.set_phi0(*f.phi0);
    if (f.theta0) cfg.set_theta0(*f.theta0);
    if (f.waist) cfg.waist = *f.waist;
    if (f.length) cfg.length = *f.length;
    if (f.z) cfg.z = *f.z;
    if (f.grid) cfg.grid = *f.grid;
    if (f.seed) cfg.seed = *f.seed;
    if (f.out) cfg.out = *f.out;
    if (f.normalize) cfg.normalize = biphoton::parse_normalization(*f.normalize);
    if (f.pairs) cfg.pairs = *f.pairs;
    if (f.scan_lines) cfg.scan_lines = *f.scan_lines;
    if (f.slit_width) cfg.slit_width = *f.slit_width;
    if (f.k2x) cfg.k2x = *f.k2x;
    if (f.threads) cfg.threads = *f.threads;
    if (f.sweep) cfg.sweep = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transverse-momentum distributions of noncollinear type-I SPDC biphotons"};
    app.require_subcommand(1);
    Flags flags;

    auto* dispersion = app.add_subcommand("dispersion", "index mismatch and cone angle vs phi0");
    auto* fcurve = app.add_subcommand("fcurve", "exact and delta-approximated F(k-x)");
    auto* distributions = app.add_subcommand("distributions", "single, coincidence and plane curves");
    auto* scan = app.add_subcommand("scan", "ring-scan simulation and comparison with theory");
    auto* report = app.add_subcommand("report", "widths, R and regime");
    for (auto* sub : {dispersion, fcurve, distributions, scan, report}) add_common(*sub, flags);
    distributions->add_option("--k2x", flags.k2x, "partner momentum for the coincidence curve, cm^-1");
    distributions->add_flag("--sweep", flags.sweep, "also emit theta0 = 0.04, 0.02, 0");
    scan->add_option("--pairs", flags.pairs, "Monte-Carlo pairs");
    scan->add_option("--scan-lines", flags.scan_lines, "vertical scan lines");
    scan->add_option("--slit-width", flags.slit_width, "D2 slit width, cm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const biphoton::RunConfig cfg = build_config(flags);
        biphoton::CommandResult result;
        if (*dispersion) result = biphoton::cmd_dispersion(cfg);
        else if (*fcurve) result = biphoton::cmd_fcurve(cfg);
        else if (*distributions) result = biphoton::cmd_distributions(cfg);
        else if (*scan) result = biphoton::cmd_scan(cfg);
        else result = biphoton::cmd_report(cfg);
        std::cout << result.summary;
        for (const auto& path : result.files) std::cerr << "wrote " << path.string() << '\n';
        return 0;
    } catch (const biphoton::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const biphoton::AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << " (estimate " << e.estimate()
                  << ", error estimate " << e.error_estimate() << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
