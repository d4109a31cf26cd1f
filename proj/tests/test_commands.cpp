#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biphoton/commands.hpp"
#include "biphoton/crystal.hpp"
#include "biphoton/errors.hpp"
#include "doctest.h"

using namespace biphoton;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

RunConfig temp_config(const std::string& name) {
    RunConfig cfg = RunConfig::defaults();
    cfg.out = fs::path(BIPHOTON_TEST_TMP) / name;
    fs::remove_all(cfg.out);
    return cfg;
}

Table load(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    return read_table(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("dispersion") {
    const RunConfig cfg = temp_config("dispersion");
    const CommandResult r = cmd_dispersion(cfg);
    REQUIRE(r.files.size() == 2);
    const Table t = load(cfg.out / "dispersion.csv");
    const auto phi = t.column("phi0_rad");
    const auto dn = t.column("delta_n");
    const auto theta = t.column("theta0_rad");
    CHECK(phi.front() == 0.0);
    CHECK(phi.back() == Approx(1.2));
    double crossing = -1.0;
    for (std::size_t i = 1; i < dn.size(); ++i) {
        if (dn[i - 1] > 0.0 && dn[i] <= 0.0) {
            crossing = phi[i - 1] + dn[i - 1] / (dn[i - 1] - dn[i]) * (phi[i] - phi[i - 1]);
        }
    }
    CHECK(crossing == Approx(0.5008).epsilon(0.001 / 0.5008));
    CHECK(dn[700] < 0.0);  // phi0 = 0.7
    CHECK(theta[700] == Approx(0.28).epsilon(0.02));
    CHECK(t.find("collinear_cut_angle_rad").has_value());
    const Table fit = load(cfg.out / "opening_angle_fit.csv");
    for (double res : fit.column("relative_residual")) CHECK(std::abs(res) < 0.05);
}

TEST_CASE("fcurve") {
    RunConfig cfg = temp_config("fcurve");
    cfg.set_theta0(0.28);
    cfg.waist = 0.5;
    cfg.length = 0.5;
    cfg.grid = 1201;
    cfg.normalize = Normalization::raw;
    cmd_fcurve(cfg);
    const Table t = load(cfg.out / "fcurve.csv");
    const auto k = t.column("kappa_minus");
    const auto fe = t.column("f_exact");
    const auto fa = t.column("f_approx");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (std::abs(k[i]) <= 0.56 - 0.002) CHECK(std::abs(fe[i] - fa[i]) / fa[i] < 1e-2);
    }
    const Table zoom = load(cfg.out / "fcurve_zoom.csv");
    CHECK(zoom.column("kappa_minus").front() == Approx(0.55));
    CHECK(zoom.find("theta0_override").value() == "0.28");
}

TEST_CASE("distributions with sweep") {
    RunConfig cfg = temp_config("distributions");
    cfg.grid = 801;
    cfg.sweep = true;
    const CommandResult r = cmd_distributions(cfg);
    CHECK(r.files.size() == 8);
    for (const char* name : {"single_particle.csv", "single_particle_approx.csv", "coincidence.csv",
                             "plane_restricted.csv", "sweep_theta0_0.04.csv", "sweep_theta0_0.02.csv",
                             "sweep_theta0_0.csv"}) {
        std::ifstream in(cfg.out / name);
        const Curve c = read_curve(in);
        CHECK_MESSAGE(c.area() == Approx(1.0).epsilon(1e-6), name);
        CHECK(c.normalization() == Normalization::area);
    }
    const std::string report = slurp(cfg.out / "report.txt");
    CHECK(report.find("width_coincidence_cm-1 = 5\n") != std::string::npos);
    CHECK(report.find("ratio_R = 1098.") != std::string::npos);
    CHECK(report.find("fwhm_single_cm-1") != std::string::npos);
}

TEST_CASE("scan echoes the ring and is reproducible") {
    RunConfig cfg = temp_config("scan_a");
    cfg.pairs = 50000;
    const CommandResult r = cmd_scan(cfg);
    CHECK(r.summary.find("r0_cm = 10.005") != std::string::npos);
    RunConfig again = temp_config("scan_b");
    again.pairs = 50000;
    cmd_scan(again);
    for (const auto& p : r.files) {
        CHECK_MESSAGE(slurp(p) == slurp(again.out / p.filename()), p.string());
    }
    const Table mc = load(cfg.out / "scan_single_mc.csv");
    CHECK(mc.find("seed").value() == std::to_string(cfg.seed));
    CHECK(mc.find("pairs_sampled").value() == "50000");
    CHECK(mc.find("mode").value() == "single");
    const Table co = load(cfg.out / "scan_coincidence.csv");
    CHECK(co.find("d2_position").has_value());

    RunConfig theta_r0 = temp_config("scan_theta");
    theta_r0.set_theta0(0.1);
    theta_r0.pairs = 1000;
    CHECK(cmd_scan(theta_r0).summary.find("r0_cm = 10\n") != std::string::npos);
}

TEST_CASE("scan needs a cone") {
    RunConfig cfg = temp_config("scan_collinear");
    cfg.set_theta0(0.0);
    CHECK_THROWS_AS(cmd_scan(cfg), ConfigError);
}

TEST_CASE("report") {
    const CommandResult r = cmd_report(RunConfig::defaults());
    CHECK(r.files.empty());
    CHECK(r.summary.find("regime = noncollinear-broadened") != std::string::npos);
    CHECK(r.summary.find("delta_r_cm") != std::string::npos);
}

}  // TEST_SUITE
