#include "biphoton/run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string>
#include <string_view>

#include "biphoton/errors.hpp"

namespace biphoton {

RunConfig RunConfig::defaults() {
    RunConfig cfg;
    cfg.crystal = std::filesystem::path(BIPHOTON_DATA_DIR) / "bbo.crystal";
    cfg.phi0 = 0.5275;
    return cfg;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view s, std::size_t line, std::string_view key) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("'" + std::string(key) + "' is not a number: " + std::string(s), line);
    }
    return v;
}

template <class Int>
Int to_integer(std::string_view s, std::size_t line, std::string_view key) {
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("'" + std::string(key) + "' is not a non-negative integer: " +
                              std::string(s),
                          line);
    }
    return v;
}

bool to_bool(std::string_view s, std::size_t line, std::string_view key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("'" + std::string(key) + "' expects true or false", line);
}

std::string number(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

void apply_config(RunConfig& cfg, std::istream& in) {
    std::set<std::string, std::less<>> seen;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);

        if (key == "crystal") {
            cfg.crystal = std::string(value);
        } else if (key == "lambda_p") {
            cfg.lambda_p = to_double(value, line_no, key);
        } else if (key == "phi0") {
            if (seen.count("theta0")) throw ConfigError("phi0 and theta0 are exclusive", line_no);
            cfg.set_phi0(to_double(value, line_no, key));
        } else if (key == "theta0") {
            if (seen.count("phi0")) throw ConfigError("phi0 and theta0 are exclusive", line_no);
            cfg.set_theta0(to_double(value, line_no, key));
        } else if (key == "waist") {
            cfg.waist = to_double(value, line_no, key);
        } else if (key == "length") {
            cfg.length = to_double(value, line_no, key);
        } else if (key == "z") {
            cfg.z = to_double(value, line_no, key);
        } else if (key == "grid") {
            cfg.grid = to_integer<std::size_t>(value, line_no, key);
        } else if (key == "out") {
            cfg.out = std::string(value);
        } else if (key == "seed") {
            cfg.seed = to_integer<std::uint64_t>(value, line_no, key);
        } else if (key == "normalize") {
            try {
                cfg.normalize = parse_normalization(std::string(value));
            } catch (const Error& e) {
                throw ConfigError(e.what(), line_no);
            }
        } else if (key == "pairs") {
            cfg.pairs = to_integer<std::size_t>(value, line_no, key);
        } else if (key == "scan_lines") {
            cfg.scan_lines = to_integer<std::size_t>(value, line_no, key);
        } else if (key == "slit_width") {
            cfg.slit_width = to_double(value, line_no, key);
        } else if (key == "k2x") {
            cfg.k2x = to_double(value, line_no, key);
        } else if (key == "sweep") {
            cfg.sweep = to_bool(value, line_no, key);
        } else if (key == "threads") {
            cfg.threads = to_integer<unsigned>(value, line_no, key);
        } else {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        apply_config(cfg, in);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.phi0.has_value() == cfg.theta0.has_value()) {
        throw ConfigError("exactly one of phi0 and theta0 must be given");
    }
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(cfg.lambda_p, "lambda_p");
    positive(cfg.waist, "waist");
    positive(cfg.length, "length");
    positive(cfg.z, "z");
    if (cfg.phi0 && !(*cfg.phi0 >= 0.0 && *cfg.phi0 <= 0.5 * kPi)) {
        throw ConfigError("phi0 must lie in [0, pi/2]");
    }
    if (cfg.theta0 && !(*cfg.theta0 >= 0.0)) throw ConfigError("theta0 must be non-negative");
    if (cfg.grid < 3) throw ConfigError("grid needs at least 3 points");
    if (cfg.scan_lines < 3) throw ConfigError("scan_lines needs at least 3 lines");
    if (cfg.pairs == 0) throw ConfigError("pairs must be positive");
    if (cfg.slit_width) positive(*cfg.slit_width, "slit_width");
}

ResolvedRun resolve(const RunConfig& cfg) {
    validate(cfg);
    if (!std::filesystem::exists(cfg.crystal)) {
        throw ConfigError("crystal file not found: " + cfg.crystal.string());
    }
    CrystalDispersion crystal = load_crystal(cfg.crystal);
    try {
        const double n_o = crystal.index_ordinary(2.0 * cfg.lambda_p);
        if (cfg.theta0) {
            return {crystal, SpdcParams(cfg.lambda_p, cfg.waist, cfg.length, *cfg.theta0, n_o)};
        }
        return {crystal, SpdcParams::from_crystal(crystal, {*cfg.phi0, cfg.lambda_p}, cfg.waist,
                                                  cfg.length)};
    } catch (const RangeError& e) {
        throw ConfigError(e.what());
    }
}

Header config_header(const RunConfig& cfg, const ResolvedRun& run) {
    Header h;
    h.emplace_back("crystal_file", cfg.crystal.string());
    h.emplace_back("crystal", run.crystal.name());
    h.emplace_back("lambda_p_um", number(cfg.lambda_p));
    h.emplace_back("phi0_rad", cfg.phi0 ? number(*cfg.phi0) : "none");
    h.emplace_back("theta0_override", cfg.theta0 ? number(*cfg.theta0) : "none");
    h.emplace_back("theta0_rad", number(run.params.theta0()));
    h.emplace_back("n_o", number(run.params.n_o()));
    h.emplace_back("waist_cm", number(cfg.waist));
    h.emplace_back("length_cm", number(cfg.length));
    h.emplace_back("z_cm", number(cfg.z));
    h.emplace_back("grid", std::to_string(cfg.grid));
    h.emplace_back("seed", std::to_string(cfg.seed));
    h.emplace_back("normalize", to_string(cfg.normalize));
    return h;
}

}  // namespace biphoton
