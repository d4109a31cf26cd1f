#include "biphoton/crystal.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/units.hpp"

namespace biphoton {

CrystalDispersion::CrystalDispersion(std::string name, SellmeierCoefficients ordinary,
                                     SellmeierCoefficients extraordinary,
                                     WavelengthRange valid_range)
    : name_(std::move(name)),
      ordinary_(ordinary),
      extraordinary_(extraordinary),
      range_(valid_range) {
    if (!(range_.min_um > 0.0) || !(range_.max_um > range_.min_um)) {
        throw ConfigError("crystal '" + name_ + "': valid_range must satisfy 0 < min < max");
    }
}

double CrystalDispersion::evaluate(const SellmeierCoefficients& s, double lambda_um,
                                   const char* which) const {
    if (!range_.contains(lambda_um)) {
        std::ostringstream msg;
        msg << name_ << ": wavelength " << lambda_um << " um outside valid range ["
            << range_.min_um << ", " << range_.max_um << "] for " << which << " index";
        throw RangeError(msg.str());
    }
    const double n2 = s.index_squared(lambda_um);
    if (!(n2 > 1.0)) {
        std::ostringstream msg;
        msg << name_ << ": " << which << " index squared " << n2 << " at " << lambda_um
            << " um is not above 1";
        throw RangeError(msg.str());
    }
    return std::sqrt(n2);
}

double CrystalDispersion::index_ordinary(double lambda_um) const {
    return evaluate(ordinary_, lambda_um, "ordinary");
}

double CrystalDispersion::index_extraordinary(double lambda_um) const {
    return evaluate(extraordinary_, lambda_um, "extraordinary");
}

CrystalDispersion CrystalDispersion::bbo() {
    return CrystalDispersion("BBO", {2.7405, 0.0184, 0.0179, 0.0155},
                             {2.3730, 0.0128, 0.0156, 0.0044}, {0.22, 1.06});
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<double> parse_numbers(std::string_view text, std::size_t line) {
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        double value = 0.0;
        const auto* end = item.data() + item.size();
        const auto [ptr, ec] = std::from_chars(item.data(), end, value);
        if (item.empty() || ec != std::errc{} || ptr != end) {
            throw ConfigError("cannot parse number '" + std::string(item) + "'", line);
        }
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

CrystalDispersion parse_crystal(std::istream& in) {
    struct Entry {
        std::string value;
        std::size_t line;
    };
    std::map<std::string, Entry, std::less<>> entries;
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
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value'", line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key != "name" && key != "sellmeier_o" && key != "sellmeier_e" &&
            key != "valid_range" && key != "version") {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
        if (!entries.emplace(key, Entry{value, line_no}).second) {
            throw ConfigError("duplicate key '" + key + "'", line_no);
        }
    }

    const auto require = [&](const char* key) -> const Entry& {
        const auto it = entries.find(key);
        if (it == entries.end()) {
            throw ConfigError(std::string("missing key '") + key + "'", line_no + 1);
        }
        return it->second;
    };
    const auto coefficients = [&](const char* key) {
        const Entry& e = require(key);
        const auto v = parse_numbers(e.value, e.line);
        if (v.size() != 4) {
            throw ConfigError(std::string(key) + " needs 4 coefficients (a, b, c, d)", e.line);
        }
        return SellmeierCoefficients{v[0], v[1], v[2], v[3]};
    };

    const Entry& name = require("name");
    const auto so = coefficients("sellmeier_o");
    const auto se = coefficients("sellmeier_e");
    const Entry& range_entry = require("valid_range");
    const auto range = parse_numbers(range_entry.value, range_entry.line);
    if (range.size() != 2 || !(range[0] > 0.0) || !(range[1] > range[0])) {
        throw ConfigError("valid_range needs two wavelengths 0 < min < max", range_entry.line);
    }
    return CrystalDispersion(name.value, so, se, {range[0], range[1]});
}

CrystalDispersion load_crystal(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open crystal file '" + path.string() + "'");
    try {
        return parse_crystal(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

double pump_index(const CrystalDispersion& disp, const CutConfig& cfg) {
    const double no = disp.index_ordinary(cfg.lambda_p);
    const double ne = disp.index_extraordinary(cfg.lambda_p);
    const double s = std::sin(cfg.phi0);
    const double c = std::cos(cfg.phi0);
    return no * ne / std::sqrt(no * no * s * s + ne * ne * c * c);
}

PhaseMatchResult phase_match(const CrystalDispersion& disp, const CutConfig& cfg) {
    PhaseMatchResult r;
    r.n_p = pump_index(disp, cfg);
    r.n_o_signal = disp.index_ordinary(2.0 * cfg.lambda_p);
    r.delta_n = r.n_p - r.n_o_signal;
    r.delta0 = 2.0 * kPi / um_to_cm(cfg.lambda_p) * r.delta_n;
    if (r.delta_n < 0.0) r.theta0 = std::sqrt(-2.0 * r.n_o_signal * r.delta_n);
    return r;
}

double collinear_cut_angle(const CrystalDispersion& disp, double lambda_p,
                           std::pair<double, double> bracket) {
    const double n_signal = disp.index_ordinary(2.0 * lambda_p);
    const auto delta_n = [&](double phi) {
        return pump_index(disp, {phi, lambda_p}) - n_signal;
    };
    double lo = bracket.first;
    double hi = bracket.second;
    double f_lo = delta_n(lo);
    double f_hi = delta_n(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        std::ostringstream msg;
        msg << "delta_n has no sign change on [" << lo << ", " << hi << "] at lambda_p = "
            << lambda_p << " um";
        throw NoSolutionError(msg.str());
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = delta_n(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    // secant polish, kept inside the final bracket
    const double root = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    return (root >= lo && root <= hi) ? root : 0.5 * (lo + hi);
}

double opening_angle_fit(double phi0) {
    if (phi0 < kOpeningFitThreshold) {
        throw DomainError("opening_angle_fit: phi0 = " + std::to_string(phi0) +
                          " is below the collinear threshold 0.5008 rad");
    }
    return 0.63 * std::sqrt(phi0 - kOpeningFitThreshold);
}

}  // namespace biphoton
