#include "biphoton/curve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string_view>

#include "biphoton/errors.hpp"

namespace biphoton {

const char* to_string(Axis axis) noexcept {
    switch (axis) {
        case Axis::kappa: return "kappa";
        case Axis::wavenumber: return "wavenumber_cm-1";
        case Axis::position: return "position_cm";
    }
    return "?";
}

const char* to_string(Normalization norm) noexcept {
    switch (norm) {
        case Normalization::raw: return "raw";
        case Normalization::area: return "area";
        case Normalization::peak: return "peak";
    }
    return "?";
}

Axis parse_axis(const std::string& s) {
    if (s == "kappa") return Axis::kappa;
    if (s == "wavenumber_cm-1") return Axis::wavenumber;
    if (s == "position_cm") return Axis::position;
    throw ConfigError("unknown axis '" + s + "'");
}

Normalization parse_normalization(const std::string& s) {
    if (s == "raw") return Normalization::raw;
    if (s == "area") return Normalization::area;
    if (s == "peak") return Normalization::peak;
    throw ConfigError("unknown normalization '" + s + "' (expected raw, area or peak)");
}

Grid Grid::uniform(double lo, double hi, std::size_t n, Axis axis) {
    if (n < 2 || !(hi > lo)) throw DomainError("Grid::uniform needs n >= 2 and hi > lo");
    Grid g;
    g.axis = axis;
    g.points.resize(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g.points[i] = lo + step * static_cast<double>(i);
    g.points.back() = hi;
    return g;
}

Curve::Curve(std::vector<double> x, std::vector<double> y, Axis axis, Normalization norm)
    : x_(std::move(x)), y_(std::move(y)), axis_(axis), norm_(norm) {
    if (x_.size() != y_.size()) throw DomainError("Curve: abscissae and values differ in size");
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1])) throw DomainError("Curve: abscissae must strictly increase");
    }
    for (double v : y_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError("Curve: values must be finite and nonnegative");
        }
    }
}

double Curve::area() const noexcept {
    double s = 0.0;
    for (std::size_t i = 1; i < x_.size(); ++i) {
        s += 0.5 * (y_[i] + y_[i - 1]) * (x_[i] - x_[i - 1]);
    }
    return s;
}

double Curve::peak() const noexcept {
    return y_.empty() ? 0.0 : *std::max_element(y_.begin(), y_.end());
}

std::size_t Curve::argmax() const noexcept {
    return static_cast<std::size_t>(std::max_element(y_.begin(), y_.end()) - y_.begin());
}

Curve Curve::normalized(Normalization norm) const {
    double scale = 1.0;
    if (norm == Normalization::area) scale = area();
    if (norm == Normalization::peak) scale = peak();
    if (norm != Normalization::raw && !(scale > 0.0)) {
        throw DomainError("Curve::normalized: curve has zero area or peak");
    }
    std::vector<double> y(y_.size());
    std::transform(y_.begin(), y_.end(), y.begin(), [scale](double v) { return v / scale; });
    return Curve(x_, std::move(y), axis_, norm);
}

double Curve::mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 1; i < x_.size(); ++i) {
        m += 0.5 * (x_[i] * y_[i] + x_[i - 1] * y_[i - 1]) * (x_[i] - x_[i - 1]);
    }
    const double a = area();
    return a > 0.0 ? m / a : 0.0;
}

double Curve::rms(double center) const noexcept {
    double m2 = 0.0;
    for (std::size_t i = 1; i < x_.size(); ++i) {
        const double d1 = x_[i] - center;
        const double d0 = x_[i - 1] - center;
        m2 += 0.5 * (d1 * d1 * y_[i] + d0 * d0 * y_[i - 1]) * (x_[i] - x_[i - 1]);
    }
    const double a = area();
    return a > 0.0 ? std::sqrt(m2 / a) : 0.0;
}

double Curve::fwhm() const noexcept {
    if (x_.size() < 2) return 0.0;
    const double half = 0.5 * peak();
    if (!(half > 0.0)) return 0.0;
    std::size_t first = 0;
    while (y_[first] < half) ++first;
    std::size_t last = y_.size() - 1;
    while (y_[last] < half) --last;
    double left = x_[first];
    if (first > 0) {
        const double t = (half - y_[first - 1]) / (y_[first] - y_[first - 1]);
        left = x_[first - 1] + t * (x_[first] - x_[first - 1]);
    }
    double right = x_[last];
    if (last + 1 < y_.size()) {
        const double t = (half - y_[last + 1]) / (y_[last] - y_[last + 1]);
        right = x_[last + 1] - t * (x_[last + 1] - x_[last]);
    }
    return right - left;
}

double Curve::peak_fwhm(std::size_t i) const noexcept {
    if (i >= y_.size()) return 0.0;
    const double half = 0.5 * y_[i];
    if (!(half > 0.0)) return 0.0;
    std::size_t first = i;
    while (first > 0 && y_[first - 1] >= half) --first;
    std::size_t last = i;
    while (last + 1 < y_.size() && y_[last + 1] >= half) ++last;
    double left = x_[first];
    if (first > 0) {
        const double t = (half - y_[first - 1]) / (y_[first] - y_[first - 1]);
        left = x_[first - 1] + t * (x_[first] - x_[first - 1]);
    }
    double right = x_[last];
    if (last + 1 < y_.size()) {
        const double t = (half - y_[last + 1]) / (y_[last] - y_[last + 1]);
        right = x_[last + 1] - t * (x_[last + 1] - x_[last]);
    }
    return right - left;
}

std::vector<std::size_t> Curve::local_maxima() const {
    std::vector<std::size_t> out;
    const std::size_t n = y_.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        std::size_t end = i;
        while (end + 1 < n && y_[end + 1] == y_[i]) ++end;
        if (end + 1 < n && y_[i - 1] < y_[i] && y_[end + 1] < y_[i]) out.push_back((i + end) / 2);
        i = end + 1;
    }
    return out;
}

double Curve::at(double x) const noexcept {
    if (x_.empty() || x < x_.front() || x > x_.back()) return 0.0;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.end()) return y_.back();
    const std::size_t i = static_cast<std::size_t>(it - x_.begin());
    const double t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
    return y_[i - 1] + t * (y_[i] - y_[i - 1]);
}

std::optional<std::string> Table::find(const std::string& key) const {
    for (const auto& [k, v] : header) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::vector<double> Table::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ConfigError("table has no column '" + name + "'");
    const auto j = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void write_table(std::ostream& out, const Table& table) {
    for (const auto& [k, v] : table.header) out << "# " << k << " = " << v << '\n';
    out << "# columns = ";
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        out << (j ? "," : "") << table.columns[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
        out << '\n';
    }
}

Table read_table(std::istream& in) {
    Table t;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            line = trim(line.substr(1));
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) continue;
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key == "columns") {
                std::stringstream ss(value);
                std::string col;
                while (std::getline(ss, col, ',')) t.columns.emplace_back(trim(col));
            } else {
                t.header.emplace_back(key, value);
            }
            continue;
        }
        std::vector<double> row;
        while (!line.empty()) {
            const auto comma = line.find(',');
            const auto item = trim(line.substr(0, comma));
            double v = 0.0;
            const auto* end = item.data() + item.size();
            const auto [ptr, ec] = std::from_chars(item.data(), end, v);
            if (item.empty() || ec != std::errc{} || ptr != end) {
                throw ConfigError("cannot parse number '" + std::string(item) + "'", line_no);
            }
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            line.remove_prefix(comma + 1);
        }
        if (!t.columns.empty() && row.size() != t.columns.size()) {
            throw ConfigError("row has " + std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(t.columns.size()),
                              line_no);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table curve_table(const Curve& curve, const std::string& name, Header params,
                  const std::string& value_column) {
    Table t;
    t.header.emplace_back("curve", name);
    t.header.emplace_back("axis", to_string(curve.axis()));
    t.header.emplace_back("normalization", to_string(curve.normalization()));
    for (auto& kv : params) t.header.push_back(std::move(kv));
    t.columns = {to_string(curve.axis()), value_column};
    t.rows.reserve(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) t.rows.push_back({curve.x()[i], curve.y()[i]});
    return t;
}

void write_curve(std::ostream& out, const Curve& curve, const std::string& name,
                 Header params) {
    write_table(out, curve_table(curve, name, std::move(params)));
}

Curve read_curve(std::istream& in) {
    const Table t = read_table(in);
    if (t.columns.size() != 2) throw ConfigError("curve file must have exactly two columns");
    const auto axis = parse_axis(t.find("axis").value_or(t.columns[0]));
    const auto norm = parse_normalization(t.find("normalization").value_or("raw"));
    return Curve(t.column(t.columns[0]), t.column(t.columns[1]), axis, norm);
}

}  // namespace biphoton
