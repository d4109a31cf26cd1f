#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace biphoton {

/// Abscissa unit of a sampled curve.
enum class Axis {
    kappa,       // lambda_p k / pi, dimensionless
    wavenumber,  // cm^-1
    position,    // detection-plane offset, cm
};

enum class Normalization { raw, area, peak };

const char* to_string(Axis axis) noexcept;
const char* to_string(Normalization norm) noexcept;
Axis parse_axis(const std::string& s);
Normalization parse_normalization(const std::string& s);

struct Grid {
    std::vector<double> points;
    Axis axis = Axis::kappa;

    /// n >= 2 equally spaced points on [lo, hi].
    static Grid uniform(double lo, double hi, std::size_t n, Axis axis = Axis::kappa);

    std::size_t size() const noexcept { return points.size(); }
};

/// Sampled 1-D distribution. Abscissae strictly increase, values are >= 0.
class Curve {
public:
    Curve() = default;
    Curve(std::vector<double> x, std::vector<double> y, Axis axis,
          Normalization norm = Normalization::raw);

    const std::vector<double>& x() const noexcept { return x_; }
    const std::vector<double>& y() const noexcept { return y_; }
    Axis axis() const noexcept { return axis_; }
    Normalization normalization() const noexcept { return norm_; }
    std::size_t size() const noexcept { return x_.size(); }

    /// Trapezoid area.
    double area() const noexcept;
    double peak() const noexcept;
    std::size_t argmax() const noexcept;

    /// Rescales to unit area or unit peak; raw returns a copy.
    Curve normalized(Normalization norm) const;

    /// Trapezoid first moment over the unit-area shape.
    double mean() const noexcept;
    /// sqrt of the second moment about `center` (defaults to 0).
    double rms(double center = 0.0) const noexcept;
    /// sqrt of the central second moment.
    double rms_central() const noexcept { return rms(mean()); }

    /// Distance between the outermost half-maximum crossings (linear interpolation).
    double fwhm() const noexcept;
    /// Width of the connected region at or above half of y[i] around sample i.
    double peak_fwhm(std::size_t i) const noexcept;

    /// Local maxima strictly above both neighbours (plateaus count once).
    std::vector<std::size_t> local_maxima() const;

    /// Linear interpolation; zero outside the sampled range.
    double at(double x) const noexcept;

private:
    std::vector<double> x_;
    std::vector<double> y_;
    Axis axis_ = Axis::kappa;
    Normalization norm_ = Normalization::raw;
};

/// Ordered `# key = value` header lines written ahead of the data columns.
using Header = std::vector<std::pair<std::string, std::string>>;

/// Multi-column numeric table in the curve text format: `#` header lines,
/// then a `# columns = a,b,...` line, then comma-separated rows printed with
/// 17 significant digits.
struct Table {
    Header header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::optional<std::string> find(const std::string& key) const;
    std::vector<double> column(const std::string& name) const;
};

void write_table(std::ostream& out, const Table& table);
Table read_table(std::istream& in);

Table curve_table(const Curve& curve, const std::string& name, Header params,
                  const std::string& value_column = "value");
void write_curve(std::ostream& out, const Curve& curve, const std::string& name,
                 Header params = {});
Curve read_curve(std::istream& in);

}  // namespace biphoton
