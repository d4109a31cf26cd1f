#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "biphoton/crystal.hpp"
#include "biphoton/distributions.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/ring_scan.hpp"

namespace py = pybind11;
using namespace biphoton;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::tuple curve_arrays(const Curve& c) { return py::make_tuple(to_array(c.x()), to_array(c.y())); }

Grid make_grid(const std::vector<double>& points, Axis axis) {
    Grid g;
    g.points = points;
    g.axis = axis;
    return g;
}

}  // namespace

PYBIND11_MODULE(_biphoton, m) {
    m.doc() = "Transverse-momentum distributions of noncollinear type-I SPDC biphotons";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<RangeError>(m, "RangeError", error);
    py::register_exception<DomainError>(m, "DomainError", error);
    py::register_exception<NoSolutionError>(m, "NoSolutionError", error);
    py::register_exception<NoRingError>(m, "NoRingError", error);
    py::register_exception<ConfigError>(m, "ConfigError", error);
    py::register_exception<AccuracyError>(m, "AccuracyError", error);

    py::enum_<Normalization>(m, "Normalization")
        .value("raw", Normalization::raw)
        .value("area", Normalization::area)
        .value("peak", Normalization::peak);
    py::enum_<FModel>(m, "FModel").value("exact", FModel::exact).value("approx", FModel::approx);

    py::class_<CrystalDispersion>(m, "CrystalDispersion")
        .def_static("bbo", &CrystalDispersion::bbo)
        .def_property_readonly("name", &CrystalDispersion::name)
        .def("index_ordinary", &CrystalDispersion::index_ordinary, py::arg("lambda_um"))
        .def("index_extraordinary", &CrystalDispersion::index_extraordinary, py::arg("lambda_um"));
    m.def("load_crystal", &load_crystal, py::arg("path"));

    m.def(
        "phase_match",
        [](const CrystalDispersion& d, double phi0, double lambda_p) {
            const PhaseMatchResult r = phase_match(d, {phi0, lambda_p});
            py::dict out;
            out["n_p"] = r.n_p;
            out["n_o_signal"] = r.n_o_signal;
            out["delta_n"] = r.delta_n;
            out["delta0"] = r.delta0;
            out["theta0"] = r.theta0;
            return out;
        },
        py::arg("crystal"), py::arg("phi0"), py::arg("lambda_p") = 0.4047);
    m.def(
        "collinear_cut_angle",
        [](const CrystalDispersion& d, double lambda_p) { return collinear_cut_angle(d, lambda_p); },
        py::arg("crystal"), py::arg("lambda_p") = 0.4047);
    m.def("opening_angle_fit", &opening_angle_fit, py::arg("phi0"));

    py::class_<SpdcParams>(m, "SpdcParams")
        .def(py::init<double, double, double, double, double>(), py::arg("lambda_p_um"),
             py::arg("waist_cm"), py::arg("length_cm"), py::arg("theta0"), py::arg("n_o"))
        .def_static(
            "from_crystal",
            [](const CrystalDispersion& d, double phi0, double lambda_p, double waist, double length) {
                return SpdcParams::from_crystal(d, {phi0, lambda_p}, waist, length);
            },
            py::arg("crystal"), py::arg("phi0"), py::arg("lambda_p") = 0.4047, py::arg("waist_cm") = 0.1,
            py::arg("length_cm") = 0.1)
        .def_property_readonly("lambda_p_um", &SpdcParams::lambda_p_um)
        .def_property_readonly("waist", &SpdcParams::waist)
        .def_property_readonly("length", &SpdcParams::length)
        .def_property_readonly("theta0", &SpdcParams::theta0)
        .def_property_readonly("n_o", &SpdcParams::n_o)
        .def_property_readonly("sinc_scale", &SpdcParams::sinc_scale)
        .def("kappa", &SpdcParams::kappa, py::arg("k"))
        .def("wavenumber", &SpdcParams::wavenumber, py::arg("kappa"))
        .def("with_theta0", &SpdcParams::with_theta0, py::arg("theta0"));

    // F(k-) in cm^-1 units of k-
    m.def(
        "f_exact", [](double k, const SpdcParams& p) { return f_exact(k, p); }, py::arg("k_minus"),
        py::arg("params"));
    m.def("f_approx", &f_approx, py::arg("k_minus"), py::arg("params"));
    m.def("second_moment_approx", &second_moment_approx, py::arg("params"));
    m.def(
        "reduced_bipartite",
        [](double k1x, double k2x, const SpdcParams& p) { return reduced_bipartite(k1x, k2x, p); },
        py::arg("k1x"), py::arg("k2x"), py::arg("params"));

    m.def(
        "default_grid", [](const SpdcParams& p, std::size_t n) { return to_array(default_grid(p, n).points); },
        py::arg("params"), py::arg("points") = 2001);
    m.def(
        "single_particle_curve",
        [](const SpdcParams& p, const std::vector<double>& kappa, FModel model, Normalization norm,
           unsigned threads) {
            py::gil_scoped_release release;
            const Curve c = single_particle_curve(make_grid(kappa, Axis::kappa), p, model, {}, threads);
            py::gil_scoped_acquire acquire;
            return curve_arrays(c.normalized(norm));
        },
        py::arg("params"), py::arg("kappa"), py::arg("model") = FModel::exact,
        py::arg("normalize") = Normalization::area, py::arg("threads") = 0);
    m.def(
        "plane_restricted_curve",
        [](const SpdcParams& p, const std::vector<double>& kappa, Normalization norm) {
            return curve_arrays(plane_restricted_curve(make_grid(kappa, Axis::kappa), p).normalized(norm));
        },
        py::arg("params"), py::arg("kappa"), py::arg("normalize") = Normalization::area);
    m.def(
        "coincidence_curve",
        [](const SpdcParams& p, double k2x, std::size_t points, Normalization norm) {
            return curve_arrays(coincidence_curve(k2x, coincidence_grid(k2x, p, points), p).normalized(norm));
        },
        py::arg("params"), py::arg("k2x") = 0.0, py::arg("points") = 2001,
        py::arg("normalize") = Normalization::area);

    m.def(
        "entanglement_report",
        [](const SpdcParams& p) {
            const EntanglementReport r = entanglement_report(p);
            py::dict out;
            out["width_single"] = r.width_single;
            out["width_coinc"] = r.width_coinc;
            out["width_minus"] = r.width_minus;
            out["ratio_R"] = r.ratio_R;
            out["regime"] = std::string(to_string(r.regime));
            return out;
        },
        py::arg("params"));

    py::class_<RingGeometry>(m, "RingGeometry")
        .def_readonly("z", &RingGeometry::z)
        .def_readonly("r0", &RingGeometry::r0)
        .def_readonly("delta_r", &RingGeometry::delta_r);
    m.def("ring_from_params", &ring_from_params, py::arg("params"), py::arg("z"));

    // (n, 4) array of x1, y1, x2, y2 in cm
    m.def(
        "sample_pairs",
        [](const SpdcParams& p, std::size_t n, std::uint64_t seed, double z) {
            PairSet s;
            {
                py::gil_scoped_release release;
                s = sample_pairs(p, n, seed, z);
            }
            py::array_t<double> out({static_cast<py::ssize_t>(n), py::ssize_t{4}});
            auto v = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < n; ++i) {
                const auto j = static_cast<py::ssize_t>(i);
                v(j, 0) = s.pairs[i].x1;
                v(j, 1) = s.pairs[i].y1;
                v(j, 2) = s.pairs[i].x2;
                v(j, 3) = s.pairs[i].y2;
            }
            return out;
        },
        py::arg("params"), py::arg("n"), py::arg("seed"), py::arg("z"));
}
