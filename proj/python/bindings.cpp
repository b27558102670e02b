#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "grwc/data_io.hpp"
#include "grwc/experiment.hpp"
#include "grwc/grwc.hpp"
#include "grwc/net.hpp"
#include "grwc/rwc.hpp"

namespace py = pybind11;
using namespace grwc;

namespace {

std::vector<std::vector<double>> matrix_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
    }
    return rows;
}

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) {
            throw std::invalid_argument("weight rows must all have the same length");
        }
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

WeightSet weights_from_rows(const std::vector<std::vector<double>>& theta1,
                            const std::vector<std::vector<double>>& theta2) {
    return {matrix_from_rows(theta1), matrix_from_rows(theta2)};
}

std::vector<std::pair<std::uint64_t, double>> curve_points(const ErrorCurve& curve) {
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(curve.points().size());
    for (const CurvePoint& p : curve.points()) out.emplace_back(p.iteration, p.cost);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random weight change training: rwc and its population-based grwc variant";

    py::class_<NetworkTopology>(m, "NetworkTopology")
        .def(py::init([](std::size_t input, std::size_t hidden, std::size_t output, bool bias) {
                 NetworkTopology t{input, hidden, output, bias};
                 t.validate();
                 return t;
             }),
             py::arg("input_size"), py::arg("hidden_size"), py::arg("output_size"),
             py::arg("with_bias") = false)
        .def_readonly("input_size", &NetworkTopology::input_size)
        .def_readonly("hidden_size", &NetworkTopology::hidden_size)
        .def_readonly("output_size", &NetworkTopology::output_size)
        .def_readonly("with_bias", &NetworkTopology::with_bias);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init([](const std::vector<std::pair<std::vector<double>, std::vector<double>>>&
                             samples) {
            Dataset d;
            for (const auto& [x, y] : samples) d.samples.push_back({x, y});
            return d;
        }))
        .def("__len__", [](const Dataset& d) { return d.samples.size(); })
        .def("sample",
             [](const Dataset& d, std::size_t i) {
                 if (i >= d.samples.size()) throw py::index_error();
                 return std::make_pair(d.samples[i].x, d.samples[i].y);
             })
        .def_property_readonly("samples", [](const Dataset& d) {
            std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
            for (const Sample& s : d.samples) out.emplace_back(s.x, s.y);
            return out;
        });

    m.def("sigmoid", &sigmoid, py::arg("v"));
    m.def(
        "forward",
        [](const NetworkTopology& topo, const std::vector<std::vector<double>>& theta1,
           const std::vector<std::vector<double>>& theta2, const std::vector<double>& x) {
            const Activations a = forward(topo, weights_from_rows(theta1, theta2), x);
            return std::make_pair(a.hidden, a.output);
        },
        py::arg("topology"), py::arg("theta1"), py::arg("theta2"), py::arg("x"),
        "Returns (hidden, output) activations");
    m.def("normalize_output", &normalize_output, py::arg("z3"));
    m.def("cost", &cost, py::arg("h"), py::arg("y"));
    m.def(
        "dataset_cost",
        [](const NetworkTopology& topo, const std::vector<std::vector<double>>& theta1,
           const std::vector<std::vector<double>>& theta2, const Dataset& data) {
            return dataset_cost(topo, weights_from_rows(theta1, theta2), data);
        },
        py::arg("topology"), py::arg("theta1"), py::arg("theta2"), py::arg("data"));

    m.def("make_synthetic", &make_synthetic, py::arg("kind"), py::arg("seed") = 2025);
    m.def("load_mnist", &load_mnist, py::arg("images_path"), py::arg("labels_path"),
          py::arg("limit"), py::arg("balanced") = false);

    py::class_<RwcConfig>(m, "RwcConfig")
        .def(py::init<>())
        .def_readwrite("lambda_", &RwcConfig::lambda)
        .def_readwrite("max_iterations", &RwcConfig::max_iterations)
        .def_readwrite("target_error", &RwcConfig::target_error)
        .def_readwrite("record_stride", &RwcConfig::record_stride);

    py::class_<RwcResult>(m, "RwcResult")
        .def_property_readonly("final_cost",
                               [](const RwcResult& r) { return r.state.last_cost; })
        .def_property_readonly("iterations",
                               [](const RwcResult& r) { return r.state.iteration; })
        .def_readonly("converged", &RwcResult::converged)
        .def_readonly("best_cost", &RwcResult::best_cost)
        .def_readonly("best_iteration", &RwcResult::best_iteration)
        .def_property_readonly("curve",
                               [](const RwcResult& r) { return curve_points(r.curve); })
        .def_property_readonly("theta1",
                               [](const RwcResult& r) { return matrix_rows(r.state.weights.theta1); })
        .def_property_readonly("theta2",
                               [](const RwcResult& r) { return matrix_rows(r.state.weights.theta2); });

    m.def("rwc_train", &rwc_train, py::arg("topology"), py::arg("data"), py::arg("config"),
          py::arg("seed"), py::call_guard<py::gil_scoped_release>());

    py::class_<GrwcConfig>(m, "GrwcConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &GrwcConfig::population_size)
        .def_readwrite("epochs_per_generation", &GrwcConfig::epochs_per_generation)
        .def_readwrite("lambda_", &GrwcConfig::lambda)
        .def_readwrite("target_error", &GrwcConfig::target_error)
        .def_readwrite("max_candidate_iterations", &GrwcConfig::max_candidate_iterations)
        .def_readwrite("record_stride", &GrwcConfig::record_stride)
        .def_readwrite("threads", &GrwcConfig::threads);

    py::class_<GrwcResult>(m, "GrwcResult")
        .def_property_readonly("converged",
                               [](const GrwcResult& r) {
                                   return r.outcome == GrwcOutcome::converged;
                               })
        .def_readonly("best_cost", &GrwcResult::best_cost)
        .def_readonly("iterations_to_target", &GrwcResult::iterations_to_target)
        .def_readonly("per_candidate_iterations", &GrwcResult::per_candidate_iterations)
        .def_property_readonly("curve",
                               [](const GrwcResult& r) { return curve_points(r.curve); })
        .def_property_readonly("candidate_costs", [](const GrwcResult& r) {
            std::vector<double> costs;
            for (const Candidate& c : r.population.candidates) {
                costs.push_back(c.state.last_cost);
            }
            return costs;
        });

    m.def("grwc_train", &grwc_train, py::arg("topology"), py::arg("data"), py::arg("config"),
          py::arg("master_seed"), py::call_guard<py::gil_scoped_release>());
}
