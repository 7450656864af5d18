// Copyright 2026 The lgweak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "lgweak/cli.h"
#include "lgweak/errors.h"
#include "lgweak/estimators.h"
#include "lgweak/experiment.h"
#include "lgweak/lg_inequalities.h"
#include "lgweak/pointer.h"
#include "lgweak/qubit.h"

namespace py = pybind11;
using namespace lgweak;

namespace {

std::vector<std::vector<int64_t>> counts_rows(const CountsGrid &c) {
    std::vector<std::vector<int64_t>> rows(c.grid.n_y, std::vector<int64_t>(c.grid.n_x));
    for (int j = 0; j < c.grid.n_y; j++) {
        for (int i = 0; i < c.grid.n_x; i++) {
            rows[j][i] = c.at(i, j);
        }
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_lgweak, m) {
    m.doc() = "Leggett-Garg tests with sequential weak measurements";

    // Translators run newest first, so the base class is registered first.
    auto &error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<PostSelectionSingular>(m, "PostSelectionSingular", error.ptr());
    py::register_exception<ChainTooShort>(m, "ChainTooShort", error.ptr());
    py::register_exception<EnumerationTooLarge>(m, "EnumerationTooLarge", error.ptr());
    py::register_exception<LengthMismatch>(m, "LengthMismatch", error.ptr());
    py::register_exception<GridTooSmall>(m, "GridTooSmall", error.ptr());
    py::register_exception<InsufficientCounts>(m, "InsufficientCounts", error.ptr());
    py::register_exception<ZeroCoupling>(m, "ZeroCoupling", error.ptr());

    py::class_<QubitState>(m, "QubitState")
        .def(py::init<Complex, Complex>(), py::arg("amp_h"), py::arg("amp_v"))
        .def_property_readonly("amp_h", &QubitState::amp_h)
        .def_property_readonly("amp_v", &QubitState::amp_v)
        .def("__repr__", [](const QubitState &s) {
            return "QubitState(" + std::to_string(s.amp_h().real()) + ", " + std::to_string(s.amp_v().real()) + ")";
        });

    py::class_<DichotomicObservable>(m, "DichotomicObservable")
        .def_property_readonly("axis_angle", &DichotomicObservable::axis_angle)
        .def("matrix", [](const DichotomicObservable &o) {
            Matrix2 a = o.matrix();
            return std::vector<std::vector<Complex>>{{a(0, 0), a(0, 1)}, {a(1, 0), a(1, 1)}};
        });

    py::class_<WeakValue>(m, "WeakValue")
        .def_readonly("re", &WeakValue::re)
        .def_readonly("im", &WeakValue::im)
        .def_property_readonly("anomalous", &WeakValue::anomalous);

    m.def("state_from_angle", &state_from_angle, py::arg("theta"));
    m.def("orthogonal_state_from_angle", &orthogonal_state_from_angle, py::arg("theta"));
    m.def("observable_from_angle", &observable_from_angle, py::arg("theta"));
    m.def("expectation", &expectation, py::arg("obs"), py::arg("psi"));
    m.def("transition_prob", &transition_prob, py::arg("pre"), py::arg("post"));
    m.def("weak_value", &weak_value, py::arg("obs"), py::arg("pre"), py::arg("post"));
    m.def("sequential_weak_value", &sequential_weak_value, py::arg("late"), py::arg("early"), py::arg("pre"),
          py::arg("post"));

    py::enum_<Violation>(m, "Violation")
        .value("NEGATIVE", Violation::kNegative)
        .value("NONE", Violation::kNone)
        .value("POSITIVE", Violation::kPositive);

    py::class_<LGVerdict>(m, "LGVerdict")
        .def_readonly("value", &LGVerdict::value)
        .def_readonly("lower_bound", &LGVerdict::lower_bound)
        .def_readonly("upper_bound", &LGVerdict::upper_bound)
        .def_readonly("classification", &LGVerdict::classification);

    py::class_<CorrelatorSet>(m, "CorrelatorSet")
        .def(py::init<>())
        .def_readwrite("exp_b", &CorrelatorSet::exp_b)
        .def_readwrite("exp_c", &CorrelatorSet::exp_c)
        .def_readwrite("corr_bc", &CorrelatorSet::corr_bc)
        .def_readwrite("exp_d", &CorrelatorSet::exp_d)
        .def_readwrite("p_d_plus", &CorrelatorSet::p_d_plus)
        .def_readwrite("p_d_minus", &CorrelatorSet::p_d_minus)
        .def_readwrite("wv_c_plus", &CorrelatorSet::wv_c_plus)
        .def_readwrite("wv_c_minus", &CorrelatorSet::wv_c_minus)
        .def_property_readonly("corr_cd", &CorrelatorSet::corr_cd)
        .def("check_identities", &CorrelatorSet::check_identities, py::arg("tol") = 1e-10);

    m.def("correlators_b4", &correlators_b4, py::arg("alpha"), py::arg("gamma"), py::arg("delta"));
    m.def("b3_value", &b3_value, py::arg("exp_b"), py::arg("exp_c"), py::arg("corr_bc"));
    m.def("b3_postselected_form", &b3_postselected_form, py::arg("exp_b_ps_plus"), py::arg("p_c_plus"));
    m.def("b4_value", &b4_value, py::arg("set"));
    m.def("b4_postselected_form", &b4_postselected_form, py::arg("set"));
    m.def("b4_closed_form", &b4_closed_form, py::arg("alpha"), py::arg("gamma"), py::arg("delta"));
    m.def("anomaly_threshold", &anomaly_threshold, py::arg("exp_b"), py::arg("corr_bc"), py::arg("exp_c"),
          py::arg("p_d_minus"));

    m.def(
        "bn_bounds",
        [](int n) {
            Bounds b = bn_bounds(n);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("n"));
    m.def(
        "macrorealist_bounds_bruteforce",
        [](int n, bool fix_first) {
            Bounds b = macrorealist_bounds_bruteforce(n, fix_first);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("n"), py::arg("fix_first") = true);
    m.def(
        "bn_value",
        [](const std::vector<double> &nearest, double endpoint) {
            CorrelatorChain c{static_cast<int>(nearest.size()) + 1, nearest, endpoint};
            return bn_value(c);
        },
        py::arg("nearest"), py::arg("endpoint"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("alpha_pi", &RunConfig::alpha_pi)
        .def_readwrite("gamma_pi", &RunConfig::gamma_pi)
        .def_readwrite("delta_pi", &RunConfig::delta_pi)
        .def_readwrite("photons", &RunConfig::photons)
        .def_readwrite("g_over_sigma", &RunConfig::g_over_sigma)
        .def_readwrite("pixels", &RunConfig::pixels)
        .def_readwrite("pitch_over_sigma", &RunConfig::pitch_over_sigma)
        .def_readwrite("dark_rate", &RunConfig::dark_rate)
        .def_readwrite("seed", &RunConfig::seed)
        .def("to_ini", &RunConfig::to_ini)
        .def_static("from_ini", [](const std::string &text) { return RunConfig::from_ini(text); })
        .def("__eq__", [](const RunConfig &a, const RunConfig &b) { return a == b; });

    // Reports cross the boundary as JSON text; the Python package decodes them.
    m.def(
        "_theory_report",
        [](double a, double g, double d) { return theory_report(a, g, d).dump(); },
        py::arg("alpha_pi"), py::arg("gamma_pi"), py::arg("delta_pi"));
    m.def(
        "_bounds_report", [](int n, bool brute) { return bounds_report(n, brute).dump(); }, py::arg("n"),
        py::arg("brute"));
    m.def(
        "_simulate",
        [](const RunConfig &cfg) {
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(cfg);
            }
            std::vector<std::vector<std::vector<int64_t>>> frames;
            for (const SimulatedRun &run : r.runs) {
                frames.push_back(counts_rows(run.frame.counts));
            }
            return py::make_tuple(experiment_report(r).dump(), frames);
        },
        py::arg("cfg"));
    m.def(
        "sweep",
        [](double gamma_pi, int steps) {
            SweepSpec spec;
            spec.gamma_pi = gamma_pi;
            spec.alpha = {0, 1, steps};
            spec.delta = {0, 1, steps};
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = run_sweep(spec);
            }
            py::list rows;
            for (const SweepRow &row : r.rows) {
                rows.append(py::make_tuple(row.alpha_pi, row.delta_pi, row.b4, violation_name(row.classification)));
            }
            return rows;
        },
        py::arg("gamma_pi"), py::arg("steps") = 101);
}
