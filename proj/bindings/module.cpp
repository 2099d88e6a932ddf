#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qread/analysis.hpp"
#include "qread/cell.hpp"
#include "qread/code.hpp"
#include "qread/decode.hpp"
#include "qread/polar.hpp"
#include "qread/probe.hpp"
#include "qread/qmat.hpp"

namespace py = pybind11;
using namespace qread;

namespace {

SourceModel make_model(const std::string& kind, double prior_p) {
    if (kind == "iid_u") {
        return SourceModel{SourceKind::IidU, prior_p};
    }
    if (kind == "induced") {
        return SourceModel{SourceKind::InducedFromIidX, prior_p};
    }
    throw std::invalid_argument("model must be 'iid_u' or 'induced'");
}

ProbeObjectiveKind make_objective(const std::string& name) {
    if (name == "rate") {
        return ProbeObjectiveKind::Rate;
    }
    if (name == "gap") {
        return ProbeObjectiveKind::Gap;
    }
    throw std::invalid_argument("objective must be 'rate' or 'gap'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "polar coding analysis for quantum reading of binary memory cells";

    py::class_<ProbeState>(m, "ProbeState")
        .def(py::init<double, double, double>(), py::arg("rx"), py::arg("ry"), py::arg("rz"))
        .def_readonly("rx", &ProbeState::rx)
        .def_readonly("ry", &ProbeState::ry)
        .def_readonly("rz", &ProbeState::rz)
        .def("radius", &ProbeState::radius)
        .def("density", [](const ProbeState& p) { return Matrix(p.density().matrix()); });

    py::class_<MemoryCell>(m, "MemoryCell").def_readonly("prior_p", &MemoryCell::prior_p);

    m.def("ad_cell", &ad_cell, py::arg("gamma0"), py::arg("gamma1"), py::arg("prior_p"),
          "amplitude damping memory cell");
    m.def(
        "kraus_cell",
        [](const std::vector<Matrix>& ops0, const std::vector<Matrix>& ops1, double prior_p) {
            return MemoryCell(KrausChannel(ops0), KrausChannel(ops1), prior_p);
        },
        py::arg("ops0"), py::arg("ops1"), py::arg("prior_p"));

    m.def("transform_rows", [](int n) {
        std::vector<std::string> rows;
        for (const BitVector& row : polar_transform(n).rows) {
            std::string line;
            for (std::uint8_t b : row) {
                line.push_back(b ? '1' : '0');
            }
            rows.push_back(line);
        }
        return rows;
    });
    m.def("encode_bits", [](const std::vector<int>& u) {
        int n = 0;
        while ((1 << n) < static_cast<int>(u.size())) {
            ++n;
        }
        BitVector bits(u.begin(), u.end());
        const BitVector x = encode_bits(bits, polar_transform(n));
        return std::vector<int>(x.begin(), x.end());
    });

    m.def("fidelity", [](const Matrix& a, const Matrix& b) {
        return fidelity(DensityOperator(a), DensityOperator(b));
    });
    m.def("von_neumann_entropy",
          [](const Matrix& rho) { return von_neumann_entropy(DensityOperator(rho)); });

    m.def("channel_outputs", [](const MemoryCell& cell, const ProbeState& probe) {
        const CqEnsemble e = cq_view(cell, probe);
        return py::make_tuple(Matrix(e.state0.matrix()), Matrix(e.state1.matrix()));
    });
    m.def("rate",
          [](const MemoryCell& cell, const ProbeState& probe) { return rate(cq_view(cell, probe)); });
    m.def("reliability", [](const MemoryCell& cell, const ProbeState& probe) {
        return reliability(cq_view(cell, probe));
    });

    m.def("one_step_report", [](const MemoryCell& cell, const ProbeState& probe) {
        const OneStepReport r = one_step_report(cq_view(cell, probe));
        py::dict d;
        d["rate"] = r.rate;
        d["rate_minus"] = r.rate_minus;
        d["rate_plus"] = r.rate_plus;
        d["z"] = r.z;
        d["z_minus"] = r.z_minus;
        d["z_plus"] = r.z_plus;
        return d;
    });

    m.def("rate_reliability_bounds", [](double p, double z) {
        const RateBounds b = rate_reliability_bounds(p, z);
        return py::make_tuple(b.lower, b.upper);
    });
    m.def("roga_upper_bound", &roga_upper_bound, py::arg("p"), py::arg("z"));
    m.def("holevo_lower_bound", [](const MemoryCell& cell, const ProbeState& probe) {
        return holevo_lower_bound(cq_view(cell, probe));
    });

    m.def(
        "polarization_profile",
        [](const MemoryCell& cell, const ProbeState& probe, const std::string& model, int n,
           double beta) {
            const PolarizationProfile profile =
                polarization_profile(cell, probe, make_model(model, cell.prior_p), 1 << n, beta);
            py::list rows;
            for (const ProfileRow& row : profile.rows) {
                py::dict d;
                d["index"] = row.index;
                d["rate_bits"] = row.rate_bits;
                d["z_reliability"] = row.z_reliability;
                d["z_source"] = row.z_source;
                d["is_good"] = row.is_good;
                d["is_bad"] = row.is_bad;
                rows.append(d);
            }
            return rows;
        },
        py::arg("cell"), py::arg("probe"), py::arg("model") = "iid_u", py::arg("n") = 2,
        py::arg("beta") = 0.49);

    m.def(
        "simulate",
        [](const MemoryCell& cell, const ProbeState& probe, const std::string& model, int n,
           double target_rate, int trials, std::uint64_t frozen_seed, std::uint64_t master_seed) {
            const SourceModel src = make_model(model, cell.prior_p);
            const PolarizationProfile profile =
                polarization_profile(cell, probe, src, 1 << n, 0.49);
            const CodeConstruction construction = select_information_set(
                profile, target_rate, 1.0, default_zsrc_threshold(n), frozen_seed);
            const FrozenMaps maps = sample_frozen_maps(src, construction);
            const MonteCarloResult mc =
                monte_carlo_error(cell, probe, src, construction, maps, trials, master_seed);
            py::dict d;
            d["info_set"] = construction.info_set;
            d["rate"] = construction.achieved_rate();
            d["trials"] = mc.trials;
            d["errors"] = mc.errors;
            d["error_rate"] = mc.error_rate;
            d["wilson_low"] = mc.wilson_low;
            d["wilson_high"] = mc.wilson_high;
            d["union_bound_c1"] = union_bound_rhs(profile, construction.info_set, 1.0);
            return d;
        },
        py::arg("cell"), py::arg("probe"), py::arg("model") = "iid_u", py::arg("n") = 2,
        py::arg("target_rate") = 0.5, py::arg("trials") = 1000, py::arg("frozen_seed") = 7,
        py::arg("master_seed") = 99);

    m.def(
        "optimize_probe",
        [](const MemoryCell& cell, const std::string& objective, int grid_per_axis,
           int refine_iters, std::uint64_t seed) {
            const ProbeOptimum opt =
                optimize_probe(cell, make_objective(objective), grid_per_axis, refine_iters, seed);
            py::dict d;
            d["best_bloch"] = opt.best_bloch;
            d["best_value"] = opt.best_value;
            d["bloch_radius"] = opt.bloch_radius;
            d["degenerate"] = opt.degenerate;
            return d;
        },
        py::arg("cell"), py::arg("objective") = "rate", py::arg("grid_per_axis") = 21,
        py::arg("refine_iters") = 200, py::arg("seed") = 0);

    m.def(
        "probe_sweep",
        [](const MemoryCell& cell, const std::string& objective, const std::string& axis,
           int samples) {
            const SweepAxis ax = axis == "z" ? SweepAxis::Z : SweepAxis::XZPlane;
            py::list rows;
            for (const SweepRow& row : probe_sweep(cell, make_objective(objective), ax, samples)) {
                rows.append(py::make_tuple(row.rx, row.ry, row.rz, row.value));
            }
            return rows;
        },
        py::arg("cell"), py::arg("objective") = "rate", py::arg("axis") = "z",
        py::arg("samples") = 41);
}
