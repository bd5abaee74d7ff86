#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scldpc/bounds.hpp"
#include "scldpc/codesim.hpp"
#include "scldpc/coupled.hpp"
#include "scldpc/de_core.hpp"
#include "scldpc/degree_distribution.hpp"
#include "scldpc/experiment.hpp"
#include "scldpc/potential.hpp"
#include "scldpc/speed.hpp"

namespace py = pybind11;
using namespace scldpc;

namespace {

const char* mode_name(WaveMode m) { return m == WaveMode::two_wave ? "two_wave" : "single_wave"; }

int resolve_chain(const DegreeDistribution& dd, int N_prime, double eps, int w, int max_shift) {
    return N_prime > 0 ? N_prime : auto_chain_length(dd, eps, w, max_shift);
}

py::dict formation_dict(const FormationResult& f) {
    py::dict d;
    d["formed"] = f.formed;
    d["reason"] = f.reason;
    d["mode"] = mode_name(f.mode);
    d["plateau"] = f.plateau;
    d["s1"] = f.s1;
    d["formed_at"] = f.formed_at;
    d["profile"] = f.profile.x;
    d["shape_deviation"] = f.shape_deviation;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "density evolution, wave speeds, and speed bounds for spatially coupled LDPC ensembles";
    m.attr("__version__") = kVersion;

    py::class_<DegreeDistribution>(m, "DegreeDistribution")
        .def(py::init([](const std::string& L, const std::string& R) {
                 return DegreeDistribution::parse(L, R);
             }),
             py::arg("L"), py::arg("R"),
             "Parse a node-perspective pair from polynomial text, e.g. ('x^3', 'x^6').")
        .def("L", &DegreeDistribution::L, py::arg("x"))
        .def("R", &DegreeDistribution::R, py::arg("x"))
        .def("lam", &DegreeDistribution::lam, py::arg("x"))
        .def("rho", &DegreeDistribution::rho, py::arg("x"))
        .def("rho_complement", &DegreeDistribution::rho_complement, py::arg("x"))
        .def("L_prime_one", &DegreeDistribution::L_prime_one)
        .def("R_prime_one", &DegreeDistribution::R_prime_one)
        .def("design_rate", &DegreeDistribution::design_rate)
        .def("id", &DegreeDistribution::id)
        .def("__eq__", [](const DegreeDistribution& a, const DegreeDistribution& b) { return a == b; })
        .def("__repr__",
             [](const DegreeDistribution& d) { return "<DegreeDistribution " + d.id() + ">"; });

    // scalar density evolution
    m.def("de_step", &de_step_single, py::arg("dd"), py::arg("epsilon"), py::arg("x"),
          "One update of x <- eps*lambda(1 - rho(1 - x)).");
    m.def(
        "forward_de_limit",
        [](const DegreeDistribution& dd, double eps, double tol, long max_iters) {
            const ForwardLimit r = forward_de_limit(dd, eps, tol, max_iters);
            py::dict d;
            d["value"] = r.value;
            d["iters"] = r.iters;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("dd"), py::arg("epsilon"), py::arg("tol") = 1e-12, py::arg("max_iters") = 50000);
    m.def("decodes_to_zero", &decodes_to_zero, py::arg("dd"), py::arg("epsilon"),
          py::arg("max_iters") = 50000);
    m.def("bp_threshold", &bp_threshold, py::arg("dd"), py::arg("tol") = 1e-6);
    m.def(
        "find_fixed_points",
        [](const DegreeDistribution& dd, double eps) {
            const FixedPointSet set = find_fixed_points(dd, eps);
            py::list out;
            for (const auto& fp : set.points) {
                py::dict d;
                d["x"] = fp.x;
                d["stability"] = fp.stability == Stability::stable ? "stable" : "unstable";
                out.append(d);
            }
            return out;
        },
        py::arg("dd"), py::arg("epsilon"));

    // potential
    m.def("potential", &potential_single, py::arg("dd"), py::arg("epsilon"), py::arg("x"));
    m.def("potential_derivative", &potential_derivative, py::arg("dd"), py::arg("epsilon"),
          py::arg("x"));
    m.def("area_threshold", &area_threshold, py::arg("dd"), py::arg("tol") = 1e-6);
    m.def("potential_curve", &potential_curve, py::arg("dd"), py::arg("epsilon"),
          py::arg("samples") = 512);
    m.def("potential_coupled", &potential_coupled, py::arg("dd"), py::arg("epsilon"), py::arg("w"),
          py::arg("profile"));

    // coupled chain
    m.def(
        "coupled_profile",
        [](const DegreeDistribution& dd, int N_prime, int w, double eps, long iters) {
            const CoupledConfig cc(dd, N_prime, w, eps);
            DensityProfile p = init_profile(cc);
            CoupledStepper stepper(cc);
            for (long t = 0; t < iters; ++t) stepper.step(p.x);
            return p.x;
        },
        py::arg("dd"), py::arg("N_prime"), py::arg("w"), py::arg("epsilon"), py::arg("iters"),
        "One-sided coupled DE profile after a fixed number of iterations.");
    m.def(
        "form_wave",
        [](const DegreeDistribution& dd, int N_prime, int w, double eps) {
            const CoupledConfig cc(dd, resolve_chain(dd, N_prime, eps, w, 20), w, eps);
            return formation_dict(run_until_wave_formed(cc));
        },
        py::arg("dd"), py::arg("N_prime"), py::arg("w"), py::arg("epsilon"),
        "Iterate until the travelling wave has formed (N_prime <= 0 auto-sizes the chain).");
    m.def(
        "measure_speed",
        [](const DegreeDistribution& dd, int N_prime, int w, double eps, int I) {
            const CoupledConfig cc(dd, resolve_chain(dd, N_prime, eps, w, I), w, eps);
            const FormationResult formed = run_until_wave_formed(cc);
            if (!formed.formed) throw std::runtime_error("wave did not form: " + formed.reason);
            const SpeedReport r = measure_speed(cc, formed, I);
            py::dict d;
            d["I"] = r.I;
            d["T_I"] = r.T_I;
            d["v_I"] = r.v_I;
            d["mode"] = mode_name(r.mode);
            if (formed.mode == WaveMode::two_wave) {
                const TwoWaveSpeeds tw = measure_two_wave_speeds(cc, formed, I);
                d["v_upper"] = tw.v_upper;
                d["v_lower"] = tw.v_lower;
            }
            return d;
        },
        py::arg("dd"), py::arg("N_prime"), py::arg("w"), py::arg("epsilon"), py::arg("I") = 20,
        "Wave speed v_I = I/T_I (N_prime <= 0 auto-sizes the chain).");
    m.def(
        "estimate_alpha",
        [](const DegreeDistribution& dd, int N_prime, int w, double eps, int n_steps) {
            const CoupledConfig cc(dd, resolve_chain(dd, N_prime, eps, w, 20), w, eps);
            const FormationResult formed = run_until_wave_formed(cc);
            if (!formed.formed) throw std::runtime_error("wave did not form: " + formed.reason);
            const AlphaEstimate a = estimate_alpha(cc, formed, n_steps);
            py::dict d;
            d["alpha"] = a.alpha;
            d["max_ratio"] = a.max_ratio;
            d["max_remainder"] = a.max_remainder;
            d["steps"] = a.steps;
            return d;
        },
        py::arg("dd"), py::arg("N_prime"), py::arg("w"), py::arg("epsilon"),
        py::arg("n_steps") = 64);

    // bounds
    m.def(
        "bounds",
        [](const DegreeDistribution& dd, double eps, int w, double alpha, const std::string& variant,
           int N_prime) {
            const CoupledConfig cc(dd, resolve_chain(dd, N_prime, eps, w, 20), w, eps);
            const FormationResult formed = run_until_wave_formed(cc);
            if (!formed.formed) throw std::runtime_error("wave did not form: " + formed.reason);
            const BoundsReport b =
                compute_bounds(cc, formed.profile, alpha, lb_variant_from_string(variant));
            py::dict d;
            d["B1"] = b.B1;
            d["B2"] = b.B2;
            d["B2_finite_w"] = b.B2_finite_w ? py::object(py::float_(*b.B2_finite_w)) : py::none();
            d["LB"] = b.LB;
            d["alpha"] = b.alpha;
            d["D"] = b.D;
            d["variant"] = to_string(b.variant);
            return d;
        },
        py::arg("dd"), py::arg("epsilon"), py::arg("w"), py::arg("alpha") = 1.0,
        py::arg("variant") = "as_tabulated", py::arg("N_prime") = 0);
    m.def("bound_B2", &bound_B2, py::arg("dd"), py::arg("epsilon"), py::arg("w"),
          py::arg("alpha") = 1.0, py::arg("include_D_term") = false);
    m.def(
        "bound_LB",
        [](const DegreeDistribution& dd, double eps, int w, const std::string& variant) {
            return bound_LB(dd, eps, w, lb_variant_from_string(variant));
        },
        py::arg("dd"), py::arg("epsilon"), py::arg("w"), py::arg("variant") = "as_tabulated");

    // channels and Monte-Carlo decoding
    m.def("bsc_entropy", &bsc_entropy, py::arg("p"));
    m.def("awgn_entropy", &awgn_entropy, py::arg("sigma"));
    m.def(
        "channel_from_entropy",
        [](const std::string& kind, double h) {
            const ChannelModel ch = ChannelModel::from_entropy(channel_kind_from_string(kind), h);
            py::dict d;
            d["kind"] = to_string(ch.kind);
            d["param"] = ch.param;
            d["entropy"] = ch.entropy;
            return d;
        },
        py::arg("kind"), py::arg("h"));
    m.def(
        "run_montecarlo",
        [](const DegreeDistribution& dd, int N, int w, int n, const std::string& kind, double h,
           int instances, std::uint64_t base_seed, int I, long max_iters) {
            MonteCarloConfig cfg(dd);
            cfg.N = N;
            cfg.w = w;
            cfg.n = n;
            cfg.channel = ChannelModel::from_entropy(channel_kind_from_string(kind), h);
            cfg.instances = instances;
            cfg.base_seed = base_seed;
            cfg.I = I;
            cfg.max_iters = max_iters;
            const MonteCarloResult r = run_montecarlo(cfg);
            py::dict d;
            d["v_mean"] = r.v_mean;
            d["v_stderr"] = r.v_stderr;
            d["stall_fraction"] = r.stall_fraction;
            d["instances"] = r.instances;
            d["measured"] = r.measured;
            d["per_instance_v"] = r.per_instance_v;
            return d;
        },
        py::arg("dd"), py::arg("N"), py::arg("w"), py::arg("n"), py::arg("kind"), py::arg("h"),
        py::arg("instances") = 20, py::arg("base_seed") = 1, py::arg("I") = 20,
        py::arg("max_iters") = 4000,
        "Sample code instances, decode, and average the empirical front speed.");

    // batch experiments
    m.def(
        "preset_config",
        [](const std::string& name) { return serialize_config(preset(name)); }, py::arg("name"),
        "Serialized text of a canned experiment config (table1, fig2..fig5).");
    m.def(
        "run_experiment",
        [](const std::string& config_text) {
            const RunSummary s = run_experiment(parse_config(config_text));
            py::dict d;
            d["grid_points"] = s.grid_points;
            d["failures"] = s.failures;
            d["errors"] = s.errors;
            d["skipped"] = s.skipped;
            d["files"] = s.files;
            d["wall_time_s"] = s.wall_time_s;
            return d;
        },
        py::arg("config_text"), "Run an experiment config (text form) and return the summary.");
}
