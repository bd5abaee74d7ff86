#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scldpc/bounds.hpp"
#include "scldpc/codesim.hpp"
#include "scldpc/coupled.hpp"
#include "scldpc/de_core.hpp"
#include "scldpc/experiment.hpp"
#include "scldpc/potential.hpp"
#include "scldpc/speed.hpp"

using nlohmann::ordered_json;

namespace {

// Row sink for the one-shot subcommands; batch runs go through
// run_experiment and write their own files.
struct TableOut {
    std::vector<std::string> cols;
    ordered_json rows = ordered_json::array();

    void add(std::initializer_list<ordered_json> vals) {
        ordered_json obj;
        std::size_t i = 0;
        for (const auto& v : vals) obj[cols[i++]] = v;
        rows.push_back(std::move(obj));
    }

    static std::string cell(const ordered_json& v) {
        if (v.is_null()) return "";
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }

    void write(std::ostream& os, scldpc::OutputFormat format) const {
        if (format == scldpc::OutputFormat::json) {
            os << rows.dump(2) << "\n";
            return;
        }
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                os << (i ? "," : "") << cell(row.contains(cols[i]) ? row[cols[i]] : ordered_json());
            os << "\n";
        }
    }
};

void write_out(const TableOut& t, const std::string& output, scldpc::OutputFormat format) {
    if (output.empty() || output == "-") {
        t.write(std::cout, format);
        return;
    }
    std::ofstream f(output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + output);
    t.write(f, format);
}

bool wants_longer_chain(const char* msg) {
    return std::string_view(msg).find("extend N_prime") != std::string_view::npos;
}

// Runs a chain-length-dependent body, doubling the chain once if it turns
// out too short for the wave. Only auto-sized chains are retried.
template <typename Body>
void with_chain_retry(bool auto_sized, int& Np, Body body) {
    for (int attempt = 0;; ++attempt) {
        try {
            body();
            return;
        } catch (const std::exception& e) {
            if (auto_sized && attempt == 0 && wants_longer_chain(e.what())) {
                Np *= 2;
                continue;
            }
            throw;
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatially coupled LDPC: density evolution, wave speeds, speed bounds, Monte-Carlo decoding"};
    app.require_subcommand(1);
    app.set_version_flag("--version", scldpc::kVersion);

    std::string L = "x^3", R = "x^6";
    double epsilon = 0.475;
    int w = 3, N = 0;
    std::string output, format = "csv";
    double alpha = 1.0;
    std::string lb_variant = "as_tabulated";
    std::uint64_t seed = 1;
    int jobs = 1;

    auto add_common = [&](CLI::App* sub, bool with_eps, bool with_chain) {
        sub->add_option("-L,--left", L, "variable-side polynomial, e.g. x^3 or (19/20)x^3+(1/20)x^23");
        sub->add_option("-R,--right", R, "check-side polynomial, e.g. x^6");
        if (with_eps) sub->add_option("-e,--epsilon", epsilon, "erasure rate");
        if (with_chain) {
            sub->add_option("-w,--w", w, "coupling width");
            sub->add_option("-N,--chain", N, "chain length (0 = auto-size)");
        }
        sub->add_option("-o,--output", output, "output file ('-' or empty = stdout)");
        sub->add_option("-f,--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* sub_thresholds = app.add_subcommand("thresholds", "decoding and area thresholds of an ensemble");
    add_common(sub_thresholds, false, false);

    auto* sub_fixed = app.add_subcommand("fixed-points", "scalar DE fixed points at one erasure rate");
    add_common(sub_fixed, true, false);

    int curve_samples = 512;
    auto* sub_potential = app.add_subcommand("potential", "potential curve U(x; eps)");
    add_common(sub_potential, true, false);
    sub_potential->add_option("--samples", curve_samples, "grid samples");

    std::vector<long> iters{50, 250, 450, 650, 850};
    auto* sub_derun = app.add_subcommand("de-run", "coupled DE profile snapshots at chosen iterations");
    add_common(sub_derun, true, true);
    sub_derun->add_option("--iters", iters, "iteration numbers to dump")->delimiter(',');

    std::vector<int> shifts{1, 20};
    auto* sub_speed = app.add_subcommand("speed", "wave propagation speed v_I of the formed wave");
    add_common(sub_speed, true, true);
    sub_speed->add_option("--shifts", shifts, "shifts I to measure")->delimiter(',');

    auto* sub_bounds = app.add_subcommand("bounds", "speed bounds B1/B2/LB at one grid point");
    add_common(sub_bounds, true, true);
    sub_bounds->add_option("--alpha", alpha, "Taylor factor in [1,2]");
    sub_bounds->add_option("--lb-variant", lb_variant, "as_tabulated or as_stated")
        ->check(CLI::IsMember({"as_tabulated", "as_stated"}));

    std::string channel = "BEC";
    double entropy_h = -1.0, channel_param = -1.0;
    int mc_n = 1000, mc_instances = 20, mc_I = 20;
    long mc_max_iters = 4000;
    auto* sub_sim = app.add_subcommand("simulate", "Monte-Carlo BP decoding of sampled instances");
    add_common(sub_sim, false, true);
    sub_sim->add_option("--channel", channel, "BEC, BSC, or AWGN")
        ->check(CLI::IsMember({"BEC", "BSC", "AWGN", "bec", "bsc", "awgn"}));
    sub_sim->add_option("--entropy", entropy_h, "channel entropy (alternative to --param)");
    sub_sim->add_option("--param", channel_param, "native channel parameter: eps / flip rate / noise sigma");
    sub_sim->add_option("-n,--n", mc_n, "variable nodes per position");
    sub_sim->add_option("--instances", mc_instances, "number of sampled instances");
    sub_sim->add_option("--I", mc_I, "front shift for the empirical speed");
    sub_sim->add_option("--max-iters", mc_max_iters, "decoder iteration cap");
    sub_sim->add_option("--seed", seed, "base seed for instance/noise streams");

    std::string preset_name;
    auto* sub_preset = app.add_subcommand("preset", "run a canned experiment (table1, fig2..fig5)");
    sub_preset->add_option("name", preset_name, "preset name")->required();
    sub_preset->add_option("-o,--output", output, "output directory override");
    sub_preset->add_option("-f,--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub_preset->add_option("--seed", seed, "Monte-Carlo base seed override");
    sub_preset->add_option("-j,--jobs", jobs, "worker threads across grid points");
    sub_preset->add_option("--alpha", alpha, "Taylor factor in [1,2]");
    sub_preset->add_option("--lb-variant", lb_variant, "as_tabulated or as_stated")
        ->check(CLI::IsMember({"as_tabulated", "as_stated"}));

    std::string config_path;
    auto* sub_run = app.add_subcommand("run", "run an experiment config file");
    sub_run->add_option("config", config_path, "config file path")->required();
    sub_run->add_option("-o,--output", output, "output directory override");
    sub_run->add_option("-f,--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub_run->add_option("--seed", seed, "Monte-Carlo base seed override");
    sub_run->add_option("-j,--jobs", jobs, "worker threads across grid points");
    sub_run->add_option("--alpha", alpha, "Taylor factor in [1,2]");
    sub_run->add_option("--lb-variant", lb_variant, "as_tabulated or as_stated")
        ->check(CLI::IsMember({"as_tabulated", "as_stated"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // bad flags are config errors
    }

    const auto fmt_enum = [&] { return scldpc::output_format_from_string(format); };

    try {
        using namespace scldpc;

        if (sub_thresholds->parsed()) {
            const auto dd = DegreeDistribution::parse(L, R);
            TableOut t;
            t.cols = {"ensemble-id", "epsilon_bp", "epsilon_area"};
            t.add({dd.id(), bp_threshold(dd), area_threshold(dd)});
            write_out(t, output, fmt_enum());
        } else if (sub_fixed->parsed()) {
            const auto dd = DegreeDistribution::parse(L, R);
            const FixedPointSet fps = find_fixed_points(dd, epsilon);
            TableOut t;
            t.cols = {"ensemble-id", "epsilon", "x", "stability"};
            for (const auto& fp : fps.points)
                t.add({dd.id(), epsilon, fp.x,
                       fp.stability == Stability::stable ? "stable" : "unstable"});
            write_out(t, output, fmt_enum());
        } else if (sub_potential->parsed()) {
            const auto dd = DegreeDistribution::parse(L, R);
            TableOut t;
            t.cols = {"x", "U"};
            for (const auto& [x, u] : potential_curve(dd, epsilon, curve_samples)) t.add({x, u});
            write_out(t, output, fmt_enum());
        } else if (sub_derun->parsed()) {
            const auto dd = DegreeDistribution::parse(L, R);
            const int Np = N > 0 ? N : auto_chain_length(dd, epsilon, w, 20);
            const CoupledConfig cc(dd, Np, w, epsilon);
            DensityProfile prof = init_profile(cc);
            CoupledStepper stepper(cc);
            std::sort(iters.begin(), iters.end());
            iters.erase(std::unique(iters.begin(), iters.end()), iters.end());
            TableOut t;
            t.cols = {"z", "x_z", "t"};
            for (long target : iters) {
                while (prof.t < target) {
                    stepper.step(prof.x);
                    ++prof.t;
                }
                for (std::size_t z = 0; z < prof.x.size(); ++z)
                    t.add({static_cast<long long>(z) + 1, prof.x[z], target});
            }
            write_out(t, output, fmt_enum());
        } else if (sub_speed->parsed()) {
            const auto dd = DegreeDistribution::parse(L, R);
            std::sort(shifts.begin(), shifts.end());
            shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
            int Np = N > 0 ? N : auto_chain_length(dd, epsilon, w, shifts.back());
            with_chain_retry(N <= 0, Np, [&] {
                const CoupledConfig cc(dd, Np, w, epsilon);
                const FormationResult formed = run_until_wave_formed(cc);
                if (!formed.formed) throw std::runtime_error("wave did not form: " + formed.reason);
                const auto reports = measure_speeds(cc, formed, shifts);
                double alpha_est = std::numeric_limits<double>::quiet_NaN();
                try {
                    alpha_est = estimate_alpha(cc, formed).alpha;
                } catch (const std::exception&) {
                }
                TableOut t;
                t.cols = {"ensemble-id", "w",    "epsilon", "I",       "T_I",
                          "v_I",         "mode", "v_upper", "v_lower", "alpha_est"};
                for (std::size_t k = 0; k < reports.size(); ++k) {
                    const auto& r = reports[k];
                    ordered_json vu, vl;
                    if (formed.mode == WaveMode::two_wave) {
                        const auto tw = measure_two_wave_speeds(cc, formed, r.I);
                        vu = tw.v_upper;
                        vl = tw.v_lower;
                    }
                    t.add({dd.id(), w, epsilon, r.I, r.T_I, r.v_I,
                           formed.mode == WaveMode::two_wave ? "two_wave" : "single_wave", vu, vl,
                           std::isnan(alpha_est) ? ordered_json() : ordered_json(alpha_est)});
                }
                write_out(t, output, fmt_enum());
            });
        } else if (sub_bounds->parsed()) {
            const auto dd = DegreeDistribution::parse(L, R);
            int Np = N > 0 ? N : auto_chain_length(dd, epsilon, w, 20);
            with_chain_retry(N <= 0, Np, [&] {
                const CoupledConfig cc(dd, Np, w, epsilon);
                const FormationResult formed = run_until_wave_formed(cc);
                if (!formed.formed) throw std::runtime_error("wave did not form: " + formed.reason);
                const BoundsReport b =
                    compute_bounds(cc, formed.profile, alpha, lb_variant_from_string(lb_variant));
                TableOut t;
                t.cols = {"ensemble-id", "w",  "epsilon",      "alpha", "B1",
                          "B2",          "B2_finite_w", "LB",    "variant"};
                t.add({dd.id(), w, epsilon, b.alpha, b.B1, b.B2,
                       b.B2_finite_w ? ordered_json(*b.B2_finite_w) : ordered_json(), b.LB,
                       to_string(b.variant)});
                write_out(t, output, fmt_enum());
            });
        } else if (sub_sim->parsed()) {
            const auto dd = DegreeDistribution::parse(L, R);
            if ((entropy_h < 0) == (channel_param < 0))
                throw ConfigError("simulate needs exactly one of --entropy or --param");
            const ChannelKind kind = channel_kind_from_string(channel);
            const ChannelModel ch = entropy_h >= 0 ? ChannelModel::from_entropy(kind, entropy_h)
                                                   : ChannelModel::from_param(kind, channel_param);
            MonteCarloConfig mc(dd);
            mc.w = w;
            mc.N = N > 0 ? N : auto_chain_length(dd, ch.entropy, w, mc_I);
            mc.n = mc_n;
            mc.channel = ch;
            mc.instances = mc_instances;
            mc.base_seed = seed;
            mc.I = mc_I;
            mc.max_iters = mc_max_iters;
            const MonteCarloResult r = run_montecarlo(mc);
            TableOut t;
            t.cols = {"ensemble-id", "channel-kind", "h",        "n",          "N",      "w",
                      "seed",        "instance-count", "v_I_mean", "v_I_stderr", "stall_fraction"};
            t.add({dd.id(), to_string(kind), ch.entropy, mc.n, mc.N, mc.w,
                   static_cast<long long>(seed), mc.instances,
                   r.measured > 0 ? ordered_json(r.v_mean) : ordered_json(),
                   r.measured > 1 ? ordered_json(r.v_stderr) : ordered_json(), r.stall_fraction});
            write_out(t, output, fmt_enum());
        } else if (sub_preset->parsed() || sub_run->parsed()) {
            ExperimentConfig cfg;
            if (sub_preset->parsed()) {
                cfg = preset(preset_name);
            } else {
                std::ifstream f(config_path);
                if (!f) throw ConfigError("cannot read config file: " + config_path);
                std::stringstream buf;
                buf << f.rdbuf();
                cfg = parse_config(buf.str());
            }
            CLI::App* sub = sub_preset->parsed() ? sub_preset : sub_run;
            if (sub->count("--output")) cfg.output_dir = output;
            if (sub->count("--format")) cfg.format = fmt_enum();
            if (sub->count("--seed")) cfg.montecarlo.base_seed = seed;
            if (sub->count("--jobs")) cfg.jobs = jobs;
            if (sub->count("--alpha")) cfg.alpha = alpha;
            if (sub->count("--lb-variant")) cfg.lb_variant = lb_variant_from_string(lb_variant);

            const RunSummary s = run_experiment(cfg);
            std::cout << "wrote " << s.files.size() << " data file(s) to " << cfg.output_dir << " ("
                      << s.grid_points << " grid points, " << s.failures << " failed, "
                      << s.skipped.size() << " skipped)\n";
            for (const auto& e : s.errors) std::cerr << "error: " << e << "\n";
            for (const auto& sk : s.skipped) std::cerr << "skipped: " << sk << "\n";
            return s.ok() ? 0 : 1;
        }
        return 0;
    } catch (const scldpc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
