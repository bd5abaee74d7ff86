#include "scldpc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "scldpc/coupled.hpp"
#include "scldpc/de_core.hpp"
#include "scldpc/potential.hpp"
#include "scldpc/speed.hpp"

namespace fs = std::filesystem;

namespace scldpc {

std::string to_string(Task t) {
    switch (t) {
        case Task::profiles: return "profiles";
        case Task::thresholds: return "thresholds";
        case Task::fixed_points: return "fixed_points";
        case Task::potential_curve: return "potential_curve";
        case Task::speed: return "speed";
        case Task::bounds: return "bounds";
        case Task::montecarlo: return "montecarlo";
    }
    return "?";
}

Task task_from_string(const std::string& s) {
    for (Task t : {Task::profiles, Task::thresholds, Task::fixed_points, Task::potential_curve,
                   Task::speed, Task::bounds, Task::montecarlo})
        if (s == to_string(t)) return t;
    throw ConfigError("unknown task: " + s);
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("unknown output format: " + s);
}

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) next = s.size();
        const std::string item = trim(s.substr(pos, next - pos));
        if (!item.empty()) out.push_back(item);
        pos = next + 1;
    }
    return out;
}

double parse_real(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ConfigError("trailing characters in number: " + s);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("not a number: " + s);
    }
}

long parse_int(const std::string& s) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw ConfigError("trailing characters in integer: " + s);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("not an integer: " + s);
    }
}

// Typed cell so the CSV and JSON writers render the same value consistently.
struct Cell {
    enum class Kind { missing, text, number, integer } kind = Kind::missing;
    std::string s;
    double d = 0.0;
    long long i = 0;

    static Cell none() { return {}; }
    static Cell txt(std::string v) { return {Kind::text, std::move(v), 0.0, 0}; }
    static Cell num(double v) { return {Kind::number, {}, v, 0}; }
    static Cell inum(long long v) { return {Kind::integer, {}, 0.0, v}; }
};

struct Table {
    std::vector<std::string> cols;
    std::vector<std::vector<Cell>> rows;
};

void emit_table(const fs::path& dir, const std::string& name, OutputFormat format, const Table& t,
                std::vector<std::string>& files) {
    const std::string file = name + (format == OutputFormat::csv ? ".csv" : ".json");
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
    if (format == OutputFormat::csv) {
        out << "# manifest: manifest.json\n";
        for (std::size_t c = 0; c < t.cols.size(); ++c) out << (c ? "," : "") << t.cols[c];
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ",";
                switch (row[c].kind) {
                    case Cell::Kind::missing: break;
                    case Cell::Kind::text: out << row[c].s; break;
                    case Cell::Kind::number: out << fmt(row[c].d); break;
                    case Cell::Kind::integer: out << row[c].i; break;
                }
            }
            out << "\n";
        }
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t c = 0; c < row.size(); ++c) {
                switch (row[c].kind) {
                    case Cell::Kind::missing: obj[t.cols[c]] = nullptr; break;
                    case Cell::Kind::text: obj[t.cols[c]] = row[c].s; break;
                    case Cell::Kind::number: obj[t.cols[c]] = row[c].d; break;
                    case Cell::Kind::integer: obj[t.cols[c]] = row[c].i; break;
                }
            }
            arr.push_back(std::move(obj));
        }
        out << arr.dump(2) << "\n";
    }
    files.push_back(file);
}

template <class F>
void parallel_for(int jobs, int n, F&& f) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    for (auto& th : pool) th.join();
}

bool sorted_ascending(const std::vector<double>& v) {
    return std::is_sorted(v.begin(), v.end());
}

}  // namespace

void ExperimentConfig::validate() const {
    if (ensembles.empty()) throw ConfigError("config needs at least one ensemble");
    for (const auto& e : ensembles) {
        try {
            (void)DegreeDistribution::parse(e.L, e.R);
        } catch (const std::exception& ex) {
            throw ConfigError(std::string("bad ensemble '") + e.L + " ; " + e.R + "': " + ex.what());
        }
    }
    if (tasks.empty()) throw ConfigError("config needs a non-empty task list");
    if (!sorted_ascending(epsilon_grid)) throw ConfigError("epsilon grid must be sorted ascending");
    if (!sorted_ascending(entropy_grid)) throw ConfigError("entropy grid must be sorted ascending");
    for (double e : epsilon_grid)
        if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("epsilon outside [0,1]: " + fmt(e));
    for (double h : entropy_grid)
        if (!(h >= 0.0 && h <= 1.0)) throw ConfigError("entropy outside [0,1]: " + fmt(h));

    auto has = [&](Task t) { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); };
    const bool needs_eps = has(Task::fixed_points) || has(Task::potential_curve) ||
                           has(Task::speed) || has(Task::bounds) || has(Task::profiles);
    if (needs_eps && epsilon_grid.empty())
        throw ConfigError("the requested tasks need a non-empty epsilon grid");
    const bool needs_coupling =
        has(Task::profiles) || has(Task::speed) || has(Task::bounds) || has(Task::montecarlo);
    if (needs_coupling) {
        if (coupling.empty()) throw ConfigError("the requested tasks need a coupling list");
        for (const auto& c : coupling) {
            if (c.w < 2) throw ConfigError("coupling width w must be >= 2");
            if (c.N > 0 && c.N < 4 * c.w)
                throw ConfigError("explicit chain length must be at least 4w");
        }
    }
    if (has(Task::profiles) && profile_iters.empty())
        throw ConfigError("the profiles task needs profile_iters");
    for (long t : profile_iters)
        if (t < 0) throw ConfigError("profile iterations must be >= 0");
    if (has(Task::speed))
        for (int s : shifts)
            if (s < 1) throw ConfigError("speed shifts must be >= 1");
    if (has(Task::montecarlo)) {
        if (montecarlo.channels.empty()) throw ConfigError("montecarlo needs at least one channel");
        if (montecarlo.n < 1 || montecarlo.instance_count < 1)
            throw ConfigError("montecarlo needs n >= 1 and instance_count >= 1");
        if (montecarlo.I < 1 || montecarlo.max_iters < 1)
            throw ConfigError("montecarlo needs I >= 1 and max_iters >= 1");
        if (entropy_grid.empty() && epsilon_grid.empty())
            throw ConfigError("montecarlo needs an entropy (or epsilon) grid");
    }
    if (!(alpha >= 1.0 && alpha <= 2.0)) throw ConfigError("alpha must lie in [1,2]");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (output_dir.empty()) throw ConfigError("output directory must not be empty");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.ensembles.clear();
    cfg.coupling.clear();
    cfg.tasks.clear();
    bool saw_shifts = false, saw_channels = false;

    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        // name lookups and number parsing below throw invalid_argument;
        // funnel everything into ConfigError tagged with the line
        try {

        if (key == "ensemble") {
            const auto parts = split_list(val, ';');
            if (parts.size() != 2)
                throw ConfigError("ensemble needs 'L ; R' polynomial texts, got: " + val);
            cfg.ensembles.push_back({parts[0], parts[1]});
        } else if (key == "coupling") {
            for (const auto& item : split_list(val, ',')) {
                const std::size_t colon = item.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("coupling entries look like 'N:w' or 'auto:w', got: " + item);
                const std::string ns = trim(item.substr(0, colon));
                Coupling c;
                c.N = (ns == "auto") ? 0 : static_cast<int>(parse_int(ns));
                c.w = static_cast<int>(parse_int(trim(item.substr(colon + 1))));
                cfg.coupling.push_back(c);
            }
        } else if (key == "epsilon") {
            for (const auto& item : split_list(val, ',')) cfg.epsilon_grid.push_back(parse_real(item));
        } else if (key == "entropy") {
            for (const auto& item : split_list(val, ',')) cfg.entropy_grid.push_back(parse_real(item));
        } else if (key == "tasks") {
            for (const auto& item : split_list(val, ',')) cfg.tasks.push_back(task_from_string(item));
        } else if (key == "profile_iters") {
            for (const auto& item : split_list(val, ',')) cfg.profile_iters.push_back(parse_int(item));
        } else if (key == "shifts") {
            if (!saw_shifts) {
                cfg.shifts.clear();
                saw_shifts = true;
            }
            for (const auto& item : split_list(val, ',')) cfg.shifts.push_back(static_cast<int>(parse_int(item)));
        } else if (key == "mc_n") {
            cfg.montecarlo.n = static_cast<int>(parse_int(val));
        } else if (key == "mc_instances") {
            cfg.montecarlo.instance_count = static_cast<int>(parse_int(val));
        } else if (key == "mc_seed") {
            cfg.montecarlo.base_seed = static_cast<std::uint64_t>(parse_int(val));
        } else if (key == "mc_channels") {
            if (!saw_channels) {
                cfg.montecarlo.channels.clear();
                saw_channels = true;
            }
            for (const auto& item : split_list(val, ','))
                cfg.montecarlo.channels.push_back(channel_kind_from_string(item));
        } else if (key == "mc_I") {
            cfg.montecarlo.I = static_cast<int>(parse_int(val));
        } else if (key == "mc_max_iters") {
            cfg.montecarlo.max_iters = parse_int(val);
        } else if (key == "output") {
            cfg.output_dir = val;
        } else if (key == "format") {
            cfg.format = output_format_from_string(val);
        } else if (key == "alpha") {
            cfg.alpha = parse_real(val);
        } else if (key == "lb_variant") {
            cfg.lb_variant = lb_variant_from_string(val);
        } else if (key == "jobs") {
            cfg.jobs = static_cast<int>(parse_int(val));
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown config key: " + key);
        }

        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& e : cfg.ensembles) out += "ensemble = " + e.L + " ; " + e.R + "\n";
    if (!cfg.coupling.empty()) {
        out += "coupling = ";
        for (std::size_t i = 0; i < cfg.coupling.size(); ++i) {
            if (i) out += ", ";
            out += cfg.coupling[i].auto_N() ? "auto" : std::to_string(cfg.coupling[i].N);
            out += ":" + std::to_string(cfg.coupling[i].w);
        }
        out += "\n";
    }
    auto list_line = [&out](const char* key, const auto& items, auto&& render) {
        if (items.empty()) return;
        out += std::string(key) + " = ";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += ", ";
            out += render(items[i]);
        }
        out += "\n";
    };
    list_line("epsilon", cfg.epsilon_grid, [](double v) { return fmt(v); });
    list_line("entropy", cfg.entropy_grid, [](double v) { return fmt(v); });
    list_line("tasks", cfg.tasks, [](Task t) { return to_string(t); });
    list_line("profile_iters", cfg.profile_iters, [](long v) { return std::to_string(v); });
    list_line("shifts", cfg.shifts, [](int v) { return std::to_string(v); });
    out += "mc_n = " + std::to_string(cfg.montecarlo.n) + "\n";
    out += "mc_instances = " + std::to_string(cfg.montecarlo.instance_count) + "\n";
    out += "mc_seed = " + std::to_string(cfg.montecarlo.base_seed) + "\n";
    list_line("mc_channels", cfg.montecarlo.channels, [](ChannelKind k) { return to_string(k); });
    out += "mc_I = " + std::to_string(cfg.montecarlo.I) + "\n";
    out += "mc_max_iters = " + std::to_string(cfg.montecarlo.max_iters) + "\n";
    out += "output = " + cfg.output_dir + "\n";
    out += "format = " + to_string(cfg.format) + "\n";
    out += "alpha = " + fmt(cfg.alpha) + "\n";
    out += "lb_variant = " + to_string(cfg.lb_variant) + "\n";
    out += "jobs = " + std::to_string(cfg.jobs) + "\n";
    return out;
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.ensembles.clear();
    c.coupling.clear();
    c.tasks.clear();
    if (name == "table1") {
        c.ensembles = {{"x^3", "x^6"}};
        c.coupling = {{0, 2}, {0, 4}, {0, 8}, {0, 16}, {0, 32}};
        c.epsilon_grid = {0.475};
        c.tasks = {Task::speed, Task::bounds};
        c.shifts = {1, 20};
        c.output_dir = "out/table1";
    } else if (name == "fig2") {
        // Wave profiles of the (x^3, x^6) chain at eps = 0.475, w = 3, plus
        // the potential landscape they ride on.
        c.ensembles = {{"x^3", "x^6"}};
        c.coupling = {{100, 3}};
        c.epsilon_grid = {0.475};
        c.tasks = {Task::potential_curve, Task::fixed_points, Task::profiles};
        c.profile_iters = {50, 250, 450, 650, 850};
        c.output_dir = "out/fig2";
    } else if (name == "fig3") {
        // (x^k, x^2k) for k = 3, 4, 5 at w = 6 over the window where all
        // three sustain a wave; v_20 staircases plus the profile bound.
        c.ensembles = {{"x^3", "x^6"}, {"x^4", "x^8"}, {"x^5", "x^10"}};
        c.coupling = {{0, 6}};
        c.epsilon_grid = {0.435, 0.44, 0.445, 0.45, 0.455, 0.46, 0.465, 0.47, 0.475, 0.48, 0.485};
        c.tasks = {Task::thresholds, Task::speed, Task::bounds};
        c.output_dir = "out/fig3";
    } else if (name == "fig4") {
        // Same-average-degree comparison at w = 3, plus the five-fixed-point
        // ensemble (its points land in the low end of the grid; each
        // ensemble only runs inside its own wave window).
        c.ensembles = {{"x^4", "x^8"},
                       {"(19/20)x^3+(1/20)x^23", "x^8"},
                       {"(153/283)x^2+(102/283)x^3+(28/283)x^51", "x^16"}};
        c.coupling = {{0, 3}};
        c.epsilon_grid = {0.36, 0.38, 0.39, 0.4, 0.45, 0.46, 0.47, 0.475, 0.48, 0.485, 0.49};
        c.tasks = {Task::thresholds, Task::speed, Task::bounds};
        c.output_dir = "out/fig4";
    } else if (name == "fig5") {
        // Monte-Carlo speeds on BEC/BSC/AWGN at matched channel entropy.
        // Reference scale (n = 5000): expect a long run.
        c.ensembles = {{"x^3", "x^6"}};
        c.coupling = {{100, 3}};
        c.entropy_grid = {0.44, 0.46};
        c.tasks = {Task::montecarlo};
        c.montecarlo.n = 5000;
        c.montecarlo.instance_count = 20;
        c.montecarlo.base_seed = 1;
        c.montecarlo.channels = {ChannelKind::BEC, ChannelKind::BSC, ChannelKind::AWGN};
        c.montecarlo.I = 20;
        c.output_dir = "out/fig5";
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return c;
}

int auto_chain_length(const DegreeDistribution& dd, double epsilon, int w, int max_shift) {
    double v_est = 1.0;
    try {
        const double b2 = bound_B2(dd, epsilon, w);
        if (b2 > 0.0) v_est = std::clamp(b2, 0.05, 1.0);
        // a non-positive B2 means the single-wave landscape assumptions do
        // not hold here (e.g. a second wave); keep the worst-case estimate
    } catch (const std::exception&) {
        // no bistable landscape to estimate from; use the worst case
    }
    const double t_measure = 400.0 + 2.0 * max_shift / v_est;
    const int travel = static_cast<int>(std::ceil(v_est * t_measure));
    return std::max(4 * w, travel + 4 * w);
}

namespace {

struct EnsembleInfo {
    DegreeDistribution dd;
    double eps_bp = std::numeric_limits<double>::quiet_NaN();
    double eps_area = std::numeric_limits<double>::quiet_NaN();
};

struct SpeedPoint {
    int ens = 0;
    Coupling cpl;
    double eps = 0.0;

    bool skipped = false;
    bool failed = false;
    std::string note;  // skip reason or error message

    int Np = 0;
    WaveMode mode = WaveMode::single_wave;
    std::vector<SpeedReport> reports;
    std::vector<TwoWaveSpeeds> two_wave;  // parallel to shifts in two_wave mode
    double alpha_est = std::numeric_limits<double>::quiet_NaN();
    BoundsReport bounds;
    bool have_bounds = false;
};

bool wants_retry(const std::string& msg) { return msg.find("extend N_prime") != std::string::npos; }

void compute_speed_point(const EnsembleInfo& ens, const ExperimentConfig& cfg,
                         const std::vector<int>& shifts, bool want_speed, bool want_bounds,
                         SpeedPoint& p) {
    if (!std::isnan(ens.eps_bp) && p.eps <= ens.eps_bp) {
        p.skipped = true;
        p.note = "below the decoding threshold (" + fmt(ens.eps_bp) + "): no travelling wave";
        return;
    }
    if (!std::isnan(ens.eps_area) && p.eps >= ens.eps_area) {
        p.skipped = true;
        p.note = "at or above the area threshold (" + fmt(ens.eps_area) + "): wave does not advance";
        return;
    }
    int Np = p.cpl.auto_N() ? auto_chain_length(ens.dd, p.eps, p.cpl.w, shifts.back()) : p.cpl.N;
    for (int attempt = 0;; ++attempt) {
        try {
            const CoupledConfig cc(ens.dd, Np, p.cpl.w, p.eps);
            const FormationResult formed = run_until_wave_formed(cc);
            if (!formed.formed) {
                p.failed = true;
                p.note = "wave did not form: " + formed.reason;
                return;
            }
            p.mode = formed.mode;
            p.Np = Np;
            if (want_speed) {
                p.reports = measure_speeds(cc, formed, shifts);
                if (formed.mode == WaveMode::two_wave)
                    for (int I : shifts) p.two_wave.push_back(measure_two_wave_speeds(cc, formed, I));
                try {
                    p.alpha_est = estimate_alpha(cc, formed).alpha;
                } catch (const std::exception&) {
                    // estimate stays NaN; the speed row is still useful
                }
            }
            if (want_bounds) {
                p.bounds = compute_bounds(cc, formed.profile, cfg.alpha, cfg.lb_variant);
                p.have_bounds = true;
            }
            return;
        } catch (const std::exception& e) {
            if (attempt == 0 && wants_retry(e.what())) {
                Np *= 2;
                continue;
            }
            p.failed = true;
            p.note = e.what();
            return;
        }
    }
}

struct McPoint {
    int ens = 0;
    Coupling cpl;
    ChannelKind kind = ChannelKind::BEC;
    double h = 0.0;

    bool failed = false;
    std::string note;

    int N = 0;
    MonteCarloResult result;
    bool have_result = false;
};

void compute_mc_point(const EnsembleInfo& ens, const ExperimentConfig& cfg, McPoint& p) {
    try {
        const ChannelModel channel = ChannelModel::from_entropy(p.kind, p.h);
        MonteCarloConfig mc(ens.dd);
        mc.w = p.cpl.w;
        mc.N = p.cpl.auto_N() ? auto_chain_length(ens.dd, p.h, p.cpl.w, cfg.montecarlo.I) : p.cpl.N;
        mc.n = cfg.montecarlo.n;
        mc.channel = channel;
        mc.instances = cfg.montecarlo.instance_count;
        mc.base_seed = cfg.montecarlo.base_seed;
        mc.I = cfg.montecarlo.I;
        mc.max_iters = cfg.montecarlo.max_iters;
        p.N = mc.N;
        p.result = run_montecarlo(mc);
        p.have_result = true;
    } catch (const std::exception& e) {
        p.failed = true;
        p.note = e.what();
    }
}

std::string point_label(const std::string& task, const std::string& id, const Coupling& c,
                        const std::string& grid) {
    std::string out = task + " ensemble=" + id;
    out += " w=" + std::to_string(c.w);
    if (!c.auto_N()) out += " N=" + std::to_string(c.N);
    return out + " " + grid;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();

    std::vector<EnsembleInfo> ens;
    ens.reserve(cfg.ensembles.size());
    for (const auto& spec : cfg.ensembles)
        ens.push_back({DegreeDistribution::parse(spec.L, spec.R)});

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    RunSummary sum;
    auto has = [&](Task t) { return std::find(cfg.tasks.begin(), cfg.tasks.end(), t) != cfg.tasks.end(); };

    // Decoding and area thresholds come first: cheap, and they delimit the
    // epsilon window where the speed/bounds sweep can find a wave at all.
    const bool need_window = has(Task::speed) || has(Task::bounds) || has(Task::thresholds);
    if (need_window)
        for (auto& e : ens) {
            try {
                e.eps_bp = bp_threshold(e.dd);
            } catch (const std::exception& ex) {
                ++sum.failures;
                sum.errors.push_back("thresholds ensemble=" + e.dd.id() + ": " + ex.what());
            }
            try {
                e.eps_area = area_threshold(e.dd);
            } catch (const std::exception& ex) {
                ++sum.failures;
                sum.errors.push_back("thresholds ensemble=" + e.dd.id() + ": " + ex.what());
            }
            ++sum.grid_points;
        }

    if (has(Task::thresholds)) {
        Table t;
        t.cols = {"ensemble-id", "epsilon_bp", "epsilon_area"};
        for (const auto& e : ens)
            t.rows.push_back({Cell::txt(e.dd.id()),
                              std::isnan(e.eps_bp) ? Cell::none() : Cell::num(e.eps_bp),
                              std::isnan(e.eps_area) ? Cell::none() : Cell::num(e.eps_area)});
        emit_table(dir, "thresholds", cfg.format, t, sum.files);
    }

    if (has(Task::fixed_points)) {
        Table t;
        t.cols = {"ensemble-id", "epsilon", "x", "stability"};
        for (const auto& e : ens)
            for (double eps : cfg.epsilon_grid) {
                ++sum.grid_points;
                try {
                    const FixedPointSet fps = find_fixed_points(e.dd, eps);
                    for (const auto& fp : fps.points)
                        t.rows.push_back({Cell::txt(e.dd.id()), Cell::num(eps), Cell::num(fp.x),
                                          Cell::txt(fp.stability == Stability::stable ? "stable"
                                                                                      : "unstable")});
                } catch (const std::exception& ex) {
                    ++sum.failures;
                    sum.errors.push_back("fixed_points ensemble=" + e.dd.id() + " eps=" + fmt(eps) +
                                         ": " + ex.what());
                }
            }
        emit_table(dir, "fixed_points", cfg.format, t, sum.files);
    }

    if (has(Task::potential_curve)) {
        Table t;
        t.cols = {"ensemble-id", "epsilon", "x", "U"};
        for (const auto& e : ens)
            for (double eps : cfg.epsilon_grid) {
                ++sum.grid_points;
                try {
                    for (const auto& [x, u] : potential_curve(e.dd, eps))
                        t.rows.push_back({Cell::txt(e.dd.id()), Cell::num(eps), Cell::num(x), Cell::num(u)});
                } catch (const std::exception& ex) {
                    ++sum.failures;
                    sum.errors.push_back("potential_curve ensemble=" + e.dd.id() + " eps=" + fmt(eps) +
                                         ": " + ex.what());
                }
            }
        emit_table(dir, "potential_curve", cfg.format, t, sum.files);
    }

    if (has(Task::profiles)) {
        Table t;
        t.cols = {"ensemble-id", "N", "w", "epsilon", "z", "x_z", "t"};
        std::vector<long> iters(cfg.profile_iters);
        std::sort(iters.begin(), iters.end());
        iters.erase(std::unique(iters.begin(), iters.end()), iters.end());
        for (std::size_t i = 0; i < ens.size(); ++i)
            for (const auto& cpl : cfg.coupling)
                for (double eps : cfg.epsilon_grid) {
                    ++sum.grid_points;
                    try {
                        const int Np = cpl.auto_N()
                                           ? auto_chain_length(ens[i].dd, eps, cpl.w, 20)
                                           : cpl.N;
                        const CoupledConfig cc(ens[i].dd, Np, cpl.w, eps);
                        DensityProfile prof = init_profile(cc);
                        CoupledStepper stepper(cc);
                        for (long target : iters) {
                            while (prof.t < target) {
                                stepper.step(prof.x);
                                ++prof.t;
                            }
                            for (std::size_t z = 0; z < prof.x.size(); ++z)
                                t.rows.push_back({Cell::txt(ens[i].dd.id()), Cell::inum(Np),
                                                  Cell::inum(cpl.w), Cell::num(eps),
                                                  Cell::inum(static_cast<long long>(z) + 1),
                                                  Cell::num(prof.x[z]), Cell::inum(target)});
                        }
                    } catch (const std::exception& ex) {
                        ++sum.failures;
                        sum.errors.push_back(point_label("profiles", ens[i].dd.id(), cpl,
                                                         "eps=" + fmt(eps)) +
                                             ": " + ex.what());
                    }
                }
        emit_table(dir, "profiles", cfg.format, t, sum.files);
    }

    if (has(Task::speed) || has(Task::bounds)) {
        std::vector<int> shifts(cfg.shifts);
        std::sort(shifts.begin(), shifts.end());
        shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
        if (shifts.empty()) shifts.push_back(20);

        std::vector<SpeedPoint> points;
        for (std::size_t i = 0; i < ens.size(); ++i)
            for (const auto& cpl : cfg.coupling)
                for (double eps : cfg.epsilon_grid) {
                    SpeedPoint p;
                    p.ens = static_cast<int>(i);
                    p.cpl = cpl;
                    p.eps = eps;
                    points.push_back(std::move(p));
                }

        const bool want_speed = has(Task::speed);
        const bool want_bounds = has(Task::bounds);
        parallel_for(cfg.jobs, static_cast<int>(points.size()), [&](int k) {
            try {
                compute_speed_point(ens[static_cast<std::size_t>(points[static_cast<std::size_t>(k)].ens)], cfg,
                                    shifts, want_speed, want_bounds, points[static_cast<std::size_t>(k)]);
            } catch (const std::exception& e) {
                points[static_cast<std::size_t>(k)].failed = true;
                points[static_cast<std::size_t>(k)].note = e.what();
            }
        });

        for (const auto& p : points) {
            ++sum.grid_points;
            const std::string label =
                point_label(want_speed && want_bounds ? "speed/bounds" : (want_speed ? "speed" : "bounds"),
                            ens[static_cast<std::size_t>(p.ens)].dd.id(), p.cpl, "eps=" + fmt(p.eps));
            if (p.skipped) {
                sum.skipped.push_back(label + ": " + p.note);
            } else if (p.failed) {
                ++sum.failures;
                sum.errors.push_back(label + ": " + p.note);
            }
        }

        if (want_speed) {
            Table t;
            t.cols = {"ensemble-id", "w",       "epsilon", "I",       "T_I",
                      "v_I",         "mode",    "v_upper", "v_lower", "alpha_est"};
            for (const auto& p : points) {
                if (p.skipped || p.failed) continue;
                for (std::size_t k = 0; k < p.reports.size(); ++k) {
                    const SpeedReport& r = p.reports[k];
                    const bool two = p.mode == WaveMode::two_wave && k < p.two_wave.size();
                    t.rows.push_back(
                        {Cell::txt(ens[static_cast<std::size_t>(p.ens)].dd.id()), Cell::inum(p.cpl.w),
                         Cell::num(p.eps), Cell::inum(r.I), Cell::inum(r.T_I), Cell::num(r.v_I),
                         Cell::txt(p.mode == WaveMode::two_wave ? "two_wave" : "single_wave"),
                         two ? Cell::num(p.two_wave[k].v_upper) : Cell::none(),
                         two ? Cell::num(p.two_wave[k].v_lower) : Cell::none(),
                         std::isnan(p.alpha_est) ? Cell::none() : Cell::num(p.alpha_est)});
                }
            }
            emit_table(dir, "speed", cfg.format, t, sum.files);
        }
        if (want_bounds) {
            Table t;
            t.cols = {"ensemble-id", "w",  "epsilon",      "alpha", "B1",
                      "B2",          "B2_finite_w", "LB",    "variant"};
            for (const auto& p : points) {
                if (p.skipped || p.failed || !p.have_bounds) continue;
                t.rows.push_back({Cell::txt(ens[static_cast<std::size_t>(p.ens)].dd.id()),
                                  Cell::inum(p.cpl.w), Cell::num(p.eps), Cell::num(p.bounds.alpha),
                                  Cell::num(p.bounds.B1), Cell::num(p.bounds.B2),
                                  p.bounds.B2_finite_w ? Cell::num(*p.bounds.B2_finite_w) : Cell::none(),
                                  Cell::num(p.bounds.LB), Cell::txt(to_string(p.bounds.variant))});
            }
            emit_table(dir, "bounds", cfg.format, t, sum.files);
        }
    }

    if (has(Task::montecarlo)) {
        const std::vector<double>& hgrid =
            cfg.entropy_grid.empty() ? cfg.epsilon_grid : cfg.entropy_grid;
        std::vector<McPoint> points;
        for (std::size_t i = 0; i < ens.size(); ++i)
            for (const auto& cpl : cfg.coupling)
                for (ChannelKind kind : cfg.montecarlo.channels)
                    for (double h : hgrid) {
                        McPoint p;
                        p.ens = static_cast<int>(i);
                        p.cpl = cpl;
                        p.kind = kind;
                        p.h = h;
                        points.push_back(std::move(p));
                    }

        parallel_for(cfg.jobs, static_cast<int>(points.size()), [&](int k) {
            try {
                compute_mc_point(ens[static_cast<std::size_t>(points[static_cast<std::size_t>(k)].ens)], cfg,
                                 points[static_cast<std::size_t>(k)]);
            } catch (const std::exception& e) {
                points[static_cast<std::size_t>(k)].failed = true;
                points[static_cast<std::size_t>(k)].note = e.what();
            }
        });

        Table t;
        t.cols = {"ensemble-id", "channel-kind", "h",        "n",        "N",       "w",
                  "seed",        "instance-count", "v_I_mean", "v_I_stderr", "stall_fraction"};
        for (const auto& p : points) {
            ++sum.grid_points;
            if (p.failed) {
                ++sum.failures;
                sum.errors.push_back(point_label("montecarlo", ens[static_cast<std::size_t>(p.ens)].dd.id(),
                                                 p.cpl,
                                                 to_string(p.kind) + " h=" + fmt(p.h)) +
                                     ": " + p.note);
                continue;
            }
            const MonteCarloResult& r = p.result;
            t.rows.push_back({Cell::txt(ens[static_cast<std::size_t>(p.ens)].dd.id()), Cell::txt(to_string(p.kind)),
                              Cell::num(p.h), Cell::inum(cfg.montecarlo.n), Cell::inum(p.N),
                              Cell::inum(p.cpl.w),
                              Cell::inum(static_cast<long long>(cfg.montecarlo.base_seed)),
                              Cell::inum(cfg.montecarlo.instance_count),
                              r.measured > 0 ? Cell::num(r.v_mean) : Cell::none(),
                              r.measured > 1 ? Cell::num(r.v_stderr) : Cell::none(),
                              Cell::num(r.stall_fraction)});
        }
        emit_table(dir, "montecarlo", cfg.format, t, sum.files);
    }

    sum.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["generated_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    manifest["wall_time_s"] = sum.wall_time_s;
    manifest["config"] = serialize_config(cfg);
    manifest["seeds"] = {{"montecarlo_base", cfg.montecarlo.base_seed}};
    manifest["files"] = sum.files;
    manifest["grid_points"] = sum.grid_points;
    manifest["failures"] = sum.failures;
    manifest["errors"] = sum.errors;
    manifest["skipped"] = sum.skipped;
    std::ofstream mf(dir / "manifest.json", std::ios::binary);
    if (!mf) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    mf << manifest.dump(2) << "\n";

    return sum;
}

}  // namespace scldpc
