#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "scldpc/bounds.hpp"
#include "scldpc/codesim.hpp"
#include "scldpc/degree_distribution.hpp"

namespace scldpc {

// Batch experiment runner: a text config describes an ensemble sweep, and
// run_experiment emits one plot-ready CSV/JSON file per requested task plus a
// run manifest.

inline constexpr const char* kVersion = "1.0.0";

enum class Task { profiles, thresholds, fixed_points, potential_curve, speed, bounds, montecarlo };

std::string to_string(Task t);
Task task_from_string(const std::string& s);

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

// Invalid configuration (parse errors, bad grids, unknown keys). The CLI
// maps this to its config-error exit status.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Chain geometry for one sweep entry. N <= 0 means "auto": speed tasks size
// the chain from the closed-form bound estimate (see auto_chain_length).
struct Coupling {
    int N = 0;
    int w = 3;

    bool auto_N() const { return N <= 0; }
    bool operator==(const Coupling&) const = default;
};

struct EnsembleSpec {
    std::string L, R;  // polynomial text, e.g. "(19/20)x^3+(1/20)x^23"

    bool operator==(const EnsembleSpec&) const = default;
};

struct MonteCarloOptions {
    int n = 5000;            // variable nodes per position
    int instance_count = 20;
    std::uint64_t base_seed = 1;
    std::vector<ChannelKind> channels{ChannelKind::BEC};
    int I = 20;              // front shift used for the empirical speed
    long max_iters = 4000;

    bool operator==(const MonteCarloOptions&) const = default;
};

struct ExperimentConfig {
    std::vector<EnsembleSpec> ensembles;
    std::vector<Coupling> coupling;
    std::vector<double> epsilon_grid;   // erasure rates
    std::vector<double> entropy_grid;   // channel entropies (montecarlo); falls back to epsilon_grid
    std::vector<Task> tasks;
    std::vector<long> profile_iters;    // snapshots for the profiles task
    std::vector<int> shifts{1, 20};     // I values for speed rows
    MonteCarloOptions montecarlo;
    std::string output_dir = "out";
    OutputFormat format = OutputFormat::csv;
    double alpha = 1.0;
    LBVariant lb_variant = LBVariant::as_tabulated;
    int jobs = 1;

    bool operator==(const ExperimentConfig&) const = default;

    // Throws ConfigError: tasks non-empty, grids sorted ascending and in
    // range, ensembles parseable, montecarlo settings sane when requested.
    void validate() const;
};

// Line-oriented "key = value" text (see README for the key list); '#' starts
// a comment. serialize_config(cfg) parses back to an equal config, which is
// how the manifest's config echo round-trips.
ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);

// Canned configurations reproducing the reference artifacts: "table1",
// "fig2" (wave profiles), "fig3" (regular-ensemble speed curves), "fig4"
// (degree-4 comparison plus the five-fixed-point ensemble), "fig5"
// (BEC/BSC/AWGN Monte-Carlo). Throws ConfigError on unknown names.
ExperimentConfig preset(const std::string& name);

// Chain length for speed tasks when N is "auto": travel allowance
// ceil(v_est * t_measure) + 4w with v_est the closed-form speed bound
// (clamped to [0.05, 1]) and t_measure a formation allowance plus the
// measurement horizon 2*max_shift/v_est. One retry at doubled length happens
// inside run_experiment when a wave still reaches the boundary.
int auto_chain_length(const DegreeDistribution& dd, double epsilon, int w, int max_shift);

struct RunSummary {
    int grid_points = 0;
    int failures = 0;
    std::vector<std::string> errors;   // one entry per failed grid point
    std::vector<std::string> skipped;  // grid points outside an ensemble's wave window
    std::vector<std::string> files;    // emitted data files (relative to output_dir)
    double wall_time_s = 0.0;

    bool ok() const { return failures == 0; }
};

// Executes the configured tasks in dependency order (thresholds gate the
// speed/bounds sweep to each ensemble's wave window; formed waves are shared
// between the speed and bounds tasks). A failing grid point is recorded and
// the sweep continues. Files go to cfg.output_dir; data rows are fully
// deterministic for fixed seeds, timestamps live only in manifest.json.
RunSummary run_experiment(const ExperimentConfig& cfg);

}  // namespace scldpc
