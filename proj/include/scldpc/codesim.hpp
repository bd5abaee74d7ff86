#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scldpc/degree_distribution.hpp"

namespace scldpc {

// Finite-length validation: sampled code instances, BP decoding on the
// erasure/flip/Gaussian channels, and empirical wavefront speeds.

// Sampled Tanner graph of a coupled code. Variable positions 0..N-1 hold n
// variable nodes each; check positions 0..N+w-2 hold m = n*L'(1)/R'(1) check
// nodes each. Each variable position's sockets are split uniformly into w
// equal groups, group j wired to check position z+j and matched uniformly at
// random against that position's check sockets. Boundary check sockets that
// receive no group stay unwired, which on a symmetric channel is the same as
// being driven by known-zero virtual variables.
struct CodeInstance {
    int n = 0;  // variable nodes per position
    int m = 0;  // check nodes per position
    int N = 0;  // variable positions
    int w = 0;
    std::uint64_t seed = 0;

    // Flat edge list plus CSR adjacency from both sides.
    std::vector<std::int32_t> edge_var, edge_check;
    std::vector<std::int32_t> var_ptr, var_edges;
    std::vector<std::int32_t> check_ptr, check_edges;

    int num_vars() const { return n * N; }
    int num_checks() const { return m * (N + w - 1); }
    int num_edges() const { return static_cast<int>(edge_var.size()); }
    int var_position(int v) const { return v / n; }
    int check_position(int c) const { return c / m; }
};

// Degree quantization: per position, floor(count * share_d) nodes of degree d
// with the remainder going to the largest fractional parts. Throws when the
// resulting sockets cannot balance (listing the residual) or when the
// variable sockets do not split into w equal groups.
CodeInstance sample_instance(const DegreeDistribution& dd, int N, int w, int n,
                             std::uint64_t seed);

enum class ChannelKind { BEC, BSC, AWGN };

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& s);

// Channel with its entropy h: BEC h = eps; BSC h = binary entropy of the flip
// probability; AWGN (unit BPSK signaling, noise variance sigma^2) the
// expected soft bit entropy E[log2(1 + exp(-L))] of the channel likelihood
// ratio L ~ Normal(2/sigma^2, 4/sigma^2).
struct ChannelModel {
    ChannelKind kind = ChannelKind::BEC;
    double param = 0.0;  // eps / p / sigma
    double entropy = 0.0;

    static ChannelModel from_param(ChannelKind kind, double param);
    static ChannelModel from_entropy(ChannelKind kind, double h);
};

double bsc_entropy(double p);
double awgn_entropy(double sigma);

// Per-iteration positional error metric of one decode. For the erasure
// decoder the metric is the fraction of erased variable-to-check messages
// grouped by check position (the quantity coupled DE tracks); for the
// likelihood decoders it is the hard-decision error fraction per variable
// position.
struct DecodeTrace {
    std::vector<std::vector<double>> metric;  // [iteration][position]
    bool recovered = false;
    bool stalled = false;
    long iters = 0;
};

std::vector<std::uint8_t> sample_bec_erasures(int count, double eps, std::uint64_t noise_seed);

DecodeTrace bp_decode_bec(const CodeInstance& inst, const std::vector<std::uint8_t>& erased,
                          long max_iters);

// All-zero codeword, log-likelihood flooding with tanh check updates,
// messages clamped to +-30.
DecodeTrace bp_decode_bms(const CodeInstance& inst, const ChannelModel& channel,
                          std::uint64_t noise_seed, long max_iters);

// Mean speed of the metric front (largest position above half the bulk
// plateau). Front displacement is averaged over every sliding window of I
// positions that stays in clean territory: at least 2w from the array ends,
// and for inward-moving fronts at least w past the midpoint (where the two
// decoding waves of a finite chain meet). Throws "no front" when the trace
// never yields a valid window.
double empirical_speed(const DecodeTrace& trace, int I, int w);

struct MonteCarloConfig {
    explicit MonteCarloConfig(DegreeDistribution dd_) : dd(std::move(dd_)) {}

    DegreeDistribution dd;
    int N = 0;
    int w = 0;
    int n = 0;
    ChannelModel channel;
    int instances = 100;
    std::uint64_t base_seed = 1;
    int I = 20;
    long max_iters = 4000;
};

struct MonteCarloResult {
    double v_mean = 0.0;
    double v_stderr = 0.0;
    double stall_fraction = 0.0;
    int instances = 0;
    int measured = 0;  // instances that produced a speed sample
    std::vector<double> per_instance_v;
};

MonteCarloResult run_montecarlo(const MonteCarloConfig& cfg);

// Deterministic seed derivation for instance/noise streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace scldpc
