#include "scldpc/codesim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace scldpc {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

// Explicit draws on top of mt19937_64 keep sampled instances reproducible
// across standard libraries (distribution objects are not pinned down by the
// standard).
std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = g();
        if (r >= threshold) return r % bound;
    }
}

double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

struct GaussianSource {
    std::mt19937_64 g;
    bool has_spare = false;
    double spare = 0.0;

    explicit GaussianSource(std::uint64_t seed) : g(seed) {}

    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u1 = uniform01(g);
        while (u1 <= 0.0) u1 = uniform01(g);
        const double u2 = uniform01(g);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare = r * std::sin(a);
        has_spare = true;
        return r * std::cos(a);
    }
};

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_below(g, i))]);
}

// Per-position degree counts: floor(total * share) per degree, remainder to
// the largest fractional parts.
std::vector<std::pair<int, int>> quantize_degrees(int total, const DegreeDistribution::Terms& terms) {
    std::vector<std::pair<int, int>> counts;  // (degree, count)
    std::vector<std::pair<double, std::size_t>> fracs;
    long assigned = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double exact = total * terms[i].second;
        const int base = static_cast<int>(std::floor(exact));
        counts.emplace_back(terms[i].first, base);
        fracs.emplace_back(exact - base, i);
        assigned += base;
    }
    long rem = total - assigned;
    std::stable_sort(fracs.begin(), fracs.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; rem > 0 && k < fracs.size(); ++k, --rem) ++counts[fracs[k].second].second;
    return counts;
}

long socket_total(const std::vector<std::pair<int, int>>& counts) {
    long s = 0;
    for (const auto& [d, c] : counts) s += static_cast<long>(d) * c;
    return s;
}

}  // namespace

CodeInstance sample_instance(const DegreeDistribution& dd, int N, int w, int n,
                             std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_instance: n must be >= 1");
    if (N < 1) throw std::invalid_argument("sample_instance: N must be >= 1");
    if (w < 2) throw std::invalid_argument("sample_instance: w must be >= 2");

    const auto var_counts = quantize_degrees(n, dd.L_terms());
    const long sockets = socket_total(var_counts);
    if (sockets % w != 0)
        throw std::invalid_argument("infeasible quantization: " + std::to_string(sockets) +
                                    " variable sockets per position do not split into " +
                                    std::to_string(w) + " equal groups");
    const int m = static_cast<int>(std::llround(sockets / dd.R_prime_one()));
    const auto check_counts = quantize_degrees(m, dd.R_terms());
    const long check_sockets = socket_total(check_counts);
    if (check_sockets != sockets)
        throw std::invalid_argument(
            "infeasible quantization: residual socket imbalance of " +
            std::to_string(check_sockets - sockets) + " per position (" + std::to_string(sockets) +
            " variable sockets vs " + std::to_string(check_sockets) + " check sockets); pick n so both sides quantize evenly");

    CodeInstance inst;
    inst.n = n;
    inst.m = m;
    inst.N = N;
    inst.w = w;
    inst.seed = seed;

    const int cpos = N + w - 1;
    const int V = n * N;
    const int C = m * cpos;
    const long E = sockets * N;
    inst.edge_var.reserve(static_cast<std::size_t>(E));
    inst.edge_check.reserve(static_cast<std::size_t>(E));

    std::mt19937_64 rng(seed);

    // Shuffled socket owner lists per check position, consumed in arrival
    // order by the variable groups wired into that position.
    std::vector<std::vector<std::int32_t>> check_sock(static_cast<std::size_t>(cpos));
    std::vector<std::size_t> used(static_cast<std::size_t>(cpos), 0);
    for (int c = 0; c < cpos; ++c) {
        auto& sock = check_sock[static_cast<std::size_t>(c)];
        sock.reserve(static_cast<std::size_t>(sockets));
        int node = c * m;
        for (const auto& [deg, cnt] : check_counts)
            for (int i = 0; i < cnt; ++i, ++node)
                for (int s = 0; s < deg; ++s) sock.push_back(node);
        fisher_yates(sock, rng);
    }

    const long group = sockets / w;
    std::vector<std::int32_t> var_sock(static_cast<std::size_t>(sockets));
    for (int p = 0; p < N; ++p) {
        std::size_t k = 0;
        int node = p * n;
        for (const auto& [deg, cnt] : var_counts)
            for (int i = 0; i < cnt; ++i, ++node)
                for (int s = 0; s < deg; ++s) var_sock[k++] = node;
        fisher_yates(var_sock, rng);
        for (int j = 0; j < w; ++j) {
            const int c = p + j;
            auto& sock = check_sock[static_cast<std::size_t>(c)];
            std::size_t& u = used[static_cast<std::size_t>(c)];
            for (long s = 0; s < group; ++s) {
                inst.edge_var.push_back(var_sock[static_cast<std::size_t>(j * group + s)]);
                inst.edge_check.push_back(sock[u++]);
            }
        }
    }

    // CSR adjacency on both sides.
    const int Ei = inst.num_edges();
    inst.var_ptr.assign(static_cast<std::size_t>(V) + 1, 0);
    inst.check_ptr.assign(static_cast<std::size_t>(C) + 1, 0);
    for (int e = 0; e < Ei; ++e) {
        ++inst.var_ptr[static_cast<std::size_t>(inst.edge_var[static_cast<std::size_t>(e)]) + 1];
        ++inst.check_ptr[static_cast<std::size_t>(inst.edge_check[static_cast<std::size_t>(e)]) + 1];
    }
    for (int v = 0; v < V; ++v) inst.var_ptr[static_cast<std::size_t>(v) + 1] += inst.var_ptr[static_cast<std::size_t>(v)];
    for (int c = 0; c < C; ++c) inst.check_ptr[static_cast<std::size_t>(c) + 1] += inst.check_ptr[static_cast<std::size_t>(c)];
    inst.var_edges.resize(static_cast<std::size_t>(Ei));
    inst.check_edges.resize(static_cast<std::size_t>(Ei));
    std::vector<std::int32_t> vfill(inst.var_ptr.begin(), inst.var_ptr.end() - 1);
    std::vector<std::int32_t> cfill(inst.check_ptr.begin(), inst.check_ptr.end() - 1);
    for (int e = 0; e < Ei; ++e) {
        inst.var_edges[static_cast<std::size_t>(vfill[static_cast<std::size_t>(inst.edge_var[static_cast<std::size_t>(e)])]++)] =
            static_cast<std::int32_t>(e);
        inst.check_edges[static_cast<std::size_t>(cfill[static_cast<std::size_t>(inst.edge_check[static_cast<std::size_t>(e)])]++)] =
            static_cast<std::int32_t>(e);
    }
    return inst;
}

std::string to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::BEC: return "BEC";
        case ChannelKind::BSC: return "BSC";
        case ChannelKind::AWGN: return "AWGN";
    }
    return "?";
}

ChannelKind channel_kind_from_string(const std::string& s) {
    if (s == "BEC" || s == "bec") return ChannelKind::BEC;
    if (s == "BSC" || s == "bsc") return ChannelKind::BSC;
    if (s == "AWGN" || s == "awgn") return ChannelKind::AWGN;
    throw std::invalid_argument("unknown channel kind: " + s);
}

namespace {

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// log2(1 + exp(-l)), stable across the whole likelihood range.
double soft_bit_entropy(double l) {
    if (l < -700.0) return -l / M_LN2 / 1.0;  // exp(-l) overflows; log(1+e^-l) ~ -l
    return std::log1p(std::exp(-l)) / M_LN2;
}

double awgn_entropy_grid(double sigma, int intervals) {
    // E over L ~ Normal(mu, s^2) of log2(1 + exp(-L)) via Simpson on the
    // standardized variable over +-12 deviations.
    const double mu = 2.0 / (sigma * sigma);
    const double s = 2.0 / sigma;
    const double lo = -12.0, hi = 12.0;
    const double h = (hi - lo) / intervals;
    auto f = [&](double u) {
        return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI) * soft_bit_entropy(mu + s * u);
    };
    double acc = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

double bsc_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bsc_entropy: p outside [0,1]");
    return -xlog2x(p) - xlog2x(1.0 - p);
}

double awgn_entropy(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("awgn_entropy: sigma must be positive");
    double prev = awgn_entropy_grid(sigma, 1 << 9);
    for (int n = 1 << 10; n <= (1 << 16); n <<= 1) {
        const double cur = awgn_entropy_grid(sigma, n);
        if (std::abs(cur - prev) < 1e-12) return cur;
        prev = cur;
    }
    return prev;
}

ChannelModel ChannelModel::from_param(ChannelKind kind, double param) {
    ChannelModel ch;
    ch.kind = kind;
    ch.param = param;
    switch (kind) {
        case ChannelKind::BEC:
            if (!(param >= 0.0 && param <= 1.0)) throw std::invalid_argument("BEC erasure rate outside [0,1]");
            ch.entropy = param;
            break;
        case ChannelKind::BSC:
            if (!(param >= 0.0 && param <= 0.5)) throw std::invalid_argument("BSC flip rate outside [0,0.5]");
            ch.entropy = bsc_entropy(param);
            break;
        case ChannelKind::AWGN:
            ch.entropy = awgn_entropy(param);
            break;
    }
    return ch;
}

ChannelModel ChannelModel::from_entropy(ChannelKind kind, double h) {
    if (!(h >= 0.0 && h <= 1.0)) throw std::invalid_argument("channel entropy outside [0,1]");
    ChannelModel ch;
    ch.kind = kind;
    ch.entropy = h;
    switch (kind) {
        case ChannelKind::BEC:
            ch.param = h;
            break;
        case ChannelKind::BSC: {
            double lo = 0.0, hi = 0.5;
            for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
                const double mid = 0.5 * (lo + hi);
                (bsc_entropy(mid) < h ? lo : hi) = mid;
            }
            ch.param = 0.5 * (lo + hi);
            break;
        }
        case ChannelKind::AWGN: {
            double lo = 0.05, hi = 20.0;
            if (awgn_entropy(lo) > h || awgn_entropy(hi) < h)
                throw std::invalid_argument("AWGN entropy out of invertible range");
            for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
                const double mid = 0.5 * (lo + hi);
                (awgn_entropy(mid) < h ? lo : hi) = mid;
            }
            ch.param = 0.5 * (lo + hi);
            break;
        }
    }
    return ch;
}

std::vector<std::uint8_t> sample_bec_erasures(int count, double eps, std::uint64_t noise_seed) {
    std::mt19937_64 g(noise_seed);
    std::vector<std::uint8_t> erased(static_cast<std::size_t>(count));
    for (auto& e : erased) e = uniform01(g) < eps ? 1 : 0;
    return erased;
}

DecodeTrace bp_decode_bec(const CodeInstance& inst, const std::vector<std::uint8_t>& erased,
                          long max_iters) {
    if (static_cast<int>(erased.size()) != inst.num_vars())
        throw std::invalid_argument("bp_decode_bec: erasure pattern length mismatch");
    const int E = inst.num_edges();
    const int V = inst.num_vars();
    const int C = inst.num_checks();
    const int cpos = inst.N + inst.w - 1;
    // DE tracks the message erasure fraction over the full socket budget of a
    // check position: unwired boundary sockets count as known.
    const double full_sockets = static_cast<double>(E) / inst.N;

    std::vector<std::uint8_t> v2c(static_cast<std::size_t>(E)), c2v(static_cast<std::size_t>(E), 0);
    for (int e = 0; e < E; ++e)
        v2c[static_cast<std::size_t>(e)] = erased[static_cast<std::size_t>(inst.edge_var[static_cast<std::size_t>(e)])] ? 0 : 1;  // known flag

    DecodeTrace trace;
    auto record = [&]() {
        std::vector<double> row(static_cast<std::size_t>(cpos), 0.0);
        for (int e = 0; e < E; ++e)
            if (!v2c[static_cast<std::size_t>(e)])
                row[static_cast<std::size_t>(inst.check_position(inst.edge_check[static_cast<std::size_t>(e)]))] += 1.0;
        long erased_total = 0;
        for (auto& r : row) {
            erased_total += static_cast<long>(r);
            r /= full_sockets;
        }
        trace.metric.push_back(std::move(row));
        return erased_total;
    };

    long prev_total = record();
    for (long t = 1; t <= max_iters && prev_total > 0; ++t) {
        for (int c = 0; c < C; ++c) {
            const std::int32_t b = inst.check_ptr[static_cast<std::size_t>(c)];
            const std::int32_t eend = inst.check_ptr[static_cast<std::size_t>(c) + 1];
            int unknown = 0;
            std::int32_t unknown_e = -1;
            for (std::int32_t k = b; k < eend; ++k) {
                const std::int32_t e = inst.check_edges[static_cast<std::size_t>(k)];
                if (!v2c[static_cast<std::size_t>(e)]) {
                    ++unknown;
                    unknown_e = e;
                }
            }
            if (unknown == 0) {
                for (std::int32_t k = b; k < eend; ++k) c2v[static_cast<std::size_t>(inst.check_edges[static_cast<std::size_t>(k)])] = 1;
            } else if (unknown == 1) {
                for (std::int32_t k = b; k < eend; ++k) {
                    const std::int32_t e = inst.check_edges[static_cast<std::size_t>(k)];
                    c2v[static_cast<std::size_t>(e)] = (e == unknown_e) ? 1 : 0;
                }
            } else {
                for (std::int32_t k = b; k < eend; ++k) c2v[static_cast<std::size_t>(inst.check_edges[static_cast<std::size_t>(k)])] = 0;
            }
        }
        for (int v = 0; v < V; ++v) {
            const std::int32_t b = inst.var_ptr[static_cast<std::size_t>(v)];
            const std::int32_t eend = inst.var_ptr[static_cast<std::size_t>(v) + 1];
            const int ch_known = erased[static_cast<std::size_t>(v)] ? 0 : 1;
            int known_in = 0;
            for (std::int32_t k = b; k < eend; ++k) known_in += c2v[static_cast<std::size_t>(inst.var_edges[static_cast<std::size_t>(k)])];
            for (std::int32_t k = b; k < eend; ++k) {
                const std::int32_t e = inst.var_edges[static_cast<std::size_t>(k)];
                v2c[static_cast<std::size_t>(e)] =
                    (ch_known || known_in - c2v[static_cast<std::size_t>(e)] > 0) ? 1 : 0;
            }
        }
        const long total = record();
        trace.iters = t;
        if (total == 0) {
            trace.recovered = true;
            break;
        }
        if (total == prev_total) {  // erasure decoding is monotone: no change means a stuck set
            trace.stalled = true;
            break;
        }
        prev_total = total;
    }
    if (prev_total == 0) trace.recovered = true;
    if (!trace.recovered && !trace.stalled) trace.stalled = true;  // ran out of iterations
    return trace;
}

DecodeTrace bp_decode_bms(const CodeInstance& inst, const ChannelModel& channel,
                          std::uint64_t noise_seed, long max_iters) {
    if (channel.kind == ChannelKind::BEC)
        throw std::invalid_argument("bp_decode_bms: use bp_decode_bec for the erasure channel");
    constexpr double kClamp = 30.0;
    const int E = inst.num_edges();
    const int V = inst.num_vars();
    const int C = inst.num_checks();

    // All-zero codeword; bit 0 maps to +1.
    std::vector<double> llr_ch(static_cast<std::size_t>(V));
    if (channel.kind == ChannelKind::BSC) {
        std::mt19937_64 g(noise_seed);
        const double p = channel.param;
        const double mag = std::log((1.0 - p) / p);
        for (auto& l : llr_ch) l = uniform01(g) < p ? -mag : mag;
    } else {
        GaussianSource g(noise_seed);
        const double sigma = channel.param;
        for (auto& l : llr_ch) l = 2.0 * (1.0 + sigma * g.next()) / (sigma * sigma);
    }

    std::vector<double> v2c(static_cast<std::size_t>(E)), c2v(static_cast<std::size_t>(E), 0.0);
    for (int e = 0; e < E; ++e) v2c[static_cast<std::size_t>(e)] = llr_ch[static_cast<std::size_t>(inst.edge_var[static_cast<std::size_t>(e)])];

    DecodeTrace trace;
    std::vector<double> row(static_cast<std::size_t>(inst.N));
    std::vector<double> th;  // per-check scratch

    auto hard_decide = [&](bool from_channel_only) -> long {
        std::fill(row.begin(), row.end(), 0.0);
        long errs = 0;
        for (int v = 0; v < V; ++v) {
            double total = llr_ch[static_cast<std::size_t>(v)];
            if (!from_channel_only) {
                const std::int32_t b = inst.var_ptr[static_cast<std::size_t>(v)];
                const std::int32_t eend = inst.var_ptr[static_cast<std::size_t>(v) + 1];
                for (std::int32_t k = b; k < eend; ++k) total += c2v[static_cast<std::size_t>(inst.var_edges[static_cast<std::size_t>(k)])];
            }
            if (!(total > 0.0)) {
                ++errs;
                row[static_cast<std::size_t>(inst.var_position(v))] += 1.0;
            }
        }
        for (auto& r : row) r /= inst.n;
        trace.metric.push_back(row);
        return errs;
    };

    hard_decide(true);
    // A moving front keeps lowering the error count; a front pinned on a
    // trapping set oscillates around a floor. Cut the run once no new low
    // has been seen for a full window.
    constexpr long kStallWindow = 100;
    long best_errs = std::numeric_limits<long>::max();
    long best_at = 0;
    for (long t = 1; t <= max_iters; ++t) {
        for (int e = 0; e < E; ++e) {
            double& msg = v2c[static_cast<std::size_t>(e)];
            msg = std::clamp(msg, -kClamp, kClamp);
        }
        for (int c = 0; c < C; ++c) {
            const std::int32_t b = inst.check_ptr[static_cast<std::size_t>(c)];
            const std::int32_t eend = inst.check_ptr[static_cast<std::size_t>(c) + 1];
            const int deg = eend - b;
            th.resize(static_cast<std::size_t>(deg));
            for (int k = 0; k < deg; ++k)
                th[static_cast<std::size_t>(k)] =
                    std::tanh(0.5 * v2c[static_cast<std::size_t>(inst.check_edges[static_cast<std::size_t>(b + k)])]);
            // leave-one-out products via prefix/suffix sweeps
            double suffix = 1.0;
            for (int k = deg - 1; k >= 0; --k) {
                const std::int32_t e = inst.check_edges[static_cast<std::size_t>(b + k)];
                c2v[static_cast<std::size_t>(e)] = suffix;
                suffix *= th[static_cast<std::size_t>(k)];
            }
            double prefix = 1.0;
            for (int k = 0; k < deg; ++k) {
                const std::int32_t e = inst.check_edges[static_cast<std::size_t>(b + k)];
                const double prod = std::clamp(prefix * c2v[static_cast<std::size_t>(e)], -1.0 + 1e-15, 1.0 - 1e-15);
                c2v[static_cast<std::size_t>(e)] = std::clamp(2.0 * std::atanh(prod), -kClamp, kClamp);
                prefix *= th[static_cast<std::size_t>(k)];
            }
        }
        for (int v = 0; v < V; ++v) {
            const std::int32_t b = inst.var_ptr[static_cast<std::size_t>(v)];
            const std::int32_t eend = inst.var_ptr[static_cast<std::size_t>(v) + 1];
            double total = llr_ch[static_cast<std::size_t>(v)];
            for (std::int32_t k = b; k < eend; ++k) total += c2v[static_cast<std::size_t>(inst.var_edges[static_cast<std::size_t>(k)])];
            for (std::int32_t k = b; k < eend; ++k) {
                const std::int32_t e = inst.var_edges[static_cast<std::size_t>(k)];
                v2c[static_cast<std::size_t>(e)] = total - c2v[static_cast<std::size_t>(e)];
            }
        }
        const long errs = hard_decide(false);
        trace.iters = t;
        if (errs == 0) {
            trace.recovered = true;
            break;
        }
        if (errs < best_errs) {
            best_errs = errs;
            best_at = t;
        } else if (t - best_at >= kStallWindow) {
            break;
        }
    }
    trace.stalled = !trace.recovered;
    return trace;
}

double empirical_speed(const DecodeTrace& trace, int I, int w) {
    if (I < 1) throw std::invalid_argument("empirical_speed: shift must be >= 1");
    const long T = static_cast<long>(trace.metric.size());
    if (T < 2) throw std::runtime_error("no front: trace too short");
    const int P = static_cast<int>(trace.metric.front().size());

    std::vector<double> plateau(static_cast<std::size_t>(T));
    std::vector<int> front(static_cast<std::size_t>(T), -1);
    double plateau_ref = 0.0;
    for (long t = 0; t < T; ++t) {
        const auto& row = trace.metric[static_cast<std::size_t>(t)];
        double pk = 0.0;
        for (double v : row) pk = std::max(pk, v);
        plateau[static_cast<std::size_t>(t)] = pk;
        plateau_ref = std::max(plateau_ref, pk);
        for (int z = P - 1; z >= 0; --z)
            if (row[static_cast<std::size_t>(z)] > pk / 2.0) {
                front[static_cast<std::size_t>(t)] = z;
                break;
            }
    }

    auto in_range = [&](long t) {
        const int f = front[static_cast<std::size_t>(t)];
        return plateau[static_cast<std::size_t>(t)] >= 0.25 * plateau_ref && f >= 2 * w &&
               f <= P - 1 - 2 * w;
    };

    long first = -1, last = -1;
    for (long t = 0; t < T; ++t)
        if (in_range(t)) {
            if (first < 0) first = t;
            last = t;
        }
    if (first < 0 || front[static_cast<std::size_t>(last)] == front[static_cast<std::size_t>(first)])
        throw std::runtime_error("no front: the metric never forms a travelling wave");
    const int dir = front[static_cast<std::size_t>(last)] > front[static_cast<std::size_t>(first)] ? 1 : -1;

    // Inward-moving fronts (finite chains decode from both ends) must stop
    // before the waves meet at the midpoint.
    const double mid = (P - 1) / 2.0;
    auto eligible = [&](long t) {
        if (!in_range(t)) return false;
        return dir > 0 || front[static_cast<std::size_t>(t)] >= mid + w;
    };

    double acc = 0.0;
    long count = 0;
    for (long t = first; t <= last; ++t) {
        if (!eligible(t)) continue;
        for (long u = t + 1; u <= last; ++u) {
            if (!eligible(u)) break;
            if (dir * (front[static_cast<std::size_t>(u)] - front[static_cast<std::size_t>(t)]) >= I) {
                acc += static_cast<double>(I) / static_cast<double>(u - t);
                ++count;
                break;
            }
        }
    }
    if (count == 0) throw std::runtime_error("no front: front advance never reached the requested shift");
    return acc / static_cast<double>(count);
}

MonteCarloResult run_montecarlo(const MonteCarloConfig& cfg) {
    MonteCarloResult res;
    res.instances = cfg.instances;
    int stalls = 0;
    for (int i = 0; i < cfg.instances; ++i) {
        const std::uint64_t inst_seed = mix_seed(cfg.base_seed, 2 * static_cast<std::uint64_t>(i));
        const std::uint64_t noise_seed = mix_seed(cfg.base_seed, 2 * static_cast<std::uint64_t>(i) + 1);
        const CodeInstance inst = sample_instance(cfg.dd, cfg.N, cfg.w, cfg.n, inst_seed);
        DecodeTrace trace;
        if (cfg.channel.kind == ChannelKind::BEC) {
            const auto erased = sample_bec_erasures(inst.num_vars(), cfg.channel.param, noise_seed);
            trace = bp_decode_bec(inst, erased, cfg.max_iters);
        } else {
            trace = bp_decode_bms(inst, cfg.channel, noise_seed, cfg.max_iters);
        }
        if (trace.stalled) ++stalls;
        try {
            res.per_instance_v.push_back(empirical_speed(trace, cfg.I, cfg.w));
        } catch (const std::runtime_error&) {
            // no usable front on this instance; it still counts toward stalls above
        }
    }
    res.measured = static_cast<int>(res.per_instance_v.size());
    res.stall_fraction = cfg.instances > 0 ? static_cast<double>(stalls) / cfg.instances : 0.0;
    if (res.measured > 0) {
        const double mean = std::accumulate(res.per_instance_v.begin(), res.per_instance_v.end(), 0.0) /
                            res.measured;
        res.v_mean = mean;
        if (res.measured > 1) {
            double ss = 0.0;
            for (double v : res.per_instance_v) ss += (v - mean) * (v - mean);
            res.v_stderr = std::sqrt(ss / (res.measured - 1)) / std::sqrt(static_cast<double>(res.measured));
        }
    }
    return res;
}

}  // namespace scldpc
