#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "scldpc/codesim.hpp"
#include "scldpc/coupled.hpp"
#include "scldpc/degree_distribution.hpp"

using namespace scldpc;

namespace {

DegreeDistribution dd36() { return DegreeDistribution::parse("x^3", "x^6"); }

}  // namespace

TEST_CASE("channel names round-trip") {
    for (auto k : {ChannelKind::BEC, ChannelKind::BSC, ChannelKind::AWGN})
        CHECK(channel_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(channel_kind_from_string("bec "), std::invalid_argument);
}

TEST_CASE("channel entropies behave like entropies") {
    CHECK(bsc_entropy(0.0) == 0.0);
    CHECK(bsc_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    double prev = -1.0;
    for (double p = 0.01; p <= 0.5; p += 0.01) {
        const double h = bsc_entropy(p);
        CHECK(h > prev);
        prev = h;
    }
    CHECK_THROWS_AS(bsc_entropy(-0.1), std::invalid_argument);

    prev = -1.0;
    for (double s = 0.3; s <= 3.0; s += 0.1) {
        const double h = awgn_entropy(s);
        CHECK(h > prev);
        CHECK(h >= 0.0);
        CHECK(h <= 1.0);
        prev = h;
    }
    CHECK_THROWS_AS(awgn_entropy(0.0), std::invalid_argument);
}

TEST_CASE("channels invert their entropy") {
    const auto bec = ChannelModel::from_entropy(ChannelKind::BEC, 0.46);
    CHECK(bec.param == doctest::Approx(0.46));
    CHECK(bec.entropy == doctest::Approx(0.46));

    const auto bsc = ChannelModel::from_entropy(ChannelKind::BSC, 0.46);
    CHECK(bsc.param == doctest::Approx(0.097182).epsilon(1e-4));
    CHECK(bsc_entropy(bsc.param) == doctest::Approx(0.46).epsilon(1e-9));

    const auto awgn = ChannelModel::from_entropy(ChannelKind::AWGN, 0.46);
    CHECK(awgn_entropy(awgn.param) == doctest::Approx(0.46).epsilon(1e-6));

    CHECK_THROWS_AS(ChannelModel::from_entropy(ChannelKind::BEC, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(ChannelModel::from_param(ChannelKind::BSC, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(ChannelModel::from_param(ChannelKind::BEC, -0.1), std::invalid_argument);

    const auto direct = ChannelModel::from_param(ChannelKind::BSC, 0.097182);
    CHECK(direct.entropy == doctest::Approx(0.46).epsilon(1e-4));
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto dd = dd36();
    const auto a = sample_instance(dd, 10, 3, 60, 42);
    const auto b = sample_instance(dd, 10, 3, 60, 42);
    CHECK(a.edge_var == b.edge_var);
    CHECK(a.edge_check == b.edge_check);
    const auto c = sample_instance(dd, 10, 3, 60, 43);
    CHECK(a.edge_check != c.edge_check);
}

TEST_CASE("every edge respects the coupling window") {
    const auto dd = DegreeDistribution::parse("0.95 x^3 + 0.05 x^23", "x^8");
    for (int w : {2, 3, 4}) {
        const int n = 120;  // 480 sockets per position, splits for all three widths
        const auto inst = sample_instance(dd, 8, w, n, 7);
        CHECK(inst.num_edges() == 8 * n * 4);  // L'(1) = 4
        for (int e = 0; e < inst.num_edges(); ++e) {
            const int vp = inst.var_position(inst.edge_var[static_cast<std::size_t>(e)]);
            const int cp = inst.check_position(inst.edge_check[static_cast<std::size_t>(e)]);
            CHECK(cp >= vp);
            CHECK(cp <= vp + w - 1);
        }
    }
}

TEST_CASE("adjacency lists agree with the edge list from both sides") {
    const auto inst = sample_instance(dd36(), 6, 3, 60, 9);
    REQUIRE(inst.var_ptr.size() == static_cast<std::size_t>(inst.num_vars()) + 1);
    REQUIRE(inst.check_ptr.size() == static_cast<std::size_t>(inst.num_checks()) + 1);
    CHECK(inst.var_ptr.front() == 0);
    CHECK(inst.var_ptr.back() == inst.num_edges());
    CHECK(inst.check_ptr.back() == inst.num_edges());
    for (int v = 0; v < inst.num_vars(); ++v) {
        for (int k = inst.var_ptr[static_cast<std::size_t>(v)];
             k < inst.var_ptr[static_cast<std::size_t>(v) + 1]; ++k)
            CHECK(inst.edge_var[static_cast<std::size_t>(inst.var_edges[static_cast<std::size_t>(
                      k)])] == v);
    }
    for (int c = 0; c < inst.num_checks(); ++c) {
        for (int k = inst.check_ptr[static_cast<std::size_t>(c)];
             k < inst.check_ptr[static_cast<std::size_t>(c) + 1]; ++k)
            CHECK(inst.edge_check[static_cast<std::size_t>(inst.check_edges[
                      static_cast<std::size_t>(k)])] == c);
    }
    // every variable of the regular pair has degree exactly 3, interior
    // checks degree exactly 6
    for (int v = 0; v < inst.num_vars(); ++v)
        CHECK(inst.var_ptr[static_cast<std::size_t>(v) + 1] -
                  inst.var_ptr[static_cast<std::size_t>(v)] ==
              3);
    for (int c = inst.m * (inst.w - 1); c < inst.m * inst.N; ++c)
        CHECK(inst.check_ptr[static_cast<std::size_t>(c) + 1] -
                  inst.check_ptr[static_cast<std::size_t>(c)] ==
              6);
}

TEST_CASE("degree quantization fills whole nodes with the remainder by largest share") {
    const auto dd = DegreeDistribution::parse("0.95 x^3 + 0.05 x^23", "x^8");
    const auto inst = sample_instance(dd, 4, 2, 60, 3);
    // per position: 57 variables of degree 3 and 3 of degree 23
    std::map<int, int> degrees;
    for (int v = 0; v < 60; ++v)
        ++degrees[inst.var_ptr[static_cast<std::size_t>(v) + 1] -
                  inst.var_ptr[static_cast<std::size_t>(v)]];
    CHECK(degrees.at(3) == 57);
    CHECK(degrees.at(23) == 3);
    CHECK(degrees.size() == 2);
}

TEST_CASE("infeasible quantizations are rejected with the residual spelled out") {
    CHECK_THROWS_WITH_AS(sample_instance(dd36(), 4, 4, 10, 1),
                         "infeasible quantization: 30 variable sockets per position do not split "
                         "into 4 equal groups",
                         std::invalid_argument);
    const auto odd = DegreeDistribution::parse("0.5 x^2 + 0.5 x^4", "x^7");
    CHECK_THROWS_AS(sample_instance(odd, 4, 3, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_instance(dd36(), 4, 1, 60, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_instance(dd36(), 0, 3, 60, 1), std::invalid_argument);
}

TEST_CASE("erasure sampling is seeded and has the right rate") {
    const auto a = sample_bec_erasures(200000, 0.45, 5);
    const auto b = sample_bec_erasures(200000, 0.45, 5);
    CHECK(a == b);
    const auto c = sample_bec_erasures(200000, 0.45, 6);
    CHECK(a != c);
    long ones = 0;
    for (auto v : a) {
        CHECK((v == 0 || v == 1));
        ones += v;
    }
    CHECK(static_cast<double>(ones) / 200000 == doctest::Approx(0.45).epsilon(5e-3));
    CHECK(sample_bec_erasures(100, 0.0, 1) == std::vector<std::uint8_t>(100, 0));
    CHECK(sample_bec_erasures(100, 1.0, 1) == std::vector<std::uint8_t>(100, 1));
}

TEST_CASE("erasure decoding recovers a lightly erased instance and reports a hopeless one") {
    const auto inst = sample_instance(dd36(), 20, 3, 600, 11);

    const std::vector<std::uint8_t> none(static_cast<std::size_t>(inst.num_vars()), 0);
    const auto clean = bp_decode_bec(inst, none, 100);
    CHECK(clean.recovered);
    CHECK(!clean.stalled);

    const auto light = sample_bec_erasures(inst.num_vars(), 0.40, 21);
    const auto ok = bp_decode_bec(inst, light, 500);
    CHECK(ok.recovered);
    CHECK(!ok.stalled);
    CHECK(ok.iters > 0);
    REQUIRE(!ok.metric.empty());
    // metric is indexed by check position and bounded by the erasure fraction
    for (const auto& row : ok.metric) {
        REQUIRE(row.size() == static_cast<std::size_t>(inst.N + inst.w - 1));
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }

    const std::vector<std::uint8_t> all(static_cast<std::size_t>(inst.num_vars()), 1);
    const auto stuck = bp_decode_bec(inst, all, 200);
    CHECK(!stuck.recovered);
    CHECK(stuck.stalled);

    std::vector<std::uint8_t> wrong(static_cast<std::size_t>(inst.num_vars() - 1), 0);
    CHECK_THROWS_AS(bp_decode_bec(inst, wrong, 10), std::invalid_argument);
}

TEST_CASE("likelihood decoding handles flip and gaussian channels") {
    const auto inst = sample_instance(dd36(), 20, 3, 600, 13);
    // well below threshold on both channels: must recover
    const auto bsc = ChannelModel::from_entropy(ChannelKind::BSC, 0.30);
    const auto r1 = bp_decode_bms(inst, bsc, 101, 600);
    CHECK(r1.recovered);
    const auto awgn = ChannelModel::from_entropy(ChannelKind::AWGN, 0.30);
    const auto r2 = bp_decode_bms(inst, awgn, 102, 600);
    CHECK(r2.recovered);
    REQUIRE(!r2.metric.empty());
    for (const auto& row : r2.metric) REQUIRE(row.size() == static_cast<std::size_t>(inst.N));

    const auto bec = ChannelModel::from_param(ChannelKind::BEC, 0.4);
    CHECK_THROWS_AS(bp_decode_bms(inst, bec, 1, 10), std::invalid_argument);
}

TEST_CASE("empirical front speed recovers the density evolution speed on a synthetic trace") {
    // mirror a one-sided DE trajectory so its front walks inward from the
    // right, the shape the decoder metric takes on a finite chain
    const auto dd = dd36();
    const CoupledConfig cc(dd, 120, 3, 0.45);
    auto prof = init_profile(cc);
    CoupledStepper st(cc);
    DecodeTrace trace;
    for (int t = 0; t < 420; ++t) {
        st.step(prof.x);
        std::vector<double> row(prof.x.rbegin(), prof.x.rend());
        trace.metric.push_back(std::move(row));
    }
    trace.iters = 420;
    const double v = empirical_speed(trace, 20, 3);
    CHECK(v == doctest::Approx(0.2).epsilon(0.05));  // DE speed is 20/100

    CHECK_THROWS_AS(empirical_speed(trace, 0, 3), std::invalid_argument);

    DecodeTrace flat;
    flat.metric.assign(50, std::vector<double>(40, 0.3));
    flat.iters = 50;
    CHECK_THROWS_AS(empirical_speed(flat, 5, 3), std::runtime_error);
}

TEST_CASE("seed mixing separates streams") {
    CHECK(mix_seed(1, 0) == mix_seed(1, 0));
    CHECK(mix_seed(1, 0) != mix_seed(1, 1));
    CHECK(mix_seed(1, 0) != mix_seed(2, 0));
    std::vector<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 64; ++s) seen.push_back(mix_seed(99, s));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("the ensemble runner is deterministic and accounts for every instance") {
    // at n = 30 every instance hits a stopping set: the runner must say so
    // rather than invent a speed
    MonteCarloConfig tiny(dd36());
    tiny.N = 40;
    tiny.w = 2;
    tiny.n = 30;
    tiny.channel = ChannelModel::from_entropy(ChannelKind::BEC, 0.40);
    tiny.instances = 2;
    tiny.base_seed = 7;
    tiny.I = 5;
    tiny.max_iters = 800;
    const auto t1 = run_montecarlo(tiny);
    const auto t2 = run_montecarlo(tiny);
    CHECK(t1.v_mean == t2.v_mean);
    CHECK(t1.stall_fraction == 1.0);
    CHECK(t1.measured == 0);
    CHECK(t1.v_mean == 0.0);
    CHECK(t1.per_instance_v.empty());

    // at n = 1200 the waves travel and the speeds depend on the seed
    MonteCarloConfig cfg(dd36());
    cfg.N = 40;
    cfg.w = 3;
    cfg.n = 1200;
    cfg.channel = ChannelModel::from_entropy(ChannelKind::BEC, 0.45);
    cfg.instances = 2;
    cfg.base_seed = 7;
    cfg.I = 5;
    cfg.max_iters = 800;
    const auto a = run_montecarlo(cfg);
    const auto b = run_montecarlo(cfg);
    CHECK(a.v_mean == b.v_mean);
    CHECK(a.v_stderr == b.v_stderr);
    CHECK(a.per_instance_v == b.per_instance_v);
    CHECK(a.instances == 2);
    CHECK(a.measured == static_cast<int>(a.per_instance_v.size()));
    CHECK(a.measured >= 1);
    CHECK(a.stall_fraction >= 0.0);
    CHECK(a.stall_fraction <= 1.0);
    for (double v : a.per_instance_v) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }

    cfg.base_seed = 8;
    const auto c = run_montecarlo(cfg);
    CHECK(a.per_instance_v != c.per_instance_v);
}
