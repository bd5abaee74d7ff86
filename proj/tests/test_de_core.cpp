#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scldpc/de_core.hpp"
#include "scldpc/degree_distribution.hpp"

using namespace scldpc;

namespace {

// hand-expanded update for the (x^3, x^6) pair: eps * (1 - (1-x)^5)^2
double step36(double eps, double x) {
    const double y = 1.0 - std::pow(1.0 - x, 5);
    return eps * y * y;
}

}  // namespace

TEST_CASE("single-system update matches the closed form") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    for (double eps : {0.2, 0.45, 0.475}) {
        for (double x = 0.0; x <= 1.0; x += 0.05) {
            CHECK(de_step_single(dd, eps, x) == doctest::Approx(step36(eps, x)).epsilon(1e-13));
        }
    }
    CHECK(de_step_single(dd, 0.5, 0.0) == 0.0);
    CHECK(de_step_single(dd, 0.5, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("forward limit converges to a fixed point of the update") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");

    SUBCASE("below threshold the limit is zero") {
        const auto r = forward_de_limit(dd, 0.40);
        CHECK(r.converged);
        CHECK(std::fabs(r.value) <= 1e-10);
        CHECK(decodes_to_zero(dd, 0.40));
    }

    SUBCASE("above threshold the limit is the large stable solution") {
        const auto r = forward_de_limit(dd, 0.475);
        CHECK(r.converged);
        CHECK(r.value > 0.3);
        // a limit must reproduce itself under the update
        CHECK(de_step_single(dd, 0.475, r.value) == doctest::Approx(r.value).epsilon(1e-10));
        CHECK_FALSE(decodes_to_zero(dd, 0.475));
    }
}

TEST_CASE("decoding threshold brackets the behaviour change") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    const double thr = bp_threshold(dd);
    // the literature value for this pair
    CHECK(thr == doctest::Approx(0.4294).epsilon(2e-3));
    // bisection oracle: strictly decodable just below, stuck just above
    CHECK(decodes_to_zero(dd, thr - 1e-4));
    CHECK_FALSE(decodes_to_zero(dd, thr + 1e-4));
}

TEST_CASE("thresholds for the other swept pairs bracket correctly") {
    for (const char* spec : {"x^4;x^8", "x^5;x^10", "0.95 x^3 + 0.05 x^23;x^8"}) {
        const std::string s(spec);
        const auto semi = s.find(';');
        const auto dd = DegreeDistribution::parse(s.substr(0, semi), s.substr(semi + 1));
        CAPTURE(spec);
        const double thr = bp_threshold(dd);
        CHECK(thr > 0.2);
        CHECK(thr < 0.5);
        CHECK(decodes_to_zero(dd, thr - 1e-4));
        CHECK_FALSE(decodes_to_zero(dd, thr + 1e-4));
    }
}

TEST_CASE("fixed-point enumeration finds the bistable structure") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");

    SUBCASE("below threshold only the origin survives") {
        const auto set = find_fixed_points(dd, 0.40);
        REQUIRE(set.points.size() == 1);
        CHECK(set.points[0].x == 0.0);
        CHECK(set.points[0].stability == Stability::stable);
    }

    SUBCASE("above threshold: origin, unstable middle, stable top") {
        const auto set = find_fixed_points(dd, 0.46);
        REQUIRE(set.points.size() == 3);
        CHECK(set.points[0].x == 0.0);
        CHECK(set.points[1].stability == Stability::unstable);
        CHECK(set.points[2].stability == Stability::stable);
        CHECK(set.points[1].x < set.points[2].x);

        for (const auto& fp : set.points) {
            // every reported point is a genuine solution of x = g(x)
            CHECK(std::fabs(de_step_single(dd, 0.46, fp.x) - fp.x) <= 1e-8);
            // and the stability label matches the local contraction rate
            const double d = 1e-7;
            const double slope =
                (de_step_single(dd, 0.46, fp.x + d) - de_step_single(dd, 0.46, std::max(fp.x - d, 0.0))) /
                (fp.x < d ? d : 2 * d);
            if (fp.stability == Stability::stable)
                CHECK(std::fabs(slope) < 1.0);
            else
                CHECK(std::fabs(slope) > 1.0);
        }
    }

    SUBCASE("three-peak ensemble carries five fixed points in its window") {
        const auto dd2 =
            DegreeDistribution::parse("153/283 x^2 + 102/283 x^3 + 28/283 x^51", "x^16");
        const auto set = find_fixed_points(dd2, 0.40);
        REQUIRE(set.points.size() == 5);
        for (std::size_t i = 1; i < set.points.size(); ++i) {
            CHECK(set.points[i - 1].x < set.points[i].x);
CHECK(std::fabs(de_step_single(dd2, 0.40, set.points[i].x) - set.points[i].x) <= 1e-8);
        }
        // stabilities alternate along the ladder
        CHECK(set.points[0].stability == Stability::stable);
        CHECK(set.points[1].stability == Stability::unstable);
        CHECK(set.points[2].stability == Stability::stable);
        CHECK(set.points[3].stability == Stability::unstable);
        CHECK(set.points[4].stability == Stability::stable);
    }
}
