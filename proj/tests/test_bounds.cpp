#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scldpc/bounds.hpp"
#include "scldpc/coupled.hpp"
#include "scldpc/de_core.hpp"
#include "scldpc/degree_distribution.hpp"
#include "scldpc/potential.hpp"
#include "scldpc/speed.hpp"

using namespace scldpc;

namespace {

// hand potential for (x^3, x^6), written without the library helpers
double U36(double eps, double x) {
    const double y = 1.0 - x;
    const double rc = 1.0 - std::pow(y, 5);
    return (1.0 - std::pow(y, 6)) / 6.0 - x * std::pow(y, 5) - (eps / 3.0) * rc * rc * rc;
}

DegreeDistribution irr283() {
    return DegreeDistribution::parse("153/283 x^2 + 102/283 x^3 + 28/283 x^51", "x^16");
}

}  // namespace

TEST_CASE("variant names round-trip and reject garbage") {
    CHECK(to_string(LBVariant::as_stated) == "as_stated");
    CHECK(to_string(LBVariant::as_tabulated) == "as_tabulated");
    CHECK(lb_variant_from_string("as_stated") == LBVariant::as_stated);
    CHECK(lb_variant_from_string("as_tabulated") == LBVariant::as_tabulated);
    CHECK_THROWS_AS(lb_variant_from_string("tabulated"), std::invalid_argument);
}

TEST_CASE("alpha outside its certified range is rejected") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    const CoupledConfig cc(dd, 120, 4, 0.475);
    const auto f = run_until_wave_formed(cc);
    REQUIRE(f.formed);
    CHECK_THROWS_AS(bound_B1(cc, f.profile, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(bound_B1(cc, f.profile, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(bound_B2(dd, 0.475, 4, 0.0), std::invalid_argument);
}

TEST_CASE("profile bound equals a from-scratch recomputation") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    const double eps = 0.475;
    const CoupledConfig cc(dd, 240, 4, eps);
    const auto f = run_until_wave_formed(cc);
    REQUIRE(f.formed);

    // numerator: potential at the forward limit of the scalar recursion
    double x_inf = 1.0;
    for (int t = 0; t < 200000; ++t) {
        const double y = 1.0 - std::pow(1.0 - x_inf, 5);
        const double next = eps * y * y;
        if (std::fabs(next - x_inf) < 1e-14) break;
        x_inf = next;
    }
    // denominator: quadratic variation with rho'(1-x) = 5(1-x)^4 by hand
    double qv = 0.0, prev = 0.0;
    for (double v : f.profile.x) {
        const double d = v - prev;
        qv += 5.0 * std::pow(1.0 - v, 4) * d * d;
        prev = v;
    }
    const double expect = U36(eps, x_inf) / qv;
    CHECK(std::fabs(bound_B1(cc, f.profile, 1.0) - expect) <= 1e-12);

    // frozen value for this ensemble and width
    CHECK(bound_B1(cc, f.profile, 1.0) == doctest::Approx(0.09093690588928503).epsilon(1e-9));

    // mismatched length is rejected
    DensityProfile wrong;
    wrong.x.assign(239, 0.1);
    CHECK_THROWS_AS(bound_B1(cc, wrong), std::invalid_argument);
}

TEST_CASE("closed-form bound follows the scalar landscape") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    const double eps = 0.475;
    const auto fps = find_fixed_points(dd, eps);
    REQUIRE(fps.points.size() == 3);
    const double x_u = fps.points[1].x;
    const double x_bp = fps.points[2].x;
    for (int w : {2, 4, 8}) {
        const double expect = w * U36(eps, x_bp) / (2.0 * U36(eps, x_u) - U36(eps, x_bp));
        CHECK(bound_B2(dd, eps, w) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(bound_B2(dd, eps, 4) == doctest::Approx(0.869423224085662).epsilon(1e-9));
    // no bistable landscape below the decoding threshold
    CHECK_THROWS_AS(bound_B2(dd, 0.42, 4), std::runtime_error);
}

TEST_CASE("lower bound matches both closed forms") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    const double eps = 0.475;
    const auto fps = find_fixed_points(dd, eps);
    const double x_bp = fps.points.back().x;
    const double U = U36(eps, x_bp);
    for (int w : {2, 3, 4, 8}) {
        const double tab = w * U / (x_bp * (1.0 - std::pow(1.0 - x_bp, 5)));
        const double lit = w * U / (x_bp * (1.0 - std::pow(x_bp, 5))) - 1.0 / w;
        CHECK(bound_LB(dd, eps, w) == doctest::Approx(tab).epsilon(1e-12));
        CHECK(bound_LB(dd, eps, w, LBVariant::as_stated) == doctest::Approx(lit).epsilon(1e-12));
    }
    CHECK(bound_LB(dd, eps, 4) == doctest::Approx(0.03774092765587755).epsilon(1e-9));
    // the tabulated form is linear in w
    CHECK(bound_LB(dd, eps, 8) == doctest::Approx(2.0 * bound_LB(dd, eps, 4)).epsilon(1e-12));
}

TEST_CASE("both upper bounds scale linearly in alpha") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    const CoupledConfig cc(dd, 120, 4, 0.475);
    const auto f = run_until_wave_formed(cc);
    REQUIRE(f.formed);
    CHECK(bound_B1(cc, f.profile, 1.5) ==
          doctest::Approx(1.5 * bound_B1(cc, f.profile, 1.0)).epsilon(1e-13));
    CHECK(bound_B2(dd, 0.475, 4, 2.0) ==
          doctest::Approx(2.0 * bound_B2(dd, 0.475, 4, 1.0)).epsilon(1e-13));
}

TEST_CASE("bounds bracket the measured speed across ensembles") {
    struct Combo {
        const char* L;
        const char* R;
        double eps;
        int w;
    };
    const Combo combos[] = {
        {"x^3", "x^6", 0.475, 4},
        {"x^3", "x^6", 0.45, 6},
        {"x^4", "x^8", 0.45, 4},
        {"x^5", "x^10", 0.44, 3},
        {"0.95 x^3 + 0.05 x^23", "x^8", 0.475, 3},
    };
    for (const auto& c : combos) {
        const auto dd = DegreeDistribution::parse(c.L, c.R);
        CAPTURE(c.L);
        const CoupledConfig cc(dd, 60 * c.w, c.w, c.eps);
        const auto f = run_until_wave_formed(cc);
        REQUIRE(f.formed);
        const double v20 = measure_speed(cc, f, 20).v_I;
        const double b1 = bound_B1(cc, f.profile);
        const double b2 = bound_B2(dd, c.eps, c.w);
        const double lb = bound_LB(dd, c.eps, c.w);
        CHECK(lb <= v20);
        CHECK(v20 <= b1);
        CHECK(b1 <= b2);
        CHECK(lb > 0.0);
    }
}

TEST_CASE("finite-width correction appears only when it keeps the denominator positive") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    const double eps = 0.475;
    // at small w the subtracted D-term swallows the denominator
    CHECK_THROWS_WITH_AS(bound_B2(dd, eps, 4, 1.0, true), "bound vacuous at this w",
                         std::runtime_error);
    // at large w it survives and exceeds the uncorrected bound
    const double corrected = bound_B2(dd, eps, 64, 1.0, true);
    CHECK(corrected > bound_B2(dd, eps, 64));
    CHECK(corrected < 10.0 * bound_B2(dd, eps, 64));

    const CoupledConfig cc(dd, 120, 4, eps);
    const auto f = run_until_wave_formed(cc);
    REQUIRE(f.formed);
    const auto rep = compute_bounds(cc, f.profile);
    CHECK(!rep.B2_finite_w.has_value());
    CHECK(rep.B2_finite_w_note == "bound vacuous at this w");
    CHECK(rep.B1 == doctest::Approx(bound_B1(cc, f.profile)));
    CHECK(rep.B2 == doctest::Approx(bound_B2(dd, eps, 4)));
    CHECK(rep.LB == doctest::Approx(bound_LB(dd, eps, 4)));
    CHECK(rep.D > 0.0);
    CHECK(rep.alpha == 1.0);
    CHECK(rep.variant == LBVariant::as_tabulated);
}

TEST_CASE("two-wave segments bound their own fronts") {
    const auto dd = irr283();
    const double eps = 0.40;
    const CoupledConfig cc(dd, 700, 3, eps);
    const auto f = run_until_wave_formed(cc);
    REQUIRE(f.formed);
    REQUIRE(f.mode == WaveMode::two_wave);
    const auto info = classify_wave_mode(dd, eps);
    const auto b = bound_B1_two_wave(cc, f.profile, info.s1, info.s2);

    // the undivided form coincides with the plain profile bound
    CHECK(b.full == doctest::Approx(bound_B1(cc, f.profile)).epsilon(1e-12));
    CHECK(b.full == doctest::Approx(0.6998235544123058).epsilon(1e-6));

    const auto tw = measure_two_wave_speeds(cc, f, 20);
    CHECK(tw.v_upper <= b.upper_segment);
    CHECK(tw.v_lower <= b.lower_segment);
    CHECK(tw.v_lower <= b.full);
    CHECK(b.lower_segment < b.upper_segment);

    // the closed form is vacuous here: its denominator is negative, so it
    // cannot rank against the measured speeds
    CHECK(bound_B2(dd, eps, 3) < 0.0);
    CHECK(bound_LB(dd, eps, 3) == doctest::Approx(0.05353134510135503).epsilon(1e-9));
}
