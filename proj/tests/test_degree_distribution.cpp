#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "scldpc/degree_distribution.hpp"

using scldpc::DegreeDistribution;

TEST_CASE("regular pair parses and evaluates") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    CHECK(dd.L_prime_one() == doctest::Approx(3.0));
    CHECK(dd.R_prime_one() == doctest::Approx(6.0));
    CHECK(dd.design_rate() == doctest::Approx(0.5));
    CHECK(dd.max_L_degree() == 3);
    CHECK(dd.max_R_degree() == 6);
    CHECK(dd.id() == "x^3:x^6");

    // node polynomials are plain powers here
    for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        CHECK(dd.L(x) == doctest::Approx(std::pow(x, 3)).epsilon(1e-14));
        CHECK(dd.R(x) == doctest::Approx(std::pow(x, 6)).epsilon(1e-14));
        CHECK(dd.lam(x) == doctest::Approx(std::pow(x, 2)).epsilon(1e-14));
        CHECK(dd.rho(x) == doctest::Approx(std::pow(x, 5)).epsilon(1e-14));
    }
}

TEST_CASE("parse accepts coefficients, fractions, stars and loose spacing") {
    const auto a = DegreeDistribution::parse("0.95 x^3 + 0.05 x^23", "x^8");
    CHECK(a.L_prime_one() == doctest::Approx(0.95 * 3 + 0.05 * 23).epsilon(1e-14));

    const auto b = DegreeDistribution::parse("153/283 x^2 + 102/283 x^3 + 28/283 x^51", "x^16");
    const double lp = (153.0 / 283.0) * 2 + (102.0 / 283.0) * 3 + (28.0 / 283.0) * 51;
    CHECK(b.L_prime_one() == doctest::Approx(lp).epsilon(1e-14));
    CHECK(b.design_rate() == doctest::Approx(1.0 - lp / 16.0).epsilon(1e-14));

    const auto c = DegreeDistribution::parse("0.5*x^2+0.5*x^3", "x^5");
    CHECK(c.L(1.0) == doctest::Approx(1.0));
    CHECK(c.L(0.5) == doctest::Approx(0.5 * 0.25 + 0.5 * 0.125).epsilon(1e-14));

    const auto d = DegreeDistribution::parse("  x^4  ", "x^8");
    CHECK(d.max_L_degree() == 4);
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(DegreeDistribution::parse("", "x^6"), std::invalid_argument);
    CHECK_THROWS_AS(DegreeDistribution::parse("x^3", ""), std::invalid_argument);
    CHECK_THROWS_AS(DegreeDistribution::parse("0.5 x^3", "x^6"), std::invalid_argument);  // sums to 0.5
    CHECK_THROWS_AS(DegreeDistribution::parse("-1 x^3 + 2 x^4", "x^6"), std::invalid_argument);
    CHECK_THROWS_AS(DegreeDistribution::parse("x^", "x^6"), std::invalid_argument);
    CHECK_THROWS_AS(DegreeDistribution::parse("3^x", "x^6"), std::invalid_argument);
}

TEST_CASE("edge polynomials are normalized node derivatives") {
    const auto dd = DegreeDistribution::parse("0.95 x^3 + 0.05 x^23", "x^8");
    for (double x : {0.0, 0.2, 0.7, 1.0}) {
        CHECK(dd.lam(x) ==
              doctest::Approx(dd.L_prime(x) / dd.L_prime_one()).epsilon(1e-14));
        CHECK(dd.rho(x) ==
              doctest::Approx(dd.R_prime(x) / dd.R_prime_one()).epsilon(1e-14));
    }
    CHECK(dd.lam(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dd.rho(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("complement forms agree with the direct expression and pin the endpoints") {
    const auto dd = DegreeDistribution::parse("153/283 x^2 + 102/283 x^3 + 28/283 x^51", "x^16");

    // exact endpoints, no roundoff allowed
    CHECK(dd.rho_complement(0.0) == 0.0);
    CHECK(dd.rho_complement(1.0) == 1.0);
    CHECK(dd.R_complement(0.0) == 0.0);
    CHECK(dd.R_complement(1.0) == 1.0);

    for (double x : {1e-12, 1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-9}) {
        CHECK(dd.rho_complement(x) == doctest::Approx(1.0 - dd.rho(1.0 - x)).epsilon(1e-12));
        CHECK(dd.R_complement(x) == doctest::Approx(1.0 - dd.R(1.0 - x)).epsilon(1e-12));
    }

    // the complement path must keep precision where 1 - rho(1-x) cancels
    const double tiny = 1e-9;
    const double direct = 1.0 - dd.rho(1.0 - tiny);
    const double stable = dd.rho_complement(tiny);
    CHECK(stable == doctest::Approx(direct).epsilon(1e-6));
    CHECK(stable > 0.0);
}

TEST_CASE("domain guard clamps roundoff and rejects real excursions") {
    const auto dd = DegreeDistribution::parse("x^3", "x^6");
    CHECK(dd.L(-1e-13) == 0.0);
    CHECK(dd.L(1.0 + 1e-13) == doctest::Approx(1.0));
    CHECK_THROWS_AS(dd.L(-1e-3), std::domain_error);
    CHECK_THROWS_AS(dd.rho(1.01), std::domain_error);
}

TEST_CASE("identity string round-trips and equality is structural") {
    const auto a = DegreeDistribution::parse("0.95 x^3 + 0.05 x^23", "x^8");
    const auto id = a.id();
    CHECK(id.find(',') == std::string::npos);  // ids are embedded in CSV rows
    const auto colon = id.find(':');
    REQUIRE(colon != std::string::npos);
    const auto b = DegreeDistribution::parse(id.substr(0, colon), id.substr(colon + 1));
    CHECK(a == b);

    const auto c = DegreeDistribution::parse("x^3", "x^6");
    const auto d = DegreeDistribution::parse("x^3", "x^6");
    CHECK(c == d);
    CHECK_FALSE(a == c);
}
