#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "chemo/errors.hpp"
#include "chemo/grid.hpp"
#include "chemo/model.hpp"

using namespace chemo;

namespace {

KineticsSpec rational(double G0 = 1.0, double B0 = 1.0) {
    KineticsSpec k;
    k.G0 = G0;
    k.B0 = B0;
    return k;
}

KineticsSpec table_spec(std::vector<double> gx, std::vector<double> gy) {
    KineticsSpec k;
    k.family = KineticsFamily::CustomTable;
    k.g_table = {std::move(gx), std::move(gy)};
    k.b_table = {{0.0, 1.0, 2.0}, {1.0, 0.5, 0.25}};
    return k;
}

}  // namespace

TEST_CASE("g_eval closed forms") {
    for (auto fam : {KineticsFamily::SaturatingRational, KineticsFamily::SaturatingExponential}) {
        KineticsSpec k = rational(2.0);
        k.family = fam;
        CHECK(g_eval(0.0, k) == 0.0);
    }
    CHECK(g_eval(1.0, rational(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
    // extended-precision evaluation of 2*3/(1+3)
    const long double ref = g_eval(3.0L, rational(2.0));
    CHECK(std::abs(g_eval(3.0, rational(2.0)) - double(ref)) <= 1e-15);
    CHECK(double(ref) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK_THROWS_AS(g_eval(-1e-3, rational()), DomainError);
}

TEST_CASE("b_eval closed forms") {
    CHECK(b_eval(0.0, rational(1.0, 1.0)) == 1.0);
    CHECK(b_eval(0.0, rational(1.0, 3.7)) == 3.7);
    CHECK(b_eval(1.0, rational()) == doctest::Approx(0.5));
    CHECK(b_eval(4.0, rational(1.0, 2.0)) == doctest::Approx(0.4).epsilon(1e-15));
    KineticsSpec e = rational(1.0, 2.5);
    e.family = KineticsFamily::SaturatingExponential;
    CHECK(b_eval(0.0, e) == 2.5);
    CHECK(b_eval(2.0, e) == doctest::Approx(2.5 * std::exp(-2.0)));
    CHECK_THROWS_AS(b_eval(-1.0, rational()), DomainError);
}

TEST_CASE("kinetics bounds hold on a sample grid") {
    for (auto fam : {KineticsFamily::SaturatingRational, KineticsFamily::SaturatingExponential}) {
        KineticsSpec k = rational(1.7, 0.9);
        k.family = fam;
        k.g_shape = 0.3;
        k.b_shape = 2.0;
        double prev_g = -1.0, prev_b = 1e300;
        for (int i = 0; i <= 2000; ++i) {
            const double x = 0.01 * i;
            const double g = g_eval(x, k), b = b_eval(x, k);
            CHECK(g >= prev_g);
            CHECK(g <= k.G0);
            CHECK(b > 0.0);
            CHECK(b <= k.B0);
            CHECK(b <= prev_b);
            prev_g = g;
            prev_b = b;
        }
    }
}

TEST_CASE("field evaluation clamps round-off negatives") {
    FieldD u(3);
    u << -1e-17, 1.0, 3.0;
    const FieldD g = g_field(u, rational(2.0));
    CHECK(g[0] == 0.0);
    CHECK(g[2] == doctest::Approx(1.5));
}

TEST_CASE("table interpolation") {
    KineticsTable t{{0.0, 1.0, 3.0}, {0.0, 2.0, 3.0}};
    CHECK(t(0.5) == doctest::Approx(1.0));
    CHECK(t(2.0) == doctest::Approx(2.5));
    CHECK(t(10.0) == 3.0);
    KineticsTable bad{{0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("read_kinetics_table") {
    const auto path = std::filesystem::temp_directory_path() / "chemo_test_table.csv";
    {
        std::ofstream f(path);
        f << "# comment\nu,g\n0,0\n1,0.5\n2,0.75\n";
    }
    const auto t = read_kinetics_table(path.string());
    CHECK(t.x.size() == 3);
    CHECK(t(1.5) == doctest::Approx(0.625));
    CHECK_THROWS_AS(read_kinetics_table("/nonexistent/table.csv"), ConfigError);
}

TEST_CASE("validate_kinetics: built-in families pass") {
    for (auto fam : {KineticsFamily::SaturatingRational, KineticsFamily::SaturatingExponential}) {
        KineticsSpec k = rational();
        k.family = fam;
        const auto rep = validate_kinetics(k, 10.0, 10.0, 1001);
        CHECK(rep.all_passed());
        CHECK(rep.checks.size() == 8);
    }
}

TEST_CASE("validate_kinetics: crafted violations") {
    SUBCASE("g(0) != 0") {
        const auto rep = validate_kinetics(table_spec({0.0, 1.0, 2.0}, {0.1, 0.5, 0.7}), 2.0, 2.0, 101);
        REQUIRE(rep.find(hypothesis::g_zero));
        CHECK_FALSE(rep.find(hypothesis::g_zero)->passed);
    }
    SUBCASE("decreasing segment reports the sample") {
        const auto rep = validate_kinetics(table_spec({0.0, 1.0, 2.0, 3.0}, {0.0, 0.6, 0.4, 0.8}), 3.0, 2.0, 301);
        const auto* c = rep.find(hypothesis::g_increasing);
        REQUIRE(c);
        CHECK_FALSE(c->passed);
        // samples are 0.01 apart; the first reversal is just past u = 1
        CHECK(c->worst_index > 100);
        CHECK(c->worst_index <= 200);
        CHECK(rep.find(hypothesis::g_zero)->passed);
    }
    SUBCASE("b reaching zero") {
        KineticsSpec k = table_spec({0.0, 1.0}, {0.0, 0.5});
        k.b_table = {{0.0, 1.0, 2.0}, {1.0, 0.5, 0.0}};
        const auto rep = validate_kinetics(k, 2.0, 2.0, 101);
        const auto failed = rep.failed_names();
        CHECK(failed == std::vector<std::string>{std::string(hypothesis::b_positive)});
    }
    SUBCASE("unbounded derivative") {
        KineticsSpec k = rational();
        k.family = KineticsFamily::CustomTable;
        std::vector<double> x, y;
        for (int i = 0; i <= 4000; ++i) {
            x.push_back(i * 2.5e-4);
            y.push_back(std::sqrt(x.back()));
        }
        k.g_table = {x, y};
        k.b_table = {{0.0, 1.0}, {1.0, 0.5}};
        const auto rep = validate_kinetics(k, 1.0, 1.0, 101);
        CHECK_FALSE(rep.find(hypothesis::g_lipschitz)->passed);
    }
}

TEST_CASE("parameter validation") {
    ModelParams m;
    CHECK_NOTHROW(m.validate());
    m.beta = -1.0;
    CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("model.beta"), ConfigError);
    m = {};
    m.epsilon = -0.1;
    CHECK_THROWS_AS(m.validate(), ConfigError);
    CHECK(kinetics_family_from_string("saturating-exponential") == KineticsFamily::SaturatingExponential);
    CHECK(to_string(KineticsFamily::CustomTable) == "custom-table");
    CHECK_THROWS_AS(kinetics_family_from_string("linear"), ConfigError);
}
