#include <doctest.h>

#include <cmath>

#include "chemo/diagnostics.hpp"
#include "chemo/dynamics.hpp"
#include "support.hpp"

using namespace chemo;
using testing::line;
using testing::sample;

namespace {

State make_state(const Grid& g, double u, double n, double t = 0.0) {
    State s;
    s.t = t;
    s.u = FieldD::Constant(g.size(), u);
    s.c = FieldD::Zero(g.size());
    s.n = FieldD::Constant(g.size(), n);
    s.w = FieldD::Zero(g.size());
    return s;
}

}  // namespace

TEST_CASE("record") {
    const Grid g = line(16);
    const auto z = record(g, make_state(g, 0.0, 0.0), 0.1, ModelParams{}, 2.0);
    CHECK(z.lp_u == 0.0);
    CHECK(z.w1p_u == 0.0);
    CHECK(z.linf_u == 0.0);
    CHECK(z.mass_total == 0.0);
    CHECK(std::isnan(z.mass_law_residual));

    ModelParams m;
    m.gamma = 2.0;
    const auto r = record(g, make_state(g, 1.0, 1.0), 0.1, m, 2.0);
    CHECK(r.mass_total == doctest::Approx(1.5));

    std::mt19937_64 rng(1);
    State s = make_state(g, 0.0, 1.0);
    s.u = testing::random_field(g, rng);
    const auto q = record(g, s, 0.1, m, 3.0);
    CHECK(q.linf_u == lp_norm(g, s.u, infinity));
    CHECK(q.lp_u == doctest::Approx(lp_norm(g, s.u, 3.0)));
}

TEST_CASE("mass_law_residual") {
    const Grid g = line(16);
    CHECK(mass_law_residual(g, make_state(g, 0.0, 1.0), make_state(g, 0.0, 1.0, 0.1), ModelParams{}, 1.0) == 0.0);

    ModelParams m;
    m.kinetics.family = KineticsFamily::Inert;
    Integrator in(g, m, {}, {});
    std::mt19937_64 rng(3);
    State s = in.initial_state(testing::random_field(g, rng), testing::random_field(g, rng));
    const State prev = s;
    in.advance(s);
    CHECK(mass_law_residual(g, prev, s, m, total_mass(g, prev, m)) <= 1e-12);
}

TEST_CASE("residuals halve with dt on a smooth run") {
    const Grid g = line(64);
    ModelParams m;
    m.epsilon = 0.05;
    const FieldD u0 = sample(g, [](double x, double) { return 0.01 + 0.005 * std::cos(M_PI * x); });
    const FieldD n0 = sample(g, [](double x, double) { return 1.0 - 0.5 * std::cos(M_PI * x); });
    std::vector<std::array<double, 2>> worst;
    for (double dt : {0.02, 0.01, 0.005}) {
        RunOptions o;
        o.step.t_end = 1.0;
        o.step.dt_max = dt;
        const auto r = run(g, u0, n0, m, o);
        double a = 0, b = 0;
        for (const auto& rec : r.trajectory.records) {
            if (!std::isnan(rec.mass_law_residual)) a = std::max(a, rec.mass_law_residual);
            if (!std::isnan(rec.zzz_residual)) b = std::max(b, rec.zzz_residual);
        }
        worst.push_back({a, b});
    }
    for (std::size_t k = 1; k < worst.size(); ++k) {
        CHECK(worst[k][0] <= 0.6 * worst[k - 1][0]);
        CHECK(worst[k][1] <= 0.6 * worst[k - 1][1]);
    }
}

TEST_CASE("zzz_residual") {
    const Grid g = line(16);
    CHECK(zzz_residual(g, make_state(g, 0.0, 1.0), make_state(g, 0.0, 1.0, 0.1), ModelParams{}, 2.0) == 0.0);

    // homogeneous data: the identity reduces to d/dt (u^p / p) = u^p (g n - b) up to O(dt)
    ModelParams m;
    double prev_res = 0.0;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        StepConfig sc;
        sc.dt_max = dt;
        Integrator in(g, m, sc, {});
        State s = in.initial_state(FieldD::Constant(16, 0.5), FieldD::Constant(16, 1.0));
        const State prev = s;
        in.advance(s);
        const double res = zzz_residual(g, prev, s, m, 2.0);
        CHECK(res <= 5 * dt);
        if (prev_res > 0) CHECK(res < prev_res);
        prev_res = res;
    }
}

TEST_CASE("detect_blowup") {
    const BlowupThresholds th{};
    CHECK_FALSE(detect_blowup(1.0, 1.5, 0.3, false, th));
    const auto v = detect_blowup(1.0, 1.2e4, 0.7, false, th);
    REQUIRE(v);
    CHECK(v->kind == VerdictKind::BlowupDetected);
    CHECK(v->trigger == BlowupTrigger::NormThreshold);
    CHECK(v->t_detect == 0.7);
    const auto d = detect_blowup(1.0, 2.0, 0.4, true, th);
    REQUIRE(d);
    CHECK(d->trigger == BlowupTrigger::DtCollapse);

    Trajectory traj;
    DiagRecord r0, r1;
    r0.linf_u = 2.0;
    r1.t = 0.5;
    r1.linf_u = 17.0;
    traj.records = {r0, r1};
    CHECK(detect_blowup(traj, false, BlowupThresholds{8.0}));
    CHECK_FALSE(detect_blowup(traj, false, BlowupThresholds{10.0}));
    CHECK(to_string(VerdictKind::BlowupDetected) == "BLOWUP");
    CHECK(to_string(BlowupTrigger::DtCollapse) == "dt-collapse");
}
