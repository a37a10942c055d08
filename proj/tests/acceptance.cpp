// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "chemo/config.hpp"
#include "chemo/diagnostics.hpp"
#include "chemo/dynamics.hpp"
#include "chemo/elliptic.hpp"
#include "chemo/ode.hpp"
#include "chemo/scenarios.hpp"

using namespace chemo;

namespace {

const double pi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit_s > 0 && secs > time_limit_s) {
        o.pass = false;
        o.detail += " [over time limit " + std::to_string(time_limit_s) + " s]";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %-34s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Grid line(int n) {
    GridSpec s;
    s.cells = {n, 1};
    return Grid(s);
}

FieldD on_centers(const Grid& g, const std::function<double(double)>& f) {
    FieldD out(g.size());
    for (int i = 0; i < g.nx(); ++i) out[i] = f(g.center(0, i));
    return out;
}

InitialCondition cosine(double background, double amplitude) {
    InitialCondition ic;
    ic.kind = InitialKind::CosinePerturbation;
    ic.background = background;
    ic.amplitude = amplitude;
    return ic;
}

// smooth small-data scenario used for the residual-order checks
Scenario smooth_small() {
    Scenario sc;
    sc.grid.cells = {64, 1};
    sc.u0 = cosine(0.01, 0.005);
    sc.n0 = cosine(1.0, -0.5);
    return sc;
}

Scenario bump() {
    Scenario sc;
    sc.grid.cells = {256, 1};
    sc.u0.kind = InitialKind::Gaussian;
    sc.u0.center = {127.5 / 256.0, 0.5};
    sc.u0.width = 0.02;
    sc.n0.amplitude = 1.0;
    return sc;
}

RunOptions bump_options() {
    RunOptions o;
    o.step.t_end = 1.0;
    o.blowup.factor = 8.0;
    return o;
}

double manufactured_error(int n) {
    const Grid g = line(n);
    ModelParams m;
    m.beta = 2.0;
    const FieldD cstar = on_centers(g, [](double x) { return std::cos(pi * x); });
    const FieldD u = (pi * pi + m.beta) / m.alpha * cstar;
    EllipticConfig cfg;
    cfg.tol = 1e-12;
    return (solve_helmholtz(g, u, m, cfg) - cstar).cwiseAbs().maxCoeff();
}

// worst residual of each kind over a run at time step dt
std::array<double, 2> worst_residuals(double dt, bool* mass_monotone) {
    RunOptions o;
    o.step.t_end = 1.0;
    o.step.dt_max = dt;
    const auto r = run_scenario(smooth_small(), ModelParams{}, o);
    std::array<double, 2> w{0.0, 0.0};
    const double M0 = r.trajectory.records.front().mass_total;
    double prev = M0;
    for (const auto& rec : r.trajectory.records) {
        if (!std::isnan(rec.mass_law_residual)) w[0] = std::max(w[0], rec.mass_law_residual);
        if (!std::isnan(rec.zzz_residual)) w[1] = std::max(w[1], rec.zzz_residual);
        if (rec.mass_total > prev + 1e-10 * M0) *mass_monotone = false;
        prev = rec.mass_total;
    }
    return w;
}

}  // namespace

int main() {
    criterion(1, "elliptic convergence", 5.0, [] {
        const double ratio = manufactured_error(64) / manufactured_error(128);
        return Outcome{ratio >= 3.5 && ratio <= 4.5, fmt("error ratio N=64/N=128 = %.4f", ratio)};
    });

    criterion(2, "elliptic sign preservation", 0, [] {
        const Grid g = line(128);
        ModelParams m;
        HelmholtzSolver<double> solver(g, m, EllipticConfig{});
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            FieldD u(g.size());
            const double power = 1.0 + 10.0 * d(rng);  // from flat to spiky
            for (auto& v : u) v = std::pow(d(rng), power);
            const FieldD c = solver.solve(u);
            worst = std::min(worst, c.minCoeff() / c.maxCoeff());
        }
        return Outcome{worst >= -1e-10, fmt("worst min(c)/max(c) = %.3e", worst)};
    });

    criterion(3, "heat-mode decay", 0, [] {
        const Grid g = line(128);
        StepConfig sc;
        sc.dt_max = 1e-4;
        sc.t_end = 0.1;
        Integrator in(g, ModelParams{}, sc, EllipticConfig{});
        const FieldD cosx = on_centers(g, [](double x) { return std::cos(pi * x); });
        State s = in.initial_state(FieldD::Zero(g.size()), (1.0 + 0.5 * cosx.array()).matrix());
        std::vector<double> t, loga;
        auto amplitude = [&] { return s.n.dot(cosx) / cosx.squaredNorm(); };
        t.push_back(0.0);
        loga.push_back(std::log(amplitude()));
        while (s.t < sc.t_end) {
            in.advance(s);
            t.push_back(s.t);
            loga.push_back(std::log(amplitude()));
        }
        // least-squares slope of log amplitude against time
        const double n = double(t.size());
        double st = 0, sa = 0, stt = 0, sta = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            st += t[i];
            sa += loga[i];
            stt += t[i] * t[i];
            sta += t[i] * loga[i];
        }
        const double rate = -(n * sta - st * sa) / (n * stt - st * st);
        const double rel = std::abs(rate - pi * pi) / (pi * pi);
        return Outcome{rel <= 0.02, fmt("fitted rate %.5f", rate) + fmt(" vs pi^2, rel. dev. %.2e", rel)};
    });

    criterion(4, "transport conservation", 0, [] {
        const Grid g = line(128);
        ModelParams m;
        m.kinetics.family = KineticsFamily::Inert;
        StepConfig sc;
        sc.t_end = 100.0;
        Integrator in(g, m, sc, EllipticConfig{});
        State s = in.initial_state(on_centers(g, [](double x) { return 0.2 + 2.0 * std::exp(-40 * (x - 0.3) * (x - 0.3)); }),
                                   FieldD::Ones(g.size()));
        const double m0 = integrate(g, s.u);
        const double cmax = s.c.maxCoeff() - s.c.minCoeff();
        double drift = 0.0;
        for (int k = 0; k < 1000; ++k) {
            in.advance_with_dt(s, in.cfl_dt(s));
            drift = std::max(drift, std::abs(integrate(g, s.u) - m0) / m0);
        }
        return Outcome{drift <= 1e-12 && cmax > 0.1,
                       fmt("max relative drift %.2e", drift) + fmt(", c oscillation %.3f", cmax)};
    });

    criterion(5, "nutrient maximum principle", 0, [] {
        double worst_hi = -1e300, worst_lo = 1e300;
        int scenarios = 0;
        for (const char* name : {"small-data", "blowup", "eps-study", "blowup-scan", "tabulated"}) {
            const RunConfig cfg = load_config(std::string(CHEMO_CONFIG_DIR) + "/" + name + ".toml");
            RunOptions o = cfg.run_options();
            o.step.snapshot_every = 1;
            const auto r = run_scenario(cfg.scenario(), cfg.model, o);
            const double n_hi = r.trajectory.records.front().max_n;
            for (const auto& rec : r.trajectory.records) {
                worst_hi = std::max(worst_hi, rec.max_n - n_hi);
                worst_lo = std::min(worst_lo, rec.min_n);
            }
            ++scenarios;
        }
        return Outcome{worst_hi <= 1e-12 && worst_lo >= -1e-12,
                       std::to_string(scenarios) + " scenarios" + fmt(", max(n)-max(n0) <= %.2e", worst_hi) +
                           fmt(", min(n) >= %.2e", worst_lo)};
    });

    std::vector<std::array<double, 2>> residuals;
    bool mass_monotone = true;
    for (double dt : {0.02, 0.01, 0.005}) residuals.push_back(worst_residuals(dt, &mass_monotone));

    criterion(6, "mass law", 0, [&] {
        const double r1 = residuals[1][0] / residuals[0][0], r2 = residuals[2][0] / residuals[1][0];
        return Outcome{r1 <= 0.6 && r2 <= 0.6 && mass_monotone,
                       fmt("halving ratios %.3f", r1) + fmt(", %.3f", r2) +
                           (mass_monotone ? ", total mass nonincreasing" : ", total mass increased")};
    });

    criterion(7, "L^p identity residual", 0, [&] {
        const double r1 = residuals[1][1] / residuals[0][1], r2 = residuals[2][1] / residuals[1][1];
        return Outcome{r1 <= 0.6 && r2 <= 0.6, fmt("halving ratios %.3f", r1) + fmt(", %.3f", r2)};
    });

    criterion(8, "homogeneous reduction", 0, [] {
        const Grid g = line(8);
        ModelParams m;
        StepConfig sc;
        sc.dt_max = 1e-4;
        Integrator in(g, m, sc, EllipticConfig{});
        State s = in.initial_state(FieldD::Ones(8), FieldD::Ones(8));
        while (s.t < 1.0) in.advance(s);
        // reference: fixed-step RK4 of the reduced system with 1e5 steps
        std::array<double, 2> y{1.0, 1.0};
        auto f = [&](const std::array<double, 2>& v) {
            const double gu = g_eval(v[0], m.kinetics), bn = b_eval(v[1], m.kinetics);
            return std::array<double, 2>{(gu * v[1] - bn) * v[0], -m.gamma * gu * v[1] * v[0]};
        };
        const int steps = 100000;
        const double h = 1.0 / steps;
        for (int i = 0; i < steps; ++i) {
            auto at = [&](const std::array<double, 2>& k, double c) {
                return std::array<double, 2>{y[0] + c * k[0], y[1] + c * k[1]};
            };
            const auto k1 = f(y), k2 = f(at(k1, h / 2)), k3 = f(at(k2, h / 2)), k4 = f(at(k3, h));
            for (int c = 0; c < 2; ++c) y[c] += h / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
        }
        const double eu = std::abs(s.u.mean() - y[0]), en = std::abs(s.n.mean() - y[1]);
        return Outcome{eu <= 1e-4 && en <= 1e-4, fmt("|u-u_ref| = %.2e", eu) + fmt(", |n-n_ref| = %.2e", en)};
    });

    criterion(9, "blow-up ODE oracle", 1.0, [] {
        const double T = ode::pure_power_blowup_time(1.0, 1.0, 2.0);
        const ode::BlowupOdeParams<double> prm{2.0, 1e-6, 1e-6, 2.0, 1.0, 1.0};
        const auto r = ode::integrate_blowup_ode<double>(prm, 1e-10);
        const double tb = r.blowup_time ? *r.blowup_time : std::nan("");
        const bool a = std::abs(T - 2.0) <= 1e-12;
        const bool b = r.blowup_time && std::abs(tb - 2.0) <= 0.02;
        return Outcome{a && b, fmt("pure-power T* = %.6f", T) + fmt(", blow-up ODE detects t = %.6f (target 2.0 +- 1%%)", tb)};
    });

    criterion(10, "threshold sufficiency", 0, [] {
        std::mt19937_64 rng(1234567);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        int blew = 0, quiet = 0;
        for (int k = 0; k < 20; ++k) {
            const double a1 = 0.5 + 2.5 * d(rng), a2 = 0.1 + 1.9 * d(rng), a3 = 0.1 + 1.9 * d(rng);
            const double p = 1.5 + 2.5 * d(rng), b0 = 0.5 + 1.5 * d(rng);
            const auto th = ode::blowup_threshold(a1, a2, a3, p, b0);
            ode::BlowupOdeParams<double> up{a1, a2, a3, p, 2.0 * th.y0_min, b0};
            if (ode::integrate_blowup_ode<double>(up, 1e-8).blowup_time) ++blew;

            const double y0 = 0.1 * th.y_from_cond2;
            const double a3_dom = 10.0 * a1 * std::pow(y0, 1.0 + 1.0 / p);
            ode::BlowupOdeParams<double> down{a1, a2, a3_dom, p, y0, b0};
            if (!ode::integrate_blowup_ode<double>(down, 1e-8, 1e9, 1e3).blowup_time) ++quiet;
        }
        return Outcome{blew == 20 && quiet == 20,
                       std::to_string(blew) + "/20 blow up from 2x threshold, " + std::to_string(quiet) +
                           "/20 stay bounded from 0.1x cond_2 with dominant alpha3"};
    });

    criterion(11, "PDE blow-up dichotomy", 120.0, [] {
        const Scenario sc = bump();
        const RunOptions o = bump_options();
        Scenario lo = sc, hi = sc;
        lo.u0.amplitude = 1.0;
        hi.u0.amplitude = 2.0;
        const auto rl = run_scenario(lo, ModelParams{}, o);
        const auto rh = run_scenario(hi, ModelParams{}, o);
        const double linf0 = rl.trajectory.records.front().linf_u;
        const bool lo_ok = rl.verdict.kind == VerdictKind::Completed && rl.verdict.peak_linf <= 10.0 * linf0;
        const bool hi_ok = rh.verdict.kind == VerdictKind::BlowupDetected && rh.verdict.t_detect < 1.0;
        const auto scan = blowup_scan(sc, ModelParams{}, o, 1.0, 2.0, 8, 2);
        const double width = (scan.a_plus - scan.a_minus) / scan.a_plus;
        const bool reverify = !blows_up_at(sc, scan.a_minus, ModelParams{}, o) && blows_up_at(sc, scan.a_plus, ModelParams{}, o);
        return Outcome{lo_ok && hi_ok && width <= std::ldexp(1.0, -8) && reverify,
                       fmt("A=1 peak/initial %.2f", rl.verdict.peak_linf / linf0) +
                           fmt(", A=2 blow-up at t=%.3f", rh.verdict.t_detect) +
                           fmt(", bracket [%.6f", scan.a_minus) + fmt(", %.6f]", scan.a_plus) +
                           fmt(" rel. width %.2e", width) + (reverify ? ", endpoints re-verified" : ", re-run disagrees")};
    });

    criterion(12, "epsilon consistency", 120.0, [] {
        const RunConfig cfg = load_config(std::string(CHEMO_CONFIG_DIR) + "/eps-study.toml");
        const auto r = epsilon_sweep(cfg.eps_study, cfg.scenario(), cfg.model, cfg.run_options());
        bool ok = r.eps.size() == 4;
        for (std::size_t k = 1; k < r.consecutive.size(); ++k) ok = ok && r.consecutive[k] < r.consecutive[k - 1];
        for (std::size_t k = 1; k < r.to_hyperbolic.size(); ++k) ok = ok && r.to_hyperbolic[k] < r.to_hyperbolic[k - 1];
        std::string d = "D_k =";
        for (double v : r.consecutive) d += fmt(" %.3e", v);
        d += "; to eps=0:";
        for (double v : r.to_hyperbolic) d += fmt(" %.3e", v);
        return Outcome{ok, d};
    });

    criterion(13, "kinetics gate", 0, [] {
        bool ok = true;
        std::string d;
        for (auto fam : {KineticsFamily::SaturatingRational, KineticsFamily::SaturatingExponential}) {
            KineticsSpec k;
            k.family = fam;
            const bool pass = validate_kinetics(k, 10.0, 10.0, 1001).all_passed();
            ok = ok && pass;
            d += std::string(to_string(fam)) + (pass ? " passes, " : " FAILS, ");
        }
        auto crafted = [](KineticsTable g, KineticsTable b) {
            KineticsSpec k;
            k.family = KineticsFamily::CustomTable;
            k.g_table = std::move(g);
            k.b_table = std::move(b);
            return validate_kinetics(k, 10.0, 10.0, 1001).failed_names();
        };
        const KineticsTable good_b{{0.0, 10.0}, {1.0, 0.5}};
        const KineticsTable good_g{{0.0, 10.0}, {0.0, 1.0}};
        const std::vector<std::pair<std::vector<std::string>, std::string_view>> cases{
            {crafted({{0.0, 10.0}, {0.1, 1.0}}, good_b), hypothesis::g_zero},
            {crafted({{0.0, 2.0, 4.0, 10.0}, {0.0, 0.6, 0.3, 1.0}}, good_b), hypothesis::g_increasing},
            {crafted(good_g, {{0.0, 5.0, 10.0}, {1.0, 0.5, 0.0}}), hypothesis::b_positive},
        };
        for (const auto& [failed, expect] : cases) {
            const bool hit = failed.size() == 1 && failed.front() == expect;
            ok = ok && hit;
            d += "[" + (failed.empty() ? std::string("none") : failed.front()) + "]";
        }
        return Outcome{ok, d + " flagged"};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
