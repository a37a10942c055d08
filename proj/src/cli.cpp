#include "chemo/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "chemo/config.hpp"
#include "chemo/io.hpp"

namespace chemo::cli {

namespace {

namespace fs = std::filesystem;

std::string output_dir(const RunConfig& cfg, const std::string& override_dir, const std::string& config_path,
                       const std::string& command) {
    if (!override_dir.empty()) return override_dir;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    const char* root = std::getenv("CHEMO_OUTPUT_ROOT");
    const fs::path base = root && *root ? fs::path(root) : fs::path("out");
    return (base / (fs::path(config_path).stem().string() + "-" + command)).string();
}

std::string num(double v) { return io::format_number(v); }

int cmd_run(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
    RunOptions opt = cfg.run_options();
    const Grid grid(cfg.grid);
    const auto res = run_scenario(cfg.scenario(), cfg.model, opt);
    io::write_timeseries(res.trajectory, (fs::path(dir) / "timeseries.csv").string());
    if (cfg.write_snapshots) {
        Integrator integ(grid, cfg.model, cfg.step, cfg.elliptic);
        const State s0 = integ.initial_state(make_initial_condition(cfg.u0, grid), make_initial_condition(cfg.n0, grid));
        io::write_snapshot(grid, s0, (fs::path(dir) / "snapshot_initial.csv").string());
        io::write_snapshot(grid, res.final_state, (fs::path(dir) / "snapshot_final.csv").string());
    }
    const auto& v = res.verdict;
    switch (v.kind) {
        case VerdictKind::Completed:
            out << "COMPLETED t=" << num(res.final_state.t) << " steps=" << res.steps << " peak_linf=" << num(v.peak_linf)
                << '\n';
            return exit_completed;
        case VerdictKind::BlowupDetected:
            out << "BLOWUP t=" << num(v.t_detect) << " trigger=" << to_string(v.trigger)
                << " peak_linf=" << num(v.peak_linf) << '\n';
            return exit_blowup;
        case VerdictKind::Aborted:
            out << "ABORTED t=" << num(v.t_detect) << " reason=" << v.reason << '\n';
            return exit_error;
    }
    return exit_error;
}

int cmd_epsilon_study(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
    const auto r = epsilon_sweep(cfg.eps_study, cfg.scenario(), cfg.model, cfg.run_options());
    std::ostringstream csv;
    csv << "level,eps,distance_next,distance_hyperbolic\n";
    out << "level  eps                      D(level,next)            D(level,hyperbolic)\n";
    for (std::size_t k = 0; k < r.eps.size(); ++k) {
        const double next = k < r.consecutive.size() ? r.consecutive[k] : not_applicable;
        csv << k << ',' << num(r.eps[k]) << ',' << num(next) << ',' << num(r.to_hyperbolic[k]) << '\n';
        out << k << "      " << num(r.eps[k]) << "  " << num(next) << "  " << num(r.to_hyperbolic[k]) << '\n';
    }
    io::write_text((fs::path(dir) / "epsilon_study.csv").string(), csv.str());
    return exit_completed;
}

int cmd_blowup_scan(const RunConfig& cfg, const std::string& dir, int threads, std::ostream& out) {
    const auto r = blowup_scan(cfg.scenario(), cfg.model, cfg.run_options(), cfg.scan.a_lo, cfg.scan.a_hi,
                               cfg.scan.iters, threads);
    std::ostringstream csv;
    csv << "round,a_minus,a_plus\n";
    for (std::size_t k = 0; k < r.history.size(); ++k)
        csv << k << ',' << num(r.history[k][0]) << ',' << num(r.history[k][1]) << '\n';
    io::write_text((fs::path(dir) / "blowup_scan.csv").string(), csv.str());
    out << "bracket A-=" << num(r.a_minus) << " A+=" << num(r.a_plus) << " relative_width="
        << num((r.a_plus - r.a_minus) / r.a_plus) << '\n'
        << "initial L^" << num(cfg.p) << " norm: " << num(r.lp_minus) << " (completes) .. " << num(r.lp_plus)
        << " (blows up)\n"
        << "note: grid- and scheme-dependent empirical threshold\n";
    return exit_completed;
}

int cmd_ode(const RunConfig& cfg, const std::string& dir, const std::string& timeseries, std::ostream& out) {
    const auto& o = cfg.ode;
    const auto growth = ode::integrate_growth_ode<double>(o.growth, o.growth_T, o.rtol);
    std::ostringstream csv;
    csv << "t,w\n";
    for (std::size_t i = 0; i < growth.series.t.size(); ++i)
        csv << num(growth.series.t[i]) << ',' << num(growth.series.y[i]) << '\n';
    io::write_text((fs::path(dir) / "growth_ode.csv").string(), csv.str());
    out << "growth ODE: reached t=" << num(growth.reached_t) << " w=" << num(growth.series.y.back())
        << (growth.overflowed ? " (overflow guard)" : "") << '\n';

    auto bp = o.blowup;
    const auto bu = ode::integrate_blowup_ode<double>(bp, o.rtol, o.y_cap, o.horizon);
    if (bu.blowup_time)
        out << "blow-up ODE: y crosses " << num(o.y_cap) << " at t=" << num(*bu.blowup_time)
            << " tail_bound=" << num(bu.tail_bound) << '\n';
    else
        out << "blow-up ODE: no blow-up" << (bu.decay_certified ? " (decay certified)" : " within horizon") << '\n';

    out << "pure-power blow-up time: "
        << num(ode::pure_power_blowup_time<double>(o.pure_w0, o.pure_k, o.pure_p)) << '\n';
    const auto th = ode::blowup_threshold<double>(bp.alpha1, bp.alpha2, bp.alpha3, bp.p, bp.beta0);
    out << "blow-up threshold: y0_min=" << num(th.y0_min) << " (root " << num(th.root) << ", cond_1 "
        << num(th.y_from_cond1) << ", cond_2 " << num(th.y_from_cond2) << ")\n";

    if (!timeseries.empty()) {
        const auto recs = io::read_timeseries(timeseries);
        std::vector<double> t, w;
        for (const auto& r : recs) {
            t.push_back(r.t);
            w.push_back(r.w1p_u);
        }
        const double c_fit = ode::calibrate_comparator_c<double>(t, w, cfg.p);
        out << "comparator: C_fit=" << num(c_fit) << " over " << recs.size() << " records\n";
    }
    return exit_completed;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const Grid grid(cfg.grid);
    const FieldD u0 = make_initial_condition(cfg.u0, grid);
    const FieldD n0 = make_initial_condition(cfg.n0, grid);
    bool ok = true;
    if (cfg.model.kinetics.family != KineticsFamily::Inert) {
        const double u_max = 10.0 * std::max(u0.maxCoeff(), 1e-3);
        const double n_max = 10.0 * std::max(n0.maxCoeff(), 1e-3);
        const auto rep = validate_kinetics(cfg.model.kinetics, u_max, n_max, 1001);
        for (const auto& c : rep.checks) {
            out << (c.passed ? "PASS " : "FAIL ") << c.name;
            if (!c.passed) out << " sample=" << c.worst_index << " value=" << num(c.worst_value) << ' ' << c.detail;
            out << '\n';
        }
        ok = rep.all_passed();
    } else {
        out << "SKIP kinetics (inert family)\n";
    }

    Integrator integ(grid, cfg.model, cfg.step, cfg.elliptic);
    State s = integ.initial_state(u0, n0);
    HelmholtzSolver<double> check(grid, cfg.model, cfg.elliptic);
    const double n_hi = n0.maxCoeff();
    double M_prev = total_mass(grid, s, cfg.model);
    const double M0 = M_prev;
    bool inv = true;
    for (int k = 0; k < 5 && s.t < cfg.step.t_end; ++k) {
        const auto o = integ.advance(s);
        if (o.dt_collapsed) break;
        const double scale = std::max(1.0, s.u.cwiseAbs().maxCoeff());
        const double M = total_mass(grid, s, cfg.model);
        inv = inv && s.all_finite() && s.u.minCoeff() >= -1e-12 * scale && s.n.minCoeff() >= -1e-12 &&
              s.n.maxCoeff() <= n_hi + 1e-12 && M <= M_prev + 1e-10 * M0 &&
              check.relative_residual(s.c, s.u) <= 10 * cfg.elliptic.tol;
        M_prev = M;
    }
    out << (inv ? "PASS " : "FAIL ") << "invariants over preflight steps\n";
    return ok && inv ? exit_completed : exit_error;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chemotaxis transport/elliptic/nutrient solver"};
    app.name(args.empty() ? "chemo" : args.front());
    int threads = 1;
    std::string output;
    app.add_option("--threads", threads, "worker threads for scans")->check(CLI::PositiveNumber);
    app.add_option("--output", output, "output directory (overrides output.dir)");
    app.require_subcommand(1);

    std::string config_path, timeseries;
    auto add = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", config_path, "configuration file")->required();
        return sub;
    };
    auto* run_cmd = add("run", "single simulation (exit 0 completed, 10 blow-up)");
    auto* eps_cmd = add("epsilon-study", "vanishing-diffusion continuation study");
    auto* scan_cmd = add("blowup-scan", "bisection for the blow-up amplitude threshold");
    auto* ode_cmd = add("ode", "comparison-ODE utilities");
    ode_cmd->add_option("--timeseries", timeseries, "calibrate the growth-ODE constant on a timeseries CSV");
    auto* val_cmd = add("validate", "kinetics and invariant preflight");

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_completed;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return exit_usage;
    }

    try {
        const RunConfig cfg = load_config(config_path);
        auto dir_for = [&](const char* cmd) { return output_dir(cfg, output, config_path, cmd); };
        if (*run_cmd) return cmd_run(cfg, dir_for("run"), out);
        if (*eps_cmd) return cmd_epsilon_study(cfg, dir_for("epsilon-study"), out);
        if (*scan_cmd) return cmd_blowup_scan(cfg, dir_for("blowup-scan"), threads, out);
        if (*ode_cmd) return cmd_ode(cfg, dir_for("ode"), timeseries, out);
        if (*val_cmd) return cmd_validate(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    err << app.help();
    return exit_usage;
}

}  // namespace chemo::cli
