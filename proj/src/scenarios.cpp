#include "chemo/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <numbers>

namespace chemo {

std::string_view to_string(InitialKind k) {
    switch (k) {
        case InitialKind::Constant: return "constant";
        case InitialKind::Gaussian: return "gaussian";
        case InitialKind::CosinePerturbation: return "cosine-perturbation";
        case InitialKind::Table: return "table";
    }
    return "?";
}

InitialKind initial_kind_from_string(std::string_view name) {
    for (auto k : {InitialKind::Constant, InitialKind::Gaussian, InitialKind::CosinePerturbation, InitialKind::Table})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown initial-condition kind '" + std::string(name) + "'");
}

void InitialCondition::validate() const {
    if (!std::isfinite(amplitude) || !std::isfinite(background)) throw ConfigError("initial condition must be finite");
    if (kind == InitialKind::Gaussian && !(width > 0.0)) throw ConfigError("gaussian width must be positive");
    if (kind == InitialKind::CosinePerturbation && mode < 0) throw ConfigError("cosine mode must be nonnegative");
}

FieldD make_initial_condition(const InitialCondition& ic, const Grid& grid) {
    ic.validate();
    FieldD f(grid.size());
    switch (ic.kind) {
        case InitialKind::Constant:
            f.setConstant(ic.amplitude);
            break;
        case InitialKind::Gaussian: {
            const double s2 = 2.0 * ic.width * ic.width;
            for (int j = 0; j < grid.ny(); ++j)
                for (int i = 0; i < grid.nx(); ++i) {
                    double r2 = std::pow(grid.center(0, i) - ic.center[0], 2);
                    if (grid.dim() == 2) r2 += std::pow(grid.center(1, j) - ic.center[1], 2);
                    f[grid.index(i, j)] = ic.amplitude * std::exp(-r2 / s2) + ic.background;
                }
            break;
        }
        case InitialKind::CosinePerturbation: {
            const double pi = std::numbers::pi;
            for (int j = 0; j < grid.ny(); ++j)
                for (int i = 0; i < grid.nx(); ++i) {
                    double v = std::cos(ic.mode * pi * grid.center(0, i) / grid.length(0));
                    if (grid.dim() == 2) v *= std::cos(ic.mode * pi * grid.center(1, j) / grid.length(1));
                    f[grid.index(i, j)] = ic.background + ic.amplitude * v;
                }
            break;
        }
        case InitialKind::Table:
            if (Eigen::Index(ic.table.size()) != grid.size())
                throw ConfigError("initial table has " + std::to_string(ic.table.size()) + " values, grid has " +
                                  std::to_string(grid.size()) + " cells");
            f = Eigen::Map<const FieldD>(ic.table.data(), grid.size());
            break;
    }
    return f.cwiseMax(0.0);
}

RunResult run_scenario(const Scenario& sc, const ModelParams& params, const RunOptions& options) {
    const Grid grid(sc.grid);
    return run(grid, make_initial_condition(sc.u0, grid), make_initial_condition(sc.n0, grid), params, options);
}

void EpsStudySpec::validate() const {
    if (eps_values.empty()) {
        if (!(eps0 > 0.0)) throw ConfigError("eps_study.eps0 must be positive");
        if (levels < 2) throw ConfigError("eps_study.levels must be >= 2");
    } else {
        if (eps_values.size() < 2) throw ConfigError("eps_study needs at least two levels");
        for (double e : eps_values)
            if (!(e > 0.0)) throw ConfigError("eps_study levels must be positive");
    }
    if (!(p >= 1.0)) throw ConfigError("eps_study.p must be >= 1");
    if (!(horizon > 0.0)) throw ConfigError("eps_study.horizon must be positive");
}

std::vector<double> EpsStudySpec::resolved_levels() const {
    if (!eps_values.empty()) return eps_values;
    std::vector<double> e;
    for (int k = 0; k < levels; ++k) e.push_back(std::ldexp(eps0, -k));
    return e;
}

double spacetime_distance(const Grid& grid, const std::vector<double>& times, const std::vector<FieldD>& a,
                          const std::vector<FieldD>& b, double p) {
    if (a.size() != times.size() || b.size() != times.size())
        throw DomainError("spacetime_distance: histories must share the time grid");
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double cur = std::pow(lp_norm(grid, FieldD(a[k] - b[k]), p), p);
        if (k > 0) acc += 0.5 * (times[k] - times[k - 1]) * (cur + prev);
        prev = cur;
    }
    return std::pow(acc, 1.0 / p);
}

EpsStudyResult epsilon_sweep(const EpsStudySpec& spec, const Scenario& sc, const ModelParams& params,
                             const RunOptions& options) {
    spec.validate();
    const Grid grid(sc.grid);
    const auto levels = spec.resolved_levels();
    StepConfig step = options.step;
    step.t_end = spec.horizon;

    // Largest-eps level alone first: the study requires small data that never blows up.
    {
        RunOptions probe = options;
        probe.step = step;
        probe.record_diagnostics = false;
        probe.comparator_c = 0.0;
        ModelParams pe = params;
        pe.epsilon = *std::max_element(levels.begin(), levels.end());
        const auto r = run_scenario(sc, pe, probe);
        if (r.verdict.kind != VerdictKind::Completed)
            throw SweepError("epsilon level " + std::to_string(pe.epsilon) + " does not complete (" +
                             std::string(to_string(r.verdict.kind)) + ")");
    }

    const FieldD u0 = make_initial_condition(sc.u0, grid);
    const FieldD n0 = make_initial_condition(sc.n0, grid);
    std::deque<Integrator> runs;
    std::vector<State> states;
    std::vector<double> run_eps = levels;
    run_eps.push_back(0.0);  // hyperbolic reference
    for (double e : run_eps) {
        ModelParams pe = params;
        pe.epsilon = e;
        runs.emplace_back(grid, pe, step, options.elliptic);
        states.push_back(runs.back().initial_state(u0, n0));
    }
    const std::size_t L = levels.size();
    const std::size_t H = L;  // index of the eps = 0 run
    const double linf0 = lp_norm(grid, u0, infinity);
    const double p = spec.p;

    EpsStudyResult out;
    out.eps = levels;
    out.times.push_back(0.0);
    std::vector<double> acc_cons(L - 1, 0.0), acc_hyp(L, 0.0);
    auto dist_p = [&](std::size_t a, std::size_t b) {
        return std::pow(lp_norm(grid, FieldD(states[a].u - states[b].u), p), p);
    };
    std::vector<double> prev_cons(L - 1), prev_hyp(L);
    for (std::size_t k = 0; k + 1 < L; ++k) prev_cons[k] = dist_p(k, k + 1);
    for (std::size_t k = 0; k < L; ++k) prev_hyp[k] = dist_p(k, H);

    double t = 0.0;
    while (t < spec.horizon) {
        double dt = step.dt_max;
        for (std::size_t r = 0; r < runs.size(); ++r) dt = std::min(dt, runs[r].cfl_dt(states[r]));
        if (!(dt >= step.effective_dt_min())) throw SweepError("step collapse during epsilon sweep");
        dt = std::min(dt, spec.horizon - t);
        for (std::size_t r = 0; r < runs.size(); ++r) {
            runs[r].advance_with_dt(states[r], dt);
            const double linf = lp_norm(grid, states[r].u, infinity);
            if (!states[r].all_finite() || detect_blowup(linf0, linf, states[r].t, false, options.blowup)) {
                throw SweepError(r == H ? std::string("hyperbolic reference run blew up")
                                        : "epsilon level " + std::to_string(run_eps[r]) + " blew up");
            }
        }
        t = states[0].t;
        if (spec.horizon - t <= 1e-12 * spec.horizon) t = spec.horizon;
        out.times.push_back(t);
        for (std::size_t k = 0; k + 1 < L; ++k) {
            const double cur = dist_p(k, k + 1);
            acc_cons[k] += 0.5 * dt * (cur + prev_cons[k]);
            prev_cons[k] = cur;
        }
        for (std::size_t k = 0; k < L; ++k) {
            const double cur = dist_p(k, H);
            acc_hyp[k] += 0.5 * dt * (cur + prev_hyp[k]);
            prev_hyp[k] = cur;
        }
    }
    for (double a : acc_cons) out.consecutive.push_back(std::pow(a, 1.0 / p));
    for (double a : acc_hyp) out.to_hyperbolic.push_back(std::pow(a, 1.0 / p));
    return out;
}

bool blows_up_at(const Scenario& sc, double amplitude, const ModelParams& params, const RunOptions& options) {
    Scenario probe = sc;
    probe.u0.amplitude = amplitude;
    RunOptions opt = options;
    opt.record_diagnostics = false;
    opt.keep_snapshots = false;
    opt.comparator_c = 0.0;
    const auto r = run_scenario(probe, params, opt);
    if (r.verdict.kind == VerdictKind::Aborted)
        throw ScanError("run at amplitude " + std::to_string(amplitude) + " aborted: " + r.verdict.reason);
    return r.verdict.kind == VerdictKind::BlowupDetected;
}

ScanResult blowup_scan(const Scenario& sc, const ModelParams& params, const RunOptions& options, double a_lo,
                       double a_hi, int iters, int threads) {
    if (!(a_lo >= 0.0) || !(a_hi > a_lo)) throw ScanError("blow-up scan needs 0 <= A_lo < A_hi");
    if (iters < 0) throw ScanError("blow-up scan needs iters >= 0");
    bool lo_blows = false, hi_blows = false;
    if (threads > 1) {
        auto f = std::async(std::launch::async, [&] { return blows_up_at(sc, a_lo, params, options); });
        hi_blows = blows_up_at(sc, a_hi, params, options);
        lo_blows = f.get();
    } else {
        lo_blows = blows_up_at(sc, a_lo, params, options);
        hi_blows = blows_up_at(sc, a_hi, params, options);
    }
    if (lo_blows) throw ScanError("lower amplitude already blows up; widen the bracket downwards");
    if (!hi_blows) throw ScanError("upper amplitude completes; widen the bracket upwards");

    ScanResult r;
    r.a_minus = a_lo;
    r.a_plus = a_hi;
    r.history.push_back({a_lo, a_hi});
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (r.a_minus + r.a_plus);
        if (blows_up_at(sc, mid, params, options)) r.a_plus = mid; else r.a_minus = mid;
        r.history.push_back({r.a_minus, r.a_plus});
        ++r.iterations;
    }
    const Grid grid(sc.grid);
    Scenario s = sc;
    s.u0.amplitude = r.a_minus;
    r.lp_minus = lp_norm(grid, make_initial_condition(s.u0, grid), options.p);
    s.u0.amplitude = r.a_plus;
    r.lp_plus = lp_norm(grid, make_initial_condition(s.u0, grid), options.p);
    return r;
}

}  // namespace chemo
