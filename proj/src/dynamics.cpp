#include "chemo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemo/ode.hpp"

namespace chemo {

void StepConfig::validate() const {
    if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("step.cfl must lie in (0, 1)");
    if (!(dt_max > 0.0)) throw ConfigError("step.dt_max must be positive");
    if (!(t_end >= 0.0)) throw ConfigError("step.t_end must be nonnegative");
    if (dt_min < 0.0) throw ConfigError("step.dt_min must be nonnegative");
    if (!(effective_dt_min() < dt_max) && t_end > 0.0) throw ConfigError("step.dt_min must be below step.dt_max");
    if (!(diffusion_theta >= 0.5 && diffusion_theta <= 1.0)) throw ConfigError("step.diffusion_theta must lie in [0.5, 1]");
    if (snapshot_every < 1) throw ConfigError("step.snapshot_every must be >= 1");
}

double cfl_dt(const Grid& grid, const State& s, const StepConfig& cfg, const ModelParams& params) {
    double dt = cfg.dt_max;
    const auto v = gradient_faces(grid, s.c);
    double rate = 0.0;
    for (int a = 0; a < grid.dim(); ++a)
        if (v.axis[a].size() > 0) rate += v.axis[a].cwiseAbs().maxCoeff() / grid.h(a);
    if (rate > 0.0) dt = std::min(dt, cfg.cfl / rate);
    const auto& k = params.kinetics;
    if (k.family != KineticsFamily::Inert) {
        const double r = k.G0 * std::max(s.n.maxCoeff(), 0.0) + k.B0;
        if (r > 0.0) dt = std::min(dt, 1.0 / (2.0 * r));
    }
    return dt;
}

FaceField<double> advective_flux(const Grid& grid, const FieldD& u, const FieldD& c) {
    auto flux = gradient_faces(grid, c);
    const int nx = grid.nx(), ny = grid.ny();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            double& f = flux.axis[0][i + (nx - 1) * j];
            f *= f > 0.0 ? u[grid.index(i, j)] : u[grid.index(i + 1, j)];
        }
    if (grid.dim() == 2)
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                double& f = flux.axis[1][i + nx * j];
                f *= f > 0.0 ? u[grid.index(i, j)] : u[grid.index(i, j + 1)];
            }
    return flux;
}

FieldD accumulate_w(const State& s, double dt, const ModelParams& params) {
    if (!(dt > 0.0)) throw DomainError("accumulate_w: dt must be positive");
    return s.w + dt * b_field(s.n, params.kinetics).cwiseProduct(s.u);
}

Integrator::Integrator(const Grid& grid, const ModelParams& params, const StepConfig& step,
                       const EllipticConfig& elliptic)
    : grid_(grid), params_(params), step_(step), helmholtz_(grid, params, elliptic), diffusion_(grid, elliptic) {
    params_.validate();
    step_.validate();
}

State Integrator::initial_state(const FieldD& u0, const FieldD& n0) {
    if (u0.size() != grid_.size() || n0.size() != grid_.size())
        throw ConfigError("initial condition does not match the grid");
    if (!u0.allFinite() || !n0.allFinite() || u0.minCoeff() < 0.0 || n0.minCoeff() < 0.0)
        throw ConfigError("initial conditions must be finite and nonnegative");
    State s;
    s.u = u0;
    s.n = n0;
    s.w = FieldD::Zero(grid_.size());
    refresh_c(s);
    return s;
}

void Integrator::refresh_c(State& s) { s.c = helmholtz_.solve(s.u); }

FieldD Integrator::transport(const FieldD& u, const FieldD& c, double dt) const {
    return u - dt * divergence_faces(grid_, advective_flux(grid_, u, c));
}

FieldD Integrator::consume_n(const FieldD& u, const FieldD& n, double dt) const {
    const FieldD gu = g_field(u, params_.kinetics).cwiseProduct(u.cwiseMax(0.0));
    return n.array() / (1.0 + dt * params_.gamma * gu.array());
}

// The gain is the nutrient actually consumed (divided by gamma), so that
// int(u + n/gamma) changes only through the implicit inactivation loss.
FieldD Integrator::react_u(const FieldD& u_star, const FieldD& n, double dt) const {
    const FieldD consumed = n - consume_n(u_star, n, dt);
    const FieldD b = b_field(n, params_.kinetics);
    return (u_star + consumed / params_.gamma).array() / (1.0 + dt * b.array());
}

FieldD Integrator::diffuse_u(const FieldD& u, double dt) {
    if (params_.epsilon <= 0.0) return u;
    return diffusion_.solve(u, 1.0, params_.epsilon * dt);
}

FieldD Integrator::diffuse_n(const FieldD& n, double dt) {
    const double theta = step_.diffusion_theta;
    FieldD rhs = n;
    if (theta < 1.0) rhs += (1.0 - theta) * dt * laplacian_neumann(grid_, n);
    return diffusion_.solve(rhs, 1.0, theta * dt);
}

FieldD Integrator::step_u(const State& s, double dt) {
    return diffuse_u(react_u(transport(s.u, s.c, dt), s.n, dt), dt);
}

FieldD Integrator::step_n(const State& s, double dt) { return diffuse_n(consume_n(s.u, s.n, dt), dt); }

void Integrator::advance_with_dt(State& s, double dt) {
    if (!(dt > 0.0)) throw DomainError("advance: dt must be positive");
    const FieldD u_star = transport(s.u, s.c, dt);
    const FieldD u_new = diffuse_u(react_u(u_star, s.n, dt), dt);
    const FieldD n_new = diffuse_n(consume_n(u_star, s.n, dt), dt);
    s.w = accumulate_w(s, dt, params_);
    s.u = u_new;
    s.n = n_new;
    s.t += dt;
    refresh_c(s);
}

AdvanceOutcome Integrator::advance(State& s) {
    AdvanceOutcome out;
    const double dt = cfl_dt(s);
    if (!(dt >= step_.effective_dt_min())) {
        out.dt = dt;
        out.dt_collapsed = true;
        return out;
    }
    const double remaining = step_.t_end - s.t;
    out.dt = std::min(dt, remaining);
    // Avoid a sliver step: stretch onto t_end when within round-off of it.
    if (remaining - out.dt <= 1e-12 * std::max(1.0, step_.t_end)) out.dt = remaining;
    advance_with_dt(s, out.dt);
    if (out.dt == remaining) s.t = step_.t_end;
    return out;
}

RunResult run(const Grid& grid, const FieldD& u0, const FieldD& n0, const ModelParams& params,
              const RunOptions& options) {
    if (!(options.p > 1.0)) throw ConfigError("diagnostics.p must exceed 1");
    Integrator integ(grid, params, options.step, options.elliptic);
    RunResult res;
    State s = integ.initial_state(u0, n0);
    const double t_end = options.step.t_end;
    const double linf0 = lp_norm(grid, s.u, infinity);
    const double M0 = total_mass(grid, s, params);
    res.verdict.peak_linf = linf0;
    if (t_end <= 0.0) {
        res.final_state = s;
        return res;
    }

    State prev_recorded = s;
    auto push_record = [&](const State& cur, double dt, bool has_prev) {
        if (!options.record_diagnostics) return;
        DiagRecord r = record(grid, cur, dt, params, options.p);
        if (has_prev && cur.t > prev_recorded.t) {
            r.mass_law_residual = mass_law_residual(grid, prev_recorded, cur, params, M0);
            r.zzz_residual = zzz_residual(grid, prev_recorded, cur, params, options.p);
        }
        res.trajectory.records.push_back(r);
        if (options.keep_snapshots) res.trajectory.snapshots.push_back(cur);
        prev_recorded = cur;
    };
    push_record(s, 0.0, false);

    long since_record = 0;
    double last_dt = 0.0;
    try {
        while (s.t < t_end) {
            const AdvanceOutcome o = integ.advance(s);
            if (o.dt_collapsed) {
                res.verdict = *detect_blowup(linf0, lp_norm(grid, s.u, infinity), s.t, true, options.blowup);
                break;
            }
            ++res.steps;
            last_dt = o.dt;
            if (!s.all_finite()) {
                res.verdict.kind = VerdictKind::Aborted;
                res.verdict.reason = "non-finite state";
                res.verdict.t_detect = s.t;
                break;
            }
            const double linf = lp_norm(grid, s.u, infinity);
            res.verdict.peak_linf = std::max(res.verdict.peak_linf, linf);
            if (auto v = detect_blowup(linf0, linf, s.t, false, options.blowup)) {
                v->peak_linf = res.verdict.peak_linf;
                res.verdict = *v;
                push_record(s, o.dt, true);
                since_record = 0;
                break;
            }
            if (++since_record >= options.step.snapshot_every || s.t >= t_end) {
                push_record(s, o.dt, true);
                since_record = 0;
            }
        }
    } catch (const SolverFailure& e) {
        res.verdict.kind = VerdictKind::Aborted;
        res.verdict.reason = std::string(e.what()) + " (residual " + std::to_string(e.residual()) + ")";
        res.verdict.t_detect = s.t;
    }
    if (since_record > 0 && res.verdict.kind != VerdictKind::Aborted) push_record(s, last_dt, true);

    auto& recs = res.trajectory.records;
    if (options.comparator_c > 0.0 && !recs.empty() && recs.front().w1p_u > 0.0) {
        std::vector<double> times;
        for (const auto& r : recs) times.push_back(r.t);
        const ode::GrowthOdeParams<double> gp{options.comparator_c, options.p, std::pow(recs.front().w1p_u, options.p)};
        const auto bound = ode::growth_ode_values_at<double>(gp, times, 1e-8);
        for (std::size_t i = 0; i < recs.size(); ++i) recs[i].ode_bound = bound[i];
    }
    res.final_state = std::move(s);
    return res;
}

}  // namespace chemo
