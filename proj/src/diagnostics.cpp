#include "chemo/diagnostics.hpp"

#include <cmath>

namespace chemo {

std::string_view to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Completed: return "COMPLETED";
        case VerdictKind::BlowupDetected: return "BLOWUP";
        case VerdictKind::Aborted: return "ABORTED";
    }
    return "?";
}

std::string_view to_string(BlowupTrigger k) {
    switch (k) {
        case BlowupTrigger::None: return "none";
        case BlowupTrigger::NormThreshold: return "norm-threshold";
        case BlowupTrigger::DtCollapse: return "dt-collapse";
    }
    return "?";
}

double total_mass(const Grid& grid, const State& s, const ModelParams& params) {
    return integrate(grid, s.u) + integrate(grid, s.n) / params.gamma;
}

DiagRecord record(const Grid& grid, const State& s, double dt, const ModelParams& params, double p) {
    DiagRecord r;
    r.t = s.t;
    r.dt = dt;
    r.mass_u = integrate(grid, s.u);
    r.mass_n = integrate(grid, s.n);
    r.mass_total = r.mass_u + r.mass_n / params.gamma;
    r.min_u = s.u.minCoeff();
    r.max_u = s.u.maxCoeff();
    r.lp_u = lp_norm(grid, s.u, p);
    r.w1p_u = w1p_norm(grid, s.u, p);
    r.linf_u = lp_norm(grid, s.u, infinity);
    r.min_n = s.n.minCoeff();
    r.max_n = s.n.maxCoeff();
    r.min_c = s.c.minCoeff();
    r.max_c = s.c.maxCoeff();
    return r;
}

double mass_law_residual(const Grid& grid, const State& prev, const State& cur, const ModelParams& params,
                         double M0) {
    const double dt = cur.t - prev.t;
    if (!(dt > 0.0)) throw DomainError("mass_law_residual: states must be ordered in time");
    const double dM = total_mass(grid, cur, params) - total_mass(grid, prev, params);
    const FieldD loss = b_field(prev.n, params.kinetics).cwiseProduct(prev.u);
    const double r = std::abs(dM / dt + integrate(grid, loss));
    return M0 > 0.0 ? r / M0 : r;
}

double zzz_residual(const Grid& grid, const State& prev, const State& cur, const ModelParams& params, double p) {
    if (!(p > 1.0)) throw DomainError("zzz_residual: p must exceed 1");
    const double dt = cur.t - prev.t;
    if (!(dt > 0.0)) throw DomainError("zzz_residual: states must be ordered in time");
    const auto up = [&](const FieldD& u) -> FieldD { return u.cwiseMax(0.0).array().pow(p).matrix(); };
    const FieldD u_prev_p = up(prev.u);
    const double lhs = (integrate(grid, up(cur.u)) - integrate(grid, u_prev_p)) / (p * dt);

    const double q = (p - 1.0) / p;
    const FieldD rate = g_field(prev.u, params.kinetics).cwiseProduct(prev.n) - b_field(prev.n, params.kinetics);
    double rhs = params.alpha * q * integrate(grid, FieldD(u_prev_p.cwiseProduct(prev.u.cwiseMax(0.0)))) -
                 params.beta * q * integrate(grid, FieldD(prev.c.cwiseProduct(u_prev_p))) +
                 integrate(grid, FieldD(rate.cwiseProduct(u_prev_p)));
    if (params.epsilon > 0.0) {
        const FieldD half = prev.u.cwiseMax(0.0).array().pow(0.5 * p).matrix();
        rhs -= params.epsilon * 4.0 * (p - 1.0) / (p * p) * dirichlet_energy(grid, half);
    }
    return std::abs(lhs - rhs);
}

std::optional<BlowupVerdict> detect_blowup(double linf0, double linf_now, double t, bool dt_collapsed,
                                           const BlowupThresholds& thresholds) {
    BlowupVerdict v;
    v.t_detect = t;
    v.peak_linf = linf_now;
    v.kind = VerdictKind::BlowupDetected;
    if (!std::isfinite(linf_now) || (linf0 > 0.0 && linf_now > thresholds.factor * linf0)) {
        v.trigger = BlowupTrigger::NormThreshold;
        return v;
    }
    if (dt_collapsed) {
        v.trigger = BlowupTrigger::DtCollapse;
        return v;
    }
    return std::nullopt;
}

std::optional<BlowupVerdict> detect_blowup(const Trajectory& traj, bool dt_collapsed,
                                           const BlowupThresholds& thresholds) {
    if (traj.records.empty()) throw DomainError("detect_blowup: empty trajectory");
    const auto& first = traj.records.front();
    const auto& last = traj.records.back();
    return detect_blowup(first.linf_u, last.linf_u, last.t, dt_collapsed, thresholds);
}

}  // namespace chemo
