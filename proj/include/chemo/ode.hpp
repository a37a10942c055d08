#ifndef CHEMO_ODE_HPP
#define CHEMO_ODE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "chemo/errors.hpp"

namespace chemo::ode {

/// Dormand-Prince 5(4) step for a scalar equation y' = f(t, y).
template <typename Scalar>
struct Dopri5Step {
    Scalar y;    ///< fifth-order solution
    Scalar err;  ///< difference to the embedded fourth-order solution
};

template <typename Scalar, typename Rhs>
Dopri5Step<Scalar> dopri5_step(Rhs&& f, Scalar t, Scalar y, Scalar h) {
    const Scalar k1 = f(t, y);
    const Scalar k2 = f(t + h * Scalar(1.0 / 5), y + h * (Scalar(1.0 / 5) * k1));
    const Scalar k3 = f(t + h * Scalar(3.0 / 10), y + h * (Scalar(3.0 / 40) * k1 + Scalar(9.0 / 40) * k2));
    const Scalar k4 = f(t + h * Scalar(4.0 / 5),
                        y + h * (Scalar(44.0 / 45) * k1 - Scalar(56.0 / 15) * k2 + Scalar(32.0 / 9) * k3));
    const Scalar k5 = f(t + h * Scalar(8.0 / 9),
                        y + h * (Scalar(19372.0 / 6561) * k1 - Scalar(25360.0 / 2187) * k2 +
                                 Scalar(64448.0 / 6561) * k3 - Scalar(212.0 / 729) * k4));
    const Scalar k6 = f(t + h, y + h * (Scalar(9017.0 / 3168) * k1 - Scalar(355.0 / 33) * k2 +
                                        Scalar(46732.0 / 5247) * k3 + Scalar(49.0 / 176) * k4 -
                                        Scalar(5103.0 / 18656) * k5));
    const Scalar y5 = y + h * (Scalar(35.0 / 384) * k1 + Scalar(500.0 / 1113) * k3 + Scalar(125.0 / 192) * k4 -
                               Scalar(2187.0 / 6784) * k5 + Scalar(11.0 / 84) * k6);
    const Scalar k7 = f(t + h, y5);
    const Scalar err = h * (Scalar(71.0 / 57600) * k1 - Scalar(71.0 / 16695) * k3 + Scalar(71.0 / 1920) * k4 -
                            Scalar(17253.0 / 339200) * k5 + Scalar(22.0 / 525) * k6 - Scalar(1.0 / 40) * k7);
    return {y5, err};
}

template <typename Scalar>
struct AdaptiveOptions {
    Scalar rtol = Scalar(1e-8);
    Scalar atol = Scalar(1e-14);
    Scalar h0 = Scalar(0);  ///< 0 picks an initial step from the right side
    long max_steps = 10'000'000;
};

enum class StopReason { ReachedEnd, Stopped, MaxSteps, StepUnderflow };

template <typename Scalar>
struct AdaptiveResult {
    Scalar t;
    Scalar y;
    Scalar h_next;
    StopReason reason;
};

/// Adaptive DOPRI5 from (t0, y0) to t_end. `stop(t, y)` is tested after every accepted
/// step and ends integration early when it returns true; `observe(t, y)` sees every
/// accepted step.
template <typename Scalar, typename Rhs, typename Stop, typename Observe>
AdaptiveResult<Scalar> integrate_adaptive(Rhs&& f, Scalar t0, Scalar y0, Scalar t_end,
                                          const AdaptiveOptions<Scalar>& opts, Stop&& stop, Observe&& observe) {
    using std::abs;
    using std::max;
    using std::min;
    using std::pow;
    Scalar t = t0, y = y0;
    Scalar span = t_end - t0;
    if (span <= Scalar(0)) return {t, y, opts.h0, StopReason::ReachedEnd};
    Scalar h = opts.h0;
    if (h <= Scalar(0)) {
        const Scalar d = abs(f(t, y));
        const Scalar scale = opts.atol + opts.rtol * abs(y);
        h = d > Scalar(0) ? Scalar(0.01) * pow(scale / d, Scalar(1)) : span * Scalar(1e-3);
        h = min(max(h, span * Scalar(1e-12)), span * Scalar(0.1));
    }
    for (long n = 0; n < opts.max_steps; ++n) {
        if (t + h >= t_end) h = t_end - t;
        const auto s = dopri5_step<Scalar>(f, t, y, h);
        const Scalar scale = opts.atol + opts.rtol * max(abs(y), abs(s.y));
        const Scalar e = std::isfinite(double(s.y)) ? abs(s.err) / scale : std::numeric_limits<Scalar>::infinity();
        if (e <= Scalar(1)) {
            t = (h == t_end - t) ? t_end : t + h;
            y = s.y;
            observe(t, y);
            const Scalar grow = e > Scalar(0) ? Scalar(0.9) * pow(e, Scalar(-0.2)) : Scalar(5);
            const Scalar h_next = h * min(Scalar(5), max(Scalar(0.2), grow));
            if (stop(t, y)) return {t, y, h_next, StopReason::Stopped};
            if (t >= t_end) return {t, y, h_next, StopReason::ReachedEnd};
            h = h_next;
        } else {
            const Scalar shrink = std::isfinite(double(e)) ? Scalar(0.9) * pow(e, Scalar(-0.2)) : Scalar(0.1);
            h *= max(Scalar(0.1), min(Scalar(0.9), shrink));
        }
        if (h <= abs(t) * std::numeric_limits<Scalar>::epsilon() * Scalar(4))
            return {t, y, h, StopReason::StepUnderflow};
    }
    return {t, y, h, StopReason::MaxSteps};
}

template <typename Scalar>
struct Series {
    std::vector<Scalar> t;
    std::vector<Scalar> y;
};

// ---------------------------------------------------------------------------
// A-priori growth ODE  w' = C (1 + t + 2 sqrt t) (1 + w^{3/p} (1 + log+ w)) w

template <typename Scalar>
struct GrowthOdeParams {
    Scalar C = Scalar(1);
    Scalar p = Scalar(2);
    Scalar w0 = Scalar(1);

    void validate() const {
        if (!(C > Scalar(0)) || !(p > Scalar(1)) || !(w0 > Scalar(0)))
            throw DomainError("growth ODE needs C > 0, p > 1, w0 > 0");
    }
};

/// log+ x = log x for x > 1, else 0.
template <typename Scalar>
Scalar log_plus(Scalar x) {
    using std::log;
    return x > Scalar(1) ? log(x) : Scalar(0);
}

template <typename Scalar>
Scalar growth_factor(Scalar t) {
    using std::sqrt;
    return Scalar(1) + t + Scalar(2) * sqrt(std::max(t, Scalar(0)));
}

template <typename Scalar>
Scalar growth_rhs(const GrowthOdeParams<Scalar>& prm, Scalar t, Scalar w) {
    using std::pow;
    const Scalar wp = std::max(w, Scalar(0));
    return prm.C * growth_factor(t) * (Scalar(1) + pow(wp, Scalar(3) / prm.p) * (Scalar(1) + log_plus(wp))) * wp;
}

template <typename Scalar>
struct GrowthSolution {
    Series<Scalar> series;
    Scalar reached_t = Scalar(0);
    bool overflowed = false;  ///< stopped by the 1e12 guard before T
};

inline constexpr double growth_overflow_guard = 1e12;

template <typename Scalar>
void check_rtol(Scalar rtol) {
    if (!(rtol > Scalar(0)) || rtol > Scalar(1e-3)) throw DomainError("rtol must lie in (0, 1e-3]");
}

template <typename Scalar>
GrowthSolution<Scalar> integrate_growth_ode(const GrowthOdeParams<Scalar>& prm, Scalar T, Scalar rtol) {
    prm.validate();
    check_rtol(rtol);
    GrowthSolution<Scalar> out;
    out.series.t.push_back(Scalar(0));
    out.series.y.push_back(prm.w0);
    AdaptiveOptions<Scalar> opts;
    opts.rtol = rtol;
    opts.atol = rtol * Scalar(1e-6) * prm.w0;
    const auto res = integrate_adaptive<Scalar>(
        [&](Scalar t, Scalar w) { return growth_rhs(prm, t, w); }, Scalar(0), prm.w0, T, opts,
        [](Scalar, Scalar w) { return w > Scalar(growth_overflow_guard); },
        [&](Scalar t, Scalar w) {
            out.series.t.push_back(t);
            out.series.y.push_back(w);
        });
    out.reached_t = res.t;
    out.overflowed = res.reason != StopReason::ReachedEnd;
    return out;
}

/// Growth-ODE values at the nondecreasing sample times `times` (times[0] is the start);
/// +inf once the overflow guard has tripped.
template <typename Scalar>
std::vector<Scalar> growth_ode_values_at(const GrowthOdeParams<Scalar>& prm, std::span<const Scalar> times,
                                         Scalar rtol) {
    prm.validate();
    check_rtol(rtol);
    std::vector<Scalar> v;
    v.reserve(times.size());
    if (times.empty()) return v;
    AdaptiveOptions<Scalar> opts;
    opts.rtol = rtol;
    opts.atol = rtol * Scalar(1e-6) * prm.w0;
    Scalar t = times[0], w = prm.w0;
    bool dead = false;
    v.push_back(w);
    auto rhs = [&](Scalar s, Scalar x) { return growth_rhs(prm, s, x); };
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!dead && times[i] > t) {
            const auto r = integrate_adaptive<Scalar>(
                rhs, t, w, times[i], opts, [](Scalar, Scalar x) { return x > Scalar(growth_overflow_guard); },
                [](Scalar, Scalar) {});
            if (r.reason != StopReason::ReachedEnd) dead = true;
            t = r.t;
            w = r.y;
            opts.h0 = r.h_next;
        }
        v.push_back(dead ? std::numeric_limits<Scalar>::infinity() : w);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Blow-up ODE  y' = a1 y^{1+1/p} - a2 y - a3

template <typename Scalar>
struct BlowupOdeParams {
    Scalar alpha1 = Scalar(1);
    Scalar alpha2 = Scalar(1);
    Scalar alpha3 = Scalar(1);
    Scalar p = Scalar(2);
    Scalar y0 = Scalar(1);
    Scalar beta0 = Scalar(1);

    void validate() const {
        if (!(alpha1 > Scalar(0)) || !(alpha2 > Scalar(0)) || !(alpha3 > Scalar(0)) || !(p > Scalar(1)) ||
            !(y0 > Scalar(0)) || !(beta0 > Scalar(0)))
            throw DomainError("blow-up ODE parameters must be positive with p > 1");
    }
};

template <typename Scalar>
Scalar blowup_rhs(const BlowupOdeParams<Scalar>& prm, Scalar y) {
    using std::pow;
    const Scalar yp = std::max(y, Scalar(0));
    return prm.alpha1 * pow(yp, Scalar(1) + Scalar(1) / prm.p) - prm.alpha2 * y - prm.alpha3;
}

template <typename Scalar>
struct BlowupOdeResult {
    Series<Scalar> series;
    std::optional<Scalar> blowup_time;  ///< time at which y crosses y_cap
    /// Upper bound on T_max - blowup_time from the pure-power majorant tail
    /// int_{y_cap}^inf dy / (a1 y^{1+1/p}/2); NaN when the majorant does not apply.
    Scalar tail_bound = std::numeric_limits<Scalar>::quiet_NaN();
    bool decay_certified = false;  ///< y' <= 0 reached: y is nonincreasing from then on
};

template <typename Scalar>
BlowupOdeResult<Scalar> integrate_blowup_ode(const BlowupOdeParams<Scalar>& prm, Scalar rtol,
                                             Scalar y_cap = Scalar(1e9), Scalar horizon = Scalar(1e3)) {
    using std::abs;
    using std::pow;
    prm.validate();
    check_rtol(rtol);
    BlowupOdeResult<Scalar> out;
    out.series.t.push_back(Scalar(0));
    out.series.y.push_back(prm.y0);
    auto f = [&](Scalar, Scalar y) { return blowup_rhs(prm, y); };
    // The right side is convex in y with a single positive root, so y' <= 0 once means
    // y' <= 0 forever.
    if (f(Scalar(0), prm.y0) <= Scalar(0)) {
        out.decay_certified = true;
        return out;
    }
    if (prm.y0 >= y_cap) {
        out.blowup_time = Scalar(0);
        return out;
    }
    AdaptiveOptions<Scalar> opts;
    opts.rtol = rtol;
    opts.atol = rtol * Scalar(1e-6) * prm.y0;
    Scalar t_prev = 0, y_prev = prm.y0;
    const auto res = integrate_adaptive<Scalar>(
        f, Scalar(0), prm.y0, horizon, opts,
        [&](Scalar, Scalar y) { return y >= y_cap || f(Scalar(0), y) <= Scalar(0); },
        [&](Scalar t, Scalar y) {
            if (y < y_cap) {
                t_prev = t;
                y_prev = y;
            }
            out.series.t.push_back(t);
            out.series.y.push_back(y);
        });
    if (res.reason == StopReason::Stopped && res.y >= y_cap) {
        // Locate the crossing inside the last accepted step by bisection on the step length.
        Scalar lo = 0, hi = res.t - t_prev;
        for (int it = 0; it < 200 && hi - lo > abs(t_prev) * Scalar(1e-15); ++it) {
            const Scalar mid = Scalar(0.5) * (lo + hi);
            const Scalar y = dopri5_step<Scalar>(f, t_prev, y_prev, mid).y;
            if (std::isfinite(double(y)) && y < y_cap) lo = mid; else hi = mid;
        }
        out.blowup_time = t_prev + Scalar(0.5) * (lo + hi);
        out.series.t.back() = *out.blowup_time;
        out.series.y.back() = y_cap;
        const Scalar half = Scalar(0.5) * prm.alpha1 * pow(y_cap, Scalar(1) / prm.p);
        if (half * y_cap - prm.alpha2 * y_cap - prm.alpha3 >= Scalar(0))
            out.tail_bound = Scalar(2) * prm.p / (prm.alpha1 * pow(y_cap, Scalar(1) / prm.p));
    } else if (res.reason == StopReason::Stopped) {
        out.decay_certified = true;
    }
    return out;
}

/// Exact blow-up time p / (k w0^{1/p}) of w' = k w^{1+1/p}, w(0) = w0.
template <typename Scalar>
Scalar pure_power_blowup_time(Scalar w0, Scalar k, Scalar p) {
    using std::pow;
    if (!(w0 > Scalar(0)) || !(k > Scalar(0)) || !(p > Scalar(1)))
        throw DomainError("pure_power_blowup_time needs w0 > 0, k > 0, p > 1");
    return p / (k * pow(w0, Scalar(1) / p));
}

/// Infimum of {x > 0 : pred(x)} for a predicate that is false below and true above it.
template <typename Scalar, typename Pred>
Scalar monotone_threshold(Pred&& pred, Scalar rel_tol = Scalar(1e-10)) {
    Scalar hi = 1;
    int guard = 0;
    while (!pred(hi)) {
        hi *= 2;
        if (++guard > 4000) throw DomainError("monotone_threshold: predicate never holds");
    }
    Scalar lo = hi / 2;
    guard = 0;
    while (pred(lo)) {
        hi = lo;
        lo /= 2;
        if (++guard > 4000 || lo == Scalar(0)) return Scalar(0);
    }
    while (hi - lo > rel_tol * hi) {
        const Scalar mid = Scalar(0.5) * (lo + hi);
        if (pred(mid)) hi = mid; else lo = mid;
    }
    return hi;
}

template <typename Scalar>
struct ThresholdResult {
    Scalar y0_min;       ///< max of the three bounds below
    Scalar root;         ///< positive root of a1 x^{1+1/p} - a2 x - a3 (cond_0 holds for all x above it)
    Scalar y_from_cond1; ///< beta0 + smallest z(0) satisfying cond_1
    Scalar y_from_cond2; ///< beta0 + smallest z(0) satisfying cond_2
};

/// Smallest initial value for which the sufficient blow-up conditions of the comparison
/// argument hold: positivity of the right side beyond y0, and the two conditions on
/// z(0) = y0 - beta0.
template <typename Scalar>
ThresholdResult<Scalar> blowup_threshold(Scalar a1, Scalar a2, Scalar a3, Scalar p, Scalar beta0) {
    using std::pow;
    if (!(a1 > Scalar(0)) || !(a2 > Scalar(0)) || !(a3 > Scalar(0)) || !(p > Scalar(1)) || !(beta0 > Scalar(0)))
        throw DomainError("blowup_threshold needs positive coefficients and p > 1");
    const Scalar q = Scalar(1) / p;
    ThresholdResult<Scalar> r;
    r.root = monotone_threshold<Scalar>([&](Scalar x) { return a1 * pow(x, Scalar(1) + q) - a2 * x - a3 > Scalar(0); });
    const Scalar z1 = monotone_threshold<Scalar>(
        [&](Scalar z) { return a1 * beta0 * (Scalar(1) + q) * pow(z, q) - a2 * beta0 - a3 > Scalar(0); });
    const Scalar z2 = monotone_threshold<Scalar>([&](Scalar z) { return Scalar(0.5) * a1 * pow(z, q) - a2 > Scalar(0); });
    r.y_from_cond1 = beta0 + z1;
    r.y_from_cond2 = beta0 + z2;
    r.y0_min = std::max({r.root, r.y_from_cond1, r.y_from_cond2});
    return r;
}

// ---------------------------------------------------------------------------
// Comparison of an observed W^{1,p} history against the growth ODE.

template <typename Scalar>
struct ComparatorEntry {
    Scalar t;
    Scalar bound;     ///< growth-ODE value (a bound on observed^p)
    Scalar observed;  ///< observed^p
    bool ok;
};

template <typename Scalar>
struct ComparatorReport {
    std::vector<ComparatorEntry<Scalar>> entries;
    bool all_ok = true;
};

/// Integrates the growth ODE from observed[0]^p with constant C and flags every sample
/// where observed^p exceeds it.
template <typename Scalar>
ComparatorReport<Scalar> ode_comparator_check(std::span<const Scalar> times, std::span<const Scalar> observed,
                                              Scalar C, Scalar p, Scalar rtol = Scalar(1e-8)) {
    using std::pow;
    if (times.size() != observed.size()) throw DomainError("comparator: times and observations differ in length");
    if (!(C > Scalar(0))) throw DomainError("comparator: C must be positive");
    ComparatorReport<Scalar> rep;
    if (times.empty()) return rep;
    const Scalar w0 = pow(observed[0], p);
    if (!(w0 > Scalar(0))) throw DomainError("comparator: initial W^{1,p} norm must be positive");
    const auto bound = growth_ode_values_at<Scalar>({C, p, w0}, times, rtol);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Scalar obs = pow(observed[i], p);
        const bool ok = obs <= bound[i] * (Scalar(1) + Scalar(1e-9));
        rep.entries.push_back({times[i], bound[i], obs, ok});
        rep.all_ok = rep.all_ok && ok;
    }
    return rep;
}

/// Smallest C = 2^k, k in [-60, 60], for which the comparator flags nothing.
template <typename Scalar>
Scalar calibrate_comparator_c(std::span<const Scalar> times, std::span<const Scalar> observed, Scalar p,
                              Scalar rtol = Scalar(1e-8)) {
    using std::ldexp;
    auto ok = [&](int k) { return ode_comparator_check<Scalar>(times, observed, ldexp(Scalar(1), k), p, rtol).all_ok; };
    int lo = -60, hi = 60;
    if (ok(lo)) return ldexp(Scalar(1), lo);
    if (!ok(hi)) throw DomainError("comparator calibration: no C up to 2^60 bounds the trajectory");
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (ok(mid)) hi = mid; else lo = mid;
    }
    return ldexp(Scalar(1), hi);
}

}  // namespace chemo::ode

#endif  // CHEMO_ODE_HPP
