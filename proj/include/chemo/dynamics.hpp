#ifndef CHEMO_DYNAMICS_HPP
#define CHEMO_DYNAMICS_HPP

#include <optional>

#include "chemo/diagnostics.hpp"
#include "chemo/elliptic.hpp"
#include "chemo/grid.hpp"
#include "chemo/model.hpp"
#include "chemo/state.hpp"

namespace chemo {

struct StepConfig {
    double cfl = 0.45;
    double dt_max = 1e-2;
    double dt_min = 0.0;  ///< 0 selects 1e-10 * t_end
    double t_end = 1.0;
    double diffusion_theta = 1.0;  ///< 1 = backward Euler for n
    int snapshot_every = 1;        ///< record diagnostics every this many steps

    void validate() const;
    double effective_dt_min() const { return dt_min > 0.0 ? dt_min : 1e-10 * t_end; }
};

/// Stable step: min(dt_max, transport limit cfl / sum_axis(max|grad c|/h), reaction limit
/// 1/(2(G0 max n + B0))).
double cfl_dt(const Grid& grid, const State& s, const StepConfig& cfg, const ModelParams& params);

/// Upwind flux u_upwind * grad c on every interior face; walls carry no flux.
FaceField<double> advective_flux(const Grid& grid, const FieldD& u, const FieldD& c);

/// w + dt b(n) u.
FieldD accumulate_w(const State& s, double dt, const ModelParams& params);

struct AdvanceOutcome {
    double dt = 0.0;
    bool dt_collapsed = false;  ///< stable step fell below dt_min; the state was not advanced
};

/// Operator-split integrator for the transport / elliptic / nutrient system.
/// Owns its linear solvers; one instance per run.
class Integrator {
public:
    Integrator(const Grid& grid, const ModelParams& params, const StepConfig& step, const EllipticConfig& elliptic);

    const Grid& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    const StepConfig& step_config() const { return step_; }

    /// State at t = 0 with c solved from u0 and w = 0.
    State initial_state(const FieldD& u0, const FieldD& n0);

    void refresh_c(State& s);
    double cfl_dt(const State& s) const { return chemo::cfl_dt(grid_, s, step_, params_); }

    /// Transport, reaction and (for eps > 0) implicit diffusion of u over one step.
    FieldD step_u(const State& s, double dt);
    /// Implicit consumption n/(1 + dt gamma g(u) u), then the theta-scheme heat step.
    FieldD step_n(const State& s, double dt);

    /// One split step with the stable dt (clipped to land on t_end).
    AdvanceOutcome advance(State& s);
    /// One split step with a prescribed dt.
    void advance_with_dt(State& s, double dt);

private:
    FieldD transport(const FieldD& u, const FieldD& c, double dt) const;
    FieldD react_u(const FieldD& u_star, const FieldD& n, double dt) const;
    FieldD consume_n(const FieldD& u, const FieldD& n, double dt) const;
    FieldD diffuse_u(const FieldD& u, double dt);
    FieldD diffuse_n(const FieldD& n, double dt);

    Grid grid_;
    ModelParams params_;
    StepConfig step_;
    HelmholtzSolver<double> helmholtz_;
    ShiftedLaplaceSolver<double> diffusion_;
};

struct RunOptions {
    StepConfig step;
    EllipticConfig elliptic;
    double p = 2.0;  ///< exponent of the L^p / W^{1,p} diagnostics
    BlowupThresholds blowup;
    bool record_diagnostics = true;
    bool keep_snapshots = false;
    double comparator_c = 1.0;  ///< growth-ODE constant for the ode_bound column; <= 0 disables
};

struct RunResult {
    Trajectory trajectory;
    BlowupVerdict verdict;
    State final_state;
    long steps = 0;
};

RunResult run(const Grid& grid, const FieldD& u0, const FieldD& n0, const ModelParams& params,
              const RunOptions& options);

}  // namespace chemo

#endif  // CHEMO_DYNAMICS_HPP
