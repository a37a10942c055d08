#ifndef CHEMO_SCENARIOS_HPP
#define CHEMO_SCENARIOS_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemo/dynamics.hpp"

namespace chemo {

enum class InitialKind { Constant, Gaussian, CosinePerturbation, Table };

std::string_view to_string(InitialKind k);
InitialKind initial_kind_from_string(std::string_view name);

struct InitialCondition {
    InitialKind kind = InitialKind::Constant;
    double amplitude = 1.0;
    std::array<double, 2> center{0.5, 0.5};
    double width = 0.1;  ///< Gaussian standard deviation
    double background = 0.0;
    int mode = 1;        ///< cosine-perturbation wavenumber: background + A cos(mode pi x/L) per axis
    std::vector<double> table;  ///< cell values for the table kind, x fastest

    void validate() const;
};

/// Samples the initial condition at cell centres; negative values are clamped to 0.
FieldD make_initial_condition(const InitialCondition& ic, const Grid& grid);

struct Scenario {
    GridSpec grid;
    InitialCondition u0;
    InitialCondition n0;
};

RunResult run_scenario(const Scenario& sc, const ModelParams& params, const RunOptions& options);

// --- epsilon continuation ---------------------------------------------------

struct EpsStudySpec {
    double eps0 = 0.1;
    int levels = 4;
    double p = 2.0;
    double horizon = 1.0;
    std::vector<double> eps_values;  ///< explicit levels; empty means eps0 * 2^-k, k < levels

    void validate() const;
    std::vector<double> resolved_levels() const;
};

struct EpsStudyResult {
    std::vector<double> eps;
    std::vector<double> consecutive;   ///< D_k between levels k and k+1
    std::vector<double> to_hyperbolic; ///< distance of each level to the eps = 0 run
    std::vector<double> times;         ///< shared step schedule
};

class SweepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs every eps level and the eps = 0 system in lockstep on a shared step schedule
/// (dt = min over runs of the stable step) and returns space-time L^p distances
/// (trapezoid in time of ||u_a - u_b||_p^p, root taken at the end).
EpsStudyResult epsilon_sweep(const EpsStudySpec& spec, const Scenario& sc, const ModelParams& params,
                             const RunOptions& options);

/// Space-time L^p distance between two synchronized u histories.
double spacetime_distance(const Grid& grid, const std::vector<double>& times, const std::vector<FieldD>& a,
                          const std::vector<FieldD>& b, double p);

// --- blow-up threshold scan ---------------------------------------------------

struct ScanResult {
    double a_minus = 0.0;  ///< largest amplitude known to complete
    double a_plus = 0.0;   ///< smallest amplitude known to blow up
    double lp_minus = 0.0; ///< ||u0||_p at a_minus
    double lp_plus = 0.0;
    int iterations = 0;
    std::vector<std::array<double, 2>> history;  ///< input bracket, then the bracket after each round
};

class ScanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Classifies one amplitude: true when the run reports BlowupDetected, false when it
/// completes. Aborted runs raise ScanError.
bool blows_up_at(const Scenario& sc, double amplitude, const ModelParams& params, const RunOptions& options);

/// Bisection on the u0 amplitude between a completing and a blowing-up run.
ScanResult blowup_scan(const Scenario& sc, const ModelParams& params, const RunOptions& options, double a_lo,
                       double a_hi, int iters, int threads = 1);

}  // namespace chemo

#endif  // CHEMO_SCENARIOS_HPP
