#ifndef CHEMO_CONFIG_HPP
#define CHEMO_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "chemo/dynamics.hpp"
#include "chemo/ode.hpp"
#include "chemo/scenarios.hpp"

namespace chemo {

struct ConfigIssue {
    std::string path;
    std::string message;
};

/// All field-level problems found in a configuration document.
class ConfigErrors : public std::runtime_error {
public:
    explicit ConfigErrors(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

struct ScanBlock {
    double a_lo = 0.1;
    double a_hi = 10.0;
    int iters = 8;
};

struct OdeBlock {
    double rtol = 1e-8;
    ode::GrowthOdeParams<double> growth{1.0, 2.0, 0.5};
    double growth_T = 1.0;
    ode::BlowupOdeParams<double> blowup{2.0, 1.0, 1.0, 2.0, 10.0, 1.0};
    double y_cap = 1e9;
    double horizon = 1e3;
    double pure_w0 = 1.0;
    double pure_k = 1.0;
    double pure_p = 2.0;
};

struct RunConfig {
    GridSpec grid;
    ModelParams model;
    StepConfig step;
    EllipticConfig elliptic;
    InitialCondition u0;
    InitialCondition n0;
    double p = 2.0;
    double comparator_c = 1.0;
    BlowupThresholds blowup;
    std::string output_dir;  ///< empty: $CHEMO_OUTPUT_ROOT or ./out
    bool write_snapshots = true;
    EpsStudySpec eps_study;
    ScanBlock scan;
    OdeBlock ode;

    Scenario scenario() const { return {grid, u0, n0}; }
    RunOptions run_options() const;
};

/// Parses a flat key = value document with dotted keys (a TOML subset: optional
/// [section] headers, numbers, "strings", true/false, [numeric, arrays], # comments).
/// Unknown keys and invalid values are collected and thrown together as ConfigErrors.
/// Relative table paths are resolved against `base_dir`.
RunConfig parse_config(const std::string& text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

}  // namespace chemo

#endif  // CHEMO_CONFIG_HPP
