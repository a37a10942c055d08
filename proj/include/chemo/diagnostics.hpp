#ifndef CHEMO_DIAGNOSTICS_HPP
#define CHEMO_DIAGNOSTICS_HPP

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemo/grid.hpp"
#include "chemo/model.hpp"
#include "chemo/state.hpp"

namespace chemo {

inline constexpr double not_applicable = std::numeric_limits<double>::quiet_NaN();

struct DiagRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass_u = 0.0;
    double mass_n = 0.0;
    double mass_total = 0.0;  ///< mass_u + mass_n / gamma
    double min_u = 0.0;
    double max_u = 0.0;
    double lp_u = 0.0;
    double w1p_u = 0.0;
    double linf_u = 0.0;
    double min_n = 0.0;
    double max_n = 0.0;
    double min_c = 0.0;
    double max_c = 0.0;
    double mass_law_residual = not_applicable;
    double zzz_residual = not_applicable;
    double ode_bound = not_applicable;
};

struct Trajectory {
    std::vector<DiagRecord> records;
    std::vector<State> snapshots;
};

enum class VerdictKind { Completed, BlowupDetected, Aborted };
enum class BlowupTrigger { None, NormThreshold, DtCollapse };

std::string_view to_string(VerdictKind k);
std::string_view to_string(BlowupTrigger k);

struct BlowupVerdict {
    VerdictKind kind = VerdictKind::Completed;
    double t_detect = not_applicable;
    BlowupTrigger trigger = BlowupTrigger::None;
    double peak_linf = 0.0;
    std::string reason;  ///< set for Aborted
};

struct BlowupThresholds {
    double factor = 1e4;  ///< linf_u > factor * linf_u(0) counts as blow-up
};

/// Norms and masses of a state; residual fields are left not-applicable.
DiagRecord record(const Grid& grid, const State& s, double dt, const ModelParams& params, double p);

/// Discrete mass-law defect |(M_cur - M_prev)/(t_cur - t_prev) + int b(n_prev) u_prev| / M0,
/// with M = int(u + n/gamma). M0 <= 0 leaves the value unnormalised.
double mass_law_residual(const Grid& grid, const State& prev, const State& cur, const ModelParams& params, double M0);

/// Defect of the L^p balance: discrete d/dt of (1/p) int u^p against
/// a (p-1)/p int u^{p+1} - beta (p-1)/p int c u^p + int (g(u) n - b(n)) u^p
/// (minus eps 4(p-1)/p^2 int |grad u^{p/2}|^2 when eps > 0), right side evaluated at prev.
double zzz_residual(const Grid& grid, const State& prev, const State& cur, const ModelParams& params, double p);

double total_mass(const Grid& grid, const State& s, const ModelParams& params);

/// Norm-threshold / dt-collapse rule. Returns a BlowupDetected verdict or nothing.
std::optional<BlowupVerdict> detect_blowup(double linf0, double linf_now, double t, bool dt_collapsed,
                                           const BlowupThresholds& thresholds);
std::optional<BlowupVerdict> detect_blowup(const Trajectory& traj, bool dt_collapsed,
                                           const BlowupThresholds& thresholds);

}  // namespace chemo

#endif  // CHEMO_DIAGNOSTICS_HPP
