#ifndef CHEMO_IO_HPP
#define CHEMO_IO_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemo/diagnostics.hpp"
#include "chemo/grid.hpp"
#include "chemo/state.hpp"

namespace chemo::io {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view timeseries_header =
    "t,dt,mass_u,mass_n,mass_total,min_u,max_u,lp_u,w1p_u,linf_u,min_n,max_n,max_c,mass_law_residual,zzz_residual,"
    "ode_bound";

/// 17 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);
double parse_number(std::string_view s);

std::string timeseries_csv(const Trajectory& traj);
void write_timeseries(const Trajectory& traj, const std::string& path);
/// Reads back the columns written by write_timeseries (min_c is not stored and reads as 0).
std::vector<DiagRecord> read_timeseries(const std::string& path);

/// Columns x[,y],u,c,n,w, one row per cell with x fastest and y slowest, after a
/// "# t=<t> nx=<nx> [ny=<ny>] hx=<hx> [hy=<hy>]" line.
void write_snapshot(const Grid& grid, const State& s, const std::string& path);

struct Snapshot {
    double t = 0.0;
    int nx = 0;
    int ny = 1;
    double hx = 0.0;
    double hy = 0.0;
    std::vector<double> x;
    std::vector<double> y;
    State state;
};
Snapshot read_snapshot(const std::string& path);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);

}  // namespace chemo::io

#endif  // CHEMO_IO_HPP
