#include "chemo/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chemo::io {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(std::string_view s) {
    const std::string str(s);
    if (str == "nan") return std::nan("");
    if (str == "inf") return INFINITY;
    if (str == "-inf") return -INFINITY;
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (end == str.c_str() || *end != '\0') throw IoError("not a number: '" + str + "'");
    return v;
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::ifstream open_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return in;
}

}  // namespace

std::string timeseries_csv(const Trajectory& traj) {
    std::string out(timeseries_header);
    out += '\n';
    for (const auto& r : traj.records) {
        const double cols[] = {r.t,      r.dt,     r.mass_u, r.mass_n, r.mass_total,        r.min_u,
                               r.max_u,  r.lp_u,   r.w1p_u,  r.linf_u, r.min_n,             r.max_n,
                               r.max_c,  r.mass_law_residual,          r.zzz_residual,      r.ode_bound};
        bool first = true;
        for (double v : cols) {
            if (!first) out += ',';
            out += format_number(v);
            first = false;
        }
        out += '\n';
    }
    return out;
}

void write_timeseries(const Trajectory& traj, const std::string& path) { write_text(path, timeseries_csv(traj)); }

std::vector<DiagRecord> read_timeseries(const std::string& path) {
    auto in = open_read(path);
    std::string line;
    if (!std::getline(in, line) || line != timeseries_header) throw IoError("'" + path + "' lacks the timeseries header");
    std::vector<DiagRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 16) throw IoError("'" + path + "': expected 16 columns, got " + std::to_string(f.size()));
        DiagRecord r;
        double* dst[] = {&r.t,     &r.dt,    &r.mass_u, &r.mass_n, &r.mass_total,        &r.min_u,
                         &r.max_u, &r.lp_u,  &r.w1p_u,  &r.linf_u, &r.min_n,             &r.max_n,
                         &r.max_c, &r.mass_law_residual,           &r.zzz_residual,      &r.ode_bound};
        for (std::size_t i = 0; i < 16; ++i) *dst[i] = parse_number(f[i]);
        out.push_back(r);
    }
    return out;
}

void write_snapshot(const Grid& grid, const State& s, const std::string& path) {
    const bool two_d = grid.dim() == 2;
    std::string out = "# t=" + format_number(s.t) + " nx=" + std::to_string(grid.nx());
    if (two_d) out += " ny=" + std::to_string(grid.ny());
    out += " hx=" + format_number(grid.h(0));
    if (two_d) out += " hy=" + format_number(grid.h(1));
    out += two_d ? "\nx,y,u,c,n,w\n" : "\nx,u,c,n,w\n";
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            const auto k = grid.index(i, j);
            out += format_number(grid.center(0, i));
            if (two_d) out += ',' + format_number(grid.center(1, j));
            for (const FieldD* f : {&s.u, &s.c, &s.n, &s.w}) out += ',' + format_number((*f)[k]);
            out += '\n';
        }
    write_text(path, out);
}

Snapshot read_snapshot(const std::string& path) {
    auto in = open_read(path);
    Snapshot snap;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw IoError("'" + path + "' lacks the snapshot header");
    std::istringstream meta(line.substr(2));
    std::string tok;
    while (meta >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const double v = parse_number(std::string_view(tok).substr(eq + 1));
        if (key == "t") snap.t = v;
        else if (key == "nx") snap.nx = int(v);
        else if (key == "ny") snap.ny = int(v);
        else if (key == "hx") snap.hx = v;
        else if (key == "hy") snap.hy = v;
    }
    if (!std::getline(in, line)) throw IoError("'" + path + "' lacks the column header");
    const bool two_d = line.rfind("x,y,", 0) == 0;
    const Eigen::Index cells = Eigen::Index(snap.nx) * snap.ny;
    snap.state.t = snap.t;
    for (FieldD* f : {&snap.state.u, &snap.state.c, &snap.state.n, &snap.state.w}) f->resize(cells);
    Eigen::Index k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (k >= cells) throw IoError("'" + path + "' has more rows than cells");
        const auto f = split(line, ',');
        const std::size_t off = two_d ? 2 : 1;
        if (f.size() != off + 4) throw IoError("'" + path + "': malformed snapshot row");
        snap.x.push_back(parse_number(f[0]));
        if (two_d) snap.y.push_back(parse_number(f[1]));
        snap.state.u[k] = parse_number(f[off]);
        snap.state.c[k] = parse_number(f[off + 1]);
        snap.state.n[k] = parse_number(f[off + 2]);
        snap.state.w[k] = parse_number(f[off + 3]);
        ++k;
    }
    if (k != cells) throw IoError("'" + path + "' has fewer rows than cells");
    return snap;
}

}  // namespace chemo::io
