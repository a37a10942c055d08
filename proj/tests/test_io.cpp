#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chemo/dynamics.hpp"
#include "chemo/io.hpp"
#include "support.hpp"

using namespace chemo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / "chemo_io_test" / name; }

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("timeseries") {
    Trajectory empty;
    io::write_timeseries(empty, scratch("empty.csv").string());
    const auto l0 = lines_of(scratch("empty.csv"));
    REQUIRE(l0.size() == 1);
    CHECK(l0[0] == io::timeseries_header);

    Trajectory one;
    one.records.push_back({});
    io::write_timeseries(one, scratch("one.csv").string());
    CHECK(lines_of(scratch("one.csv")).size() == 2);

    const Grid g = testing::line(32);
    std::mt19937_64 rng(6);
    RunOptions o;
    o.step.t_end = 0.2;
    const auto r = run(g, testing::random_field(g, rng), testing::random_field(g, rng), ModelParams{}, o);
    io::write_timeseries(r.trajectory, scratch("run.csv").string());
    const auto back = io::read_timeseries(scratch("run.csv").string());
    REQUIRE(back.size() == r.trajectory.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        const auto& a = back[i];
        const auto& b = r.trajectory.records[i];
        CHECK(a.t == b.t);
        CHECK(a.lp_u == b.lp_u);
        CHECK(a.w1p_u == b.w1p_u);
        CHECK(a.mass_total == b.mass_total);
        CHECK((a.zzz_residual == b.zzz_residual || (std::isnan(a.zzz_residual) && std::isnan(b.zzz_residual))));
    }
    CHECK(io::timeseries_csv(r.trajectory) == io::timeseries_csv(r.trajectory));
}

TEST_CASE("number formatting") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0})
        CHECK(io::parse_number(io::format_number(v)) == v);
    CHECK(std::isnan(io::parse_number(io::format_number(std::nan("")))));
    CHECK(std::isinf(io::parse_number(io::format_number(infinity))));
    CHECK_THROWS_AS(io::parse_number("1.0x"), io::IoError);
}

TEST_CASE("snapshots") {
    const Grid g = testing::line(4);
    State s;
    s.u = s.c = s.n = s.w = FieldD::Zero(4);
    io::write_snapshot(g, s, scratch("zero.csv").string());
    const auto l = lines_of(scratch("zero.csv"));
    REQUIRE(l.size() == 6);  // comment, header, 4 rows
    CHECK(l[1] == "x,u,c,n,w");
    CHECK(l[2] == "0.125,0,0,0,0");
    CHECK(l[5] == "0.875,0,0,0,0");

    const Grid g2 = testing::square(4, 8);
    std::mt19937_64 rng(2);
    State s2;
    s2.t = 0.25;
    s2.u = testing::random_field(g2, rng);
    s2.c = testing::random_field(g2, rng);
    s2.n = testing::random_field(g2, rng);
    s2.w = testing::random_field(g2, rng);
    io::write_snapshot(g2, s2, scratch("sq.csv").string());
    const auto rows = lines_of(scratch("sq.csv"));
    CHECK(rows.size() == 34);
    // x fastest: the second data row moves in x, the fifth starts the next y row
    CHECK(rows[3].rfind("0.375,0.0625,", 0) == 0);
    CHECK(rows[6].rfind("0.125,0.1875,", 0) == 0);

    const auto snap = io::read_snapshot(scratch("sq.csv").string());
    CHECK(snap.nx == 4);
    CHECK(snap.ny == 8);
    CHECK(snap.state.t == 0.25);
    CHECK(snap.state.u == s2.u);
    CHECK(snap.state.w == s2.w);
    CHECK_THROWS_AS(io::read_snapshot(scratch("missing.csv").string()), io::IoError);
}
