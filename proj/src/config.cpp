#include "chemo/config.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace chemo {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::string s = "invalid configuration:";
    for (const auto& i : issues) s += "\n  " + i.path + ": " + i.message;
    return s;
}

using Value = std::variant<double, std::string, bool, std::vector<double>>;

struct Entry {
    Value value;
    int line = 0;
};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::string t;
    for (char c : s)
        if (c != '_') t += c;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end != t.c_str() && *end == '\0';
}

std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

std::map<std::string, Entry> tokenize(const std::string& text, std::vector<ConfigIssue>& issues) {
    std::map<std::string, Entry> out;
    std::istringstream in(text);
    std::string raw, section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back({where, "unterminated section header"});
                continue;
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({where, "expected key = value"});
            continue;
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string val = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            issues.push_back({where, "empty key"});
            continue;
        }
        if (!section.empty()) key = section + "." + key;
        Value v;
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') {
            v = val.substr(1, val.size() - 2);
        } else if (val == "true" || val == "false") {
            v = (val == "true");
        } else if (!val.empty() && val.front() == '[') {
            if (val.back() != ']') {
                issues.push_back({key, "unterminated array"});
                continue;
            }
            std::vector<double> arr;
            std::stringstream items(val.substr(1, val.size() - 2));
            std::string item;
            bool ok = true;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                double d = 0.0;
                if (!parse_double(item, d)) ok = false;
                arr.push_back(d);
            }
            if (!ok) {
                issues.push_back({key, "arrays may only hold numbers"});
                continue;
            }
            v = std::move(arr);
        } else {
            double d = 0.0;
            if (!parse_double(val, d)) {
                issues.push_back({key, "cannot parse value '" + val + "' (strings need double quotes)"});
                continue;
            }
            v = d;
        }
        if (out.count(key)) {
            issues.push_back({key, "duplicate key (" + where + ")"});
            continue;
        }
        out.emplace(key, Entry{std::move(v), lineno});
    }
    return out;
}

/// Pulls typed values out of the token map; whatever is left afterwards is unknown.
class Binder {
public:
    Binder(std::map<std::string, Entry> entries, std::vector<ConfigIssue>& issues)
        : entries_(std::move(entries)), issues_(issues) {}

    void number(const std::string& key, double& dst) {
        if (auto* e = take(key)) {
            if (auto* d = std::get_if<double>(&e->value)) dst = *d;
            else issue(key, "expected a number");
        }
    }
    void integer(const std::string& key, int& dst) {
        double d = dst;
        if (!has(key)) return;
        number(key, d);
        if (d != std::floor(d) || std::abs(d) > 1e9) issue(key, "expected an integer");
        else dst = int(d);
    }
    void string(const std::string& key, std::string& dst) {
        if (auto* e = take(key)) {
            if (auto* s = std::get_if<std::string>(&e->value)) dst = *s;
            else issue(key, "expected a quoted string");
        }
    }
    void boolean(const std::string& key, bool& dst) {
        if (auto* e = take(key)) {
            if (auto* b = std::get_if<bool>(&e->value)) dst = *b;
            else issue(key, "expected true or false");
        }
    }
    /// Number or numeric array.
    void numbers(const std::string& key, std::vector<double>& dst) {
        if (auto* e = take(key)) {
            if (auto* d = std::get_if<double>(&e->value)) dst = {*d};
            else if (auto* a = std::get_if<std::vector<double>>(&e->value)) dst = *a;
            else issue(key, "expected a number or numeric array");
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0 && !taken_.count(key); }

    void check(const std::string& key, bool ok, const std::string& message) {
        if (!ok) issue(key, message);
    }
    void issue(const std::string& key, const std::string& message) { issues_.push_back({key, message}); }

    void reject_unknown() {
        for (const auto& [k, e] : entries_)
            if (!taken_.count(k)) issues_.push_back({k, "unknown key (line " + std::to_string(e.line) + ")"});
    }

private:
    Entry* take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        taken_[key] = true;
        return &it->second;
    }

    std::map<std::string, Entry> entries_;
    std::map<std::string, bool> taken_;
    std::vector<ConfigIssue>& issues_;
};

void bind_initial(Binder& b, const std::string& prefix, InitialCondition& ic) {
    std::string kind(to_string(ic.kind));
    b.string(prefix + ".kind", kind);
    try {
        ic.kind = initial_kind_from_string(kind);
    } catch (const ConfigError& e) {
        b.issue(prefix + ".kind", e.what());
    }
    b.number(prefix + ".amplitude", ic.amplitude);
    std::vector<double> center(ic.center.begin(), ic.center.end());
    b.numbers(prefix + ".center", center);
    for (std::size_t i = 0; i < std::min<std::size_t>(2, center.size()); ++i) ic.center[i] = center[i];
    b.number(prefix + ".width", ic.width);
    b.number(prefix + ".background", ic.background);
    b.integer(prefix + ".mode", ic.mode);
    b.numbers(prefix + ".table", ic.table);
    b.check(prefix + ".width", ic.width > 0.0, "width must be positive");
    b.check(prefix + ".amplitude", std::isfinite(ic.amplitude), "amplitude must be finite");
    b.check(prefix + ".background", ic.background >= 0.0, "background must be nonnegative");
    b.check(prefix + ".mode", ic.mode >= 0, "mode must be nonnegative");
    if (ic.kind == InitialKind::Table) b.check(prefix + ".table", !ic.table.empty(), "table kind needs values");
}

std::string resolve(const std::string& base, const std::string& path) {
    if (base.empty() || path.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(base) / path).string();
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

RunOptions RunConfig::run_options() const {
    RunOptions o;
    o.step = step;
    o.elliptic = elliptic;
    o.p = p;
    o.blowup = blowup;
    o.comparator_c = comparator_c;
    return o;
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    std::vector<ConfigIssue> issues;
    Binder b(tokenize(text, issues), issues);
    RunConfig cfg;
    cfg.u0.kind = InitialKind::Gaussian;
    cfg.u0.amplitude = 1.0;
    cfg.u0.width = 0.1;
    cfg.n0.kind = InitialKind::Constant;
    cfg.n0.amplitude = 1.0;

    // grid
    b.integer("grid.dim", cfg.grid.dim);
    b.check("grid.dim", cfg.grid.dim == 1 || cfg.grid.dim == 2, "dim must be 1 or 2");
    std::vector<double> lengths{1.0}, cells{64};
    b.numbers("grid.length", lengths);
    b.numbers("grid.cells", cells);
    const int dim = (cfg.grid.dim == 2) ? 2 : 1;
    for (int a = 0; a < dim; ++a) {
        cfg.grid.lengths[a] = lengths[std::min<std::size_t>(a, lengths.size() - 1)];
        const double c = cells[std::min<std::size_t>(a, cells.size() - 1)];
        cfg.grid.cells[a] = int(c);
        b.check("grid.length", cfg.grid.lengths[a] > 0.0, "lengths must be positive");
        b.check("grid.cells", c == std::floor(c) && c >= Grid::min_cells, "cell counts must be integers >= 4");
    }

    // model
    auto& m = cfg.model;
    b.number("model.alpha", m.alpha);
    b.number("model.beta", m.beta);
    b.number("model.gamma", m.gamma);
    b.number("model.epsilon", m.epsilon);
    b.check("model.alpha", m.alpha > 0.0, "α must be positive");
    b.check("model.beta", m.beta > 0.0, "β must be positive");
    b.check("model.gamma", m.gamma > 0.0, "γ must be positive");
    b.check("model.epsilon", m.epsilon >= 0.0, "ε must be nonnegative");

    // kinetics
    auto& k = m.kinetics;
    std::string family(to_string(k.family));
    b.string("kinetics.family", family);
    try {
        k.family = kinetics_family_from_string(family);
    } catch (const ConfigError& e) {
        b.issue("kinetics.family", e.what());
    }
    b.number("kinetics.G0", k.G0);
    b.number("kinetics.B0", k.B0);
    b.number("kinetics.g_shape", k.g_shape);
    b.number("kinetics.b_shape", k.b_shape);
    std::string g_table, b_table;
    b.string("kinetics.g_table", g_table);
    b.string("kinetics.b_table", b_table);
    if (k.family != KineticsFamily::Inert) {
        b.check("kinetics.G0", k.G0 > 0.0, "G0 must be positive");
        b.check("kinetics.B0", k.B0 > 0.0, "B0 must be positive");
        b.check("kinetics.g_shape", k.g_shape > 0.0, "shape parameters must be positive");
        b.check("kinetics.b_shape", k.b_shape > 0.0, "shape parameters must be positive");
    }
    if (k.family == KineticsFamily::CustomTable) {
        auto load = [&](const std::string& key, const std::string& path, KineticsTable& dst) {
            if (path.empty()) return b.issue(key, "custom-table kinetics needs a table path");
            try {
                dst = read_kinetics_table(resolve(base_dir, path));
            } catch (const ConfigError& e) {
                b.issue(key, e.what());
            }
        };
        load("kinetics.g_table", g_table, k.g_table);
        load("kinetics.b_table", b_table, k.b_table);
    }

    // step
    auto& s = cfg.step;
    b.number("step.cfl", s.cfl);
    b.number("step.dt_max", s.dt_max);
    b.number("step.dt_min", s.dt_min);
    b.number("step.t_end", s.t_end);
    b.number("step.diffusion_theta", s.diffusion_theta);
    b.integer("step.snapshot_every", s.snapshot_every);
    b.check("step.cfl", s.cfl > 0.0 && s.cfl < 1.0, "cfl must lie in (0, 1)");
    b.check("step.dt_max", s.dt_max > 0.0, "dt_max must be positive");
    b.check("step.dt_min", s.dt_min >= 0.0 && (s.t_end == 0.0 || s.effective_dt_min() < s.dt_max),
            "dt_min must be nonnegative and below dt_max");
    b.check("step.t_end", s.t_end >= 0.0, "t_end must be nonnegative");
    b.check("step.diffusion_theta", s.diffusion_theta >= 0.5 && s.diffusion_theta <= 1.0, "theta must lie in [0.5, 1]");
    b.check("step.snapshot_every", s.snapshot_every >= 1, "snapshot_every must be >= 1");

    // elliptic
    std::string method(to_string(cfg.elliptic.method));
    b.string("elliptic.method", method);
    try {
        cfg.elliptic.method = elliptic_method_from_string(method);
    } catch (const ConfigError& e) {
        b.issue("elliptic.method", e.what());
    }
    b.number("elliptic.tol", cfg.elliptic.tol);
    b.integer("elliptic.max_iter", cfg.elliptic.max_iter);
    b.check("elliptic.tol", cfg.elliptic.tol > 0.0 && cfg.elliptic.tol <= 1e-4, "tol must lie in (0, 1e-4]");
    b.check("elliptic.max_iter", cfg.elliptic.max_iter >= 1, "max_iter must be >= 1");

    bind_initial(b, "initial.u", cfg.u0);
    bind_initial(b, "initial.n", cfg.n0);

    b.number("diagnostics.p", cfg.p);
    b.check("diagnostics.p", cfg.p > 1.0 && std::isfinite(cfg.p), "p must exceed 1");
    b.number("diagnostics.comparator_c", cfg.comparator_c);
    b.number("blowup.factor", cfg.blowup.factor);
    b.check("blowup.factor", cfg.blowup.factor > 1.0, "factor must exceed 1");

    b.string("output.dir", cfg.output_dir);
    b.boolean("output.snapshots", cfg.write_snapshots);

    auto& e = cfg.eps_study;
    b.number("eps_study.eps0", e.eps0);
    b.integer("eps_study.levels", e.levels);
    b.number("eps_study.p", e.p);
    b.number("eps_study.horizon", e.horizon);
    b.numbers("eps_study.values", e.eps_values);
    b.check("eps_study.eps0", e.eps0 > 0.0, "eps0 must be positive");
    b.check("eps_study.levels", e.levels >= 2, "levels must be >= 2");
    b.check("eps_study.p", e.p >= 1.0, "p must be >= 1");
    b.check("eps_study.horizon", e.horizon > 0.0, "horizon must be positive");

    b.number("blowup_scan.a_lo", cfg.scan.a_lo);
    b.number("blowup_scan.a_hi", cfg.scan.a_hi);
    b.integer("blowup_scan.iters", cfg.scan.iters);
    b.check("blowup_scan.a_hi", cfg.scan.a_hi > cfg.scan.a_lo && cfg.scan.a_lo >= 0.0, "need 0 <= a_lo < a_hi");
    b.check("blowup_scan.iters", cfg.scan.iters >= 0, "iters must be >= 0");

    auto& o = cfg.ode;
    b.number("ode.rtol", o.rtol);
    b.check("ode.rtol", o.rtol > 0.0 && o.rtol <= 1e-3, "rtol must lie in (0, 1e-3]");
    b.number("ode.growth.C", o.growth.C);
    b.number("ode.growth.p", o.growth.p);
    b.number("ode.growth.w0", o.growth.w0);
    b.number("ode.growth.T", o.growth_T);
    b.number("ode.blowup.alpha1", o.blowup.alpha1);
    b.number("ode.blowup.alpha2", o.blowup.alpha2);
    b.number("ode.blowup.alpha3", o.blowup.alpha3);
    b.number("ode.blowup.p", o.blowup.p);
    b.number("ode.blowup.y0", o.blowup.y0);
    b.number("ode.blowup.beta0", o.blowup.beta0);
    b.number("ode.blowup.y_cap", o.y_cap);
    b.number("ode.blowup.horizon", o.horizon);
    b.number("ode.pure_power.w0", o.pure_w0);
    b.number("ode.pure_power.k", o.pure_k);
    b.number("ode.pure_power.p", o.pure_p);

    b.reject_unknown();
    if (!issues.empty()) throw ConfigErrors(std::move(issues));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigErrors({{path, "cannot open configuration file"}});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace chemo
