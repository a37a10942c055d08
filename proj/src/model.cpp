#include "chemo/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace chemo {

std::string_view to_string(KineticsFamily family) {
    switch (family) {
        case KineticsFamily::SaturatingRational: return "saturating-rational";
        case KineticsFamily::SaturatingExponential: return "saturating-exponential";
        case KineticsFamily::CustomTable: return "custom-table";
        case KineticsFamily::Inert: return "inert";
    }
    return "?";
}

KineticsFamily kinetics_family_from_string(std::string_view name) {
    for (auto f : {KineticsFamily::SaturatingRational, KineticsFamily::SaturatingExponential,
                   KineticsFamily::CustomTable, KineticsFamily::Inert}) {
        if (to_string(f) == name) return f;
    }
    throw ConfigError("unknown kinetics family '" + std::string(name) + "'");
}

void KineticsTable::validate() const {
    if (x.size() < 2 || x.size() != y.size())
        throw ConfigError("kinetics table needs at least two (value, rate) rows");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ConfigError("kinetics table has non-finite entry");
        if (i > 0 && !(x[i] > x[i - 1]))
            throw ConfigError("kinetics table first column must be strictly increasing (row " + std::to_string(i) + ")");
    }
}

KineticsTable read_kinetics_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open kinetics table '" + path + "'");
    KineticsTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0.0, b = 0.0;
        if (!(row >> a >> b)) {
            if (table.x.empty()) continue;  // header
            throw ConfigError("malformed row in kinetics table '" + path + "': " + line);
        }
        table.x.push_back(a);
        table.y.push_back(b);
    }
    table.validate();
    return table;
}

void KineticsSpec::validate() const {
    if (family == KineticsFamily::Inert) return;
    if (!(G0 > 0.0)) throw ConfigError("kinetics.G0 must be positive");
    if (!(B0 > 0.0)) throw ConfigError("kinetics.B0 must be positive");
    if (family == KineticsFamily::CustomTable) {
        g_table.validate();
        b_table.validate();
    } else if (!(g_shape > 0.0) || !(b_shape > 0.0)) {
        throw ConfigError("kinetics shape parameters must be positive");
    }
}

void ModelParams::validate() const {
    if (!(alpha > 0.0)) throw ConfigError("model.alpha: α must be positive");
    if (!(beta > 0.0)) throw ConfigError("model.beta: β must be positive");
    if (!(gamma > 0.0)) throw ConfigError("model.gamma: γ must be positive");
    if (!(epsilon >= 0.0)) throw ConfigError("model.epsilon: ε must be nonnegative");
    kinetics.validate();
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const HypothesisCheck* ValidationReport::find(std::string_view name) const {
    auto it = std::find_if(checks.begin(), checks.end(), [&](const auto& c) { return c.name == name; });
    return it == checks.end() ? nullptr : &*it;
}

std::vector<std::string> ValidationReport::failed_names() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed) out.push_back(c.name);
    return out;
}

namespace {

HypothesisCheck named_check(std::string_view name) {
    HypothesisCheck c;
    c.name = std::string(name);
    return c;
}

template <typename F>
std::vector<double> sample(F&& f, double hi, std::size_t samples) {
    std::vector<double> v(samples);
    for (std::size_t i = 0; i < samples; ++i) v[i] = f(hi * double(i) / double(samples - 1));
    return v;
}

double max_slope(const std::vector<double>& v, double hi) {
    const double dx = hi / double(v.size() - 1);
    double m = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) m = std::max(m, std::abs(v[i] - v[i - 1]) / dx);
    return m;
}

HypothesisCheck monotone_check(std::string_view name, const std::vector<double>& v, bool increasing) {
    HypothesisCheck c = named_check(name);
    double worst = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double step = increasing ? v[i] - v[i - 1] : v[i - 1] - v[i];
        if (step < worst) {
            worst = step;
            c.passed = false;
            c.worst_index = long(i);
            c.worst_value = v[i];
        }
    }
    if (!c.passed) c.detail = "consecutive samples reverse by " + std::to_string(-worst);
    return c;
}

HypothesisCheck lipschitz_check(std::string_view name, const std::vector<double>& coarse,
                                const std::vector<double>& fine, double hi) {
    HypothesisCheck c = named_check(name);
    const double sc = max_slope(coarse, hi);
    const double sf = max_slope(fine, hi);
    c.worst_value = sf;
    if (!std::isfinite(sf) || sf > 1.5 * sc + 1e-12) {
        c.passed = false;
        c.detail = "difference quotient grows under refinement: " + std::to_string(sc) + " -> " + std::to_string(sf);
    }
    return c;
}

}  // namespace

ValidationReport validate_kinetics(const KineticsSpec& k, double u_max, double n_max, std::size_t samples) {
    if (!(u_max > 0.0) || !(n_max > 0.0) || samples < 3)
        throw DomainError("validate_kinetics: need u_max, n_max > 0 and at least 3 samples");
    auto g = [&](double u) { return g_eval(u, k); };
    auto b = [&](double n) { return b_eval(n, k); };
    const auto gs = sample(g, u_max, samples);
    const auto bs = sample(b, n_max, samples);

    ValidationReport r;

    HypothesisCheck g0 = named_check(hypothesis::g_zero);
    if (gs[0] != 0.0) {
        g0.passed = false;
        g0.worst_index = 0;
        g0.worst_value = gs[0];
        g0.detail = "g(0) = " + std::to_string(gs[0]);
    }
    r.checks.push_back(g0);
    r.checks.push_back(monotone_check(hypothesis::g_increasing, gs, true));

    HypothesisCheck gb = named_check(hypothesis::g_bounded);
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (gs[i] > k.G0 || gs[i] < 0.0) {
            if (gb.passed || std::abs(gs[i]) > std::abs(gb.worst_value)) {
                gb.worst_index = long(i);
                gb.worst_value = gs[i];
            }
            gb.passed = false;
        }
    }
    if (!gb.passed) gb.detail = "g leaves [0, G0]";
    r.checks.push_back(gb);
    r.checks.push_back(lipschitz_check(hypothesis::g_lipschitz, gs, sample(g, u_max, 4 * (samples - 1) + 1), u_max));

    HypothesisCheck b0 = named_check(hypothesis::b_zero);
    if (bs[0] != k.B0) {
        b0.passed = false;
        b0.worst_index = 0;
        b0.worst_value = bs[0];
        b0.detail = "b(0) = " + std::to_string(bs[0]) + ", B0 = " + std::to_string(k.B0);
    }
    r.checks.push_back(b0);

    HypothesisCheck bp = named_check(hypothesis::b_positive);
    for (std::size_t i = 0; i < bs.size(); ++i) {
        if (!(bs[i] > 0.0) && (bp.passed || bs[i] < bp.worst_value)) {
            bp.passed = false;
            bp.worst_index = long(i);
            bp.worst_value = bs[i];
        }
    }
    if (!bp.passed) bp.detail = "b not strictly positive";
    r.checks.push_back(bp);
    r.checks.push_back(monotone_check(hypothesis::b_decreasing, bs, false));
    r.checks.push_back(lipschitz_check(hypothesis::b_lipschitz, bs, sample(b, n_max, 4 * (samples - 1) + 1), n_max));
    return r;
}

}  // namespace chemo
