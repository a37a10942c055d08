#include "chemo/elliptic.hpp"

#include <algorithm>

namespace chemo {

std::string_view to_string(EllipticMethod m) {
    return m == EllipticMethod::Transform ? "transform" : "conjugate-gradient";
}

EllipticMethod elliptic_method_from_string(std::string_view name) {
    if (name == "transform") return EllipticMethod::Transform;
    if (name == "conjugate-gradient" || name == "cg") return EllipticMethod::ConjugateGradient;
    throw ConfigError("unknown elliptic method '" + std::string(name) + "'");
}

EllipticConstantsReport measure_elliptic_constants(const Grid& grid, const std::vector<FieldD>& samples,
                                                   const ModelParams& params, const EllipticConfig& cfg, double p) {
    if (samples.empty()) throw DomainError("measure_elliptic_constants: empty sample list");
    HelmholtzSolver<double> solver(grid, params, cfg);
    EllipticConstantsReport r;
    for (const auto& u : samples) {
        if (u.size() != grid.size()) throw ConfigError("elliptic sample does not match grid");
        const double up = lp_norm(grid, u, p);
        const double ui = lp_norm(grid, u, infinity);
        if (up == 0.0 || ui == 0.0) continue;
        const FieldD c = solver.solve(u);
        r.ratio_p.push_back(w1p_norm(grid, c, p) / up);
        r.ratio_inf.push_back(lp_norm(grid, c, infinity) / ui);
        r.k_p = std::max(r.k_p, r.ratio_p.back());
        r.k_inf = std::max(r.k_inf, r.ratio_inf.back());
    }
    return r;
}

}  // namespace chemo
