#pragma once

#include <random>

#include "chemo/grid.hpp"

namespace testing {

inline chemo::Grid line(int n, double len = 1.0) {
    chemo::GridSpec s;
    s.dim = 1;
    s.lengths = {len, 1.0};
    s.cells = {n, 1};
    return chemo::Grid(s);
}

inline chemo::Grid square(int nx, int ny, double lx = 1.0, double ly = 1.0) {
    chemo::GridSpec s;
    s.dim = 2;
    s.lengths = {lx, ly};
    s.cells = {nx, ny};
    return chemo::Grid(s);
}

template <typename F>
chemo::FieldD sample(const chemo::Grid& g, F&& f) {
    chemo::FieldD out(g.size());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            out[g.index(i, j)] = f(g.center(0, i), g.dim() == 2 ? g.center(1, j) : 0.0);
    return out;
}

inline chemo::FieldD random_field(const chemo::Grid& g, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    chemo::FieldD out(g.size());
    for (auto& v : out) v = d(rng);
    return out;
}

}  // namespace testing
