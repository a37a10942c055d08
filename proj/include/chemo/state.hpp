#ifndef CHEMO_STATE_HPP
#define CHEMO_STATE_HPP

#include "chemo/grid.hpp"

namespace chemo {

/// Active bacteria u, chemoattractant c, nutrient n and inactive bacteria w at time t.
struct State {
    double t = 0.0;
    FieldD u;
    FieldD c;
    FieldD n;
    FieldD w;

    bool all_finite() const { return u.allFinite() && c.allFinite() && n.allFinite() && w.allFinite(); }
};

}  // namespace chemo

#endif  // CHEMO_STATE_HPP
