#include "qpolar/channel.hpp"

#include "qpolar/errors.hpp"

namespace qpolar {

PauliChannel depolarizing(double p) {
    if (p < 0 || p > 1) throw UsageError("depolarizing: p out of [0,1]");
    return PauliChannel{1 - p, p / 3, p / 3, p / 3};
}

BscChannel induced_z_channel(const PauliChannel& c) {
    return BscChannel{c.px + c.py};
}

BscChannel induced_x_channel(const PauliChannel& c) {
    return BscChannel{c.pz + c.py};
}

BscMixture extended_x_channel(const PauliChannel& c) {
    BscMixture m;
    double w0 = c.pi + c.pz;
    double w1 = c.px + c.py;
    if (w0 > 0) m.comps.push_back({w0, c.pz / w0});
    if (w1 > 0) m.comps.push_back({w1, c.py / w1});
    return m;
}

BscMixture as_mixture(const BscChannel& c) {
    return BscMixture{{{1.0, c.q}}};
}

}
