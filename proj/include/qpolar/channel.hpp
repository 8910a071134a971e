#pragma once

#include <vector>

namespace qpolar {

// Single-qubit Pauli channel (probabilities of I, X, Y, Z).
struct PauliChannel {
    double pi = 1, px = 0, py = 0, pz = 0;
};

// Binary symmetric channel with crossover probability q.
struct BscChannel {
    double q = 0;
};

// Weighted mixture of BSCs; the decoder knows which component acted.
struct BscComponent {
    double weight;
    double q;
};
struct BscMixture {
    std::vector<BscComponent> comps;
};

PauliChannel depolarizing(double p);

// Channel seen by the Z-basis (bit-flip) decoding side: crossover p_X + p_Y.
BscChannel induced_z_channel(const PauliChannel& c);

// Channel seen by the X-basis (phase-flip) side: crossover p_Z + p_Y.
BscChannel induced_x_channel(const PauliChannel& c);

// X-side channel when the decoder uses the already-corrected X-error value:
// component (p_I + p_Z) with crossover p_Z/(p_I+p_Z), and component
// (p_X + p_Y) with crossover p_Y/(p_X+p_Y).  Zero-weight components collapse.
BscMixture extended_x_channel(const PauliChannel& c);

BscMixture as_mixture(const BscChannel& c);

}
