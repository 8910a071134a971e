#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qpolar/bitvec.hpp"

namespace qpolar {

// Dense statevector over at most 9 qubits (8 data qubits plus one ancilla for
// gadget-level tests).  Qubit 0 is the most significant amplitude-index bit.
// Test oracle only, never a production simulator.
class StateVector {
public:
    int nq = 0;
    std::vector<std::complex<double>> amp;

    static StateVector zero_state(int nq);

    void apply_x(int q);
    void apply_z(int q);
    void apply_h(int q);
    void apply_cnot(int control, int target);

    // Projective measurement of Z_q or X_q; returns the outcome bit
    // (0 for +1 eigenvalue) and collapses the state.
    int measure_pauli(char type, int q, std::mt19937_64& rng);

    // Projective measurement of Z_q1 Z_q2 or X_q1 X_q2.
    int measure_pauli_pair(char type, int q1, int q2, std::mt19937_64& rng);

    // <psi| P |psi> for the tensor Pauli of the given type over `support`.
    double expectation_pauli(const BitVec& support, char type) const;

    // |<a|b>| (global phase ignored).
    static double fidelity(const StateVector& a, const StateVector& b);
};

// Encoded basis state: qubit j is initialized in basis[j] (0 = Z, 1 = X) with
// value vals[j], then the transform circuit (CNOT butterflies) is applied.
StateVector apply_polar_encoding(int n, const std::vector<int>& basis,
                                 const BitVec& vals);

// Measurement-based preparation from all-|0>: level k measures pairs
// (off+j, off+j+2^{k-1}) with Z x Z if b_seq[k-1] else X x X; outcomes are
// recorded in level/block/pair order.
StateVector simulate_measurement_prep(int n, const std::vector<int>& b_seq,
                                      std::mt19937_64& rng,
                                      std::vector<uint8_t>* outcomes);

}
