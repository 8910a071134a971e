#include "qpolar/statevector.hpp"

#include <cassert>
#include <cmath>

#include "qpolar/errors.hpp"
#include "qpolar/rng.hpp"

namespace qpolar {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

StateVector StateVector::zero_state(int nq) {
    if (nq < 1 || nq > 9) throw UsageError("StateVector: qubit count out of [1,9]");
    StateVector s;
    s.nq = nq;
    s.amp.assign((size_t)1 << nq, 0.0);
    s.amp[0] = 1.0;
    return s;
}

// Amplitude-index bit of qubit q (qubit 0 is the most significant bit).
static inline size_t qmask(const StateVector& s, int q) {
    return (size_t)1 << (s.nq - 1 - q);
}

void StateVector::apply_x(int q) {
    size_t m = qmask(*this, q);
    for (size_t s = 0; s < amp.size(); s++)
        if (!(s & m)) std::swap(amp[s], amp[s | m]);
}

void StateVector::apply_z(int q) {
    size_t m = qmask(*this, q);
    for (size_t s = 0; s < amp.size(); s++)
        if (s & m) amp[s] = -amp[s];
}

void StateVector::apply_h(int q) {
    size_t m = qmask(*this, q);
    for (size_t s = 0; s < amp.size(); s++) {
        if (s & m) continue;
        auto a = amp[s], b = amp[s | m];
        amp[s] = (a + b) * kInvSqrt2;
        amp[s | m] = (a - b) * kInvSqrt2;
    }
}

void StateVector::apply_cnot(int control, int target) {
    size_t mc = qmask(*this, control), mt = qmask(*this, target);
    for (size_t s = 0; s < amp.size(); s++)
        if ((s & mc) && !(s & mt)) std::swap(amp[s], amp[s | mt]);
}

int StateVector::measure_pauli(char type, int q, std::mt19937_64& rng) {
    if (type == 'X') {
        apply_h(q);
        int r = measure_pauli('Z', q, rng);
        apply_h(q);
        return r;
    }
    size_t m = qmask(*this, q);
    double p0 = 0;
    for (size_t s = 0; s < amp.size(); s++)
        if (!(s & m)) p0 += std::norm(amp[s]);
    int outcome = (uniform01(rng) < p0) ? 0 : 1;
    double norm = std::sqrt(outcome ? 1 - p0 : p0);
    for (size_t s = 0; s < amp.size(); s++) {
        bool keep = ((s & m) != 0) == (outcome == 1);
        amp[s] = keep ? amp[s] / norm : 0.0;
    }
    return outcome;
}

int StateVector::measure_pauli_pair(char type, int q1, int q2, std::mt19937_64& rng) {
    if (type == 'X') {
        apply_h(q1);
        apply_h(q2);
        int r = measure_pauli_pair('Z', q1, q2, rng);
        apply_h(q1);
        apply_h(q2);
        return r;
    }
    size_t m1 = qmask(*this, q1), m2 = qmask(*this, q2);
    double p0 = 0;
    for (size_t s = 0; s < amp.size(); s++)
        if (((s & m1) != 0) == ((s & m2) != 0)) p0 += std::norm(amp[s]);
    int outcome = (uniform01(rng) < p0) ? 0 : 1;
    double norm = std::sqrt(outcome ? 1 - p0 : p0);
    for (size_t s = 0; s < amp.size(); s++) {
        bool even = ((s & m1) != 0) == ((s & m2) != 0);
        bool keep = even == (outcome == 0);
        amp[s] = keep ? amp[s] / norm : 0.0;
    }
    return outcome;
}

double StateVector::expectation_pauli(const BitVec& support, char type) const {
    StateVector tmp = *this;
    for (size_t q = 0; q < support.nbits; q++) {
        if (!support.get((size_t)q)) continue;
        if (type == 'X') tmp.apply_x((int)q);
        else tmp.apply_z((int)q);
    }
    std::complex<double> e = 0;
    for (size_t s = 0; s < amp.size(); s++) e += std::conj(amp[s]) * tmp.amp[s];
    return e.real();
}

double StateVector::fidelity(const StateVector& a, const StateVector& b) {
    assert(a.nq == b.nq);
    std::complex<double> ip = 0;
    for (size_t s = 0; s < a.amp.size(); s++) ip += std::conj(a.amp[s]) * b.amp[s];
    return std::abs(ip);
}

StateVector apply_polar_encoding(int n, const std::vector<int>& basis,
                                 const BitVec& vals) {
    size_t nn = (size_t)1 << n;
    assert(basis.size() == nn && vals.nbits == nn);
    StateVector s = StateVector::zero_state((int)nn);
    for (size_t q = 0; q < nn; q++) {
        if (basis[q]) {
            s.apply_h((int)q);
            if (vals.get(q)) s.apply_z((int)q);   // |-> carries X-frozen value 1
        } else if (vals.get(q)) {
            s.apply_x((int)q);
        }
    }
    // Transform circuit: for every 2h block, CNOT(control off+j+h, target off+j)
    // realizes "first half ^= second half" on Z-basis labels.  Layers commute.
    for (size_t h = 1; h < nn; h <<= 1)
        for (size_t off = 0; off < nn; off += 2 * h)
            for (size_t j = 0; j < h; j++)
                s.apply_cnot((int)(off + j + h), (int)(off + j));
    return s;
}

StateVector simulate_measurement_prep(int n, const std::vector<int>& b_seq,
                                      std::mt19937_64& rng,
                                      std::vector<uint8_t>* outcomes) {
    size_t nn = (size_t)1 << n;
    StateVector s = StateVector::zero_state((int)nn);
    for (int k = 1; k <= n; k++) {
        size_t half = (size_t)1 << (k - 1);
        char type = b_seq[(size_t)k - 1] ? 'Z' : 'X';
        for (size_t off = 0; off < nn; off += 2 * half)
            for (size_t j = 0; j < half; j++) {
                int m = s.measure_pauli_pair(type, (int)(off + j), (int)(off + j + half), rng);
                if (outcomes) outcomes->push_back((uint8_t)m);
            }
    }
    return s;
}

}
