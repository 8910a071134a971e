#pragma once

#include <cmath>
#include <vector>

#include "qpolar/bitvec.hpp"

namespace qpolar {

// standard: codewords x = P_N u; reversed: codewords x = P_N^T u.
enum class DecodeOrientation { standard, reversed };

struct DecodeTask {
    int n = 0;                          // N = 2^n
    DecodeOrientation orientation = DecodeOrientation::standard;
    std::vector<double> llr;            // per output position; sign convention (-1)^bit
    BitVec frozen_mask;                 // length N, set where the input is known
    BitVec frozen_values;               // length N, value at frozen positions
};

struct DecodeResult {
    BitVec u_hat;
    BitVec codeword_hat;                // re-encoded estimate, P_N(u_hat) or P_N^T(u_hat)
};

// Min-sum check-node message; zero if either input is erased (LLR 0).
inline double minsum_f(double a, double b) {
    double m = std::fabs(a) < std::fabs(b) ? std::fabs(a) : std::fabs(b);
    return ((a < 0) != (b < 0)) ? -m : m;
}

// Variable-node message given the decision u on the upper branch.
inline double minsum_g(double a, double b, int u) {
    return u ? b - a : b + a;
}

// Successive-cancellation min-sum decoder.  Instances own scratch buffers and
// are not thread-safe; use one per thread.
class ScDecoder {
public:
    explicit ScDecoder(int max_n);
    DecodeResult sc_decode(const DecodeTask& task);

private:
    void decode_rec(double* llr, size_t k, size_t off,
                    uint8_t* cw, double* work, uint8_t* cwork);

    size_t max_size_;
    std::vector<double> work_;
    std::vector<uint8_t> cw_, cwork_;
    std::vector<double> rev_llr_, top_;
    const BitVec* fmask_ = nullptr;
    const BitVec* fvals_ = nullptr;
    BitVec uhat_;
};

}
