#include "qpolar/sc_decoder.hpp"

#include <algorithm>
#include <cassert>

#include "qpolar/errors.hpp"

namespace qpolar {

ScDecoder::ScDecoder(int max_n) {
    max_size_ = (size_t)1 << max_n;
    work_.resize(std::max<size_t>(max_size_, 1));
    cw_.resize(max_size_);
    cwork_.resize(std::max<size_t>(max_size_, 1));
}

// Half splitting of the transform: x[j] = cA[j] ^ cB[j], x[j+h] = cB[j], with
// cA = P(u low half) and cB = P(u high half).  Decoding the low half first
// (f messages) and the high half second (g messages) visits leaves in natural
// index order, so the predecessors of any leaf are exactly the lower-indexed
// leaves and a frozen prefix is fully decided before the first information
// bit.  The leaf input index is exactly off.
void ScDecoder::decode_rec(double* llr, size_t k, size_t off,
                           uint8_t* cw, double* work, uint8_t* cwork) {
    if (k == 1) {
        int u;
        if (fmask_->get(off)) {
            u = fvals_->get(off);
        } else {
            u = (llr[0] < 0) ? 1 : 0;   // tie (LLR 0) resolves to 0
        }
        if (u) uhat_.flip(off);
        cw[0] = (uint8_t)u;
        return;
    }
    size_t h = k / 2;
    for (size_t j = 0; j < h; j++) work[j] = minsum_f(llr[j], llr[j + h]);
    decode_rec(work, h, off, cwork, work + h, cwork + h);
    for (size_t j = 0; j < h; j++)
        work[j] = minsum_g(llr[j], llr[j + h], cwork[j]);
    decode_rec(work, h, off + h, cw + h, work + h, cwork + h);
    for (size_t j = 0; j < h; j++) {
        uint8_t ca = cwork[j], cb = cw[h + j];
        cw[j] = ca ^ cb;
        cw[j + h] = cb;
    }
}

DecodeResult ScDecoder::sc_decode(const DecodeTask& task) {
    size_t n = (size_t)1 << task.n;
    if (n > max_size_) throw UsageError("sc_decode: task larger than decoder capacity");
    assert(task.llr.size() == n && task.frozen_mask.nbits == n);

    const double* llr = task.llr.data();
    BitVec fmask = task.frozen_mask;
    BitVec fvals = task.frozen_values;
    if (task.orientation == DecodeOrientation::reversed) {
        // P^T = R P R with R the full index reversal, so a reversed-orientation
        // task is a standard task on reversed llrs and frozen data.
        rev_llr_.resize(n);
        for (size_t t = 0; t < n; t++) rev_llr_[t] = task.llr[n - 1 - t];
        llr = rev_llr_.data();
        BitVec m = BitVec::make(n), v = BitVec::make(n);
        for (size_t t = 0; t < n; t++) {
            if (task.frozen_mask.get(n - 1 - t)) m.flip(t);
            if (task.frozen_values.get(n - 1 - t)) v.flip(t);
        }
        fmask = m;
        fvals = v;
    }
    fmask_ = &fmask;
    fvals_ = &fvals;
    uhat_ = BitVec::make(n);

    // The recursion reads its llr buffer while filling `work`, so the input
    // gets its own buffer.
    top_.assign(llr, llr + n);
    decode_rec(top_.data(), n, 0, cw_.data(), work_.data(), cwork_.data());

    DecodeResult r;
    r.u_hat = BitVec::make(n);
    r.codeword_hat = BitVec::make(n);
    if (task.orientation == DecodeOrientation::reversed) {
        for (size_t t = 0; t < n; t++) {
            if (uhat_.get(t)) r.u_hat.flip(n - 1 - t);
            if (cw_[t]) r.codeword_hat.flip(n - 1 - t);
        }
    } else {
        r.u_hat = uhat_;
        for (size_t t = 0; t < n; t++)
            if (cw_[t]) r.codeword_hat.flip(t);
    }
    return r;
}

}
