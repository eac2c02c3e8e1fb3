// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. These define the semantics the SIMD variants must match;
// they operate on the raw interleaved (re, im) layout so the arithmetic is
// identical to the vector paths up to summation order.

#include "haddoa/kernels.hpp"

namespace haddoa::kernels {

namespace {

cplx cdot_scalar(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = pa[2 * i], ai = pa[2 * i + 1];
        const double br = pb[2 * i], bi = pb[2 * i + 1];
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

double power_sum_scalar(const cplx* x, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        acc += px[i] * px[i];
    }
    return acc;
}

void rank1_herm_update_scalar(cplx* r, const cplx* y, std::size_t k) {
    const double* py = reinterpret_cast<const double*>(y);
    for (std::size_t j = 0; j < k; ++j) {
        // column j accumulates y * conj(y[j])
        const double sr = py[2 * j];
        const double si = -py[2 * j + 1];
        double* col = reinterpret_cast<double*>(r + j * k);
        for (std::size_t i = 0; i < k; ++i) {
            const double yr = py[2 * i], yi = py[2 * i + 1];
            col[2 * i] += yr * sr - yi * si;
            col[2 * i + 1] += yi * sr + yr * si;
        }
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", &cdot_scalar, &power_sum_scalar,
                         &rank1_herm_update_scalar};
    return ops;
}

}  // namespace haddoa::kernels
