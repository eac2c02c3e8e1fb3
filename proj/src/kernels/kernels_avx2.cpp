// SPDX-License-Identifier: Apache-2.0
//
// AVX2 + FMA kernel variants, two complex doubles per vector. This
// translation unit is compiled with -mavx2 -mfma and must only be entered
// after a runtime CPU check; nothing here is inlined into other units.

#include "haddoa/kernels.hpp"

#include <immintrin.h>

namespace haddoa::kernels::detail {

bool cpu_has_avx2_fma() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    // re lanes accumulate ar*br + ai*bi, im lanes ar*bi - ai*br.
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const __m256d flip_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        __m256d vbs = _mm256_permute_pd(vb, 0x5);    // [bi, br]
        vbs = _mm256_xor_pd(vbs, flip_odd);          // [bi, -br]
        acc_im = _mm256_fmadd_pd(va, vbs, acc_im);
    }
    double re = hsum(acc_re);
    double im = hsum(acc_im);
    for (; i < n; ++i) {
        const double ar = pa[2 * i], ai = pa[2 * i + 1];
        const double br = pb[2 * i], bi = pb[2 * i + 1];
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

double power_sum_avx2(const cplx* x, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(px + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        s += px[2 * i] * px[2 * i] + px[2 * i + 1] * px[2 * i + 1];
    }
    return s;
}

void rank1_herm_update_avx2(cplx* r, const cplx* y, std::size_t k) {
    const double* py = reinterpret_cast<const double*>(y);
    for (std::size_t j = 0; j < k; ++j) {
        const double sr = py[2 * j];
        const double si = -py[2 * j + 1];
        double* col = reinterpret_cast<double*>(r + j * k);
        const __m256d vsr = _mm256_set1_pd(sr);
        const __m256d vsi = _mm256_set1_pd(si);
        std::size_t i = 0;
        for (; i + 2 <= k; i += 2) {
            const __m256d vy = _mm256_loadu_pd(py + 2 * i);
            const __m256d t1 = _mm256_mul_pd(vy, vsr);
            const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(vy, 0x5), vsi);
            // addsub: even lanes t1-t2 (real), odd lanes t1+t2 (imag)
            const __m256d prod = _mm256_addsub_pd(t1, t2);
            const __m256d cur = _mm256_loadu_pd(col + 2 * i);
            _mm256_storeu_pd(col + 2 * i, _mm256_add_pd(cur, prod));
        }
        for (; i < k; ++i) {
            const double yr = py[2 * i], yi = py[2 * i + 1];
            col[2 * i] += yr * sr - yi * si;
            col[2 * i + 1] += yi * sr + yr * si;
        }
    }
}

}  // namespace

const Ops& avx2_ops_impl() {
    static const Ops ops{"avx2", &cdot_avx2, &power_sum_avx2,
                         &rank1_herm_update_avx2};
    return ops;
}

}  // namespace haddoa::kernels::detail
