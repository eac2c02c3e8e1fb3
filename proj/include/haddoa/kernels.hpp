// SPDX-License-Identifier: Apache-2.0
//
// Complex arithmetic inner loops: scalar reference kernels plus SIMD
// variants selected at runtime. Pointers reference interleaved
// std::complex<double> storage; matrices are column-major.

#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace haddoa::kernels {

using cplx = std::complex<double>;

struct Ops {
    const char* name;

    /// sum_i conj(a[i]) * b[i]
    cplx (*cdot)(const cplx* a, const cplx* b, std::size_t n);

    /// sum_i |x[i]|^2
    double (*power_sum)(const cplx* x, std::size_t n);

    /// r (k x k, column-major, leading dimension k) += y * y^H
    void (*rank1_herm_update)(cplx* r, const cplx* y, std::size_t k);
};

/// Portable reference implementation. Always available.
const Ops& scalar_ops();

/// True when the AVX2 path was compiled in and the CPU reports AVX2 + FMA.
bool avx2_available();

/// AVX2 implementation; falls back to scalar_ops() when unavailable.
const Ops& avx2_ops();

/// Kernel set by name ("scalar", "avx2"); nullptr when unknown or the named
/// set is unavailable on this machine.
const Ops* ops_by_name(std::string_view name);

/// Kernels used by the library: the best available ISA, overridable through
/// the HAD_DOA_KERNELS environment variable (values: "scalar", "avx2").
/// Selection happens once, on first use.
const Ops& active();

}  // namespace haddoa::kernels
