// SPDX-License-Identifier: Apache-2.0
//
// Runtime kernel dispatch.

#include "haddoa/kernels.hpp"

#include <cstdlib>

namespace haddoa::kernels {

#if HADDOA_HAVE_AVX2
namespace detail {
bool cpu_has_avx2_fma();
const Ops& avx2_ops_impl();
}  // namespace detail
#endif

bool avx2_available() {
#if HADDOA_HAVE_AVX2
    return detail::cpu_has_avx2_fma();
#else
    return false;
#endif
}

const Ops& avx2_ops() {
#if HADDOA_HAVE_AVX2
    if (detail::cpu_has_avx2_fma()) {
        return detail::avx2_ops_impl();
    }
#endif
    return scalar_ops();
}

const Ops* ops_by_name(std::string_view name) {
    if (name == "scalar") {
        return &scalar_ops();
    }
    if (name == "avx2" && avx2_available()) {
        return &avx2_ops();
    }
    return nullptr;
}

const Ops& active() {
    static const Ops& selected = []() -> const Ops& {
        if (const char* env = std::getenv("HAD_DOA_KERNELS")) {
            if (const Ops* named = ops_by_name(env)) {
                return *named;
            }
            // unknown or unavailable request: fall through to auto selection
        }
        return avx2_available() ? avx2_ops() : scalar_ops();
    }();
    return selected;
}

}  // namespace haddoa::kernels
