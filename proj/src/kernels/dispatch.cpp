#include "shiftmetric/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace shiftmetric::kernels {

const Kernels* avx2_impl(); // defined in kernels_avx2.cpp (nullptr off x86)

bool avx2_available() {
#if defined(__x86_64__)
    return avx2_impl() != nullptr && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Kernels& avx2() {
    if (avx2_available())
        return *avx2_impl();
    return scalar();
}

const Kernels& active() {
    static const Kernels* selected = [] {
        const char* env = std::getenv("SHIFTMETRIC_SIMD");
        if (env != nullptr) {
            if (std::strcmp(env, "scalar") == 0)
                return &scalar();
            if (std::strcmp(env, "avx2") == 0)
                return &avx2();
        }
        return avx2_available() ? &avx2() : &scalar();
    }();
    return *selected;
}

} // namespace shiftmetric::kernels
