#include <atomic>
#include <cstdlib>
#include <cstring>

#include "landau/errors.hpp"
#include "landau/kernels.hpp"

namespace landau::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(LANDAU_HAS_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    const char* env = std::getenv("LANDAU_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& current() {
    static std::atomic<int> isa{static_cast<int>(detect())};
    return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return static_cast<Isa>(current().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) fail(ErrorKind::NotSupported, std::string("instruction set not available: ") + isa_name(isa));
    current().store(static_cast<int>(isa), std::memory_order_relaxed);
}

#if defined(LANDAU_HAS_AVX2)
#define LANDAU_DISPATCH(fn, ...) \
    (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define LANDAU_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void exp_phase(const double* phase, const double* scale, double* re, double* im, std::size_t n) {
    LANDAU_DISPATCH(exp_phase, phase, scale, re, im, n);
}

std::size_t count_in_range(const double* x, std::size_t n, double lo, double hi) {
    return LANDAU_DISPATCH(count_in_range, x, n, lo, hi);
}

std::size_t count_in_box2(const double* x, const double* y, std::size_t n, double xlo, double xhi, double ylo,
                          double yhi) {
    return LANDAU_DISPATCH(count_in_box2, x, y, n, xlo, xhi, ylo, yhi);
}

std::complex<double> cdot(const double* are, const double* aim, const double* bre, const double* bim, std::size_t n) {
    return LANDAU_DISPATCH(cdot, are, aim, bre, bim, n);
}

}  // namespace landau::kernels
