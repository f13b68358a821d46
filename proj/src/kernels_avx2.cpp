#include <immintrin.h>

#include <cmath>

#include "landau/kernels.hpp"

namespace landau::kernels::avx2 {

namespace {

// Cephes minimax coefficients on [-pi/4, pi/4].
constexpr double kSin[] = {1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
                           -1.98412698295895385996e-4, 8.33333333332211858878e-3, -1.66666666666666307295e-1};
constexpr double kCos[] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
                           2.48015872888517045348e-5, -1.38888888888730564116e-3, 4.16666666666665929218e-2};
constexpr double kDP1 = 7.85398125648498535156e-1;
constexpr double kDP2 = 3.77489470793079817668e-8;
constexpr double kDP3 = 2.69515142907905952645e-15;
constexpr double kFourOverPi = 1.27323954473516268615;

inline __m256d poly(__m256d z, const double* c) {
    __m256d p = _mm256_set1_pd(c[0]);
    for (int k = 1; k < 6; ++k) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[k]));
    return p;
}

inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d sign = _mm256_and_pd(x, sign_mask);
    __m256d ax = _mm256_andnot_pd(sign_mask, x);

    __m256d j = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
    __m256d half = _mm256_floor_pd(_mm256_mul_pd(j, _mm256_set1_pd(0.5)));
    __m256d odd = _mm256_sub_pd(j, _mm256_add_pd(half, half));
    j = _mm256_add_pd(j, odd);

    __m256d z = _mm256_fnmadd_pd(j, _mm256_set1_pd(kDP1), ax);
    z = _mm256_fnmadd_pd(j, _mm256_set1_pd(kDP2), z);
    z = _mm256_fnmadd_pd(j, _mm256_set1_pd(kDP3), z);
    __m256d zz = _mm256_mul_pd(z, z);

    __m256d sp = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), poly(zz, kSin), z);
    __m256d cp = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), poly(zz, kCos),
                                 _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

    // quadrant q = (j/2) mod 4
    __m256d jh = _mm256_mul_pd(j, _mm256_set1_pd(0.5));
    __m256d q = _mm256_sub_pd(jh, _mm256_mul_pd(_mm256_floor_pd(_mm256_mul_pd(jh, _mm256_set1_pd(0.25))),
                                                _mm256_set1_pd(4.0)));
    __m256d q1 = _mm256_cmp_pd(q, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    __m256d q2 = _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
    __m256d q3 = _mm256_cmp_pd(q, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
    __m256d swap = _mm256_or_pd(q1, q3);

    __m256d sa = _mm256_blendv_pd(sp, cp, swap);
    __m256d ca = _mm256_blendv_pd(cp, sp, swap);
    __m256d sneg = _mm256_and_pd(_mm256_or_pd(q2, q3), sign_mask);
    __m256d cneg = _mm256_and_pd(_mm256_or_pd(q1, q2), sign_mask);
    s = _mm256_xor_pd(_mm256_xor_pd(sa, sneg), sign);
    c = _mm256_xor_pd(ca, cneg);
}

}  // namespace

void exp_phase(const double* phase, const double* scale, double* re, double* im, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s, c;
        sincos4(_mm256_loadu_pd(phase + i), s, c);
        __m256d w = _mm256_loadu_pd(scale + i);
        _mm256_storeu_pd(re + i, _mm256_mul_pd(w, c));
        _mm256_storeu_pd(im + i, _mm256_mul_pd(w, s));
    }
    if (i < n) {
        alignas(32) double p[4] = {0, 0, 0, 0}, w[4] = {0, 0, 0, 0}, r[4], m[4];
        for (std::size_t k = 0; i + k < n; ++k) { p[k] = phase[i + k]; w[k] = scale[i + k]; }
        __m256d s, c;
        sincos4(_mm256_load_pd(p), s, c);
        _mm256_store_pd(r, _mm256_mul_pd(_mm256_load_pd(w), c));
        _mm256_store_pd(m, _mm256_mul_pd(_mm256_load_pd(w), s));
        for (std::size_t k = 0; i + k < n; ++k) { re[i + k] = r[k]; im[i + k] = m[k]; }
    }
}

std::size_t count_in_range(const double* x, std::size_t n, double lo, double hi) {
    const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
    std::size_t c = 0, i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        __m256d m = _mm256_and_pd(_mm256_cmp_pd(v, vlo, _CMP_GE_OQ), _mm256_cmp_pd(v, vhi, _CMP_LE_OQ));
        c += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
    }
    for (; i < n; ++i) c += (x[i] >= lo) & (x[i] <= hi);
    return c;
}

std::size_t count_in_box2(const double* x, const double* y, std::size_t n, double xlo, double xhi, double ylo,
                          double yhi) {
    const __m256d a = _mm256_set1_pd(xlo), b = _mm256_set1_pd(xhi);
    const __m256d cc = _mm256_set1_pd(ylo), d = _mm256_set1_pd(yhi);
    std::size_t c = 0, i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i), vy = _mm256_loadu_pd(y + i);
        __m256d m = _mm256_and_pd(_mm256_cmp_pd(vx, a, _CMP_GE_OQ), _mm256_cmp_pd(vx, b, _CMP_LE_OQ));
        m = _mm256_and_pd(m, _mm256_cmp_pd(vy, cc, _CMP_GE_OQ));
        m = _mm256_and_pd(m, _mm256_cmp_pd(vy, d, _CMP_LE_OQ));
        c += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(m))));
    }
    for (; i < n; ++i) c += (x[i] >= xlo) & (x[i] <= xhi) & (y[i] >= ylo) & (y[i] <= yhi);
    return c;
}

std::complex<double> cdot(const double* are, const double* aim, const double* bre, const double* bim, std::size_t n) {
    __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ar = _mm256_loadu_pd(are + i), ai = _mm256_loadu_pd(aim + i);
        __m256d br = _mm256_loadu_pd(bre + i), bi = _mm256_loadu_pd(bim + i);
        sr = _mm256_fmadd_pd(ar, br, sr);
        sr = _mm256_fmadd_pd(ai, bi, sr);
        si = _mm256_fmadd_pd(ar, bi, si);
        si = _mm256_fnmadd_pd(ai, br, si);
    }
    alignas(32) double r[4], m[4];
    _mm256_store_pd(r, sr);
    _mm256_store_pd(m, si);
    double tr = (r[0] + r[1]) + (r[2] + r[3]);
    double ti = (m[0] + m[1]) + (m[2] + m[3]);
    for (; i < n; ++i) {
        tr += are[i] * bre[i] + aim[i] * bim[i];
        ti += are[i] * bim[i] - aim[i] * bre[i];
    }
    return {tr, ti};
}

}  // namespace landau::kernels::avx2
