#include <cmath>

#include "landau/kernels.hpp"

namespace landau::kernels::scalar {

void exp_phase(const double* phase, const double* scale, double* re, double* im, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = scale[i] * std::cos(phase[i]);
        im[i] = scale[i] * std::sin(phase[i]);
    }
}

std::size_t count_in_range(const double* x, std::size_t n, double lo, double hi) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] >= lo) & (x[i] <= hi);
    return c;
}

std::size_t count_in_box2(const double* x, const double* y, std::size_t n, double xlo, double xhi, double ylo,
                          double yhi) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] >= xlo) & (x[i] <= xhi) & (y[i] >= ylo) & (y[i] <= yhi);
    return c;
}

std::complex<double> cdot(const double* are, const double* aim, const double* bre, const double* bim, std::size_t n) {
    double sr = 0, si = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += are[i] * bre[i] + aim[i] * bim[i];
        si += are[i] * bim[i] - aim[i] * bre[i];
    }
    return {sr, si};
}

}  // namespace landau::kernels::scalar
