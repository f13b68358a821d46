#pragma once

#include <complex>
#include <cstddef>

namespace landau::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
// Highest available ISA unless LANDAU_SIMD=scalar is set or force_isa was called.
Isa active_isa();
void force_isa(Isa isa);

// re[i] = scale[i] * cos(phase[i]), im[i] = scale[i] * sin(phase[i])
void exp_phase(const double* phase, const double* scale, double* re, double* im, std::size_t n);
// Number of x[i] with lo <= x[i] <= hi.
std::size_t count_in_range(const double* x, std::size_t n, double lo, double hi);
// Number of i with (x[i], y[i]) in the closed box.
std::size_t count_in_box2(const double* x, const double* y, std::size_t n, double xlo, double xhi, double ylo,
                          double yhi);
// sum_i conj(a_i) * b_i on split real/imaginary arrays.
std::complex<double> cdot(const double* are, const double* aim, const double* bre, const double* bim, std::size_t n);

namespace scalar {
void exp_phase(const double* phase, const double* scale, double* re, double* im, std::size_t n);
std::size_t count_in_range(const double* x, std::size_t n, double lo, double hi);
std::size_t count_in_box2(const double* x, const double* y, std::size_t n, double xlo, double xhi, double ylo,
                          double yhi);
std::complex<double> cdot(const double* are, const double* aim, const double* bre, const double* bim, std::size_t n);
}  // namespace scalar

namespace avx2 {
void exp_phase(const double* phase, const double* scale, double* re, double* im, std::size_t n);
std::size_t count_in_range(const double* x, std::size_t n, double lo, double hi);
std::size_t count_in_box2(const double* x, const double* y, std::size_t n, double xlo, double xhi, double ylo,
                          double yhi);
std::complex<double> cdot(const double* are, const double* aim, const double* bre, const double* bim, std::size_t n);
}  // namespace avx2

}  // namespace landau::kernels
