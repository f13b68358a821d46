#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "landau/kernels.hpp"

using namespace landau::kernels;

TEST_CASE("exp_phase variants agree") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3000, 3000), w(0, 2);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
        std::vector<double> p(n), s(n), r0(n), i0(n), r1(n), i1(n);
        for (std::size_t k = 0; k < n; ++k) { p[k] = u(rng) * (k % 3 ? 1 : 1e-3); s[k] = w(rng); }
        scalar::exp_phase(p.data(), s.data(), r0.data(), i0.data(), n);
        if (isa_available(Isa::Avx2)) {
            avx2::exp_phase(p.data(), s.data(), r1.data(), i1.data(), n);
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(std::abs(r0[k] - r1[k]) < 1e-13);
                CHECK(std::abs(i0[k] - i1[k]) < 1e-13);
            }
        }
    }
}

TEST_CASE("exp_phase special angles") {
    std::vector<double> p{0, M_PI / 2, M_PI, -M_PI / 2, 1e-300, -0.0, 7 * M_PI / 4}, s(p.size(), 1.0);
    std::vector<double> re(p.size()), im(p.size());
    exp_phase(p.data(), s.data(), re.data(), im.data(), p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        CHECK(re[k] == doctest::Approx(std::cos(p[k])).epsilon(1e-15));
        CHECK(std::abs(im[k] - std::sin(p[k])) < 1e-15);
    }
}

TEST_CASE("counting variants agree, closed boundaries") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> q(-20, 20);
    for (std::size_t n : {0u, 5u, 8u, 13u, 1000u}) {
        std::vector<double> x(n), y(n);
        for (std::size_t k = 0; k < n; ++k) { x[k] = q(rng) * 0.5; y[k] = q(rng) * 0.25; }
        for (double lo : {-3.0, 0.0, 2.5})
            for (double hi : {lo, lo + 1.5, lo + 10.0}) {
                std::size_t ref = 0, ref2 = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    ref += x[k] >= lo && x[k] <= hi;
                    ref2 += x[k] >= lo && x[k] <= hi && y[k] >= -1 && y[k] <= 1;
                }
                CHECK(scalar::count_in_range(x.data(), n, lo, hi) == ref);
                CHECK(scalar::count_in_box2(x.data(), y.data(), n, lo, hi, -1, 1) == ref2);
                if (isa_available(Isa::Avx2)) {
                    CHECK(avx2::count_in_range(x.data(), n, lo, hi) == ref);
                    CHECK(avx2::count_in_box2(x.data(), y.data(), n, lo, hi, -1, 1) == ref2);
                }
            }
    }
}

TEST_CASE("complex dot variants agree") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (std::size_t n : {0u, 1u, 4u, 9u, 513u}) {
        std::vector<double> a(n), b(n), c(n), d(n);
        std::complex<double> ref = 0;
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = nd(rng); b[k] = nd(rng); c[k] = nd(rng); d[k] = nd(rng);
            ref += std::conj(std::complex<double>(a[k], b[k])) * std::complex<double>(c[k], d[k]);
        }
        CHECK(std::abs(scalar::cdot(a.data(), b.data(), c.data(), d.data(), n) - ref) < 1e-11);
        if (isa_available(Isa::Avx2)) CHECK(std::abs(avx2::cdot(a.data(), b.data(), c.data(), d.data(), n) - ref) < 1e-11);
    }
}

TEST_CASE("dispatch can be forced to the scalar path") {
    Isa before = active_isa();
    force_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    double x[3] = {1, 2, 3};
    CHECK(count_in_range(x, 3, 1.5, 3) == 2);
    if (isa_available(before)) force_isa(before);
    CHECK(active_isa() == before);
}
