#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "landau/box.hpp"
#include "landau/errors.hpp"
#include "landau/group.hpp"

using namespace landau;
constexpr double pi = std::numbers::pi;

namespace {

LcaGroup random_group(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 3), len(1, 4), ord(1, 12);
    std::vector<ElementaryFactor> f;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        switch (kind(rng)) {
            case 0: f.push_back(ElementaryFactor::real_line()); break;
            case 1: f.push_back(ElementaryFactor::integers()); break;
            case 2: f.push_back(ElementaryFactor::torus()); break;
            default: f.push_back(ElementaryFactor::cyclic(ord(rng))); break;
        }
    }
    return LcaGroup(f);
}

std::vector<double> random_coords(const LcaGroup& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-5, 5);
    std::uniform_int_distribution<int> n(-20, 20);
    std::vector<double> c;
    for (const auto& f : g.factors()) c.push_back(f.is_discrete() ? double(n(rng)) : u(rng));
    return normalize_coords(g, c);
}

// Midpoint quadrature of a character over one interval, the oracle for the closed forms.
std::complex<double> quad(double lo, double hi, double c, int n = 20000) {
    std::complex<double> s = 0;
    double h = (hi - lo) / n;
    for (int k = 0; k < n; ++k) s += std::polar(1.0, c * (lo + (k + 0.5) * h));
    return s * h;
}

}  // namespace

TEST_CASE("dual of elementary factors") {
    CHECK(dual(ElementaryFactor::real_line()) == ElementaryFactor::real_line());
    CHECK(dual(ElementaryFactor::integers()) == ElementaryFactor::torus());
    CHECK(dual(ElementaryFactor::torus()) == ElementaryFactor::integers());
    CHECK(dual(ElementaryFactor::cyclic(7)) == ElementaryFactor::cyclic(7));
    CHECK_THROWS_AS(ElementaryFactor::cyclic(0), Error);
}

TEST_CASE("double dual is the identity, measures included") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        auto g = random_group(rng);
        CHECK(dual(dual(g)) == g);
    }
}

TEST_CASE("dual Haar normalisation") {
    LcaGroup g({ElementaryFactor::real_line(), ElementaryFactor::torus(), ElementaryFactor::cyclic(5)});
    auto gd = dual(g);
    Box omega0{BoxComponent::interval(-pi, pi), BoxComponent::point_set({0}), BoxComponent::whole()};
    CHECK(box_measure(gd, omega0) == doctest::Approx(1.0).epsilon(1e-15));
    Box k{BoxComponent::interval(-0.5, 0.5), BoxComponent::whole(), BoxComponent::point_set({0})};
    CHECK(box_measure(g, k) == doctest::Approx(1.0));
    CHECK(box_measure(g, Box{BoxComponent::interval(0, 1), BoxComponent::whole(), BoxComponent::whole()}) ==
          doctest::Approx(5.0));
}

TEST_CASE("pairing is a bicharacter of modulus one") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        auto g = random_group(rng);
        auto gd = dual(g);
        GroupElement x1(random_coords(g, rng)), x2(random_coords(g, rng));
        DualElement w1(random_coords(gd, rng)), w2(random_coords(gd, rng));
        CHECK(std::abs(std::abs(pairing(g, w1, x1)) - 1.0) < 1e-14);
        GroupElement xs(add_coords(g, x1.coords, x2.coords));
        DualElement ws(add_coords(gd, w1.coords, w2.coords));
        CHECK(std::abs(pairing(g, w1, xs) - pairing(g, w1, x1) * pairing(g, w1, x2)) < 1e-9);
        CHECK(std::abs(pairing(g, ws, x1) - pairing(g, w1, x1) * pairing(g, w2, x1)) < 1e-9);
        CHECK(std::abs(pairing(g, w1, identity(g)) - 1.0) < 1e-15);
    }
}

TEST_CASE("pairing rejects mismatched coordinates") {
    LcaGroup g({ElementaryFactor::real_line(), ElementaryFactor::integers()});
    CHECK_THROWS_AS(pairing(g, DualElement({0.0}), GroupElement({0.0, 1.0})), Error);
    CHECK_THROWS_AS(make_element(g, {0.5, 0.5}), Error);
}

TEST_CASE("Plancherel on Z_N with counting and probability measures") {
    const int n = 9;
    LcaGroup g({ElementaryFactor::cyclic(n)});
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    std::vector<std::complex<double>> f(n);
    double lhs = 0;
    for (auto& v : f) { v = {nd(rng), nd(rng)}; lhs += std::norm(v) * g.haar_scale(0); }
    auto gd = dual(g);
    double rhs = 0;
    for (int k = 0; k < n; ++k) {
        std::complex<double> fh = 0;
        for (int m = 0; m < n; ++m)
            fh += f[m] * std::conj(pairing(g, DualElement({double(k)}), GroupElement({double(m)}))) * g.haar_scale(0);
        rhs += std::norm(fh) * gd.haar_scale(0);
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("Plancherel on R for a Gaussian") {
    LcaGroup g({ElementaryFactor::real_line()});
    auto gd = dual(g);
    // ||exp(-x^2/2)||^2 = sqrt(pi); transform sqrt(2pi) exp(-w^2/2)
    double rhs = 0, h = 1e-3;
    for (double w = -20; w < 20; w += h) rhs += 2 * pi * std::exp(-w * w) * h * gd.haar_scale(0);
    CHECK(rhs == doctest::Approx(std::sqrt(pi)).epsilon(1e-9));
}

TEST_CASE("character integrals match quadrature") {
    LcaGroup r({ElementaryFactor::real_line()});
    for (double c : {0.0, 1e-7, 0.3, 2.0, -7.5}) {
        auto got = component_character_integral(r.factor(0), 1.0, BoxComponent::interval(-1.2, 2.5), c);
        CHECK(std::abs(got - quad(-1.2, 2.5, c)) < 1e-7);
    }
    auto t = ElementaryFactor::torus();
    for (double n : {0.0, 1.0, 3.0, -2.0}) {
        auto got = component_character_integral(t, 1.0, BoxComponent::interval(0.4, 2.0), n);
        CHECK(std::abs(got - quad(0.4, 2.0, n)) < 1e-7);
        auto whole = component_character_integral(t, 1.0 / (2 * pi), BoxComponent::whole(), n);
        CHECK(std::abs(whole - (n == 0 ? 1.0 : 0.0)) < 1e-14);
    }
    auto z = ElementaryFactor::integers();
    for (double th : {0.0, 0.7, 2 * pi, 3.1}) {
        std::complex<double> s = 0;
        for (int k = -3; k <= 11; ++k) s += std::polar(1.0, th * k);
        CHECK(std::abs(component_character_integral(z, 1.0, BoxComponent::interval(-3, 11), th) - s) < 1e-11);
    }
    auto zn = ElementaryFactor::cyclic(8);
    CHECK(std::abs(component_character_integral(zn, 1.0, BoxComponent::whole(), 2 * pi * 3 / 8)) < 1e-12);
    CHECK(std::abs(component_character_integral(zn, 0.125, BoxComponent::whole(), 0.0) - 1.0) < 1e-14);
}

TEST_CASE("annihilators") {
    LcaGroup r({ElementaryFactor::real_line()});
    Subgroup h{r, {{SubgroupFactor::Type::Lattice, 0.5}}};
    auto a = annihilator(h);
    CHECK(a.factors[0].step == doctest::Approx(4 * pi));
    CHECK(annihilator(a).factors[0].step == doctest::Approx(0.5));

    LcaGroup c8({ElementaryFactor::cyclic(8)});
    Subgroup k{c8, {{SubgroupFactor::Type::Lattice, 2}}};
    CHECK(annihilator(k).factors[0].step == 4);
    CHECK(annihilator(annihilator(k)).factors[0] == k.factors[0]);

    LcaGroup zt({ElementaryFactor::integers(), ElementaryFactor::torus()});
    Subgroup s{zt, {{SubgroupFactor::Type::Lattice, 3}, {SubgroupFactor::Type::Whole, 0}}};
    auto sa = annihilator(s);
    CHECK(sa.group.factor(0) == ElementaryFactor::torus());
    CHECK(sa.factors[0].step == 3);
    CHECK(sa.factors[1].type == SubgroupFactor::Type::Trivial);
    // every element of the annihilator pairs trivially with the subgroup
    CHECK(subgroup_contains(sa, {2 * pi / 3, 0}));
    CHECK(std::abs(pairing(zt, DualElement({2 * pi / 3, 0}), GroupElement({6, 1.234})) - 1.0) < 1e-12);
}

TEST_CASE("reduction to a compactly generated quotient") {
    LcaGroup g({ElementaryFactor::real_line(), ElementaryFactor::cyclic(8)});
    Spectrum s{dual(g), {{BoxComponent::interval(-1, 1), BoxComponent::point_set({0, 2, 6})},
                         {BoxComponent::interval(2, 3), BoxComponent::point_set({4})}}};
    auto red = reduce_to_compactly_generated(s);
    REQUIRE(red.quotient.rank() == 2);
    CHECK(red.quotient.factor(1) == ElementaryFactor::cyclic(4));
    CHECK(red.kernel.factors[1].step == 4);
    CHECK(red.spectrum.pieces[0][1].points == std::vector<std::int64_t>{0, 1, 3});
}

TEST_CASE("spectrum validation") {
    LcaGroup g({ElementaryFactor::real_line()});
    Spectrum bad{dual(g), {{BoxComponent::interval(0, 2)}, {BoxComponent::interval(1, 3)}}};
    CHECK_THROWS_AS(validate_spectrum(bad), Error);
    Spectrum ok{dual(g), {{BoxComponent::interval(0, 1)}, {BoxComponent::interval(1, 3)}}};
    CHECK_NOTHROW(validate_spectrum(ok));
    CHECK(haar(ok) == doctest::Approx(3 / (2 * pi)));
}

TEST_CASE("Minkowski sums and measures") {
    LcaGroup g({ElementaryFactor::real_line(), ElementaryFactor::integers(), ElementaryFactor::torus(),
                ElementaryFactor::cyclic(6)});
    Box k{BoxComponent::interval(-1, 1), BoxComponent::interval(-1, 1), BoxComponent::interval(0, 1),
          BoxComponent::point_set({0, 1})};
    Box l{BoxComponent::interval(0, 3), BoxComponent::interval(5, 9), BoxComponent::interval(2, 7),
          BoxComponent::point_set({4})};
    auto kl = minkowski(g, k, l);
    CHECK(kl[0].intervals[0] == Interval{-1, 4});
    CHECK(component_measure(g.factor(1), 1, kl[1]) == 7);
    CHECK(kl[2].intervals[0] == Interval{2, 8});
    CHECK(minkowski(g, kl, k)[2].full);
    CHECK(discrete_values(g.factor(3), kl[3]) == std::vector<std::int64_t>{4, 5});
}
