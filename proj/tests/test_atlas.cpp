#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "landau/atlas.hpp"
#include "landau/errors.hpp"

using namespace landau;

namespace {

constexpr double kPi = std::numbers::pi;

LcaGroup line_hat() { return dual(LcaGroup({ElementaryFactor::real_line()})); }
LcaGroup cyclic_hat(std::int64_t n) { return dual(LcaGroup({ElementaryFactor::cyclic(n)})); }

PointCloud cloud1(const std::vector<double>& xs) {
    PointCloud p;
    p.dim = 1;
    p.coords = xs;
    return p;
}

double gram_deviation(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd g = m.adjoint() * m;
    return (g - Eigen::MatrixXcd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

Spectrum spectrum_of(const LcaGroup& gd, std::vector<Box> pieces) { return Spectrum{gd, std::move(pieces)}; }

}  // namespace

TEST_CASE("sylvester hadamard matrices") {
    auto h0 = sylvester_hadamard(0);
    CHECK(h0.order == 1);
    CHECK(h0.at(0, 0) == 1);
    auto h1 = sylvester_hadamard(1);
    CHECK(h1.entries == std::vector<int>{1, 1, 1, -1});
    for (unsigned n = 0; n <= 7; ++n) CHECK(hadamard_exact(sylvester_hadamard(n)));
    // direct multiplication for order 4
    auto h2 = sylvester_hadamard(2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int s = 0;
            for (int k = 0; k < 4; ++k) s += h2.at(i, k) * h2.at(j, k);
            CHECK(s == (i == j ? 4 : 0));
        }
    CHECK(sylvester_hadamard_order(8).order == 8);
    CHECK_THROWS_AS(sylvester_hadamard_order(12), Error);
    CHECK_THROWS_AS(sylvester_hadamard_order(0), Error);
}

TEST_CASE("cube on the real line") {
    auto gd = line_hat();
    auto a = build_cube(gd, {BoxComponent::interval(-0.1, 0.1)});
    CHECK(a.cube.half_width[0] == doctest::Approx(0.1));
    CHECK(a.cube.measure() == doctest::Approx(0.2 / (2 * kPi)));
    auto pts = quasi_points(a, {BoxComponent::interval(-100, 100)});
    double step = 2 * kPi / 0.2;
    CHECK(pts.size() == 2 * static_cast<std::size_t>(std::floor(100 / step)) + 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double k = pts.coords[i] / step;
        CHECK(std::abs(k - std::round(k)) < 1e-9);
    }
    CHECK_THROWS_AS(build_cube(gd, {BoxComponent::interval(0.1, 0.3)}), Error);
}

TEST_CASE("cube on Z_8 with neighbourhood 4Z_8") {
    auto gd = cyclic_hat(8);
    auto a = build_cube(gd, {BoxComponent::point_set({0, 4})});
    CHECK(a.cube.subgroup_step[0] == 4);
    CHECK(a.quasi.coset_reps.size() == 2);
    auto pts = quasi_points(a, {BoxComponent::whole()});
    REQUIRE(pts.size() == 2);
    // brute force: the reps give distinct characters on K, and every character of G restricts to one of them
    std::vector<std::complex<double>> sig[2];
    for (std::size_t r = 0; r < 2; ++r)
        for (std::int64_t k : {0, 4}) sig[r].push_back(std::polar(1.0, 2 * kPi * double(k) * pts.coords[r] / 8));
    std::complex<double> ip = 0;
    for (int t = 0; t < 2; ++t) ip += std::conj(sig[0][t]) * sig[1][t];
    CHECK(std::abs(ip) < 1e-15);
    for (int x = 0; x < 8; ++x) {
        std::vector<std::complex<double>> s;
        for (std::int64_t k : {0, 4}) s.push_back(std::polar(1.0, 2 * kPi * double(k) * x / 8));
        bool matched = false;
        for (int r = 0; r < 2; ++r) matched |= std::abs(s[0] - sig[r][0]) + std::abs(s[1] - sig[r][1]) < 1e-12;
        CHECK(matched);
    }
    auto grid = build_grid(spectrum_of(gd, {a.cube.cell()}));
    auto psi = psi_basis(a.cube, pts, grid);
    CHECK(gram_deviation(psi) < 1e-15);
}

TEST_CASE("degenerate cube on the integers") {
    auto gd = dual(LcaGroup({ElementaryFactor::torus()}));
    auto a = build_cube(gd, {BoxComponent::point_set({-1, 0, 1})});
    CHECK(a.cube.cell()[0].points == std::vector<std::int64_t>{0});
    CHECK(a.cube.measure() == doctest::Approx(1.0));
    auto pts = quasi_points(a, {BoxComponent::whole()});
    CHECK(pts.size() == 1);
}

TEST_CASE("cube on the torus dual of Z") {
    auto gd = dual(LcaGroup({ElementaryFactor::integers()}));
    auto a = build_cube(gd, {BoxComponent::interval(-0.5, 0.5)});
    auto n = a.cube.torus_refinement[0];
    CHECK(kPi / double(n) <= 0.5);
    CHECK(kPi / double(n - 1) > 0.5);
    CHECK(a.cube.measure() == doctest::Approx(1.0 / double(n)));
    auto pts = quasi_points(a, {BoxComponent::interval(-3 * double(n), 3 * double(n))});
    CHECK(pts.size() == 7);
}

TEST_CASE("psi basis on the real line matches the antiderivative oracle") {
    auto gd = line_hat();
    auto a = build_cube(gd, {BoxComponent::interval(-0.5, 0.5)});
    double step = 2 * kPi / 1.0;
    std::vector<double> xs;
    for (int k = -6; k <= 6; ++k) xs.push_back(step * k);
    auto grid = build_grid(spectrum_of(gd, {a.cube.cell()}), GridPolicy{64, 8});
    auto psi = psi_basis(a.cube, cloud1(xs), grid);
    CHECK(gram_deviation(psi) < 1e-10);
    // exact integrals of exp(i (x - y) w) over C, divided by mu(C)
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            auto exact = box_character_integral(gd, a.cube.cell(), {xs[j] - xs[i]}) / a.cube.measure();
            auto quad = psi.col(long(i)).dot(psi.col(long(j)));
            CHECK(std::abs(exact - quad) < 1e-10);
        }
    // identity: constant mu(C)^-1/2 on C
    auto id = unweighted(grid, psi.col(6));
    for (long i = 0; i < id.size(); ++i) CHECK(std::abs(id[i] - 1 / std::sqrt(a.cube.measure())) < 1e-12);
}

TEST_CASE("psi basis rejects a grid that does not resolve the family") {
    auto gd = line_hat();
    auto a = build_cube(gd, {BoxComponent::interval(-0.5, 0.5)});
    auto grid = build_grid(spectrum_of(gd, {a.cube.cell()}), GridPolicy{4, 4});
    CHECK_THROWS_AS(psi_basis(a.cube, cloud1({0.0, 2 * kPi * 4}), grid), Error);
}

TEST_CASE("tiles partition truncation windows") {
    SUBCASE("real line") {
        auto cube = make_cube(line_hat(), {0.7}, {}, {}, {0.13});
        Box w{BoxComponent::interval(-1.3, 2.7)};
        auto ts = tiles_meeting(cube, w);
        double total = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            total += intersection_measure(cube.dual_group, tile(cube, ts[i]), w);
            for (std::size_t j = i + 1; j < ts.size(); ++j)
                CHECK(intersection_measure(cube.dual_group, tile(cube, ts[i]), tile(cube, ts[j])) < 1e-12);
        }
        CHECK(std::abs(total - box_measure(cube.dual_group, w)) < 1e-10);
    }
    SUBCASE("torus x Z_12") {
        auto gd = dual(LcaGroup({ElementaryFactor::integers(), ElementaryFactor::cyclic(12)}));
        auto cube = make_cube(gd, {0, 0}, {5, 0}, {0, 3}, {0.4, 0});
        Box w{BoxComponent::interval(1.0, 4.0), BoxComponent::point_set({0, 1, 5, 7, 11})};
        auto ts = tiles_meeting(cube, w);
        CHECK(ts.size() == 5 * 3);
        double total = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            total += intersection_measure(gd, tile(cube, ts[i]), w);
            for (std::size_t j = i + 1; j < ts.size(); ++j) CHECK(intersection_measure(gd, tile(cube, ts[i]), tile(cube, ts[j])) < 1e-12);
        }
        CHECK(std::abs(total - box_measure(gd, w)) < 1e-10);
        // mu(C) = mu_H(C0) * mu(K)
        CHECK(cube.measure() == doctest::Approx((1.0 / 5) * (4.0 / 12)));
    }
}

TEST_CASE("spectrum approximation") {
    auto gd = line_hat();
    SUBCASE("union of four tiles is reproduced") {
        auto om = spectrum_of(gd, {{BoxComponent::interval(0, 1)}, {BoxComponent::interval(2, 5)}});
        auto r = approximate_spectrum(om, 0.5, {{1.0}});
        CHECK(r.n == 4);
        CHECK(r.defect == 0);
        CHECK(r.excess == 0);
    }
    SUBCASE("[-pi, pi] at width pi/8") {
        auto om = spectrum_of(gd, {{BoxComponent::interval(-kPi, kPi)}});
        auto r = approximate_spectrum(om, 0.5, {{kPi / 8}});
        CHECK(r.n == 16);
        CHECK(r.defect == 0);
        CHECK(haar(r.omega_star) == doctest::Approx(1.0));
    }
    SUBCASE("coarse start is refined") {
        auto om = spectrum_of(gd, {{BoxComponent::interval(-1, 1.01)}});
        auto r = approximate_spectrum(om, 0.5, {{4.0}});
        CHECK(r.refinements >= 1);
        double ms = haar(r.omega_star);
        CHECK(r.defect < 0.25 * 0.25 * ms);
        CHECK(r.excess < 0.25 * 0.25);
        // bookkeeping oracle
        double in = intersection_measure(om, r.omega_star.pieces[0]);
        for (std::size_t k = 1; k < r.omega_star.pieces.size(); ++k) in += intersection_measure(om, r.omega_star.pieces[k]);
        CHECK(std::abs(r.defect - (haar(om) - in)) < 1e-12);
        CHECK((r.n & (r.n - 1)) == 0);
    }
    SUBCASE("two intervals") {
        auto om = spectrum_of(gd, {{BoxComponent::interval(-17 * kPi / 16, -3 * kPi / 16)},
                                   {BoxComponent::interval(-kPi / 16, 17 * kPi / 16)}});
        auto r = approximate_spectrum(om, 0.5, {{kPi / 8}});
        CHECK(r.n == 16);
        CHECK(r.defect == 0);
        CHECK(r.excess == 0);
    }
    SUBCASE("budget exhaustion is reported") {
        auto om = spectrum_of(gd, {{BoxComponent::interval(0, 1)}, {BoxComponent::interval(1.5, 2.5)}, {BoxComponent::interval(3, 3.1)}});
        ApproximationOptions o;
        o.max_refinements = 0;
        CHECK_THROWS_AS(approximate_spectrum(om, 1e-3, o), Error);
    }
}

TEST_CASE("phi basis") {
    auto gd = line_hat();
    const double w = kPi / 8;
    auto cube = make_cube(gd, {w});
    std::vector<double> xs;
    for (int k = -3; k <= 3; ++k) xs.push_back(2 * kPi / w * k);
    auto gam = cloud1(xs);

    SUBCASE("order one reproduces psi") {
        auto grid = build_grid(spectrum_of(gd, {cube.cell()}), GridPolicy{64, 16});
        auto psi = psi_basis(cube, gam, grid);
        auto phi = phi_basis(cube, {{0}}, sylvester_hadamard(0), gam, grid);
        CHECK((psi - phi).cwiseAbs().maxCoeff() < 1e-15);
    }
    for (unsigned n = 0; n <= 3; ++n) {
        CAPTURE(n);
        std::size_t order = std::size_t(1) << n;
        std::vector<std::vector<std::int64_t>> tiles;
        std::vector<Box> pieces;
        for (std::size_t k = 0; k < order; ++k) {
            tiles.push_back({std::int64_t(3 * k) - 4});
            pieces.push_back(tile(cube, tiles.back()));
        }
        auto grid = build_grid(spectrum_of(gd, pieces), GridPolicy{64, 16});
        auto phi = phi_basis(cube, tiles, sylvester_hadamard(n), gam, grid);
        CHECK(gram_deviation(phi) < 1e-8);
        double mstar = double(order) * cube.measure();
        for (long c = 0; c < phi.cols(); ++c) {
            auto v = unweighted(grid, phi.col(c));
            CHECK(v.cwiseAbs().maxCoeff() == doctest::Approx(1 / std::sqrt(mstar)).epsilon(1e-12));
        }
    }
    SUBCASE("cyclic duals are exact") {
        auto gc = cyclic_hat(16);
        auto c16 = make_cube(gc, {}, {}, {8});
        auto at = make_atlas(c16);
        auto pts = quasi_points(at, {BoxComponent::whole()});
        for (unsigned n = 0; n <= 3; ++n) {
            std::vector<std::vector<std::int64_t>> tiles;
            std::vector<Box> pieces;
            for (std::int64_t k = 0; k < (1 << n); ++k) {
                tiles.push_back({k});
                pieces.push_back(tile(c16, {k}));
            }
            auto grid = build_grid(spectrum_of(gc, pieces));
            auto phi = phi_basis(c16, tiles, sylvester_hadamard(n), pts, grid);
            CHECK(gram_deviation(phi) < 1e-10);
        }
    }
    CHECK_THROWS_AS(phi_basis(cube, {{0}, {1}, {2}}, sylvester_hadamard(1), gam,
                              build_grid(spectrum_of(gd, {cube.cell()}))),
                    Error);
}

TEST_CASE("coset representative choice keeps the basis orthonormal") {
    auto gc = dual(LcaGroup({ElementaryFactor::real_line(), ElementaryFactor::cyclic(12)}));
    auto cube = make_cube(gc, {1.0, 0}, {}, {0, 4});
    auto a0 = make_atlas(cube);
    auto a1 = make_atlas(cube, {0, 1});
    Box w{BoxComponent::interval(-20, 20), BoxComponent::whole()};
    auto p0 = quasi_points(a0, w), p1 = quasi_points(a1, w);
    REQUIRE(p0.size() == p1.size());
    CHECK(p0.coords != p1.coords);
    std::vector<std::vector<std::int64_t>> tiles{{0, 0}, {1, 1}};
    auto grid = build_grid(spectrum_of(gc, {tile(cube, tiles[0]), tile(cube, tiles[1])}), GridPolicy{64, 16});
    auto f0 = phi_basis(cube, tiles, sylvester_hadamard(1), p0, grid);
    auto f1 = phi_basis(cube, tiles, sylvester_hadamard(1), p1, grid);
    CHECK(gram_deviation(f0) < 1e-8);
    CHECK(gram_deviation(f1) < 1e-8);
    CHECK((f0 - f1).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("distance to the band-limited subspace") {
    auto gd = line_hat();
    auto cube = make_cube(gd, {1.0}, {}, {}, {0.0});
    std::vector<std::vector<std::int64_t>> tiles{{0}, {1}};
    auto star = spectrum_of(gd, {tile(cube, {0}), tile(cube, {1})});
    auto grid = build_grid(star, GridPolicy{64, 16});
    auto phi = phi_basis(cube, tiles, sylvester_hadamard(1), cloud1({0.0, 2 * kPi}), grid);
    double ms = haar(star);

    auto d0 = distance_to_subspace(grid, phi.col(1), spectrum_of(gd, {{BoxComponent::interval(-1, 3)}}), ms, 0, 0.5);
    CHECK(d0.distance == 0);

    // missing [1.5, 2]: q = 0.5 / 2pi
    double q = 0.5 / (2 * kPi);
    auto om = spectrum_of(gd, {{BoxComponent::interval(0, 1.5)}});
    auto d1 = distance_to_subspace(grid, phi.col(2), om, ms, q, 0.5);
    CHECK(d1.distance == doctest::Approx(std::sqrt(q / ms)).epsilon(1e-12));
    CHECK(d1.within_bound);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 2);
    for (int t = 0; t < 20; ++t) {
        double a = u(rng), b = u(rng);
        auto sub = spectrum_of(gd, {{BoxComponent::interval(std::min(a, b), std::max(a, b))}});
        long col = t % phi.cols();
        auto d = distance_to_subspace(grid, phi.col(col), sub, ms, ms - haar(sub), 0.5);
        double s = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double x = grid.nodes.coords[i];
            if (x < std::min(a, b) || x > std::max(a, b)) s += std::norm(phi(long(i), col));
        }
        CHECK(std::abs(d.distance - std::sqrt(s)) < 1e-8);
    }
}
