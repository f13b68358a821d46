#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "landau/errors.hpp"
#include "landau/frame.hpp"

using namespace landau;

namespace {

constexpr double kPi = std::numbers::pi;

LcaGroup line() { return LcaGroup({ElementaryFactor::real_line()}); }
Spectrum band(double half) { return Spectrum{dual(line()), {{BoxComponent::interval(-half, half)}}}; }
Box win(double lo, double hi) { return {BoxComponent::interval(lo, hi)}; }

DiscreteSet spaced(double step, double offset = 0) {
    return lattice_set(line(), LatticeGenerator{{step}, {0}, {{offset}}}, step);
}

DiscreteSet explicit_line(const std::vector<double>& xs, double sep) {
    ExplicitList e;
    for (double x : xs) e.points.push_back({x});
    return DiscreteSet{line(), e, sep};
}

double sinc_gram(double d) { return d == 0 ? 1.0 : std::sin(kPi * d) / (kPi * d); }

}  // namespace

TEST_CASE("synthesized systems") {
    auto s = synthesize_system(canonical_lattice(line()), win(-2, 2), band(kPi));
    REQUIRE(s.size() == 5);
    for (long j = 0; j < 5; ++j) CHECK(s.vectors.col(j).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));

    auto e = synthesize_system(canonical_lattice(line()), win(0.2, 0.8), band(kPi));
    CHECK(e.size() == 0);
    CHECK(e.vectors.cols() == 0);

    auto h = synthesize_system(spaced(0.5), win(0, 1), band(kPi));
    REQUIRE(h.size() == 3);
    auto g = exact_gram(h);
    Eigen::MatrixXcd q = h.vectors.adjoint() * h.vectors;
    for (long i = 0; i < 3; ++i)
        for (long j = 0; j < 3; ++j) {
            double d = h.points.coords[std::size_t(j)] - h.points.coords[std::size_t(i)];
            CHECK(std::abs(g(i, j) - sinc_gram(d)) < 1e-12);
            CHECK(std::abs(q(i, j) - sinc_gram(d)) < 1e-4);
        }
}

TEST_CASE("frame bounds of lattices on the real line") {
    auto z = frame_bounds(synthesize_system(canonical_lattice(line()), win(-32, 32), band(kPi)));
    CHECK(std::abs(z.lower - 1) < 0.02);
    CHECK(std::abs(z.upper - 1) < 0.02);
    CHECK(z.window_level);

    auto h = frame_bounds(synthesize_system(spaced(0.5), win(-32, 32), band(kPi)));
    CHECK(std::abs(h.lower - 2) < 0.04);
    CHECK(std::abs(h.upper - 2) < 0.04);

    auto t = frame_bounds(synthesize_system(spaced(2), win(-64, 64), band(kPi)));
    CHECK(t.lower < 0.05);
    CHECK(t.lower <= t.upper);
}

TEST_CASE("riesz bounds") {
    auto z = riesz_bounds(synthesize_system(canonical_lattice(line()), win(-10, 10), band(kPi)));
    CHECK(z.lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(z.upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(z.dual_norm_sup == doctest::Approx(1.0).epsilon(1e-10));

    // Gram of 2Z vanishes off the diagonal
    auto t = riesz_bounds(synthesize_system(spaced(2), win(-20, 20), band(kPi)));
    CHECK(t.lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.upper == doctest::Approx(1.0).epsilon(1e-12));

    // merging points: eigenvalues 1 -+ sinc(delta)
    double prev = 1;
    for (double d : {0.5, 0.1, 0.01, 0.001}) {
        auto r = riesz_bounds(synthesize_system(explicit_line({0, d}, d), win(-1, 1), band(kPi)));
        CHECK(r.lower == doctest::Approx(1 - sinc_gram(d)).epsilon(1e-6));
        CHECK(r.lower < prev);
        prev = r.lower;
    }
}

TEST_CASE("adding a point never decreases the frame bounds") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-8, 8);
    std::vector<double> xs;
    for (int i = 0; i < 12; ++i) xs.push_back(u(rng));
    auto sys = synthesize_system(explicit_line(xs, 1e-3), win(-8, 8), band(kPi));
    auto grid = sys.grid;
    double pa = 0, pb = 0;
    for (std::size_t k = 1; k <= xs.size(); ++k) {
        PointCloud p;
        p.dim = 1;
        p.coords.assign(xs.begin(), xs.begin() + long(k));
        auto s = synthesize_system(line(), p, band(kPi), grid);
        s.window = win(-8, 8);
        auto f = frame_bounds(s);
        CHECK(f.lower >= pa - 1e-12);
        CHECK(f.upper >= pb - 1e-12);
        pa = f.lower;
        pb = f.upper;
    }
}

TEST_CASE("scaling covariance of the Gram spectrum") {
    std::vector<double> xs{-3, -1.7, -0.2, 0.9, 2.4, 3.3};
    const double c = 1.7;
    std::vector<double> cx;
    for (double x : xs) cx.push_back(c * x);
    auto a = riesz_bounds(synthesize_system(explicit_line(cx, 0.1), win(-10, 10), band(kPi)));
    auto b = riesz_bounds(synthesize_system(explicit_line(xs, 0.1), win(-10, 10), band(c * kPi)));
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(b.gram_spectrum[i] == doctest::Approx(c * a.gram_spectrum[i]).epsilon(1e-10));
}

TEST_CASE("dual frames") {
    SUBCASE("orthonormal system") {
        auto s = synthesize_system(canonical_lattice(line()), win(-6, 6), band(kPi));
        auto h = dual_frame(s);
        CHECK((h - s.vectors).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("tight frame with bound 2") {
        LcaGroup g({ElementaryFactor::cyclic(8)}, {0.5});
        Spectrum om{dual(g), {{BoxComponent::whole()}}};
        auto s = synthesize_system(lattice_set(g, LatticeGenerator{{}, {1}, {{0}}}, 1), {BoxComponent::whole()}, om);
        auto f = frame_bounds(s);
        CHECK(f.lower == doctest::Approx(2.0));
        CHECK(f.upper == doctest::Approx(2.0));
        auto h = dual_frame(s, &f);
        CHECK((h - s.vectors / 2).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("perturbed lattice reconstruction") {
        DiscreteSet p{line(), PerturbedLattice{LatticeGenerator{{0.8}, {0}, {{0}}}, 0.1, 3}, 0.6};
        auto s = synthesize_system(p, win(-12, 12), band(kPi));
        auto h = dual_frame(s);
        std::mt19937_64 rng(9);
        std::normal_distribution<double> n;
        for (int t = 0; t < 10; ++t) {
            Eigen::VectorXcd c(long(s.size()));
            for (long i = 0; i < c.size(); ++i) c[i] = {n(rng), n(rng)};
            Eigen::VectorXcd f = s.vectors * c;
            Eigen::VectorXcd rec = h * (s.vectors.adjoint() * f);
            CHECK((rec - f).norm() / f.norm() < 1e-6);
        }
    }
    SUBCASE("rejects a degenerate frame") {
        FrameReport bad;
        bad.lower = 0;
        bad.upper = 1;
        auto s = synthesize_system(canonical_lattice(line()), win(-3, 3), band(kPi));
        CHECK_THROWS_AS(dual_frame(s, &bad), Error);
    }
}

TEST_CASE("concentration operator") {
    LcaGroup g({ElementaryFactor::cyclic(8)});
    Spectrum om{dual(g), {{BoxComponent::whole()}}};
    auto grid = build_grid(om);
    auto fam = [&](std::vector<double> xs) {
        PointCloud p;
        p.dim = 1;
        p.coords = xs;
        return synthesize_system(g, p, om, grid).vectors;
    };
    auto same = concentration_operator(fam({0, 1, 2}), fam({0, 1, 2, 5}));
    CHECK(same.trace == doctest::Approx(3.0));
    for (double e : same.eigenvalues) CHECK(e == doctest::Approx(1.0));
    auto perp = concentration_operator(fam({0, 1, 2}), fam({3, 4}));
    CHECK(std::abs(perp.trace) < 1e-12);
    CHECK(perp.rank_estimate == 0);

    // random instances against the trace expansion sum <T g, g~>
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int t = 0; t < 20; ++t) {
        auto grid2 = build_grid(band(kPi), GridPolicy{20, 8});
        PointCloud a, b;
        a.dim = b.dim = 1;
        for (int i = 0; i < 6; ++i) a.coords.push_back(u(rng));
        for (int i = 0; i < 9; ++i) b.coords.push_back(u(rng));
        auto ga = synthesize_system(line(), a, band(kPi), grid2).vectors;
        auto hb = synthesize_system(line(), b, band(kPi), grid2).vectors;
        auto rep = concentration_operator(ga, hb);
        Eigen::MatrixXcd qb = orthonormal_span(hb);
        Eigen::MatrixXcd dualg = ga * (ga.adjoint() * ga).inverse();
        std::complex<double> tr = 0;
        for (long i = 0; i < ga.cols(); ++i) {
            Eigen::VectorXcd tg = qb * (qb.adjoint() * ga.col(i));  // P Q P g = P Q g
            Eigen::MatrixXcd up = orthonormal_span(ga);
            tg = up * (up.adjoint() * tg);
            tr += dualg.col(i).dot(tg);
        }
        CHECK(std::abs(tr.real() - rep.trace) < 1e-8);
        double sum = 0;
        for (double e : rep.eigenvalues) {
            CHECK(e >= 0);
            CHECK(e <= 1 + 1e-8);
            sum += e;
        }
        CHECK(std::abs(sum - rep.trace) < 1e-8);
        CHECK(rep.trace_le_rank);
    }
}

TEST_CASE("comparison of an orthonormal system with itself") {
    auto s = synthesize_system(canonical_lattice(line()), win(-12, 12), band(kPi));
    auto h = dual_frame(s);
    Box l = win(-4, 4);
    PointCloud gp;
    gp.dim = 1;
    std::vector<long> cols;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(s.points.coords[i]) <= 4) {
            gp.coords.push_back(s.points.coords[i]);
            cols.push_back(long(i));
        }
    Eigen::MatrixXcd fam(s.vectors.rows(), long(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) fam.col(long(j)) = s.vectors.col(cols[j]);
    auto r = rs_comparison(fam, gp, 1, s, h, 1e-6, expansion_box(line(), 0), l);
    CHECK(r.hypothesis_holds);
    CHECK(r.max_distance < 1e-9);
    CHECK(r.c == doctest::Approx(1.0));
    CHECK(r.lambda_count == 9);
    CHECK(r.lhs == doctest::Approx(9.0).epsilon(1e-5));
    CHECK(r.conclusion_holds);
    CHECK(r.chain_holds);
    CHECK(r.trace == doctest::Approx(9.0));

    // undersampled comparison set: hypothesis fails, reported with the witness
    auto s2 = synthesize_system(spaced(2), win(-12, 12), band(kPi));
    auto h2 = dual_frame(s2);
    auto r2 = rs_comparison(fam, gp, 1, s2, h2, 0.3, expansion_box(line(), 4), l);
    CHECK_FALSE(r2.hypothesis_holds);
    CHECK(r2.failing_gamma.size() == 1);
}

TEST_CASE("homogeneous approximation radius") {
    auto s = synthesize_system(canonical_lattice(line()), win(-20, 20), band(kPi));
    auto h = dual_frame(s);
    auto sched = ExpansionSchedule{{0, 1, 2, 3, 4, 5, 6, 7, 8}};
    auto col = [&](double x) {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.points.coords[i] == x) return Eigen::VectorXcd(s.vectors.col(long(i)));
        FAIL("missing point");
        return Eigen::VectorXcd();
    };
    auto r0 = hap_radius(s, h, col(0), 1e-6, {{0.0}}, sched);
    CHECK(r0.found);
    CHECK(r0.radius == 0);
    CHECK(r0.profile[0].second < 1e-9);

    for (int m : {1, 3}) {
        Eigen::VectorXcd f = Eigen::VectorXcd::Zero(s.vectors.rows());
        for (int k = -m; k <= m; ++k) f += col(k) * (1.0 / (1 + std::abs(k)));
        f /= f.norm();
        auto r = hap_radius(s, h, f, 1e-6, {{0.0}}, sched);
        CHECK(r.found);
        CHECK(r.radius == m);
        auto shifted = hap_radius(s, h, f, 1e-6, {{5.0}, {-3.0}}, sched);
        CHECK(shifted.radius == r.radius);
    }
    auto none = hap_radius(s, h, col(0), 1e-6, {{0.5}}, ExpansionSchedule{{0}});
    CHECK_FALSE(none.found);
}

TEST_CASE("carleson constant") {
    CarlesonOptions o;
    o.trials = 100;
    auto z = carleson_constant(canonical_lattice(line()), win(-24, 24), band(kPi), o);
    CHECK(std::abs(z.empirical - 1) < 0.02);
    CHECK(z.empirical <= z.exact + 1e-9);
    CHECK(z.exact <= z.analytic);

    auto two = lattice_set(line(), LatticeGenerator{{1}, {0}, {{0}, {0.5}}}, 0.5);
    auto d = carleson_constant(two, win(-24, 24), band(kPi), o);
    CHECK(std::abs(d.empirical - 2) < 0.04);
    CHECK(d.exact <= d.analytic);

    // f orthogonal to every e_lambda of a finite set
    auto s = synthesize_system(explicit_line({-1, 0.3, 2}, 0.5), win(-3, 3), band(kPi));
    Eigen::VectorXcd f = random_function(Eigen::MatrixXcd::Identity(s.vectors.rows(), s.vectors.rows()), 4);
    Eigen::MatrixXcd q = orthonormal_span(s.vectors);
    f -= q * (q.adjoint() * f);
    CHECK(sampling_ratio(s, f) < 1e-20);
}

TEST_CASE("carleson analytic bound is an upper bound on the integers") {
    LcaGroup z({ElementaryFactor::integers()});
    Spectrum arc{dual(z), {{BoxComponent::interval(-1, 1)}}};
    double bound = carleson_analytic_bound(z, arc, 1, 0.25);
    auto s = synthesize_system(canonical_lattice(z), win(-30, 30), arc);
    auto r = riesz_bounds(s);
    CHECK(r.upper <= bound);
    LcaGroup c({ElementaryFactor::cyclic(12)});
    Spectrum pts{dual(c), {{BoxComponent::point_set({0, 1, 5})}}};
    double bc = carleson_analytic_bound(c, pts, 1, 0.25);
    auto sc = synthesize_system(canonical_lattice(c), {BoxComponent::whole()}, pts);
    CHECK(riesz_bounds(sc).upper <= bc + 1e-12);
}

TEST_CASE("perturbation bound") {
    auto z = canonical_lattice(line());
    auto zero = perturbation_bound(z, win(-20, 20), band(kPi), [](const std::vector<double>& x) { return x; }, 0.0, 10);
    CHECK(zero.bound == 0);
    double prev = 0;
    for (double d : {0.04, 0.02, 0.01}) {
        auto r = perturbation_bound(z, win(-20, 20), band(kPi), [d](const std::vector<double>& x) { return std::vector<double>{x[0] + d}; }, d, 20);
        CHECK(r.bound <= 4 * std::pow(std::sin(kPi * d / 2), 2) + 1e-12);
        if (prev > 0) CHECK(prev / r.bound >= 3);
        prev = r.bound;
    }
    CHECK_THROWS_AS(perturbation_bound(z, win(-5, 5), band(kPi), [](const std::vector<double>& x) { return std::vector<double>{x[0] + 0.2}; }, 0.1, 5),
                    Error);
}
