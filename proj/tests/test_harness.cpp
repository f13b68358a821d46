#include "doctest.h"

#include <cmath>
#include <numbers>

#include "landau/errors.hpp"
#include "landau/harness.hpp"

using namespace landau;

namespace {

constexpr double kPi = std::numbers::pi;

LcaGroup line() { return LcaGroup({ElementaryFactor::real_line()}); }

Spectrum band(double a) { return Spectrum{dual(line()), {{BoxComponent::interval(-a, a)}}}; }

DiscreteSet lattice(double step) { return lattice_set(line(), LatticeGenerator{{step}, {0}, {{0}}}, step); }

Scenario scenario(const char* name, double step, Mode mode) {
    Scenario s;
    s.name = name;
    s.set = lattice(step);
    s.spectrum = band(kPi);
    s.mode = mode;
    return s;
}

std::vector<TrendRow> rows(std::initializer_list<double> v) {
    std::vector<TrendRow> out;
    double w = 8;
    for (double b : v) {
        out.push_back({w, b, 0});
        w *= 2;
    }
    return out;
}

}  // namespace

TEST_CASE("decay rule") {
    CHECK(is_decaying(rows({0.013, 6e-7, 3e-11, 0, 0})));
    CHECK(is_decaying(rows({1.0, 0.04})));
    CHECK_FALSE(is_decaying(rows({1.0, 0.06})));
    CHECK_FALSE(is_decaying(rows({1.0, 0.999, 0.9996})));
    CHECK(is_decaying(rows({0, 0})));
    CHECK_FALSE(is_decaying(rows({1.0})));
}

TEST_CASE("sampling necessity verdicts") {
    SUBCASE("undersampled lattice collapses") {
        auto r = verify_sampling_necessity(scenario("2Z", 2, Mode::Sampling));
        CHECK(r.nyquist == doctest::Approx(1));
        CHECK(r.uniform.lower == doctest::Approx(0.5).epsilon(0.02));
        CHECK_FALSE(r.density_meets_nyquist);
        CHECK(r.decaying);
        CHECK(r.trend.front().bound >= 10 * r.trend.back().bound);
        CHECK(r.trend.back().bound < 0.05);
        CHECK(r.verdict == NecessityVerdict::Consistent);
    }
    SUBCASE("critical lattice") {
        auto s = scenario("Z", 1, Mode::Sampling);
        s.windows = {8, 16, 32};
        auto r = verify_sampling_necessity(s);
        CHECK(r.density_meets_nyquist);
        CHECK(r.bounded_below);
        CHECK(r.comparison.status == Verdict::Holds);
        CHECK(r.verdict == NecessityVerdict::Consistent);
    }
    SUBCASE("contradiction is flagged") {
        auto s = scenario("Z", 1, Mode::Sampling);
        s.windows = {8, 16, 32};
        NecessityOptions o;
        o.density_tolerance = -0.5;  // demand D- >= 1.5
        auto r = verify_sampling_necessity(s, o);
        CHECK(r.verdict == NecessityVerdict::Violated);
    }
}

TEST_CASE("interpolation necessity verdicts") {
    auto r = verify_interpolation_necessity(scenario("0.5Z", 0.5, Mode::Interpolation));
    CHECK(r.uniform.upper == doctest::Approx(2).epsilon(0.02));
    CHECK(r.decaying);
    CHECK(r.verdict == NecessityVerdict::Consistent);

    auto s = scenario("Z", 1, Mode::Interpolation);
    s.windows = {8, 16, 32};
    auto q = verify_interpolation_necessity(s);
    CHECK(q.bounded_below);
    CHECK(q.trend.back().bound == doctest::Approx(1).epsilon(1e-6));
    CHECK(q.verdict == NecessityVerdict::Consistent);
}

TEST_CASE("batch isolates failing scenarios") {
    auto good = scenario("2Z", 2, Mode::Sampling);
    good.windows = {8, 16, 32, 64};
    auto bad = good;
    bad.name = "bad";
    bad.spectrum.pieces.clear();
    auto b = run_scenarios({bad, good});
    REQUIRE(b.outcomes.size() == 2);
    CHECK(b.outcomes[0].error);
    CHECK_FALSE(b.outcomes[0].message.empty());
    CHECK_FALSE(b.outcomes[1].error);
    CHECK(b.errors == 1);
    CHECK(b.consistent == 1);
    CHECK(b.exit_status() == 0);
}

TEST_CASE("replay of the canonical pair") {
    auto r = replay_proof_pipeline(canonical_scenario());
    CHECK(r.completed);
    CHECK(r.stages.size() == 6);
    CHECK(r.slack >= 0);
    for (const auto& st : r.stages) CHECK_MESSAGE(st.passed, st.name);
    // the exponentials are their own duals, so K = {0} suffices
    CHECK(r.stages[3].values.at("radius") == 0);
}

TEST_CASE("replay stops on an undersampled set") {
    auto r = replay_proof_pipeline(undersampled_scenario());
    CHECK_FALSE(r.completed);
    CHECK(r.hypothesis_failure);
    CHECK(r.failed_stage == "hap_radius");
}

TEST_CASE("replay rejects non-real groups") {
    Scenario s;
    s.set = canonical_lattice(LcaGroup({ElementaryFactor::cyclic(4)}));
    s.spectrum = Spectrum{dual(s.set.group), {{BoxComponent::point_set({0, 1})}}};
    CHECK_THROWS_AS(replay_proof_pipeline(s), Error);
}

TEST_CASE("eigenvalue counts track a h") {
    auto e = eigenvalue_count_experiment(0.5, {16, 32, 64}, 0.5);
    REQUIRE(e.rows.size() == 3);
    for (const auto& r : e.rows) CHECK(std::abs(r.residual) <= r.envelope);
    CHECK(e.within_envelope);
    CHECK(e.exponent < 0.2);
    CHECK_THROWS_AS(eigenvalue_count_experiment(-1, {16}, 0.5), Error);
}

TEST_CASE("trace chain on random instances") {
    std::size_t verified = 0, attempts = 0;
    for (std::uint64_t seed = 1; verified < 100 && attempts < 300; ++seed, ++attempts) {
        auto in = rs_random_instance(seed);
        CHECK(in.grid_dimension <= 200);
        CHECK(in.record.gamma_count <= 20);
        if (!in.verified) continue;
        ++verified;
        const auto& r = in.record;
        CHECK(r.c == doctest::Approx(1).epsilon(1e-8));
        CHECK(r.lhs <= r.trace + 1e-8);
        CHECK(r.trace <= double(r.rank) + 1e-8);
        CHECK(r.rank <= r.lambda_count);
        CHECK(r.chain_holds);
        CHECK(r.conclusion_holds);
    }
    CHECK(verified == 100);
}

TEST_CASE("random instances are reproducible") {
    auto a = rs_random_instance(42), b = rs_random_instance(42);
    CHECK(a.verified == b.verified);
    CHECK(a.record.trace == b.record.trace);
    CHECK(a.record.lambda_count == b.record.lambda_count);
    CHECK(a.k_radius == b.k_radius);
}
