#include "landau/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "landau/errors.hpp"

namespace landau {

namespace {

constexpr double kPi = std::numbers::pi;

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

LcaGroup real_line() { return LcaGroup({ElementaryFactor::real_line()}); }

Spectrum band(double lo, double hi) {
    return Spectrum{dual(real_line()), {{BoxComponent::interval(lo, hi)}}};
}

std::vector<double> origin_of(const LcaGroup& g) { return std::vector<double>(g.rank(), 0.0); }

TrendRow trend_row(const Scenario& s, double w, bool sampling) {
    GridPolicy policy;
    policy.node_budget = s.grid_budget;
    auto sys = synthesize_system(s.set, cube_window(s.set.group, origin_of(s.set.group), w), s.spectrum, policy);
    auto fr = sampling ? frame_bounds(sys) : riesz_bounds(sys);
    return {w, fr.lower, sys.size()};
}

bool bounded(const std::vector<TrendRow>& t) {
    if (t.empty()) return false;
    double first = t.front().bound, last = t.back().bound;
    return last > 1e-8 && last >= 0.5 * first;
}

std::vector<Box> comparison_windows(const Scenario& s) {
    return default_test_windows(s.set.group, s.windows);
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::Sampling ? "sampling" : "interpolation"; }

const char* to_string(NecessityVerdict v) {
    switch (v) {
        case NecessityVerdict::Consistent: return "consistent";
        case NecessityVerdict::Violated: return "violated";
        case NecessityVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

bool is_decaying(const std::vector<TrendRow>& t, const NecessityOptions& opt) {
    if (t.size() < 2) return false;
    double first = t.front().bound, last = std::max(t.back().bound, 0.0);
    if (first <= 1e-12) return last <= 1e-12;
    return last * opt.decay_factor <= first && last < opt.decay_floor * first;
}

NecessityReport verify_sampling_necessity(const Scenario& s, const NecessityOptions& opt) {
    validate_set(s.set);
    validate_spectrum(s.spectrum);
    NecessityReport r;
    r.scenario = s.name;
    r.mode = Mode::Sampling;
    r.nyquist = haar(s.spectrum);
    r.beurling = beurling_density(s.set, s.windows);
    r.uniform = uniform_densities(s.set);
    r.comparison = comparison_check(canonical_lattice(s.set.group), r.nyquist, s.set, 1, s.epsilon,
                                    comparison_windows(s), ExpansionSchedule::doubling(1, 64));
    for (double w : s.windows) r.trend.push_back(trend_row(s, w, true));
    r.decaying = is_decaying(r.trend, opt);
    r.bounded_below = !r.decaying && bounded(r.trend);
    r.density_meets_nyquist = r.uniform.lower >= r.nyquist * (1 - opt.density_tolerance);

    if (r.density_meets_nyquist && r.bounded_below) {
        r.verdict = NecessityVerdict::Consistent;
        r.note = "D- reaches the Nyquist density and A stays bounded below";
    } else if (!r.density_meets_nyquist && r.decaying) {
        r.verdict = NecessityVerdict::Consistent;
        r.note = "D- is below the Nyquist density and A collapses as the window grows";
    } else if (!r.density_meets_nyquist && r.bounded_below) {
        r.verdict = NecessityVerdict::Violated;
        r.note = "A stays bounded below although D- is below the Nyquist density";
    } else {
        r.verdict = NecessityVerdict::Inconclusive;
        r.note = r.density_meets_nyquist ? "density allows sampling but A does not stabilise"
                                         : "A neither stabilises nor collapses";
    }
    return r;
}

NecessityReport verify_interpolation_necessity(const Scenario& s, const NecessityOptions& opt) {
    validate_set(s.set);
    validate_spectrum(s.spectrum);
    NecessityReport r;
    r.scenario = s.name;
    r.mode = Mode::Interpolation;
    r.nyquist = haar(s.spectrum);
    r.beurling = beurling_density(s.set, s.windows);
    r.uniform = uniform_densities(s.set);
    r.comparison = comparison_check(s.set, 1, canonical_lattice(s.set.group), r.nyquist, s.epsilon,
                                    comparison_windows(s), ExpansionSchedule::doubling(1, 64));
    for (double w : s.windows) r.trend.push_back(trend_row(s, w, false));
    r.decaying = is_decaying(r.trend, opt);
    r.bounded_below = !r.decaying && bounded(r.trend);
    r.density_meets_nyquist = r.uniform.upper <= r.nyquist * (1 + opt.density_tolerance);

    if (r.density_meets_nyquist && r.bounded_below) {
        r.verdict = NecessityVerdict::Consistent;
        r.note = "D+ stays below the Nyquist density and a stays bounded below";
    } else if (!r.density_meets_nyquist && r.decaying) {
        r.verdict = NecessityVerdict::Consistent;
        r.note = "D+ exceeds the Nyquist density and a collapses as the window grows";
    } else if (!r.density_meets_nyquist && r.bounded_below) {
        r.verdict = NecessityVerdict::Violated;
        r.note = "a stays bounded below although D+ exceeds the Nyquist density";
    } else {
        r.verdict = NecessityVerdict::Inconclusive;
        r.note = r.density_meets_nyquist ? "density allows interpolation but a does not stabilise"
                                         : "a neither stabilises nor collapses";
    }
    return r;
}

// ---------------------------------------------------------------------------
// replay

namespace {

double quasi_step(const CubeSpec& c) {
    double step = 0;
    for (std::size_t i = 0; i < c.dual_group.rank(); ++i)
        if (c.dual_group.factor(i).kind == FactorKind::RealLine) step = std::max(step, kPi / c.half_width[i]);
    return step;
}

// Tiles meeting the hull of both spectra, as one spectrum with aligned pieces.
Spectrum tile_cover(const CubeSpec& cube, const Spectrum& a, const Spectrum& b) {
    const auto& dg = cube.dual_group;
    Box hull(dg.rank(), BoxComponent::whole());
    for (std::size_t i = 0; i < dg.rank(); ++i) {
        if (dg.factor(i).kind != FactorKind::RealLine) continue;
        double lo = 1e300, hi = -1e300;
        for (const auto* s : {&a, &b})
            for (const auto& p : s->pieces)
                for (const auto& iv : p[i].intervals) {
                    lo = std::min(lo, iv.lo);
                    hi = std::max(hi, iv.hi);
                }
        // shrink a hair so tiles that only touch the hull are left out
        double eps = 1e-9 * std::max(1.0, hi - lo);
        hull[i] = BoxComponent::interval(lo + eps, hi - eps);
    }
    Spectrum out{dg, {}};
    for (const auto& idx : tiles_meeting(cube, hull)) out.pieces.push_back(tile(cube, idx));
    return out;
}

struct StageGuard {
    ReplayReport& rep;
    bool stop(StageResult st, bool hypothesis) {
        rep.failed_stage = st.name;
        rep.hypothesis_failure = hypothesis;
        rep.stages.push_back(std::move(st));
        return false;
    }
};

PointCloud single_origin(const LcaGroup& g) {
    PointCloud p;
    p.dim = g.rank();
    p.coords.assign(g.rank(), 0.0);
    return p;
}

double orthonormality_error(const Eigen::MatrixXcd& m) {
    if (m.cols() == 0) return 0;
    return (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

ReplayReport replay_proof_pipeline(const Scenario& sc) {
    ReplayReport rep;
    rep.scenario = sc.name;
    StageGuard guard{rep};
    const auto& g = sc.set.group;
    const auto& omega = sc.spectrum;
    const double eps = sc.epsilon;
    validate_set(sc.set);
    validate_spectrum(omega);
    for (std::size_t i = 0; i < g.rank(); ++i)
        if (g.factor(i).kind != FactorKind::RealLine)
            fail(ErrorKind::NotSupported, "replay_proof_pipeline: only products of real lines are replayed");

    // 1. tiles
    StageResult st{"approximate_spectrum", false, "", {}};
    SpectrumApproximation app;
    try {
        ApproximationOptions ao;
        ao.initial_width = sc.tile_width;
        app = approximate_spectrum(omega, eps, ao);
    } catch (const Error& e) {
        st.message = e.what();
        guard.stop(st, false);
        return rep;
    }
    const double mu_star = haar(app.omega_star);
    st.passed = true;
    st.values = {{"n", double(app.n)},       {"missing", app.missing},     {"excess", app.excess},
                 {"mu_star", mu_star},       {"mu_omega", haar(omega)},    {"refinements", double(app.refinements)},
                 {"tile_width", 2 * app.cube.half_width[0]}};
    rep.stages.push_back(st);

    // 2. basis
    st = {"phi_basis", false, "", {}};
    const double step = quasi_step(app.cube);
    const double l = sc.l_radius > 0 ? sc.l_radius : 2 * step;
    const Box lbox = expansion_box(g, l);
    auto atlas = make_atlas(app.cube);
    auto gammas = quasi_points(atlas, lbox);
    auto hadamard = sylvester_hadamard_order(app.n);
    ExpansionSchedule hap_sched = sc.hap_schedule.radii.empty() ? ExpansionSchedule::doubling(1, 128) : sc.hap_schedule;
    const double r_max = *std::max_element(hap_sched.radii.begin(), hap_sched.radii.end());
    const double r2_max = 4 * step;
    const double w_lambda = l + r_max + r2_max + 1;
    const Box lambda_window = expansion_box(g, w_lambda);

    GridPolicy base;
    base.node_budget = sc.grid_budget;
    auto cover = tile_cover(app.cube, omega, app.omega_star);
    auto grid = build_grid(cover, policy_for_extent(2 * w_lambda, base));
    Eigen::MatrixXcd phi;
    try {
        phi = phi_basis(app.cube, app.tiles, hadamard, gammas, grid);
    } catch (const Error& e) {
        st.message = e.what();
        guard.stop(st, false);
        return rep;
    }
    const double ortho = orthonormality_error(phi);
    st.passed = ortho < 1e-8;
    st.values = {{"gamma_count", double(gammas.size())}, {"columns", double(phi.cols())},
                 {"orthonormality_error", ortho},        {"grid_nodes", double(grid.size())},
                 {"l_radius", l}};
    if (!st.passed) {
        st.message = "phi family is not orthonormal on the grid";
        guard.stop(st, false);
        return rep;
    }
    rep.stages.push_back(st);

    // 3. phi chi_Omega stays near phi
    st = {"distance_to_subspace", false, "", {}};
    double worst = 0, bound = 0;
    bool within = true, half = true;
    for (Idx c = 0; c < phi.cols(); ++c) {
        auto d = distance_to_subspace(grid, phi.col(c), omega, mu_star, app.missing + app.excess, eps);
        worst = std::max(worst, d.distance);
        bound = d.bound;
        within = within && d.within_bound;
        half = half && d.below_half_epsilon;
    }
    st.passed = within && half;
    st.values = {{"max_distance", worst}, {"bound", bound}, {"half_epsilon", eps / 2}};
    if (!st.passed) {
        st.message = within ? "distance is not below eps/2" : "distance exceeds the measure bound";
        guard.stop(st, true);
        return rep;
    }
    rep.stages.push_back(st);

    // 4. homogeneous approximation
    st = {"hap_radius", false, "", {}};
    auto lam = synthesize_system(g, enumerate(sc.set, lambda_window), omega, grid);
    lam.window = lambda_window;
    Eigen::MatrixXcd h = dual_frame(lam);
    Eigen::MatrixXcd f0 = indicator(grid, omega).asDiagonal() *
                          phi_basis(app.cube, app.tiles, hadamard, single_origin(g), grid);
    std::vector<std::vector<double>> xs;
    for (std::size_t i = 0; i < gammas.size(); ++i) xs.push_back(gammas.point(i));
    auto hap = hap_radius(lam, h, f0, eps / 2, xs, hap_sched);
    st.values = {{"lambda_count", double(lam.size())}, {"lambda_window", w_lambda}};
    for (const auto& [rad, d] : hap.profile) {
        char key[48];
        std::snprintf(key, sizeof key, "distance_at_%g", rad);
        st.values[key] = d;
    }
    if (!hap.found) {
        st.message = "no radius in the schedule brings every modulate within eps/2 of the dual frame span";
        guard.stop(st, true);
        return rep;
    }
    st.passed = true;
    st.values["radius"] = hap.radius;
    rep.stages.push_back(st);

    // 5. trace comparison on L
    st = {"rs_comparison", false, "", {}};
    auto rs = rs_comparison(phi, gammas, app.n, lam, h, eps, hap.k, lbox);
    st.values = {{"max_distance", rs.max_distance}, {"c", rs.c},         {"lhs", rs.lhs},
                 {"rhs", rs.rhs},                   {"trace", rs.trace}, {"rank", double(rs.rank)}};
    st.passed = rs.hypothesis_holds && rs.conclusion_holds && rs.chain_holds;
    if (!st.passed) {
        st.message = !rs.hypothesis_holds ? "hypothesis fails on Gamma cap L" : "cardinality chain broken";
        guard.stop(st, !rs.hypothesis_holds);
        return rep;
    }
    rep.stages.push_back(st);

    // 6. Gamma0' with density mu(Omega), via the tiling of the canonical spectrum of the same measure
    st = {"gamma0_prime_chain", false, "", {}};
    const double mu = haar(omega);
    const double side = std::pow(mu, 1.0 / double(g.rank()));
    Spectrum omega_p{omega.dual_group, {Box(g.rank(), BoxComponent::interval(-kPi * side, kPi * side))}};
    ApproximationOptions ao2;
    ao2.initial_width.assign(g.rank(), 2 * app.cube.half_width[0]);
    SpectrumApproximation app2;
    try {
        app2 = approximate_spectrum(omega_p, eps, ao2);
    } catch (const Error& e) {
        st.message = e.what();
        guard.stop(st, false);
        return rep;
    }
    const double step2 = quasi_step(app2.cube);
    auto gamma0 = scaled_reference_lattice(g, mu);
    auto g0_in_l = enumerate(gamma0, lbox);
    auto atlas2 = make_atlas(app2.cube);
    auto cover2 = tile_cover(app2.cube, omega_p, app2.omega_star);
    auto grid2 = build_grid(cover2, policy_for_extent(2 * (l + r2_max + step2), base));
    auto gam2 = quasi_points(atlas2, expansion_box(g, l + r2_max + step2));
    auto phi2 = phi_basis(app2.cube, app2.tiles, sylvester_hadamard_order(app2.n), gam2, grid2);
    auto e0 = synthesize_system(g, g0_in_l, omega_p, grid2);
    Eigen::MatrixXcd e0n = e0.vectors / std::sqrt(haar(omega_p));

    double r2 = -1, d2 = 0;
    for (double rad : ExpansionSchedule::doubling(step2 / 2, r2_max).radii) {
        Box k2 = expansion_box(g, rad);
        double w = 0;
        for (std::size_t i = 0; i < g0_in_l.size(); ++i) {
            std::vector<Idx> cols;
            auto shifted = translate(g, k2, g0_in_l.point(i));
            for (std::size_t p = 0; p < gam2.size(); ++p)
                if (box_contains(g, shifted, gam2.point(p)))
                    for (std::size_t j = 0; j < app2.n; ++j) cols.push_back(ix(p * app2.n + j));
            Eigen::MatrixXcd sub(phi2.rows(), ix(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c) sub.col(ix(c)) = phi2.col(cols[c]);
            w = std::max(w, cols.empty() ? e0n.col(ix(i)).norm() : distance_to_span(sub, e0n.col(ix(i))));
        }
        d2 = w;
        if (w < eps) {
            r2 = rad;
            break;
        }
    }
    st.values = {{"gamma0_count", double(g0_in_l.size())}, {"k_prime_distance", d2}, {"n_prime", double(app2.n)}};
    if (r2 < 0) {
        st.message = "Gamma0' is not within eps of the phi' span for any radius";
        guard.stop(st, true);
        return rep;
    }
    const Box lk2 = expansion_box(g, l + r2);
    auto gam_lk2 = quasi_points(atlas, lk2);
    const double mid = double(app2.n) * double(quasi_points(atlas2, lk2).size());
    // the first comparison again, now over L K'
    auto phi_big = phi_basis(app.cube, app.tiles, hadamard, gam_lk2, grid);
    auto rs2 = rs_comparison(phi_big, gam_lk2, app.n, lam, h, eps, hap.k, lk2);
    const double lhs = (1 - eps) * double(g0_in_l.size());
    const double rhs = double(rs2.lambda_count) / (1 - eps);
    rep.slack = rhs - lhs;
    st.values.insert({{"k_prime_radius", r2},
                      {"n_gamma_lk_prime", mid},
                      {"lambda_count", double(rs2.lambda_count)},
                      {"lhs", lhs},
                      {"rhs", rhs},
                      {"slack", rep.slack},
                      {"inner_lhs", (1 - eps) * double(g0_in_l.size())},
                      {"inner_rhs", mid}});
    if (!rs2.hypothesis_holds) {
        st.message = "hypothesis fails on Gamma cap L K'";
        guard.stop(st, true);
        return rep;
    }
    st.passed = rep.slack >= 0 && (1 - eps) * double(g0_in_l.size()) <= mid + 1e-9;
    if (!st.passed) {
        st.message = "final cardinality inequality fails";
        guard.stop(st, false);
        return rep;
    }
    rep.stages.push_back(st);
    rep.completed = true;
    return rep;
}

Scenario canonical_scenario() {
    Scenario s;
    s.name = "canonical";
    s.set = canonical_lattice(real_line());
    s.spectrum = band(-kPi, kPi);
    s.epsilon = 0.25;
    return s;
}

Scenario two_interval_scenario() {
    Scenario s;
    s.name = "two-interval";
    s.set = DiscreteSet{real_line(), PerturbedLattice{LatticeGenerator{{1 / 1.1}, {0}, {{0}}}, 0.02, 7}, 1 / 1.1 - 0.04};
    s.spectrum = Spectrum{dual(real_line()),
                          {{BoxComponent::interval(-17 * kPi / 16, -3 * kPi / 16)},
                           {BoxComponent::interval(-kPi / 16, 17 * kPi / 16)}}};
    s.epsilon = 0.5;
    s.tile_width = {kPi / 8};
    return s;
}

Scenario undersampled_scenario() {
    Scenario s = canonical_scenario();
    s.name = "undersampled";
    s.set = lattice_set(real_line(), LatticeGenerator{{2}, {0}, {{0}}}, 2);
    return s;
}

// ---------------------------------------------------------------------------

EigenCountReport eigenvalue_count_experiment(double a, const std::vector<double>& windows, double threshold,
                                             const GridPolicy& policy) {
    if (!(a > 0)) fail(ErrorKind::InvalidSpectrum, "eigenvalue_count_experiment: a must be positive");
    EigenCountReport r;
    r.a = a;
    r.threshold = threshold;
    r.within_envelope = true;
    auto g = real_line();
    auto omega = band(-a * kPi, a * kPi);
    std::vector<double> lx, ly;
    for (double h : windows) {
        if (!(h > 1)) fail(ErrorKind::InvalidWindow, "eigenvalue_count_experiment: windows must exceed 1");
        auto grid = build_grid(omega, policy_for_extent(h, policy));
        auto t = time_concentration_matrix(grid, g, {BoxComponent::interval(0, h)});
        Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(t, Eigen::EigenvaluesOnly).eigenvalues();
        EigenCountRow row;
        row.h = h;
        row.nodes = grid.size();
        row.count = static_cast<std::size_t>((ev.array() >= threshold).count());
        row.expected = a * h;
        row.residual = double(row.count) - row.expected;
        row.envelope = 2 * std::log(h) + 4;
        r.within_envelope = r.within_envelope && std::abs(row.residual) <= row.envelope;
        lx.push_back(std::log(h));
        ly.push_back(std::log(std::max(std::abs(row.residual), 1.0)));
        r.rows.push_back(row);
    }
    if (lx.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= double(lx.size());
        my /= double(lx.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        r.exponent = sxx > 0 ? sxy / sxx : 0;
    }
    return r;
}

// ---------------------------------------------------------------------------

RsInstance rs_random_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    RsInstance out;
    out.seed = seed;
    const double s = 0.5 + 0.5 * u(rng);
    const std::size_t n = std::size_t{1} << std::uniform_int_distribution<int>(0, 2)(rng);
    out.epsilon = 0.3 + 0.3 * u(rng);
    const double over = 1.15 + 0.45 * u(rng);
    const double spacing = 1 / (over * s);
    const double amplitude = 0.15 * u(rng) * spacing;
    const double l = (1 + 3 * u(rng)) / s * double(n);
    const std::uint64_t set_seed = rng();

    auto g = real_line();
    auto dg = dual(g);
    const double w = 2 * kPi * s / double(n);
    auto cube = make_cube(dg, {w}, {}, {}, {-kPi * s});
    std::vector<std::vector<std::int64_t>> tiles;
    Spectrum omega{dg, {}};
    for (std::size_t k = 0; k < n; ++k) {
        tiles.push_back({std::int64_t(k)});
        omega.pieces.push_back(tile(cube, tiles.back()));
    }
    GridPolicy policy;
    policy.nodes_per_unit = 199.5 / (2 * kPi * s);
    auto grid = build_grid(omega, policy);
    out.grid_dimension = grid.size();

    auto atlas = make_atlas(cube);
    const Box lbox = expansion_box(g, l);
    auto gammas = quasi_points(atlas, lbox);
    auto phi = phi_basis(cube, tiles, sylvester_hadamard_order(n), gammas, grid);

    const std::vector<double> radii{1, 2, 3, 4, 6, 8, 12};
    const double r_max = radii.back() / s;
    DiscreteSet lambda{g, PerturbedLattice{LatticeGenerator{{spacing}, {0}, {{0}}}, amplitude, set_seed},
                       spacing - 2 * amplitude};
    const Box win = expansion_box(g, l + r_max + spacing);
    auto sys = synthesize_system(g, enumerate(lambda, win), omega, grid);
    sys.window = win;
    Eigen::MatrixXcd h = dual_frame(sys);
    for (double r : radii) {
        auto rec = rs_comparison(phi, gammas, n, sys, h, out.epsilon, expansion_box(g, r / s), lbox);
        out.record = rec;
        if (rec.hypothesis_holds) {
            out.verified = true;
            out.k_radius = r / s;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

BatchReport run_scenarios(const std::vector<Scenario>& batch) {
    BatchReport b;
    for (const auto& s : batch) {
        ScenarioOutcome o;
        o.name = s.name;
        try {
            o.report = s.mode == Mode::Sampling ? verify_sampling_necessity(s) : verify_interpolation_necessity(s);
            switch (o.report->verdict) {
                case NecessityVerdict::Consistent: ++b.consistent; break;
                case NecessityVerdict::Violated: ++b.violated; break;
                case NecessityVerdict::Inconclusive: ++b.inconclusive; break;
            }
        } catch (const Error& e) {
            o.error = true;
            o.message = std::string(to_string(e.kind())) + ": " + e.what();
            ++b.errors;
        } catch (const std::exception& e) {
            o.error = true;
            o.message = e.what();
            ++b.errors;
        }
        b.outcomes.push_back(std::move(o));
    }
    return b;
}

}  // namespace landau
