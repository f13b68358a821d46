#include "landau/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "landau/errors.hpp"

namespace landau {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

std::int64_t pmod(std::int64_t a, std::int64_t n) {
    auto r = a % n;
    return r < 0 ? r + n : r;
}

// Arc as at most two segments of [0, 2pi).
std::vector<Interval> unwrap(const Interval& iv) {
    double len = std::min(iv.length(), kTwoPi);
    if (len >= kTwoPi) return {{0, kTwoPi}};
    double s = std::fmod(iv.lo, kTwoPi);
    if (s < 0) s += kTwoPi;
    if (s + len <= kTwoPi) return {{s, s + len}};
    return {{s, kTwoPi}, {0, s + len - kTwoPi}};
}

std::vector<Interval> torus_segments(const BoxComponent& c) {
    if (c.full) return {{0, kTwoPi}};
    std::vector<Interval> out;
    for (const auto& iv : c.intervals)
        for (const auto& s : unwrap(iv)) out.push_back(s);
    return out;
}

double component_overlap(const ElementaryFactor& f, double scale, const BoxComponent& a, const BoxComponent& b) {
    switch (f.kind) {
        case FactorKind::RealLine: {
            double lo = std::max(a.intervals[0].lo, b.intervals[0].lo);
            double hi = std::min(a.intervals[0].hi, b.intervals[0].hi);
            return scale * std::max(0.0, hi - lo);
        }
        case FactorKind::Torus: {
            double t = 0;
            for (const auto& x : torus_segments(a))
                for (const auto& y : torus_segments(b)) t += std::max(0.0, std::min(x.hi, y.hi) - std::max(x.lo, y.lo));
            return scale * t;
        }
        case FactorKind::Integers:
        case FactorKind::Cyclic: {
            auto va = discrete_values(f, a);
            auto vb = discrete_values(f, b);
            std::vector<std::int64_t> both;
            std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(both));
            return scale * static_cast<double>(both.size());
        }
    }
    return 0;
}

double tile_width(const CubeSpec& c, std::size_t i) { return 2 * c.half_width[i]; }

}  // namespace

Box CubeSpec::cell() const {
    Box b(dual_group.rank());
    for (std::size_t i = 0; i < dual_group.rank(); ++i) {
        const auto& f = dual_group.factor(i);
        switch (f.kind) {
            case FactorKind::RealLine: b[i] = BoxComponent::interval(-half_width[i], half_width[i]); break;
            case FactorKind::Torus: {
                double h = kPi / static_cast<double>(torus_refinement[i]);
                b[i] = torus_refinement[i] == 1 ? BoxComponent::whole() : BoxComponent::interval(-h, h);
                break;
            }
            case FactorKind::Integers: b[i] = BoxComponent::point_set({0}); break;
            case FactorKind::Cyclic: {
                std::vector<std::int64_t> pts;
                for (std::int64_t v = 0; v < f.order; v += subgroup_step[i]) pts.push_back(v);
                b[i] = BoxComponent::point_set(std::move(pts));
                break;
            }
        }
    }
    return b;
}

double CubeSpec::measure() const { return box_measure(dual_group, cell()); }

std::vector<std::int64_t> CubeSpec::period() const {
    std::vector<std::int64_t> p(dual_group.rank(), 0);
    for (std::size_t i = 0; i < dual_group.rank(); ++i) {
        const auto& f = dual_group.factor(i);
        if (f.kind == FactorKind::Torus) p[i] = torus_refinement[i];
        if (f.kind == FactorKind::Cyclic) p[i] = subgroup_step[i];
    }
    return p;
}

CubeSpec make_cube(const LcaGroup& dual_group, const std::vector<double>& width,
                   const std::vector<std::int64_t>& refinement, const std::vector<std::int64_t>& step,
                   const std::vector<double>& origin) {
    const auto r = dual_group.rank();
    CubeSpec c;
    c.dual_group = dual_group;
    c.half_width.assign(r, 0);
    c.torus_refinement.assign(r, 1);
    c.subgroup_step.assign(r, 1);
    c.origin.assign(r, 0);
    c.compact_subgroup.group = dual_group;
    c.compact_subgroup.factors.assign(r, {});
    for (std::size_t i = 0; i < r; ++i) {
        const auto& f = dual_group.factor(i);
        switch (f.kind) {
            case FactorKind::RealLine:
                if (i >= width.size() || !(width[i] > 0) || !std::isfinite(width[i]))
                    fail(ErrorKind::InvalidWindow, "cube: tile width must be positive on factor " + std::to_string(i));
                c.half_width[i] = width[i] / 2;
                c.origin[i] = i < origin.size() ? origin[i] : -width[i] / 2;
                break;
            case FactorKind::Torus:
                c.torus_refinement[i] = i < refinement.size() ? refinement[i] : 1;
                if (c.torus_refinement[i] < 1) fail(ErrorKind::InvalidWindow, "cube: torus refinement must be >= 1");
                c.origin[i] = i < origin.size() ? origin[i] : -kPi / static_cast<double>(c.torus_refinement[i]);
                break;
            case FactorKind::Integers: break;
            case FactorKind::Cyclic: {
                auto d = i < step.size() ? step[i] : f.order;
                if (d < 1 || f.order % d != 0) fail(ErrorKind::InvalidWindow, "cube: subgroup step must divide the order");
                c.subgroup_step[i] = d;
                c.compact_subgroup.factors[i] = {SubgroupFactor::Type::Lattice, static_cast<double>(d)};
                break;
            }
        }
    }
    return c;
}

CubeAtlas make_atlas(CubeSpec cube, const std::vector<std::int64_t>& rep_shift) {
    const auto& gd = cube.dual_group;
    LcaGroup g = dual(gd);
    const auto r = g.rank();
    const auto d = g.real_dimension();

    LatticeGenerator ups;
    ups.real_basis.assign(d * d, 0);
    ups.steps.assign(r, 0);
    double separation = 1;
    std::size_t a = 0;
    for (std::size_t i = 0; i < r; ++i) {
        switch (g.factor(i).kind) {
            case FactorKind::RealLine: {
                double s = kTwoPi / tile_width(cube, i);
                ups.real_basis[a * d + a] = s;
                ++a;
                separation = std::min(separation, s);
                break;
            }
            case FactorKind::Integers: ups.steps[i] = static_cast<double>(cube.torus_refinement[i]); break;
            case FactorKind::Torus: ups.steps[i] = 1; break;
            case FactorKind::Cyclic: ups.steps[i] = static_cast<double>(g.factor(i).order); break;
        }
    }
    ups.cosets = {std::vector<double>(r, 0.0)};

    // one representative per character of K
    std::vector<std::vector<double>> reps{std::vector<double>(r, 0.0)};
    for (std::size_t i = 0; i < r; ++i) {
        if (g.factor(i).kind != FactorKind::Cyclic) continue;
        auto n = g.factor(i).order;
        auto m = n / cube.subgroup_step[i];
        auto shift = i < rep_shift.size() ? rep_shift[i] : 0;
        std::vector<std::vector<double>> next;
        for (const auto& base : reps)
            for (std::int64_t k = 0; k < m; ++k) {
                auto v = base;
                v[i] = static_cast<double>(pmod(k + shift * m, n));
                next.push_back(std::move(v));
            }
        reps = std::move(next);
    }

    QuasiLattice q;
    q.group = g;
    q.upsilon = lattice_set(g, ups, separation);
    q.coset_reps = reps;
    auto pts = ups;
    pts.cosets = reps;
    q.points = lattice_set(g, std::move(pts), separation);
    return {std::move(cube), std::move(q)};
}

CubeAtlas build_cube(const LcaGroup& gd, const Box& nb) {
    validate_box(gd, nb, "neighborhood");
    if (!box_contains(gd, nb, std::vector<double>(gd.rank(), 0.0)))
        fail(ErrorKind::InvalidWindow, "build_cube: neighborhood must contain the identity");
    const auto r = gd.rank();
    std::vector<double> width(r, 0);
    std::vector<std::int64_t> refine(r, 1), step(r, 1);
    for (std::size_t i = 0; i < r; ++i) {
        const auto& f = gd.factor(i);
        const auto& c = nb[i];
        switch (f.kind) {
            case FactorKind::RealLine: {
                double hw = std::min(-c.intervals[0].lo, c.intervals[0].hi);
                if (!(hw > 0))
                    fail(ErrorKind::InvalidWindow, "build_cube: neighborhood has no interior on factor " + std::to_string(i) + " (RealLine)");
                width[i] = 2 * hw;
                break;
            }
            case FactorKind::Torus: {
                if (c.full) break;
                double margin = 0;
                for (const auto& iv : c.intervals) {
                    double t = std::fmod(-iv.lo, kTwoPi);
                    if (t < 0) t += kTwoPi;
                    if (t <= iv.length()) margin = std::max(margin, std::min(t, iv.length() - t));
                }
                if (!(margin > 0))
                    fail(ErrorKind::InvalidWindow, "build_cube: neighborhood has no interior on factor " + std::to_string(i) + " (Torus)");
                auto n = static_cast<std::int64_t>(std::ceil(kPi / margin - 1e-12));
                if (n > (std::int64_t(1) << 20))
                    fail(ErrorKind::InvalidWindow, "build_cube: torus refinement limit reached on factor " + std::to_string(i));
                refine[i] = std::max<std::int64_t>(1, n);
                break;
            }
            case FactorKind::Integers: break;
            case FactorKind::Cyclic: {
                auto vals = discrete_values(f, c);
                std::set<std::int64_t> in(vals.begin(), vals.end());
                for (std::int64_t dd = 1; dd <= f.order; ++dd) {
                    if (f.order % dd) continue;
                    bool ok = true;
                    for (std::int64_t v = 0; v < f.order && ok; v += dd) ok = in.count(v) > 0;
                    if (ok) { step[i] = dd; break; }
                }
                break;
            }
        }
    }
    return make_atlas(make_cube(gd, width, refine, step));
}

Box tile(const CubeSpec& c, const std::vector<std::int64_t>& k) {
    const auto& g = c.dual_group;
    if (k.size() != g.rank()) fail(ErrorKind::InvalidElement, "tile: index size mismatch");
    Box b(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        switch (f.kind) {
            case FactorKind::RealLine: {
                double w = tile_width(c, i);
                b[i] = BoxComponent::interval(c.origin[i] + static_cast<double>(k[i]) * w,
                                              c.origin[i] + static_cast<double>(k[i] + 1) * w);
                break;
            }
            case FactorKind::Torus: {
                auto n = c.torus_refinement[i];
                if (n == 1) { b[i] = BoxComponent::whole(); break; }
                double w = kTwoPi / static_cast<double>(n);
                auto m = pmod(k[i], n);
                b[i] = BoxComponent::interval(c.origin[i] + static_cast<double>(m) * w, c.origin[i] + static_cast<double>(m + 1) * w);
                break;
            }
            case FactorKind::Integers: b[i] = BoxComponent::point_set({k[i]}); break;
            case FactorKind::Cyclic: {
                std::vector<std::int64_t> pts;
                auto d = c.subgroup_step[i];
                for (std::int64_t v = pmod(k[i], d); v < f.order; v += d) pts.push_back(v);
                b[i] = BoxComponent::point_set(std::move(pts));
                break;
            }
        }
    }
    return b;
}

std::vector<std::vector<std::int64_t>> tiles_meeting(const CubeSpec& c, const Box& window) {
    const auto& g = c.dual_group;
    validate_box(g, window, "window");
    std::vector<std::vector<std::int64_t>> axes(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        auto& ax = axes[i];
        switch (f.kind) {
            case FactorKind::RealLine: {
                double w = tile_width(c, i);
                const auto& iv = window[i].intervals[0];
                auto lo = static_cast<std::int64_t>(std::floor((iv.lo - c.origin[i]) / w + 1e-12));
                auto hi = static_cast<std::int64_t>(std::ceil((iv.hi - c.origin[i]) / w - 1e-12)) - 1;
                for (auto k = lo; k <= std::max(lo, hi); ++k) ax.push_back(k);
                break;
            }
            case FactorKind::Torus:
                for (std::int64_t k = 0; k < c.torus_refinement[i]; ++k) ax.push_back(k);
                break;
            case FactorKind::Integers: ax = discrete_values(f, window[i]); break;
            case FactorKind::Cyclic: {
                std::set<std::int64_t> res;
                for (auto v : discrete_values(f, window[i])) res.insert(pmod(v, c.subgroup_step[i]));
                ax.assign(res.begin(), res.end());
                break;
            }
        }
        if (ax.empty()) return {};
    }
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::size_t> idx(g.rank(), 0);
    while (true) {
        std::vector<std::int64_t> k(g.rank());
        for (std::size_t i = 0; i < g.rank(); ++i) k[i] = axes[i][idx[i]];
        out.push_back(std::move(k));
        std::size_t i = g.rank();
        while (i-- > 0) {
            if (++idx[i] < axes[i].size()) break;
            idx[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

PointCloud quasi_points(const CubeAtlas& atlas, const Box& window) { return enumerate(atlas.quasi.points, window); }

double intersection_measure(const LcaGroup& g, const Box& a, const Box& b) {
    double m = 1;
    for (std::size_t i = 0; i < g.rank() && m > 0; ++i) m *= component_overlap(g.factor(i), g.haar_scale(i), a[i], b[i]);
    return m;
}

double intersection_measure(const Spectrum& s, const Box& b) {
    double m = 0;
    for (const auto& p : s.pieces) m += intersection_measure(s.dual_group, p, b);
    return m;
}

HadamardMatrix sylvester_hadamard(unsigned n) {
    if (n > 14) fail(ErrorKind::Budget, "sylvester_hadamard: order 2^" + std::to_string(n) + " exceeds the budget");
    HadamardMatrix u{1, {1}};
    for (unsigned s = 0; s < n; ++s) {
        std::size_t m = u.order;
        HadamardMatrix v{2 * m, std::vector<int>(4 * m * m)};
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                int x = u.at(i, j);
                v.entries[i * 2 * m + j] = x;
                v.entries[i * 2 * m + j + m] = x;
                v.entries[(i + m) * 2 * m + j] = x;
                v.entries[(i + m) * 2 * m + j + m] = -x;
            }
        u = std::move(v);
    }
    return u;
}

HadamardMatrix sylvester_hadamard_order(std::size_t order) {
    if (order == 0 || (order & (order - 1)))
        fail(ErrorKind::NotSupported, "sylvester_hadamard: order " + std::to_string(order) + " is not a power of two");
    unsigned n = 0;
    while ((std::size_t(1) << n) < order) ++n;
    return sylvester_hadamard(n);
}

bool hadamard_exact(const HadamardMatrix& u) {
    for (std::size_t i = 0; i < u.order; ++i)
        for (std::size_t j = 0; j < u.order; ++j) {
            std::int64_t s = 0;
            for (std::size_t k = 0; k < u.order; ++k) s += std::int64_t(u.at(i, k)) * u.at(j, k);
            if (s != (i == j ? std::int64_t(u.order) : 0)) return false;
        }
    return true;
}

namespace {

void check_gram(const Eigen::MatrixXcd& m, double tol, const char* what) {
    if (m.cols() == 0) return;
    Eigen::MatrixXcd gram = m.adjoint() * m;
    double dev = (gram - Eigen::MatrixXcd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
    if (!(dev <= tol))
        fail(ErrorKind::Numerical, std::string(what) + ": grid too coarse, Gram deviates from identity by " + std::to_string(dev));
}

}  // namespace

Eigen::MatrixXcd psi_basis(const CubeSpec& cube, const PointCloud& gammas, const QuadratureGrid& grid, const BasisOptions& opt) {
    if (!grid.dual_group.same_factors(cube.dual_group)) fail(ErrorKind::InvalidGroup, "psi_basis: grid and cube groups differ");
    Eigen::VectorXd chi = indicator(grid, cube.cell()) / std::sqrt(cube.measure());
    Eigen::MatrixXcd out = character_matrix(grid, gammas);
    for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) = out.col(j).cwiseProduct(chi.cast<std::complex<double>>());
    check_gram(out, opt.gram_tolerance, "psi_basis");
    return out;
}

Eigen::MatrixXcd phi_basis(const CubeSpec& cube, const std::vector<std::vector<std::int64_t>>& tiles, const HadamardMatrix& u,
                           const PointCloud& gammas, const QuadratureGrid& grid, const BasisOptions& opt) {
    if (tiles.size() != u.order)
        fail(ErrorKind::InvalidSpectrum, "phi_basis: " + std::to_string(tiles.size()) + " tiles for a Hadamard matrix of order " +
                                             std::to_string(u.order));
    const auto n = static_cast<Eigen::Index>(u.order);
    double mstar = static_cast<double>(u.order) * cube.measure();
    Eigen::MatrixXd chi(static_cast<Eigen::Index>(grid.size()), n);
    for (Eigen::Index k = 0; k < n; ++k) chi.col(k) = indicator(grid, tile(cube, tiles[static_cast<std::size_t>(k)]));
    Eigen::MatrixXd uu(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) uu(j, k) = u.at(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    Eigen::MatrixXd mix = chi * uu.transpose() / std::sqrt(mstar);  // column j: sum_k u_jk chi_k
    Eigen::MatrixXcd e = character_matrix(grid, gammas);
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(grid.size()), e.cols() * n);
    for (Eigen::Index g = 0; g < e.cols(); ++g)
        for (Eigen::Index j = 0; j < n; ++j) out.col(g * n + j) = e.col(g).cwiseProduct(mix.col(j).cast<std::complex<double>>());
    check_gram(out, opt.gram_tolerance, "phi_basis");
    return out;
}

SpectrumApproximation approximate_spectrum(const Spectrum& omega, double eps, const ApproximationOptions& opt) {
    validate_spectrum(omega);
    if (!(eps > 0)) fail(ErrorKind::InvalidSpectrum, "approximate_spectrum: epsilon must be positive");
    const auto& g = omega.dual_group;
    const auto r = g.rank();
    if (omega.pieces.empty()) fail(ErrorKind::InvalidSpectrum, "approximate_spectrum: empty spectrum");

    // hull window of Omega and the starting cube aligned at its lower corner
    Box hull(r);
    std::vector<double> width(r, 0), origin(r, 0);
    std::vector<std::int64_t> refine(r, 1), step(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
        const auto& f = g.factor(i);
        switch (f.kind) {
            case FactorKind::RealLine: {
                double lo = omega.pieces[0][i].intervals[0].lo, hi = omega.pieces[0][i].intervals[0].hi;
                for (const auto& p : omega.pieces) {
                    lo = std::min(lo, p[i].intervals[0].lo);
                    hi = std::max(hi, p[i].intervals[0].hi);
                }
                hull[i] = BoxComponent::interval(lo, hi);
                width[i] = i < opt.initial_width.size() && opt.initial_width[i] > 0 ? opt.initial_width[i] : hi - lo;
                origin[i] = lo;
                break;
            }
            case FactorKind::Torus: {
                hull[i] = BoxComponent::whole();
                const auto& c = omega.pieces[0][i];
                origin[i] = c.full || c.intervals.empty() ? -kPi : c.intervals[0].lo;
                break;
            }
            case FactorKind::Integers: {
                std::vector<std::int64_t> all;
                for (const auto& p : omega.pieces) {
                    auto v = discrete_values(f, p[i]);
                    all.insert(all.end(), v.begin(), v.end());
                }
                std::sort(all.begin(), all.end());
                all.erase(std::unique(all.begin(), all.end()), all.end());
                hull[i] = BoxComponent::point_set(all);
                break;
            }
            case FactorKind::Cyclic:
                hull[i] = BoxComponent::whole();
                step[i] = f.order;
                break;
        }
    }

    const double mu = haar(omega);
    const double q = eps * eps / 4;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t level = 0; level <= opt.max_refinements; ++level) {
        CubeSpec cube = make_cube(g, width, refine, step, origin);
        auto cand = tiles_meeting(cube, hull);
        if (cand.size() > opt.max_tiles)
            fail(ErrorKind::Budget, "approximate_spectrum: tile budget exceeded, best defect " + std::to_string(best));
        const double mc = cube.measure();
        std::vector<std::pair<double, std::size_t>> frac;
        for (std::size_t t = 0; t < cand.size(); ++t) frac.push_back({intersection_measure(omega, tile(cube, cand[t])), t});
        std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        std::size_t m = 0;
        while (m < frac.size() && frac[m].first > 0.5 * mc) ++m;

        std::size_t down = 1, up = 1;
        while (up < m) up <<= 1;
        down = up == m ? up : up >> 1;
        bool found = false;
        SpectrumApproximation res;
        double res_cost = 0;
        for (std::size_t n : {down, up}) {
            if (n == 0 || n > frac.size()) continue;
            double in = 0;
            for (std::size_t k = 0; k < n; ++k) in += frac[k].first;
            double mstar = static_cast<double>(n) * mc;
            double missing = std::max(0.0, mu - in), excess = std::max(0.0, mstar - in);
            if (missing < 1e-13 * mu) missing = 0;
            if (excess < 1e-13 * mu) excess = 0;
            best = std::min(best, missing + excess);
            if (!(excess < q && missing < q * mstar)) continue;
            if (found && missing + excess >= res_cost) continue;
            found = true;
            res_cost = missing + excess;
            res = {};
            res.cube = cube;
            res.n = n;
            res.missing = missing;
            res.excess = excess;
            res.defect = missing;
            res.refinements = level;
            res.omega_star.dual_group = g;
            std::vector<std::size_t> chosen;
            for (std::size_t k = 0; k < n; ++k) chosen.push_back(frac[k].second);
            std::sort(chosen.begin(), chosen.end());
            for (auto t : chosen) {
                res.tiles.push_back(cand[t]);
                res.omega_star.pieces.push_back(tile(cube, cand[t]));
            }
        }
        if (found) return res;
        for (std::size_t i = 0; i < r; ++i) {
            if (g.factor(i).kind == FactorKind::RealLine) width[i] /= 2;
            if (g.factor(i).kind == FactorKind::Torus) refine[i] *= 2;
        }
    }
    fail(ErrorKind::ScheduleExhausted, "approximate_spectrum: refinement budget exhausted, best defect " + std::to_string(best));
}

SubspaceDistance distance_to_subspace(const QuadratureGrid& grid, const Eigen::VectorXcd& phi, const Spectrum& omega,
                                      double omega_star_measure, double symmetric_difference, double eps) {
    if (phi.size() != static_cast<Eigen::Index>(grid.size())) fail(ErrorKind::InvalidElement, "distance_to_subspace: size mismatch");
    Eigen::VectorXd in = indicator(grid, omega);
    double s = 0;
    for (Eigen::Index i = 0; i < phi.size(); ++i)
        if (in[i] == 0) s += std::norm(phi[i]);
    SubspaceDistance d;
    d.distance = std::sqrt(s);
    d.bound = std::sqrt(symmetric_difference / omega_star_measure);
    d.within_bound = d.distance <= d.bound * (1 + 1e-9) + 1e-12;
    d.below_half_epsilon = d.bound < eps / 2;
    return d;
}

}  // namespace landau
