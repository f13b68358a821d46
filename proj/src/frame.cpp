#include "landau/frame.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <set>

#include "landau/errors.hpp"

namespace landau {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * kPi;

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

bool same_spectrum(const Spectrum& a, const Spectrum& b) { return a.dual_group == b.dual_group && a.pieces == b.pieces; }

// Eigen-decomposition based pseudo-inverse solve for a Hermitian PSD matrix.
Eigen::MatrixXcd psd_solve(const Eigen::MatrixXcd& g, const Eigen::MatrixXcd& b, double threshold) {
    if (g.rows() == 0) return Eigen::MatrixXcd(0, b.cols());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const auto& ev = es.eigenvalues();
    double cut = threshold * std::max(ev.maxCoeff(), 0.0);
    Eigen::MatrixXcd y = es.eigenvectors().adjoint() * b;
    for (Idx k = 0; k < y.rows(); ++k) {
        if (ev[k] > cut && ev[k] > 0)
            y.row(k) /= ev[k];
        else
            y.row(k).setZero();
    }
    return es.eigenvectors() * y;
}

Eigen::MatrixXcd columns(const Eigen::MatrixXcd& m, const std::vector<std::size_t>& cols) {
    Eigen::MatrixXcd out(m.rows(), ix(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(ix(j)) = m.col(ix(cols[j]));
    return out;
}

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& m, const std::vector<std::size_t>& s) {
    Eigen::MatrixXcd out(ix(s.size()), ix(s.size()));
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b < s.size(); ++b) out(ix(a), ix(b)) = m(ix(s[a]), ix(s[b]));
    return out;
}

std::vector<std::size_t> points_in(const LcaGroup& g, const PointCloud& p, const Box& b) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (box_contains(g, b, p.point(i))) out.push_back(i);
    return out;
}

Eigen::VectorXd eigenvalues_of(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0) return Eigen::VectorXd();
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

Eigen::MatrixXcd frame_test_space(const ExponentialSystem& s, const FrameOptions& opt) {
    auto inner = inner_window(s.group, s.window, opt.inner_margin);
    Eigen::MatrixXcd k = time_concentration_matrix(s.grid, s.group, inner);
    if (!same_spectrum(s.grid.spectrum, s.spectrum)) {
        Eigen::VectorXd chi = indicator(s.grid, s.spectrum);
        k = chi.asDiagonal() * k * chi.asDiagonal();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
    std::vector<std::size_t> keep;
    for (Idx i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] >= opt.concentration) keep.push_back(static_cast<std::size_t>(i));
    return columns(es.eigenvectors(), keep);
}

}  // namespace

double window_extent(const LcaGroup& g, const Box& w) {
    double e = 0;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        if (f.is_compact() || w[i].full) continue;
        if (f.kind == FactorKind::RealLine) {
            e = std::max(e, w[i].intervals[0].length());
        } else {
            auto v = discrete_values(f, w[i]);
            if (!v.empty()) e = std::max(e, static_cast<double>(v.back() - v.front()));
        }
    }
    return e;
}

ExponentialSystem synthesize_system(const DiscreteSet& set, const Box& window, const Spectrum& spectrum,
                                    const GridPolicy& policy) {
    if (!set.group.same_factors(dual(spectrum.dual_group)))
        fail(ErrorKind::InvalidSpectrum, "synthesize_system: spectrum is not in the dual of the set's group");
    auto pts = enumerate(set, window);
    auto grid = build_grid(spectrum, policy_for_extent(window_extent(set.group, window), policy));
    auto s = synthesize_system(set.group, pts, spectrum, grid);
    s.window = window;
    return s;
}

ExponentialSystem synthesize_system(const LcaGroup& g, const PointCloud& points, const Spectrum& spectrum,
                                    const QuadratureGrid& grid) {
    ExponentialSystem s;
    s.group = g;
    s.spectrum = spectrum;
    s.grid = grid;
    s.points = points;
    s.points.dim = g.rank();
    s.vectors = character_matrix(grid, s.points);
    if (!same_spectrum(grid.spectrum, spectrum)) s.vectors = indicator(grid, spectrum).asDiagonal() * s.vectors;
    // window: bounding box of the points
    s.window.assign(g.rank(), BoxComponent::whole());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        if (f.is_compact() || points.size() == 0) continue;
        double lo = points.coords[i], hi = lo;
        for (std::size_t p = 0; p < points.size(); ++p) {
            lo = std::min(lo, points.coords[p * g.rank() + i]);
            hi = std::max(hi, points.coords[p * g.rank() + i]);
        }
        s.window[i] = BoxComponent::interval(lo, hi);
    }
    return s;
}

Eigen::MatrixXcd exact_gram(const ExponentialSystem& s) {
    const auto n = s.size();
    Eigen::MatrixXcd g(ix(n), ix(n));
    for (std::size_t i = 0; i < n; ++i) {
        auto pi = s.points.point(i);
        for (std::size_t j = i; j < n; ++j) {
            GroupElement d(sub_coords(s.group, s.points.point(j), pi));
            auto v = spectrum_character_integral(s.spectrum, d);
            g(ix(i), ix(j)) = v;
            g(ix(j), ix(i)) = std::conj(v);
        }
    }
    return g;
}

Box inner_window(const LcaGroup& g, const Box& w, double margin) {
    Box out = w;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        if (f.is_compact() || w[i].full) continue;
        if (f.kind == FactorKind::RealLine) {
            auto iv = w[i].intervals[0];
            double d = margin * iv.length();
            out[i] = BoxComponent::interval(iv.lo + d, iv.hi - d);
        } else {
            auto v = discrete_values(f, w[i]);
            if (v.empty()) continue;
            double d = std::floor(margin * static_cast<double>(v.back() - v.front()));
            out[i] = BoxComponent::interval(static_cast<double>(v.front()) + d, static_cast<double>(v.back()) - d);
        }
    }
    return out;
}

Eigen::MatrixXcd time_concentration_matrix(const QuadratureGrid& grid, const LcaGroup& g, const Box& window) {
    const auto& gd = grid.dual_group;
    if (!g.same_factors(dual(gd))) fail(ErrorKind::InvalidWindow, "time_concentration_matrix: group mismatch");
    const std::size_t m = grid.size(), r = gd.rank();
    std::vector<double> pc(m * r);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t f = 0; f < r; ++f) pc[a * r + f] = phase_coefficient(gd.factor(f), grid.nodes.coords[a * r + f]);
    Eigen::MatrixXcd k(ix(m), ix(m));
    std::vector<double> coeff(r);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            for (std::size_t f = 0; f < r; ++f) coeff[f] = pc[b * r + f] - pc[a * r + f];
            auto v = box_character_integral(g, window, coeff) * (grid.sqrt_weights[a] * grid.sqrt_weights[b]);
            k(ix(a), ix(b)) = v;
            k(ix(b), ix(a)) = std::conj(v);
        }
    }
    return k;
}

Eigen::MatrixXcd concentrated_subspace(const QuadratureGrid& grid, const LcaGroup& g, const Box& window, double threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(time_concentration_matrix(grid, g, window));
    std::vector<std::size_t> keep;
    for (Idx i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] >= threshold) keep.push_back(static_cast<std::size_t>(i));
    return columns(es.eigenvectors(), keep);
}

FrameReport frame_bounds(const ExponentialSystem& s, const FrameOptions& opt) {
    if (s.size() == 0) fail(ErrorKind::InvalidSet, "frame_bounds: empty system");
    FrameReport r;
    auto ev = eigenvalues_of(exact_gram(s));
    r.gram_spectrum.assign(ev.data(), ev.data() + ev.size());
    r.upper = ev.maxCoeff();
    Eigen::MatrixXcd v = frame_test_space(s, opt);
    r.test_dimension = static_cast<std::size_t>(v.cols());
    if (v.cols() > 0) {
        Eigen::MatrixXcd m = s.vectors.adjoint() * v;
        r.lower = std::max(0.0, eigenvalues_of(m.adjoint() * m).minCoeff());
    }
    r.window_level = s.group.has_kind(FactorKind::RealLine) || s.group.has_kind(FactorKind::Integers);
    return r;
}

FrameReport riesz_bounds(const ExponentialSystem& s, const FrameOptions& opt) {
    if (s.size() == 0) fail(ErrorKind::InvalidSet, "riesz_bounds: empty system");
    FrameReport r;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(exact_gram(s));
    const auto& ev = es.eigenvalues();
    r.gram_spectrum.assign(ev.data(), ev.data() + ev.size());
    r.lower = std::max(0.0, ev.minCoeff());
    r.upper = ev.maxCoeff();
    r.test_dimension = s.size();
    r.dual_norm_finite = r.lower > opt.singular_threshold * r.upper;
    if (r.dual_norm_finite) {
        Eigen::VectorXd inv = ev.cwiseInverse();
        double best = 0;
        for (Idx i = 0; i < ev.size(); ++i) best = std::max(best, (es.eigenvectors().row(i).cwiseAbs2().transpose().cwiseProduct(inv)).sum());
        r.dual_norm_sup = std::sqrt(best);
    } else {
        r.dual_norm_sup = std::numeric_limits<double>::infinity();
    }
    return r;
}

Eigen::MatrixXcd dual_frame(const ExponentialSystem& s, const FrameReport* check, double threshold) {
    if (check && !(check->lower >= threshold * check->upper))
        fail(ErrorKind::Numerical, "dual_frame: lower frame bound below threshold");
    if (s.size() == 0) return Eigen::MatrixXcd(s.vectors.rows(), 0);
    Eigen::MatrixXcd g = s.vectors.adjoint() * s.vectors;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const auto& ev = es.eigenvalues();
    double cut = threshold * ev.maxCoeff();
    if (!(ev.maxCoeff() > 0)) fail(ErrorKind::Numerical, "dual_frame: zero system");
    Eigen::VectorXd inv(ev.size());
    for (Idx i = 0; i < ev.size(); ++i) inv[i] = ev[i] > cut ? 1 / ev[i] : 0;
    Eigen::MatrixXcd pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
    return s.vectors * pinv;
}

Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& m, double threshold) {
    if (m.cols() == 0 || m.rows() == 0) return Eigen::MatrixXcd(m.rows(), 0);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double cut = threshold * sv[0];
    Idx r = 0;
    while (r < sv.size() && sv[r] > cut) ++r;
    return svd.matrixU().leftCols(r);
}

double distance_to_span(const Eigen::MatrixXcd& family, const Eigen::VectorXcd& f, double threshold) {
    if (family.cols() == 0) return f.norm();
    Eigen::VectorXcd a = psd_solve(family.adjoint() * family, family.adjoint() * f, threshold);
    return (f - family * a).norm();
}

ConcentrationReport concentration_operator(const Eigen::MatrixXcd& rf, const Eigen::MatrixXcd& ff,
                                           const std::vector<double>& thresholds) {
    if (rf.rows() != ff.rows()) fail(ErrorKind::InvalidSet, "concentration_operator: families on different grids");
    ConcentrationReport r;
    Eigen::MatrixXcd up = orthonormal_span(rf), uq = orthonormal_span(ff);
    r.rank_p = static_cast<std::size_t>(up.cols());
    r.rank_q = static_cast<std::size_t>(uq.cols());
    std::vector<double> ev(r.rank_p, 0.0);
    if (up.cols() && uq.cols()) {
        Eigen::MatrixXcd c = uq.adjoint() * up;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
        const auto& sv = svd.singularValues();
        for (Idx i = 0; i < sv.size(); ++i) ev[static_cast<std::size_t>(i)] = sv[i] * sv[i];
        r.trace = c.squaredNorm();
    }
    std::sort(ev.begin(), ev.end(), std::greater<>());
    for (double e : ev) r.rank_estimate += e > 1e-10;
    for (double t : thresholds) r.counts_above[t] = static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [t](double e) { return e >= t; }));
    for (double& e : ev) e = std::clamp(e, 0.0, 1.0);
    r.eigenvalues = std::move(ev);
    r.trace_le_rank = r.trace <= static_cast<double>(r.rank_estimate) + 1e-8;
    return r;
}

RsRecord rs_comparison(const Eigen::MatrixXcd& fam, const PointCloud& gp, std::size_t mult, const ExponentialSystem& lam,
                       const Eigen::MatrixXcd& h, double eps, const Box& k, const Box& l) {
    const auto& g = lam.group;
    if (mult == 0 || static_cast<std::size_t>(fam.cols()) != gp.size() * mult)
        fail(ErrorKind::InvalidSet, "rs_comparison: family size does not match points times multiplicity");
    if (h.cols() != static_cast<Idx>(lam.size())) fail(ErrorKind::InvalidSet, "rs_comparison: dual frame size mismatch");
    for (std::size_t i = 0; i < gp.size(); ++i)
        if (!box_contains(g, l, gp.point(i))) fail(ErrorKind::InvalidSet, "rs_comparison: gamma point outside L");
    Box lk = minkowski(g, l, k);
    for (std::size_t i = 0; i < g.rank(); ++i) {
        if (g.factor(i).kind != FactorKind::RealLine) continue;
        const auto& need = lk[i].intervals[0];
        const auto& have = lam.window[i];
        if (!have.full && (have.intervals[0].lo > need.lo + 1e-9 || have.intervals[0].hi < need.hi - 1e-9)) {
            // the system window is the hull of its points; allow gaps of less than one separation
            if (have.intervals[0].lo > need.lo + 1 || have.intervals[0].hi < need.hi - 1)
                fail(ErrorKind::InvalidWindow, "rs_comparison: lambda window does not cover L K");
        }
    }

    RsRecord r;
    r.multiplicity = mult;
    r.gamma_count = gp.size();
    r.hypothesis_holds = true;
    for (std::size_t i = 0; i < gp.size(); ++i) {
        auto gi = gp.point(i);
        auto near = points_in(g, lam.points, translate(g, k, gi));
        Eigen::MatrixXcd hs = columns(h, near);
        for (std::size_t j = 0; j < mult; ++j) {
            double d = distance_to_span(hs, fam.col(ix(i * mult + j)));
            r.max_distance = std::max(r.max_distance, d);
            if (!(d < eps) && r.hypothesis_holds) {
                r.hypothesis_holds = false;
                r.failing_index = i * mult + j;
                r.failing_gamma = gi;
            }
        }
    }

    Eigen::MatrixXcd gram = fam.adjoint() * fam;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    const auto& ev = es.eigenvalues();
    r.c_finite = fam.cols() > 0 && ev.minCoeff() > 1e-10 * ev.maxCoeff();
    if (r.c_finite) {
        double best = 0;
        for (Idx i = 0; i < ev.size(); ++i)
            best = std::max(best, es.eigenvectors().row(i).cwiseAbs2().transpose().cwiseProduct(ev.cwiseInverse()).sum());
        r.c = std::sqrt(best);
    } else {
        r.c = std::numeric_limits<double>::infinity();
    }

    auto in_lk = points_in(g, lam.points, lk);
    r.lambda_count = in_lk.size();
    r.rhs = static_cast<double>(r.lambda_count);
    r.lhs = r.c_finite ? (1 - r.c * eps) * static_cast<double>(mult * gp.size()) : -std::numeric_limits<double>::infinity();
    r.conclusion_holds = r.lhs <= r.rhs;
    auto t = concentration_operator(fam, columns(h, in_lk));
    r.trace = t.trace;
    r.rank = t.rank_estimate;
    r.chain_holds = r.lhs <= r.trace + 1e-8 && r.trace <= static_cast<double>(r.rank) + 1e-8 && r.rank <= r.lambda_count;
    return r;
}

Eigen::VectorXcd modulate(const QuadratureGrid& grid, const Eigen::VectorXcd& f, const std::vector<double>& x) {
    Eigen::VectorXcd c = character_vector(grid, x);
    for (Idx i = 0; i < c.size(); ++i) c[i] /= grid.sqrt_weights[static_cast<std::size_t>(i)];
    return c.cwiseProduct(f);
}

HapResult hap_radius(const ExponentialSystem& s, const Eigen::MatrixXcd& h, const Eigen::VectorXcd& f, double eps,
                     const std::vector<std::vector<double>>& xs, const ExpansionSchedule& schedule) {
    return hap_radius(s, h, Eigen::MatrixXcd(f), eps, xs, schedule);
}

HapResult hap_radius(const ExponentialSystem& s, const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& fs, double eps,
                     const std::vector<std::vector<double>>& xs, const ExpansionSchedule& schedule) {
    const auto& g = s.group;
    Eigen::MatrixXcd gram = h.adjoint() * h;
    std::vector<Eigen::MatrixXcd> mf, b;
    for (const auto& x : xs) {
        Eigen::VectorXcd c = modulate(s.grid, Eigen::VectorXcd::Ones(fs.rows()), x);
        mf.push_back(c.asDiagonal() * fs);
        b.push_back(h.adjoint() * mf.back());
    }
    auto radii = schedule.radii;
    std::sort(radii.begin(), radii.end());
    HapResult r;
    for (double rad : radii) {
        Box k = expansion_box(g, rad);
        double worst = 0;
        for (std::size_t t = 0; t < xs.size(); ++t) {
            auto near = points_in(g, s.points, translate(g, k, xs[t]));
            Eigen::MatrixXcd res = mf[t];
            if (!near.empty()) {
                Eigen::MatrixXcd bs(ix(near.size()), fs.cols());
                for (std::size_t a = 0; a < near.size(); ++a) bs.row(ix(a)) = b[t].row(ix(near[a]));
                res -= columns(h, near) * psd_solve(submatrix(gram, near), bs, 1e-10);
            }
            worst = std::max(worst, res.colwise().norm().maxCoeff());
        }
        r.profile.push_back({rad, worst});
        if (worst < eps) {
            r.found = true;
            r.radius = rad;
            r.k = k;
            break;
        }
    }
    return r;
}

Eigen::VectorXcd random_function(const Eigen::MatrixXcd& basis, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::VectorXcd c(basis.cols());
    for (Idx i = 0; i < c.size(); ++i) {
        double re = n(rng);
        double im = n(rng);
        c[i] = {re, im};
    }
    Eigen::VectorXcd f = basis * c;
    double nr = f.norm();
    return nr > 0 ? Eigen::VectorXcd(f / nr) : f;
}

double sampling_ratio(const ExponentialSystem& s, const Eigen::VectorXcd& f) {
    double nf = f.squaredNorm();
    if (!(nf > 0)) return 0;
    return (s.vectors.adjoint() * f).squaredNorm() / nf;
}

namespace {

// Integral of the sliding maximum over [-r, r] of a sampled even function, with a tail bound.
double sliding_max_l1(const std::function<double(double)>& g, double r, double step, double t_max, double tail) {
    auto w = static_cast<long>(std::ceil(r / step));
    auto n = static_cast<long>(std::ceil(t_max / step));
    // samples at k * step for k in [-n - w, n + w]
    std::vector<double> v(static_cast<std::size_t>(2 * (n + w) + 1));
    for (long k = -n - w; k <= n + w; ++k) v[static_cast<std::size_t>(k + n + w)] = g(static_cast<double>(k) * step);
    std::deque<long> dq;
    double acc = 0;
    long next = 0;
    for (long c = 0; c <= 2 * n; ++c) {
        while (next <= c + 2 * w) {
            while (!dq.empty() && v[static_cast<std::size_t>(dq.back())] <= v[static_cast<std::size_t>(next)]) dq.pop_back();
            dq.push_back(next++);
        }
        while (dq.front() < c) dq.pop_front();
        acc += v[static_cast<std::size_t>(dq.front())];
    }
    return acc * step + tail;
}

struct Hull {
    bool full = false;
    double lo = 0, hi = 0;
    std::vector<std::int64_t> values;
};

Hull factor_hull(const Spectrum& s, std::size_t i) {
    const auto& f = s.dual_group.factor(i);
    Hull h;
    bool first = true;
    std::set<std::int64_t> vals;
    for (const auto& p : s.pieces) {
        const auto& c = p[i];
        if (f.is_discrete()) {
            auto v = discrete_values(f, c);
            vals.insert(v.begin(), v.end());
            continue;
        }
        if (c.full) { h.full = true; continue; }
        for (const auto& iv : c.intervals) {
            if (first) { h.lo = iv.lo; h.hi = iv.hi; first = false; }
            else if (f.kind == FactorKind::RealLine) { h.lo = std::min(h.lo, iv.lo); h.hi = std::max(h.hi, iv.hi); }
            else if (!(iv.lo == h.lo && iv.hi == h.hi)) h.full = true;
        }
    }
    h.values.assign(vals.begin(), vals.end());
    if (f.kind == FactorKind::Torus && h.hi - h.lo >= kTwoPi) h.full = true;
    return h;
}

// |g| for the trapezoid with plateau length len and ramp m, dual measure dw / 2pi.
double trapezoid_kernel(double t, double len, double m) {
    double l1 = len + m;
    if (std::abs(t) < 1e-12) return l1 / kTwoPi;
    return std::abs(2 * std::sin(l1 * t / 2) / t) * std::abs(2 * std::sin(m * t / 2) / t) / (kTwoPi * m);
}

}  // namespace

double carleson_analytic_bound(const LcaGroup& g, const Spectrum& spectrum, double separation, double frac) {
    if (!(separation > 0)) fail(ErrorKind::Separation, "carleson bound needs a positive separation");
    const double r = separation / 2;
    double l1 = 1, mu = 1;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        auto hull = factor_hull(spectrum, i);
        const double gs = g.haar_scale(i);
        switch (f.kind) {
            case FactorKind::RealLine: {
                double len = hull.hi - hull.lo;
                double m = frac * std::max(len, 1e-9);
                double step = std::min(r / 8, kTwoPi / ((len + m) * 64));
                double t_max = std::max(4000 / m, 40 * r);
                double tail = 4 / (kPi * m * (t_max - r));
                l1 *= gs * sliding_max_l1([&](double t) { return trapezoid_kernel(t, len, m); }, r, step, t_max, tail);
                mu *= gs * 2 * r;
                break;
            }
            case FactorKind::Integers: {
                auto w = static_cast<long>(std::floor(r));
                mu *= gs * static_cast<double>(2 * w + 1);
                double len = hull.hi - hull.lo;
                double m = std::min(frac * len, (kTwoPi - len) / 2);
                if (hull.full || !(m > 1e-12)) {
                    // g is a multiple of the point mass at 0
                    l1 *= gs * static_cast<double>(2 * w + 1) / gs;
                    break;
                }
                const long n = static_cast<long>(std::ceil(4000 / m)) + w;
                double acc = 0;
                for (long x = -n; x <= n; ++x) {
                    double best = 0;
                    for (long y = -w; y <= w; ++y) best = std::max(best, trapezoid_kernel(double(x + y), len, m));
                    acc += best;
                }
                acc += 4 / (kPi * m * (double(n) - double(w) - 1));
                l1 *= gs * acc / gs;
                break;
            }
            case FactorKind::Cyclic: {
                const auto nn = f.order;
                auto w = static_cast<std::int64_t>(std::floor(r));
                double ds = dual(g).haar_scale(i);
                std::vector<double> ab(static_cast<std::size_t>(nn));
                for (std::int64_t x = 0; x < nn; ++x) {
                    std::complex<double> s = 0;
                    for (auto v : hull.values) s += std::polar(1.0, kTwoPi * double(v) * double(x) / double(nn));
                    ab[static_cast<std::size_t>(x)] = std::abs(s) * ds;
                }
                double acc = 0, cnt = 0;
                for (std::int64_t x = 0; x < nn; ++x) {
                    double best = 0;
                    for (std::int64_t y = -w; y <= w; ++y) best = std::max(best, ab[static_cast<std::size_t>(((x + y) % nn + nn) % nn)]);
                    acc += best;
                }
                cnt = static_cast<double>(std::min<std::int64_t>(2 * w + 1, nn));
                l1 *= gs * acc;
                mu *= gs * cnt;
                break;
            }
            case FactorKind::Torus: {
                double ds = dual(g).haar_scale(i);
                const std::size_t samples = 1 << 14;
                double step = kTwoPi / samples;
                std::vector<double> ab(samples);
                for (std::size_t k = 0; k < samples; ++k) {
                    std::complex<double> s = 0;
                    for (auto v : hull.values) s += std::polar(1.0, double(v) * step * double(k));
                    ab[k] = std::abs(s) * ds;
                }
                double rr = std::min(r, kPi);
                auto w = static_cast<long>(std::ceil(rr / step));
                double acc = 0;
                for (std::size_t k = 0; k < samples; ++k) {
                    double best = 0;
                    for (long y = -w; y <= w; ++y) best = std::max(best, ab[static_cast<std::size_t>(((long(k) + y) % long(samples) + long(samples)) % long(samples))]);
                    acc += best;
                }
                l1 *= gs * acc * step;
                mu *= gs * 2 * rr;
                break;
            }
        }
    }
    return l1 * l1 / mu;
}

CarlesonResult carleson_constant(const DiscreteSet& set, const Box& window, const Spectrum& spectrum,
                                 const CarlesonOptions& opt, const GridPolicy& policy) {
    auto s = synthesize_system(set, window, spectrum, policy);
    CarlesonResult r;
    r.trials = opt.trials;
    r.seed = opt.seed;
    if (s.size()) r.exact = eigenvalues_of(exact_gram(s)).maxCoeff();
    Eigen::MatrixXcd v = frame_test_space(s, opt.frame);
    for (std::size_t t = 0; t < opt.trials && v.cols() > 0; ++t)
        r.empirical = std::max(r.empirical, sampling_ratio(s, random_function(v, opt.seed + t)));
    r.analytic = carleson_analytic_bound(set.group, spectrum, set.separation, opt.margin_fraction);
    return r;
}

PerturbationResult perturbation_bound(const DiscreteSet& set, const Box& window, const Spectrum& spectrum,
                                      const ShiftMap& shift, double radius, std::size_t trials, std::uint64_t seed,
                                      const GridPolicy& policy) {
    auto s = synthesize_system(set, window, spectrum, policy);
    PointCloud moved;
    moved.dim = s.points.dim;
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto p = s.points.point(i);
        auto q = shift(p);
        if (q.size() != p.size()) fail(ErrorKind::InvalidElement, "perturbation_bound: shift changed the dimension");
        if (distance(set.group, p, q) > radius * (1 + 1e-12))
            fail(ErrorKind::InvalidSet, "perturbation_bound: shift exceeds the declared radius");
        moved.coords.insert(moved.coords.end(), q.begin(), q.end());
    }
    auto s2 = synthesize_system(set.group, moved, spectrum, s.grid);
    Eigen::MatrixXcd d = s.vectors - s2.vectors;
    Eigen::MatrixXcd v = frame_test_space(s, FrameOptions{});
    PerturbationResult r;
    r.radius = radius;
    r.trials = trials;
    r.seed = seed;
    for (std::size_t t = 0; t < trials && v.cols() > 0; ++t) {
        auto f = random_function(v, seed + t);
        r.bound = std::max(r.bound, (d.adjoint() * f).squaredNorm() / f.squaredNorm());
    }
    return r;
}

}  // namespace landau
