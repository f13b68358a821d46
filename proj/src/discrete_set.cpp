#include "landau/discrete_set.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "landau/errors.hpp"

namespace landau {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::size_t> real_axes(const LcaGroup& g) {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < g.rank(); ++i)
        if (g.factor(i).kind == FactorKind::RealLine) r.push_back(i);
    return r;
}

std::int64_t imod(std::int64_t a, std::int64_t n) {
    auto r = a % n;
    return r < 0 ? r + n : r;
}

const LatticeGenerator* base_lattice(const DiscreteSet& s) {
    if (auto* l = std::get_if<LatticeGenerator>(&s.generator)) return l;
    if (auto* p = std::get_if<PerturbedLattice>(&s.generator)) return &p->base;
    return nullptr;
}

bool diagonal_positive(const LatticeGenerator& l, std::size_t d) {
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            double v = l.real_basis[a * d + b];
            if (a == b ? !(v > 0) : v != 0) return false;
        }
    return true;
}

// Integer k range with lo <= c + b*k <= hi, b > 0, evaluated with the same
// floating expression the enumerator uses.
std::pair<std::int64_t, std::int64_t> axis_range(double c, double b, double lo, double hi) {
    auto val = [&](std::int64_t k) { return c + b * static_cast<double>(k); };
    auto klo = static_cast<std::int64_t>(std::ceil((lo - c) / b));
    while (val(klo - 1) >= lo) --klo;
    while (val(klo) < lo) ++klo;
    auto khi = static_cast<std::int64_t>(std::floor((hi - c) / b));
    while (val(khi + 1) <= hi) ++khi;
    while (val(khi) > hi) --khi;
    return {klo, khi};
}

// Values taken by the coset offset `c` plus the factor's step subgroup inside the window component.
std::vector<double> factor_values(const ElementaryFactor& f, double step, double c, const BoxComponent& w,
                                  std::size_t budget) {
    std::vector<double> out;
    switch (f.kind) {
        case FactorKind::Integers: {
            auto m = static_cast<std::int64_t>(step);
            auto ci = static_cast<std::int64_t>(std::llround(c));
            std::vector<std::int64_t> vals;
            for (const auto& iv : w.intervals) {
                auto lo = static_cast<std::int64_t>(std::ceil(iv.lo - 1e-9));
                auto hi = static_cast<std::int64_t>(std::floor(iv.hi + 1e-9));
                if (hi < lo) continue;
                auto jlo = static_cast<std::int64_t>(std::ceil(double(lo - ci) / double(m)));
                auto jhi = static_cast<std::int64_t>(std::floor(double(hi - ci) / double(m)));
                if (jhi >= jlo && static_cast<std::size_t>(jhi - jlo + 1) > budget)
                    fail(ErrorKind::Budget, "enumeration exceeds the point budget");
                for (auto j = jlo; j <= jhi; ++j) vals.push_back(ci + m * j);
            }
            for (auto p : w.points)
                if (imod(p - ci, m) == 0) vals.push_back(p);
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            for (auto v : vals) out.push_back(static_cast<double>(v));
            break;
        }
        case FactorKind::Torus: {
            auto n = static_cast<std::int64_t>(step);
            for (std::int64_t j = 0; j < n; ++j) {
                double t = std::fmod(c + kTwoPi * static_cast<double>(j) / static_cast<double>(n), kTwoPi);
                if (t < 0) t += kTwoPi;
                if (component_contains(f, w, t)) out.push_back(t);
            }
            std::sort(out.begin(), out.end());
            break;
        }
        case FactorKind::Cyclic: {
            auto s = static_cast<std::int64_t>(step);
            auto ci = static_cast<std::int64_t>(std::llround(c));
            for (std::int64_t j = 0; j < f.order / s; ++j) {
                auto r = imod(ci + s * j, f.order);
                if (component_contains(f, w, static_cast<double>(r))) out.push_back(static_cast<double>(r));
            }
            std::sort(out.begin(), out.end());
            break;
        }
        case FactorKind::RealLine: break;
    }
    return out;
}

void lattice_points(const LcaGroup& g, const LatticeGenerator& l, const Box& w, std::size_t budget, PointCloud& out) {
    auto axes = real_axes(g);
    const std::size_t d = axes.size();
    Eigen::MatrixXd basis(d, d), inv;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) basis(a, b) = l.real_basis[a * d + b];
    if (d) inv = basis.inverse();

    for (const auto& c : l.cosets) {
        std::vector<std::vector<double>> vals(g.rank());
        std::size_t estimate = 1;
        for (std::size_t i = 0; i < g.rank(); ++i) {
            if (g.factor(i).kind == FactorKind::RealLine) continue;
            vals[i] = factor_values(g.factor(i), l.steps[i], c[i], w[i], budget);
            estimate *= vals[i].size();
            if (vals[i].empty()) break;
        }
        if (estimate == 0) continue;

        // k ranges from the corners of the real window
        std::vector<std::int64_t> klo(d), khi(d);
        if (d) {
            std::vector<double> mn(d, std::numeric_limits<double>::infinity()), mx(d, -mn[0]);
            for (std::size_t corner = 0; corner < (std::size_t(1) << d); ++corner) {
                Eigen::VectorXd x(d);
                for (std::size_t a = 0; a < d; ++a) {
                    const auto& iv = w[axes[a]].intervals[0];
                    x(a) = ((corner >> a) & 1 ? iv.hi : iv.lo) - c[axes[a]];
                }
                Eigen::VectorXd k = inv * x;
                for (std::size_t a = 0; a < d; ++a) { mn[a] = std::min(mn[a], k(a)); mx[a] = std::max(mx[a], k(a)); }
            }
            for (std::size_t a = 0; a < d; ++a) {
                klo[a] = static_cast<std::int64_t>(std::floor(mn[a])) - 1;
                khi[a] = static_cast<std::int64_t>(std::ceil(mx[a])) + 1;
                double span = double(khi[a] - klo[a] + 1);
                if (span * double(estimate) > double(budget) * 4.0 + 64)
                    fail(ErrorKind::Budget, "enumeration exceeds the point budget");
                estimate *= static_cast<std::size_t>(span);
            }
        }

        std::vector<std::int64_t> k(klo);
        std::vector<double> pt(g.rank());
        auto emit_real = [&](auto&& self, std::size_t a) -> void {
            if (a == d) {
                for (std::size_t r = 0; r < d; ++r) {
                    double v = c[axes[r]];
                    for (std::size_t b = 0; b < d; ++b) v += l.real_basis[r * d + b] * static_cast<double>(k[b]);
                    const auto& iv = w[axes[r]].intervals[0];
                    if (v < iv.lo || v > iv.hi) return;
                    pt[axes[r]] = v;
                }
                // product over the non-real factor values
                std::vector<std::size_t> idx(g.rank(), 0);
                while (true) {
                    for (std::size_t i = 0; i < g.rank(); ++i)
                        if (g.factor(i).kind != FactorKind::RealLine) pt[i] = vals[i][idx[i]];
                    out.coords.insert(out.coords.end(), pt.begin(), pt.end());
                    if (out.size() > budget) fail(ErrorKind::Budget, "enumeration exceeds the point budget");
                    std::size_t i = 0;
                    for (; i < g.rank(); ++i) {
                        if (g.factor(i).kind == FactorKind::RealLine) continue;
                        if (++idx[i] < vals[i].size()) break;
                        idx[i] = 0;
                    }
                    if (i == g.rank()) break;
                }
                return;
            }
            for (k[a] = klo[a]; k[a] <= khi[a]; ++k[a]) self(self, a + 1);
        };
        emit_real(emit_real, 0);
    }
}

void sort_unique(PointCloud& pc) {
    const std::size_t n = pc.size(), dim = pc.dim;
    if (n < 2) return;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto at = [&](std::size_t i) { return pc.coords.begin() + static_cast<std::ptrdiff_t>(i * dim); };
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(at(a), at(a) + static_cast<std::ptrdiff_t>(dim), at(b),
                                            at(b) + static_cast<std::ptrdiff_t>(dim));
    });
    std::vector<double> out;
    out.reserve(pc.coords.size());
    for (std::size_t j = 0; j < n; ++j) {
        auto p = at(idx[j]);
        if (j && std::equal(p, p + static_cast<std::ptrdiff_t>(dim), at(idx[j - 1]))) continue;
        out.insert(out.end(), p, p + static_cast<std::ptrdiff_t>(dim));
    }
    pc.coords = std::move(out);
}

std::uint64_t hash_point(std::uint64_t seed, const double* p, std::size_t dim) {
    std::uint64_t h = splitmix64(seed);
    for (std::size_t i = 0; i < dim; ++i) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(p[i] + 0.0));
    return h;
}

void perturb(const LcaGroup& g, const PerturbedLattice& p, double* pt) {
    const std::size_t dim = g.rank();
    std::uint64_t h = hash_point(p.seed, pt, dim);
    std::size_t a = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (g.factor(i).kind != FactorKind::RealLine) continue;
        std::uint64_t r = splitmix64(h + 0x9e3779b97f4a7c15ULL * (++a));
        double u = static_cast<double>(r >> 11) * 0x1.0p-53;
        pt[i] += p.amplitude * (2.0 * u - 1.0);
    }
}

Box grow(const LcaGroup& g, const Box& w, double amount) {
    Box out = w;
    for (std::size_t i = 0; i < g.rank(); ++i)
        if (g.factor(i).kind == FactorKind::RealLine) {
            out[i].intervals[0].lo -= amount;
            out[i].intervals[0].hi += amount;
        }
    return out;
}

std::size_t lattice_count_fast(const LcaGroup& g, const LatticeGenerator& l, const Box& w) {
    auto axes = real_axes(g);
    const std::size_t d = axes.size();
    std::size_t total = 0;
    for (const auto& c : l.cosets) {
        std::size_t n = 1;
        for (std::size_t a = 0; a < d && n; ++a) {
            const auto& iv = w[axes[a]].intervals[0];
            if (iv.hi < iv.lo) { n = 0; break; }
            auto [klo, khi] = axis_range(c[axes[a]], l.real_basis[a * d + a], iv.lo, iv.hi);
            n *= khi >= klo ? static_cast<std::size_t>(khi - klo + 1) : 0;
        }
        for (std::size_t i = 0; i < g.rank() && n; ++i) {
            const auto& f = g.factor(i);
            if (f.kind == FactorKind::RealLine) continue;
            if (f.kind == FactorKind::Integers && w[i].points.empty()) {
                auto m = static_cast<std::int64_t>(l.steps[i]);
                auto ci = static_cast<std::int64_t>(std::llround(c[i]));
                std::size_t cnt = 0;
                std::int64_t prev_hi = std::numeric_limits<std::int64_t>::min();
                auto ivs = w[i].intervals;
                std::sort(ivs.begin(), ivs.end(), [](auto& x, auto& y) { return x.lo < y.lo; });
                for (const auto& iv : ivs) {
                    auto lo = std::max(static_cast<std::int64_t>(std::ceil(iv.lo - 1e-9)), prev_hi + 1);
                    auto hi = static_cast<std::int64_t>(std::floor(iv.hi + 1e-9));
                    if (hi < lo) continue;
                    auto jlo = static_cast<std::int64_t>(std::ceil(double(lo - ci) / double(m)));
                    auto jhi = static_cast<std::int64_t>(std::floor(double(hi - ci) / double(m)));
                    if (jhi >= jlo) cnt += static_cast<std::size_t>(jhi - jlo + 1);
                    prev_hi = hi;
                }
                n *= cnt;
            } else {
                n *= factor_values(f, l.steps[i], c[i], w[i], std::numeric_limits<std::size_t>::max()).size();
            }
        }
        total += n;
    }
    return total;
}

// No two coset offsets congruent modulo the lattice (diagonal real part assumed).
bool distinct_cosets(const LcaGroup& g, const LatticeGenerator& l) {
    const std::size_t d = g.real_dimension();
    for (std::size_t x = 0; x < l.cosets.size(); ++x)
        for (std::size_t y = x + 1; y < l.cosets.size(); ++y) {
            bool congruent = true;
            std::size_t a = 0;
            for (std::size_t i = 0; i < g.rank() && congruent; ++i) {
                double diff = l.cosets[x][i] - l.cosets[y][i];
                double q = 0;
                switch (g.factor(i).kind) {
                    case FactorKind::RealLine: q = diff / l.real_basis[a * d + a]; ++a; break;
                    case FactorKind::Torus: q = diff * l.steps[i] / kTwoPi; break;
                    default: q = diff / l.steps[i]; break;
                }
                congruent = std::abs(q - std::round(q)) < 1e-9;
            }
            if (congruent) return false;
        }
    return true;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void validate_set(const DiscreteSet& s) {
    const auto& g = s.group;
    if (!(s.separation > 0)) fail(ErrorKind::InvalidSet, "separation radius must be positive");
    const std::size_t d = g.real_dimension();
    auto check_lattice = [&](const LatticeGenerator& l) {
        if (l.real_basis.size() != d * d) fail(ErrorKind::InvalidSet, "real basis must be d x d");
        if (d) {
            Eigen::MatrixXd b(d, d);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t c = 0; c < d; ++c) b(a, c) = l.real_basis[a * d + c];
            if (std::abs(b.determinant()) < 1e-12) fail(ErrorKind::InvalidSet, "real basis is singular");
        }
        if (l.steps.size() != g.rank()) fail(ErrorKind::InvalidSet, "one step per factor required");
        for (std::size_t i = 0; i < g.rank(); ++i) {
            const auto& f = g.factor(i);
            if (f.kind == FactorKind::RealLine) continue;
            double st = l.steps[i];
            if (!(st >= 1) || std::abs(st - std::round(st)) > 0) fail(ErrorKind::InvalidSet, "steps must be positive integers");
            if (f.kind == FactorKind::Cyclic && f.order % static_cast<std::int64_t>(st) != 0)
                fail(ErrorKind::InvalidSet, "cyclic step must divide the order");
        }
        if (l.cosets.empty()) fail(ErrorKind::InvalidSet, "lattice needs at least one coset offset");
        for (const auto& c : l.cosets) normalize_coords(g, c);
    };
    if (auto* l = std::get_if<LatticeGenerator>(&s.generator)) check_lattice(*l);
    else if (auto* p = std::get_if<PerturbedLattice>(&s.generator)) {
        check_lattice(p->base);
        if (!(p->amplitude >= 0) || !std::isfinite(p->amplitude)) fail(ErrorKind::InvalidSet, "perturbation amplitude must be >= 0");
    } else {
        for (const auto& p : std::get<ExplicitList>(s.generator).points) normalize_coords(g, p);
    }
}

DiscreteSet lattice_set(const LcaGroup& g, LatticeGenerator gen, double separation) {
    DiscreteSet s{g, std::move(gen), separation};
    validate_set(s);
    return s;
}

DiscreteSet canonical_lattice(const LcaGroup& g) { return scaled_reference_lattice(g, 1.0); }

DiscreteSet scaled_reference_lattice(const LcaGroup& g, double mu) {
    const std::size_t d = g.real_dimension();
    if (!(mu > 0)) fail(ErrorKind::InvalidSet, "density must be positive");
    if (d == 0 && mu != 1.0) fail(ErrorKind::NotSupported, "rescaled reference lattice needs a real factor");
    double t = d ? std::pow(mu, -1.0 / static_cast<double>(d)) : 1.0;
    LatticeGenerator l;
    l.real_basis.assign(d * d, 0.0);
    for (std::size_t a = 0; a < d; ++a) l.real_basis[a * d + a] = t;
    l.steps.assign(g.rank(), 1.0);
    l.cosets = {std::vector<double>(g.rank(), 0.0)};
    return lattice_set(g, std::move(l), std::min(1.0, t));
}

PointCloud enumerate(const DiscreteSet& s, const Box& window) {
    const auto& g = s.group;
    validate_box(g, window, "window");
    PointCloud pc;
    pc.dim = g.rank();
    if (auto* l = std::get_if<LatticeGenerator>(&s.generator)) {
        lattice_points(g, *l, window, s.point_budget, pc);
    } else if (auto* p = std::get_if<PerturbedLattice>(&s.generator)) {
        PointCloud base;
        base.dim = g.rank();
        lattice_points(g, p->base, grow(g, window, p->amplitude), s.point_budget, base);
        sort_unique(base);
        for (std::size_t i = 0; i < base.size(); ++i) {
            double* pt = base.coords.data() + i * base.dim;
            perturb(g, *p, pt);
            if (box_contains(g, window, std::vector<double>(pt, pt + base.dim)))
                pc.coords.insert(pc.coords.end(), pt, pt + base.dim);
        }
    } else {
        for (const auto& raw : std::get<ExplicitList>(s.generator).points) {
            auto q = normalize_coords(g, raw);
            if (box_contains(g, window, q)) pc.coords.insert(pc.coords.end(), q.begin(), q.end());
            if (pc.size() > s.point_budget) fail(ErrorKind::Budget, "enumeration exceeds the point budget");
        }
    }
    sort_unique(pc);
    return pc;
}

bool has_fast_count(const DiscreteSet& s) {
    const LatticeGenerator* base = base_lattice(s);
    return base && diagonal_positive(*base, s.group.real_dimension()) && distinct_cosets(s.group, *base);
}

std::size_t count(const DiscreteSet& s, const Box& window) {
    const auto& g = s.group;
    const std::size_t d = g.real_dimension();
    const LatticeGenerator* base = base_lattice(s);
    if (!base || !diagonal_positive(*base, d) || !distinct_cosets(g, *base)) return enumerate(s, window).size();
    validate_box(g, window, "window");
    if (std::holds_alternative<LatticeGenerator>(s.generator)) return lattice_count_fast(g, *base, window);
    // Perturbed: interior of the shrunk window is exact; the shell is enumerated.
    const auto& p = std::get<PerturbedLattice>(s.generator);
    const double a = p.amplitude;
    if (a == 0) return lattice_count_fast(g, *base, window);
    auto axes = real_axes(g);
    Box inner = grow(g, window, -a);
    bool inner_empty = false;
    for (auto ax : axes)
        if (inner[ax].intervals[0].hi < inner[ax].intervals[0].lo) inner_empty = true;
    if (inner_empty) return enumerate(s, window).size();
    std::size_t n = lattice_count_fast(g, *base, inner);
    Box outer = grow(g, window, a);
    PointCloud shell;
    shell.dim = g.rank();
    for (auto ax : axes) {
        for (int side = 0; side < 2; ++side) {
            Box slab = outer;
            const auto& iv = window[ax].intervals[0];
            double edge = side ? iv.hi : iv.lo;
            slab[ax].intervals[0] = {edge - a, edge + a};
            lattice_points(g, *base, slab, s.point_budget, shell);
        }
    }
    sort_unique(shell);
    for (std::size_t i = 0; i < shell.size(); ++i) {
        auto pt = shell.point(i);
        if (box_contains(g, inner, pt)) continue;
        perturb(g, p, pt.data());
        if (box_contains(g, window, pt)) ++n;
    }
    return n;
}

double min_separation(const DiscreteSet& s, const Box& window) {
    const auto& g = s.group;
    PointCloud pc = enumerate(s, window);
    const std::size_t n = pc.size();
    double best = std::numeric_limits<double>::infinity();
    if (n < 2) return best;
    std::size_t axis = g.rank();
    for (std::size_t i = 0; i < g.rank(); ++i)
        if (g.factor(i).kind == FactorKind::RealLine || g.factor(i).kind == FactorKind::Integers) { axis = i; break; }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto coord = [&](std::size_t i, std::size_t a) { return pc.coords[i * pc.dim + a]; };
    if (axis < g.rank())
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return coord(a, axis) < coord(b, axis); });
    for (std::size_t i = 0; i < n; ++i) {
        auto pi = pc.point(idx[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (axis < g.rank() && coord(idx[j], axis) - coord(idx[i], axis) >= best) break;
            best = std::min(best, distance(g, pi, pc.point(idx[j])));
        }
    }
    return best;
}

void separation_check(const DiscreteSet& s, const Box& window) {
    double m = min_separation(s, window);
    if (m < s.separation * (1 - 1e-12))
        fail(ErrorKind::Separation, "points closer than the declared separation: found " + std::to_string(m) +
                                        ", declared " + std::to_string(s.separation));
}

double packing_bound(const DiscreteSet& s) {
    const auto& g = s.group;
    double r = 0.5 * s.separation, m = 1;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        switch (f.kind) {
            case FactorKind::RealLine: m *= 1.0 / (2 * r); break;
            case FactorKind::Torus: m *= kTwoPi / std::min(2 * r, kTwoPi); break;
            case FactorKind::Integers: m *= 1.0 / (2 * std::floor(r) + 1); break;
            case FactorKind::Cyclic:
                m *= 1.0 / std::min(2 * std::floor(r) + 1, static_cast<double>(f.order));
                break;
        }
    }
    return m;
}

}  // namespace landau
