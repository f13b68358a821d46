#include "landau/box.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "landau/errors.hpp"

namespace landau {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool integral(double v) { return std::abs(v - std::round(v)) < 1e-9; }

std::int64_t mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

// sin(u)/u without cancellation near zero.
double sinc(double u) {
    if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

std::complex<double> interval_integral(double lo, double hi, double c) {
    double len = hi - lo;
    return std::polar(len * sinc(0.5 * c * len), 0.5 * c * (lo + hi));
}

// sum_{n=a}^{b} exp(i c n)
std::complex<double> dirichlet_sum(std::int64_t a, std::int64_t b, double c) {
    if (b < a) return 0.0;
    double count = static_cast<double>(b - a + 1);
    double s = std::sin(0.5 * c);
    if (std::abs(s) < 1e-12) return std::polar(count, c * static_cast<double>(a));
    double mag = std::sin(0.5 * c * count) / s;
    return std::polar(mag, 0.5 * c * static_cast<double>(a + b));
}

std::int64_t int_lo(const Interval& iv) { return static_cast<std::int64_t>(std::ceil(iv.lo - 1e-9)); }
std::int64_t int_hi(const Interval& iv) { return static_cast<std::int64_t>(std::floor(iv.hi + 1e-9)); }

std::vector<Interval> merge_integer_intervals(std::vector<Interval> v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi + 1) out.back().hi = std::max(out.back().hi, iv.hi);
        else out.push_back(iv);
    }
    return out;
}
}  // namespace

void validate_box(const LcaGroup& g, const Box& b, const char* what) {
    if (b.size() != g.rank())
        fail(ErrorKind::InvalidWindow, std::string(what) + ": box has " + std::to_string(b.size()) +
                                           " components, group has " + std::to_string(g.rank()));
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& f = g.factor(i);
        const auto& c = b[i];
        for (const auto& iv : c.intervals)
            if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.hi < iv.lo)
                fail(ErrorKind::InvalidWindow, std::string(what) + ": interval endpoints must be finite with lo <= hi");
        switch (f.kind) {
            case FactorKind::RealLine:
                if (c.full || !c.points.empty() || c.intervals.size() != 1)
                    fail(ErrorKind::InvalidWindow, std::string(what) + ": a real factor needs exactly one interval");
                break;
            case FactorKind::Torus:
                if (!c.points.empty()) fail(ErrorKind::InvalidWindow, std::string(what) + ": torus components are arcs");
                for (const auto& iv : c.intervals)
                    if (iv.length() > kTwoPi + 1e-12)
                        fail(ErrorKind::InvalidWindow, std::string(what) + ": arc longer than the circle");
                break;
            case FactorKind::Integers:
                if (c.full) fail(ErrorKind::InvalidWindow, std::string(what) + ": Z is not compact");
                [[fallthrough]];
            case FactorKind::Cyclic:
                for (const auto& iv : c.intervals)
                    if (!integral(iv.lo) || !integral(iv.hi))
                        fail(ErrorKind::InvalidWindow, std::string(what) + ": integer ranges need integral endpoints");
                break;
        }
    }
}

std::vector<std::int64_t> discrete_values(const ElementaryFactor& f, const BoxComponent& c) {
    std::set<std::int64_t> s;
    if (f.kind == FactorKind::Cyclic) {
        if (c.full) {
            std::vector<std::int64_t> all(static_cast<std::size_t>(f.order));
            std::iota(all.begin(), all.end(), 0);
            return all;
        }
        for (auto p : c.points) s.insert(mod(p, f.order));
        for (const auto& iv : c.intervals) {
            auto lo = int_lo(iv), hi = int_hi(iv);
            if (hi - lo + 1 >= f.order) hi = lo + f.order - 1;
            for (auto v = lo; v <= hi; ++v) s.insert(mod(v, f.order));
        }
    } else {
        for (auto p : c.points) s.insert(p);
        for (const auto& iv : c.intervals)
            for (auto v = int_lo(iv); v <= int_hi(iv); ++v) s.insert(v);
    }
    return {s.begin(), s.end()};
}

double component_measure(const ElementaryFactor& f, double scale, const BoxComponent& c) {
    switch (f.kind) {
        case FactorKind::RealLine: return scale * c.intervals.at(0).length();
        case FactorKind::Torus: {
            if (c.full) return scale * kTwoPi;
            double len = 0;
            for (const auto& iv : c.intervals) len += iv.length();
            return scale * std::min(len, kTwoPi);
        }
        case FactorKind::Integers: {
            if (c.points.empty()) {
                double n = 0;
                for (const auto& iv : merge_integer_intervals(c.intervals))
                    n += static_cast<double>(std::max<std::int64_t>(0, int_hi(iv) - int_lo(iv) + 1));
                return scale * n;
            }
            return scale * static_cast<double>(discrete_values(f, c).size());
        }
        case FactorKind::Cyclic:
            if (c.full) return scale * static_cast<double>(f.order);
            return scale * static_cast<double>(discrete_values(f, c).size());
    }
    return 0;
}

double box_measure(const LcaGroup& g, const Box& b) {
    double m = 1;
    for (std::size_t i = 0; i < g.rank(); ++i) m *= component_measure(g.factor(i), g.haar_scale(i), b[i]);
    return m;
}

bool component_contains(const ElementaryFactor& f, const BoxComponent& c, double x) {
    if (c.full) return true;
    switch (f.kind) {
        case FactorKind::RealLine: return c.intervals[0].lo <= x && x <= c.intervals[0].hi;
        case FactorKind::Torus:
            for (const auto& iv : c.intervals) {
                double t = std::fmod(x - iv.lo, kTwoPi);
                if (t < 0) t += kTwoPi;
                if (t <= iv.length() + 1e-12 || kTwoPi - t <= 1e-12) return true;
            }
            return false;
        case FactorKind::Integers: {
            auto v = static_cast<std::int64_t>(std::llround(x));
            for (const auto& iv : c.intervals)
                if (int_lo(iv) <= v && v <= int_hi(iv)) return true;
            return std::find(c.points.begin(), c.points.end(), v) != c.points.end();
        }
        case FactorKind::Cyclic: {
            auto v = mod(static_cast<std::int64_t>(std::llround(x)), f.order);
            for (auto p : c.points)
                if (mod(p, f.order) == v) return true;
            for (const auto& iv : c.intervals) {
                auto lo = int_lo(iv), hi = int_hi(iv);
                if (hi - lo + 1 >= f.order) return true;
                auto off = mod(v - lo, f.order);
                if (off <= hi - lo) return true;
            }
            return false;
        }
    }
    return false;
}

bool box_contains(const LcaGroup& g, const Box& b, const std::vector<double>& x) {
    for (std::size_t i = 0; i < g.rank(); ++i)
        if (!component_contains(g.factor(i), b[i], x[i])) return false;
    return true;
}

Box minkowski(const LcaGroup& g, const Box& k, const Box& l) {
    Box out(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        const auto& a = k[i];
        const auto& b = l[i];
        auto& o = out[i];
        switch (f.kind) {
            case FactorKind::RealLine:
                o = BoxComponent::interval(a.intervals[0].lo + b.intervals[0].lo, a.intervals[0].hi + b.intervals[0].hi);
                break;
            case FactorKind::Torus:
                if (a.full || b.full) { o = BoxComponent::whole(); break; }
                for (const auto& x : a.intervals)
                    for (const auto& y : b.intervals) {
                        if (x.length() + y.length() >= kTwoPi) { o = BoxComponent::whole(); break; }
                        o.intervals.push_back({x.lo + y.lo, x.hi + y.hi});
                    }
                if (o.full) o.intervals.clear();
                break;
            case FactorKind::Integers: {
                auto as = a.intervals, bs = b.intervals;
                for (auto p : a.points) as.push_back({double(p), double(p)});
                for (auto p : b.points) bs.push_back({double(p), double(p)});
                std::vector<Interval> sums;
                for (const auto& x : as)
                    for (const auto& y : bs) sums.push_back({x.lo + y.lo, x.hi + y.hi});
                o.intervals = merge_integer_intervals(std::move(sums));
                break;
            }
            case FactorKind::Cyclic: {
                if (a.full || b.full) { o = BoxComponent::whole(); break; }
                std::set<std::int64_t> s;
                for (auto x : discrete_values(f, a))
                    for (auto y : discrete_values(f, b)) s.insert(mod(x + y, f.order));
                if (static_cast<std::int64_t>(s.size()) == f.order) o = BoxComponent::whole();
                else o.points.assign(s.begin(), s.end());
                break;
            }
        }
    }
    return out;
}

Box translate(const LcaGroup& g, const Box& b, const std::vector<double>& x) {
    Box out = b;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        auto& c = out[i];
        if (c.full) continue;
        for (auto& iv : c.intervals) { iv.lo += x[i]; iv.hi += x[i]; }
        auto shift = static_cast<std::int64_t>(std::llround(x[i]));
        for (auto& p : c.points) p += shift;
        if (g.factor(i).kind == FactorKind::Cyclic)
            for (auto& p : c.points) p = mod(p, g.factor(i).order);
    }
    return out;
}

std::complex<double> component_character_integral(const ElementaryFactor& f, double scale, const BoxComponent& comp,
                                                  double c) {
    std::complex<double> acc = 0;
    switch (f.kind) {
        case FactorKind::RealLine: acc = interval_integral(comp.intervals[0].lo, comp.intervals[0].hi, c); break;
        case FactorKind::Torus:
            if (comp.full) {
                acc = std::abs(c) < 1e-9 ? kTwoPi : (integral(c) ? 0.0 : interval_integral(0, kTwoPi, c));
            } else {
                for (const auto& iv : comp.intervals) acc += interval_integral(iv.lo, iv.hi, c);
            }
            break;
        case FactorKind::Integers:
            if (comp.points.empty()) {
                for (const auto& iv : merge_integer_intervals(comp.intervals)) acc += dirichlet_sum(int_lo(iv), int_hi(iv), c);
            } else {
                for (auto v : discrete_values(f, comp)) acc += std::polar(1.0, c * static_cast<double>(v));
            }
            break;
        case FactorKind::Cyclic:
            if (comp.full) acc = dirichlet_sum(0, f.order - 1, c);
            else
                for (auto v : discrete_values(f, comp)) acc += std::polar(1.0, c * static_cast<double>(v));
            break;
    }
    return scale * acc;
}

std::complex<double> box_character_integral(const LcaGroup& g, const Box& b, const std::vector<double>& coeff) {
    std::complex<double> r = 1.0;
    for (std::size_t i = 0; i < g.rank(); ++i)
        r *= component_character_integral(g.factor(i), g.haar_scale(i), b[i], coeff[i]);
    return r;
}

void validate_spectrum(const Spectrum& s) {
    if (s.pieces.empty()) fail(ErrorKind::InvalidSpectrum, "spectrum has no pieces");
    for (const auto& p : s.pieces) validate_box(s.dual_group, p, "spectrum piece");
    // Pairwise disjointness up to measure zero, tested on the real/torus
    // overlap of each pair.
    const auto& g = s.dual_group;
    for (std::size_t a = 0; a < s.pieces.size(); ++a)
        for (std::size_t b = a + 1; b < s.pieces.size(); ++b) {
            double overlap = 1;
            for (std::size_t i = 0; i < g.rank() && overlap > 0; ++i) {
                const auto& f = g.factor(i);
                const auto& x = s.pieces[a][i];
                const auto& y = s.pieces[b][i];
                if (f.kind == FactorKind::RealLine) {
                    overlap *= std::max(0.0, std::min(x.intervals[0].hi, y.intervals[0].hi) -
                                                 std::max(x.intervals[0].lo, y.intervals[0].lo));
                } else if (f.is_discrete()) {
                    auto vx = discrete_values(f, x), vy = discrete_values(f, y);
                    std::vector<std::int64_t> common;
                    std::set_intersection(vx.begin(), vx.end(), vy.begin(), vy.end(), std::back_inserter(common));
                    overlap *= static_cast<double>(common.size());
                }
            }
            if (overlap > 1e-12) fail(ErrorKind::InvalidSpectrum, "spectrum pieces overlap in positive measure");
        }
}

double haar(const Spectrum& s) {
    double m = 0;
    for (const auto& p : s.pieces) m += box_measure(s.dual_group, p);
    return m;
}

bool spectrum_contains(const Spectrum& s, const std::vector<double>& omega) {
    for (const auto& p : s.pieces)
        if (box_contains(s.dual_group, p, omega)) return true;
    return false;
}

std::complex<double> spectrum_character_integral(const Spectrum& s, const GroupElement& x) {
    const auto& g = s.dual_group;
    std::vector<double> coeff(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) coeff[i] = phase_coefficient(g.factor(i), x[i]);
    std::complex<double> acc = 0;
    for (const auto& p : s.pieces) acc += box_character_integral(g, p, coeff);
    return acc;
}

bool subgroup_contains(const Subgroup& h, const std::vector<double>& x) {
    for (std::size_t i = 0; i < h.group.rank(); ++i) {
        const auto& f = h.group.factor(i);
        const auto& s = h.factors[i];
        if (s.type == SubgroupFactor::Type::Whole) continue;
        if (s.type == SubgroupFactor::Type::Trivial) {
            if (factor_distance(f, x[i], 0) > 1e-9) return false;
            continue;
        }
        double q = 0;
        switch (f.kind) {
            case FactorKind::Torus: q = x[i] * s.step / kTwoPi; break;
            default: q = x[i] / s.step; break;
        }
        if (!integral(q)) return false;
    }
    return true;
}

Subgroup annihilator(const Subgroup& h) {
    Subgroup out{dual(h.group), {}};
    using T = SubgroupFactor::Type;
    for (std::size_t i = 0; i < h.group.rank(); ++i) {
        const auto& f = h.group.factor(i);
        const auto& s = h.factors[i];
        SubgroupFactor a;
        switch (f.kind) {
            case FactorKind::RealLine:
                if (s.type == T::Trivial) a = {T::Whole, 0};
                else if (s.type == T::Whole) a = {T::Trivial, 0};
                else a = {T::Lattice, kTwoPi / s.step};
                break;
            case FactorKind::Integers:
                if (s.type == T::Trivial) a = {T::Whole, 0};
                else if (s.type == T::Whole || s.step == 1) a = {T::Trivial, 0};
                else a = {T::Lattice, s.step};
                break;
            case FactorKind::Torus:
                if (s.type == T::Whole) a = {T::Trivial, 0};
                else if (s.type == T::Trivial || s.step == 1) a = {T::Whole, 0};
                else a = {T::Lattice, s.step};
                break;
            case FactorKind::Cyclic: {
                auto n = f.order;
                std::int64_t d = s.type == T::Whole ? 1 : s.type == T::Trivial ? n : static_cast<std::int64_t>(s.step);
                if (d < 1 || n % d != 0) fail(ErrorKind::InvalidGroup, "cyclic subgroup step must divide the order");
                a = {T::Lattice, static_cast<double>(n / d)};
                break;
            }
        }
        out.factors.push_back(a);
    }
    return out;
}

Reduction reduce_to_compactly_generated(const Spectrum& s) {
    validate_spectrum(s);
    using T = SubgroupFactor::Type;
    const LcaGroup& gd = s.dual_group;
    LcaGroup g = dual(gd);
    Subgroup h{gd, {}};
    for (std::size_t i = 0; i < gd.rank(); ++i) {
        const auto& f = gd.factor(i);
        SubgroupFactor sf;
        switch (f.kind) {
            case FactorKind::RealLine:
            case FactorKind::Torus: {
                bool spread = false, nonzero = false;
                for (const auto& p : s.pieces) {
                    const auto& c = p[i];
                    if (c.full) spread = true;
                    for (const auto& iv : c.intervals) {
                        if (iv.length() > 0) spread = true;
                        else if (factor_distance(f, iv.lo, 0) > 0) nonzero = true;
                    }
                }
                if (!spread && nonzero)
                    fail(ErrorKind::NotSupported, "spectrum with isolated non-zero points on a continuous factor");
                sf = {spread ? T::Whole : T::Trivial, 0};
                break;
            }
            case FactorKind::Integers:
            case FactorKind::Cyclic: {
                std::int64_t gcd = f.kind == FactorKind::Cyclic ? f.order : 0;
                for (const auto& p : s.pieces)
                    for (auto v : discrete_values(f, p[i])) gcd = std::gcd(gcd, v < 0 ? -v : v);
                if (f.kind == FactorKind::Integers) sf = gcd == 0 ? SubgroupFactor{T::Trivial, 0} : SubgroupFactor{T::Lattice, double(gcd)};
                else sf = {T::Lattice, double(gcd)};
                break;
            }
        }
        h.factors.push_back(sf);
    }
    Subgroup k = annihilator(h);

    std::vector<ElementaryFactor> qf;
    std::vector<std::size_t> kept;
    std::vector<double> divisor;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        const auto& kf = k.factors[i];
        if (kf.type == T::Whole) continue;
        if (f.kind == FactorKind::Cyclic) {
            auto n = f.order;
            auto kstep = static_cast<std::int64_t>(kf.step);
            if (kstep == 1) continue;
            qf.push_back(ElementaryFactor::cyclic(kstep));
            divisor.push_back(static_cast<double>(n / kstep));
        } else if (f.kind == FactorKind::Torus && kf.type == T::Lattice) {
            qf.push_back(f);
            divisor.push_back(kf.step);
        } else {
            qf.push_back(f);
            divisor.push_back(1.0);
        }
        kept.push_back(i);
    }
    Reduction r{LcaGroup(qf), k, h, {}};
    r.spectrum.dual_group = dual(r.quotient);
    for (const auto& p : s.pieces) {
        Box b;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            auto c = p[kept[j]];
            if (divisor[j] != 1.0) {
                auto vals = discrete_values(gd.factor(kept[j]), c);
                c = BoxComponent::point_set({});
                for (auto v : vals) c.points.push_back(v / static_cast<std::int64_t>(divisor[j]));
            }
            b.push_back(c);
        }
        r.spectrum.pieces.push_back(b);
    }
    return r;
}

}  // namespace landau
