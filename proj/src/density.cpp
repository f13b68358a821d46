#include "landau/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "landau/errors.hpp"
#include "landau/kernels.hpp"

namespace landau {

namespace {

std::vector<std::size_t> real_axes(const LcaGroup& g) {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < g.rank(); ++i)
        if (g.factor(i).kind == FactorKind::RealLine) r.push_back(i);
    return r;
}

// Counts for windows whose non-real components are whole, from a point
// cloud sorted on the first real axis.
class CloudCounter {
public:
    CloudCounter(const DiscreteSet& s, const Box& region) : axes_(real_axes(s.group)) {
        PointCloud pc = enumerate(s, region);
        const std::size_t n = pc.size(), d = axes_.size();
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return pc.coords[a * pc.dim + axes_[0]] < pc.coords[b * pc.dim + axes_[0]];
        });
        cols_.assign(d, std::vector<double>(n));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t a = 0; a < d; ++a) cols_[a][j] = pc.coords[idx[j] * pc.dim + axes_[a]];
    }

    std::size_t operator()(const Box& w) const {
        const auto& x = cols_[0];
        const auto& iv0 = w[axes_[0]].intervals[0];
        auto b = std::lower_bound(x.begin(), x.end(), iv0.lo);
        auto e = std::upper_bound(b, x.end(), iv0.hi);
        auto i0 = static_cast<std::size_t>(b - x.begin()), i1 = static_cast<std::size_t>(e - x.begin());
        if (cols_.size() == 1) return i1 - i0;
        if (cols_.size() == 2) {
            const auto& iv1 = w[axes_[1]].intervals[0];
            return kernels::count_in_range(cols_[1].data() + i0, i1 - i0, iv1.lo, iv1.hi);
        }
        std::size_t c = 0;
        for (std::size_t j = i0; j < i1; ++j) {
            bool in = true;
            for (std::size_t a = 1; a < cols_.size() && in; ++a) {
                const auto& iv = w[axes_[a]].intervals[0];
                in = cols_[a][j] >= iv.lo && cols_[a][j] <= iv.hi;
            }
            c += in;
        }
        return c;
    }

private:
    std::vector<std::size_t> axes_;
    std::vector<std::vector<double>> cols_;
};

std::vector<double> thin(std::vector<double> v, std::size_t cap) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() <= cap) return v;
    std::vector<double> out;
    double stride = static_cast<double>(v.size()) / static_cast<double>(cap);
    for (std::size_t k = 0; k < cap; ++k) out.push_back(v[static_cast<std::size_t>(k * stride)]);
    return out;
}

}  // namespace

const char* to_string(Verdict v) { return v == Verdict::Holds ? "holds" : "inconclusive"; }

ExpansionSchedule ExpansionSchedule::doubling(double first, double last, bool with_identity) {
    ExpansionSchedule s;
    if (with_identity) s.radii.push_back(0);
    for (double r = first; r <= last * (1 + 1e-12); r *= 2) s.radii.push_back(r);
    return s;
}

Box expansion_box(const LcaGroup& g, double radius) {
    Box b(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const auto& f = g.factor(i);
        double k = std::floor(radius);
        switch (f.kind) {
            case FactorKind::RealLine: b[i] = BoxComponent::interval(-radius, radius); break;
            case FactorKind::Integers: b[i] = BoxComponent::interval(-k, k); break;
            case FactorKind::Torus: b[i] = radius > 0 ? BoxComponent::whole() : BoxComponent::interval(0, 0); break;
            case FactorKind::Cyclic:
                if (2 * k + 1 >= static_cast<double>(f.order)) b[i] = BoxComponent::whole();
                else b[i] = BoxComponent::interval(-k, k);
                break;
        }
    }
    return b;
}

Box cube_window(const LcaGroup& g, const std::vector<double>& center, double side) {
    Box b(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        switch (g.factor(i).kind) {
            case FactorKind::RealLine: b[i] = BoxComponent::interval(center[i] - side / 2, center[i] + side / 2); break;
            case FactorKind::Integers:
                b[i] = BoxComponent::interval(std::ceil(center[i] - side / 2), std::floor(center[i] + side / 2));
                break;
            default: b[i] = BoxComponent::whole(); break;
        }
    }
    return b;
}

std::vector<Box> default_test_windows(const LcaGroup& g, const std::vector<double>& sides) {
    std::vector<Box> out;
    for (double s : sides) {
        std::vector<double> zero(g.rank(), 0.0), off(g.rank(), 0.0);
        for (std::size_t i = 0; i < g.rank(); ++i) {
            if (g.factor(i).kind == FactorKind::RealLine) off[i] = 0.31830988618379067 * s + 0.5;
            else if (g.factor(i).kind == FactorKind::Integers) off[i] = std::round(0.31830988618379067 * s);
        }
        out.push_back(cube_window(g, zero, s));
        out.push_back(cube_window(g, off, s));
    }
    return out;
}

DensityEstimate beurling_density(const DiscreteSet& s, const std::vector<double>& h_values, const BeurlingOptions& opt) {
    const auto& g = s.group;
    validate_set(s);
    auto axes = real_axes(g);
    const std::size_t d = axes.size();
    if (d == 0) fail(ErrorKind::NotSupported, "Beurling density needs at least one real factor");
    if (g.has_kind(FactorKind::Integers)) fail(ErrorKind::NotSupported, "Beurling density: Z factors are not supported");
    const double probe = opt.probe_span > 0 ? opt.probe_span : std::max(16.0, 16.0 * s.separation);
    const bool fast = has_fast_count(s);

    std::vector<double> origin(g.rank(), 0.0);
    PointCloud probe_pts = enumerate(s, cube_window(g, origin, probe));
    const std::size_t per_axis_cap =
        std::max<std::size_t>(8, std::min(opt.max_axis_candidates,
                                          static_cast<std::size_t>(std::pow(20000.0, 1.0 / static_cast<double>(d)))));

    DensityEstimate est;
    for (double h : h_values) {
        if (!(h > 0)) fail(ErrorKind::InvalidWindow, "cube side must be positive");
        const double eta = 1e-9 * std::max(1.0, h);
        std::vector<std::vector<double>> cand(d);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t k = 0; k < opt.center_samples; ++k)
                cand[a].push_back(-probe / 2 + probe * (static_cast<double>(k) + 0.5) / static_cast<double>(opt.center_samples));
            for (std::size_t i = 0; i < probe_pts.size(); ++i) {
                double p = probe_pts.coords[i * probe_pts.dim + axes[a]];
                for (double e : {h / 2, -h / 2, h / 2 + eta, -h / 2 - eta}) cand[a].push_back(p + e);
            }
            cand[a] = thin(std::move(cand[a]), per_axis_cap);
        }

        std::unique_ptr<CloudCounter> cloud;
        if (!fast) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& c : cand) { lo = std::min(lo, c.front()); hi = std::max(hi, c.back()); }
            std::vector<double> mid(g.rank(), 0.0);
            for (auto ax : axes) mid[ax] = 0.5 * (lo + hi);
            cloud = std::make_unique<CloudCounter>(s, cube_window(g, mid, hi - lo + h + 2));
        }

        DensityRow row{h, std::numeric_limits<std::size_t>::max(), 0, 0, 0};
        std::vector<std::size_t> idx(d, 0);
        std::vector<double> center(g.rank(), 0.0);
        while (true) {
            for (std::size_t a = 0; a < d; ++a) center[axes[a]] = cand[a][idx[a]];
            Box w = cube_window(g, center, h);
            std::size_t n = fast ? count(s, w) : (*cloud)(w);
            row.inf_count = std::min(row.inf_count, n);
            row.sup_count = std::max(row.sup_count, n);
            std::size_t a = 0;
            for (; a < d; ++a) {
                if (++idx[a] < cand[a].size()) break;
                idx[a] = 0;
            }
            if (a == d) break;
        }
        double vol = box_measure(g, cube_window(g, origin, h));
        row.lower = static_cast<double>(row.inf_count) / vol;
        row.upper = static_cast<double>(row.sup_count) / vol;
        est.rows.push_back(row);
    }
    return est;
}

ComparisonTable count_table(const DiscreteSet& a, const DiscreteSet& b, const std::vector<Box>& windows,
                            const ExpansionSchedule& schedule) {
    if (!a.group.same_factors(b.group)) fail(ErrorKind::InvalidSet, "compared sets live in different groups");
    if (windows.empty()) fail(ErrorKind::InvalidWindow, "no test windows");
    if (schedule.radii.empty()) fail(ErrorKind::InvalidWindow, "empty expansion schedule");
    ComparisonTable t;
    t.radii = schedule.radii;
    for (const auto& w : windows) t.lhs.push_back(static_cast<double>(count(a, w)));
    for (double r : schedule.radii) {
        Box k = expansion_box(b.group, r);
        std::vector<double> row;
        for (const auto& w : windows) row.push_back(static_cast<double>(count(b, minkowski(b.group, k, w))));
        t.rhs.push_back(std::move(row));
    }
    return t;
}

ComparisonVerdict evaluate(const ComparisonTable& t, double lhs_weight, double rhs_weight, double eps) {
    ComparisonVerdict v;
    v.windows_tested = t.lhs.size();
    for (std::size_t k = 0; k < t.radii.size(); ++k) {
        bool ok = true;
        double worst = 0;
        for (std::size_t i = 0; i < t.lhs.size(); ++i) {
            double lhs = (1 - eps) * lhs_weight * t.lhs[i];
            double rhs = rhs_weight * t.rhs[k][i];
            double ratio = lhs == 0 ? 0 : (rhs == 0 ? std::numeric_limits<double>::infinity() : lhs / rhs);
            worst = std::max(worst, ratio);
            if (lhs > rhs * (1 + 1e-12)) ok = false;
        }
        v.expansions_tried = k + 1;
        v.max_violation = worst;
        if (ok) {
            v.status = Verdict::Holds;
            v.witness_radius = t.radii[k];
            return v;
        }
    }
    return v;
}

ComparisonVerdict comparison_check(const DiscreteSet& a, double alpha_a, const DiscreteSet& b, double alpha_b,
                                   double eps, const std::vector<Box>& windows, const ExpansionSchedule& schedule) {
    if (!(eps >= 0 && eps < 1)) fail(ErrorKind::InvalidWindow, "epsilon must lie in [0,1)");
    return evaluate(count_table(a, b, windows, schedule), alpha_a, alpha_b, eps);
}

ComparisonVerdict measure_comparison(const DiscreteSet& s, double scale, MeasureSide side, double eps,
                                     const std::vector<Box>& windows, const ExpansionSchedule& schedule) {
    if (!(eps >= 0 && eps < 1)) fail(ErrorKind::InvalidWindow, "epsilon must lie in [0,1)");
    const auto& g = s.group;
    ComparisonTable t;
    t.radii = schedule.radii;
    for (const auto& w : windows)
        t.lhs.push_back(side == MeasureSide::HaarVsSet ? box_measure(g, w) : static_cast<double>(count(s, w)));
    for (double r : schedule.radii) {
        Box k = expansion_box(g, r);
        std::vector<double> row;
        for (const auto& w : windows) {
            Box kl = minkowski(g, k, w);
            row.push_back(side == MeasureSide::HaarVsSet ? static_cast<double>(count(s, kl)) : box_measure(g, kl));
        }
        t.rhs.push_back(std::move(row));
    }
    return side == MeasureSide::HaarVsSet ? evaluate(t, scale, 1.0, eps) : evaluate(t, 1.0, scale, eps);
}

UniformDensity uniform_densities(const DiscreteSet& s, const UniformDensityOptions& opt) {
    const auto& g = s.group;
    validate_set(s);
    std::vector<Box> windows = opt.windows;
    if (windows.empty()) {
        std::size_t d = g.real_dimension() + (g.has_kind(FactorKind::Integers) ? 1 : 0);
        std::vector<double> sides = d <= 1 ? std::vector<double>{1024, 16384, 262144}
                                  : d == 2 ? std::vector<double>{256, 2048, 16384}
                                           : std::vector<double>{32, 128, 512};
        windows = default_test_windows(g, sides);
    }
    ExpansionSchedule sched = opt.schedule.radii.empty() ? ExpansionSchedule::doubling(0.5, 8) : opt.schedule;
    DiscreteSet ref = canonical_lattice(g);

    UniformDensity out;
    out.packing_bound = packing_bound(s);
    const double top = 2 * out.packing_bound + 1;

    // D-: largest alpha with alpha * Gamma0 <= Lambda
    ComparisonTable below = count_table(ref, s, windows, sched);
    double lo = 0, hi = top;
    if (evaluate(below, hi, 1.0, opt.epsilon).status == Verdict::Holds) {
        out.lower_capped = true;
        lo = hi;
    } else {
        while (hi - lo > opt.resolution) {
            double mid = 0.5 * (lo + hi);
            (evaluate(below, mid, 1.0, opt.epsilon).status == Verdict::Holds ? lo : hi) = mid;
        }
    }
    // undo the (1 - eps) slack so the estimate tracks the eps -> 0 limit
    lo *= 1 - opt.epsilon;
    hi *= 1 - opt.epsilon;
    out.lower_bracket[0] = lo;
    out.lower_bracket[1] = hi;
    out.lower = 0.5 * (lo + hi);

    // D+: smallest alpha with Lambda <= alpha * Gamma0
    ComparisonTable above = count_table(s, ref, windows, sched);
    lo = 0;
    hi = top;
    if (evaluate(above, 1.0, hi, opt.epsilon).status != Verdict::Holds)
        fail(ErrorKind::ScheduleExhausted, "upper uniform density not bracketed below 2M+1");
    if (evaluate(above, 1.0, 0.0, opt.epsilon).status == Verdict::Holds) hi = 0;
    while (hi - lo > opt.resolution) {
        double mid = 0.5 * (lo + hi);
        (evaluate(above, 1.0, mid, opt.epsilon).status == Verdict::Holds ? hi : lo) = mid;
    }
    lo /= 1 - opt.epsilon;
    hi /= 1 - opt.epsilon;
    out.upper_bracket[0] = lo;
    out.upper_bracket[1] = hi;
    out.upper = 0.5 * (lo + hi);
    return out;
}

}  // namespace landau
