#include "landau/group.hpp"

#include <cmath>
#include <numbers>

#include "landau/errors.hpp"

namespace landau {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double primal_scale(const ElementaryFactor& f) {
    return f.kind == FactorKind::Torus ? 1.0 / kTwoPi : 1.0;
}

double wrap_angle(double t) {
    double r = std::fmod(t, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}
}  // namespace

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidGroup: return "invalid-group";
        case ErrorKind::InvalidElement: return "invalid-element";
        case ErrorKind::InvalidSpectrum: return "invalid-spectrum";
        case ErrorKind::InvalidWindow: return "invalid-window";
        case ErrorKind::InvalidSet: return "invalid-set";
        case ErrorKind::Budget: return "budget";
        case ErrorKind::Separation: return "separation";
        case ErrorKind::ScheduleExhausted: return "schedule-exhausted";
        case ErrorKind::NotSupported: return "not-supported";
        case ErrorKind::Numerical: return "numerical";
        case ErrorKind::Schema: return "schema";
    }
    return "unknown";
}

ElementaryFactor ElementaryFactor::cyclic(std::int64_t n) {
    if (n < 1) fail(ErrorKind::InvalidGroup, "cyclic order must be >= 1, got " + std::to_string(n));
    return {FactorKind::Cyclic, n};
}

ElementaryFactor dual(const ElementaryFactor& f) {
    switch (f.kind) {
        case FactorKind::RealLine: return ElementaryFactor::real_line();
        case FactorKind::Integers: return ElementaryFactor::torus();
        case FactorKind::Torus: return ElementaryFactor::integers();
        case FactorKind::Cyclic: return ElementaryFactor::cyclic(f.order);
    }
    return f;
}

std::string to_string(const ElementaryFactor& f) {
    switch (f.kind) {
        case FactorKind::RealLine: return "R";
        case FactorKind::Integers: return "Z";
        case FactorKind::Torus: return "T";
        case FactorKind::Cyclic: return "Z_" + std::to_string(f.order);
    }
    return "?";
}

double plancherel_constant(const ElementaryFactor& f) {
    if (f.kind == FactorKind::Cyclic) return 1.0 / static_cast<double>(f.order);
    return 1.0 / kTwoPi;
}

LcaGroup::LcaGroup(std::vector<ElementaryFactor> factors) : factors_(std::move(factors)) {
    scale_.reserve(factors_.size());
    for (const auto& f : factors_) {
        if (f.kind == FactorKind::Cyclic && f.order < 1) fail(ErrorKind::InvalidGroup, "cyclic order must be >= 1");
        scale_.push_back(primal_scale(f));
    }
}

LcaGroup::LcaGroup(std::vector<ElementaryFactor> factors, std::vector<double> haar_scale)
    : factors_(std::move(factors)), scale_(std::move(haar_scale)) {
    if (factors_.size() != scale_.size()) fail(ErrorKind::InvalidGroup, "one Haar scale per factor required");
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].kind == FactorKind::Cyclic && factors_[i].order < 1)
            fail(ErrorKind::InvalidGroup, "cyclic order must be >= 1");
        if (!(scale_[i] > 0) || !std::isfinite(scale_[i])) fail(ErrorKind::InvalidGroup, "Haar scale must be positive");
    }
}

std::size_t LcaGroup::real_dimension() const {
    std::size_t d = 0;
    for (const auto& f : factors_) d += f.kind == FactorKind::RealLine;
    return d;
}

bool LcaGroup::has_kind(FactorKind k) const {
    for (const auto& f : factors_)
        if (f.kind == k) return true;
    return false;
}

bool LcaGroup::operator==(const LcaGroup& other) const {
    if (factors_ != other.factors_) return false;
    for (std::size_t i = 0; i < scale_.size(); ++i)
        if (std::abs(scale_[i] - other.scale_[i]) > 1e-15 * std::max(1.0, std::abs(scale_[i]))) return false;
    return true;
}

LcaGroup dual(const LcaGroup& g) {
    std::vector<ElementaryFactor> f;
    std::vector<double> s;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        f.push_back(dual(g.factor(i)));
        s.push_back(plancherel_constant(g.factor(i)) / g.haar_scale(i));
    }
    return LcaGroup(std::move(f), std::move(s));
}

std::vector<double> normalize_coords(const LcaGroup& g, std::vector<double> c) {
    if (c.size() != g.rank())
        fail(ErrorKind::InvalidElement,
             "element has " + std::to_string(c.size()) + " coordinates, group has " + std::to_string(g.rank()) + " factors");
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& f = g.factor(i);
        if (!std::isfinite(c[i])) fail(ErrorKind::InvalidElement, "non-finite coordinate");
        switch (f.kind) {
            case FactorKind::RealLine: break;
            case FactorKind::Torus: c[i] = wrap_angle(c[i]); break;
            case FactorKind::Integers:
            case FactorKind::Cyclic: {
                double r = std::round(c[i]);
                if (std::abs(r - c[i]) > 1e-9) fail(ErrorKind::InvalidElement, "non-integral coordinate on a discrete factor");
                if (f.kind == FactorKind::Cyclic) {
                    auto n = static_cast<double>(f.order);
                    r = std::fmod(r, n);
                    if (r < 0) r += n;
                }
                c[i] = r;
                break;
            }
        }
    }
    return c;
}

GroupElement make_element(const LcaGroup& g, std::vector<double> c) {
    return GroupElement(normalize_coords(g, std::move(c)));
}

DualElement make_dual_element(const LcaGroup& dual_group, std::vector<double> c) {
    return DualElement(normalize_coords(dual_group, std::move(c)));
}

GroupElement identity(const LcaGroup& g) { return GroupElement(std::vector<double>(g.rank(), 0.0)); }

std::vector<double> add_coords(const LcaGroup& g, const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return normalize_coords(g, std::move(r));
}

std::vector<double> sub_coords(const LcaGroup& g, const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return normalize_coords(g, std::move(r));
}

double factor_distance(const ElementaryFactor& f, double a, double b) {
    double d = std::abs(a - b);
    switch (f.kind) {
        case FactorKind::Torus: d = std::fmod(d, kTwoPi); return std::min(d, kTwoPi - d);
        case FactorKind::Cyclic: {
            auto n = static_cast<double>(f.order);
            d = std::fmod(d, n);
            return std::min(d, n - d);
        }
        default: return d;
    }
}

double distance(const LcaGroup& g, const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (std::size_t i = 0; i < g.rank(); ++i) d = std::max(d, factor_distance(g.factor(i), a[i], b[i]));
    return d;
}

double phase_coefficient(const ElementaryFactor& f, double other) {
    if (f.kind == FactorKind::Cyclic) return kTwoPi * other / static_cast<double>(f.order);
    return other;
}

double pairing_phase(const LcaGroup& g, const DualElement& omega, const GroupElement& x) {
    if (omega.size() != g.rank() || x.size() != g.rank())
        fail(ErrorKind::InvalidElement, "pairing: coordinate count does not match group rank");
    double p = 0;
    for (std::size_t i = 0; i < g.rank(); ++i) p += phase_coefficient(g.factor(i), omega[i]) * x[i];
    return p;
}

std::complex<double> pairing(const LcaGroup& g, const DualElement& omega, const GroupElement& x) {
    return std::polar(1.0, pairing_phase(g, omega, x));
}

}  // namespace landau
