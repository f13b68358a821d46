#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace landau {

enum class FactorKind { RealLine, Integers, Torus, Cyclic };

struct ElementaryFactor {
    FactorKind kind = FactorKind::RealLine;
    std::int64_t order = 0;  // Cyclic only

    static ElementaryFactor real_line() { return {FactorKind::RealLine, 0}; }
    static ElementaryFactor integers() { return {FactorKind::Integers, 0}; }
    static ElementaryFactor torus() { return {FactorKind::Torus, 0}; }
    static ElementaryFactor cyclic(std::int64_t n);

    bool is_discrete() const { return kind == FactorKind::Integers || kind == FactorKind::Cyclic; }
    bool is_compact() const { return kind == FactorKind::Torus || kind == FactorKind::Cyclic; }
    bool operator==(const ElementaryFactor&) const = default;
};

ElementaryFactor dual(const ElementaryFactor& f);
std::string to_string(const ElementaryFactor& f);

// Product of elementary factors with a Haar measure given per factor as a
// multiple of the base measure (Lebesgue dx, counting, or dtheta on [0,2pi)).
class LcaGroup {
public:
    LcaGroup() = default;
    // Group-side normalisation: dx on R, counting on Z and Z_N, dtheta/2pi on T.
    explicit LcaGroup(std::vector<ElementaryFactor> factors);
    LcaGroup(std::vector<ElementaryFactor> factors, std::vector<double> haar_scale);

    std::size_t rank() const { return factors_.size(); }
    const ElementaryFactor& factor(std::size_t i) const { return factors_.at(i); }
    const std::vector<ElementaryFactor>& factors() const { return factors_; }
    double haar_scale(std::size_t i) const { return scale_.at(i); }
    const std::vector<double>& haar_scales() const { return scale_; }

    std::size_t real_dimension() const;
    bool has_kind(FactorKind k) const;

    // Same factors, measures may differ.
    bool same_factors(const LcaGroup& other) const { return factors_ == other.factors_; }
    bool operator==(const LcaGroup& other) const;

private:
    std::vector<ElementaryFactor> factors_;
    std::vector<double> scale_;
};

// Dual group with the Plancherel-compatible measure.
LcaGroup dual(const LcaGroup& g);

// Product constant s * s_hat that makes the Fourier transform unitary.
double plancherel_constant(const ElementaryFactor& f);

template <class Tag>
struct Element {
    std::vector<double> coords;
    Element() = default;
    explicit Element(std::vector<double> c) : coords(std::move(c)) {}
    std::size_t size() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
    bool operator==(const Element&) const = default;
    auto operator<=>(const Element&) const = default;
};

struct GroupTag;
struct DualTag;
using GroupElement = Element<GroupTag>;
using DualElement = Element<DualTag>;

// Reduce coordinates to canonical representatives (torus to [0,2pi), Z_N to
// [0,N)); integer coordinates must be integral.
std::vector<double> normalize_coords(const LcaGroup& g, std::vector<double> c);
GroupElement make_element(const LcaGroup& g, std::vector<double> c);
DualElement make_dual_element(const LcaGroup& dual_group, std::vector<double> c);
GroupElement identity(const LcaGroup& g);

std::vector<double> add_coords(const LcaGroup& g, const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> sub_coords(const LcaGroup& g, const std::vector<double>& a, const std::vector<double>& b);

// Quotient distance on one factor and the sup metric on the product.
double factor_distance(const ElementaryFactor& f, double a, double b);
double distance(const LcaGroup& g, const std::vector<double>& a, const std::vector<double>& b);

// Per-factor coefficient c with <omega, x> = exp(i * sum_f c_f * coord_f)
// when the integral runs over the coordinate of the factor `f`; `other` is
// the coordinate of the paired element.
double phase_coefficient(const ElementaryFactor& f, double other);

double pairing_phase(const LcaGroup& g, const DualElement& omega, const GroupElement& x);
std::complex<double> pairing(const LcaGroup& g, const DualElement& omega, const GroupElement& x);

}  // namespace landau
