#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "landau/group.hpp"

namespace landau {

struct Interval {
    double lo = 0;
    double hi = 0;
    double length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

// One factor of a box. Continuous factors use `intervals` (angles for the
// torus, may leave [0,2pi) and wrap); discrete factors use integer ranges in
// `intervals` or explicit `points`. `full` means the whole compact factor.
struct BoxComponent {
    std::vector<Interval> intervals;
    std::vector<std::int64_t> points;
    bool full = false;

    static BoxComponent interval(double lo, double hi) { return {{{lo, hi}}, {}, false}; }
    static BoxComponent point_set(std::vector<std::int64_t> p) { return {{}, std::move(p), false}; }
    static BoxComponent whole() { return {{}, {}, true}; }
    bool operator==(const BoxComponent&) const = default;
};

using Box = std::vector<BoxComponent>;

void validate_box(const LcaGroup& g, const Box& b, const char* what);
double component_measure(const ElementaryFactor& f, double scale, const BoxComponent& c);
double box_measure(const LcaGroup& g, const Box& b);
bool component_contains(const ElementaryFactor& f, const BoxComponent& c, double x);
bool box_contains(const LcaGroup& g, const Box& b, const std::vector<double>& x);

// Minkowski sum K + L (group operation written additively).
Box minkowski(const LcaGroup& g, const Box& k, const Box& l);
// Translate x + B.
Box translate(const LcaGroup& g, const Box& b, const std::vector<double>& x);

// Integer values (canonical residues for Z_N) of a discrete component.
std::vector<std::int64_t> discrete_values(const ElementaryFactor& f, const BoxComponent& c);

// Integral over the component of exp(i * c * coord) against the factor's
// Haar measure, with `c` the phase coefficient.
std::complex<double> component_character_integral(const ElementaryFactor& f, double scale, const BoxComponent& comp,
                                                  double c);
// Integral over the box of the character given by per-factor phase coefficients.
std::complex<double> box_character_integral(const LcaGroup& g, const Box& b, const std::vector<double>& coeff);

// Finite union of pairwise-disjoint boxes in the dual group.
struct Spectrum {
    LcaGroup dual_group;
    std::vector<Box> pieces;
};

void validate_spectrum(const Spectrum& s);
double haar(const Spectrum& s);
bool spectrum_contains(const Spectrum& s, const std::vector<double>& omega);

// Integral over the spectrum of <omega, x>.
std::complex<double> spectrum_character_integral(const Spectrum& s, const GroupElement& x);

// Closed subgroup given per factor.
struct SubgroupFactor {
    enum class Type { Trivial, Whole, Lattice };
    Type type = Type::Trivial;
    // RealLine: spacing c (subgroup cZ). Integers: m (mZ). Torus: order n of
    // the finite subgroup {2pi k/n}. Cyclic: d with d | N (subgroup dZ_N).
    double step = 0;
    bool operator==(const SubgroupFactor&) const = default;
};

struct Subgroup {
    LcaGroup group;
    std::vector<SubgroupFactor> factors;
};

bool subgroup_contains(const Subgroup& h, const std::vector<double>& x);
Subgroup annihilator(const Subgroup& h);

struct Reduction {
    LcaGroup quotient;       // G / K
    Subgroup kernel;         // K, compact
    Subgroup spectrum_span;  // H, subgroup of the dual generated by the spectrum
    Spectrum spectrum;       // the spectrum as a subset of the dual of G / K
};

Reduction reduce_to_compactly_generated(const Spectrum& s);

}  // namespace landau
