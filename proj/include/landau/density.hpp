#pragma once

#include <vector>

#include "landau/box.hpp"
#include "landau/discrete_set.hpp"

namespace landau {

struct DensityRow {
    double h = 0;
    std::size_t inf_count = 0;
    std::size_t sup_count = 0;
    double lower = 0;
    double upper = 0;
};

struct DensityEstimate {
    std::vector<DensityRow> rows;
    // headline values: the largest h
    double lower() const { return rows.empty() ? 0 : rows.back().lower; }
    double upper() const { return rows.empty() ? 0 : rows.back().upper; }
};

struct BeurlingOptions {
    std::size_t center_samples = 32;  // grid candidates per real axis
    double probe_span = 0;            // side of the region holding candidate centres; 0 picks one from the separation
    std::size_t max_axis_candidates = 256;
};

// Counts in closed cubes Q_h(x) over real factors (compact factors taken
// whole), inf/sup over candidate centres, normalised by the Haar measure of the cube.
DensityEstimate beurling_density(const DiscreteSet& s, const std::vector<double>& h_values,
                                 const BeurlingOptions& opt = {});

// Radii of the growing compact sets K_n; radius 0 is {e}.
struct ExpansionSchedule {
    std::vector<double> radii;
    static ExpansionSchedule doubling(double first, double last, bool with_identity = true);
};

// [-r,r] on real factors, {|n| <= floor r} on discrete ones, whole torus for r > 0.
Box expansion_box(const LcaGroup& g, double radius);
// Closed cube of the given side centred at `center` on the real and integer factors; compact factors whole.
Box cube_window(const LcaGroup& g, const std::vector<double>& center, double side);
// Cubes of each side, centred at the origin and at an irrational-looking offset.
std::vector<Box> default_test_windows(const LcaGroup& g, const std::vector<double>& sides);

enum class Verdict { Holds, Inconclusive };
const char* to_string(Verdict v);

struct ComparisonVerdict {
    Verdict status = Verdict::Inconclusive;
    double witness_radius = -1;  // radius of the first K that worked
    double max_violation = 0;    // max over windows of lhs/rhs at the largest K tried
    std::size_t windows_tested = 0;
    std::size_t expansions_tried = 0;
};

// alpha_a * A  <=_eps  alpha_b * B :
//   (1 - eps) * alpha_a * card(A cap L) <= alpha_b * card(B cap KL) for every window L.
ComparisonVerdict comparison_check(const DiscreteSet& a, double alpha_a, const DiscreteSet& b, double alpha_b,
                                   double eps, const std::vector<Box>& windows, const ExpansionSchedule& schedule);

enum class MeasureSide { HaarVsSet, SetVsHaar };
// HaarVsSet: (1 - eps) * scale * mu(L) <= card(S cap KL).
// SetVsHaar: (1 - eps) * card(S cap L) <= scale * mu(KL).
ComparisonVerdict measure_comparison(const DiscreteSet& s, double scale, MeasureSide side, double eps,
                                     const std::vector<Box>& windows, const ExpansionSchedule& schedule);

struct UniformDensityOptions {
    double epsilon = 1e-3;
    double resolution = 1e-3;
    std::vector<Box> windows;     // empty: default_test_windows with large sides
    ExpansionSchedule schedule;   // empty: doubling up to radius 8
};

struct UniformDensity {
    double lower = 0, upper = 0;
    double lower_bracket[2] = {0, 0};
    double upper_bracket[2] = {0, 0};
    double packing_bound = 0;
    bool lower_capped = false;  // D- reached the packing bound
};

UniformDensity uniform_densities(const DiscreteSet& s, const UniformDensityOptions& opt = {});

// Count cache for repeated comparisons with different weights.
struct ComparisonTable {
    std::vector<double> lhs;               // per window
    std::vector<double> radii;             // per expansion
    std::vector<std::vector<double>> rhs;  // [expansion][window]
};

ComparisonTable count_table(const DiscreteSet& a, const DiscreteSet& b, const std::vector<Box>& windows,
                            const ExpansionSchedule& schedule);
ComparisonVerdict evaluate(const ComparisonTable& t, double lhs_weight, double rhs_weight, double eps);

}  // namespace landau
