#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "landau/box.hpp"
#include "landau/density.hpp"
#include "landau/discrete_set.hpp"
#include "landau/grid.hpp"

namespace landau {

// Columns e_lambda = <., lambda> chi_Omega on the grid (weighted coordinates).
struct ExponentialSystem {
    LcaGroup group;
    Box window;
    Spectrum spectrum;
    QuadratureGrid grid;
    PointCloud points;
    Eigen::MatrixXcd vectors;

    std::size_t size() const { return points.size(); }
};

// Largest span of the window over non-compact factors.
double window_extent(const LcaGroup& g, const Box& window);

ExponentialSystem synthesize_system(const DiscreteSet& set, const Box& window, const Spectrum& spectrum,
                                    const GridPolicy& policy = {});
// On an existing grid, which must cover the spectrum.
ExponentialSystem synthesize_system(const LcaGroup& g, const PointCloud& points, const Spectrum& spectrum,
                                    const QuadratureGrid& grid);

// Gram matrix from closed-form character integrals over the spectrum.
Eigen::MatrixXcd exact_gram(const ExponentialSystem& s);

struct FrameReport {
    double lower = 0;
    double upper = 0;
    std::vector<double> gram_spectrum;  // ascending
    double dual_norm_sup = 0;
    bool dual_norm_finite = false;
    bool window_level = true;  // bounds of a truncated system
    std::size_t test_dimension = 0;
};

struct FrameOptions {
    double inner_margin = 0.25;  // per side, as a fraction of the window span
    double concentration = 0.99;
    double singular_threshold = 1e-10;
};

// A: smallest eigenvalue of the frame operator on functions whose inverse
// transforms carry a `concentration` fraction of their energy inside the
// inner window. B: largest eigenvalue of the Gram matrix.
FrameReport frame_bounds(const ExponentialSystem& s, const FrameOptions& opt = {});
// a, b: extreme Gram eigenvalues; c = sup ||g~_gamma|| from the inverse Gram.
FrameReport riesz_bounds(const ExponentialSystem& s, const FrameOptions& opt = {});

// Canonical dual frame of the truncated system, h = E G^+ with relative cut-off.
// With `check`, throws Error(Numerical) when check->lower < threshold * check->upper.
Eigen::MatrixXcd dual_frame(const ExponentialSystem& s, const FrameReport* check = nullptr, double threshold = 1e-10);

// Matrix of f -> chi_W (f check) restricted back to the grid, in weighted coordinates.
Eigen::MatrixXcd time_concentration_matrix(const QuadratureGrid& grid, const LcaGroup& g, const Box& window);
// Orthonormal columns spanning the eigenvectors with eigenvalue >= threshold.
Eigen::MatrixXcd concentrated_subspace(const QuadratureGrid& grid, const LcaGroup& g, const Box& window, double threshold);
// Window shrunk by margin * span on each side of every non-compact factor.
Box inner_window(const LcaGroup& g, const Box& window, double margin);

// Orthonormal basis of the column span (relative singular value cut-off).
Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& m, double threshold = 1e-10);

// dist(f, span of the columns) via the Gram pseudo-inverse.
double distance_to_span(const Eigen::MatrixXcd& family, const Eigen::VectorXcd& f, double threshold = 1e-10);

struct ConcentrationReport {
    double trace = 0;
    std::size_t rank_estimate = 0;
    std::vector<double> eigenvalues;  // descending, clipped to [0, 1]
    std::map<double, std::size_t> counts_above;
    std::size_t rank_p = 0;
    std::size_t rank_q = 0;
    bool trace_le_rank = false;
};

// T = P Q P with P onto the columns of `riesz_family` and Q onto the columns of `frame_family`.
ConcentrationReport concentration_operator(const Eigen::MatrixXcd& riesz_family, const Eigen::MatrixXcd& frame_family,
                                           const std::vector<double>& thresholds = {0.5, 0.9, 0.99});

struct RsRecord {
    bool hypothesis_holds = false;
    std::size_t failing_index = 0;  // column of the first family member over epsilon
    std::vector<double> failing_gamma;
    double max_distance = 0;
    double c = 0;
    bool c_finite = false;
    std::size_t gamma_count = 0;  // card(Gamma cap L)
    std::size_t multiplicity = 1;
    std::size_t lambda_count = 0;  // card(Lambda cap LK)
    double lhs = 0;                // (1 - c eps) N card(Gamma cap L)
    double rhs = 0;
    bool conclusion_holds = false;
    double trace = 0;
    std::size_t rank = 0;
    bool chain_holds = false;  // lhs <= trace <= rank <= rhs
};

// gamma_family: columns g_{gamma,j}, gamma-major with `multiplicity` columns per
// point of gamma_points; lambda: frame system whose window covers L + K.
RsRecord rs_comparison(const Eigen::MatrixXcd& gamma_family, const PointCloud& gamma_points, std::size_t multiplicity,
                       const ExponentialSystem& lambda, const Eigen::MatrixXcd& lambda_dual, double epsilon,
                       const Box& k, const Box& l);

struct HapResult {
    bool found = false;
    double radius = -1;
    Box k;
    std::vector<std::pair<double, double>> profile;  // radius, max distance over x
};

// Smallest radius r with dist(M_x f, span{h_lambda : lambda in x + K_r}) < eps for all samples x.
HapResult hap_radius(const ExponentialSystem& s, const Eigen::MatrixXcd& dual, const Eigen::VectorXcd& f, double eps,
                     const std::vector<std::vector<double>>& x_samples, const ExpansionSchedule& schedule);
// Same, with the maximum taken over the columns of fs as well.
HapResult hap_radius(const ExponentialSystem& s, const Eigen::MatrixXcd& dual, const Eigen::MatrixXcd& fs, double eps,
                     const std::vector<std::vector<double>>& x_samples, const ExpansionSchedule& schedule);

// (M_x f)(omega) = <omega, x> f(omega)
Eigen::VectorXcd modulate(const QuadratureGrid& grid, const Eigen::VectorXcd& f, const std::vector<double>& x);

// Seeded standard complex normal coefficients on the columns of `basis`, normalised.
Eigen::VectorXcd random_function(const Eigen::MatrixXcd& basis, std::uint64_t seed);

struct CarlesonResult {
    double empirical = 0;  // max over trials of sum |f(lambda)|^2 / ||f||^2
    double exact = 0;      // largest Gram eigenvalue of the truncated system
    double analytic = 0;   // ||g#||_1^2 / mu(U)
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

struct CarlesonOptions {
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    double margin_fraction = 0.25;  // mollifier ramp as a fraction of the spectrum width
    FrameOptions frame;
};

CarlesonResult carleson_constant(const DiscreteSet& set, const Box& window, const Spectrum& spectrum,
                                 const CarlesonOptions& opt = {}, const GridPolicy& policy = {});
// ||g#||_1^2 / mu(U) for the trapezoid mollifier; U the ball of radius separation / 2.
double carleson_analytic_bound(const LcaGroup& g, const Spectrum& spectrum, double separation, double margin_fraction);
// sum |f(lambda)|^2 / ||f||^2
double sampling_ratio(const ExponentialSystem& s, const Eigen::VectorXcd& f);

struct PerturbationResult {
    double bound = 0;
    double radius = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

using ShiftMap = std::function<std::vector<double>(const std::vector<double>&)>;

// sup over random f of sum |f(lambda) - f(lambda')|^2 / ||f||^2.
// Throws Error(InvalidSet) if some shift leaves the declared radius.
PerturbationResult perturbation_bound(const DiscreteSet& set, const Box& window, const Spectrum& spectrum,
                                      const ShiftMap& shift, double radius, std::size_t trials = 100,
                                      std::uint64_t seed = 1, const GridPolicy& policy = {});

}  // namespace landau
