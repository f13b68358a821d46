#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "landau/box.hpp"
#include "landau/discrete_set.hpp"

namespace landau {

struct GridPolicy {
    double nodes_per_unit = 16;          // on continuous factors, per unit of coordinate length
    std::size_t min_nodes_per_cell = 8;  // lower bound per interval or arc
    std::size_t node_budget = 4'000'000;
};

// Tensor midpoint rule per box of the spectrum; discrete factors are summed exactly.
struct QuadratureGrid {
    LcaGroup dual_group;
    PointCloud nodes;
    std::vector<double> weights;
    std::vector<double> sqrt_weights;
    Spectrum spectrum;
    std::vector<std::size_t> piece_offsets;  // first node of each piece, plus the total

    std::size_t size() const { return weights.size(); }
};

QuadratureGrid build_grid(const Spectrum& s, const GridPolicy& policy = {});

// Policy that keeps nodes_per_unit at least oversample * extent / (2 pi), so
// that characters with frequencies up to `extent` stay resolved.
GridPolicy policy_for_extent(double extent, const GridPolicy& base = {}, double oversample = 4);

// Matrices on a grid hold sqrt(w_i) * f(omega_i), so the Euclidean inner
// product of two columns is the L2 inner product.
Eigen::VectorXcd character_vector(const QuadratureGrid& grid, const std::vector<double>& x);
Eigen::MatrixXcd character_matrix(const QuadratureGrid& grid, const PointCloud& points);

// 1 on nodes inside the set, 0 elsewhere.
Eigen::VectorXd indicator(const QuadratureGrid& grid, const Spectrum& s);
Eigen::VectorXd indicator(const QuadratureGrid& grid, const Box& b);

// Plain values f(omega_i) from weighted coordinates.
Eigen::VectorXcd unweighted(const QuadratureGrid& grid, const Eigen::VectorXcd& v);

}  // namespace landau
