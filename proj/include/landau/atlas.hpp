#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "landau/box.hpp"
#include "landau/discrete_set.hpp"
#include "landau/grid.hpp"

namespace landau {

// Fundamental domain C = pi^-1(C0) in the dual group.
//   RealLine: C0 = [-w/2, w/2) with w = 2 * half_width.
//   Torus:    arc [-pi/n, pi/n) with n = torus_refinement.
//   Integers: {0}.
//   Cyclic:   the subgroup K = d Z_N with d = subgroup_step.
// Tiles are origin + D + C; origin shifts the continuous factors only.
struct CubeSpec {
    LcaGroup dual_group;
    std::vector<double> half_width;
    std::vector<std::int64_t> torus_refinement;
    std::vector<std::int64_t> subgroup_step;
    std::vector<double> origin;
    Subgroup compact_subgroup;  // K

    Box cell() const;
    double measure() const;
    // Number of translates of C per period on compact factors (0 on non-compact ones).
    std::vector<std::int64_t> period() const;
};

// Gamma = { k_hat + upsilon }: Upsilon = Xi^perp is a lattice in G, the coset
// representatives label the characters of K.
struct QuasiLattice {
    LcaGroup group;
    DiscreteSet upsilon;
    std::vector<std::vector<double>> coset_reps;
    DiscreteSet points;
};

struct CubeAtlas {
    CubeSpec cube;
    QuasiLattice quasi;
};

// Largest K inside the neighbourhood, C0 inside its image, Xi, Upsilon and D.
CubeAtlas build_cube(const LcaGroup& dual_group, const Box& neighborhood);
// Explicit construction; rep_shift[i] moves the cyclic representatives by multiples of N/d.
CubeAtlas make_atlas(CubeSpec cube, const std::vector<std::int64_t>& rep_shift = {});
CubeSpec make_cube(const LcaGroup& dual_group, const std::vector<double>& tile_width,
                   const std::vector<std::int64_t>& torus_refinement = {},
                   const std::vector<std::int64_t>& subgroup_step = {}, const std::vector<double>& origin = {});

// d C for the translate with the given integer index per factor.
Box tile(const CubeSpec& cube, const std::vector<std::int64_t>& index);
// Indices of every tile meeting the window (compact factors: one period).
std::vector<std::vector<std::int64_t>> tiles_meeting(const CubeSpec& cube, const Box& window);
// Quasi-lattice points inside the window.
PointCloud quasi_points(const CubeAtlas& atlas, const Box& window);

// Haar measure of the intersection of two boxes.
double intersection_measure(const LcaGroup& g, const Box& a, const Box& b);
double intersection_measure(const Spectrum& s, const Box& b);

struct HadamardMatrix {
    std::size_t order = 0;
    std::vector<int> entries;  // row-major, +-1
    int at(std::size_t i, std::size_t j) const { return entries[i * order + j]; }
};

// Order 2^n by Sylvester doubling.
HadamardMatrix sylvester_hadamard(unsigned n);
// Rejects orders that are not powers of two.
HadamardMatrix sylvester_hadamard_order(std::size_t order);
bool hadamard_exact(const HadamardMatrix& u);

struct BasisOptions {
    double gram_tolerance = 1e-8;
};

// Columns psi_gamma for the given quasi-lattice points, weighted per the grid.
// Throws Error(Numerical) when the grid does not resolve the family.
Eigen::MatrixXcd psi_basis(const CubeSpec& cube, const PointCloud& gammas, const QuadratureGrid& grid,
                           const BasisOptions& opt = {});

struct SpectrumApproximation {
    Spectrum omega_star;
    std::vector<std::vector<std::int64_t>> tiles;  // selected translate indices
    CubeSpec cube;                                 // after refinement
    std::size_t n = 0;                             // number of tiles, a power of two
    double missing = 0;                            // mu(Omega \ Omega*)
    double excess = 0;                             // mu(Omega* \ Omega)
    double defect = 0;                             // mu(Omega \ Omega*), the quantity bounded by eps^2/4 mu(Omega*)
    std::size_t refinements = 0;
};

struct ApproximationOptions {
    std::vector<double> initial_width;  // per RealLine factor; empty uses the extent of Omega
    std::size_t max_refinements = 12;
    std::size_t max_tiles = 1 << 14;
};

// Greedy choice of 2^n tiles with mu(Omega* \ Omega) < eps^2/4 and
// mu(Omega \ Omega*) < eps^2/4 mu(Omega*); halves the cube until both hold.
SpectrumApproximation approximate_spectrum(const Spectrum& omega, double epsilon, const ApproximationOptions& opt = {});

// phi_{gamma,j} = mu(Omega*)^-1/2 <omega,gamma> sum_k u_jk chi_{d_k C}; column gamma * N + j.
Eigen::MatrixXcd phi_basis(const CubeSpec& cube, const std::vector<std::vector<std::int64_t>>& tiles,
                           const HadamardMatrix& u, const PointCloud& gammas, const QuadratureGrid& grid,
                           const BasisOptions& opt = {});

struct SubspaceDistance {
    double distance = 0;  // || phi - phi chi_Omega ||
    double bound = 0;     // mu(Omega*)^-1/2 mu(Omega* delta Omega)^1/2
    bool within_bound = false;
    bool below_half_epsilon = false;
};

// `phi` in weighted grid coordinates; omega_star_measure = mu(Omega*).
SubspaceDistance distance_to_subspace(const QuadratureGrid& grid, const Eigen::VectorXcd& phi, const Spectrum& omega,
                                      double omega_star_measure, double symmetric_difference, double epsilon);

}  // namespace landau
