#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "landau/box.hpp"
#include "landau/group.hpp"

namespace landau {

// Lattice: real coordinates B * k (B is d x d row-major over the real
// factors), per-factor steps elsewhere, translated by each coset offset.
struct LatticeGenerator {
    std::vector<double> real_basis;
    // Ignored on real factors. Integers: m (mZ). Torus: order n. Cyclic: s with s | N.
    std::vector<double> steps;
    std::vector<std::vector<double>> cosets;
};

// Each lattice point moved on its real coordinates by a hashed offset in
// [-amplitude, amplitude]^d.
struct PerturbedLattice {
    LatticeGenerator base;
    double amplitude = 0;
    std::uint64_t seed = 0;
};

struct ExplicitList {
    std::vector<std::vector<double>> points;
};

using SetGenerator = std::variant<LatticeGenerator, PerturbedLattice, ExplicitList>;

struct DiscreteSet {
    LcaGroup group;
    SetGenerator generator;
    double separation = 1;  // declared lower bound on the distance between distinct points
    std::size_t point_budget = 20'000'000;
};

// Row-major points, `dim` coordinates each.
struct PointCloud {
    std::size_t dim = 0;
    std::vector<double> coords;
    std::size_t size() const { return dim ? coords.size() / dim : 0; }
    std::vector<double> point(std::size_t i) const {
        return {coords.begin() + static_cast<std::ptrdiff_t>(i * dim),
                coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)};
    }
};

void validate_set(const DiscreteSet& s);

// Z^d x {e} x D0 with the real factors carried by Z^d.
DiscreteSet canonical_lattice(const LcaGroup& g);
// Reference lattice of density mu: real spacing mu^(-1/d).
DiscreteSet scaled_reference_lattice(const LcaGroup& g, double mu);
DiscreteSet lattice_set(const LcaGroup& g, LatticeGenerator gen, double separation);

std::uint64_t splitmix64(std::uint64_t x);

PointCloud enumerate(const DiscreteSet& s, const Box& window);
std::size_t count(const DiscreteSet& s, const Box& window);
// True when count() avoids enumerating the whole window.
bool has_fast_count(const DiscreteSet& s);

// Minimum distance between distinct points inside the window.
double min_separation(const DiscreteSet& s, const Box& window);
// Throws Error(Separation) if the points in the window violate the declared separation.
void separation_check(const DiscreteSet& s, const Box& window);

// mu(K) / mu(U) with K = [-1/2,1/2]^d x T x {e} and U the ball of radius separation/2.
double packing_bound(const DiscreteSet& s);

}  // namespace landau
