#include "landau/grid.hpp"

#include <cmath>
#include <numbers>

#include "landau/errors.hpp"
#include "landau/kernels.hpp"

namespace landau {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct Axis {
    std::vector<double> x, w;
};

void midpoints(Axis& a, double lo, double hi, double scale, const GridPolicy& p) {
    double len = hi - lo;
    if (len <= 0) return;
    auto n = static_cast<std::size_t>(std::ceil(len * p.nodes_per_unit - 1e-9));
    n = std::max(n, p.min_nodes_per_cell);
    if (n > p.node_budget) fail(ErrorKind::Budget, "grid: node budget exceeded on an interval");
    double h = len / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        a.x.push_back(lo + (static_cast<double>(j) + 0.5) * h);
        a.w.push_back(scale * h);
    }
}

Axis axis_nodes(const ElementaryFactor& f, double scale, const BoxComponent& c, const GridPolicy& p) {
    Axis a;
    switch (f.kind) {
        case FactorKind::RealLine:
            midpoints(a, c.intervals[0].lo, c.intervals[0].hi, scale, p);
            break;
        case FactorKind::Torus:
            if (c.full) {
                midpoints(a, 0, kTwoPi, scale, p);
            } else {
                for (const auto& iv : c.intervals) midpoints(a, iv.lo, iv.lo + std::min(iv.length(), kTwoPi), scale, p);
            }
            break;
        case FactorKind::Integers:
        case FactorKind::Cyclic:
            for (auto v : discrete_values(f, c)) {
                a.x.push_back(static_cast<double>(v));
                a.w.push_back(scale);
            }
            break;
    }
    return a;
}

}  // namespace

QuadratureGrid build_grid(const Spectrum& s, const GridPolicy& policy) {
    validate_spectrum(s);
    const auto& g = s.dual_group;
    QuadratureGrid grid;
    grid.dual_group = g;
    grid.spectrum = s;
    grid.nodes.dim = g.rank();
    for (const auto& piece : s.pieces) {
        grid.piece_offsets.push_back(grid.weights.size());
        std::vector<Axis> axes;
        std::size_t total = 1;
        for (std::size_t i = 0; i < g.rank(); ++i) {
            axes.push_back(axis_nodes(g.factor(i), g.haar_scale(i), piece[i], policy));
            total *= axes.back().x.size();
        }
        if (grid.weights.size() + total > policy.node_budget)
            fail(ErrorKind::Budget, "grid: node budget exceeded (" + std::to_string(grid.weights.size() + total) + ")");
        std::vector<std::size_t> idx(g.rank(), 0);
        for (std::size_t k = 0; k < total; ++k) {
            double w = 1;
            for (std::size_t i = 0; i < g.rank(); ++i) {
                grid.nodes.coords.push_back(axes[i].x[idx[i]]);
                w *= axes[i].w[idx[i]];
            }
            grid.weights.push_back(w);
            for (std::size_t i = g.rank(); i-- > 0;) {
                if (++idx[i] < axes[i].x.size()) break;
                idx[i] = 0;
            }
        }
    }
    grid.piece_offsets.push_back(grid.weights.size());
    grid.sqrt_weights.reserve(grid.weights.size());
    for (double w : grid.weights) grid.sqrt_weights.push_back(std::sqrt(w));
    return grid;
}

GridPolicy policy_for_extent(double extent, const GridPolicy& base, double oversample) {
    GridPolicy p = base;
    p.nodes_per_unit = std::max(p.nodes_per_unit, oversample * extent / kTwoPi);
    return p;
}

Eigen::VectorXcd character_vector(const QuadratureGrid& grid, const std::vector<double>& x) {
    const auto& g = grid.dual_group;
    if (x.size() != g.rank()) fail(ErrorKind::InvalidElement, "character_vector: coordinate count mismatch");
    std::size_t m = grid.size();
    std::vector<double> phase(m, 0.0), re(m), im(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double* w = grid.nodes.coords.data() + i * g.rank();
        double p = 0;
        for (std::size_t f = 0; f < g.rank(); ++f) p += phase_coefficient(g.factor(f), w[f]) * x[f];
        phase[i] = p;
    }
    kernels::exp_phase(phase.data(), grid.sqrt_weights.data(), re.data(), im.data(), m);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) v[static_cast<Eigen::Index>(i)] = {re[i], im[i]};
    return v;
}

Eigen::MatrixXcd character_matrix(const QuadratureGrid& grid, const PointCloud& points) {
    if (points.size() && points.dim != grid.dual_group.rank())
        fail(ErrorKind::InvalidElement, "character_matrix: point dimension mismatch");
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(points.size()));
    for (std::size_t j = 0; j < points.size(); ++j) e.col(static_cast<Eigen::Index>(j)) = character_vector(grid, points.point(j));
    return e;
}

Eigen::VectorXd indicator(const QuadratureGrid& grid, const Spectrum& s) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) v[static_cast<Eigen::Index>(i)] = spectrum_contains(s, grid.nodes.point(i)) ? 1.0 : 0.0;
    return v;
}

Eigen::VectorXd indicator(const QuadratureGrid& grid, const Box& b) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = box_contains(grid.dual_group, b, grid.nodes.point(i)) ? 1.0 : 0.0;
    return v;
}

Eigen::VectorXcd unweighted(const QuadratureGrid& grid, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out = v;
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] /= grid.sqrt_weights[static_cast<std::size_t>(i)];
    return out;
}

}  // namespace landau
