#pragma once

// Sections x -> (x, q^a(x), p^mu_a(x)) of tau : P(pi) -> Sigma over one chart.
// Every residual is a function of the section's first jet at a point, so both
// the analytic and the grid-sampled representations reduce to SectionJet.

#include "multisym/bundle.hpp"
#include "multisym/calculus.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace multisym {

/// Value and first derivatives of the fibre coordinates (q^a, p^mu_a) at x.
struct SectionJet {
    Vector x;
    Vector fibre;   ///< size N + nN, same order as the P(pi) layout after x
    Matrix dfibre;  ///< (N + nN) x n, column mu = d/dx^mu

    /// The point psi~(x) of P(pi).
    Vector point() const;
    /// Jacobian of psi~ at x: dim_P x n, identity on top.
    Matrix tangent() const;
};

/// Fibre values and their partials, as used by sections and variations.
struct FibreFunction {
    std::function<Vector(const Vector&)> value;
    /// Optional analytic (fibre_dim x n) jacobian.
    std::function<Matrix(const Vector&)> jacobian;
};

class AnalyticSection {
public:
    AnalyticSection(BundleShape shape, ChartedDomain domain, FibreFunction fibre);

    const BundleShape& shape() const { return shape_; }
    const ChartedDomain& domain() const { return domain_; }
    const FibreFunction& fibre() const { return fibre_; }
    bool has_analytic_derivatives() const { return static_cast<bool>(fibre_.jacobian); }

    SectionJet jet(const Vector& x, const DifferentiationConfig& cfg = {}) const;
    /// psi~ as a map Sigma -> P(pi).
    SmoothMap as_map(const DifferentiationConfig& cfg = {}) const;

    /// psi~ + t * delta, fibrewise.
    AnalyticSection plus(const FibreFunction& delta, double t) const;

private:
    BundleShape shape_;
    ChartedDomain domain_;
    FibreFunction fibre_;
};

/// Uniform rectangular lattice over a box.
class Grid {
public:
    Grid(ChartedDomain box, std::vector<int> nodes_per_axis);

    int dim() const { return box_.dim(); }
    const ChartedDomain& box() const { return box_; }
    int nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
    std::size_t node_count() const { return count_; }
    double spacing(int axis) const;

    std::vector<int> unflatten(std::size_t flat) const;
    std::size_t flatten(const std::vector<int>& index) const;
    Vector coordinates(const std::vector<int>& index) const;
    Vector coordinates(std::size_t flat) const { return coordinates(unflatten(flat)); }

    /// True when every axis index is at least `margin` away from both ends.
    bool interior(const std::vector<int>& index, int margin = 1) const;

private:
    ChartedDomain box_;
    std::vector<int> nodes_;
    std::size_t count_ = 0;
};

class DiscreteSection {
public:
    DiscreteSection(BundleShape shape, Grid grid, std::vector<Vector> values);
    /// Samples an analytic fibre function at every node.
    static DiscreteSection sample(const BundleShape& shape, const Grid& grid,
                                  const std::function<Vector(const Vector&)>& fibre);

    const BundleShape& shape() const { return shape_; }
    const Grid& grid() const { return grid_; }
    const std::vector<Vector>& values() const { return values_; }
    const Vector& value(std::size_t flat) const { return values_[flat]; }

    /// Jet at a node by central differences on the grid; boundary nodes throw BoundaryError.
    SectionJet jet(const std::vector<int>& index) const;
    SectionJet jet(std::size_t flat) const { return jet(grid_.unflatten(flat)); }

    DiscreteSection plus(const std::function<Vector(const Vector&)>& delta, double t) const;

private:
    BundleShape shape_;
    Grid grid_;
    std::vector<Vector> values_;
};

/// Vertical variation (u^a, v^mu_a) supported in a sub-box.
struct Variation {
    FibreFunction fibre;
    ChartedDomain support;

    /// Throws SupportError unless the support sits strictly inside V and the
    /// variation vanishes on a sampled shell around it.
    void check_admissible(const ChartedDomain& V, int samples_per_axis = 9) const;

    static Variation zero(const BundleShape& shape, ChartedDomain support);
    /// Smooth bump exp(-1/(1-r^2)) per axis on `support`, times `weights` (fibre-sized).
    static Variation bump(const BundleShape& shape, ChartedDomain support, Vector weights);
};

/// Product over axes of exp(1 - 1/(1 - s^2)) with s the rescaled coordinate; peak 1 at the box centre.
double bump_value(const ChartedDomain& support, const Vector& x);
Vector bump_gradient(const ChartedDomain& support, const Vector& x);

}  // namespace multisym
