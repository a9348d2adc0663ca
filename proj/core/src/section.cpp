#include "multisym/section.hpp"

#include "multisym/error.hpp"

#include <cmath>
#include <sstream>

namespace multisym {

Vector SectionJet::point() const {
    Vector z(x.size() + fibre.size());
    z << x, fibre;
    return z;
}

Matrix SectionJet::tangent() const {
    const auto n = x.size();
    Matrix T(n + fibre.size(), n);
    T.topRows(n).setIdentity();
    T.bottomRows(fibre.size()) = dfibre;
    return T;
}

// ---------------------------------------------------------------------------
// AnalyticSection

AnalyticSection::AnalyticSection(BundleShape shape, ChartedDomain domain, FibreFunction fibre)
    : shape_(shape), domain_(std::move(domain)), fibre_(std::move(fibre)) {
    if (domain_.dim() != shape_.n()) throw DimensionError("section domain must have the base dimension");
    if (!fibre_.value) throw ArgumentError("section needs a fibre function");
}

SectionJet AnalyticSection::jet(const Vector& x, const DifferentiationConfig& cfg) const {
    if (x.size() != shape_.n()) throw DimensionError("section jet: point has wrong dimension");
    SectionJet j{x, fibre_.value(x), Matrix(shape_.fibre_dim(), shape_.n())};
    if (j.fibre.size() != shape_.fibre_dim()) throw DimensionError("section fibre function has wrong size");
    if (fibre_.jacobian) {
        j.dfibre = fibre_.jacobian(x);
    } else {
        for (int mu = 0; mu < shape_.n(); ++mu) j.dfibre.col(mu) = partial(fibre_.value, x, mu, cfg, &domain_);
    }
    return j;
}

SmoothMap AnalyticSection::as_map(const DifferentiationConfig& cfg) const {
    SmoothMap F;
    F.domain_dim = shape_.n();
    F.codomain_dim = shape_.dim_P();
    F.domain = domain_;
    const AnalyticSection self = *this;
    F.value = [self](const Vector& x) {
        Vector z(self.shape_.dim_P());
        z << x, self.fibre_.value(x);
        return z;
    };
    F.jacobian = [self, cfg](const Vector& x) { return self.jet(x, cfg).tangent(); };
    return F;
}

AnalyticSection AnalyticSection::plus(const FibreFunction& delta, double t) const {
    FibreFunction sum;
    const FibreFunction base = fibre_;
    sum.value = [base, delta, t](const Vector& x) { return Vector(base.value(x) + t * delta.value(x)); };
    if (base.jacobian && delta.jacobian) {
        sum.jacobian = [base, delta, t](const Vector& x) { return Matrix(base.jacobian(x) + t * delta.jacobian(x)); };
    }
    return AnalyticSection(shape_, domain_, std::move(sum));
}

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(ChartedDomain box, std::vector<int> nodes_per_axis) : box_(std::move(box)), nodes_(std::move(nodes_per_axis)) {
    if (static_cast<int>(nodes_.size()) != box_.dim()) throw DimensionError("grid: one node count per axis");
    count_ = 1;
    for (int m : nodes_) {
        if (m < 5) throw ArgumentError("grid needs at least 5 nodes per axis");
        count_ *= static_cast<std::size_t>(m);
    }
}

double Grid::spacing(int axis) const { return box_[axis].width() / (nodes(axis) - 1); }

std::vector<int> Grid::unflatten(std::size_t flat) const {
    std::vector<int> idx(nodes_.size());
    for (std::size_t a = 0; a < nodes_.size(); ++a) {
        idx[a] = static_cast<int>(flat % static_cast<std::size_t>(nodes_[a]));
        flat /= static_cast<std::size_t>(nodes_[a]);
    }
    return idx;
}

std::size_t Grid::flatten(const std::vector<int>& index) const {
    std::size_t flat = 0;
    for (std::size_t a = nodes_.size(); a-- > 0;) flat = flat * static_cast<std::size_t>(nodes_[a]) + static_cast<std::size_t>(index[a]);
    return flat;
}

Vector Grid::coordinates(const std::vector<int>& index) const {
    Vector x(dim());
    for (int a = 0; a < dim(); ++a) {
        // Pin the last node to the upper bound exactly.
        x[a] = index[a] == nodes(a) - 1 ? box_[a].hi : box_[a].lo + index[a] * spacing(a);
    }
    return x;
}

bool Grid::interior(const std::vector<int>& index, int margin) const {
    for (int a = 0; a < dim(); ++a)
        if (index[a] < margin || index[a] > nodes(a) - 1 - margin) return false;
    return true;
}

// ---------------------------------------------------------------------------
// DiscreteSection

DiscreteSection::DiscreteSection(BundleShape shape, Grid grid, std::vector<Vector> values)
    : shape_(shape), grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.dim() != shape_.n()) throw DimensionError("discrete section: grid must span the base");
    if (values_.size() != grid_.node_count()) throw DimensionError("discrete section: one value per node");
    for (const Vector& v : values_)
        if (v.size() != shape_.fibre_dim()) throw DimensionError("discrete section: value has wrong fibre size");
}

DiscreteSection DiscreteSection::sample(const BundleShape& shape, const Grid& grid,
                                        const std::function<Vector(const Vector&)>& fibre) {
    std::vector<Vector> values;
    values.reserve(grid.node_count());
    for (std::size_t i = 0; i < grid.node_count(); ++i) values.push_back(fibre(grid.coordinates(i)));
    return DiscreteSection(shape, grid, std::move(values));
}

SectionJet DiscreteSection::jet(const std::vector<int>& index) const {
    if (!grid_.interior(index, 1)) {
        std::ostringstream msg;
        msg << "grid node on the boundary has no central stencil";
        throw BoundaryError(msg.str());
    }
    SectionJet j{grid_.coordinates(index), values_[grid_.flatten(index)], Matrix(shape_.fibre_dim(), shape_.n())};
    std::vector<int> plus = index;
    std::vector<int> minus = index;
    for (int mu = 0; mu < shape_.n(); ++mu) {
        ++plus[mu];
        --minus[mu];
        j.dfibre.col(mu) = (values_[grid_.flatten(plus)] - values_[grid_.flatten(minus)]) / (2.0 * grid_.spacing(mu));
        --plus[mu];
        ++minus[mu];
    }
    return j;
}

DiscreteSection DiscreteSection::plus(const std::function<Vector(const Vector&)>& delta, double t) const {
    std::vector<Vector> values = values_;
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += t * delta(grid_.coordinates(i));
    return DiscreteSection(shape_, grid_, std::move(values));
}

// ---------------------------------------------------------------------------
// Variations

namespace {

double bump_1d(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double bump_1d_derivative(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return bump_1d(s) * (-2.0 * s / (w * w));
}

}  // namespace

double bump_value(const ChartedDomain& support, const Vector& x) {
    double v = 1.0;
    for (int a = 0; a < support.dim(); ++a) {
        const double half = 0.5 * support[a].width();
        const double c = 0.5 * (support[a].lo + support[a].hi);
        v *= bump_1d((x[a] - c) / half);
    }
    return v;
}

Vector bump_gradient(const ChartedDomain& support, const Vector& x) {
    const int n = support.dim();
    Vector factors(n);
    Vector derivs(n);
    for (int a = 0; a < n; ++a) {
        const double half = 0.5 * support[a].width();
        const double s = (x[a] - 0.5 * (support[a].lo + support[a].hi)) / half;
        factors[a] = bump_1d(s);
        derivs[a] = bump_1d_derivative(s) / half;
    }
    Vector g(n);
    for (int a = 0; a < n; ++a) {
        double prod = derivs[a];
        for (int b = 0; b < n; ++b)
            if (b != a) prod *= factors[b];
        g[a] = prod;
    }
    return g;
}

void Variation::check_admissible(const ChartedDomain& V, int samples_per_axis) const {
    if (!V.compactly_contains(support)) throw SupportError("variation support is not compactly contained in V");
    if (samples_per_axis < 2) throw ArgumentError("need at least two samples per axis");
    const int n = V.dim();
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        Vector x(n);
        for (int a = 0; a < n; ++a) x[a] = V[a].lo + V[a].width() * idx[a] / (samples_per_axis - 1);
        bool outside = false;
        for (int a = 0; a < n; ++a)
            if (x[a] <= support[a].lo || x[a] >= support[a].hi) outside = true;
        if (outside && fibre.value(x).cwiseAbs().maxCoeff() > 0.0) {
            std::ostringstream msg;
            msg << "variation does not vanish outside its declared support (sample at " << x.transpose() << ")";
            throw SupportError(msg.str());
        }
        int a = 0;
        while (a < n && ++idx[a] == samples_per_axis) idx[a++] = 0;
        if (a == n) break;
    }
}

Variation Variation::zero(const BundleShape& shape, ChartedDomain support) {
    const int f = shape.fibre_dim();
    const int n = shape.n();
    return Variation{FibreFunction{[f](const Vector&) { return Vector(Vector::Zero(f)); },
                                   [f, n](const Vector&) { return Matrix(Matrix::Zero(f, n)); }},
                     std::move(support)};
}

Variation Variation::bump(const BundleShape& shape, ChartedDomain support, Vector weights) {
    if (weights.size() != shape.fibre_dim()) throw DimensionError("bump weights must be fibre-sized");
    const ChartedDomain box = support;
    FibreFunction f;
    f.value = [box, weights](const Vector& x) { return Vector(bump_value(box, x) * weights); };
    f.jacobian = [box, weights](const Vector& x) { return Matrix(weights * bump_gradient(box, x).transpose()); };
    return Variation{std::move(f), std::move(support)};
}

}  // namespace multisym
