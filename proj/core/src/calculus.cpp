#include "multisym/calculus.hpp"

#include "multisym/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

namespace multisym {

// ---------------------------------------------------------------------------
// ChartedDomain

ChartedDomain::ChartedDomain(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
    if (bounds_.empty()) throw ArgumentError("charted domain needs at least one coordinate");
    for (const Interval& b : bounds_) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) throw ArgumentError("charted domain bounds must be finite");
        if (!(b.lo < b.hi)) throw ArgumentError("charted domain must have nonempty interior");
    }
}

ChartedDomain ChartedDomain::cube(int dim, double lo, double hi) {
    return ChartedDomain(std::vector<Interval>(static_cast<std::size_t>(dim), Interval{lo, hi}));
}

bool ChartedDomain::contains(const Vector& x) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (x[i] < bounds_[i].lo || x[i] > bounds_[i].hi) return false;
    return true;
}

bool ChartedDomain::compactly_contains(const ChartedDomain& inner, double margin) const {
    if (inner.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        if (!(inner[i].lo > bounds_[i].lo + margin) || !(inner[i].hi < bounds_[i].hi - margin)) return false;
    }
    return true;
}

void ChartedDomain::require_clearance(const Vector& x, int i, double step) const {
    if (x.size() != dim()) throw DimensionError("point dimension does not match chart domain");
    const Interval& b = bounds_[static_cast<std::size_t>(i)];
    if (x[i] - step < b.lo || x[i] + step > b.hi) {
        std::ostringstream msg;
        msg << "stencil on coordinate " << i << " at " << x[i] << " with step " << step << " leaves [" << b.lo << ", "
            << b.hi << "]";
        throw BoundaryError(msg.str());
    }
}

Vector ChartedDomain::center() const {
    Vector c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (bounds_[i].lo + bounds_[i].hi);
    return c;
}

// ---------------------------------------------------------------------------
// Config and field helpers

double DifferentiationConfig::step_for(double coordinate) const { return step * std::max(1.0, std::abs(coordinate)); }

void DifferentiationConfig::validate() const {
    if (!(step > 0.0)) throw ArgumentError("differentiation step must be positive");
}

SmoothMap SmoothMap::identity(int dim) {
    return SmoothMap{dim, dim, [](const Vector& x) { return x; },
                     [dim](const Vector&) { return Matrix(Matrix::Identity(dim, dim)); }, std::nullopt};
}

SmoothMap SmoothMap::constant(int domain_dim, Vector target) {
    const auto k = target.size();
    return SmoothMap{domain_dim, static_cast<int>(k), [target](const Vector&) { return target; },
                     [k, domain_dim](const Vector&) { return Matrix(Matrix::Zero(k, domain_dim)); }, std::nullopt};
}

SmoothMap SmoothMap::affine(Matrix A, Vector b) {
    if (A.rows() != b.size()) throw DimensionError("affine map: A and b disagree");
    const int m = static_cast<int>(A.cols());
    const int k = static_cast<int>(A.rows());
    return SmoothMap{m, k, [A, b](const Vector& x) { return Vector(A * x + b); }, [A](const Vector&) { return A; },
                     std::nullopt};
}

SmoothMap compose(const SmoothMap& G, const SmoothMap& F) {
    if (F.codomain_dim != G.domain_dim) throw DimensionError("compose: F codomain does not match G domain");
    SmoothMap out;
    out.domain_dim = F.domain_dim;
    out.codomain_dim = G.codomain_dim;
    out.domain = F.domain;
    out.value = [G, F](const Vector& x) { return G.value(F.value(x)); };
    if (F.jacobian && G.jacobian) {
        out.jacobian = [G, F](const Vector& x) { return Matrix(G.jacobian(F.value(x)) * F.jacobian(x)); };
    }
    return out;
}

FormField FormField::constant(AlternatingForm value) {
    const int d = value.dim();
    const int p = value.degree();
    return FormField{d, p, [value](const Vector&) { return value; },
                     [d, p](const Vector&) { return AlternatingForm(d, p + 1); }, std::nullopt};
}

// ---------------------------------------------------------------------------
// Differences

namespace {

Vector central(const std::function<Vector(const Vector&)>& f, const Vector& x, int i, double h) {
    Vector xp = x;
    Vector xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double span = xp[i] - xm[i];
    return (f(xp) - f(xm)) / span;
}

}  // namespace

Vector partial(const std::function<Vector(const Vector&)>& f, const Vector& x, int i, const DifferentiationConfig& cfg,
               const ChartedDomain* domain) {
    cfg.validate();
    const double h = cfg.step_for(x[i]);
    if (domain != nullptr) domain->require_clearance(x, i, h);
    if (cfg.scheme == Scheme::central) return central(f, x, i, h);
    const Vector coarse = central(f, x, i, h);
    const Vector fine = central(f, x, i, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

Vector gradient(const ScalarField& f, const Vector& x, const DifferentiationConfig& cfg) {
    if (f.gradient) return f.gradient(x);
    const auto as_vec = [&f](const Vector& y) { return Vector::Constant(1, f.value(y)); };
    const ChartedDomain* domain = f.domain ? &*f.domain : nullptr;
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = partial(as_vec, x, static_cast<int>(i), cfg, domain)[0];
    return g;
}

AlternatingForm differential(const ScalarField& f, const Vector& x, const DifferentiationConfig& cfg) {
    return AlternatingForm::from_gradient(gradient(f, x, cfg));
}

Matrix jacobian(const SmoothMap& F, const Vector& x, const DifferentiationConfig& cfg) {
    if (x.size() != F.domain_dim) throw DimensionError("jacobian: point has wrong dimension");
    if (F.jacobian) return F.jacobian(x);
    const ChartedDomain* domain = F.domain ? &*F.domain : nullptr;
    Matrix J(F.codomain_dim, F.domain_dim);
    for (int i = 0; i < F.domain_dim; ++i) J.col(i) = partial(F.value, x, i, cfg, domain);
    return J;
}

AlternatingForm exterior_derivative(const FormField& a, const Vector& x, const DifferentiationConfig& cfg) {
    if (x.size() != a.dim) throw DimensionError("exterior_derivative: point has wrong dimension");
    if (a.derivative) return a.derivative(x);
    const int d = a.dim;
    const int p = a.degree;
    const std::function<Vector(const Vector&)> coeffs = [&a](const Vector& y) {
        const AlternatingForm f = a.at(y);
        return Vector(Eigen::Map<const Vector>(f.coeffs().data(), static_cast<Eigen::Index>(f.size())));
    };
    const ChartedDomain* domain = a.base ? &*a.base : nullptr;
    std::vector<Vector> partials(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) partials[i] = partial(coeffs, x, i, cfg, domain);

    AlternatingForm out(d, p + 1);
    if (p + 1 > d) return out;
    std::vector<int> removed;
    removed.reserve(p);
    for (std::size_t r = 0; r < out.size(); ++r) {
        const MultiIndex I = MultiIndex::unrank(r, p + 1, d);
        double sum = 0.0;
        for (int j = 0; j <= p; ++j) {
            removed.clear();
            for (int s = 0; s <= p; ++s)
                if (s != j) removed.push_back(I[s]);
            const double term = partials[I[j]][static_cast<Eigen::Index>(MultiIndex(removed, d).rank())];
            sum += (j % 2 ? -term : term);
        }
        out.coeff(r) = sum;
    }
    return out;
}

FormField exterior_derivative_field(const FormField& a, const DifferentiationConfig& cfg) {
    FormField out;
    out.dim = a.dim;
    out.degree = a.degree + 1;
    out.base = a.base;
    out.at = [a, cfg](const Vector& x) { return exterior_derivative(a, x, cfg); };
    return out;
}

AlternatingForm pullback(const Matrix& J, const AlternatingForm& a) {
    if (J.rows() != a.dim()) throw DimensionError("pullback: jacobian rows do not match form dimension");
    const int m = static_cast<int>(J.cols());
    const int p = a.degree();
    AlternatingForm out(m, p);
    if (out.size() == 0) return out;
    const auto source = MultiIndex::enumerate(p, m);
    for (std::size_t ra = 0; ra < a.size(); ++ra) {
        const double ca = a.coeff(ra);
        if (ca == 0.0) continue;
        const MultiIndex I = MultiIndex::unrank(ra, p, a.dim());
        for (std::size_t rs = 0; rs < source.size(); ++rs)
            out.coeff(rs) += ca * minor_determinant(J, I.indices(), source[rs].indices());
    }
    return out;
}

AlternatingForm pullback(const SmoothMap& F, const AlternatingForm& a, const Vector& x,
                         const DifferentiationConfig& cfg) {
    return pullback(jacobian(F, x, cfg), a);
}

FormField pullback_field(const SmoothMap& F, const FormField& a, const DifferentiationConfig& cfg) {
    if (F.codomain_dim != a.dim) throw DimensionError("pullback_field: map codomain does not match form field");
    FormField out;
    out.dim = F.domain_dim;
    out.degree = a.degree;
    out.base = F.domain;
    out.at = [F, a, cfg](const Vector& x) { return pullback(jacobian(F, x, cfg), a.at(F.value(x))); };
    return out;
}

MultiVector pushforward_multivector(const Matrix& J, const MultiVector& G) {
    if (J.cols() != G.dim()) throw DimensionError("pushforward: jacobian columns do not match multivector dimension");
    const int k = static_cast<int>(J.rows());
    const int deg = G.degree();
    MultiVector out(k, deg);
    if (out.size() == 0) return out;
    const auto target = MultiIndex::enumerate(deg, k);
    for (std::size_t rg = 0; rg < G.size(); ++rg) {
        const double cg = G.coeff(rg);
        if (cg == 0.0) continue;
        const MultiIndex I = MultiIndex::unrank(rg, deg, G.dim());
        for (std::size_t rt = 0; rt < target.size(); ++rt)
            out.coeff(rt) += cg * minor_determinant(J, target[rt].indices(), I.indices());
    }
    return out;
}

MultiVector pushforward_multivector(const SmoothMap& F, const MultiVector& G, const Vector& x,
                                    const DifferentiationConfig& cfg) {
    return pushforward_multivector(jacobian(F, x, cfg), G);
}

AlternatingForm pullback_along(const SmoothMap& F, const Vector& xi_at_x, const FormField& a, const Vector& x,
                               const DifferentiationConfig& cfg) {
    if (xi_at_x.size() != a.dim) throw DimensionError("pullback_along: xi is not tangent to the target");
    if (a.degree < 1) throw DimensionError("pullback_along: form degree must be at least 1");
    return pullback(jacobian(F, x, cfg), interior(xi_at_x, a.at(F.value(x))));
}

AlternatingForm pullback_along(const SmoothMap& F, const std::function<Vector(const Vector&)>& xi, const FormField& a,
                               const Vector& x, const DifferentiationConfig& cfg) {
    return pullback_along(F, xi(x), a, x, cfg);
}

}  // namespace multisym
