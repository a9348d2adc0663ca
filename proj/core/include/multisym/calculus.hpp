#pragma once

// Numerical calculus on coordinate charts. Every derivative-consuming entry
// point takes an optional analytic override; when it is absent, central (or
// Richardson-extrapolated central) differences are used, and a point whose
// stencil would leave the chart domain is an error rather than a silent
// one-sided fallback.

#include "multisym/alternating.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace multisym {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// Axis-aligned box of chart coordinates.
class ChartedDomain {
public:
    explicit ChartedDomain(std::vector<Interval> bounds);
    static ChartedDomain cube(int dim, double lo, double hi);

    int dim() const { return static_cast<int>(bounds_.size()); }
    const std::vector<Interval>& bounds() const { return bounds_; }
    const Interval& operator[](int i) const { return bounds_[static_cast<std::size_t>(i)]; }

    bool contains(const Vector& x) const;
    /// True when `inner` lies in the open interior with at least `margin` to spare.
    bool compactly_contains(const ChartedDomain& inner, double margin = 0.0) const;
    /// Throws BoundaryError unless x[i] +- step lies in the domain.
    void require_clearance(const Vector& x, int i, double step) const;

    Vector center() const;

private:
    std::vector<Interval> bounds_;
};

enum class Scheme { central, richardson };

struct DifferentiationConfig {
    /// Relative step; the absolute step on coordinate x_i is step * max(1, |x_i|).
    double step = std::cbrt(std::numeric_limits<double>::epsilon());
    Scheme scheme = Scheme::central;

    double step_for(double coordinate) const;
    void validate() const;
};

/// f : R^d -> R with an optional analytic gradient.
struct ScalarField {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    std::optional<ChartedDomain> domain;

    double operator()(const Vector& x) const { return value(x); }
};

/// F : R^m -> R^k with an optional analytic jacobian (k x m).
struct SmoothMap {
    int domain_dim = 0;
    int codomain_dim = 0;
    std::function<Vector(const Vector&)> value;
    std::function<Matrix(const Vector&)> jacobian;
    std::optional<ChartedDomain> domain;

    Vector operator()(const Vector& x) const { return value(x); }

    static SmoothMap identity(int dim);
    static SmoothMap constant(int domain_dim, Vector target);
    /// Linear map x -> A x + b.
    static SmoothMap affine(Matrix A, Vector b);
};

/// G o F.
SmoothMap compose(const SmoothMap& G, const SmoothMap& F);

/// A p-form field on a chart; `derivative` optionally supplies d(at) exactly.
struct FormField {
    int dim = 0;
    int degree = 0;
    std::function<AlternatingForm(const Vector&)> at;
    std::function<AlternatingForm(const Vector&)> derivative;
    std::optional<ChartedDomain> base;

    AlternatingForm operator()(const Vector& x) const { return at(x); }

    static FormField constant(AlternatingForm value);
};

/// Derivative of a vector-valued function along coordinate axis i.
/// The domain check uses the same absolute step as the stencil.
Vector partial(const std::function<Vector(const Vector&)>& f, const Vector& x, int i, const DifferentiationConfig& cfg,
               const ChartedDomain* domain = nullptr);

Vector gradient(const ScalarField& f, const Vector& x, const DifferentiationConfig& cfg = {});
AlternatingForm differential(const ScalarField& f, const Vector& x, const DifferentiationConfig& cfg = {});

Matrix jacobian(const SmoothMap& F, const Vector& x, const DifferentiationConfig& cfg = {});

AlternatingForm exterior_derivative(const FormField& a, const Vector& x, const DifferentiationConfig& cfg = {});

/// The field x -> (da)_x, itself differentiable numerically.
FormField exterior_derivative_field(const FormField& a, const DifferentiationConfig& cfg = {});

/// Pullback of a form at F(x) through the jacobian J (rows: codomain).
AlternatingForm pullback(const Matrix& J, const AlternatingForm& a);
AlternatingForm pullback(const SmoothMap& F, const AlternatingForm& a, const Vector& x,
                         const DifferentiationConfig& cfg = {});
/// The field x -> (F^* a)_x.
FormField pullback_field(const SmoothMap& F, const FormField& a, const DifferentiationConfig& cfg = {});

/// Wedge extension of the jacobian to degree-k multivectors.
MultiVector pushforward_multivector(const Matrix& J, const MultiVector& G);
MultiVector pushforward_multivector(const SmoothMap& F, const MultiVector& G, const Vector& x,
                                    const DifferentiationConfig& cfg = {});

/// (F^*(iota_xi a))_x(u1..up) = a_{F(x)}(xi_x, F_* u1, ..., F_* up), with xi_x tangent at F(x).
AlternatingForm pullback_along(const SmoothMap& F, const Vector& xi_at_x, const FormField& a, const Vector& x,
                               const DifferentiationConfig& cfg = {});
AlternatingForm pullback_along(const SmoothMap& F, const std::function<Vector(const Vector&)>& xi, const FormField& a,
                               const Vector& x, const DifferentiationConfig& cfg = {});

}  // namespace multisym
