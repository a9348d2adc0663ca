#pragma once

// Coordinate model of the restricted multicotangent bundle M(pi) and its
// quotient P(pi) in one standard chart adapted to the base volume
// (vol = dx^1 ^ ... ^ dx^n).
//
// Flat layout of a point of M(pi):
//     x^1..x^n | q^1..q^N | p^mu_a (a-major: a=1: mu=1..n, a=2: ...) | p
// A point of P(pi) is the same without the trailing p.

#include "multisym/alternating.hpp"
#include "multisym/calculus.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace multisym {

class BundleShape {
public:
    BundleShape(int n, int N);

    int n() const { return n_; }
    int N() const { return N_; }

    int dim_E() const { return n_ + N_; }
    int dim_P() const { return n_ + N_ + n_ * N_; }
    int dim_M() const { return dim_P() + 1; }
    /// Number of fibre coordinates of P over the base: q^a and p^mu_a.
    int fibre_dim() const { return N_ + n_ * N_; }

    // Zero-based slots; mu in [0, n), a in [0, N).
    int x(int mu) const { return mu; }
    int q(int a) const { return n_ + a; }
    int pmom(int mu, int a) const { return n_ + N_ + a * n_ + mu; }
    int p() const { return dim_P(); }

    /// (mu, a) for a momentum slot; throws for any other slot.
    std::pair<int, int> momentum_of(int slot) const;

    /// Fibre-relative offsets (into the q/p^mu_a block).
    int fibre_q(int a) const { return a; }
    int fibre_pmom(int mu, int a) const { return N_ + a * n_ + mu; }

    /// ASCII name: x1, q2, pA_M (field A, direction M) or p.
    std::string coordinate_name(int slot) const;
    std::vector<std::string> coordinate_names(bool include_p) const;

    friend bool operator==(const BundleShape&, const BundleShape&) = default;

private:
    int n_;
    int N_;
};

class PPoint {
public:
    PPoint(BundleShape shape, Vector coords);
    const BundleShape& shape() const { return shape_; }
    const Vector& coords() const { return coords_; }
    double operator[](int slot) const { return coords_[slot]; }

private:
    BundleShape shape_;
    Vector coords_;
};

class MPoint {
public:
    MPoint(BundleShape shape, Vector coords);
    MPoint(const PPoint& z, double p);
    const BundleShape& shape() const { return shape_; }
    const Vector& coords() const { return coords_; }
    double operator[](int slot) const { return coords_[slot]; }
    double p() const { return coords_[shape_.p()]; }

private:
    BundleShape shape_;
    Vector coords_;
};

/// rho : M(pi) -> P(pi) drops p.
PPoint rho(const MPoint& eta);
/// kappa : P(pi) -> E keeps (x, q).
Vector kappa(const PPoint& z);
/// tau : P(pi) -> Sigma keeps x.
Vector tau(const PPoint& z);

/// Local Hamilton-Volterra function on P(pi) coordinates.
struct HamiltonVolterraFunction {
    BundleShape shape;
    std::function<double(const Vector&)> value;
    /// Optional analytic gradient over all dim_P coordinates.
    std::function<Vector(const Vector&)> gradient;

    double operator()(const Vector& z) const { return value(z); }
    double operator()(const PPoint& z) const { return value(z.coords()); }
    /// Analytic partials when available, central differences otherwise.
    Vector partials(const Vector& z, const DifferentiationConfig& cfg = {}) const;
    ScalarField as_field() const { return ScalarField{value, gradient, std::nullopt}; }

    static HamiltonVolterraFunction zero(BundleShape shape);
};

/// d^{n-1}x^mu-hat = iota_{d/dx^mu} d^n x, as a form on an ambient space whose
/// first n coordinates are the base coordinates.
AlternatingForm hat_volume(int ambient_dim, int n, int mu);

/// Theta = p d^n x + sum p^mu_a dq^a ^ d^{n-1}x^mu-hat at eta.
AlternatingForm liouville_form(const BundleShape& shape, const MPoint& eta);
FormField liouville_field(const BundleShape& shape);

/// omega = -dTheta = -dp ^ d^n x - sum dp^mu_a ^ dq^a ^ d^{n-1}x^mu-hat (constant coefficients).
AlternatingForm omega_coordinate(const BundleShape& shape);
inline AlternatingForm omega_coordinate(const BundleShape& shape, const MPoint&) { return omega_coordinate(shape); }
FormField omega_field(const BundleShape& shape);

/// Vertical basis of M(pi) over the base: d/dq^a, d/dp^mu_a, d/dp.
std::vector<Vector> vertical_basis_M(const BundleShape& shape);
/// tau-vertical basis of P(pi): d/dq^a, d/dp^mu_a.
std::vector<Vector> vertical_basis_P(const BundleShape& shape);

/// omega_h = dH ^ d^n x - sum dp^mu_a ^ dq^a ^ d^{n-1}x^mu-hat, with H the Hamilton-Volterra function.
AlternatingForm omega_h(const HamiltonVolterraFunction& hv, const PPoint& z, const DifferentiationConfig& cfg = {});
FormField omega_h_field(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg = {});

/// Theta_h = h^* Theta = -H d^n x + sum p^mu_a dq^a ^ d^{n-1}x^mu-hat.
AlternatingForm theta_h(const HamiltonVolterraFunction& hv, const PPoint& z);
FormField theta_h_field(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg = {});

/// The Hamiltonian section h(z) = (z, -H(z)).
MPoint hamiltonian_section(const HamiltonVolterraFunction& hv, const PPoint& z);
SmoothMap hamiltonian_section_map(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg = {});

/// Hamiltonian function H(eta) = H_V(rho(eta)) + p.
double hamiltonian_function(const HamiltonVolterraFunction& hv, const MPoint& eta);
/// H as a scalar field on M(pi); its p-partial is exactly 1.
ScalarField hamiltonian_function_field(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg = {});

/// Z_eta(f) = d/dt f(eta + t d/dp) at t = 0.
double z_derivative(const ScalarField& H, const MPoint& eta, const DifferentiationConfig& cfg = {});

/// Flow of Z: eta + u d/dp.
MPoint z_flow(const MPoint& eta, double u);

/// The unique point over z on {H = 0}; requires Z(H) = 1 at z.
MPoint section_from_function(const ScalarField& H, const PPoint& z, const DifferentiationConfig& cfg = {},
                             double admissibility_tol = 1e-8);

/// chi(z, u) = h(z) + u (tau^* vol)_z.
MPoint chi(const HamiltonVolterraFunction& hv, const PPoint& z, double u);

}  // namespace multisym
