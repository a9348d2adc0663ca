#include "multisym/nplectic.hpp"

#include "multisym/error.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <sstream>

namespace multisym {

namespace {

AlternatingForm differential_of(const HamiltonianForm& H, const Vector& x, const DifferentiationConfig& cfg) {
    return exterior_derivative(H.form, x, cfg);
}

void require_degrees(const NPlecticManifold& M, const HamiltonianForm& H, int k) {
    M.validate();
    if (k < 1 || k > M.n) {
        std::ostringstream msg;
        msg << "source dimension k = " << k << " must satisfy 1 <= k <= n = " << M.n;
        throw DimensionError(msg.str());
    }
    if (H.form.dim != M.dim) throw DimensionError("Hamiltonian form lives on a different manifold dimension");
    if (H.degree() != M.n - k) {
        std::ostringstream msg;
        msg << "Hamiltonian form has degree " << H.degree() << ", expected n - k = " << M.n - k;
        throw DimensionError(msg.str());
    }
}

}  // namespace

void NPlecticManifold::validate() const {
    if (n < 1) throw DimensionError("n-plectic manifold needs n >= 1");
    if (!omega.at) throw ArgumentError("n-plectic manifold needs an omega field");
    if (omega.dim != dim) throw DimensionError("omega lives on a different dimension");
    if (omega.degree != n + 1) throw DimensionError("omega must have degree n + 1");
}

CoVolume CoVolume::standard(int k) {
    std::vector<int> all(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) all[static_cast<std::size_t>(i)] = i;
    const MultiVector g = MultiVector::basis(k, all);
    return CoVolume{k, [g](const Vector&) { return g; }};
}

NPlecticCheck check_nplectic(const NPlecticManifold& M, std::span<const Vector> samples,
                             const DifferentiationConfig& cfg) {
    M.validate();
    NPlecticCheck out;
    out.dim = M.dim;
    out.min_rank = M.dim;
    for (const Vector& x : samples) {
        out.closedness = std::max(out.closedness, exterior_derivative(M.omega, x, cfg).max_abs());
        out.min_rank = std::min(out.min_rank, numerical_rank(contraction_matrix(M.omega.at(x), 1)));
        ++out.samples;
    }
    return out;
}

double hdw_sign(int n, int k) {
    if (k < 1 || k > n) throw DimensionError("hdw_sign: need 1 <= k <= n");
    return ((k + 1) * (n + 1 - k)) % 2 == 0 ? 1.0 : -1.0;
}

AlternatingForm hdw_residual_pair(const NPlecticManifold& M, const HamiltonianForm& H, const MultiVector& X,
                                  const Vector& x, const DifferentiationConfig& cfg) {
    const int k = X.degree();
    require_degrees(M, H, k);
    if (X.dim() != M.dim) throw DimensionError("multivector lives on a different dimension");
    return contract(X, M.omega.at(x)) - hdw_sign(M.n, k) * differential_of(H, x, cfg);
}

AlternatingForm dynamical_hdw_residual(const NPlecticManifold& M, const HamiltonianForm& H, const SmoothMap& psi,
                                       const CoVolume& gamma, const Vector& x, const DifferentiationConfig& cfg) {
    require_degrees(M, H, gamma.k);
    if (psi.domain_dim != gamma.k || psi.codomain_dim != M.dim)
        throw DimensionError("map must go from the k-dimensional source into the manifold");
    const MultiVector g = gamma.at(x);
    if (g.is_zero()) throw ArgumentError("co-volume vanishes at the evaluation point");
    const Vector y = psi(x);
    const MultiVector pushed = pushforward_multivector(jacobian(psi, x, cfg), g);
    return contract(pushed, M.omega.at(y)) - hdw_sign(M.n, gamma.k) * differential_of(H, y, cfg);
}

Vector solve_hdw_vector(const NPlecticManifold& M, const HamiltonianForm& H, const Vector& x,
                        const DifferentiationConfig& cfg) {
    require_degrees(M, H, 1);
    const Matrix A = contraction_matrix(M.omega.at(x), 1);
    const AlternatingForm dH = differential_of(H, x, cfg);
    const Vector rhs = hdw_sign(M.n, 1) * Eigen::Map<const Vector>(dH.coeffs().data(), static_cast<Eigen::Index>(dH.size()));
    return A.completeOrthogonalDecomposition().solve(rhs);
}

DegeneracyReport degeneracy_scan(const NPlecticManifold& M, const HamiltonianForm& H, int k, const Vector& x,
                                 const DifferentiationConfig& cfg, double dH_tol) {
    require_degrees(M, H, k);
    DegeneracyReport r;
    r.k = k;
    r.dH_norm = differential_of(H, x, cfg).max_abs();
    r.dH_vanishes = r.dH_norm <= dH_tol;
    const Matrix C = contraction_matrix(M.omega.at(x), k);
    r.multivector_dim = static_cast<int>(C.cols());
    r.kernel_dim = r.multivector_dim - numerical_rank(C);
    return r;
}

NPlecticManifold multicotangent_manifold(const BundleShape& shape) {
    return NPlecticManifold{shape.dim_M(), shape.n(), FormField::constant(omega_coordinate(shape)), std::nullopt};
}

HamiltonianForm hamiltonian_form(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg) {
    const int d = hv.shape.dim_M();
    const int dp = hv.shape.dim_P();
    FormField f;
    f.dim = d;
    f.degree = 0;
    f.at = [hv, d](const Vector& eta) {
        return AlternatingForm::constant(d, hamiltonian_function(hv, MPoint(hv.shape, eta)));
    };
    f.derivative = [hv, dp, cfg](const Vector& eta) {
        Vector g(dp + 1);
        g << hv.partials(eta.head(dp), cfg), 1.0;
        return AlternatingForm::from_gradient(g);
    };
    return HamiltonianForm{std::move(f)};
}

}  // namespace multisym
