#pragma once

// Hamilton-de Donder-Weyl equations on a general n-plectic manifold
// (d-dimensional, omega an (n+1)-form) for maps from a k-dimensional source.

#include "multisym/alternating.hpp"
#include "multisym/bundle.hpp"
#include "multisym/calculus.hpp"

#include <span>
#include <vector>

namespace multisym {

struct NPlecticManifold {
    int dim = 0;
    int n = 0;  ///< omega has degree n + 1
    FormField omega;
    std::optional<ChartedDomain> domain;

    void validate() const;
};

/// Degree n - k form field H.
struct HamiltonianForm {
    FormField form;
    int degree() const { return form.degree; }
};

/// k-multivector field on a k-dimensional source.
struct CoVolume {
    int k = 0;
    std::function<MultiVector(const Vector&)> at;

    /// d/dx^1 ^ ... ^ d/dx^k.
    static CoVolume standard(int k);
};

struct NPlecticCheck {
    double closedness = 0.0;  ///< max over samples of max |d omega| coefficient
    int min_rank = 0;         ///< minimum rank of v -> iota_v omega
    int dim = 0;
    std::size_t samples = 0;
    bool closed(double tol = 1e-6) const { return closedness <= tol; }
    bool nondegenerate() const { return min_rank == dim; }
};

/// Closedness and injectivity of v -> iota_v omega at each sample; rank deficiency is reported, not thrown.
NPlecticCheck check_nplectic(const NPlecticManifold& M, std::span<const Vector> samples,
                             const DifferentiationConfig& cfg = {});

/// Sign s(n, k) in iota_X omega = s dH under the left-contraction convention of `contract`.
/// Equals (-1)^{n+1} at k = n and +1 at k = n = 1.
double hdw_sign(int n, int k);

/// iota_X omega - s(n, k) dH at x.
AlternatingForm hdw_residual_pair(const NPlecticManifold& M, const HamiltonianForm& H, const MultiVector& X,
                                  const Vector& x, const DifferentiationConfig& cfg = {});

/// iota_{psi_* gamma} omega - s(n, k) (dH)_{psi(x)}.
AlternatingForm dynamical_hdw_residual(const NPlecticManifold& M, const HamiltonianForm& H, const SmoothMap& psi,
                                       const CoVolume& gamma, const Vector& x, const DifferentiationConfig& cfg = {});

/// For k = 1: the least-squares X with iota_X omega = s(n, 1) dH (unique when omega is nondegenerate).
Vector solve_hdw_vector(const NPlecticManifold& M, const HamiltonianForm& H, const Vector& x,
                        const DifferentiationConfig& cfg = {});

struct DegeneracyReport {
    bool dH_vanishes = false;
    double dH_norm = 0.0;
    int k = 0;
    int multivector_dim = 0;  ///< C(d, k)
    int kernel_dim = 0;       ///< dim {X in Lambda^k : iota_X omega = 0}
};

DegeneracyReport degeneracy_scan(const NPlecticManifold& M, const HamiltonianForm& H, int k, const Vector& x,
                                 const DifferentiationConfig& cfg = {}, double dH_tol = 1e-12);

/// M(pi) with its canonical omega, as an n-plectic manifold.
NPlecticManifold multicotangent_manifold(const BundleShape& shape);
/// H = H_V + p as a 0-form on M(pi) with exact differential.
HamiltonianForm hamiltonian_form(const HamiltonVolterraFunction& hv, const DifferentiationConfig& cfg = {});

}  // namespace multisym
