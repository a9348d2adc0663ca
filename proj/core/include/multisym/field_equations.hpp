#pragma once

// Residuals of the equivalent solution conditions for a section psi~ of
// tau : P(pi) -> Sigma, with psi = h o psi~:
//
//   hv               Hamilton-Volterra equations (coordinate form)
//   pullback         psi~^*(iota_X omega_h) on d/dx^1 ^ ... ^ d/dx^n
//   vortex           contract(psi_* gamma, omega) on the frame h_* e_i of T im(h)
//   dhdw             contract(psi_* gamma, omega) - (-1)^{n+1} dH
//   energy           the d p / d x^mu components, redundant given hv
//
// plus the localized action and its first variation. All pointwise residuals
// consume a SectionJet, so analytic and grid sections share one code path.

#include "multisym/bundle.hpp"
#include "multisym/report.hpp"
#include "multisym/section.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace multisym {

struct HVResidual {
    Vector R;  ///< N entries: sum_mu d(p^mu_a)/dx^mu + dH/dq^a
    Vector S;  ///< nN entries, a-major: d(q^a)/dx^mu - dH/dp^mu_a
    double max_abs() const;
};

HVResidual hv_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const DifferentiationConfig& cfg = {});

/// (psi~^*(iota_X omega_h))_x evaluated on d/dx^1 ^ ... ^ d/dx^n, X tangent at psi~(x).
double pullback_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const Vector& X,
                         const DifferentiationConfig& cfg = {});
double pullback_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet,
                         const std::function<Vector(const Vector&)>& X, const DifferentiationConfig& cfg = {});

enum class PullbackMode {
    vertical,  ///< spanning set d/dq^a, d/dp^mu_a
    full,      ///< additionally d/dx^mu
};

/// pullback_residual over the spanning set of the chosen mode, one entry per basis vector.
Vector pullback_residuals(const HamiltonVolterraFunction& hv, const SectionJet& jet, PullbackMode mode,
                          const DifferentiationConfig& cfg = {});

/// psi_* gamma with psi = h o psi~ and gamma = d/dx^1 ^ ... ^ d/dx^n.
MultiVector pushed_covolume(const HamiltonVolterraFunction& hv, const SectionJet& jet,
                            const DifferentiationConfig& cfg = {});

/// contract(psi_* gamma, omega) on h_* e_i, i over the coordinate basis of P(pi).
Vector vortex_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const DifferentiationConfig& cfg = {});

/// contract(psi_* gamma, omega) as a 1-form on M(pi).
AlternatingForm dhdw_contraction(const HamiltonVolterraFunction& hv, const SectionJet& jet,
                                 const DifferentiationConfig& cfg = {});
/// contract(psi_* gamma, omega) - (-1)^{n+1} (dH)_{psi(x)} with H = H_V + p.
AlternatingForm dhdw_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet,
                              const DifferentiationConfig& cfg = {});

/// Energy equations with p(x) = -H_V(psi~(x)), d p / dx^mu by the chain rule along the jet.
Vector energy_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const DifferentiationConfig& cfg = {});
/// Energy equations with caller-supplied d p / dx^mu.
Vector energy_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const Vector& dp_dx,
                       const DifferentiationConfig& cfg = {});
/// Energy equations with p given as a callable on the base, differentiated numerically.
Vector energy_residual(const HamiltonVolterraFunction& hv, const AnalyticSection& section,
                       const std::function<double(const Vector&)>& p_of_x, const Vector& x,
                       const DifferentiationConfig& cfg = {});

// ---------------------------------------------------------------------------
// Action

struct Quadrature {
    enum class Rule { midpoint, trapezoid };
    Rule rule = Rule::midpoint;
    int cells_per_axis = 64;
};

/// Density of psi~^* Theta_h with respect to d^n x.
double action_density(const HamiltonVolterraFunction& hv, const SectionJet& jet);

/// Integral of psi~^* Theta_h over the box V (V compactly inside the section's domain).
double action(const HamiltonVolterraFunction& hv, const AnalyticSection& section, const ChartedDomain& V,
              const Quadrature& quad = {}, const DifferentiationConfig& cfg = {});
/// Trapezoid rule over the grid nodes in V; V must align with grid nodes at least one node from the edge.
double action(const HamiltonVolterraFunction& hv, const DiscreteSection& section, const ChartedDomain& V);

/// Density of -psi~^*(iota_xi omega_h) for the vertical vector xi = (0, w) at psi~(x).
double first_variation_density(const HamiltonVolterraFunction& hv, const SectionJet& jet, const Vector& w,
                               const DifferentiationConfig& cfg = {});

struct FirstVariation {
    double fd = 0.0;        ///< central difference of t -> action(psi~ + t phi)
    double analytic = 0.0;  ///< -integral of psi~^*(iota_xi omega_h)
};

FirstVariation action_first_variation(const HamiltonVolterraFunction& hv, const AnalyticSection& section,
                                      const Variation& phi, const ChartedDomain& V, double t_step,
                                      const Quadrature& quad = {}, const DifferentiationConfig& cfg = {});
FirstVariation action_first_variation(const HamiltonVolterraFunction& hv, const DiscreteSection& section,
                                      const Variation& phi, const ChartedDomain& V, double t_step);

// ---------------------------------------------------------------------------
// Suites

namespace equation {
inline const std::string hv = "hv";
inline const std::string pullback_vertical = "pullback_vertical";
inline const std::string pullback_full = "pullback_full";
inline const std::string vortex = "vortex";
inline const std::string dhdw = "dhdw";
inline const std::string energy = "energy";
}  // namespace equation

/// The five equivalent formulations checked pointwise.
const std::vector<std::string>& five_way_equations();

struct SuiteOptions {
    std::vector<std::string> equations = {equation::hv,     equation::pullback_vertical, equation::pullback_full,
                                          equation::vortex, equation::dhdw,              equation::energy};
    DifferentiationConfig cfg;
};

/// Evaluates the selected residuals at every point; one report entry per point per equation
/// (the entry is the max-abs over that residual's components).
ResidualReport vertical_residual_suite(const HamiltonVolterraFunction& hv, const AnalyticSection& section,
                                       std::span<const Vector> points, const SuiteOptions& options = {});
/// Same over all grid nodes with one node of stencil clearance.
ResidualReport vertical_residual_suite(const HamiltonVolterraFunction& hv, const DiscreteSection& section,
                                       const SuiteOptions& options = {});
/// Per-jet evaluation used by both overloads.
void add_jet_residuals(ResidualReport& report, const HamiltonVolterraFunction& hv, const SectionJet& jet,
                       const SuiteOptions& options);

/// Tensor grid of per_axis points per coordinate over a box, endpoints included.
std::vector<Vector> sample_points(const ChartedDomain& box, int per_axis);

}  // namespace multisym
