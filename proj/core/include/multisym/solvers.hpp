#pragma once

// Candidate sections: an RK4 integrator for n = 1 (Hamilton's equations),
// an SOR Laplace solver for the n = 2 free field, and the example catalog.

#include "multisym/bundle.hpp"
#include "multisym/section.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace multisym {

/// Classical RK4 for dq^a/dx = dH/dp_a, dp_a/dx = -dH/dq^a on [lo, hi].
/// The step is adjusted to width / round(width / step); the result is a section on that grid.
DiscreteSection solve_ode(const HamiltonVolterraFunction& hv, const Vector& q0, const Vector& p0, Interval span,
                          double step, const DifferentiationConfig& cfg = {});

struct LaplaceOptions {
    /// SOR factor; 0 picks 2 / (1 + sin(pi / (m - 1))) for the larger node count m.
    double relaxation = 0.0;
    /// Stop when max |L q| / diag(L) over interior nodes (L the 5-point Laplacian) is below this.
    double tolerance = 1e-13;
    int max_sweeps = 20000;
};

struct LaplaceResult {
    DiscreteSection section;  ///< shape (2, 1): q, p^1 = dq/dx^1, p^2 = dq/dx^2
    int sweeps = 0;
    double relaxation = 0.0;
    std::vector<double> history;  ///< residual after each sweep
};

/// Dirichlet problem for the 5-point Laplacian; q = g on the grid boundary.
/// Momenta come from q afterwards: central differences inside, quadratic
/// extrapolation of those central values onto boundary nodes.
LaplaceResult solve_laplace(const Grid& grid, const std::function<double(const Vector&)>& boundary,
                            const LaplaceOptions& options = {});

/// Max over interior nodes of |5-point Laplacian of the q component|.
double laplace_residual(const DiscreteSection& section);

// ---------------------------------------------------------------------------
// Catalog

enum class SolverKind { none, ode, laplace };

struct ExampleSpec {
    std::string name;
    std::string description;
    bool worked_example = true;  ///< false for stress cases added beyond the worked examples
    BundleShape shape{1, 1};
    HamiltonVolterraFunction hv;
    std::string hamiltonian_text;  ///< the Hamilton-Volterra function in the CLI expression language
    ChartedDomain domain;          ///< U
    ChartedDomain box;             ///< V, compactly inside U; solvers run on V
    std::optional<FibreFunction> exact;  ///< known solution with analytic jacobian
    SolverKind solver = SolverKind::none;
    Vector initial;                                ///< ODE: (q0, p0)
    std::function<double(const Vector&)> boundary;  ///< Laplace: Dirichlet data
};

const std::vector<ExampleSpec>& catalog();
/// Throws ArgumentError listing the known names.
const ExampleSpec& find_example(const std::string& name);

}  // namespace multisym
