#include "multisym/field_equations.hpp"

#include "multisym/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace multisym {

namespace {

PPoint point_of(const HamiltonVolterraFunction& hv, const SectionJet& jet) {
    if (jet.x.size() != hv.shape.n() || jet.fibre.size() != hv.shape.fibre_dim())
        throw DimensionError("section jet does not match the Hamilton-Volterra shape");
    return PPoint(hv.shape, jet.point());
}

/// Coefficient of an n-form on R^n.
double top_coefficient(const AlternatingForm& a) { return a.size() == 0 ? 0.0 : a.coeff(0); }

/// Jacobian of h at z: identity on P(pi) plus the row -grad H_V.
Matrix section_jacobian(const BundleShape& shape, const Vector& grad) {
    Matrix J = Matrix::Zero(shape.dim_M(), shape.dim_P());
    J.topRows(shape.dim_P()).setIdentity();
    J.row(shape.p()) = -grad.transpose();
    return J;
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Odometer over a box of index ranges [lo[a], hi[a]].
template <class F>
void for_each_index(const std::vector<int>& lo, const std::vector<int>& hi, F&& f) {
    std::vector<int> idx = lo;
    const std::size_t n = lo.size();
    while (true) {
        f(idx);
        std::size_t a = 0;
        while (a < n && ++idx[a] > hi[a]) idx[a] = lo[a], ++a;
        if (a == n) return;
    }
}

/// Node-index range of V on the grid; V must align with nodes and keep one node of clearance.
void aligned_range(const Grid& grid, const ChartedDomain& V, std::vector<int>& lo, std::vector<int>& hi) {
    if (V.dim() != grid.dim()) throw DimensionError("integration box has the wrong dimension");
    lo.assign(static_cast<std::size_t>(grid.dim()), 0);
    hi.assign(static_cast<std::size_t>(grid.dim()), 0);
    for (int a = 0; a < grid.dim(); ++a) {
        const double h = grid.spacing(a);
        const double flo = (V[a].lo - grid.box()[a].lo) / h;
        const double fhi = (V[a].hi - grid.box()[a].lo) / h;
        const long ilo = std::lround(flo);
        const long ihi = std::lround(fhi);
        if (std::abs(flo - ilo) > 1e-8 || std::abs(fhi - ihi) > 1e-8) {
            std::ostringstream msg;
            msg << "integration box edge on axis " << a + 1 << " does not fall on a grid node";
            throw ArgumentError(msg.str());
        }
        if (ilo < 1 || ihi > grid.nodes(a) - 2 || ilo >= ihi)
            throw BoundaryError("integration box must stay one node inside the grid");
        lo[static_cast<std::size_t>(a)] = static_cast<int>(ilo);
        hi[static_cast<std::size_t>(a)] = static_cast<int>(ihi);
    }
}

/// Trapezoid sum over the nodes of V of f(jet, node).
template <class F>
double trapezoid_nodes(const DiscreteSection& section, const ChartedDomain& V, F&& f) {
    const Grid& grid = section.grid();
    std::vector<int> lo;
    std::vector<int> hi;
    aligned_range(grid, V, lo, hi);
    double cell = 1.0;
    for (int a = 0; a < grid.dim(); ++a) cell *= grid.spacing(a);
    double sum = 0.0;
    for_each_index(lo, hi, [&](const std::vector<int>& idx) {
        double w = cell;
        for (std::size_t a = 0; a < idx.size(); ++a)
            if (idx[a] == lo[a] || idx[a] == hi[a]) w *= 0.5;
        sum += w * f(section.jet(idx), grid.flatten(idx));
    });
    return sum;
}

/// Quadrature of f over the box V.
template <class F>
double integrate_box(const ChartedDomain& V, const Quadrature& quad, F&& f) {
    if (quad.cells_per_axis < 1) throw ArgumentError("quadrature needs at least one cell per axis");
    const int n = V.dim();
    const int m = quad.cells_per_axis;
    const bool mid = quad.rule == Quadrature::Rule::midpoint;
    std::vector<int> lo(static_cast<std::size_t>(n), 0);
    std::vector<int> hi(static_cast<std::size_t>(n), mid ? m - 1 : m);
    double cell = 1.0;
    for (int a = 0; a < n; ++a) cell *= V[a].width() / m;
    double sum = 0.0;
    for_each_index(lo, hi, [&](const std::vector<int>& idx) {
        Vector x(n);
        double w = cell;
        for (int a = 0; a < n; ++a) {
            const int i = idx[static_cast<std::size_t>(a)];
            const double h = V[a].width() / m;
            if (mid) {
                x[a] = V[a].lo + (i + 0.5) * h;
            } else {
                x[a] = i == m ? V[a].hi : V[a].lo + i * h;
                if (i == 0 || i == m) w *= 0.5;
            }
        }
        sum += w * f(x);
    });
    return sum;
}

}  // namespace

double HVResidual::max_abs() const { return std::max(multisym::max_abs(R), multisym::max_abs(S)); }

HVResidual hv_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const DifferentiationConfig& cfg) {
    const BundleShape& s = hv.shape;
    const PPoint z = point_of(hv, jet);
    const Vector g = hv.partials(z.coords(), cfg);
    HVResidual r{Vector::Zero(s.N()), Vector::Zero(s.n() * s.N())};
    for (int a = 0; a < s.N(); ++a) {
        double div = 0.0;
        for (int mu = 0; mu < s.n(); ++mu) div += jet.dfibre(s.fibre_pmom(mu, a), mu);
        r.R[a] = div + g[s.q(a)];
        for (int mu = 0; mu < s.n(); ++mu)
            r.S[a * s.n() + mu] = jet.dfibre(s.fibre_q(a), mu) - g[s.pmom(mu, a)];
    }
    return r;
}

double pullback_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const Vector& X,
                         const DifferentiationConfig& cfg) {
    const PPoint z = point_of(hv, jet);
    if (X.size() != hv.shape.dim_P()) throw DimensionError("pullback residual: X must be tangent to P(pi)");
    return top_coefficient(pullback(jet.tangent(), interior(X, omega_h(hv, z, cfg))));
}

double pullback_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet,
                         const std::function<Vector(const Vector&)>& X, const DifferentiationConfig& cfg) {
    return pullback_residual(hv, jet, X(jet.point()), cfg);
}

Vector pullback_residuals(const HamiltonVolterraFunction& hv, const SectionJet& jet, PullbackMode mode,
                          const DifferentiationConfig& cfg) {
    const BundleShape& s = hv.shape;
    const PPoint z = point_of(hv, jet);
    const AlternatingForm w = omega_h(hv, z, cfg);
    const Matrix T = jet.tangent();
    std::vector<Vector> frame;
    if (mode == PullbackMode::full) {
        for (int mu = 0; mu < s.n(); ++mu) frame.push_back(Vector::Unit(s.dim_P(), s.x(mu)));
    }
    for (Vector& v : vertical_basis_P(s)) frame.push_back(std::move(v));
    Vector out(static_cast<Eigen::Index>(frame.size()));
    for (std::size_t i = 0; i < frame.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = top_coefficient(pullback(T, interior(frame[i], w)));
    return out;
}

MultiVector pushed_covolume(const HamiltonVolterraFunction& hv, const SectionJet& jet,
                            const DifferentiationConfig& cfg) {
    const PPoint z = point_of(hv, jet);
    const Matrix Jh = section_jacobian(hv.shape, hv.partials(z.coords(), cfg));
    return MultiVector::decomposable(Matrix(Jh * jet.tangent()));
}

Vector vortex_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const DifferentiationConfig& cfg) {
    const PPoint z = point_of(hv, jet);
    const Matrix Jh = section_jacobian(hv.shape, hv.partials(z.coords(), cfg));
    const MultiVector G = MultiVector::decomposable(Matrix(Jh * jet.tangent()));
    const Vector c = contract(G, omega_coordinate(hv.shape)).as_covector();
    return Jh.transpose() * c;
}

AlternatingForm dhdw_contraction(const HamiltonVolterraFunction& hv, const SectionJet& jet,
                                 const DifferentiationConfig& cfg) {
    return contract(pushed_covolume(hv, jet, cfg), omega_coordinate(hv.shape));
}

AlternatingForm dhdw_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet,
                              const DifferentiationConfig& cfg) {
    const BundleShape& s = hv.shape;
    const PPoint z = point_of(hv, jet);
    const Vector g = hv.partials(z.coords(), cfg);
    const Matrix Jh = section_jacobian(s, g);
    const MultiVector G = MultiVector::decomposable(Matrix(Jh * jet.tangent()));
    Vector dH(s.dim_M());
    dH << g, 1.0;
    const double sign = s.n() % 2 == 1 ? 1.0 : -1.0;
    return contract(G, omega_coordinate(s)) - sign * AlternatingForm::from_gradient(dH);
}

Vector energy_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const Vector& dp_dx,
                       const DifferentiationConfig& cfg) {
    const BundleShape& s = hv.shape;
    if (dp_dx.size() != s.n()) throw DimensionError("energy residual: dp/dx needs n entries");
    const PPoint z = point_of(hv, jet);
    const Vector g = hv.partials(z.coords(), cfg);
    Vector E(s.n());
    for (int mu = 0; mu < s.n(); ++mu) {
        double e = dp_dx[mu] + g[s.x(mu)];
        for (int a = 0; a < s.N(); ++a) {
            const double q_mu = jet.dfibre(s.fibre_q(a), mu);
            for (int nu = 0; nu < s.n(); ++nu) {
                if (nu == mu) continue;
                e += jet.dfibre(s.fibre_q(a), nu) * jet.dfibre(s.fibre_pmom(nu, a), mu) -
                     q_mu * jet.dfibre(s.fibre_pmom(nu, a), nu);
            }
        }
        E[mu] = e;
    }
    return E;
}

Vector energy_residual(const HamiltonVolterraFunction& hv, const SectionJet& jet, const DifferentiationConfig& cfg) {
    const PPoint z = point_of(hv, jet);
    // p = -H_V(psi~(x)), so dp/dx = -grad H_V . dpsi~/dx.
    const Vector dp = -(jet.tangent().transpose() * hv.partials(z.coords(), cfg));
    return energy_residual(hv, jet, dp, cfg);
}

Vector energy_residual(const HamiltonVolterraFunction& hv, const AnalyticSection& section,
                       const std::function<double(const Vector&)>& p_of_x, const Vector& x,
                       const DifferentiationConfig& cfg) {
    const SectionJet jet = section.jet(x, cfg);
    const auto p_vec = [&p_of_x](const Vector& y) { return Vector::Constant(1, p_of_x(y)).eval(); };
    Vector dp(hv.shape.n());
    for (int mu = 0; mu < hv.shape.n(); ++mu) dp[mu] = partial(p_vec, x, mu, cfg, &section.domain())[0];
    return energy_residual(hv, jet, dp, cfg);
}

// ---------------------------------------------------------------------------
// Action

double action_density(const HamiltonVolterraFunction& hv, const SectionJet& jet) {
    const PPoint z = point_of(hv, jet);
    return top_coefficient(pullback(jet.tangent(), theta_h(hv, z)));
}

double action(const HamiltonVolterraFunction& hv, const AnalyticSection& section, const ChartedDomain& V,
              const Quadrature& quad, const DifferentiationConfig& cfg) {
    if (V.dim() != hv.shape.n()) throw DimensionError("action: integration box has the wrong dimension");
    if (!section.domain().compactly_contains(V)) throw SupportError("action: V is not compactly contained in U");
    return integrate_box(V, quad, [&](const Vector& x) { return action_density(hv, section.jet(x, cfg)); });
}

double action(const HamiltonVolterraFunction& hv, const DiscreteSection& section, const ChartedDomain& V) {
    return trapezoid_nodes(section, V, [&](const SectionJet& jet, std::size_t) { return action_density(hv, jet); });
}

double first_variation_density(const HamiltonVolterraFunction& hv, const SectionJet& jet, const Vector& w,
                               const DifferentiationConfig& cfg) {
    const BundleShape& s = hv.shape;
    if (w.size() != s.fibre_dim()) throw DimensionError("variation value must be fibre-sized");
    Vector xi = Vector::Zero(s.dim_P());
    xi.tail(s.fibre_dim()) = w;
    return -pullback_residual(hv, jet, xi, cfg);
}

FirstVariation action_first_variation(const HamiltonVolterraFunction& hv, const AnalyticSection& section,
                                      const Variation& phi, const ChartedDomain& V, double t_step,
                                      const Quadrature& quad, const DifferentiationConfig& cfg) {
    if (!(t_step > 0.0)) throw ArgumentError("first variation needs a positive t step");
    phi.check_admissible(V);
    FirstVariation out;
    const double up = action(hv, section.plus(phi.fibre, t_step), V, quad, cfg);
    const double down = action(hv, section.plus(phi.fibre, -t_step), V, quad, cfg);
    out.fd = (up - down) / (2.0 * t_step);
    out.analytic = integrate_box(V, quad, [&](const Vector& x) {
        return first_variation_density(hv, section.jet(x, cfg), phi.fibre.value(x), cfg);
    });
    return out;
}

FirstVariation action_first_variation(const HamiltonVolterraFunction& hv, const DiscreteSection& section,
                                      const Variation& phi, const ChartedDomain& V, double t_step) {
    if (!(t_step > 0.0)) throw ArgumentError("first variation needs a positive t step");
    phi.check_admissible(V);
    FirstVariation out;
    const double up = action(hv, section.plus(phi.fibre.value, t_step), V);
    const double down = action(hv, section.plus(phi.fibre.value, -t_step), V);
    out.fd = (up - down) / (2.0 * t_step);
    out.analytic = trapezoid_nodes(section, V, [&](const SectionJet& jet, std::size_t) {
        return first_variation_density(hv, jet, phi.fibre.value(jet.x));
    });
    return out;
}

// ---------------------------------------------------------------------------
// Suites

const std::vector<std::string>& five_way_equations() {
    static const std::vector<std::string> names = {equation::hv, equation::pullback_vertical, equation::pullback_full,
                                                   equation::vortex, equation::dhdw};
    return names;
}

void add_jet_residuals(ResidualReport& report, const HamiltonVolterraFunction& hv, const SectionJet& jet,
                       const SuiteOptions& options) {
    const DifferentiationConfig& cfg = options.cfg;
    for (const std::string& eq : options.equations) {
        double v = 0.0;
        if (eq == equation::hv) {
            v = hv_residual(hv, jet, cfg).max_abs();
        } else if (eq == equation::pullback_vertical) {
            v = max_abs(pullback_residuals(hv, jet, PullbackMode::vertical, cfg));
        } else if (eq == equation::pullback_full) {
            v = max_abs(pullback_residuals(hv, jet, PullbackMode::full, cfg));
        } else if (eq == equation::vortex) {
            v = max_abs(vortex_residual(hv, jet, cfg));
        } else if (eq == equation::dhdw) {
            v = dhdw_residual(hv, jet, cfg).max_abs();
        } else if (eq == equation::energy) {
            v = max_abs(energy_residual(hv, jet, cfg));
        } else {
            throw ArgumentError("unknown residual equation '" + eq + "'");
        }
        report.add(eq, jet.x, v);
    }
    report.count_evaluation();
}

namespace {

void echo_config(ResidualReport& report, const SuiteOptions& options) {
    std::ostringstream step;
    step.precision(17);
    step << options.cfg.step;
    report.set_config("step", step.str());
    report.set_config("scheme", options.cfg.scheme == Scheme::central ? "central" : "richardson");
}

}  // namespace

ResidualReport vertical_residual_suite(const HamiltonVolterraFunction& hv, const AnalyticSection& section,
                                       std::span<const Vector> points, const SuiteOptions& options) {
    ResidualReport report;
    echo_config(report, options);
    report.set_config("derivatives", section.has_analytic_derivatives() ? "analytic" : "finite-difference");
    for (const Vector& x : points) add_jet_residuals(report, hv, section.jet(x, options.cfg), options);
    return report;
}

ResidualReport vertical_residual_suite(const HamiltonVolterraFunction& hv, const DiscreteSection& section,
                                       const SuiteOptions& options) {
    ResidualReport report;
    echo_config(report, options);
    report.set_config("derivatives", "grid-central");
    const Grid& grid = section.grid();
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const std::vector<int> idx = grid.unflatten(i);
        if (!grid.interior(idx, 1)) continue;
        add_jet_residuals(report, hv, section.jet(idx), options);
    }
    return report;
}

std::vector<Vector> sample_points(const ChartedDomain& box, int per_axis) {
    if (per_axis < 1) throw ArgumentError("need at least one sample per axis");
    const int n = box.dim();
    std::vector<Vector> pts;
    std::vector<int> lo(static_cast<std::size_t>(n), 0);
    std::vector<int> hi(static_cast<std::size_t>(n), per_axis - 1);
    for_each_index(lo, hi, [&](const std::vector<int>& idx) {
        Vector x(n);
        for (int a = 0; a < n; ++a) {
            const int i = idx[static_cast<std::size_t>(a)];
            x[a] = per_axis == 1 ? 0.5 * (box[a].lo + box[a].hi)
                                 : (i == per_axis - 1 ? box[a].hi : box[a].lo + box[a].width() * i / (per_axis - 1));
        }
        pts.push_back(x);
    });
    return pts;
}

}  // namespace multisym
