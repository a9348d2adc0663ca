// Acceptance battery: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "multisym/bundle.hpp"
#include "multisym/field_equations.hpp"
#include "multisym/nplectic.hpp"
#include "multisym/solvers.hpp"
#include "multisym_cli/commands.hpp"
#include "multisym_cli/expression.hpp"

#include "support/convergence.hpp"
#include "support/expressions.hpp"
#include "support/generators.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace multisym;
using multisym::testing::Gen;
using multisym::testing::observed_order;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps_machine = std::numeric_limits<double>::epsilon();

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::vector<int> iota_indices(int n) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
}

HamiltonVolterraFunction hv_from(const BundleShape& s, std::function<double(const Vector&)> f) {
    HamiltonVolterraFunction hv = HamiltonVolterraFunction::zero(s);
    hv.value = std::move(f);
    hv.gradient = nullptr;
    return hv;
}

// delta_i(x) = c_i sin(a_i . x + b_i) with exact jacobian.
FibreFunction random_perturbation(Gen& g, int fibre, int n) {
    Matrix A(fibre, n);
    for (int i = 0; i < fibre; ++i) A.row(i) = g.vector(n, 0.5, 2.0).transpose();
    const Vector b = g.vector(fibre, 0.0, 2.0 * pi);
    Vector c = g.vector(fibre, 0.5, 1.5);
    for (int i = 0; i < fibre; ++i)
        if (g.integer(0, 1)) c[i] = -c[i];
    return FibreFunction{[A, b, c](const Vector& x) { return Vector(c.cwiseProduct((A * x + b).array().sin().matrix())); },
                         [A, b, c](const Vector& x) {
                             const Vector d = c.cwiseProduct((A * x + b).array().cos().matrix());
                             return Matrix(d.asDiagonal() * A);
                         }};
}

std::vector<Vector> battery_points(const ExampleSpec& e) { return sample_points(e.box, e.shape.n() == 1 ? 17 : 5); }

// ---------------------------------------------------------------------------

// Energy-vs-HV ratios gathered by criterion 1 for criterion 6.
std::vector<double> g_energy_ratios;

Outcome equivalence_battery() {
    Outcome o;
    double exact_worst = 0.0;
    for (const ExampleSpec& e : catalog()) {
        if (!e.exact) continue;
        const AnalyticSection s(e.shape, e.domain, *e.exact);
        const auto rep = vertical_residual_suite(e.hv, s, battery_points(e));
        for (const auto& name : five_way_equations()) {
            exact_worst = std::max(exact_worst, rep.norm(name).linf);
            o.require(rep.norm(name).linf < 1e-8, e.name + " " + name);
        }
    }

    Gen g(1001);
    const double eps[2] = {1e-2, 1e-3};
    double min_excess = std::numeric_limits<double>::infinity();
    double ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0.0;
    int cases = 0;
    for (const char* name : {"oscillator", "laplace-example", "laplace-saddle"}) {
        const ExampleSpec& e = find_example(name);
        const AnalyticSection base(e.shape, e.domain, *e.exact);
        const auto pts = battery_points(e);
        for (int trial = 0; trial < 20; ++trial) {
            const FibreFunction delta = random_perturbation(g, e.shape.fibre_dim(), e.shape.n());
            double norm[2][5];
            for (int k = 0; k < 2; ++k) {
                const auto rep = vertical_residual_suite(e.hv, base.plus(delta, eps[k]), pts);
                const auto& names = five_way_equations();
                for (std::size_t i = 0; i < names.size(); ++i) {
                    norm[k][i] = rep.norm(names[i]).linf;
                    min_excess = std::min(min_excess, norm[k][i] / (1e-4 * eps[k]));
                    o.require(norm[k][i] > 1e-4 * eps[k], std::string(name) + " " + names[i] + " below threshold");
                }
                g_energy_ratios.push_back(rep.norm(equation::energy).linf / rep.norm(equation::hv).linf);
            }
            for (int i = 0; i < 5; ++i) {
                const double r = norm[0][i] / norm[1][i];
                ratio_lo = std::min(ratio_lo, r);
                ratio_hi = std::max(ratio_hi, r);
                o.require(r >= 8.0 && r <= 12.0, std::string(name) + " ratio " + sci(r));
            }
            ++cases;
        }
    }
    o.detail << "exact max " << sci(exact_worst) << ", " << cases << " perturbations, min residual/(1e-4 eps) " << sci(min_excess)
             << ", ratio " << ratio_lo << ".." << ratio_hi;
    return o;
}

Outcome sign_pivot() {
    Outcome o;
    Gen g(1002);
    double worst = 0.0;
    int triples = 0;
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 200; ++trial) {
            const BundleShape s(n, g.integer(1, 2));
            const Vector w = g.vector(s.dim_P());
            const double k = g.uniform(0.5, 1.5);
            const auto hv = hv_from(s, [w, k](const Vector& z) { return 0.5 * z.tail(z.size() - 1).squaredNorm() + std::sin(k * w.dot(z)); });
            const AnalyticSection sec(s, ChartedDomain::cube(n, -2, 2), random_perturbation(g, s.fibre_dim(), n));
            const SectionJet jet = sec.jet(g.vector(n));
            const Vector X = g.vector(s.dim_P());
            const double lhs = pullback_residual(hv, jet, X);
            const MultiVector pushed = pushforward_multivector(jet.tangent(), MultiVector::basis(n, iota_indices(n)));
            const double rhs = (n % 2 ? -1.0 : 1.0) * contract(pushed, omega_h(hv, PPoint(s, jet.point()))).as_covector().dot(X);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
            ++triples;
        }
    }
    o.require(worst < 1e-12, "relative gap " + sci(worst));
    o.detail << triples << " triples, max relative gap " << sci(worst);
    return o;
}

Outcome canonical_structure() {
    Outcome o;
    Gen g(1003);
    double gap = 0.0, closed = 0.0;
    int min_rank_deficit = 0;
    for (const auto& [n, N] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
        const BundleShape s(n, N);
        FormField theta = liouville_field(s);
        theta.derivative = nullptr;
        const auto w = omega_coordinate(s);
        for (int i = 0; i < 100; ++i) gap = std::max(gap, (w + exterior_derivative(theta, g.vector(s.dim_M(), -2, 2))).max_abs());

        FormField wf = omega_field(s);
        wf.derivative = nullptr;
        const auto V = vertical_basis_M(s);
        for (int i = 0; i < 50; ++i) {
            const Vector eta = g.vector(s.dim_M(), -2, 2);
            const int rank = numerical_rank(flat_matrix(wf(eta)));
            min_rank_deficit = std::max(min_rank_deficit, s.dim_M() - rank);
            o.require(rank == s.dim_M(), "rank");
            o.require(is_k_horizontal(liouville_form(s, MPoint(s, eta)), V, 2), "Theta 2-horizontal");
            closed = std::max(closed, exterior_derivative(wf, eta).max_abs());
        }
    }
    o.require(gap < 1e-7, "omega vs -dTheta " + sci(gap));
    o.require(closed < 1e-6, "d omega " + sci(closed));
    o.detail << "omega vs -dTheta " << sci(gap) << ", rank deficit " << min_rank_deficit << ", |d omega| " << sci(closed);
    return o;
}

Outcome roundtrips() {
    Outcome o;
    Gen g(1004);
    double sfs_gap = 0.0, fn_gap = 0.0, chi_gap = 0.0, flow_gap = 0.0;
    bool z_exact = true;
    for (const auto& [n, N] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
        const BundleShape s(n, N);
        const Vector w = g.vector(s.dim_P());
        const auto hv = hv_from(s, [w](const Vector& z) { return 0.5 * z.squaredNorm() + std::cos(w.dot(z)); });
        const ScalarField H = hamiltonian_function_field(hv);
        // the function attached to the section h: F(eta) = p(eta) - p(h(rho(eta)))
        const ScalarField F{[hv, s](const Vector& y) {
                                const PPoint z(s, y.head(s.dim_P()));
                                return y[s.p()] - hamiltonian_section(hv, z).p();
                            },
                            nullptr, std::nullopt};
        for (int i = 0; i < 100; ++i) {
            const PPoint z(s, g.vector(s.dim_P()));
            const MPoint eta(z, g.uniform(-5, 5));
            const double u = g.uniform(-3, 3);
            z_exact = z_exact && z_derivative(H, eta) == 1.0;
            // exact up to the rounding of one addition
            const double scale = 4.0 * eps_machine * std::max({1.0, std::abs(hv(z)), std::abs(u), std::abs(eta.p())});
            chi_gap = std::max(chi_gap, std::abs(hamiltonian_function(hv, chi(hv, z, u)) - u) / scale);
            flow_gap = std::max(flow_gap, std::abs(hamiltonian_function(hv, z_flow(eta, u)) - hamiltonian_function(hv, eta) - u) / scale);
            sfs_gap = std::max(sfs_gap, (section_from_function(F, z).coords() - hamiltonian_section(hv, z).coords()).cwiseAbs().maxCoeff());
            fn_gap = std::max(fn_gap, std::abs(F.value(eta.coords()) - H.value(eta.coords())));
        }
    }
    o.require(z_exact, "Z(H) != 1");
    o.require(chi_gap <= 1.0, "H(chi(z,u)) - u");
    o.require(flow_gap <= 1.0, "flow shift");
    o.require(sfs_gap < 1e-12 && fn_gap < 1e-12, "section/function roundtrip");
    o.detail << "Z(H)=1 " << (z_exact ? "exact" : "no") << ", chi and flow within " << sci(std::max(chi_gap, flow_gap))
             << " of rounding bound, roundtrip " << sci(std::max(sfs_gap, fn_gap));
    return o;
}

double bump_integral_unit() {
    const int m = 20000;
    const double h = 2.0 / m;
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double s = -1.0 + i * h;
        const double f = std::abs(s) >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - s * s));
        sum += f * (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return sum * h / 3.0;
}

Outcome variational() {
    Outcome o;
    Gen g(1005);
    double fd_max = 0.0, gap1 = 0.0, gap2 = 0.0, grid_ratio = 0.0;

    const ExampleSpec& osc = find_example("oscillator");
    const AnalyticSection so(osc.shape, osc.domain, *osc.exact);
    const ChartedDomain V1({{0.0, 2.0 * pi}});
    for (int i = 0; i < 10; ++i) {
        const double lo = g.uniform(0.2, 3.0);
        const Variation phi = Variation::bump(osc.shape, ChartedDomain({{lo, lo + g.uniform(0.5, 2.5)}}), g.vector(2));
        const auto fv = action_first_variation(osc.hv, so, phi, V1, 1e-3, {Quadrature::Rule::midpoint, 4000});
        fd_max = std::max(fd_max, std::abs(fv.fd));
        gap1 = std::max(gap1, std::abs(fv.fd - fv.analytic));
    }

    const ExampleSpec& lap = find_example("laplace-example");
    const AnalyticSection sl(lap.shape, lap.domain, *lap.exact);
    for (int i = 0; i < 10; ++i) {
        const Vector lo = g.vector(2, 0.1, 0.5);
        const Variation phi = Variation::bump(lap.shape, ChartedDomain({{lo[0], lo[0] + 0.4}, {lo[1], lo[1] + 0.4}}), g.vector(3));
        const auto fv = action_first_variation(lap.hv, sl, phi, lap.box, 1e-3, {Quadrature::Rule::midpoint, 200});
        fd_max = std::max(fd_max, std::abs(fv.fd));
        gap2 = std::max(gap2, std::abs(fv.fd - fv.analytic));
    }

    // grid quadrature on the SOR solution
    const ExampleSpec& sor = find_example("laplace-solver");
    const Grid grid(sor.box, {65, 65});
    const LaplaceResult solved = solve_laplace(grid, sor.boundary);
    const double h = grid.spacing(0);
    for (int i = 0; i < 5; ++i) {
        const Vector lo = g.vector(2, 0.15, 0.45);
        const Variation phi = Variation::bump(sor.shape, ChartedDomain({{lo[0], lo[0] + 0.4}, {lo[1], lo[1] + 0.4}}), g.vector(3));
        const auto fv = action_first_variation(sor.hv, solved.section, phi, ChartedDomain::cube(2, h, 1.0 - h), 1e-3);
        grid_ratio = std::max(grid_ratio, std::abs(fv.fd - fv.analytic) / (5 * h * h));
    }

    // q = x1, p1 = 0 under H = p1^2 / 2, with the momentum lowered by a bump
    const BundleShape line(1, 1);
    const auto hv = hv_from(line, [](const Vector& z) { return 0.5 * z[2] * z[2]; });
    const AnalyticSection sec(line, ChartedDomain::cube(1, -1.0, 2.0), FibreFunction{[](const Vector& x) {
                                                                                      Vector v(2);
                                                                                      v << x[0], 0.0;
                                                                                      return v;
                                                                                  },
                                                                                  [](const Vector&) {
                                                                                      Matrix J(2, 1);
                                                                                      J << 1.0, 0.0;
                                                                                      return J;
                                                                                  }});
    Vector wv(2);
    wv << 0.0, -1.0;
    const ChartedDomain support({{0.2, 0.8}});
    const auto fv = action_first_variation(hv, sec, Variation::bump(line, support, wv), ChartedDomain({{0.0, 1.0}}), 1e-3,
                                           {Quadrature::Rule::midpoint, 4000});
    const double expected = -0.3 * bump_integral_unit();

    o.require(fd_max < 1e-6, "fd on solutions " + sci(fd_max));
    o.require(gap1 < 1e-6, "n=1 fd vs analytic " + sci(gap1));
    o.require(gap2 < 1e-6, "n=2 analytic-path fd vs analytic " + sci(gap2));
    o.require(grid_ratio < 1.0, "n=2 grid fd vs analytic / 5h^2 " + sci(grid_ratio));
    o.require(fv.fd < 0.0 && std::abs(fv.fd - expected) < 1e-6 && std::abs(fv.analytic - expected) < 1e-6, "non-solution");
    o.detail << "|fd| " << sci(fd_max) << ", gap n=1 " << sci(gap1) << ", n=2 " << sci(gap2) << ", grid gap/(5h^2) " << sci(grid_ratio)
             << ", line " << fv.fd << " vs " << expected;
    return o;
}

Outcome energy_redundancy() {
    Outcome o;
    double worst = 0.0;
    for (double r : g_energy_ratios) worst = std::max(worst, r);

    // solver sections on the grid path as well
    const ExampleSpec& sor = find_example("laplace-solver");
    for (int m : {33, 65}) {
        const LaplaceResult r = solve_laplace(Grid(sor.box, {m, m}), sor.boundary);
        SuiteOptions opt;
        opt.equations = {equation::hv, equation::energy};
        const auto rep = vertical_residual_suite(sor.hv, r.section, opt);
        worst = std::max(worst, rep.norm(equation::energy).linf / rep.norm(equation::hv).linf);
    }
    o.require(!g_energy_ratios.empty(), "battery did not run");
    o.require(worst <= 10.0, "ratio " + sci(worst));
    o.detail << g_energy_ratios.size() + 2 << " sections, max energy/HV ratio " << worst;
    return o;
}

Outcome solver_orders() {
    Outcome o;
    const ExampleSpec& osc = find_example("oscillator");
    std::vector<double> steps = {2e-3, 1e-3, 5e-4}, errs;
    for (double h : steps) {
        const DiscreteSection s = solve_ode(osc.hv, osc.initial.head(1), osc.initial.tail(1), {0.0, 2.0 * pi}, h);
        double e = 0.0;
        for (std::size_t i = 0; i < s.grid().node_count(); ++i)
            e = std::max(e, (s.value(i) - osc.exact->value(s.grid().coordinates(i))).cwiseAbs().maxCoeff());
        errs.push_back(e);
    }
    const double rk4 = observed_order(steps, errs);

    const ExampleSpec& sor = find_example("laplace-solver");
    std::vector<double> hs, res;
    double t65 = 0.0;
    for (int m : {33, 65, 129}) {
        const auto t0 = std::chrono::steady_clock::now();
        const LaplaceResult r = solve_laplace(Grid(sor.box, {m, m}), sor.boundary);
        if (m == 65) t65 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        SuiteOptions opt;
        opt.equations = {equation::hv};
        hs.push_back(1.0 / (m - 1));
        res.push_back(vertical_residual_suite(sor.hv, r.section, opt).norm(equation::hv).linf);
    }
    const double lap = observed_order(hs, res);
    o.require(std::abs(rk4 - 4.0) <= 0.3, "rk4 order");
    o.require(std::abs(lap - 2.0) <= 0.2, "laplace order");
    o.require(t65 < 5.0, "laplace time");
    o.detail << "rk4 order " << rk4 << ", laplace order " << lap << ", 65x65 in " << t65 << " s";
    return o;
}

Outcome specialization() {
    Outcome o;
    Gen g(1008);
    double spec_gap = 0.0;
    for (const ExampleSpec& e : catalog()) {
        if (!e.exact) continue;
        const AnalyticSection s(e.shape, e.domain, *e.exact);
        const SmoothMap psi = compose(hamiltonian_section_map(e.hv), s.as_map());
        for (int i = 0; i < 10; ++i) {
            const Vector x = g.point_in(e.box);
            const auto a = dynamical_hdw_residual(multicotangent_manifold(e.shape), hamiltonian_form(e.hv), psi, CoVolume::standard(e.shape.n()), x);
            spec_gap = std::max(spec_gap, (a - dhdw_residual(e.hv, s.jet(x))).max_abs());
        }
    }
    for (int n = 1; n <= 3; ++n) {
        const BundleShape shape(n, 2);
        HamiltonVolterraFunction hv = HamiltonVolterraFunction::zero(shape);
        hv.value = [](const Vector& z) { return 0.5 * z.squaredNorm() + std::sin(z[0]); };
        hv.gradient = [](const Vector& z) {
            Vector gr = z;
            gr[0] += std::cos(z[0]);
            return gr;
        };
        const AnalyticSection s(shape, ChartedDomain::cube(n, -2, 2), random_perturbation(g, shape.fibre_dim(), n));
        const SmoothMap psi = compose(hamiltonian_section_map(hv), s.as_map());
        for (int i = 0; i < 5; ++i) {
            const Vector x = g.vector(n);
            const auto a = dynamical_hdw_residual(multicotangent_manifold(shape), hamiltonian_form(hv), psi, CoVolume::standard(n), x);
            spec_gap = std::max(spec_gap, (a - dhdw_residual(hv, s.jet(x))).max_abs());
        }
    }

    auto constant_field = [](const AlternatingForm& a) {
        FormField f = FormField::constant(a);
        f.derivative = nullptr;
        return f;
    };
    auto scalar = [](int dim, std::function<double(const Vector&)> f, std::function<Vector(const Vector&)> grad) {
        FormField H;
        H.dim = dim;
        H.degree = 0;
        H.at = [f, dim](const Vector& y) { return AlternatingForm::constant(dim, f(y)); };
        H.derivative = [grad](const Vector& y) { return AlternatingForm::from_gradient(grad(y)); };
        return HamiltonianForm{H};
    };
    const NPlecticManifold plane{2, 1, constant_field(AlternatingForm::monomial(2, {0, 1})), std::nullopt};
    struct Case {
        std::function<double(const Vector&)> f;
        std::function<Vector(const Vector&)> grad;
    };
    const std::vector<Case> cases = {
        {[](const Vector& y) { return 0.5 * y.squaredNorm(); }, [](const Vector& y) { return y; }},
        {[](const Vector& y) { return 0.5 * y[1] * y[1] - std::cos(y[0]); },
         [](const Vector& y) {
             Vector gr(2);
             gr << std::sin(y[0]), y[1];
             return gr;
         }},
        {[](const Vector& y) { return y[0] * y[0] * y[1] + std::exp(0.3 * y[1]); },
         [](const Vector& y) {
             Vector gr(2);
             gr << 2.0 * y[0] * y[1], y[0] * y[0] + 0.3 * std::exp(0.3 * y[1]);
             return gr;
         }},
    };
    double rec_gap = 0.0;
    for (const Case& c : cases) {
        const auto H = scalar(2, c.f, c.grad);
        for (int i = 0; i < 10; ++i) {
            const Vector y = g.vector(2);
            const Vector gr = c.grad(y);
            Vector classical(2);
            classical << gr[1], -gr[0];
            rec_gap = std::max(rec_gap, (solve_hdw_vector(plane, H, y) - classical).cwiseAbs().maxCoeff());
        }
    }

    const auto r1 = degeneracy_scan(plane, scalar(2, [](const Vector& y) { return y[0]; }, [](const Vector&) { return Vector(Vector::Unit(2, 0)); }), 1,
                                    Vector::Zero(2));
    const NPlecticManifold vol{3, 2, constant_field(AlternatingForm::volume(3, 0, 3)), std::nullopt};
    const auto r2 = degeneracy_scan(vol, HamiltonianForm{constant_field(AlternatingForm(3, 0))}, 2, Vector::Zero(3));
    const auto r3 = degeneracy_scan(plane, scalar(2, [](const Vector&) { return 4.0; }, [](const Vector&) { return Vector(Vector::Zero(2)); }), 1,
                                    Vector::Constant(2, 0.3));
    const bool degeneracy_ok = r1.kernel_dim == 0 && !r1.dH_vanishes && r2.kernel_dim == 0 && r2.multivector_dim == 3 && r3.dH_vanishes;

    o.require(spec_gap < 1e-9, "specialization " + sci(spec_gap));
    o.require(rec_gap < 1e-10, "recovery " + sci(rec_gap));
    o.require(degeneracy_ok, "degeneracy reports");
    o.detail << "pipelines agree to " << sci(spec_gap) << ", recovery " << sci(rec_gap) << ", degeneracy kernels " << r1.kernel_dim << "/"
             << r2.kernel_dim << ", constant H flagged " << (r3.dH_vanishes ? "yes" : "no");
    return o;
}

Outcome action_values() {
    Outcome o;
    const ExampleSpec& osc = find_example("oscillator");
    const double a1 = action(osc.hv, AnalyticSection(osc.shape, osc.domain, *osc.exact), ChartedDomain({{0.0, 2.0 * pi}}));
    const ExampleSpec& lap = find_example("laplace-example");
    const int m = 64;
    const double h = 1.0 / m;
    const double a2 = action(lap.hv, AnalyticSection(lap.shape, lap.domain, *lap.exact), lap.box, {Quadrature::Rule::midpoint, m});
    o.require(std::abs(a1) < 1e-6, "oscillator");
    o.require(std::abs(a2 - 1.0 / 3.0) < 5 * h * h, "laplace");
    o.detail << "oscillator " << sci(a1) << ", laplace " << a2 << " (|err| " << sci(std::abs(a2 - 1.0 / 3.0)) << " < " << sci(5 * h * h) << ")";
    return o;
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    if (out) *out = o.str();
    return code;
}

std::string strip_timestamp(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    j.erase("timestamp");
    return j.dump();
}

Outcome cli_properties() {
    Outcome o;
    const std::string dir = MULTISYM_PROBLEMS_DIR;
    bool deterministic = true;
    for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
             {"verify", "--file", dir + "/perturbed.ini", "--seed", "11"},
             {"verify", "--file", dir + "/laplace.ini"},
             {"action", "--example", "laplace", "--variations", "3", "--seed", "5"},
             {"nplectic", "check", "--file", dir + "/symplectic2d.ini"}}) {
        std::string a, b;
        run_cli(args, &a);
        run_cli(args, &b);
        deterministic = deterministic && strip_timestamp(a) == strip_timestamp(b);
    }

    std::mt19937_64 rng(1010);
    int fixed = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::string text = cli::print(multisym::testing::random_expression(rng, 5));
        if (cli::print(cli::parse_expression(text)) == text) ++fixed;
    }

    const int code = run_cli({"verify"});
    o.require(deterministic, "determinism");
    o.require(fixed == 1000, "parser round-trip");
    o.require(code == 0, "catalog verify exit " + std::to_string(code));
    o.detail << "reports byte-identical " << (deterministic ? "yes" : "no") << ", round-trip " << fixed << "/1000, verify exit " << code;
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        Outcome (*run)();
    };
    const std::vector<Criterion> criteria = {
        {1, "equivalence battery", equivalence_battery},
        {2, "sign-convention pivot", sign_pivot},
        {3, "canonical structure", canonical_structure},
        {4, "section/function roundtrips", roundtrips},
        {5, "variational check", variational},
        {6, "energy redundancy", energy_redundancy},
        {7, "solver orders", solver_orders},
        {8, "n-plectic specialization", specialization},
        {9, "action values", action_values},
        {10, "cli determinism and parser", cli_properties},
    };
    int failed = 0;
    double total = 0.0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        total += secs;
        bool ok = out.pass;
        if (c.id == 1 && secs >= 30.0) {
            ok = false;
            out.detail << " [failed: runtime]";
        }
        if (!ok) ++failed;
        std::printf("%s %2d %-30s %6.2fs  %s\n", ok ? "PASS" : "FAIL", c.id, c.title, secs, out.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed in %.2fs\n", static_cast<int>(criteria.size()) - failed, criteria.size(), total);
    return failed == 0 ? 0 : 1;
}
