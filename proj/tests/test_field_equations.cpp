#include "multisym/error.hpp"
#include "multisym/field_equations.hpp"
#include "multisym/solvers.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace multisym;
using multisym::testing::Gen;

namespace {

constexpr double pi = std::numbers::pi;

HamiltonVolterraFunction hv_from(const BundleShape& s, std::function<double(const Vector&)> f) {
    HamiltonVolterraFunction hv = HamiltonVolterraFunction::zero(s);
    hv.value = std::move(f);
    hv.gradient = nullptr;
    return hv;
}

// Sections with hand-written fibre functions; jacobians are left to finite differences
// unless given.
AnalyticSection section_of(const BundleShape& s, const ChartedDomain& U, std::function<Vector(const Vector&)> f,
                           std::function<Matrix(const Vector&)> J = nullptr) {
    return AnalyticSection(s, U, FibreFunction{std::move(f), std::move(J)});
}

// q = x1, p1 = 0 under H = (p1)^2 / 2: not a solution (S = 1).
struct LineCase {
    BundleShape shape{1, 1};
    HamiltonVolterraFunction hv = hv_from(BundleShape(1, 1), [](const Vector& z) { return 0.5 * z[2] * z[2]; });
    AnalyticSection section = section_of(
        BundleShape(1, 1), ChartedDomain::cube(1, -1.0, 2.0),
        [](const Vector& x) {
            Vector v(2);
            v << x[0], 0.0;
            return v;
        },
        [](const Vector&) {
            Matrix J(2, 1);
            J << 1.0, 0.0;
            return J;
        });
};

// Random smooth section: each fibre component a sum of two sines.
AnalyticSection random_section(Gen& g, const BundleShape& s, const ChartedDomain& U) {
    const int F = s.fibre_dim();
    const Matrix A = g.matrix(2 * F, s.n());
    const Vector b = g.vector(2 * F);
    const Vector c = g.vector(2 * F);
    return section_of(s, U, [A, b, c, F](const Vector& x) {
        Vector v(F);
        for (int i = 0; i < F; ++i)
            v[i] = c[2 * i] * std::sin(A.row(2 * i).dot(x) + b[2 * i]) + c[2 * i + 1] * std::sin(A.row(2 * i + 1).dot(x) + b[2 * i + 1]);
        return v;
    });
}

HamiltonVolterraFunction random_hv(Gen& g, const BundleShape& s) {
    const Vector w = g.vector(s.dim_P());
    const double k = g.uniform(0.5, 1.5);
    return hv_from(s, [w, k](const Vector& z) { return 0.5 * z.tail(z.size() - 1).squaredNorm() + std::sin(k * w.dot(z)); });
}

Vector at(double a) { return Vector::Constant(1, a); }
Vector at(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

// Composite Simpson rule for the product bump exp(1 - 1/(1 - s^2)) on [-1, 1].
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

}  // namespace

// ---------------------------------------------------------------------------
// Hamilton-Volterra

TEST(HV, LaplaceExampleExact) {
    const ExampleSpec& e = find_example("laplace-example");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    const auto r = hv_residual(e.hv, s.jet(at(0.3, 0.8)));
    EXPECT_LT(r.max_abs(), 1e-12);
    EXPECT_EQ(r.R.size(), 1);
    EXPECT_EQ(r.S.size(), 2);
}

TEST(HV, OscillatorExact) {
    const ExampleSpec& e = find_example("oscillator");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    for (double x : {0.0, 1.0, 2.5, 6.0}) EXPECT_LT(hv_residual(e.hv, s.jet(at(x))).max_abs(), 1e-12);
}

TEST(HV, LineIsNotASolution) {
    LineCase c;
    const auto r = hv_residual(c.hv, c.section.jet(at(0.5)));
    EXPECT_NEAR(r.S[0], 1.0, 1e-12);
    EXPECT_NEAR(r.R[0], 0.0, 1e-12);
}

TEST(HV, FiniteDifferencePathAgrees) {
    const ExampleSpec& e = find_example("laplace-solver");
    FibreFunction numeric = *e.exact;
    numeric.jacobian = nullptr;
    HamiltonVolterraFunction hv = e.hv;
    hv.gradient = nullptr;
    const AnalyticSection s(e.shape, e.domain, numeric);
    EXPECT_LT(hv_residual(hv, s.jet(at(0.4, 0.6))).max_abs(), 1e-8);
}

TEST(HV, BoundaryClearanceIsEnforced) {
    const ExampleSpec& e = find_example("laplace-example");
    FibreFunction numeric = *e.exact;
    numeric.jacobian = nullptr;
    const AnalyticSection s(e.shape, e.domain, numeric);
    EXPECT_THROW(s.jet(at(e.domain[0].lo, 0.5)), BoundaryError);
}

// ---------------------------------------------------------------------------
// Pullback

TEST(Pullback, LaplaceExampleVertical) {
    const ExampleSpec& e = find_example("laplace-example");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    Vector dq = Vector::Zero(5);
    dq[2] = 1.0;
    EXPECT_LT(std::abs(pullback_residual(e.hv, s.jet(at(0.2, 0.7)), dq)), 1e-8);
}

TEST(Pullback, ConstantSectionZeroHamiltonian) {
    Gen g(107);
    for (const auto& [n, N] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}}) {
        const BundleShape s(n, N);
        const Vector c = g.vector(s.fibre_dim());
        const AnalyticSection sec = section_of(s, ChartedDomain::cube(n, -1, 1), [c](const Vector&) { return c; });
        const auto hv = HamiltonVolterraFunction::zero(s);
        for (int i = 0; i < 5; ++i) EXPECT_NEAR(pullback_residual(hv, sec.jet(g.vector(n, -0.5, 0.5)), g.vector(s.dim_P())), 0.0, 1e-9);
    }
}

TEST(Pullback, LineWithMomentumDirection) {
    LineCase c;
    Vector X = Vector::Zero(3);
    X[2] = 1.0;
    EXPECT_NEAR(pullback_residual(c.hv, c.section.jet(at(0.5)), X), -1.0, 1e-12);
}

TEST(Pullback, SignPivotIdentity) {
    // psi~^*(iota_X omega_h)(gamma) = (-1)^n contract(psi~_* gamma, omega_h)(X)
    Gen g(109);
    const std::vector<std::pair<int, int>> shapes = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}, {3, 2}};
    for (int trial = 0; trial < 200; ++trial) {
        const auto [n, N] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
        const BundleShape s(n, N);
        const auto hv = random_hv(g, s);
        const auto sec = random_section(g, s, ChartedDomain::cube(n, -2, 2));
        const SectionJet jet = sec.jet(g.vector(n));
        const Vector X = g.vector(s.dim_P());
        const double lhs = pullback_residual(hv, jet, X);
        const MultiVector pushed = pushforward_multivector(jet.tangent(), MultiVector::basis(n, [n] {
                                                               std::vector<int> all(static_cast<std::size_t>(n));
                                                               for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
                                                               return all;
                                                           }()));
        const AlternatingForm contracted = contract(pushed, omega_h(hv, PPoint(s, jet.point())));
        const double rhs = (n % 2 ? -1.0 : 1.0) * contracted.as_covector().dot(X);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(Pullback, DecompositionIntoVerticalPart) {
    Gen g(113);
    for (int trial = 0; trial < 50; ++trial) {
        const BundleShape s(g.integer(1, 3), g.integer(1, 2));
        const auto hv = random_hv(g, s);
        const auto sec = random_section(g, s, ChartedDomain::cube(s.n(), -2, 2));
        const SectionJet jet = sec.jet(g.vector(s.n()));
        const Vector X = g.vector(s.dim_P());
        const Vector vertical = X - jet.tangent() * X.head(s.n());
        EXPECT_NEAR(pullback_residual(hv, jet, X), pullback_residual(hv, jet, vertical), 1e-9);
    }
}

TEST(Pullback, FunctionOverloadMatchesVector) {
    LineCase c;
    const auto jet = c.section.jet(at(0.3));
    const auto field = [](const Vector& z) { return Vector(z.cwiseProduct(z)); };
    EXPECT_DOUBLE_EQ(pullback_residual(c.hv, jet, field), pullback_residual(c.hv, jet, field(jet.point())));
}

// ---------------------------------------------------------------------------
// Suites

TEST(Suite, OscillatorBothModes) {
    const ExampleSpec& e = find_example("oscillator");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    const auto pts = sample_points(e.box, 17);
    const auto rep = vertical_residual_suite(e.hv, s, pts);
    for (const auto& name : five_way_equations()) EXPECT_LT(rep.norm(name).linf, 1e-8) << name;
    EXPECT_EQ(rep.norm(equation::hv).nodes, pts.size());
}

TEST(Suite, ConstantSectionZeroHamiltonian) {
    const BundleShape s(2, 1);
    const AnalyticSection sec = section_of(s, ChartedDomain::cube(2, -1, 2), [](const Vector&) { return Vector(Vector::Constant(3, 0.7)); });
    const auto rep = vertical_residual_suite(HamiltonVolterraFunction::zero(s), sec, sample_points(ChartedDomain::cube(2, 0, 1), 4));
    EXPECT_LT(rep.max_linf(), 1e-9);
}

TEST(Suite, PerturbationScalesLinearly) {
    const ExampleSpec& e = find_example("laplace-example");
    const auto pts = sample_points(e.box, 5);
    double norms[2][6];
    const double eps[2] = {1e-2, 1e-3};
    for (int k = 0; k < 2; ++k) {
        const AnalyticSection s = AnalyticSection(e.shape, e.domain, *e.exact).plus(
            FibreFunction{[](const Vector& x) {
                              Vector v = Vector::Zero(3);
                              v[0] = std::sin(x[0]);
                              return v;
                          },
                          nullptr},
            eps[k]);
        const auto rep = vertical_residual_suite(e.hv, s, pts);
        for (int i = 0; i < 6; ++i) norms[k][i] = rep.equations()[static_cast<std::size_t>(i)].linf;
    }
    for (int i = 0; i < 6; ++i) {
        EXPECT_GT(norms[1][i], 1e-4 * 1e-3 * 0.1);
        EXPECT_NEAR(norms[0][i] / norms[1][i], 10.0, 2.0) << i;
    }
}

TEST(Suite, ReportNormsAreConsistent) {
    LineCase c;
    const auto rep = vertical_residual_suite(c.hv, c.section, sample_points(ChartedDomain::cube(1, 0, 1), 9));
    for (const auto& eq : rep.equations()) {
        EXPECT_GE(eq.linf, 0.0);
        EXPECT_LE(eq.l2, std::sqrt(static_cast<double>(eq.nodes)) * eq.linf + 1e-15);
    }
    EXPECT_EQ(rep.samples().size(), 9u * rep.equations().size());
    EXPECT_GT(rep.evaluations(), 0u);
}

TEST(Suite, DiscreteSectionOfExactSolution) {
    const ExampleSpec& e = find_example("laplace-example");
    const Grid grid(e.box, {17, 17});
    const auto sec = DiscreteSection::sample(e.shape, grid, e.exact->value);
    const auto rep = vertical_residual_suite(e.hv, sec);
    EXPECT_LT(rep.max_linf(), 1e-12);  // central differences are exact on quadratics
    EXPECT_EQ(rep.norm(equation::hv).nodes, 15u * 15u);
}

// ---------------------------------------------------------------------------
// Vortex and dHDW

TEST(Vortex, LaplaceExact) {
    const ExampleSpec& e = find_example("laplace-example");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    const Vector v = vortex_residual(e.hv, s.jet(at(0.6, 0.1)));
    EXPECT_EQ(v.size(), 5);
    EXPECT_LT(v.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Vortex, LineMatchesPullbackMagnitude) {
    LineCase c;
    const auto jet = c.section.jet(at(0.5));
    const Vector v = vortex_residual(c.hv, jet);
    Vector X = Vector::Zero(3);
    X[2] = 1.0;
    EXPECT_NEAR(std::abs(v[2]), std::abs(pullback_residual(c.hv, jet, X)), 1e-12);
    EXPECT_NEAR(v[2], -pullback_residual(c.hv, jet, X), 1e-12);  // (-1)^n with n = 1
}

TEST(DHDW, OscillatorExactAndNormalization) {
    const ExampleSpec& e = find_example("oscillator");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    for (double x : {0.5, 3.0}) {
        const auto jet = s.jet(at(x));
        EXPECT_LT(dhdw_residual(e.hv, jet).max_abs(), 1e-8);
        EXPECT_NEAR(dhdw_contraction(e.hv, jet).coeff(e.shape.p()), 1.0, 1e-12);  // (-1)^{n+1}
    }
}

TEST(DHDW, PComponentNormalizationAllDimensions) {
    Gen g(127);
    for (int n = 1; n <= 3; ++n) {
        const BundleShape s(n, 2);
        const auto hv = random_hv(g, s);
        const auto sec = random_section(g, s, ChartedDomain::cube(n, -2, 2));
        const auto c = dhdw_contraction(hv, sec.jet(g.vector(n)));
        EXPECT_NEAR(c.coeff(s.p()), n % 2 ? 1.0 : -1.0, 1e-12);
    }
}

TEST(DHDW, ConstantSectionZeroHamiltonian) {
    for (int n = 1; n <= 3; ++n) {
        const BundleShape s(n, 1);
        const AnalyticSection sec = section_of(s, ChartedDomain::cube(n, -1, 1), [s](const Vector&) { return Vector(Vector::Constant(s.fibre_dim(), 0.3)); });
        const auto jet = sec.jet(Vector::Zero(n));
        const auto hv = HamiltonVolterraFunction::zero(s);
        const auto c = dhdw_contraction(hv, jet);
        const double sign = n % 2 ? 1.0 : -1.0;
        EXPECT_LT((c - sign * AlternatingForm::basis(s.dim_M(), s.p())).max_abs(), 1e-15);
        EXPECT_LT(dhdw_residual(hv, jet).max_abs(), 1e-15);
    }
}

TEST(DHDW, RestrictionReproducesVortex) {
    Gen g(131);
    const BundleShape s(2, 2);
    const auto hv = random_hv(g, s);
    const auto sec = random_section(g, s, ChartedDomain::cube(2, -2, 2));
    const auto jet = sec.jet(g.vector(2));
    const Vector cov = dhdw_contraction(hv, jet).as_covector();
    const Matrix Jh = jacobian(hamiltonian_section_map(hv), jet.point());
    EXPECT_LT((Jh.transpose() * cov - vortex_residual(hv, jet)).cwiseAbs().maxCoeff(), 1e-9);
}

// ---------------------------------------------------------------------------
// Energy

TEST(Energy, LaplaceExactAllOverloads) {
    const ExampleSpec& e = find_example("laplace-example");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    const Vector x = at(0.35, 0.65);
    EXPECT_LT(energy_residual(e.hv, s.jet(x)).cwiseAbs().maxCoeff(), 1e-8);
    const auto p_of_x = [&](const Vector& y) { return -e.hv(s.jet(y).point()); };
    EXPECT_LT(energy_residual(e.hv, s, p_of_x, x).cwiseAbs().maxCoeff(), 1e-8);
    // dp/dx by hand: p = -(x1^2 + x2^2)/2
    EXPECT_LT(energy_residual(e.hv, s.jet(x), -x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Energy, OscillatorAndConstant) {
    const ExampleSpec& e = find_example("oscillator");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    EXPECT_LT(energy_residual(e.hv, s.jet(at(1.1))).cwiseAbs().maxCoeff(), 1e-12);
    const BundleShape b(2, 1);
    const AnalyticSection c = section_of(b, ChartedDomain::cube(2, -1, 1), [](const Vector&) { return Vector(Vector::Constant(3, 2.0)); });
    EXPECT_LT(energy_residual(HamiltonVolterraFunction::zero(b), c.jet(at(0.0, 0.0)), Vector(Vector::Zero(2))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Energy, BoundedByHVResidual) {
    Gen g(137);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const ExampleSpec& e = find_example(trial % 2 ? "laplace-example" : "laplace-saddle");
        const double eps = std::pow(10.0, -g.uniform(1.0, 4.0));
        const Vector k = g.vector(2, 0.5, 3.0);
        const AnalyticSection s = AnalyticSection(e.shape, e.domain, *e.exact)
                                      .plus(FibreFunction{[k](const Vector& x) {
                                                              Vector v(3);
                                                              v << std::sin(k[0] * x[0]) * std::cos(k[1] * x[1]), std::cos(k[1] * x[0]), std::sin(x[1]);
                                                              return v;
                                                          },
                                                          nullptr},
                                            eps);
        SuiteOptions o;
        o.equations = {equation::hv, equation::energy};
        const auto rep = vertical_residual_suite(e.hv, s, sample_points(e.box, 5), o);
        worst = std::max(worst, rep.norm(equation::energy).linf / rep.norm(equation::hv).linf);
    }
    EXPECT_LE(worst, 10.0);
}

// ---------------------------------------------------------------------------
// Action

TEST(Action, Oscillator) {
    const ExampleSpec& e = find_example("oscillator");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    EXPECT_NEAR(action(e.hv, s, ChartedDomain({{0.0, 2.0 * pi}})), 0.0, 1e-9);
    // density sin^2 x - 1/2 on [0, pi/2]: pi/4 - pi/4 = 0; on [0, pi/4]: pi/8 - 1/4 - pi/8 = -1/4
    EXPECT_NEAR(action(e.hv, s, ChartedDomain({{0.0, pi / 4}}), {Quadrature::Rule::midpoint, 2000}), -0.25, 1e-7);
}

TEST(Action, ZeroAndLaplace) {
    const BundleShape b(2, 1);
    const AnalyticSection c = section_of(b, ChartedDomain::cube(2, -1, 2), [](const Vector&) { return Vector(Vector::Constant(3, 0.0)); });
    EXPECT_DOUBLE_EQ(action(HamiltonVolterraFunction::zero(b), c, ChartedDomain::cube(2, 0, 1)), 0.0);

    const ExampleSpec& e = find_example("laplace-example");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    for (int m : {50, 100, 200}) {
        const double h = 1.0 / m;
        EXPECT_NEAR(action(e.hv, s, e.box, {Quadrature::Rule::midpoint, m}), 1.0 / 3.0, 5 * h * h);
        EXPECT_NEAR(action(e.hv, s, e.box, {Quadrature::Rule::trapezoid, m}), 1.0 / 3.0, 5 * h * h);
    }
}

TEST(Action, RejectsBoxOutsideDomain) {
    const ExampleSpec& e = find_example("laplace-example");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    EXPECT_THROW(action(e.hv, s, ChartedDomain::cube(2, -1, 1)), SupportError);
}

TEST(Action, DiscreteTrapezoid) {
    const ExampleSpec& e = find_example("laplace-example");
    const Grid grid(ChartedDomain::cube(2, -0.125, 1.125), {41, 41});
    const auto sec = DiscreteSection::sample(e.shape, grid, e.exact->value);
    const double h = grid.spacing(0);
    EXPECT_NEAR(action(e.hv, sec, e.box), 1.0 / 3.0, 5 * h * h);
    EXPECT_THROW(action(e.hv, sec, ChartedDomain::cube(2, 0.01, 1)), ArgumentError);
}

TEST(Action, GlobalActionGrowsWithoutBound) {
    // q = x1 x2 over [0, L]^2: action L^4 / 3
    const ExampleSpec& e = find_example("laplace-example");
    double previous = 0.0;
    for (double L : {1.0, 2.0, 4.0, 8.0}) {
        const AnalyticSection s(e.shape, ChartedDomain::cube(2, -1.0, L + 1.0), *e.exact);
        const double a = action(e.hv, s, ChartedDomain::cube(2, 0.0, L), {Quadrature::Rule::midpoint, 200});
        EXPECT_NEAR(a, std::pow(L, 4) / 3.0, 1e-3 * std::pow(L, 4));
        EXPECT_GT(a, 10.0 * previous);
        previous = a;
    }
}

// ---------------------------------------------------------------------------
// First variation

TEST(FirstVariationTest, OscillatorRandomBumps) {
    const ExampleSpec& e = find_example("oscillator");
    const AnalyticSection s(e.shape, e.domain, *e.exact);
    const ChartedDomain V({{0.0, 2.0 * pi}});
    Gen g(139);
    for (int i = 0; i < 10; ++i) {
        const double lo = g.uniform(0.2, 3.0);
        const Variation phi = Variation::bump(e.shape, ChartedDomain({{lo, lo + g.uniform(0.5, 2.5)}}), g.vector(2));
        const auto fv = action_first_variation(e.hv, s, phi, V, 1e-3, {Quadrature::Rule::midpoint, 4000});
        EXPECT_LT(std::abs(fv.fd), 1e-6);
        EXPECT_LT(std::abs(fv.fd - fv.analytic), 1e-6);
    }
}

TEST(FirstVariationTest, LineWithMomentumBump) {
    LineCase c;
    const ChartedDomain V({{0.0, 1.0}});
    const ChartedDomain support({{0.2, 0.8}});
    const double integral = 0.3 * bump_integral_unit();
    for (double sign : {1.0, -1.0}) {
        Vector w(2);
        w << 0.0, sign;
        const auto fv = action_first_variation(c.hv, c.section, Variation::bump(c.shape, support, w), V, 1e-3,
                                               {Quadrature::Rule::midpoint, 400});
        EXPECT_NEAR(fv.fd, sign * integral, 1e-6);
        EXPECT_NEAR(fv.analytic, sign * integral, 1e-6);
    }
}

TEST(FirstVariationTest, ZeroVariationAndUnsupported) {
    LineCase c;
    const ChartedDomain V({{0.0, 1.0}});
    const auto fv = action_first_variation(c.hv, c.section, Variation::zero(c.shape, ChartedDomain({{0.2, 0.8}})), V, 1e-3);
    EXPECT_DOUBLE_EQ(fv.fd, 0.0);
    EXPECT_DOUBLE_EQ(fv.analytic, 0.0);
    Vector w(2);
    w << 1.0, 0.0;
    EXPECT_THROW(action_first_variation(c.hv, c.section, Variation::bump(c.shape, ChartedDomain({{0.5, 1.5}}), w), V, 1e-3),
                 SupportError);
}

TEST(FirstVariationTest, LaplaceGridAgreement) {
    const ExampleSpec& e = find_example("laplace-solver");
    const int m = 65;
    const Grid grid(e.box, {m, m});
    const LaplaceResult solved = solve_laplace(grid, e.boundary);
    const double h = grid.spacing(0);
    Gen g(149);
    for (int i = 0; i < 5; ++i) {
        const Vector lo = g.vector(2, 0.15, 0.45);
        const Variation phi = Variation::bump(e.shape, ChartedDomain({{lo[0], lo[0] + 0.4}, {lo[1], lo[1] + 0.4}}), g.vector(3));
        const auto fv = action_first_variation(e.hv, solved.section, phi, ChartedDomain::cube(2, 0.0 + h, 1.0 - h), 1e-3);
        EXPECT_LT(std::abs(fv.fd - fv.analytic), 5 * h * h);
    }
}
