#include "multisym/solvers.hpp"

#include "multisym/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace multisym {

// ---------------------------------------------------------------------------
// RK4

DiscreteSection solve_ode(const HamiltonVolterraFunction& hv, const Vector& q0, const Vector& p0, Interval span,
                          double step, const DifferentiationConfig& cfg) {
    const BundleShape& s = hv.shape;
    if (s.n() != 1) throw DimensionError("solve_ode needs a one-dimensional base");
    if (!(step > 0.0)) throw ArgumentError("solve_ode: step must be positive");
    if (!(span.hi > span.lo)) throw ArgumentError("solve_ode: empty interval");
    if (q0.size() != s.N() || p0.size() != s.N()) throw DimensionError("solve_ode: initial data has wrong size");

    const int N = s.N();
    const auto steps = std::max<long>(4, std::lround(span.width() / step));
    const double h = span.width() / static_cast<double>(steps);

    // y = (q, p) in fibre order, which for n = 1 is q^1..q^N, p_1..p_N.
    const auto rhs = [&](double x, const Vector& y) {
        Vector z(s.dim_P());
        z << x, y;
        const Vector g = hv.partials(z, cfg);
        Vector f(2 * N);
        for (int a = 0; a < N; ++a) {
            f[a] = g[s.pmom(0, a)];
            f[N + a] = -g[s.q(a)];
        }
        return f;
    };

    std::vector<Vector> values;
    values.reserve(static_cast<std::size_t>(steps) + 1);
    Vector y(2 * N);
    y << q0, p0;
    Vector carry = Vector::Zero(2 * N);
    values.push_back(y);
    for (long i = 0; i < steps; ++i) {
        const double x = span.lo + static_cast<double>(i) * h;
        const Vector k1 = rhs(x, y);
        const Vector k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1);
        const Vector k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2);
        const Vector k4 = rhs(x + h, y + h * k3);
        // Compensated accumulation keeps round-off below the truncation error at small steps.
        const Vector incr = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4) - carry;
        const Vector next = y + incr;
        carry = (next - y) - incr;
        y = next;
        values.push_back(y);
    }
    Grid grid(ChartedDomain({span}), {static_cast<int>(steps) + 1});
    return DiscreteSection(s, std::move(grid), std::move(values));
}

// ---------------------------------------------------------------------------
// Laplace

namespace {

double five_point(const std::vector<double>& q, int i, int j, int mx, double hx, double hy) {
    const auto at = [&](int a, int b) { return q[static_cast<std::size_t>(b) * mx + a]; };
    return (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (hx * hx) +
           (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (hy * hy);
}

double max_five_point(const std::vector<double>& q, int mx, int my, double hx, double hy) {
    double r = 0.0;
    for (int j = 1; j < my - 1; ++j)
        for (int i = 1; i < mx - 1; ++i) r = std::max(r, std::abs(five_point(q, i, j, mx, hx, hy)));
    return r;
}

/// Max Gauss-Seidel correction |L q| / diag(L), in units of q.
double max_correction(const std::vector<double>& q, int mx, int my, double hx, double hy) {
    const double diag = 2.0 / (hx * hx) + 2.0 / (hy * hy);
    return max_five_point(q, mx, my, hx, hy) / diag;
}

/// d/dx at node i of a line of m samples. Central inside; at the two ends the
/// central values are extrapolated quadratically, so the boundary momenta carry
/// the same smooth h^2 error as their neighbours and the grid divergence stays second order.
double line_derivative(const std::function<double(int)>& f, int i, int m, double h) {
    const auto central = [&](int k) { return (f(k + 1) - f(k - 1)) / (2.0 * h); };
    if (i == 0) return 3.0 * central(1) - 3.0 * central(2) + central(3);
    if (i == m - 1) return 3.0 * central(m - 2) - 3.0 * central(m - 3) + central(m - 4);
    return central(i);
}

}  // namespace

LaplaceResult solve_laplace(const Grid& grid, const std::function<double(const Vector&)>& boundary,
                            const LaplaceOptions& options) {
    if (grid.dim() != 2) throw DimensionError("solve_laplace needs a two-dimensional grid");
    if (!boundary) throw ArgumentError("solve_laplace needs boundary data");
    if (!(options.tolerance > 0.0)) throw ArgumentError("solve_laplace: tolerance must be positive");
    const int mx = grid.nodes(0);
    const int my = grid.nodes(1);
    const double hx = grid.spacing(0);
    const double hy = grid.spacing(1);
    double w = options.relaxation;
    if (w == 0.0) w = 2.0 / (1.0 + std::sin(std::numbers::pi / (std::max(mx, my) - 1)));
    if (!(w > 0.0 && w < 2.0)) throw ArgumentError("SOR relaxation factor must lie in (0, 2)");

    std::vector<double> q(grid.node_count(), 0.0);
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        if (!grid.interior(grid.unflatten(k), 1)) q[k] = boundary(grid.coordinates(k));
    }

    const double cx = 1.0 / (hx * hx);
    const double cy = 1.0 / (hy * hy);
    const double diag = 2.0 * (cx + cy);
    LaplaceResult out{DiscreteSection(BundleShape(2, 1), grid, std::vector<Vector>(grid.node_count(), Vector::Zero(3))),
                      0, w, {}};
    double r = max_correction(q, mx, my, hx, hy);
    while (r > options.tolerance) {
        if (out.sweeps >= options.max_sweeps) {
            std::ostringstream msg;
            msg << "SOR did not reach " << options.tolerance << " in " << options.max_sweeps
                << " sweeps (last residual " << r << ")";
            throw ConvergenceError(msg.str(), std::move(out.history));
        }
        for (int j = 1; j < my - 1; ++j) {
            for (int i = 1; i < mx - 1; ++i) {
                const std::size_t k = static_cast<std::size_t>(j) * mx + i;
                const double gs = (cx * (q[k + 1] + q[k - 1]) + cy * (q[k + mx] + q[k - mx])) / diag;
                q[k] += w * (gs - q[k]);
            }
        }
        ++out.sweeps;
        r = max_correction(q, mx, my, hx, hy);
        out.history.push_back(r);
    }

    std::vector<Vector> values(grid.node_count(), Vector(3));
    for (int j = 0; j < my; ++j) {
        for (int i = 0; i < mx; ++i) {
            const std::size_t k = static_cast<std::size_t>(j) * mx + i;
            const auto along_x = [&](int a) { return q[static_cast<std::size_t>(j) * mx + a]; };
            const auto along_y = [&](int b) { return q[static_cast<std::size_t>(b) * mx + i]; };
            values[k] << q[k], line_derivative(along_x, i, mx, hx), line_derivative(along_y, j, my, hy);
        }
    }
    out.section = DiscreteSection(BundleShape(2, 1), grid, std::move(values));
    return out;
}

double laplace_residual(const DiscreteSection& section) {
    const Grid& grid = section.grid();
    if (grid.dim() != 2) throw DimensionError("laplace_residual needs a two-dimensional grid");
    std::vector<double> q(grid.node_count());
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = section.value(k)[0];
    return max_five_point(q, grid.nodes(0), grid.nodes(1), grid.spacing(0), grid.spacing(1));
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

ExampleSpec oscillator() {
    const BundleShape s(1, 1);
    ExampleSpec e{"oscillator", "harmonic oscillator H = (p^2 + q^2)/2, solution (cos x, -sin x)", true, s,
                  HamiltonVolterraFunction{s,
                                           [](const Vector& z) { return 0.5 * (z[1] * z[1] + z[2] * z[2]); },
                                           [](const Vector& z) { return Vector((Vector(3) << 0.0, z[1], z[2]).finished()); }},
                  "0.5*(p1_1^2 + q1^2)",
                  ChartedDomain({{-1.0, 2.0 * std::numbers::pi + 1.0}}),
                  ChartedDomain({{0.0, 2.0 * std::numbers::pi}}),
                  FibreFunction{[](const Vector& x) { return Vector((Vector(2) << std::cos(x[0]), -std::sin(x[0])).finished()); },
                                [](const Vector& x) { return Matrix((Matrix(2, 1) << -std::sin(x[0]), -std::cos(x[0])).finished()); }},
                  SolverKind::ode,
                  (Vector(2) << 1.0, 0.0).finished(),
                  {}};
    return e;
}

ExampleSpec free_particle() {
    const BundleShape s(1, 1);
    return ExampleSpec{"free-particle", "free particle H = p^2/2, uniform motion q = 0.5 + 2x, p = 2", true, s,
                       HamiltonVolterraFunction{s, [](const Vector& z) { return 0.5 * z[2] * z[2]; },
                                                [](const Vector& z) { return Vector((Vector(3) << 0.0, 0.0, z[2]).finished()); }},
                       "0.5*p1_1^2",
                       ChartedDomain({{-1.0, 2.0}}),
                       ChartedDomain({{0.0, 1.0}}),
                       FibreFunction{[](const Vector& x) { return Vector((Vector(2) << 0.5 + 2.0 * x[0], 2.0).finished()); },
                                     [](const Vector&) { return Matrix((Matrix(2, 1) << 2.0, 0.0).finished()); }},
                       SolverKind::ode,
                       (Vector(2) << 0.5, 2.0).finished(),
                       {}};
}

HamiltonVolterraFunction dirichlet_energy(const BundleShape& s) {
    return HamiltonVolterraFunction{s, [](const Vector& z) { return 0.5 * (z[3] * z[3] + z[4] * z[4]); },
                                    [](const Vector& z) { return Vector((Vector(5) << 0.0, 0.0, 0.0, z[3], z[4]).finished()); }};
}

ExampleSpec laplace_example() {
    const BundleShape s(2, 1);
    return ExampleSpec{"laplace-example", "free field H = ((p^1)^2 + (p^2)^2)/2, harmonic section q = x1 x2", true, s,
                       dirichlet_energy(s),
                       "0.5*(p1_1^2 + p1_2^2)",
                       ChartedDomain::cube(2, -0.25, 1.25),
                       ChartedDomain::cube(2, 0.0, 1.0),
                       FibreFunction{[](const Vector& x) { return Vector((Vector(3) << x[0] * x[1], x[1], x[0]).finished()); },
                                     [](const Vector& x) {
                                         return Matrix((Matrix(3, 2) << x[1], x[0], 0.0, 1.0, 1.0, 0.0).finished());
                                     }},
                       SolverKind::laplace,
                       Vector(),
                       [](const Vector& x) { return x[0] * x[1]; }};
}

ExampleSpec laplace_saddle() {
    const BundleShape s(2, 1);
    return ExampleSpec{"laplace-saddle", "free field, harmonic section q = x1^2 - x2^2", true, s,
                       dirichlet_energy(s),
                       "0.5*(p1_1^2 + p1_2^2)",
                       ChartedDomain::cube(2, -0.25, 1.25),
                       ChartedDomain::cube(2, 0.0, 1.0),
                       FibreFunction{[](const Vector& x) {
                                         return Vector((Vector(3) << x[0] * x[0] - x[1] * x[1], 2.0 * x[0], -2.0 * x[1]).finished());
                                     },
                                     [](const Vector& x) {
                                         return Matrix((Matrix(3, 2) << 2.0 * x[0], -2.0 * x[1], 2.0, 0.0, 0.0, -2.0).finished());
                                     }},
                       SolverKind::laplace,
                       Vector(),
                       [](const Vector& x) { return x[0] * x[0] - x[1] * x[1]; }};
}

ExampleSpec laplace_solver() {
    const BundleShape s(2, 1);
    return ExampleSpec{"laplace-solver", "free field, Dirichlet data from the harmonic q = exp(x1) sin(x2) on [0,1]^2",
                       true, s,
                       dirichlet_energy(s),
                       "0.5*(p1_1^2 + p1_2^2)",
                       ChartedDomain::cube(2, -0.25, 1.25),
                       ChartedDomain::cube(2, 0.0, 1.0),
                       FibreFunction{[](const Vector& x) {
                                         const double e = std::exp(x[0]);
                                         return Vector((Vector(3) << e * std::sin(x[1]), e * std::sin(x[1]), e * std::cos(x[1])).finished());
                                     },
                                     [](const Vector& x) {
                                         const double e = std::exp(x[0]);
                                         const double sn = std::sin(x[1]);
                                         const double cs = std::cos(x[1]);
                                         return Matrix((Matrix(3, 2) << e * sn, e * cs, e * sn, e * cs, e * cs, -e * sn).finished());
                                     }},
                       SolverKind::laplace,
                       Vector(),
                       [](const Vector& x) { return std::exp(x[0]) * std::sin(x[1]); }};
}

ExampleSpec wave() {
    const BundleShape s(2, 1);
    return ExampleSpec{"wave", "hyperbolic stress case H = ((p^1)^2 - (p^2)^2)/2, travelling wave q = sin(x1 - x2)",
                       false, s,
                       HamiltonVolterraFunction{s, [](const Vector& z) { return 0.5 * (z[3] * z[3] - z[4] * z[4]); },
                                                [](const Vector& z) {
                                                    return Vector((Vector(5) << 0.0, 0.0, 0.0, z[3], -z[4]).finished());
                                                }},
                       "0.5*(p1_1^2 - p1_2^2)",
                       ChartedDomain::cube(2, -0.25, 1.25),
                       ChartedDomain::cube(2, 0.0, 1.0),
                       FibreFunction{[](const Vector& x) {
                                         const double c = std::cos(x[0] - x[1]);
                                         return Vector((Vector(3) << std::sin(x[0] - x[1]), c, c).finished());
                                     },
                                     [](const Vector& x) {
                                         const double c = std::cos(x[0] - x[1]);
                                         const double sn = std::sin(x[0] - x[1]);
                                         return Matrix((Matrix(3, 2) << c, -c, -sn, sn, -sn, sn).finished());
                                     }},
                       SolverKind::none,
                       Vector(),
                       {}};
}

}  // namespace

const std::vector<ExampleSpec>& catalog() {
    static const std::vector<ExampleSpec> entries = {oscillator(),     free_particle(), laplace_example(),
                                                     laplace_saddle(), laplace_solver(), wave()};
    return entries;
}

const ExampleSpec& find_example(const std::string& name) {
    for (const ExampleSpec& e : catalog())
        if (e.name == name) return e;
    std::ostringstream msg;
    msg << "unknown example '" << name << "'; known:";
    for (const ExampleSpec& e : catalog()) msg << ' ' << e.name;
    throw ArgumentError(msg.str());
}

}  // namespace multisym
