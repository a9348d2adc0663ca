#include "multisym_cli/commands.hpp"

#include "multisym_cli/problem.hpp"

#include "multisym/error.hpp"
#include "multisym/field_equations.hpp"
#include "multisym/nplectic.hpp"
#include "multisym/solvers.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace multisym::cli {

using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string file;
    std::string example;
    int grid = 0;
    double step = 0.0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
    std::string format = "json";
    std::string box;
    int variations = 0;
};

/// A field problem from either the catalog or a file.
struct FieldCase {
    std::string name;
    std::string source;  ///< "catalog" or the file path
    BundleShape shape{1, 1};
    HamiltonVolterraFunction hv = HamiltonVolterraFunction::zero(BundleShape(1, 1));
    std::optional<FibreFunction> exact;
    ChartedDomain domain = ChartedDomain::cube(1, 0.0, 1.0);
    ChartedDomain box = ChartedDomain::cube(1, 0.0, 1.0);
    int points_per_axis = 5;
    int random_points = 0;
    double tolerance = 1e-6;
    std::vector<std::string> suites;
    std::uint64_t seed = 1;
    SolverKind solver = SolverKind::none;
    Vector initial;
    double step = 1e-3;
    int grid = 65;
    std::function<double(const Vector&)> boundary;
};

struct ManifoldCase {
    std::string name;
    NPlecticManifold M;
    std::optional<HamiltonianForm> H;
    int k = 1;
    ChartedDomain domain = ChartedDomain::cube(1, 0.0, 1.0);
    int samples = 20;
    std::uint64_t seed = 1;
};

std::string canonical_example(const std::string& name) { return name == "laplace" ? "laplace-example" : name; }

FieldCase from_example(const ExampleSpec& e) {
    FieldCase c;
    c.name = e.name;
    c.source = "catalog";
    c.shape = e.shape;
    c.hv = e.hv;
    c.exact = e.exact;
    c.domain = e.domain;
    c.box = e.box;
    c.solver = e.solver;
    c.initial = e.initial;
    c.boundary = e.boundary;
    return c;
}

FieldCase from_problem(const FieldProblem& p, const std::string& path) {
    FieldCase c;
    c.name = p.name.empty() ? std::filesystem::path(path).stem().string() : p.name;
    c.source = path;
    c.shape = p.shape;
    c.hv = p.hamilton_volterra();
    if (p.has_section()) c.exact = p.analytic_section().fibre();
    c.domain = *p.domain;
    c.box = *p.box;
    c.points_per_axis = p.points_per_axis;
    c.random_points = p.random_points;
    c.tolerance = p.tolerance;
    c.suites = p.suites;
    if (p.seed) c.seed = *p.seed;
    if (p.solver) {
        c.solver = p.solver->kind;
        c.step = p.solver->step;
        c.grid = p.solver->grid;
        if (c.solver == SolverKind::ode) {
            const auto names = p.shape.coordinate_names(false);
            c.initial.resize(p.shape.fibre_dim());
            for (int i = 0; i < p.shape.fibre_dim(); ++i) c.initial[i] = p.solver->initial.at(names[static_cast<std::size_t>(p.shape.n() + i)]);
        } else {
            c.boundary = p.boundary_function();
        }
    }
    return c;
}

void apply_overrides(FieldCase& c, const Options& o) {
    if (o.seed_given) c.seed = o.seed;
    if (o.tol > 0.0) c.tolerance = o.tol;
    if (o.step > 0.0) c.step = o.step;
    if (o.grid > 0) c.grid = o.grid;
    if (!o.box.empty()) c.box = parse_box(o.box);
    if (c.box.dim() != c.shape.n()) throw InputError("--V: box dimension does not match the base dimension");
}

/// Accepts a bare name for a file with an .ini extension.
std::string resolve_file(const std::string& path) {
    if (std::filesystem::exists(path) || std::filesystem::path(path).has_extension()) return path;
    if (std::filesystem::exists(path + ".ini")) return path + ".ini";
    return path;
}

std::vector<FieldCase> field_cases(const Options& o, bool all_when_empty) {
    if (!o.file.empty() && !o.example.empty()) throw InputError("give either --file or --example, not both");
    std::vector<FieldCase> cases;
    if (!o.file.empty()) {
        const std::string path = resolve_file(o.file);
        const Problem p = load_problem_file(path);
        if (p.kind != ProblemKind::field) throw InputError(path + ": not a field problem (use 'nplectic check')");
        cases.push_back(from_problem(p.field, path));
    } else if (!o.example.empty()) {
        cases.push_back(from_example(find_example(canonical_example(o.example))));
    } else if (all_when_empty) {
        for (const ExampleSpec& e : catalog()) cases.push_back(from_example(e));
    } else {
        throw InputError("give --file or --example");
    }
    for (FieldCase& c : cases) apply_overrides(c, o);
    return cases;
}

std::vector<Vector> random_points(const ChartedDomain& box, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vector> pts;
    for (int i = 0; i < count; ++i) {
        Vector x(box.dim());
        for (int a = 0; a < box.dim(); ++a) x[a] = std::uniform_real_distribution<double>(box[a].lo, box[a].hi)(rng);
        pts.push_back(x);
    }
    return pts;
}

json box_json(const ChartedDomain& box) {
    json j = json::array();
    for (const Interval& iv : box.bounds()) j.push_back({iv.lo, iv.hi});
    return j;
}

std::string number_text(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    f << content;
}

void check_format(const Options& o) {
    if (o.format != "json" && o.format != "csv") throw InputError("--format must be json or csv");
}

const std::vector<std::string>& default_suites() {
    static const std::vector<std::string> all = {equation::hv,     equation::pullback_vertical, equation::pullback_full,
                                                 equation::vortex, equation::dhdw,              equation::energy};
    return all;
}

struct CaseResult {
    std::string name;
    ResidualReport report;
    double tolerance = 0.0;
    bool pass = false;
    json extra = json::object();
};

/// Grid tolerance: 5 h^2 scaled by the section's magnitude.
double grid_tolerance(const DiscreteSection& s) {
    double h = 0.0;
    for (int a = 0; a < s.grid().dim(); ++a) h = std::max(h, s.grid().spacing(a));
    double scale = 1.0;
    for (const Vector& v : s.values()) scale = std::max(scale, v.cwiseAbs().maxCoeff());
    return 5.0 * h * h * scale;
}

struct Solved {
    DiscreteSection section;
    json summary;
};

Solved run_solver(const FieldCase& c) {
    if (c.solver == SolverKind::ode) {
        if (c.box.dim() != 1) throw InputError("the ode solver needs a one-dimensional box");
        const int N = c.shape.N();
        DiscreteSection s = solve_ode(c.hv, c.initial.head(N), c.initial.tail(N), c.box[0], c.step);
        json j;
        j["solver"] = "rk4";
        j["steps"] = s.grid().node_count() - 1;
        j["step"] = s.grid().spacing(0);
        Vector z0(c.shape.dim_P());
        z0 << s.grid().coordinates(std::size_t{0}), s.value(0);
        Vector z1(c.shape.dim_P());
        const std::size_t last = s.grid().node_count() - 1;
        z1 << s.grid().coordinates(last), s.value(last);
        j["energy_drift"] = std::abs(c.hv(z1) - c.hv(z0));
        return {std::move(s), std::move(j)};
    }
    if (c.solver == SolverKind::laplace) {
        if (c.box.dim() != 2) throw InputError("the laplace solver needs a two-dimensional box");
        const Grid grid(c.box, {c.grid, c.grid});
        LaplaceResult r = solve_laplace(grid, c.boundary);
        json j;
        j["solver"] = "sor";
        j["nodes"] = {c.grid, c.grid};
        j["sweeps"] = r.sweeps;
        j["relaxation"] = r.relaxation;
        j["laplacian_residual"] = laplace_residual(r.section);
        return {std::move(r.section), std::move(j)};
    }
    throw InputError(c.name + ": no solver configured");
}

double max_error_vs_exact(const DiscreteSection& s, const FibreFunction& exact) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.grid().node_count(); ++i)
        e = std::max(e, (s.value(i) - exact.value(s.grid().coordinates(i))).cwiseAbs().maxCoeff());
    return e;
}

CaseResult verify_analytic(const FieldCase& c, const Options& o) {
    SuiteOptions so;
    so.equations = c.suites.empty() ? default_suites() : c.suites;
    HamiltonVolterraFunction hv = c.hv;
    FibreFunction fibre = *c.exact;
    std::string path = "analytic";
    if (o.step > 0.0) {
        // Finite-difference path: drop the exact derivatives.
        hv.gradient = nullptr;
        fibre.jacobian = nullptr;
        so.cfg.step = o.step;
        path = "finite-difference";
    }
    const AnalyticSection section(c.shape, c.domain, fibre);
    std::vector<Vector> pts = sample_points(c.box, c.points_per_axis);
    for (Vector& x : random_points(c.box, c.random_points, c.seed)) pts.push_back(std::move(x));
    CaseResult r{c.name, vertical_residual_suite(hv, section, pts, so), c.tolerance, false, json::object()};
    r.report.set_config("name", c.name);
    r.report.set_config("source", c.source);
    r.report.set_config("path", path);
    r.report.set_config("tolerance", number_text(c.tolerance));
    r.report.set_config("seed", std::to_string(c.seed));
    r.pass = r.report.max_linf() <= c.tolerance;
    return r;
}

CaseResult verify_grid(const FieldCase& c, const Options& o) {
    Solved solved = run_solver(c);
    SuiteOptions so;
    so.equations = c.suites.empty() ? default_suites() : c.suites;
    const double tol = o.tol > 0.0 ? o.tol : grid_tolerance(solved.section);
    CaseResult r{c.name + "/solver", vertical_residual_suite(c.hv, solved.section, so), tol, false, solved.summary};
    r.report.set_config("name", c.name);
    r.report.set_config("source", c.source);
    r.report.set_config("path", "grid");
    r.report.set_config("tolerance", number_text(tol));
    r.pass = r.report.max_linf() <= tol;
    return r;
}

json case_json(const CaseResult& r) {
    json j;
    j["name"] = r.name;
    j["pass"] = r.pass;
    j["tolerance"] = r.tolerance;
    j["report"] = json::parse(r.report.to_json());
    if (!r.extra.empty()) j["solver"] = r.extra;
    return j;
}

std::string file_stem(const std::string& name) {
    std::string s = name;
    for (char& ch : s)
        if (ch == '/') ch = '_';
    return s;
}

int emit_cases(const std::string& command, const std::vector<CaseResult>& results, const Options& o, std::ostream& out,
               const std::string& stamp) {
    bool pass = true;
    json cases = json::array();
    for (const CaseResult& r : results) {
        pass = pass && r.pass;
        cases.push_back(case_json(r));
        if (!o.out_dir.empty()) {
            json one = case_json(r);
            one["timestamp"] = stamp;
            write_file(o.out_dir, file_stem(r.name) + ".json", one.dump(2) + "\n");
            write_file(o.out_dir, file_stem(r.name) + ".csv", r.report.to_csv());
        }
    }
    if (o.format == "csv") {
        for (const CaseResult& r : results) {
            if (results.size() > 1) out << "# " << r.name << '\n';
            out << r.report.to_csv();
        }
    } else {
        json j;
        j["command"] = command;
        j["pass"] = pass;
        j["cases"] = cases;
        j["timestamp"] = stamp;
        out << j.dump(2) << '\n';
    }
    return pass ? exit_code::pass : exit_code::failure;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    check_format(o);
    const std::string stamp = utc_timestamp();
    std::vector<CaseResult> results;
    for (const FieldCase& c : field_cases(o, true)) {
        if (c.exact) results.push_back(verify_analytic(c, o));
        if (c.solver != SolverKind::none && (o.example.empty() && o.file.empty() ? true : !c.exact))
            results.push_back(verify_grid(c, o));
    }
    for (const CaseResult& r : results) {
        err << (r.pass ? "PASS " : "FAIL ") << r.name << "  max L_inf " << r.report.max_linf() << "  tol " << r.tolerance << '\n';
        for (const EquationNorm& e : r.report.equations())
            if (e.linf > r.tolerance) err << "  " << e.equation << ": L_inf " << e.linf << " > " << r.tolerance << '\n';
    }
    return emit_cases("verify", results, o, out, stamp);
}

int cmd_residuals(const Options& o, std::ostream& out, std::ostream&) {
    check_format(o);
    const std::string stamp = utc_timestamp();
    std::vector<CaseResult> results;
    for (const FieldCase& c : field_cases(o, false)) {
        if (!c.exact) throw InputError(c.name + ": residuals need a section");
        SuiteOptions so;
        so.equations = c.suites.empty() ? default_suites() : c.suites;
        const AnalyticSection section(c.shape, c.domain, *c.exact);
        const int per_axis = o.grid > 0 ? o.grid : 9;
        CaseResult r{c.name, vertical_residual_suite(c.hv, section, sample_points(c.box, per_axis), so), 0.0, true, json::object()};
        r.report.set_config("name", c.name);
        r.report.set_config("points_per_axis", std::to_string(per_axis));
        results.push_back(std::move(r));
    }
    emit_cases("residuals", results, o, out, stamp);
    return exit_code::pass;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    check_format(o);
    const std::vector<FieldCase> cases = field_cases(o, false);
    const FieldCase& c = cases.front();
    if (c.solver == SolverKind::none) throw InputError(c.name + ": no solver for this problem");
    const auto t0 = std::chrono::steady_clock::now();
    Solved solved = run_solver(c);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    SuiteOptions so;
    so.equations = {equation::hv};
    const ResidualReport rep = vertical_residual_suite(c.hv, solved.section, so);
    const double tol = o.tol > 0.0 ? o.tol : grid_tolerance(solved.section);
    const double hv_linf = rep.norm(equation::hv).linf;
    const bool pass = hv_linf <= tol;

    std::ostringstream csv;
    const auto names = c.shape.coordinate_names(false);
    for (std::size_t i = 0; i < names.size(); ++i) csv << (i ? "," : "") << names[i];
    csv << '\n';
    char buf[32];
    for (std::size_t i = 0; i < solved.section.grid().node_count(); ++i) {
        const Vector x = solved.section.grid().coordinates(i);
        const Vector& v = solved.section.value(i);
        bool first = true;
        for (Eigen::Index a = 0; a < x.size() + v.size(); ++a) {
            std::snprintf(buf, sizeof buf, "%.17g", a < x.size() ? x[a] : v[a - x.size()]);
            csv << (first ? "" : ",") << buf;
            first = false;
        }
        csv << '\n';
    }

    json j;
    j["command"] = "solve";
    j["name"] = c.name;
    j["pass"] = pass;
    j["summary"] = solved.summary;
    j["hv_L_inf"] = hv_linf;
    j["hv_L_2"] = rep.norm(equation::hv).l2;
    j["tolerance"] = tol;
    if (c.exact) j["max_error_vs_exact"] = max_error_vs_exact(solved.section, *c.exact);
    j["timestamp"] = utc_timestamp();

    err << (pass ? "PASS " : "FAIL ") << c.name << "  HV L_inf " << hv_linf << "  tol " << tol << "  (" << seconds << " s)\n";
    if (!o.out_dir.empty()) {
        write_file(o.out_dir, file_stem(c.name) + "_solution.csv", csv.str());
        write_file(o.out_dir, file_stem(c.name) + "_solve.json", j.dump(2) + "\n");
    }
    if (o.format == "csv") out << csv.str();
    else out << j.dump(2) << '\n';
    return pass ? exit_code::pass : exit_code::failure;
}

int cmd_action(const Options& o, std::ostream& out, std::ostream&) {
    check_format(o);
    const std::vector<FieldCase> cases = field_cases(o, false);
    const FieldCase& c = cases.front();
    if (!c.exact) throw InputError(c.name + ": action needs a section");
    if (o.variations < 0) throw InputError("--variations must be nonnegative");
    const AnalyticSection section(c.shape, c.domain, *c.exact);
    const Quadrature quad{Quadrature::Rule::midpoint, o.grid > 0 ? o.grid : (c.shape.n() == 1 ? 4000 : 200)};
    const double value = action(c.hv, section, c.box, quad);

    json vars = json::array();
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < o.variations; ++i) {
        std::vector<Interval> sup;
        for (int a = 0; a < c.box.dim(); ++a) {
            const double w = c.box[a].width();
            const double lo = c.box[a].lo + w * (0.05 + 0.4 * unit(rng));
            const double hi = lo + w * (0.1 + 0.4 * unit(rng));
            sup.push_back({lo, std::min(hi, c.box[a].hi - 0.05 * w)});
        }
        Vector weights(c.shape.fibre_dim());
        for (Eigen::Index k = 0; k < weights.size(); ++k) weights[k] = 2.0 * unit(rng) - 1.0;
        const Variation phi = Variation::bump(c.shape, ChartedDomain(sup), weights);
        const FirstVariation fv = action_first_variation(c.hv, section, phi, c.box, 1e-3, quad);
        vars.push_back({{"support", box_json(phi.support)}, {"fd", fv.fd}, {"analytic", fv.analytic}});
    }

    if (o.format == "csv") {
        out << "name,action\n" << c.name << ',' << number_text(value) << '\n';
    } else {
        json j;
        j["command"] = "action";
        j["name"] = c.name;
        j["V"] = box_json(c.box);
        j["quadrature"] = "midpoint";
        j["cells_per_axis"] = quad.cells_per_axis;
        j["action"] = value;
        j["variations"] = vars;
        j["timestamp"] = utc_timestamp();
        out << j.dump(2) << '\n';
    }
    if (!o.out_dir.empty()) {
        json j;
        j["name"] = c.name;
        j["action"] = value;
        j["variations"] = vars;
        write_file(o.out_dir, file_stem(c.name) + "_action.json", j.dump(2) + "\n");
    }
    return exit_code::pass;
}

FormField constant_form(AlternatingForm a) {
    FormField f = FormField::constant(a);
    f.derivative = nullptr;  // closedness is then measured numerically
    return f;
}

ManifoldCase builtin_manifold(const std::string& name) {
    ManifoldCase m;
    m.name = name;
    if (name == "symplectic2d") {
        m.M = NPlecticManifold{2, 1, constant_form(AlternatingForm::monomial(2, {0, 1})), std::nullopt};
        FormField H;
        H.dim = 2;
        H.degree = 0;
        H.at = [](const Vector& y) { return AlternatingForm::constant(2, 0.5 * y.squaredNorm()); };
        H.derivative = [](const Vector& y) { return AlternatingForm::from_gradient(y); };
        m.H = HamiltonianForm{H};
        m.domain = ChartedDomain::cube(2, -1.0, 1.0);
    } else if (name == "multicotangent-2-1") {
        const ExampleSpec& e = find_example("laplace-example");
        m.M = multicotangent_manifold(e.shape);
        m.M.omega.derivative = nullptr;
        m.H = hamiltonian_form(e.hv);
        m.k = e.shape.n();
        m.domain = ChartedDomain::cube(e.shape.dim_M(), -1.0, 1.0);
    } else if (name == "degenerate-volume") {
        m.M = NPlecticManifold{4, 2, constant_form(AlternatingForm::monomial(4, {0, 1, 2})), std::nullopt};
        m.k = 1;
        m.domain = ChartedDomain::cube(4, -1.0, 1.0);
    } else {
        throw InputError("unknown manifold '" + name + "'; known: symplectic2d multicotangent-2-1 degenerate-volume");
    }
    return m;
}

int cmd_nplectic_check(const Options& o, std::ostream& out, std::ostream& err) {
    check_format(o);
    if (!o.file.empty() && !o.example.empty()) throw InputError("give either --file or --example, not both");
    ManifoldCase m;
    const std::string path = o.file.empty() ? std::string() : resolve_file(o.file);
    if (!path.empty() && !std::filesystem::exists(path) && !std::filesystem::path(path).has_parent_path()) {
        m = builtin_manifold(path);
    } else if (!path.empty()) {
        const Problem p = load_problem_file(path);
        if (p.kind != ProblemKind::nplectic) throw InputError(path + ": not an nplectic problem");
        const NPlecticProblem& np = p.nplectic;
        m.name = np.name.empty() ? std::filesystem::path(path).stem().string() : np.name;
        m.M = np.manifold();
        m.H = np.hamiltonian_form();
        m.k = np.k;
        m.domain = np.domain;
        m.samples = np.samples;
        if (np.seed) m.seed = *np.seed;
    } else if (!o.example.empty()) {
        m = builtin_manifold(o.example);
    } else {
        throw InputError("give --file or --example");
    }
    if (o.seed_given) m.seed = o.seed;
    if (o.grid > 0) m.samples = o.grid;

    const std::vector<Vector> pts = random_points(m.domain, m.samples, m.seed);
    DifferentiationConfig cfg;
    if (o.step > 0.0) cfg.step = o.step;
    const NPlecticCheck chk = check_nplectic(m.M, pts, cfg);
    const double closed_tol = o.tol > 0.0 ? o.tol : 1e-6;
    const bool pass = chk.closed(closed_tol) && chk.nondegenerate();

    json j;
    j["command"] = "nplectic check";
    j["name"] = m.name;
    j["dim"] = m.M.dim;
    j["n"] = m.M.n;
    j["samples"] = chk.samples;
    j["seed"] = m.seed;
    j["closedness"] = chk.closedness;
    j["closed"] = chk.closed(closed_tol);
    j["min_rank"] = chk.min_rank;
    j["nondegenerate"] = chk.nondegenerate();
    j["pass"] = pass;
    const Vector center = m.domain.center();
    if (m.H) {
        const DegeneracyReport d = degeneracy_scan(m.M, *m.H, m.k, center, cfg);
        j["degeneracy"] = {{"at", std::vector<double>(center.data(), center.data() + center.size())},
                           {"k", d.k},
                           {"dH_norm", d.dH_norm},
                           {"dH_vanishes", d.dH_vanishes},
                           {"multivector_dim", d.multivector_dim},
                           {"kernel_dim", d.kernel_dim}};
        if (m.k == 1 && chk.nondegenerate()) {
            const Vector& at = pts.front();
            const Vector X = solve_hdw_vector(m.M, *m.H, at, cfg);
            j["hamiltonian_vector"] = {{"at", std::vector<double>(at.data(), at.data() + at.size())},
                                       {"X", std::vector<double>(X.data(), X.data() + X.size())}};
        }
    } else {
        // No Hamiltonian: report the contraction kernel alone.
        HamiltonianForm zero{FormField::constant(AlternatingForm(m.M.dim, m.M.n - m.k))};
        const DegeneracyReport d = degeneracy_scan(m.M, zero, m.k, center, cfg);
        j["degeneracy"] = {{"k", d.k}, {"multivector_dim", d.multivector_dim}, {"kernel_dim", d.kernel_dim}};
    }
    j["timestamp"] = utc_timestamp();

    err << (pass ? "PASS " : "FAIL ") << m.name << "  rank " << chk.min_rank << "/" << chk.dim << "  closedness "
        << chk.closedness << '\n';
    if (!o.out_dir.empty()) write_file(o.out_dir, file_stem(m.name) + "_nplectic.json", j.dump(2) + "\n");
    if (o.format == "csv") {
        out << "name,dim,n,min_rank,closedness,closed,nondegenerate\n"
            << m.name << ',' << m.M.dim << ',' << m.M.n << ',' << chk.min_rank << ',' << number_text(chk.closedness) << ','
            << (chk.closed(closed_tol) ? "true" : "false") << ',' << (chk.nondegenerate() ? "true" : "false") << '\n';
    } else {
        out << j.dump(2) << '\n';
    }
    return pass ? exit_code::pass : exit_code::failure;
}

const char* solver_name(SolverKind k) {
    switch (k) {
        case SolverKind::ode: return "rk4";
        case SolverKind::laplace: return "sor";
        default: return "none";
    }
}

int cmd_catalog(const Options& o, std::ostream& out, std::ostream&) {
    check_format(o);
    if (o.format == "csv") {
        out << "name,n,N,worked_example,solver,exact,hamiltonian\n";
        for (const ExampleSpec& e : catalog())
            out << e.name << ',' << e.shape.n() << ',' << e.shape.N() << ',' << (e.worked_example ? "true" : "false") << ','
                << solver_name(e.solver) << ',' << (e.exact ? "true" : "false") << ",\"" << e.hamiltonian_text << "\"\n";
        return exit_code::pass;
    }
    json list = json::array();
    for (const ExampleSpec& e : catalog()) {
        list.push_back({{"name", e.name},
                        {"description", e.description},
                        {"worked_example", e.worked_example},
                        {"n", e.shape.n()},
                        {"N", e.shape.N()},
                        {"hamiltonian", e.hamiltonian_text},
                        {"domain", box_json(e.domain)},
                        {"box", box_json(e.box)},
                        {"exact", e.exact.has_value()},
                        {"solver", solver_name(e.solver)}});
    }
    out << json{{"command", "catalog"}, {"examples", list}}.dump(2) << '\n';
    return exit_code::pass;
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("--file", o.file, "problem file");
    app->add_option("--example", o.example, "catalog example name");
    app->add_option("--grid", o.grid, "grid nodes / sample points / quadrature cells per axis")->check(CLI::PositiveNumber);
    app->add_option("--step", o.step, "solver step, or finite-difference step for verify")->check(CLI::PositiveNumber);
    app->add_option("--tol", o.tol, "pass tolerance")->check(CLI::PositiveNumber);
    app->add_option("--seed", o.seed, "seed for sampled points and variations")->each([&o](const std::string&) { o.seed_given = true; });
    app->add_option("--out-dir", o.out_dir, "directory for report files");
    app->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"multisym: residual checks for Hamilton-Volterra field equations"};
    app.name("multisym");
    app.require_subcommand(1);
    Options o;

    CLI::App* verify = app.add_subcommand("verify", "run the residual suites (whole catalog when no input is given)");
    add_common(verify, o);
    CLI::App* solve = app.add_subcommand("solve", "run the example's solver and check the HV residual");
    add_common(solve, o);
    CLI::App* act = app.add_subcommand("action", "localized action and seeded first-variation checks");
    add_common(act, o);
    act->add_option("--V", o.box, "integration box lo,hi[;lo,hi...]");
    act->add_option("--variations", o.variations, "number of seeded bump variations");
    CLI::App* res = app.add_subcommand("residuals", "per-point residual values");
    add_common(res, o);
    res->add_option("--V", o.box, "sampling box lo,hi[;lo,hi...]");
    CLI::App* npl = app.add_subcommand("nplectic", "generic n-plectic manifolds");
    npl->require_subcommand(1);
    CLI::App* check = npl->add_subcommand("check", "closedness, rank and degeneracy report");
    add_common(check, o);
    CLI::App* cat = app.add_subcommand("catalog", "list the built-in examples");
    cat->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_code::input;
    }

    try {
        if (verify->parsed()) return cmd_verify(o, out, err);
        if (solve->parsed()) return cmd_solve(o, out, err);
        if (act->parsed()) return cmd_action(o, out, err);
        if (res->parsed()) return cmd_residuals(o, out, err);
        if (check->parsed()) return cmd_nplectic_check(o, out, err);
        if (cat->parsed()) return cmd_catalog(o, out, err);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::failure;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_code::input;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_code::input;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_code::input;
    } catch (const multisym::Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::input;
    }
    return exit_code::input;
}

}  // namespace multisym::cli
