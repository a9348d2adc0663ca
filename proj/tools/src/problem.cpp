#include "multisym_cli/problem.hpp"

#include "multisym/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace multisym::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

[[noreturn]] void fail(const IniFile& ini, int line, const std::string& msg) {
    std::ostringstream out;
    out << ini.origin;
    if (line > 0) out << ':' << line;
    out << ": " << msg;
    throw InputError(out.str());
}

double to_double(const IniFile& ini, const IniEntry& e, const std::string& what) {
    const std::string t = trim(e.value);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+') ++first;
    const auto [end, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) fail(ini, e.line, what + ": expected a number, got '" + t + "'");
    return v;
}

long to_int(const IniFile& ini, const IniEntry& e, const std::string& what) {
    const std::string t = trim(e.value);
    long v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) fail(ini, e.line, what + ": expected an integer, got '" + t + "'");
    return v;
}

Interval to_interval(const IniFile& ini, const IniEntry& e, const std::string& what) {
    const auto parts = split(e.value, ',');
    if (parts.size() != 2) fail(ini, e.line, what + ": expected 'lo, hi'");
    const Interval iv{to_double(ini, {parts[0], e.line}, what), to_double(ini, {parts[1], e.line}, what)};
    if (!(iv.hi > iv.lo)) fail(ini, e.line, what + ": interval must have lo < hi");
    return iv;
}

Expression to_expression(const IniFile& ini, const IniEntry& e, std::span<const std::string> allowed, const std::string& what) {
    try {
        return parse_expression(e.value, allowed);
    } catch (const ParseError& err) {
        fail(ini, e.line, what + ": " + err.what());
    }
}

void only_keys(const IniFile& ini, const IniSection& s, std::initializer_list<const char*> keys) {
    for (const auto& [k, e] : s.entries) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; }))
            fail(ini, e.line, "unknown key '" + k + "' in [" + s.name + "]");
    }
}

ChartedDomain read_box(const IniFile& ini, const IniSection& s, const std::vector<std::string>& axes) {
    std::vector<Interval> bounds;
    for (const std::string& a : axes) {
        const IniEntry* e = s.find(a);
        if (!e) fail(ini, s.line, "[" + s.name + "] needs an interval for " + a);
        bounds.push_back(to_interval(ini, *e, a));
    }
    for (const auto& [k, e] : s.entries)
        if (std::find(axes.begin(), axes.end(), k) == axes.end())
            fail(ini, e.line, "[" + s.name + "] has no coordinate named '" + k + "'");
    return ChartedDomain(std::move(bounds));
}

std::vector<int> to_indices(const IniFile& ini, const std::string& key, int line, int dim) {
    std::string t = key;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::vector<int> idx;
    std::string tok;
    while (in >> tok) {
        int v = 0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || end != tok.data() + tok.size()) fail(ini, line, "component key '" + key + "' must list coordinate numbers");
        if (v < 1 || v > dim) fail(ini, line, "component index " + tok + " is outside 1.." + std::to_string(dim));
        idx.push_back(v - 1);
    }
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail(ini, line, "component key '" + key + "' repeats an index");
    return idx;
}

std::vector<std::string> base_names(int n) {
    std::vector<std::string> names;
    for (int mu = 0; mu < n; ++mu) names.push_back("x" + std::to_string(mu + 1));
    return names;
}

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

/// Sum of f_I dy^I with exact exterior derivative from the component expressions.
FormField form_field(const std::vector<std::pair<std::vector<int>, Expression>>& components, int dim, int degree,
                     const std::vector<std::string>& names) {
    struct Term {
        AlternatingForm basis;
        CompiledExpression f;
        std::vector<CompiledExpression> df;
    };
    std::vector<Term> terms;
    for (const auto& [idx, e] : components) {
        Term t{degree == 0 ? AlternatingForm::constant(dim, 1.0) : AlternatingForm::monomial(dim, idx), CompiledExpression(e, names), {}};
        for (int j = 0; j < dim; ++j) t.df.emplace_back(differentiate(e, names[static_cast<std::size_t>(j)]), names);
        terms.push_back(std::move(t));
    }
    FormField F;
    F.dim = dim;
    F.degree = degree;
    F.at = [terms, dim, degree](const Vector& y) {
        AlternatingForm out(dim, degree);
        for (const Term& t : terms) out += t.f(view(y)) * t.basis;
        return out;
    };
    F.derivative = [terms, dim, degree](const Vector& y) {
        AlternatingForm out(dim, degree + 1);
        for (const Term& t : terms)
            for (int j = 0; j < dim; ++j) out += t.df[static_cast<std::size_t>(j)](view(y)) * wedge(AlternatingForm::basis(dim, j), t.basis);
        return out;
    };
    return F;
}

std::optional<std::uint64_t> read_seed(const IniFile& ini, const IniSection& s) {
    const IniEntry* e = s.find("seed");
    if (!e) return std::nullopt;
    const long v = to_int(ini, *e, "seed");
    if (v < 0) fail(ini, e->line, "seed must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

FieldProblem load_field(const IniFile& ini) {
    FieldProblem p;
    if (const IniSection* s = ini.find("problem")) {
        if (const IniEntry* e = s->find("name")) p.name = trim(e->value);
    }
    const IniSection* shape = ini.find("shape");
    if (!shape) fail(ini, 0, "missing [shape] section");
    only_keys(ini, *shape, {"n", "N"});
    const IniEntry* en = shape->find("n");
    const IniEntry* eN = shape->find("N");
    if (!en || !eN) fail(ini, shape->line, "[shape] needs n and N");
    const long n = to_int(ini, *en, "n");
    const long N = to_int(ini, *eN, "N");
    if (n < 1 || n > 4 || N < 1 || N > 4) fail(ini, shape->line, "[shape] supports 1 <= n, N <= 4");
    p.shape = BundleShape(static_cast<int>(n), static_cast<int>(N));

    const std::vector<std::string> pnames = p.shape.coordinate_names(false);
    const std::vector<std::string> xnames = base_names(p.shape.n());

    const IniSection* ham = ini.find("hamiltonian");
    if (!ham) fail(ini, 0, "missing [hamiltonian] section");
    only_keys(ini, *ham, {"H"});
    const IniEntry* eh = ham->find("H");
    if (!eh) fail(ini, ham->line, "[hamiltonian] needs H");
    p.hamiltonian = to_expression(ini, *eh, pnames, "H");

    if (const IniSection* sec = ini.find("section")) {
        for (const auto& [k, e] : sec->entries) {
            const auto it = std::find(pnames.begin(), pnames.end(), k);
            if (it == pnames.end() || it - pnames.begin() < p.shape.n())
                fail(ini, e.line, "[section] key '" + k + "' is not a fibre coordinate");
            p.section[k] = to_expression(ini, e, xnames, k);
        }
        for (int i = p.shape.n(); i < p.shape.dim_P(); ++i)
            if (!p.section.count(pnames[static_cast<std::size_t>(i)]))
                fail(ini, sec->line, "[section] is missing " + pnames[static_cast<std::size_t>(i)]);
    }
    if (const IniSection* s = ini.find("domain")) p.domain = read_box(ini, *s, xnames);
    if (const IniSection* s = ini.find("box")) p.box = read_box(ini, *s, xnames);
    if (!p.domain) fail(ini, 0, "missing [domain] section");
    if (!p.box) p.box = p.domain;

    if (const IniSection* s = ini.find("check")) {
        only_keys(ini, *s, {"points", "random", "tolerance", "suites", "seed"});
        if (const IniEntry* e = s->find("points")) {
            p.points_per_axis = static_cast<int>(to_int(ini, *e, "points"));
            if (p.points_per_axis < 1) fail(ini, e->line, "points must be positive");
        }
        if (const IniEntry* e = s->find("random")) {
            p.random_points = static_cast<int>(to_int(ini, *e, "random"));
            if (p.random_points < 0) fail(ini, e->line, "random must be nonnegative");
        }
        if (const IniEntry* e = s->find("tolerance")) {
            p.tolerance = to_double(ini, *e, "tolerance");
            if (!(p.tolerance > 0.0)) fail(ini, e->line, "tolerance must be positive");
        }
        if (const IniEntry* e = s->find("suites")) {
            const std::set<std::string> known = {equation::hv,     equation::pullback_vertical, equation::pullback_full,
                                                 equation::vortex, equation::dhdw,              equation::energy};
            for (const std::string& name : split(e->value, ',')) {
                if (!known.count(name)) fail(ini, e->line, "unknown suite '" + name + "'");
                p.suites.push_back(name);
            }
        }
        p.seed = read_seed(ini, *s);
    }

    if (const IniSection* s = ini.find("solver")) {
        SolverRequest r;
        const IniEntry* ek = s->find("kind");
        if (!ek) fail(ini, s->line, "[solver] needs kind = ode | laplace");
        const std::string kind = trim(ek->value);
        if (kind == "ode") {
            r.kind = SolverKind::ode;
            if (p.shape.n() != 1) fail(ini, ek->line, "the ode solver needs n = 1");
            for (const auto& [k, e] : s->entries) {
                if (k == "kind") continue;
                if (k == "step") {
                    r.step = to_double(ini, e, "step");
                    if (!(r.step > 0.0)) fail(ini, e.line, "step must be positive");
                    continue;
                }
                const auto it = std::find(pnames.begin(), pnames.end(), k);
                if (it == pnames.end() || it - pnames.begin() < p.shape.n()) fail(ini, e.line, "unknown key '" + k + "' in [solver]");
                r.initial[k] = to_double(ini, e, k);
            }
            for (int i = p.shape.n(); i < p.shape.dim_P(); ++i)
                if (!r.initial.count(pnames[static_cast<std::size_t>(i)]))
                    fail(ini, s->line, "[solver] needs an initial value for " + pnames[static_cast<std::size_t>(i)]);
        } else if (kind == "laplace") {
            r.kind = SolverKind::laplace;
            if (p.shape.n() != 2 || p.shape.N() != 1) fail(ini, ek->line, "the laplace solver needs n = 2, N = 1");
            only_keys(ini, *s, {"kind", "grid", "boundary"});
            if (const IniEntry* e = s->find("grid")) {
                r.grid = static_cast<int>(to_int(ini, *e, "grid"));
                if (r.grid < 5) fail(ini, e->line, "grid needs at least 5 nodes per axis");
            }
            const IniEntry* eb = s->find("boundary");
            if (!eb) fail(ini, s->line, "[solver] laplace needs boundary = <expression in x1, x2>");
            r.boundary = to_expression(ini, *eb, xnames, "boundary");
        } else {
            fail(ini, ek->line, "unknown solver kind '" + kind + "'");
        }
        p.solver = std::move(r);
    }
    if (!p.has_section() && !p.solver) fail(ini, 0, "a field problem needs a [section] or a [solver]");
    return p;
}

NPlecticProblem load_nplectic(const IniFile& ini) {
    NPlecticProblem p;
    if (const IniSection* s = ini.find("problem")) {
        if (const IniEntry* e = s->find("name")) p.name = trim(e->value);
    }
    const IniSection* m = ini.find("manifold");
    if (!m) fail(ini, 0, "missing [manifold] section");
    only_keys(ini, *m, {"dim", "n"});
    const IniEntry* ed = m->find("dim");
    const IniEntry* en = m->find("n");
    if (!ed || !en) fail(ini, m->line, "[manifold] needs dim and n");
    p.dim = static_cast<int>(to_int(ini, *ed, "dim"));
    p.n = static_cast<int>(to_int(ini, *en, "n"));
    if (p.dim < 1 || p.dim > 12) fail(ini, ed->line, "dim must lie in 1..12");
    if (p.n < 1 || p.n + 1 > p.dim) fail(ini, en->line, "n must satisfy 1 <= n < dim");
    const std::vector<std::string> names = p.coordinates();

    const IniSection* om = ini.find("omega");
    if (!om || om->entries.empty()) fail(ini, om ? om->line : 0, "missing [omega] components");
    for (const auto& [k, e] : om->entries) {
        std::vector<int> idx = to_indices(ini, k, e.line, p.dim);
        if (static_cast<int>(idx.size()) != p.n + 1)
            fail(ini, e.line, "omega component '" + k + "' must list n + 1 = " + std::to_string(p.n + 1) + " indices");
        p.omega.emplace_back(std::move(idx), to_expression(ini, e, names, "omega " + k));
    }

    if (const IniSection* h = ini.find("hamiltonian")) {
        if (const IniEntry* e = h->find("degree")) p.hamiltonian_degree = static_cast<int>(to_int(ini, *e, "degree"));
        if (p.hamiltonian_degree < 0 || p.hamiltonian_degree > p.n) fail(ini, h->line, "hamiltonian degree must lie in 0..n");
        for (const auto& [k, e] : h->entries) {
            if (k == "degree") continue;
            if (p.hamiltonian_degree == 0) {
                if (k != "H") fail(ini, e.line, "a degree-0 hamiltonian uses the key H");
                p.hamiltonian.emplace_back(std::vector<int>{}, to_expression(ini, e, names, "H"));
            } else {
                std::vector<int> idx = to_indices(ini, k, e.line, p.dim);
                if (static_cast<int>(idx.size()) != p.hamiltonian_degree)
                    fail(ini, e.line, "hamiltonian component '" + k + "' has the wrong number of indices");
                p.hamiltonian.emplace_back(std::move(idx), to_expression(ini, e, names, "H " + k));
            }
        }
        p.k = p.n - p.hamiltonian_degree;
    }

    if (const IniSection* s = ini.find("domain")) {
        p.domain = read_box(ini, *s, names);
    } else {
        p.domain = ChartedDomain::cube(p.dim, -1.0, 1.0);
    }
    if (const IniSection* s = ini.find("check")) {
        only_keys(ini, *s, {"samples", "k", "seed"});
        if (const IniEntry* e = s->find("samples")) {
            p.samples = static_cast<int>(to_int(ini, *e, "samples"));
            if (p.samples < 1) fail(ini, e->line, "samples must be positive");
        }
        if (const IniEntry* e = s->find("k")) {
            p.k = static_cast<int>(to_int(ini, *e, "k"));
            if (p.k < 1 || p.k > p.n) fail(ini, e->line, "k must satisfy 1 <= k <= n");
            if (!p.hamiltonian.empty() && p.hamiltonian_degree != p.n - p.k)
                fail(ini, e->line, "k disagrees with the hamiltonian degree n - k");
        }
        p.seed = read_seed(ini, *s);
    }
    return p;
}

}  // namespace

const IniEntry* IniSection::find(const std::string& key) const {
    for (const auto& [k, e] : entries)
        if (k == key) return &e;
    return nullptr;
}

const IniSection* IniFile::find(const std::string& name) const {
    for (const IniSection& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

IniFile parse_ini(const std::string& text, const std::string& origin) {
    IniFile ini{origin, {}};
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string t = trim(raw);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t[0] == '[') {
            if (t.back() != ']') fail(ini, line, "section header must end with ']'");
            const std::string name = trim(t.substr(1, t.size() - 2));
            if (name.empty()) fail(ini, line, "empty section name");
            if (ini.find(name)) fail(ini, line, "duplicate section [" + name + "]");
            ini.sections.push_back(IniSection{name, line, {}});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) fail(ini, line, "expected 'key = value' or '[section]'");
        if (ini.sections.empty()) fail(ini, line, "key outside any section");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) fail(ini, line, "empty key");
        if (value.empty()) fail(ini, line, "empty value for '" + key + "'");
        IniSection& sec = ini.sections.back();
        if (sec.find(key)) fail(ini, line, "duplicate key '" + key + "' in [" + sec.name + "]");
        sec.entries.emplace_back(key, IniEntry{value, line});
    }
    return ini;
}

IniFile read_ini(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError(path + ": cannot open file");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_ini(buf.str(), path);
}

Problem load_problem(const IniFile& ini) {
    static const std::set<std::string> known = {"problem", "shape", "hamiltonian", "section", "domain", "box",
                                                "check",   "solver", "manifold",   "omega"};
    for (const IniSection& s : ini.sections)
        if (!known.count(s.name)) fail(ini, s.line, "unknown section [" + s.name + "]");
    Problem p;
    if (const IniSection* s = ini.find("problem")) {
        only_keys(ini, *s, {"name", "kind"});
        if (const IniEntry* e = s->find("kind")) {
            const std::string k = trim(e->value);
            if (k == "nplectic") p.kind = ProblemKind::nplectic;
            else if (k != "field") fail(ini, e->line, "kind must be field or nplectic");
        }
    }
    if (p.kind == ProblemKind::field) p.field = load_field(ini);
    else p.nplectic = load_nplectic(ini);
    return p;
}

Problem load_problem_file(const std::string& path) { return load_problem(read_ini(path)); }

ChartedDomain parse_box(const std::string& text) {
    std::vector<Interval> bounds;
    const IniFile ctx{"--V", {}};
    for (const std::string& part : split(text, ';')) bounds.push_back(to_interval(ctx, IniEntry{part, 0}, "box"));
    if (bounds.empty()) throw InputError("--V: empty box");
    return ChartedDomain(std::move(bounds));
}

// ---------------------------------------------------------------------------
// Builders

HamiltonVolterraFunction FieldProblem::hamilton_volterra() const {
    const std::vector<std::string> names = shape.coordinate_names(false);
    const CompiledExpression value(hamiltonian, names);
    std::vector<CompiledExpression> grad;
    for (const std::string& v : names) grad.emplace_back(differentiate(hamiltonian, v), names);
    HamiltonVolterraFunction hv{shape, nullptr, nullptr};
    hv.value = [value](const Vector& z) { return value(view(z)); };
    hv.gradient = [grad](const Vector& z) {
        Vector g(static_cast<Eigen::Index>(grad.size()));
        for (std::size_t i = 0; i < grad.size(); ++i) g[static_cast<Eigen::Index>(i)] = grad[i](view(z));
        return g;
    };
    return hv;
}

AnalyticSection FieldProblem::analytic_section() const {
    if (!has_section()) throw InputError(name + ": problem has no [section]");
    const std::vector<std::string> pnames = shape.coordinate_names(false);
    const std::vector<std::string> xnames = base_names(shape.n());
    std::vector<CompiledExpression> f;
    std::vector<std::vector<CompiledExpression>> df;
    for (int i = shape.n(); i < shape.dim_P(); ++i) {
        const Expression& e = section.at(pnames[static_cast<std::size_t>(i)]);
        f.emplace_back(e, xnames);
        std::vector<CompiledExpression> row;
        for (const std::string& x : xnames) row.emplace_back(differentiate(e, x), xnames);
        df.push_back(std::move(row));
    }
    const int n = shape.n();
    FibreFunction fibre;
    fibre.value = [f](const Vector& x) {
        Vector v(static_cast<Eigen::Index>(f.size()));
        for (std::size_t i = 0; i < f.size(); ++i) v[static_cast<Eigen::Index>(i)] = f[i](view(x));
        return v;
    };
    fibre.jacobian = [df, n](const Vector& x) {
        Matrix J(static_cast<Eigen::Index>(df.size()), n);
        for (std::size_t i = 0; i < df.size(); ++i)
            for (int mu = 0; mu < n; ++mu) J(static_cast<Eigen::Index>(i), mu) = df[i][static_cast<std::size_t>(mu)](view(x));
        return J;
    };
    return AnalyticSection(shape, *domain, std::move(fibre));
}

std::function<double(const Vector&)> FieldProblem::boundary_function() const {
    if (!solver || solver->boundary.empty()) throw InputError(name + ": problem has no boundary data");
    const CompiledExpression g(solver->boundary, base_names(shape.n()));
    return [g](const Vector& x) { return g(view(x)); };
}

std::vector<std::string> NPlecticProblem::coordinates() const {
    std::vector<std::string> names;
    for (int i = 0; i < dim; ++i) names.push_back("y" + std::to_string(i + 1));
    return names;
}

NPlecticManifold NPlecticProblem::manifold() const {
    return NPlecticManifold{dim, n, form_field(omega, dim, n + 1, coordinates()), domain};
}

std::optional<HamiltonianForm> NPlecticProblem::hamiltonian_form() const {
    if (hamiltonian.empty()) return std::nullopt;
    return HamiltonianForm{form_field(hamiltonian, dim, hamiltonian_degree, coordinates())};
}

}  // namespace multisym::cli
