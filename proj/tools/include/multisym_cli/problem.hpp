#pragma once

// Problem files: flat INI-like text.
//
//   # comment            ; comment
//   [section]
//   key = value          (value runs to end of line; surrounding blanks trimmed)
//
// Section and key names are case-sensitive; a repeated section or key is an
// error. See tools/problems/*.ini for the recognised sections.

#include "multisym_cli/expression.hpp"

#include "multisym/field_equations.hpp"
#include "multisym/nplectic.hpp"
#include "multisym/solvers.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace multisym::cli {

/// Malformed file or inconsistent contents; message carries file and line when known.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IniEntry {
    std::string value;
    int line = 0;
};

struct IniSection {
    std::string name;
    int line = 0;
    std::vector<std::pair<std::string, IniEntry>> entries;  ///< file order

    const IniEntry* find(const std::string& key) const;
};

struct IniFile {
    std::string origin;  ///< path or "<string>"
    std::vector<IniSection> sections;

    const IniSection* find(const std::string& name) const;
};

IniFile parse_ini(const std::string& text, const std::string& origin = "<string>");
IniFile read_ini(const std::string& path);

enum class ProblemKind { field, nplectic };

struct SolverRequest {
    SolverKind kind = SolverKind::none;
    double step = 1e-3;                        ///< ode
    int grid = 65;                             ///< laplace nodes per axis
    std::map<std::string, double> initial;     ///< ode: q1.., p1_1..
    Expression boundary;                       ///< laplace Dirichlet data
};

/// A field-theory problem on M(pi) read from a file.
struct FieldProblem {
    std::string name;
    BundleShape shape{1, 1};
    Expression hamiltonian;
    std::map<std::string, Expression> section;  ///< fibre coordinate name -> expression in x1..xn
    std::optional<ChartedDomain> domain;        ///< U
    std::optional<ChartedDomain> box;           ///< V
    int points_per_axis = 5;
    int random_points = 0;
    double tolerance = 1e-6;
    std::vector<std::string> suites;
    std::optional<std::uint64_t> seed;
    std::optional<SolverRequest> solver;

    bool has_section() const { return !section.empty(); }
    HamiltonVolterraFunction hamilton_volterra() const;
    /// Requires a [section] block covering every fibre coordinate.
    AnalyticSection analytic_section() const;
    std::function<double(const Vector&)> boundary_function() const;
};

/// A generic n-plectic manifold problem.
struct NPlecticProblem {
    std::string name;
    int dim = 0;
    int n = 0;
    std::vector<std::pair<std::vector<int>, Expression>> omega;  ///< zero-based index lists
    int hamiltonian_degree = 0;
    std::vector<std::pair<std::vector<int>, Expression>> hamiltonian;
    ChartedDomain domain = ChartedDomain::cube(1, 0.0, 1.0);
    int samples = 20;
    int k = 1;
    std::optional<std::uint64_t> seed;

    /// Coordinate names y1..yd.
    std::vector<std::string> coordinates() const;
    NPlecticManifold manifold() const;
    std::optional<HamiltonianForm> hamiltonian_form() const;
};

struct Problem {
    ProblemKind kind = ProblemKind::field;
    FieldProblem field;
    NPlecticProblem nplectic;
};

Problem load_problem(const IniFile& ini);
Problem load_problem_file(const std::string& path);

/// Parses "lo,hi" or "lo,hi;lo,hi;..." into a box.
ChartedDomain parse_box(const std::string& text);

}  // namespace multisym::cli
