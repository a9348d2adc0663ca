#pragma once

// Pointwise multilinear algebra: alternating forms and multivectors over a
// d-dimensional coordinate space, stored densely on strictly increasing
// multi-indices in lexicographic order.
//
// Evaluation follows the determinant convention
//     (dx^{i1} ^ ... ^ dx^{ip})(v1, ..., vp) = det[ v_j^{i_k} ],
// so a form evaluated on the i-th basis tuple returns its i-th coefficient.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace multisym {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Determinant of the submatrix m(rows, cols); 1 for an empty selection.
double minor_determinant(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols);

/// Binomial coefficient C(n, k); zero when k is out of range.
std::size_t binomial(int n, int k);

/// Strictly increasing tuple of coordinate indices in [0, dim).
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::vector<int> indices, int dim);

    int dim() const { return dim_; }
    int degree() const { return static_cast<int>(indices_.size()); }
    const std::vector<int>& indices() const { return indices_; }
    int operator[](std::size_t i) const { return indices_[i]; }

    bool contains(int i) const;

    /// Position of this index in the lexicographic enumeration of degree() subsets.
    std::size_t rank() const;

    static MultiIndex unrank(std::size_t rank, int degree, int dim);

    /// All C(dim, degree) multi-indices, lexicographically.
    static std::vector<MultiIndex> enumerate(int degree, int dim);

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> indices_;
    int dim_ = 0;
};

/// Shared dense storage for forms and multivectors.
class GradedTensor {
public:
    int dim() const { return dim_; }
    int degree() const { return degree_; }
    std::size_t size() const { return coeffs_.size(); }

    double operator[](const MultiIndex& I) const { return coeffs_[I.rank()]; }
    double& operator[](const MultiIndex& I) { return coeffs_[I.rank()]; }
    double coeff(std::size_t rank) const { return coeffs_[rank]; }
    double& coeff(std::size_t rank) { return coeffs_[rank]; }

    /// Coefficient on an arbitrary (possibly unsorted or repeated) index list,
    /// with the sign of the sorting permutation applied.
    double at(std::vector<int> indices) const;

    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }

    double max_abs() const;
    bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

protected:
    GradedTensor(int dim, int degree);

    int dim_ = 0;
    int degree_ = 0;
    std::vector<double> coeffs_;
};

class MultiVector;

class AlternatingForm : public GradedTensor {
public:
    AlternatingForm(int dim, int degree);

    static AlternatingForm zero(int dim, int degree) { return {dim, degree}; }
    static AlternatingForm constant(int dim, double value);
    /// dx^i as a 1-form.
    static AlternatingForm basis(int dim, int i);
    /// The basis monomial dx^{i1} ^ ... ^ dx^{ip} (indices in any order).
    static AlternatingForm monomial(int dim, std::vector<int> indices);
    /// dx^{first} ^ ... ^ dx^{first+count-1}.
    static AlternatingForm volume(int dim, int first, int count);
    static AlternatingForm from_gradient(const Vector& gradient);

    /// a(v1, ..., vp) for exactly degree() vectors.
    double evaluate(std::span<const Vector> vectors) const;
    /// Pairing with a multivector of equal degree: sum_I a_I X_I.
    double pair(const MultiVector& X) const;

    AlternatingForm& operator+=(const AlternatingForm& rhs);
    AlternatingForm& operator-=(const AlternatingForm& rhs);
    AlternatingForm& operator*=(double s);

    friend AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b) { return a += b; }
    friend AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b) { return a -= b; }
    friend AlternatingForm operator*(double s, AlternatingForm a) { return a *= s; }
    friend AlternatingForm operator-(AlternatingForm a) { return a *= -1.0; }

    /// Values of the 1-form on the coordinate basis; requires degree() == 1.
    Vector as_covector() const;
};

class MultiVector : public GradedTensor {
public:
    MultiVector(int dim, int degree);

    static MultiVector basis(int dim, std::vector<int> indices);
    static MultiVector from_vector(const Vector& v);
    /// v1 ^ ... ^ vk; coefficients are the k x k minors of [v1 ... vk].
    static MultiVector decomposable(std::span<const Vector> vectors);
    static MultiVector decomposable(const Matrix& columns);

    MultiVector& operator+=(const MultiVector& rhs);
    MultiVector& operator*=(double s);
    friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
    friend MultiVector operator*(double s, MultiVector a) { return a *= s; }
};

/// a ^ b. Degrees summing past dim() yield the zero form of that degree.
AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b);

/// contract(v1^...^vk, a)(w...) = a(v1, ..., vk, w...).
AlternatingForm contract(const MultiVector& X, const AlternatingForm& a);
/// Interior product iota_v a.
AlternatingForm interior(const Vector& v, const AlternatingForm& a);

/// omega-flat: v -> iota_v omega.
AlternatingForm flat(const AlternatingForm& omega, const Vector& v);

/// Matrix of v -> iota_v omega in the coordinate bases (C(d, p-1) x d).
Matrix flat_matrix(const AlternatingForm& omega);

/// Matrix of X -> contract(X, omega) for degree-k multivectors X.
Matrix contraction_matrix(const AlternatingForm& omega, int k);

/// True iff every k-fold contraction of eta with vectors from vertical_basis vanishes.
bool is_k_horizontal(const AlternatingForm& eta, std::span<const Vector> vertical_basis, int k,
                     double tol = 1e-12);

/// Numerical rank by singular values relative to the largest one.
int numerical_rank(const Matrix& m, double relative_threshold = 1e-10);

}  // namespace multisym
