#include "multisym/alternating.hpp"

#include "multisym/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace multisym {

std::size_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::vector<int> indices, int dim) : indices_(std::move(indices)), dim_(dim) {
    if (static_cast<int>(indices_.size()) > dim_) throw DimensionError("multi-index degree exceeds dimension");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 0 || indices_[i] >= dim_) throw DimensionError("multi-index entry out of range");
        if (i > 0 && indices_[i] <= indices_[i - 1]) throw ArgumentError("multi-index must be strictly increasing");
    }
}

bool MultiIndex::contains(int i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

std::size_t MultiIndex::rank() const {
    const int p = degree();
    std::size_t r = 0;
    int prev = -1;
    for (int i = 0; i < p; ++i) {
        for (int j = prev + 1; j < indices_[i]; ++j) r += binomial(dim_ - 1 - j, p - 1 - i);
        prev = indices_[i];
    }
    return r;
}

MultiIndex MultiIndex::unrank(std::size_t rank, int degree, int dim) {
    std::vector<int> out;
    out.reserve(degree);
    int j = 0;
    for (int i = 0; i < degree; ++i) {
        for (;; ++j) {
            const std::size_t block = binomial(dim - 1 - j, degree - 1 - i);
            if (rank < block) break;
            rank -= block;
        }
        out.push_back(j++);
    }
    return MultiIndex(std::move(out), dim);
}

std::vector<MultiIndex> MultiIndex::enumerate(int degree, int dim) {
    std::vector<MultiIndex> out;
    if (degree < 0 || degree > dim) return out;
    out.reserve(binomial(dim, degree));
    std::vector<int> c(degree);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        out.emplace_back(c, dim);
        int i = degree - 1;
        while (i >= 0 && c[i] == dim - degree + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < degree; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

namespace {

// Sorts in place and returns the permutation sign, or 0 on a repeated entry.
int sort_with_sign(std::vector<int>& v) {
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i) {
        for (std::size_t j = i; j > 0 && v[j - 1] >= v[j]; --j) {
            if (v[j - 1] == v[j]) return 0;
            std::swap(v[j - 1], v[j]);
            sign = -sign;
        }
    }
    return sign;
}

}  // namespace

double minor_determinant(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    const auto k = static_cast<Eigen::Index>(rows.size());
    if (k == 0) return 1.0;
    if (k == 1) return m(rows[0], cols[0]);
    if (k == 2) return m(rows[0], cols[0]) * m(rows[1], cols[1]) - m(rows[0], cols[1]) * m(rows[1], cols[0]);
    Matrix sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
    return sub.determinant();
}

namespace {

void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw DimensionError(std::string(what) + ": dimension mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// GradedTensor

GradedTensor::GradedTensor(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 0) throw DimensionError("negative dimension");
    // Degrees above dim are legal and have an empty coefficient array.
    if (degree < 0) throw DimensionError("negative degree");
    coeffs_.assign(binomial(dim, degree), 0.0);
}

double GradedTensor::at(std::vector<int> indices) const {
    if (static_cast<int>(indices.size()) != degree_) throw DimensionError("index list has wrong degree");
    const int sign = sort_with_sign(indices);
    if (sign == 0) return 0.0;
    return sign * (*this)[MultiIndex(std::move(indices), dim_)];
}

double GradedTensor::max_abs() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

// ---------------------------------------------------------------------------
// AlternatingForm

AlternatingForm::AlternatingForm(int dim, int degree) : GradedTensor(dim, degree) {}

AlternatingForm AlternatingForm::constant(int dim, double value) {
    AlternatingForm f(dim, 0);
    f.coeffs_[0] = value;
    return f;
}

AlternatingForm AlternatingForm::basis(int dim, int i) { return monomial(dim, {i}); }

AlternatingForm AlternatingForm::monomial(int dim, std::vector<int> indices) {
    AlternatingForm f(dim, static_cast<int>(indices.size()));
    const int sign = sort_with_sign(indices);
    if (sign != 0) f[MultiIndex(std::move(indices), dim)] = sign;
    return f;
}

AlternatingForm AlternatingForm::volume(int dim, int first, int count) {
    std::vector<int> idx(count);
    std::iota(idx.begin(), idx.end(), first);
    return monomial(dim, std::move(idx));
}

AlternatingForm AlternatingForm::from_gradient(const Vector& gradient) {
    AlternatingForm f(static_cast<int>(gradient.size()), 1);
    for (Eigen::Index i = 0; i < gradient.size(); ++i) f.coeffs_[i] = gradient[i];
    return f;
}

double AlternatingForm::evaluate(std::span<const Vector> vectors) const {
    if (static_cast<int>(vectors.size()) != degree_) throw DimensionError("evaluate: wrong number of vectors");
    Matrix cols(dim_, degree_);
    for (int j = 0; j < degree_; ++j) {
        require_same_dim(static_cast<int>(vectors[j].size()), dim_, "evaluate");
        cols.col(j) = vectors[j];
    }
    std::vector<int> all(degree_);
    std::iota(all.begin(), all.end(), 0);
    double sum = 0.0;
    for (std::size_t r = 0; r < coeffs_.size(); ++r) {
        if (coeffs_[r] == 0.0) continue;
        sum += coeffs_[r] * minor_determinant(cols, MultiIndex::unrank(r, degree_, dim_).indices(), all);
    }
    return sum;
}

double AlternatingForm::pair(const MultiVector& X) const {
    require_same_dim(dim_, X.dim(), "pair");
    if (degree_ != X.degree()) throw DimensionError("pair: degree mismatch");
    double sum = 0.0;
    for (std::size_t r = 0; r < coeffs_.size(); ++r) sum += coeffs_[r] * X.coeff(r);
    return sum;
}

AlternatingForm& AlternatingForm::operator+=(const AlternatingForm& rhs) {
    require_same_dim(dim_, rhs.dim_, "form +");
    if (degree_ != rhs.degree_) throw DimensionError("form +: degree mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

AlternatingForm& AlternatingForm::operator-=(const AlternatingForm& rhs) {
    require_same_dim(dim_, rhs.dim_, "form -");
    if (degree_ != rhs.degree_) throw DimensionError("form -: degree mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

AlternatingForm& AlternatingForm::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

Vector AlternatingForm::as_covector() const {
    if (degree_ != 1) throw DimensionError("as_covector: degree must be 1");
    return Eigen::Map<const Vector>(coeffs_.data(), dim_);
}

// ---------------------------------------------------------------------------
// MultiVector

MultiVector::MultiVector(int dim, int degree) : GradedTensor(dim, degree) {}

MultiVector MultiVector::basis(int dim, std::vector<int> indices) {
    MultiVector X(dim, static_cast<int>(indices.size()));
    const int sign = sort_with_sign(indices);
    if (sign != 0) X[MultiIndex(std::move(indices), dim)] = sign;
    return X;
}

MultiVector MultiVector::from_vector(const Vector& v) {
    MultiVector X(static_cast<int>(v.size()), 1);
    for (Eigen::Index i = 0; i < v.size(); ++i) X.coeffs_[i] = v[i];
    return X;
}

MultiVector MultiVector::decomposable(const Matrix& columns) {
    const int d = static_cast<int>(columns.rows());
    const int k = static_cast<int>(columns.cols());
    MultiVector X(d, k);
    std::vector<int> all(k);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t r = 0; r < X.coeffs_.size(); ++r)
        X.coeffs_[r] = minor_determinant(columns, MultiIndex::unrank(r, k, d).indices(), all);
    return X;
}

MultiVector MultiVector::decomposable(std::span<const Vector> vectors) {
    if (vectors.empty()) throw ArgumentError("decomposable: need at least one vector (use dimension-aware overload)");
    Matrix cols(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        require_same_dim(static_cast<int>(vectors[j].size()), static_cast<int>(cols.rows()), "decomposable");
        cols.col(static_cast<Eigen::Index>(j)) = vectors[j];
    }
    return decomposable(cols);
}

MultiVector& MultiVector::operator+=(const MultiVector& rhs) {
    require_same_dim(dim_, rhs.dim_, "multivector +");
    if (degree_ != rhs.degree_) throw DimensionError("multivector +: degree mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

MultiVector& MultiVector::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

// ---------------------------------------------------------------------------
// Operations

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b) {
    require_same_dim(a.dim(), b.dim(), "wedge");
    const int d = a.dim();
    const int p = a.degree();
    const int q = b.degree();
    AlternatingForm out(d, p + q);
    if (p + q > d) return out;
    std::vector<int> merged;
    merged.reserve(p + q);
    for (std::size_t ra = 0; ra < a.size(); ++ra) {
        const double ca = a.coeff(ra);
        if (ca == 0.0) continue;
        const MultiIndex I = MultiIndex::unrank(ra, p, d);
        for (std::size_t rb = 0; rb < b.size(); ++rb) {
            const double cb = b.coeff(rb);
            if (cb == 0.0) continue;
            const MultiIndex J = MultiIndex::unrank(rb, q, d);
            merged.assign(I.indices().begin(), I.indices().end());
            merged.insert(merged.end(), J.indices().begin(), J.indices().end());
            const int sign = sort_with_sign(merged);
            if (sign == 0) continue;
            out[MultiIndex(merged, d)] += sign * ca * cb;
        }
    }
    return out;
}

AlternatingForm contract(const MultiVector& X, const AlternatingForm& a) {
    require_same_dim(X.dim(), a.dim(), "contract");
    const int d = a.dim();
    const int k = X.degree();
    const int p = a.degree();
    if (k > p) throw DimensionError("contract: multivector degree exceeds form degree");
    AlternatingForm out(d, p - k);
    const auto positions = MultiIndex::enumerate(k, p);
    std::vector<int> J(k);
    std::vector<int> K;
    K.reserve(p - k);
    for (std::size_t ra = 0; ra < a.size(); ++ra) {
        const double ca = a.coeff(ra);
        if (ca == 0.0) continue;
        const MultiIndex I = MultiIndex::unrank(ra, p, d);
        for (const MultiIndex& pos : positions) {
            int shift = 0;
            for (int t = 0; t < k; ++t) {
                J[t] = I[pos[t]];
                shift += pos[t] - t;
            }
            const double cx = X[MultiIndex(J, d)];
            if (cx == 0.0) continue;
            K.clear();
            for (int s = 0; s < p; ++s)
                if (!pos.contains(s)) K.push_back(I[s]);
            out[MultiIndex(K, d)] += ((shift % 2) ? -1.0 : 1.0) * cx * ca;
        }
    }
    return out;
}

AlternatingForm interior(const Vector& v, const AlternatingForm& a) { return contract(MultiVector::from_vector(v), a); }

AlternatingForm flat(const AlternatingForm& omega, const Vector& v) {
    if (omega.degree() < 1) throw DimensionError("flat: form degree must be at least 1");
    return interior(v, omega);
}

Matrix flat_matrix(const AlternatingForm& omega) { return contraction_matrix(omega, 1); }

Matrix contraction_matrix(const AlternatingForm& omega, int k) {
    const int d = omega.dim();
    if (k < 0 || k > omega.degree()) throw DimensionError("contraction_matrix: bad multivector degree");
    const auto rows = static_cast<Eigen::Index>(binomial(d, omega.degree() - k));
    const auto cols = static_cast<Eigen::Index>(binomial(d, k));
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        MultiVector e(d, k);
        e.coeff(static_cast<std::size_t>(j)) = 1.0;
        const AlternatingForm image = contract(e, omega);
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = image.coeff(static_cast<std::size_t>(i));
    }
    return m;
}

bool is_k_horizontal(const AlternatingForm& eta, std::span<const Vector> vertical_basis, int k, double tol) {
    if (k < 1) throw ArgumentError("is_k_horizontal: k must be at least 1");
    if (k > eta.degree()) return true;
    const int m = static_cast<int>(vertical_basis.size());
    if (k > m) return true;
    for (const MultiIndex& choice : MultiIndex::enumerate(k, m)) {
        AlternatingForm f = eta;
        for (int i : choice.indices()) f = interior(vertical_basis[i], f);
        if (!f.is_zero(tol)) return false;
    }
    return true;
}

int numerical_rank(const Matrix& m, double relative_threshold) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > relative_threshold * s[0]) ++r;
    return r;
}

}  // namespace multisym
