#include "multisym/alternating.hpp"
#include "multisym/error.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace multisym;
using multisym::testing::Gen;

namespace {

// Permutation-sum evaluation, independent of the library's minor routine.
double leibniz_evaluate(const AlternatingForm& a, const std::vector<Vector>& vs) {
    const int p = a.degree();
    double total = 0.0;
    for (const MultiIndex& I : MultiIndex::enumerate(p, a.dim())) {
        std::vector<int> perm(static_cast<std::size_t>(p));
        std::iota(perm.begin(), perm.end(), 0);
        double det = 0.0;
        do {
            int inversions = 0;
            for (int i = 0; i < p; ++i)
                for (int j = i + 1; j < p; ++j)
                    if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
            double term = inversions % 2 ? -1.0 : 1.0;
            for (int k = 0; k < p; ++k) term *= vs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])][I[static_cast<std::size_t>(k)]];
            det += term;
        } while (std::next_permutation(perm.begin(), perm.end()));
        total += a[I] * det;
    }
    return total;
}

Vector e(int dim, int i) { return Vector::Unit(dim, i); }

}  // namespace

TEST(MultiIndex, EnumerationCountAndOrder) {
    for (int d = 0; d <= 7; ++d) {
        for (int p = 0; p <= d; ++p) {
            const auto all = MultiIndex::enumerate(p, d);
            ASSERT_EQ(all.size(), binomial(d, p));
            for (std::size_t r = 0; r < all.size(); ++r) {
                EXPECT_EQ(all[r].rank(), r);
                EXPECT_EQ(MultiIndex::unrank(r, p, d), all[r]);
                if (r > 0) EXPECT_TRUE(std::lexicographical_compare(all[r - 1].indices().begin(), all[r - 1].indices().end(),
                                                                    all[r].indices().begin(), all[r].indices().end()));
            }
        }
    }
}

TEST(MultiIndex, RejectsUnsortedOrOutOfRange) {
    EXPECT_THROW(MultiIndex({1, 0}, 3), Error);
    EXPECT_THROW(MultiIndex({0, 0}, 3), Error);
    EXPECT_THROW(MultiIndex({0, 3}, 3), Error);
}

TEST(Wedge, BasisExamples) {
    const auto dx1 = AlternatingForm::basis(2, 0);
    const auto dx2 = AlternatingForm::basis(2, 1);
    EXPECT_TRUE(wedge(dx1, dx1).is_zero());
    const auto a = wedge(dx1, dx2);
    const auto b = wedge(dx2, dx1);
    EXPECT_DOUBLE_EQ(a.coeff(0), 1.0);
    EXPECT_DOUBLE_EQ(b.coeff(0), -1.0);

    // coordinates (x1, x2, q, p1, p2): dq ^ dx2 = -dx2 ^ dq
    const auto w = wedge(AlternatingForm::basis(5, 2), AlternatingForm::basis(5, 1));
    EXPECT_DOUBLE_EQ(w[MultiIndex({1, 2}, 5)], -1.0);
    EXPECT_DOUBLE_EQ(w.max_abs(), 1.0);
}

TEST(Wedge, DimensionMismatchAndOverflow) {
    EXPECT_THROW(wedge(AlternatingForm::basis(2, 0), AlternatingForm::basis(3, 0)), DimensionError);
    const auto over = wedge(AlternatingForm::volume(3, 0, 2), AlternatingForm::volume(3, 0, 2));
    EXPECT_EQ(over.degree(), 4);
    EXPECT_EQ(over.size(), 0u);
}

TEST(Wedge, GradedCommutativeAssociativeBilinear) {
    Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = g.integer(2, 6);
        const int p = g.integer(0, d / 2);
        const int q = g.integer(0, d - p);
        const auto a = g.form(d, p);
        const auto b = g.form(d, q);
        const double sign = (p * q) % 2 ? -1.0 : 1.0;
        EXPECT_LT((wedge(a, b) - sign * wedge(b, a)).max_abs(), 1e-13);

        const int r = g.integer(0, d - p - q);
        const auto c = g.form(d, r);
        EXPECT_LT((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs(), 1e-12);

        const auto a2 = g.form(d, p);
        const double s = g.uniform();
        EXPECT_LT((wedge(a + s * a2, b) - wedge(a, b) - s * wedge(a2, b)).max_abs(), 1e-13);
    }
}

TEST(Evaluate, BasisTupleReturnsCoefficient) {
    Gen g(3);
    const auto a = g.form(5, 3);
    for (const MultiIndex& I : MultiIndex::enumerate(3, 5)) {
        std::vector<Vector> vs;
        for (int i : I.indices()) vs.push_back(e(5, i));
        EXPECT_DOUBLE_EQ(a.evaluate(vs), a[I]);
    }
}

TEST(Evaluate, MatchesPermutationSumAndIsAntisymmetric) {
    Gen g(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = g.integer(1, 6);
        const int p = g.integer(1, d);
        const auto a = g.form(d, p);
        std::vector<Vector> vs;
        for (int k = 0; k < p; ++k) vs.push_back(g.vector(d));
        const double v = a.evaluate(vs);
        EXPECT_NEAR(v, leibniz_evaluate(a, vs), 1e-12);
        if (p >= 2) {
            const int i = g.integer(0, p - 1);
            int j = g.integer(0, p - 2);
            if (j >= i) ++j;
            std::swap(vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]);
            EXPECT_NEAR(a.evaluate(vs), -v, 1e-12 * std::max(1.0, std::abs(v)));
        }
    }
}

TEST(MultiVectorTest, DecomposableEqualsMinors) {
    Gen g(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = g.integer(1, 6);
        const int k = g.integer(1, d);
        const Matrix V = g.matrix(d, k);
        const MultiVector X = MultiVector::decomposable(V);
        std::vector<int> cols(static_cast<std::size_t>(k));
        std::iota(cols.begin(), cols.end(), 0);
        for (const MultiIndex& I : MultiIndex::enumerate(k, d)) {
            Matrix sub(k, k);
            for (int r = 0; r < k; ++r) sub.row(r) = V.row(I[static_cast<std::size_t>(r)]);
            EXPECT_NEAR(X[I], sub.determinant(), 1e-13);
        }
    }
}

TEST(Contract, Examples) {
    // e1 into dx1 ^ dx2 gives dx2
    const auto c = contract(MultiVector::from_vector(e(2, 0)), AlternatingForm::volume(2, 0, 2));
    EXPECT_EQ(c.degree(), 1);
    EXPECT_DOUBLE_EQ(c.coeff(0), 0.0);
    EXPECT_DOUBLE_EQ(c.coeff(1), 1.0);

    // e1 ^ e2 into dx1 ^ dx2 ^ dx3 gives dx3
    const auto c2 = contract(MultiVector::basis(3, {0, 1}), AlternatingForm::volume(3, 0, 3));
    EXPECT_DOUBLE_EQ(c2.coeff(2), 1.0);
    EXPECT_DOUBLE_EQ(std::abs(c2.coeff(0)) + std::abs(c2.coeff(1)), 0.0);

    // d/dx^mu into d^3x: the hat volumes dx2^dx3, -dx1^dx3, dx1^dx2
    const auto vol = AlternatingForm::volume(3, 0, 3);
    EXPECT_DOUBLE_EQ(interior(e(3, 0), vol)[MultiIndex({1, 2}, 3)], 1.0);
    EXPECT_DOUBLE_EQ(interior(e(3, 1), vol)[MultiIndex({0, 2}, 3)], -1.0);
    EXPECT_DOUBLE_EQ(interior(e(3, 2), vol)[MultiIndex({0, 1}, 3)], 1.0);

    EXPECT_THROW(contract(MultiVector::basis(3, {0, 1}), AlternatingForm::basis(3, 0)), Error);
}

TEST(Contract, DefinitionOrderLawAndLeibniz) {
    Gen g(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = g.integer(2, 6);
        const int p = g.integer(2, d);
        const int k = g.integer(1, p);
        const auto a = g.form(d, p);
        std::vector<Vector> vs;
        for (int i = 0; i < k; ++i) vs.push_back(g.vector(d));
        const auto X = MultiVector::decomposable(vs);
        const auto c = contract(X, a);

        // contract(v1..vk, a)(w..) = a(v1..vk, w..)
        std::vector<Vector> ws;
        for (int i = 0; i < p - k; ++i) ws.push_back(g.vector(d));
        std::vector<Vector> all = vs;
        all.insert(all.end(), ws.begin(), ws.end());
        EXPECT_NEAR(c.evaluate(ws), a.evaluate(all), 1e-12);

        // iterated single contractions in order v1 first
        AlternatingForm it = a;
        for (const Vector& v : vs) it = interior(v, it);
        EXPECT_LT((c - it).max_abs(), 1e-12);

        // iota_v(a ^ b) = iota_v a ^ b + (-1)^p a ^ iota_v b
        const int q = g.integer(1, d - 1);
        const int pa = g.integer(1, d - q);
        const auto A = g.form(d, pa);
        const auto B = g.form(d, q);
        const Vector v = g.vector(d);
        const double sign = pa % 2 ? -1.0 : 1.0;
        const auto lhs = interior(v, wedge(A, B));
        const auto rhs = wedge(interior(v, A), B) + sign * wedge(A, interior(v, B));
        EXPECT_LT((lhs - rhs).max_abs(), 1e-12);
    }
}

TEST(Contract, LinearInBothArguments) {
    Gen g(17);
    const auto a = g.form(5, 3);
    const auto b = g.form(5, 3);
    const auto X = g.multivector(5, 2);
    const auto Y = g.multivector(5, 2);
    EXPECT_LT((contract(X + 2.0 * Y, a) - contract(X, a) - 2.0 * contract(Y, a)).max_abs(), 1e-13);
    EXPECT_LT((contract(X, a + (-3.0) * b) - contract(X, a) + 3.0 * contract(X, b)).max_abs(), 1e-13);
}

TEST(Flat, Examples) {
    const auto omega = AlternatingForm::volume(2, 0, 2);  // dq ^ dp
    const auto f = flat(omega, e(2, 0));
    EXPECT_DOUBLE_EQ(f.coeff(1), 1.0);
    EXPECT_DOUBLE_EQ(f.coeff(0), 0.0);
    EXPECT_TRUE(flat(omega, Vector::Zero(2)).is_zero());
    const Matrix F = flat_matrix(omega);
    EXPECT_EQ(numerical_rank(F), 2);
}

TEST(Horizontal, Examples) {
    // coordinates (x1, x2, q1, q2): dq1 ^ dq2 is not 2-horizontal
    const std::vector<Vector> vertical = {e(4, 2), e(4, 3)};
    EXPECT_FALSE(is_k_horizontal(AlternatingForm::monomial(4, {2, 3}), vertical, 2));
    EXPECT_TRUE(is_k_horizontal(AlternatingForm::monomial(4, {0, 2}), vertical, 2));
    EXPECT_FALSE(is_k_horizontal(AlternatingForm::monomial(4, {0, 2}), vertical, 1));
    EXPECT_TRUE(is_k_horizontal(AlternatingForm::zero(4, 2), vertical, 1));
    EXPECT_THROW(is_k_horizontal(AlternatingForm::zero(4, 2), vertical, 0), Error);
}

TEST(Pair, MatchesContractionToScalar) {
    Gen g(19);
    const auto a = g.form(5, 3);
    const auto X = g.multivector(5, 3);
    EXPECT_NEAR(a.pair(X), contract(X, a).coeff(0), 1e-13);
}
