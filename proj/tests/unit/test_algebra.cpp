#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "kaczmod/algebra.hpp"
#include "kaczmod/errors.hpp"

using namespace kaczmod;

namespace {

Eigen::MatrixXcd random_matrix(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
    return m;
}

// Oracle: largest singular value from an SVD.
double spectral_norm(const Eigen::MatrixXcd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

}  // namespace

TEST_CASE("descriptors validate and compare") {
    CHECK_THROWS_AS(AlgebraDescriptor::matrix(0), ValidationError);
    CHECK_THROWS_AS(AlgebraDescriptor::sampled(0), ValidationError);
    CHECK(AlgebraDescriptor::matrix(3) == AlgebraDescriptor::matrix(3));
    CHECK_FALSE(AlgebraDescriptor::matrix(3) == AlgebraDescriptor::sampled(3));
    CHECK(AlgebraDescriptor::matrix(1).is_commutative());
    CHECK_FALSE(AlgebraDescriptor::matrix(2).is_commutative());
    CHECK(AlgebraDescriptor::sampled(5).payload_size() == 5);
    CHECK(AlgebraDescriptor::matrix(3).payload_size() == 9);
}

TEST_CASE("payloads are shape-checked and finite") {
    const auto d = AlgebraDescriptor::matrix(2);
    CHECK_THROWS_AS(AlgebraElement(d, Eigen::MatrixXcd::Zero(3, 3)), ValidationError);
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(AlgebraElement(d, bad), ValidationError);
}

TEST_CASE("matrix norm is the spectral norm") {
    const auto d = AlgebraDescriptor::matrix(4);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Eigen::MatrixXcd m = random_matrix(4, seed);
        CHECK(norm(AlgebraElement(d, m)) == doctest::Approx(spectral_norm(m)).epsilon(1e-12));
    }
    // Nilpotent shift: norm 1 though every eigenvalue is 0.
    Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(2, 2);
    shift(0, 1) = 1.0;
    CHECK(norm(AlgebraElement(AlgebraDescriptor::matrix(2), shift)) == doctest::Approx(1.0));
}

TEST_CASE("C* identity ||a* a|| = ||a||^2") {
    const auto d = AlgebraDescriptor::matrix(3);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const AlgebraElement a(d, random_matrix(3, seed));
        CHECK(norm(adjoint(a) * a) == doctest::Approx(norm(a) * norm(a)).epsilon(1e-12));
    }
}

TEST_CASE("sampled algebra is pointwise") {
    const std::vector<Complex> v{{1, 2}, {-3, 0}, {0, 0.5}};
    const auto a = AlgebraElement::sampled(v);
    CHECK(norm(a) == doctest::Approx(3.0));
    const auto p = a * adjoint(a);
    CHECK(p.at(0) == Complex(5, 0));
    CHECK(p.at(2).real() == doctest::Approx(0.25));
    CHECK(is_positive(p));
    CHECK_FALSE(is_positive(a));
}

TEST_CASE("positivity via eigenvalues") {
    const auto d = AlgebraDescriptor::matrix(3);
    const AlgebraElement a(d, random_matrix(3, 7));
    CHECK(is_positive(adjoint(a) * a));
    CHECK_FALSE(is_positive(-(adjoint(a) * a)));
    CHECK(is_positive(AlgebraElement::zero(d)));
    Eigen::MatrixXcd nonherm = Eigen::MatrixXcd::Identity(3, 3);
    nonherm(0, 1) = 1.0;
    CHECK_FALSE(is_positive(AlgebraElement(d, nonherm)));
}

TEST_CASE("arithmetic and identity") {
    const auto d = AlgebraDescriptor::matrix(2);
    const AlgebraElement a(d, random_matrix(2, 3));
    const auto i = identity(d);
    CHECK(norm(i * a - a) == 0.0);
    CHECK(norm((a + a) - Complex(2.0) * a) == doctest::Approx(0.0));
    CHECK(norm(arithmetic(a, a, ArithmeticOp::Sub)) == 0.0);
    CHECK(norm(adjoint(adjoint(a)) - a) == 0.0);
}

TEST_CASE("mixing algebras is a structural error") {
    const AlgebraElement a = AlgebraElement::identity(AlgebraDescriptor::matrix(2));
    const AlgebraElement b = AlgebraElement::identity(AlgebraDescriptor::sampled(2));
    CHECK_THROWS_AS(a + b, StructuralError);
    CHECK_THROWS_AS(a * b, StructuralError);
}
