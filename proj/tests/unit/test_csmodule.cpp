#include <doctest.h>

#include <cmath>

#include "kaczmod/csmodule.hpp"
#include "kaczmod/errors.hpp"

using namespace kaczmod;

namespace {

MeasureFamily mixed_family() {
    return MeasureFamily::parametrized(
        linear_grid(0.1, 0.9, 5),
        [](double s) { return MeasureModel::mixture(0.4 * s, {{0.0, s}, {0.3, 0.5 * (1 - s)}, {0.7, 0.5 * (1 - s)}}); },
        10.0, 4);
}

// Oracle: <f, g>(x) = sum_{n,m} a_n conj(b_m) int e^{2 pi i (n - m) t} dmu_x, a Toeplitz double sum.
std::vector<Complex> toeplitz_inner(const ModuleVector& f, const ModuleVector& g) {
    const auto& fam = f.descriptor().family();
    const auto a = f.as_matrix();
    const auto b = g.as_matrix();
    std::vector<Complex> out;
    for (std::size_t x = 0; x < fam.size(); ++x) {
        Complex sum = 0.0;
        for (Eigen::Index n = 0; n < a.rows(); ++n)
            for (Eigen::Index m = 0; m < b.rows(); ++m)
                sum += a(n, x) * std::conj(b(m, x)) * fourier_coefficient(fam.fiber(x), m - n);
        out.push_back(sum);
    }
    return out;
}

}  // namespace

TEST_CASE("trig inner product matches the Toeplitz double sum") {
    const auto d = ModuleDescriptor::trig_module(mixed_family(), 12);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto f = random_vector(d, seed, 12);
        const auto g = random_vector(d, seed + 100, 7);
        const auto ip = inner(f, g);
        const auto oracle = toeplitz_inner(f, g);
        for (std::size_t x = 0; x < oracle.size(); ++x) CHECK(std::abs(ip.at(x) - oracle[x]) < 1e-12);
    }
}

TEST_CASE("inner product axioms on every realization") {
    const std::vector<ModuleDescriptor> descs{
        ModuleDescriptor::free_module(AlgebraDescriptor::matrix(2), 3),
        ModuleDescriptor::atomic_l2(MeasureModel::atomic({{0.1, 0.2}, {0.4, 0.3}, {0.9, 0.5}})),
        ModuleDescriptor::trig_module(mixed_family(), 6),
        ModuleDescriptor::grid_hilbert(4, 3)};
    for (const auto& d : descs) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto x = random_vector(d, seed);
            const auto y = random_vector(d, seed + 50);
            // Hermitian symmetry, positivity, Cauchy-Schwarz.
            CHECK(norm(inner(x, y) - adjoint(inner(y, x))) < 1e-12);
            CHECK(is_positive(inner(x, x)));
            CHECK(norm(inner(x, y)) <= module_norm(x) * module_norm(y) + 1e-9);
            // A-linearity in the first slot.
            const auto a = inner(y, x);
            CHECK(norm(inner(a * x, y) - a * inner(x, y)) < 1e-10);
        }
    }
}

TEST_CASE("exponentials are unit vectors and overflow past F") {
    const auto d = ModuleDescriptor::trig_module(mixed_family(), 5);
    for (std::size_t n = 0; n <= 5; ++n) CHECK(is_unit_vector(exponential_vector(d, n)));
    CHECK_THROWS_AS(exponential_vector(d, 6), FrequencyOverflow);
    const auto e1 = exponential_vector(d, 1);
    // <e_0, e_1>(x) is the first moment of the fiber.
    const auto ip = inner(exponential_vector(d, 0), e1);
    for (std::size_t x = 0; x < 5; ++x)
        CHECK(std::abs(ip.at(x) - moment(d.family().fiber(x), 1)) < 1e-14);
}

TEST_CASE("exponential pairings agree with inner products") {
    const auto d = ModuleDescriptor::trig_module(mixed_family(), 9);
    const auto x = random_vector(d, 3, 9);
    const auto pairs = exponential_pairings(x, 9);
    for (std::size_t n = 0; n <= 9; ++n) CHECK(norm(pairs[n] - inner(x, exponential_vector(d, n))) < 1e-12);
}

TEST_CASE("multiply_by_exponential shifts frequencies") {
    const auto d = ModuleDescriptor::trig_module(mixed_family(), 4);
    const auto shifted = multiply_by_exponential(exponential_vector(d, 2));
    CHECK(module_norm(shifted - exponential_vector(d, 3)) == 0.0);
    CHECK_THROWS_AS(multiply_by_exponential(exponential_vector(d, 4)), FrequencyOverflow);
    const auto da = ModuleDescriptor::atomic_l2(MeasureModel::atomic({{0.25, 0.5}, {0.5, 0.5}}));
    CHECK(module_norm(multiply_by_exponential(exponential_vector(da, 1)) - exponential_vector(da, 2)) < 1e-15);
}

TEST_CASE("descriptor mismatch is structural") {
    const auto d1 = ModuleDescriptor::grid_hilbert(3, 2);
    const auto d2 = ModuleDescriptor::grid_hilbert(3, 3);
    CHECK_THROWS_AS(inner(random_vector(d1, 1), random_vector(d2, 1)), StructuralError);
    CHECK(ModuleDescriptor::grid_hilbert(3, 2) == d1);
}

TEST_CASE("random unitaries are unitary and reproducible") {
    const auto u = random_unitary(5, 42);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(5, 5)).norm() < 1e-13);
    CHECK((random_unitary(5, 42) - u).norm() == 0.0);
    CHECK((random_unitary(5, 43) - u).norm() > 0.1);
}

TEST_CASE("frame operator solve inverts the frame operator") {
    const auto d = ModuleDescriptor::free_module(AlgebraDescriptor::matrix(2), 2);
    std::vector<ModuleVector> frame;
    for (std::uint64_t s = 0; s < 3; ++s) frame.push_back(random_vector(d, 10 + s));
    const auto x = random_vector(d, 99);
    const auto sol = frame_operator_solve(frame, x);
    CHECK(module_norm(frame_operator_apply(frame, sol.solution) - x) < 1e-10);
    CHECK(sol.residual < 1e-10);
    CHECK(sol.condition_number >= 1.0);

    // One vector cannot span the rank-2 module.
    const std::vector<ModuleVector> thin{frame.front()};
    CHECK_THROWS_AS(frame_operator_solve(thin, x), RankDeficientError);
}

TEST_CASE("module operator norm of a projection-complement product") {
    // On AtomicL2 (a Hilbert space) the norm is the weighted operator norm; oracle:
    // W^{1/2} M W^{-1/2} has the same spectral norm.
    const auto mu = MeasureModel::atomic({{0.0, 0.2}, {0.3, 0.3}, {0.6, 0.5}});
    const auto d = ModuleDescriptor::atomic_l2(mu);
    const Eigen::MatrixXcd m = random_unitary(3, 5) * Eigen::Vector3cd(1.0, 0.5, 0.25).asDiagonal();
    Eigen::Vector3d w(0.2, 0.3, 0.5);
    const Eigen::MatrixXcd sim = w.cwiseSqrt().asDiagonal() * m * w.cwiseSqrt().cwiseInverse().asDiagonal();
    const double oracle = Eigen::JacobiSVD<Eigen::MatrixXcd>(sim).singularValues()(0);
    CHECK(module_operator_norm(d, m) == doctest::Approx(oracle).epsilon(1e-12));

    // The weighted adjoint satisfies <L f, g> = <f, L* g>.
    const auto adj = module_adjoint_map(d, m);
    const auto f = random_vector(d, 1), g = random_vector(d, 2);
    CHECK(norm(inner(apply_flat(m, f), g) - inner(f, apply_flat(adj, g))) < 1e-12);
}

TEST_CASE("free module operator norm equals the block matrix norm") {
    // Right multiplication by a scalar matrix B on A^2 (A = M_2) has module norm ||B||.
    const auto d = ModuleDescriptor::free_module(AlgebraDescriptor::matrix(2), 2);
    const Eigen::Matrix2cd b = random_unitary(2, 8) * Eigen::Vector2cd(2.0, 0.5).asDiagonal();
    const auto map = flatten_map(d, [&](const ModuleVector& f) {
        const std::vector<AlgebraElement> comps{
            AlgebraElement(AlgebraDescriptor::matrix(2), f.component(0).payload() * b(0, 0) + f.component(1).payload() * b(1, 0)),
            AlgebraElement(AlgebraDescriptor::matrix(2), f.component(0).payload() * b(0, 1) + f.component(1).payload() * b(1, 1))};
        return ModuleVector::free(d, comps);
    });
    CHECK(module_operator_norm(d, map) == doctest::Approx(2.0).epsilon(1e-12));
}
