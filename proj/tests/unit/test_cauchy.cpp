#include <doctest.h>

#include <cmath>

#include "kaczmod/cauchy.hpp"
#include "kaczmod/errors.hpp"
#include "kaczmod/stationary.hpp"

using namespace kaczmod;

namespace {

MeasureModel two_atom(double s) { return MeasureModel::atomic({{0.0, s}, {0.5, 1.0 - s}}); }

ModuleDescriptor trig_single(const MeasureModel& mu, std::size_t f) {
    return ModuleDescriptor::trig_module(MeasureFamily::single(mu), f);
}

}  // namespace

TEST_CASE("Cauchy transform examples") {
    const std::vector<Complex> one{1.0};
    CHECK(std::abs(cauchy_transform(MeasureModel::dirac(0.0), one, 0.5) - 2.0) < 1e-15);
    CHECK(std::abs(cauchy_transform(MeasureModel::lebesgue(), one, Complex(0.3, 0.4)) - 1.0) < 1e-15);
    CHECK(std::abs(cauchy_transform(two_atom(0.5), one, 0.5) - 4.0 / 3.0) < 1e-15);
    CHECK_THROWS_AS(cauchy_transform(MeasureModel::dirac(0.0), one, 1.0), DomainError);

    // Lebesgue part of a trig polynomial: sum a_n w^n.
    const std::vector<Complex> poly{1.0, 2.0, Complex(0, 1)};
    const Complex w(0.2, -0.1);
    CHECK(std::abs(cauchy_transform(MeasureModel::lebesgue(), poly, w) - (1.0 + 2.0 * w + Complex(0, 1) * w * w)) <
          1e-15);
}

TEST_CASE("module Cauchy transform agrees with the measure form") {
    const auto mu = MeasureModel::atomic({{0.1, 0.5}, {0.35, 0.3}, {0.8, 0.2}});
    const auto dt = trig_single(mu, 5);
    const auto f = random_vector(dt, 3, 5);
    const auto coeffs = f.as_matrix();
    std::vector<Complex> a(coeffs.col(0).begin(), coeffs.col(0).end());
    const Complex w(0.4, 0.3);
    CHECK(std::abs(cauchy_transform(f, w) - cauchy_transform(mu, a, w)) < 1e-14);

    // AtomicL2 with values equal to the polynomial at the atoms.
    const auto da = ModuleDescriptor::atomic_l2(mu);
    std::vector<Complex> values;
    for (const auto& atom : mu.atoms()) {
        Complex v = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) v += a[n] * unit_phase(double(n) * atom.position);
        values.push_back(v);
    }
    CHECK(std::abs(cauchy_transform(ModuleVector::atomic_values(da, values), w) - cauchy_transform(mu, a, w)) < 1e-14);
}

TEST_CASE("Herglotz inner function closed forms") {
    const auto sample = DiskSample::spiral(100, 0.9);
    for (const Complex& w : sample.points) {
        CHECK(std::abs(herglotz_b(MeasureModel::dirac(0.0), w) - w) < 1e-15);
        CHECK(std::abs(herglotz_b(two_atom(0.5), w) - w * w) < 1e-15);
        CHECK(std::abs(herglotz_b(MeasureModel::lebesgue(), w)) == 0.0);
        CHECK(std::abs(herglotz_b(MeasureModel::mixture(0.3, {{0.2, 1.0}}), w)) <= 1.0);
    }
    CHECK(std::abs(herglotz_b(MeasureModel::dirac(0.0), 0.3) - 0.3) < 1e-15);
    CHECK(std::abs(herglotz_b(two_atom(0.5), 0.5) - 0.25) < 1e-15);
    CHECK(herglotz_b(MeasureModel::mixture(0.3, {{0.2, 1.0}}), 0.0) == Complex(0, 0));
    CHECK(herglotz_residual(two_atom(0.5), sample) <= 1e-10);
    CHECK(herglotz_residual(MeasureModel::lebesgue(), sample) == 0.0);
}

TEST_CASE("disk samples stay inside r_max") {
    const auto s = DiskSample::spiral(64, 0.5);
    CHECK(s.points.size() == 64);
    for (const auto& w : s.points) CHECK(std::abs(w) <= 0.5);
    CHECK_THROWS_AS(DiskSample::spiral(10, 0.96), ValidationError);
    CHECK_THROWS_AS(DiskSample::spiral(0, 0.5), ValidationError);
}

TEST_CASE("Taylor coefficients of b are minus the inverse coefficients") {
    // Independent routes: DFT of b on a circle vs the moment recursion.
    for (const auto& mu : {MeasureModel::dirac(0.0), two_atom(0.5), two_atom(0.3), MeasureModel::lebesgue(),
                           MeasureModel::mixture(0.5, {{0.0, 1.0}})}) {
        CHECK(inner_coefficient_check(mu, 60) < 1e-10);
    }
    const auto b = herglotz_taylor(MeasureModel::dirac(0.0), 4);
    CHECK(std::abs(b[0]) < 1e-15);
    CHECK(std::abs(b[1] - 1.0) < 1e-13);
    // Singular measure: sum |b_n|^2 -> 1.
    double energy = 0.0;
    for (const auto& c : herglotz_taylor(two_atom(0.7), 80)) energy += std::norm(c);
    CHECK(energy == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("normalized Cauchy transform examples") {
    // f = e_0 gives the constant series 1.
    for (const auto& mu : {MeasureModel::dirac(0.0), two_atom(0.5), MeasureModel::lebesgue()}) {
        const auto d = trig_single(mu, 10);
        const auto s = normalized_cauchy(SequenceSpec::stationary_exponential(d), exponential_vector(d, 0), 10);
        CHECK(s.at(0) == Complex(1, 0));
        for (std::size_t n = 1; n <= 10; ++n) CHECK(s.at(n) == Complex(0, 0));
    }
    // Lebesgue: coefficients of the polynomial.
    const auto dl = trig_single(MeasureModel::lebesgue(), 10);
    const std::vector<Complex> a{1.0, Complex(0, 2), -3.0, 0.5};
    const auto sl = normalized_cauchy(SequenceSpec::stationary_exponential(dl), ModuleVector::trig_constant(dl, a), 8);
    for (std::size_t n = 0; n <= 8; ++n) CHECK(sl.at(n) == (n < a.size() ? a[n] : Complex(0, 0)));
    // Dirac: (f(0), 0, 0, ...).
    const auto dd = trig_single(MeasureModel::dirac(0.0), 10);
    const auto sd = normalized_cauchy(SequenceSpec::stationary_exponential(dd), ModuleVector::trig_constant(dd, a), 8);
    CHECK(std::abs(sd.at(0) - (a[0] + a[1] + a[2] + a[3])) < 1e-15);
    for (std::size_t n = 1; n <= 8; ++n) CHECK(std::abs(sd.at(n)) < 1e-15);
}

TEST_CASE("isometry defect matches the Parseval defect and decreases") {
    const auto d = trig_single(two_atom(0.7), 40);
    const auto spec = SequenceSpec::stationary_exponential(d);
    const auto f = random_vector(d, 5, 4);
    double previous = 1e300;
    for (std::size_t n : {0u, 1u, 2u, 5u, 10u, 20u, 35u}) {
        const double iso = isometry_defect(spec, f, n);
        CHECK(std::abs(iso - norm(parseval_defect(spec, f, n))) < 1e-10);
        CHECK(iso <= previous + 1e-12);
        previous = iso;
    }
    CHECK(isometry_defect(spec, exponential_vector(d, 1), 35) < 1e-8);
}

TEST_CASE("model space orthogonality in the exact cases") {
    for (const auto& mu : {MeasureModel::dirac(0.0), two_atom(0.5), MeasureModel::lebesgue()}) {
        const auto d = trig_single(mu, 30);
        const auto spec = SequenceSpec::stationary_exponential(d);
        CHECK(model_space_residual(spec, random_vector(d, 8, 6), 25, 10) <= 1e-12);
    }
    const auto d = trig_single(MeasureModel::lebesgue(), 10);
    CHECK_THROWS_AS(model_space_residual(SequenceSpec::stationary_exponential(d), exponential_vector(d, 0), 3, 4),
                    ValidationError);
}

TEST_CASE("analysis operator") {
    // Four equal atoms at quarter points: e_0..e_3 orthonormal; theta(e_k) = w^k.
    const auto d = ModuleDescriptor::atomic_l2(MeasureModel::atomic({{0.0, 0.25}, {0.25, 0.25}, {0.5, 0.25}, {0.75, 0.25}}));
    std::vector<ModuleVector> basis;
    for (std::size_t n = 0; n < 4; ++n) basis.push_back(exponential_vector(d, n));
    for (std::size_t k = 0; k < 4; ++k) {
        const auto s = analysis_operator(basis, basis[k], 3);
        for (std::size_t n = 0; n < 4; ++n) CHECK(std::abs(s.at(n) - (n == k ? 1.0 : 0.0)) < 1e-15);
    }
    CHECK_THROWS_AS(analysis_operator(basis, basis[0], 4), SequenceExhausted);

    // With the auxiliary sequence as frame it reproduces the normalized transform.
    const auto spec = SequenceSpec::stationary_exponential(d);
    const auto g = auxiliary_sequence(spec, 6);
    const auto f = random_vector(d, 2);
    const auto a = analysis_operator(g, f, 6);
    const auto v = normalized_cauchy(spec, f, 6);
    CHECK((a.coefficients - v.coefficients).cwiseAbs().maxCoeff() == 0.0);

    const auto dm = ModuleDescriptor::free_module(AlgebraDescriptor::matrix(2), 1);
    const std::vector<ModuleVector> frame{random_vector(dm, 1)};
    CHECK_THROWS_AS(analysis_operator(frame, random_vector(dm, 2), 0), StructuralError);
}

TEST_CASE("shift orbit") {
    for (const auto& mu : {MeasureModel::dirac(0.0), two_atom(0.5), two_atom(0.7), MeasureModel::lebesgue(),
                           MeasureModel::mixture(0.5, {{0.0, 1.0}})}) {
        const auto d = trig_single(mu, 20);
        CHECK(shift_orbit_residual(SequenceSpec::stationary_exponential(d), 15) <= 1e-12);
    }
    const auto d = trig_single(MeasureModel::lebesgue(), 10);
    CHECK_THROWS_AS(shift_orbit_residual(SequenceSpec::stationary_exponential(d), 10), FrequencyOverflow);
}

TEST_CASE("family normalized transform is fiber-valued") {
    const auto fam = MeasureFamily::parametrized(linear_grid(0.2, 0.8, 5), two_atom, 1.0, 4);
    const auto d = ModuleDescriptor::trig_module(fam, 30);
    const auto spec = SequenceSpec::stationary_exponential(d);
    const auto f = random_vector(d, 6, 3);
    const auto s = normalized_cauchy(spec, f, 25);
    CHECK(s.fibers() == 5);
    CHECK(s.truncation() == 25);
    CHECK(isometry_defect(spec, f, 25) < 1e-8);
    CHECK(model_space_residual(spec, f, 25, 5) < 1e-8);
}
