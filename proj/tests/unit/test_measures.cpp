#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kaczmod/errors.hpp"
#include "kaczmod/measures.hpp"

using namespace kaczmod;

TEST_CASE("unit_phase is exact at quarter turns") {
    CHECK(unit_phase(0.0) == Complex(1, 0));
    CHECK(unit_phase(0.25) == Complex(0, 1));
    CHECK(unit_phase(0.5) == Complex(-1, 0));
    CHECK(unit_phase(0.75) == Complex(0, -1));
    CHECK(unit_phase(7.5) == Complex(-1, 0));
    CHECK(unit_phase(-0.25) == Complex(0, -1));
    // Generic angle against std::polar.
    const Complex z = unit_phase(0.1);
    CHECK(std::abs(z - std::polar(1.0, 2 * std::numbers::pi * 0.1)) < 1e-15);
}

TEST_CASE("atomic measure validation names the field") {
    auto message = [](auto&& fn) {
        try {
            fn();
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message([] { MeasureModel::atomic({{0.0, 0.5}, {0.5, 0.4}}); }).find("weights") != std::string::npos);
    CHECK(message([] { MeasureModel::atomic({}); }).find("atoms") != std::string::npos);
    CHECK(message([] { MeasureModel::atomic({{1.0, 1.0}}); }).find("atoms") != std::string::npos);
    CHECK(message([] { MeasureModel::atomic({{0.2, 0.5}, {0.2, 0.5}}); }).find("atoms") != std::string::npos);
    CHECK(message([] { MeasureModel::mixture(1.5, {{0.0, 1.0}}); }).find("alpha") != std::string::npos);
}

TEST_CASE("moments of the standard measures") {
    // Dirac at 0: every moment 1.
    for (long n = 0; n < 10; ++n) CHECK(moment(MeasureModel::dirac(0.0), n) == Complex(1, 0));
    // Lebesgue: delta_{n0}.
    CHECK(moment(MeasureModel::lebesgue(), 0) == Complex(1, 0));
    for (long n = 1; n < 10; ++n) CHECK(moment(MeasureModel::lebesgue(), n) == Complex(0, 0));
    // Equal two-atom at 0 and 1/2: (1 + (-1)^n)/2.
    const auto two = MeasureModel::atomic({{0.0, 0.5}, {0.5, 0.5}});
    for (long n = 0; n < 10; ++n) CHECK(moment(two, n) == Complex(n % 2 == 0 ? 1.0 : 0.0, 0.0));
    // Mixture 1/2 Lebesgue + 1/2 delta_0: 1/2 for n >= 1.
    const auto mix = MeasureModel::mixture(0.5, {{0.0, 1.0}});
    for (long n = 1; n < 10; ++n) CHECK(moment(mix, n) == Complex(0.5, 0.0));
    CHECK_THROWS_AS(moment(mix, -1), ValidationError);
}

TEST_CASE("moment convention: integral of e^{-2 pi i n x}") {
    // Dirac at 1/4: moment 1 is e^{-i pi/2} = -i.
    CHECK(moment(MeasureModel::dirac(0.25), 1) == Complex(0, -1));
    CHECK(fourier_coefficient(MeasureModel::dirac(0.25), -1) == Complex(0, 1));
}

TEST_CASE("classification by construction") {
    CHECK(classify(MeasureModel::dirac(0.3)) == MeasureClass::Singular);
    CHECK(classify(MeasureModel::lebesgue()) == MeasureClass::Lebesgue);
    CHECK(classify(MeasureModel::mixture(0.2, {{0.0, 1.0}})) == MeasureClass::Neither);
}

TEST_CASE("families check adjacent-fiber continuity") {
    const auto grid = linear_grid(0.2, 0.8, 32);
    CHECK(grid.size() == 32);
    CHECK(grid.front() == 0.2);
    CHECK(grid.back() == doctest::Approx(0.8));
    auto two = [](double s) { return MeasureModel::atomic({{0.0, s}, {0.5, 1.0 - s}}); };
    const auto fam = MeasureFamily::parametrized(grid, two, 0.5, 8);
    CHECK(fam.size() == 32);
    // Adjacent moment jumps are |2 ds| for odd n.
    CHECK(fam.witness().observed == doctest::Approx(2 * (0.6 / 31)).epsilon(1e-9));
    CHECK(fam.provenance() == FamilyProvenance::Parametrized);

    // A jump from delta_0 to delta_{1/2} violates a small budget.
    CHECK_THROWS_AS(MeasureFamily({0.0, 1.0}, {MeasureModel::dirac(0.0), MeasureModel::dirac(0.5)}, 0.1, 4),
                    ValidationError);
}

TEST_CASE("family_moments tabulates fibers by frequency") {
    const auto fam = MeasureFamily({0.0, 1.0}, {MeasureModel::dirac(0.0), MeasureModel::lebesgue()}, 10.0, 2);
    const auto m = family_moments(fam, 3);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 4);
    CHECK(m(0, 3) == Complex(1, 0));
    CHECK(m(1, 3) == Complex(0, 0));
    CHECK(m(1, 0) == Complex(1, 0));
}
