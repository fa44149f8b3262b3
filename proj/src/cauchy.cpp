#include "kaczmod/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kaczmod/errors.hpp"
#include "kaczmod/stationary.hpp"

namespace kaczmod {

namespace {

void require_disk(Complex w, const char* where) {
    if (!(std::abs(w) < 1.0))
        throw DomainError(std::string(where) + ": |w| = " + std::to_string(std::abs(w)) + " is outside the open disk");
}

void require_commutative(const ModuleDescriptor& d, const char* where) {
    if (!d.algebra().is_commutative())
        throw StructuralError(std::string(where) + ": needs a commutative coefficient algebra");
}

// Fiber values of a commutative algebra element as a column.
Eigen::VectorXcd fiber_values(const AlgebraElement& a) { return a.payload().col(0); }

Complex trig_value(std::span<const Complex> a, double x) {
    Complex sum = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) sum += a[n] * unit_phase(static_cast<double>(n) * x);
    return sum;
}

// C_mu(1)(w): atoms contribute w_j / (1 - w conj(e(t_j))), the Lebesgue part 1.
Complex cauchy_of_one(const MeasureModel& mu, Complex w) {
    Complex sum = mu.lebesgue_weight();
    const double atomic = 1.0 - mu.lebesgue_weight();
    for (const auto& atom : mu.atoms())
        sum += atomic * atom.weight / (1.0 - w * std::conj(unit_phase(atom.position)));
    return sum;
}

}  // namespace

double PowerSeries::h2_norm_squared(std::size_t fiber) const {
    return coefficients.col(static_cast<Eigen::Index>(fiber)).squaredNorm();
}

DiskSample DiskSample::spiral(std::size_t count, double r_max) {
    if (count == 0) throw ValidationError("DiskSample: need at least one point");
    if (!(r_max > 0.0 && r_max <= 0.95)) throw ValidationError("DiskSample: r_max must lie in (0, 0.95]");
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    DiskSample sample;
    sample.r_max = r_max;
    sample.points.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double r = r_max * std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(count));
        sample.points.push_back(std::polar(r, golden * static_cast<double>(k)));
    }
    return sample;
}

Complex cauchy_transform(const MeasureModel& mu, std::span<const Complex> trig_coefficients, Complex w) {
    require_disk(w, "cauchy_transform()");
    Complex lebesgue = 0.0;
    Complex power = 1.0;
    for (const Complex& a : trig_coefficients) {
        lebesgue += a * power;
        power *= w;
    }
    Complex atomic = 0.0;
    for (const auto& atom : mu.atoms())
        atomic += atom.weight * trig_value(trig_coefficients, atom.position) /
                  (1.0 - w * std::conj(unit_phase(atom.position)));
    const double alpha = mu.lebesgue_weight();
    return alpha * lebesgue + (1.0 - alpha) * atomic;
}

Complex cauchy_transform(const ModuleVector& f, Complex w) {
    const auto& d = f.descriptor();
    switch (d.kind()) {
        case ModuleKind::AtomicL2: {
            require_disk(w, "cauchy_transform()");
            const auto& mu = d.measure();
            Complex sum = 0.0;
            const auto atoms = mu.atoms();
            for (std::size_t j = 0; j < atoms.size(); ++j)
                sum += atoms[j].weight * f.flat()(static_cast<Eigen::Index>(j)) /
                       (1.0 - w * std::conj(unit_phase(atoms[j].position)));
            return sum;
        }
        case ModuleKind::Trig: {
            if (d.grid_size() != 1) throw StructuralError("cauchy_transform(): expected a single-fiber TrigModule");
            const auto coeffs = f.as_matrix();
            std::vector<Complex> a(coeffs.col(0).begin(), coeffs.col(0).end());
            return cauchy_transform(d.family().fiber(0), a, w);
        }
        default: throw StructuralError("cauchy_transform(): needs an AtomicL2 or TrigModule vector");
    }
}

Complex herglotz_b(const MeasureModel& mu, Complex w) {
    require_disk(w, "herglotz_b()");
    const Complex c = cauchy_of_one(mu, w);
    if (std::abs(c) < 1e-300) throw DomainError("herglotz_b(): C_mu(1) vanishes at the evaluation point");
    return 1.0 - 1.0 / c;
}

double herglotz_residual(const MeasureModel& mu, const DiskSample& sample) {
    double worst = 0.0;
    const double alpha = mu.lebesgue_weight();
    for (const Complex& w : sample.points) {
        const Complex b = herglotz_b(mu, w);
        const Complex lhs = (1.0 + b) / (1.0 - b);
        Complex rhs = alpha;
        for (const auto& atom : mu.atoms()) {
            const Complex z = w * std::conj(unit_phase(atom.position));
            rhs += (1.0 - alpha) * atom.weight * (1.0 + z) / (1.0 - z);
        }
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

std::vector<Complex> herglotz_taylor(const MeasureModel& mu, std::size_t truncation) {
    // Radius keeps r^N away from underflow; K samples push aliasing (~r^K) below 1e-17.
    const double n = static_cast<double>(std::max<std::size_t>(truncation, 1));
    const double r = std::min(0.9, std::pow(1e-4, 1.0 / n));
    std::size_t k_points = 1024;
    while (static_cast<double>(k_points) * -std::log(r) < 40.0 || k_points <= 2 * truncation) k_points *= 2;

    std::vector<Complex> values(k_points);
    for (std::size_t k = 0; k < k_points; ++k)
        values[k] = herglotz_b(mu, r * unit_phase(static_cast<double>(k) / static_cast<double>(k_points)));

    std::vector<Complex> taylor(truncation + 1);
    for (std::size_t m = 0; m <= truncation; ++m) {
        Complex sum = 0.0;
        for (std::size_t k = 0; k < k_points; ++k)
            sum += values[k] * std::conj(unit_phase(static_cast<double>((m * k) % k_points) /
                                                    static_cast<double>(k_points)));
        taylor[m] = sum / (static_cast<double>(k_points) * std::pow(r, static_cast<double>(m)));
    }
    return taylor;
}

double inner_coefficient_check(const MeasureModel& mu, std::size_t truncation) {
    if (truncation == 0) throw ValidationError("inner_coefficient_check(): truncation must be >= 1");
    const auto taylor = herglotz_taylor(mu, truncation);
    const ScalarSeries series = measure_series(mu, truncation);
    double worst = 0.0;
    for (std::size_t n = 1; n <= truncation; ++n) worst = std::max(worst, std::abs(taylor[n] + series.coefficients[n]));
    return worst;
}

PowerSeries normalized_cauchy(AuxiliarySequence& aux, const ModuleVector& f, std::size_t truncation) {
    require_commutative(f.descriptor(), "normalized_cauchy()");
    require_same_module(f, aux.term(0));
    PowerSeries out;
    for (std::size_t n = 0; n <= truncation; ++n) {
        const Eigen::VectorXcd c = fiber_values(inner(f, aux[n]));
        if (n == 0) out.coefficients.resize(static_cast<Eigen::Index>(truncation + 1), c.size());
        out.coefficients.row(static_cast<Eigen::Index>(n)) = c.transpose();
    }
    return out;
}

PowerSeries normalized_cauchy(const SequenceSpec& spec, const ModuleVector& f, std::size_t truncation) {
    AuxiliarySequence aux(spec);
    return normalized_cauchy(aux, f, truncation);
}

double isometry_defect(const SequenceSpec& spec, const ModuleVector& f, std::size_t truncation) {
    const PowerSeries s = normalized_cauchy(spec, f, truncation);
    const Eigen::VectorXcd self = fiber_values(inner(f, f));
    double worst = 0.0;
    for (std::size_t x = 0; x < s.fibers(); ++x)
        worst = std::max(worst, std::abs(self(static_cast<Eigen::Index>(x)).real() - s.h2_norm_squared(x)));
    return worst;
}

double model_space_residual(const SequenceSpec& spec, const ModuleVector& f, std::size_t truncation,
                            std::size_t test_degree) {
    if (test_degree > truncation) throw ValidationError("model_space_residual(): need M <= N");
    const PowerSeries s = normalized_cauchy(spec, f, truncation);
    const auto series = fiber_series(spec, truncation);
    double worst = 0.0;
    for (std::size_t x = 0; x < s.fibers(); ++x) {
        const auto& c = series.at(x).coefficients;
        for (std::size_t m = 0; m <= test_degree; ++m) {
            // (b w^m)_n = b_{n-m} = -c_{n-m} for n - m >= 1, zero otherwise.
            Complex pairing = 0.0;
            for (std::size_t n = m + 1; n <= truncation; ++n) pairing += s.at(n, x) * std::conj(-c[n - m]);
            worst = std::max(worst, std::abs(pairing));
        }
    }
    return worst;
}

PowerSeries analysis_operator(std::span<const ModuleVector> frame, const ModuleVector& f, std::size_t truncation) {
    if (frame.size() <= truncation)
        throw SequenceExhausted("analysis_operator(): frame has " + std::to_string(frame.size()) + " terms, need " +
                                std::to_string(truncation + 1));
    require_commutative(f.descriptor(), "analysis_operator()");
    PowerSeries out;
    for (std::size_t n = 0; n <= truncation; ++n) {
        const Eigen::VectorXcd c = fiber_values(inner(f, frame[n]));
        if (n == 0) out.coefficients.resize(static_cast<Eigen::Index>(truncation + 1), c.size());
        out.coefficients.row(static_cast<Eigen::Index>(n)) = c.transpose();
    }
    return out;
}

double shift_orbit_residual(const SequenceSpec& spec, std::size_t n_max) {
    if (spec.kind() != SequenceKind::StationaryExponential)
        throw StructuralError("shift_orbit_residual(): expected a stationary exponential sequence");
    const auto len = spec.length();
    if (len && n_max + 1 >= *len)
        throw FrequencyOverflow("shift_orbit_residual(): n_max + 1 = " + std::to_string(n_max + 1) +
                                " exceeds the frequency bound");
    AuxiliarySequence aux(spec);
    const ModuleVector one = aux.term(0);
    double worst = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        ModuleVector shifted = multiply_by_exponential(aux[n]);
        subtract_scaled(shifted, inner(shifted, one), one);
        worst = std::max(worst, module_norm(shifted - aux[n + 1]));
    }
    return worst;
}

}  // namespace kaczmod
