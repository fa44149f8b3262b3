#include "kaczmod/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaczmod/errors.hpp"

namespace kaczmod {

namespace {

// Ring operations shared by the scalar and the algebra-valued series.
struct ScalarRing {
    static Complex one(const Complex&) { return 1.0; }
    static Complex zero(const Complex&) { return 0.0; }
    static Complex star(const Complex& a) { return std::conj(a); }
    static double size(const Complex& a) { return std::abs(a); }
};

struct AlgebraRing {
    static AlgebraElement one(const AlgebraElement& like) { return AlgebraElement::identity(like.descriptor()); }
    static AlgebraElement zero(const AlgebraElement& like) { return AlgebraElement::zero(like.descriptor()); }
    static AlgebraElement star(const AlgebraElement& a) { return adjoint(a); }
    static double size(const AlgebraElement& a) { return norm(a); }
};

template <class T, class Ring>
BasicCoefficientSeries<T> invert(std::span<const T> moments, std::size_t truncation) {
    if (moments.size() < truncation + 1)
        throw ValidationError("inverse_coefficients(): need moments 0.." + std::to_string(truncation) + ", got " +
                              std::to_string(moments.size()));
    const T unit = Ring::one(moments[0]);
    if (Ring::size(moments[0] - unit) > 1e-12)
        throw ValidationError("inverse_coefficients(): moment 0 must be the identity (unit normalization)");

    BasicCoefficientSeries<T> series;
    series.moments.assign(moments.begin(), moments.begin() + static_cast<std::ptrdiff_t>(truncation + 1));
    series.coefficients.reserve(truncation + 1);
    series.coefficients.push_back(unit);
    for (std::size_t n = 1; n <= truncation; ++n) {
        T acc = Ring::zero(unit);
        for (std::size_t k = 0; k < n; ++k) acc += series.coefficients[k] * series.moments[n - k];
        series.coefficients.push_back(-acc);
    }
    return series;
}

template <class T, class Ring>
double recursion_residual_impl(const BasicCoefficientSeries<T>& s) {
    double worst = 0.0;
    for (std::size_t n = 1; n <= s.truncation(); ++n) {
        T acc = s.coefficients[n];
        for (std::size_t k = 0; k < n; ++k) acc += s.coefficients[k] * s.moments[n - k];
        worst = std::max(worst, Ring::size(acc));
    }
    return worst;
}

template <class T, class Ring>
double cauchy_product_impl(const BasicCoefficientSeries<T>& s) {
    double worst = 0.0;
    const T unit = Ring::one(s.coefficients[0]);
    for (std::size_t d = 0; d <= s.truncation(); ++d) {
        T left = Ring::zero(unit);
        T right = Ring::zero(unit);
        for (std::size_t k = 0; k <= d; ++k) {
            left += s.coefficients[k] * s.moments[d - k];
            right += s.moments[k] * s.coefficients[d - k];
        }
        if (d == 0) {
            left -= unit;
            right -= unit;
        }
        worst = std::max({worst, Ring::size(left), Ring::size(right)});
    }
    return worst;
}

Complex fiber_value(const AlgebraElement& a, std::size_t i) { return a.payload()(static_cast<Eigen::Index>(i), 0); }

}  // namespace

ScalarSeries inverse_coefficients(std::span<const Complex> moments, std::size_t truncation) {
    return invert<Complex, ScalarRing>(moments, truncation);
}

OperatorSeries inverse_coefficients(std::span<const AlgebraElement> moments, std::size_t truncation) {
    for (const auto& m : moments) require_same_algebra(m, moments.front());
    return invert<AlgebraElement, AlgebraRing>(moments, truncation);
}

ScalarSeries measure_series(const MeasureModel& mu, std::size_t truncation) {
    std::vector<Complex> moments(truncation + 1);
    for (std::size_t n = 0; n <= truncation; ++n) moments[n] = moment(mu, static_cast<long>(n));
    return inverse_coefficients(moments, truncation);
}

double recursion_residual(const ScalarSeries& series) { return recursion_residual_impl<Complex, ScalarRing>(series); }
double recursion_residual(const OperatorSeries& series) {
    return recursion_residual_impl<AlgebraElement, AlgebraRing>(series);
}

double cauchy_product_residual(const ScalarSeries& series) { return cauchy_product_impl<Complex, ScalarRing>(series); }
double cauchy_product_residual(const OperatorSeries& series) {
    return cauchy_product_impl<AlgebraElement, AlgebraRing>(series);
}

double sarason_sum(const ScalarSeries& series) {
    double sum = 0.0;
    for (std::size_t n = 1; n <= series.truncation(); ++n) sum += std::norm(series.coefficients[n]);
    return sum;
}

AlgebraElement sarason_sum(const OperatorSeries& series) {
    AlgebraElement sum = AlgebraElement::zero(series.coefficients[0].descriptor());
    for (std::size_t n = 1; n <= series.truncation(); ++n)
        sum += series.coefficients[n] * adjoint(series.coefficients[n]);
    return sum;
}

TruncationInfo truncation_info(const ScalarSeries& series) {
    TruncationInfo info;
    info.truncation = series.truncation();
    const auto& c = series.coefficients;
    const std::size_t window = std::min<std::size_t>(8, series.truncation());
    if (window < 3) return info;
    const std::size_t first = c.size() - window;

    // Constant ratio |c_n| / |c_{n-1}| over the window: geometric tail.
    const double ratio = std::abs(c.back()) / std::abs(c[c.size() - 2]);
    bool geometric = std::isfinite(ratio) && ratio > 0.0 && ratio < 1.0;
    for (std::size_t n = first + 1; geometric && n < c.size(); ++n) {
        const double r = std::abs(c[n]) / std::abs(c[n - 1]);
        geometric = std::isfinite(r) && std::abs(r - ratio) <= 1e-6 * ratio;
    }
    if (geometric) {
        info.tail_bound = std::norm(c.back()) * ratio * ratio / (1.0 - ratio * ratio);
        info.truncation_limited = false;
        return info;
    }

    bool vanishing = true;
    for (std::size_t n = first; n < c.size(); ++n) vanishing = vanishing && std::abs(c[n]) <= 1e-15;
    if (vanishing) {
        info.tail_bound = 0.0;
        info.truncation_limited = false;
    }
    return info;
}

namespace {

EffectivityReport probe_condition(std::span<const AlgebraElement> moments, std::size_t truncation, double tol) {
    if (truncation == 0) throw ValidationError("effectivity_condition(): truncation must be >= 1");
    if (!(tol > 0.0)) throw ValidationError("effectivity_condition(): tol must be > 0");
    const OperatorSeries series = inverse_coefficients(moments, truncation);
    const AlgebraElement sarason = sarason_sum(series);

    EffectivityReport report;
    report.probe_range = truncation;
    report.truncation.truncation = truncation;
    for (std::size_t k = 1; k <= truncation; ++k) {
        const AlgebraElement forward = moments[k];        // <e_0, e_k>
        const AlgebraElement backward = adjoint(forward);  // <e_k, e_0>
        const double residual = norm(backward * sarason * forward - backward * forward);
        if (residual > report.worst_residual || k == 1) {
            report.worst_residual = residual;
            report.worst_k = k;
        }
    }
    report.holds = report.worst_residual <= tol;
    return report;
}

std::vector<AlgebraElement> stationary_moments(const SequenceSpec& spec, std::size_t truncation) {
    if (spec.kind() != SequenceKind::StationaryExponential)
        throw StructuralError("expected a stationary exponential sequence");
    const auto len = spec.length();
    if (len && truncation >= *len)
        throw FrequencyOverflow("truncation " + std::to_string(truncation) + " exceeds the TrigModule frequency bound");
    return exponential_pairings(spec.term(0), truncation);
}

}  // namespace

EffectivityReport effectivity_condition(std::span<const AlgebraElement> moments, std::size_t truncation, double tol) {
    return probe_condition(moments, truncation, tol);
}

EffectivityReport effectivity_condition(const SequenceSpec& spec, std::size_t truncation, double tol) {
    const auto moments = stationary_moments(spec, truncation);
    EffectivityReport report = probe_condition(moments, truncation, tol);

    // Commutative case: combine the per-fiber tail estimates.
    double tail = 0.0;
    bool limited = false;
    for (const auto& series : fiber_series(spec, truncation)) {
        const auto info = truncation_info(series);
        if (info.truncation_limited || !info.tail_bound) {
            limited = true;
        } else {
            tail = std::max(tail, *info.tail_bound);
        }
    }
    report.truncation.truncation_limited = limited;
    if (!limited) report.truncation.tail_bound = tail;
    return report;
}

std::vector<ScalarSeries> fiber_series(const SequenceSpec& spec, std::size_t truncation) {
    if (spec.kind() != SequenceKind::StationaryExponential)
        throw StructuralError("fiber_series(): expected a stationary exponential sequence");
    const auto moments = exponential_pairings(spec.term(0), truncation);
    const std::size_t fibers = static_cast<std::size_t>(moments.front().payload().rows());
    std::vector<ScalarSeries> out;
    out.reserve(fibers);
    std::vector<Complex> values(truncation + 1);
    for (std::size_t f = 0; f < fibers; ++f) {
        for (std::size_t n = 0; n <= truncation; ++n) values[n] = fiber_value(moments[n], f);
        out.push_back(inverse_coefficients(values, truncation));
    }
    return out;
}

FamilyClassification fiber_classification(const MeasureFamily& family, std::size_t truncation, double tol) {
    if (truncation == 0) throw ValidationError("fiber_classification(): truncation must be >= 1");
    FamilyClassification result;
    result.effective = true;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& mu = family.fiber(i);
        const ScalarSeries series = measure_series(mu, truncation);
        FiberClassification fc;
        fc.index = i;
        fc.parameter = family.parameter_grid()[i];
        fc.sarason_sum = sarason_sum(series);
        fc.truncation = truncation_info(series);

        bool vanishing = true;
        for (std::size_t n = 1; n <= truncation && vanishing; ++n) vanishing = std::abs(series.moments[n]) <= tol;
        if (vanishing) {
            fc.verdict = FiberVerdict::LebesgueLike;
        } else if (std::abs(fc.sarason_sum - 1.0) <= tol) {
            fc.verdict = FiberVerdict::SingularLike;
        } else {
            fc.verdict = FiberVerdict::Obstructed;
            result.effective = false;
        }
        result.fibers.push_back(fc);
    }
    return result;
}

double kwapien_identity_check(AuxiliarySequence& aux, std::size_t n, std::size_t j) {
    if (j < 1 || j > n) throw ValidationError("kwapien_identity_check(): need 1 <= j <= n");
    const auto len = aux.spec().length();
    if (len && n >= *len)
        throw FrequencyOverflow("kwapien_identity_check(): n = " + std::to_string(n) + " exceeds the frequency bound");

    std::vector<AlgebraElement> moments;
    for (std::size_t m = 0; m <= n; ++m) moments.push_back(inner(aux.term(0), aux.term(m)));
    const OperatorSeries series = inverse_coefficients(moments, n);

    const ModuleVector ej = aux.term(j);
    ModuleVector difference = reconstruct_partial(aux, ej, n) - ej;
    for (std::size_t k = 1; k <= j; ++k) {
        ModuleVector block = ModuleVector::zero(ej.descriptor());
        for (std::size_t m = 0; m <= n + k - j; ++m) add_scaled(block, series.coefficients[m], aux.term(m + j - k));
        subtract_scaled(difference, inner(aux.term(k), aux.term(0)), block);
    }
    return module_norm(difference);
}

double kwapien_identity_check(const SequenceSpec& spec, std::size_t n, std::size_t j) {
    AuxiliarySequence aux(spec);
    return kwapien_identity_check(aux, n, j);
}

const char* to_string(FiberVerdict verdict) noexcept {
    switch (verdict) {
        case FiberVerdict::SingularLike: return "SingularLike";
        case FiberVerdict::LebesgueLike: return "LebesgueLike";
        case FiberVerdict::Obstructed: return "Obstructed";
    }
    return "Obstructed";
}

}  // namespace kaczmod
