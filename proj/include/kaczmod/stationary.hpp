#pragma once

// Stationary sequences e_n = T^n e_0: inversion of the moment series
// sum <e_0, e_n> z^n in A[[z]], the Sarason sum, the effectivity condition
//
//   <e_k, e_0> (sum_{n>=1} c_n c_n*) <e_0, e_k> = <e_k, e_0><e_0, e_k>,  k > 0,
//
// and fiberwise classification of commutative (C(X)-valued) moment data.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kaczmod/algebra.hpp"
#include "kaczmod/kaczmarz.hpp"
#include "kaczmod/measures.hpp"

namespace kaczmod {

/// c_0..c_N with c_0 = I and c_n = -sum_{k<n} c_k <e_0, e_{n-k}>, together
/// with the moments <e_0, e_n> it was built from.
template <class T>
struct BasicCoefficientSeries {
    std::vector<T> coefficients;
    std::vector<T> moments;

    std::size_t truncation() const noexcept { return coefficients.size() - 1; }
};

using ScalarSeries = BasicCoefficientSeries<Complex>;
using OperatorSeries = BasicCoefficientSeries<AlgebraElement>;

/// Needs moments[0..N]; throws ValidationError unless moments[0] == 1 within 1e-12.
ScalarSeries inverse_coefficients(std::span<const Complex> moments, std::size_t truncation);
OperatorSeries inverse_coefficients(std::span<const AlgebraElement> moments, std::size_t truncation);

/// The series of a single measure, from its closed-form moments.
ScalarSeries measure_series(const MeasureModel& mu, std::size_t truncation);

/// max_n || c_n + sum_{k<n} c_k <e_0, e_{n-k}> || over 1 <= n <= N.
double recursion_residual(const ScalarSeries& series);
double recursion_residual(const OperatorSeries& series);

/// Largest deviation of (sum c_n z^n)(sum <e_0,e_n> z^n) from 1 up to degree N,
/// taking both orders of the product (left and right inverse).
double cauchy_product_residual(const ScalarSeries& series);
double cauchy_product_residual(const OperatorSeries& series);

/// sum_{n=1}^N |c_n|^2, resp. sum_{n=1}^N c_n c_n*.
double sarason_sum(const ScalarSeries& series);
AlgebraElement sarason_sum(const OperatorSeries& series);

/// Context for a truncated infinite sum. A tail bound is given only when the
/// last coefficients vanish or decay with a constant geometric ratio.
struct TruncationInfo {
    std::size_t truncation = 0;
    std::optional<double> tail_bound;
    bool truncation_limited = true;
};

TruncationInfo truncation_info(const ScalarSeries& series);

struct EffectivityReport {
    bool holds = false;
    std::size_t worst_k = 0;
    double worst_residual = 0.0;
    /// Condition probed for k = 1..probe_range.
    std::size_t probe_range = 0;
    TruncationInfo truncation;
};

/// Probes the condition for k = 1..N with the Sarason sum truncated at N.
EffectivityReport effectivity_condition(const SequenceSpec& spec, std::size_t truncation, double tol);
/// Same, from algebra-valued moments <e_0, e_n> (n = 0..N), e.g. an operator orbit.
EffectivityReport effectivity_condition(std::span<const AlgebraElement> moments, std::size_t truncation, double tol);

/// Per-fiber scalar series of a stationary exponential spec: entry x is the
/// series of the moments <e_0, e_n>(x).
std::vector<ScalarSeries> fiber_series(const SequenceSpec& spec, std::size_t truncation);

enum class FiberVerdict { SingularLike, LebesgueLike, Obstructed };

struct FiberClassification {
    std::size_t index = 0;
    double parameter = 0.0;
    FiberVerdict verdict = FiberVerdict::Obstructed;
    double sarason_sum = 0.0;
    TruncationInfo truncation;
};

struct FamilyClassification {
    std::vector<FiberClassification> fibers;
    /// No fiber obstructed.
    bool effective = false;
};

/// LebesgueLike if moments 1..N vanish within tol, SingularLike if the
/// Sarason sum is within tol of 1, Obstructed otherwise.
FamilyClassification fiber_classification(const MeasureFamily& family, std::size_t truncation, double tol);

/// Module norm of
///   sum_{k<=n} <e_j, g_k> e_k - e_j - sum_{k=1}^{j} <e_k, e_0> sum_{m=0}^{n+k-j} c_m e_{m+j-k},
/// for 1 <= j <= n (n <= F on a TrigModule).
double kwapien_identity_check(const SequenceSpec& spec, std::size_t n, std::size_t j);
double kwapien_identity_check(AuxiliarySequence& aux, std::size_t n, std::size_t j);

const char* to_string(FiberVerdict verdict) noexcept;

}  // namespace kaczmod
