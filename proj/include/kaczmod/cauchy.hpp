#pragma once

// Cauchy transform, the inner function b = 1 - 1/C_mu(1), and the normalized
// Cauchy transform V f = sum <f, g_n> w^n as truncated power series. H^2
// pairings are coefficientwise truncated sums; the family case is fiberwise.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kaczmod/algebra.hpp"
#include "kaczmod/csmodule.hpp"
#include "kaczmod/kaczmarz.hpp"
#include "kaczmod/measures.hpp"

namespace kaczmod {

/// Coefficients b_0..b_N per fiber: an (N+1) x fibers matrix.
struct PowerSeries {
    Eigen::MatrixXcd coefficients;

    std::size_t truncation() const noexcept { return static_cast<std::size_t>(coefficients.rows()) - 1; }
    std::size_t fibers() const noexcept { return static_cast<std::size_t>(coefficients.cols()); }
    Complex at(std::size_t n, std::size_t fiber = 0) const {
        return coefficients(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(fiber));
    }
    /// sum_{n<=N} |b_n(x)|^2.
    double h2_norm_squared(std::size_t fiber = 0) const;
};

/// Evaluation points inside the disk, |w| <= r_max <= 0.95.
struct DiskSample {
    std::vector<Complex> points;
    double r_max = 0.0;

    /// Deterministic sunflower layout: count points filling the disk of radius r_max.
    static DiskSample spiral(std::size_t count, double r_max);
};

/// [C_mu f](w) = int f dmu / (1 - w e^{-2 pi i x}) for the trig polynomial
/// f = sum_n a_n e^{2 pi i n x}. Throws DomainError when |w| >= 1.
Complex cauchy_transform(const MeasureModel& mu, std::span<const Complex> trig_coefficients, Complex w);
/// f in AtomicL2 (its own measure) or a single-fiber TrigModule (its fiber measure).
Complex cauchy_transform(const ModuleVector& f, Complex w);

/// b(w) = 1 - 1/[C_mu 1](w).
Complex herglotz_b(const MeasureModel& mu, Complex w);

/// max over the sample of |(1+b)/(1-b) - int (1 + w e^{-2 pi i x})/(1 - w e^{-2 pi i x}) dmu|.
double herglotz_residual(const MeasureModel& mu, const DiskSample& sample);

/// Taylor coefficients b_0..b_N of herglotz_b, read off by a discrete Fourier
/// transform on a circle inside the disk (independent of the moment recursion).
std::vector<Complex> herglotz_taylor(const MeasureModel& mu, std::size_t truncation);

/// max_{1<=n<=N} |b_n + c_n|: the Taylor coefficients against the inverse moment
/// series under the convention b_n = -c_n.
double inner_coefficient_check(const MeasureModel& mu, std::size_t truncation);

/// Coefficient n is <f, g_n>, fiber-valued for a family. The algebra must be commutative.
PowerSeries normalized_cauchy(const SequenceSpec& spec, const ModuleVector& f, std::size_t truncation);
PowerSeries normalized_cauchy(AuxiliarySequence& aux, const ModuleVector& f, std::size_t truncation);

/// sup over fibers of |<f,f>(x) - sum_{n<=N} |<f,g_n>(x)|^2|.
double isometry_defect(const SequenceSpec& spec, const ModuleVector& f, std::size_t truncation);

/// max over m <= M and fibers of |sum_n S_n(x) conj((b^x w^m)_n)|, S = V f
/// truncated at N and b^x_n = -c_n(x).
double model_space_residual(const SequenceSpec& spec, const ModuleVector& f, std::size_t truncation,
                            std::size_t test_degree);

/// Coefficient n = <f, frame[n]>, n = 0..N.
PowerSeries analysis_operator(std::span<const ModuleVector> frame, const ModuleVector& f, std::size_t truncation);

/// max_{n<=n_max} ||T g_n - g_{n+1}|| with T f = e_1 f - <e_1 f, e_0> e_0.
double shift_orbit_residual(const SequenceSpec& spec, std::size_t n_max);

}  // namespace kaczmod
