#pragma once

// Borel probability measures on [0,1) with closed-form Fourier moments, and
// weakly continuous families of them over a sampled parameter space.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kaczmod/algebra.hpp"

namespace kaczmod {

/// e^{2 pi i turns}; exact at multiples of a quarter turn.
Complex unit_phase(double turns);

struct Atom {
    double position;
    double weight;

    bool operator==(const Atom&) const = default;
};

enum class MeasureKind { Atomic, Lebesgue, Mixture };
enum class MeasureClass { Singular, Lebesgue, Neither };

/// Atomic, Lebesgue, or alpha * Lebesgue + (1 - alpha) * atomic.
class MeasureModel {
public:
    /// Atoms in [0,1), pairwise distinct, weights > 0 summing to 1 within 1e-12.
    static MeasureModel atomic(std::vector<Atom> atoms);
    static MeasureModel dirac(double position);
    static MeasureModel lebesgue();
    static MeasureModel mixture(double alpha, std::vector<Atom> atoms);

    MeasureKind kind() const noexcept { return kind_; }
    /// Mass of the Lebesgue component: 0, 1, or alpha.
    double lebesgue_weight() const noexcept { return lebesgue_weight_; }
    /// Atoms of the atomic component with their weights inside that component.
    std::span<const Atom> atoms() const noexcept { return atoms_; }

    bool operator==(const MeasureModel&) const = default;

private:
    MeasureModel(MeasureKind kind, double lebesgue_weight, std::vector<Atom> atoms)
        : kind_(kind), lebesgue_weight_(lebesgue_weight), atoms_(std::move(atoms)) {}

    MeasureKind kind_;
    double lebesgue_weight_;
    std::vector<Atom> atoms_;
};

/// mu^(n) = integral of e^{-2 pi i n y} d mu, for n >= 0. moment(mu, 0) == 1.
Complex moment(const MeasureModel& mu, long n);

/// Same as moment() for any integer n, using mu^(-n) = conj(mu^(n)).
Complex fourier_coefficient(const MeasureModel& mu, long n);

/// Structural classification by construction; no analytic detection.
MeasureClass classify(const MeasureModel& mu);

enum class FamilyProvenance { PerFiber, Parametrized };

/// Largest adjacent-fiber moment jump observed at construction, against the
/// budget the caller declared. Certified only at grid resolution.
struct ContinuityWitness {
    std::size_t max_frequency = 0;
    double budget = 0.0;
    double observed = 0.0;
};

class MeasureFamily {
public:
    /// Throws ValidationError when sizes differ or the witness exceeds the budget.
    MeasureFamily(std::vector<double> parameter_grid, std::vector<MeasureModel> fibers, double continuity_budget,
                  std::size_t check_frequency, FamilyProvenance provenance = FamilyProvenance::PerFiber);

    /// Samples a measure-valued function of the parameter on the grid.
    static MeasureFamily parametrized(std::vector<double> parameter_grid,
                                      const std::function<MeasureModel(double)>& measure_at,
                                      double continuity_budget, std::size_t check_frequency);

    /// A single fiber at parameter 0 (the trivial compact space).
    static MeasureFamily single(MeasureModel mu);

    std::size_t size() const noexcept { return fibers_.size(); }
    std::span<const double> parameter_grid() const noexcept { return grid_; }
    std::span<const MeasureModel> fibers() const noexcept { return fibers_; }
    const MeasureModel& fiber(std::size_t i) const { return fibers_.at(i); }
    FamilyProvenance provenance() const noexcept { return provenance_; }
    const ContinuityWitness& witness() const noexcept { return witness_; }

    bool operator==(const MeasureFamily& other) const { return grid_ == other.grid_ && fibers_ == other.fibers_; }

private:
    std::vector<double> grid_;
    std::vector<MeasureModel> fibers_;
    FamilyProvenance provenance_;
    ContinuityWitness witness_;
};

/// Rows are fibers, columns frequencies 0..n_max.
Eigen::MatrixXcd family_moments(const MeasureFamily& family, std::size_t n_max);

/// m equally spaced points from start to stop inclusive (a single point when m == 1).
std::vector<double> linear_grid(double start, double stop, std::size_t m);

}  // namespace kaczmod
