#pragma once

// Kaczmarz iteration in Hilbert C*-modules:
//
//   x_0 = <x, e_0> e_0,   x_n = x_{n-1} + <x - x_{n-1}, e_n> e_n,
//
// the auxiliary sequence g_0 = e_0, g_n = e_n - sum_{k<n} <e_n, e_k> g_k, and
// the identities tying them together (x_n = sum_{k<=n} <x, g_k> e_k and the
// telescoped defect <x,x> - sum <x,g_k><g_k,x> = <x - x_n, x - x_n>).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kaczmod/csmodule.hpp"

namespace kaczmod {

inline constexpr double kUnitVectorTol = 1e-9;

enum class SequenceKind { Explicit, StationaryExponential, Conjugated };

/// A sequence of unit vectors e_0, e_1, ... . Every produced term satisfies
/// <e_n, e_n> = I within 1e-9; violations fail loudly, terms are never renormalized.
class SequenceSpec {
public:
    /// A finite list, or its periodic extension when `periodic` is set.
    static SequenceSpec explicit_terms(std::vector<ModuleVector> terms, bool periodic);
    /// e_n = e^{2 pi i n y} on a TrigModule (n <= F) or AtomicL2.
    static SequenceSpec stationary_exponential(ModuleDescriptor descriptor);
    /// e_n = L(base_n) for an invertible complex-linear L on flat coordinates.
    static SequenceSpec conjugated(const SequenceSpec& base, Eigen::MatrixXcd map);

    SequenceKind kind() const noexcept;
    const ModuleDescriptor& descriptor() const noexcept;
    /// Throws SequenceExhausted / FrequencyOverflow past the end.
    ModuleVector term(std::size_t n) const;
    /// Number of available terms; nullopt when unbounded.
    std::optional<std::size_t> length() const;
    bool is_periodic() const noexcept;
    /// Terms of an explicit spec (one period when periodic).
    std::span<const ModuleVector> explicit_terms() const;
    const Eigen::MatrixXcd& conjugating_map() const;
    const SequenceSpec& base() const;

    struct Impl;

private:
    explicit SequenceSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

/// Memoized auxiliary sequence of a spec.
class AuxiliarySequence {
public:
    explicit AuxiliarySequence(SequenceSpec spec) : spec_(std::move(spec)) {}

    const SequenceSpec& spec() const noexcept { return spec_; }
    /// g_n, computing and caching g_0..g_n as needed.
    const ModuleVector& operator[](std::size_t n);
    /// e_n, cached.
    const ModuleVector& term(std::size_t n);
    std::size_t cached() const noexcept { return aux_.size(); }

private:
    SequenceSpec spec_;
    std::vector<ModuleVector> terms_;
    std::vector<ModuleVector> aux_;
};

/// g_0..g_n by the defining recursion.
std::vector<ModuleVector> auxiliary_sequence(const SequenceSpec& spec, std::size_t n);

class KaczmarzState {
public:
    /// A fresh state: no steps taken, approximation 0. With track_defect the
    /// state also maintains g_0..g_n and D_n = <x,x> - sum_{k<=n} <x,g_k><g_k,x>.
    KaczmarzState(SequenceSpec spec, ModuleVector target, bool track_defect = false);

    /// Advances to the next index.
    void step();

    const SequenceSpec& spec() const noexcept { return spec_; }
    const ModuleVector& target() const noexcept { return target_; }
    /// Number of steps taken; the current approximation is x_{steps()-1}.
    std::size_t steps() const noexcept { return residuals_.size(); }
    const ModuleVector& approximation() const noexcept { return current_; }
    /// ||x - x_k|| for k = 0..steps()-1.
    std::span<const double> residual_history() const noexcept { return residuals_; }
    /// ||<x - x_k, e_k>||_A for k = 0..steps()-1.
    std::span<const double> orthogonality_history() const noexcept { return orthogonality_; }
    /// D_k, populated only when tracking.
    std::span<const AlgebraElement> defect_history() const noexcept { return defects_; }
    bool tracks_defect() const noexcept { return aux_ != nullptr; }
    /// Cached g_0..g_{steps()-1} when tracking, otherwise empty.
    std::vector<ModuleVector> auxiliary_cache() const;

private:
    SequenceSpec spec_;
    ModuleVector target_;
    ModuleVector current_;
    std::vector<double> residuals_;
    std::vector<double> orthogonality_;
    std::vector<AlgebraElement> defects_;
    std::shared_ptr<AuxiliarySequence> aux_;
};

/// Value-semantics step: returns the advanced state.
KaczmarzState kaczmarz_step(KaczmarzState state);

/// sum_{k<=n} <x, g_k> e_k.
ModuleVector reconstruct_partial(const SequenceSpec& spec, const ModuleVector& x, std::size_t n);
ModuleVector reconstruct_partial(AuxiliarySequence& aux, const ModuleVector& x, std::size_t n);

/// D_n = <x,x> - sum_{k<=n} <x,g_k><g_k,x>. Stationary exponential specs use
/// the closed form g_k = sum_j c*_{k-j} e_j, other specs the recursion.
AlgebraElement parseval_defect(const SequenceSpec& spec, const ModuleVector& x, std::size_t n);
/// D_0..D_n.
std::vector<AlgebraElement> parseval_defect_history(const SequenceSpec& spec, const ModuleVector& x, std::size_t n);
/// D_0..D_n through the memoized recursion regardless of spec kind.
std::vector<AlgebraElement> parseval_defect_history(AuxiliarySequence& aux, const ModuleVector& x, std::size_t n);

/// ||(I - P_k) ... (I - P_0)|| with P_n(x) = <x, e_n> e_n, on a finite realization.
double periodic_contraction_norm(std::span<const ModuleVector> vectors);

struct RunResult {
    std::size_t iterations = 0;
    std::vector<double> residual_history;
    bool converged = false;
};

/// Iterates until ||x - x_n|| <= tol or max_iter steps; stalling is a result.
RunResult run_to_tolerance(const SequenceSpec& spec, const ModuleVector& x, double tol, std::size_t max_iter);

/// Check of A-linear independence of e_0..e_{n-1} and of pairwise
/// orthogonality in a finite realization. A probe, not a certificate: the
/// verdict rests on a floating-point rank threshold (1e-8).
struct BasisProbe {
    bool independent = false;
    /// min ||sum c_k e_k|| over coefficient rows of unit Frobenius norm: the
    /// smaller of the seeded random trials and the exact minimum read off the
    /// block Gram matrix [<e_i, e_j>].
    double min_combination_norm = 0.0;
    double max_cross_inner = 0.0;
};

BasisProbe orthonormal_basis_probe(const SequenceSpec& spec, std::size_t n, std::uint64_t seed,
                                   std::size_t trials = 16);

/// sup over seeded random targets of ||D_n||; the per-target witness of effectivity.
double effectivity_probe(const SequenceSpec& spec, std::size_t n, std::uint64_t seed, std::size_t probes = 10,
                         std::size_t degree = 4);

}  // namespace kaczmod
