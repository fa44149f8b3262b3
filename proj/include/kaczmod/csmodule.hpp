#pragma once

// Concrete Hilbert C*-module realizations. Every vector is stored as a flat
// complex coordinate vector whose layout is fixed by its descriptor:
//
//   FreeModule   rank m over M_d : m column-major d x d blocks
//   FreeModule   rank m over C(X): m blocks of |X| samples
//   AtomicL2     N atoms         : the values at the atoms
//   TrigModule   (F, |X|)        : (F+1) x |X| column-major, entry (n, x) = a_n(x)
//   GridHilbert  (m, d)          : d x m column-major, column x = f(x) in C^d
//
// so complex-linear maps on a module are plain matrices on these coordinates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kaczmod/algebra.hpp"
#include "kaczmod/measures.hpp"

namespace kaczmod {

enum class ModuleKind { Free, AtomicL2, Trig, GridHilbert };

class ModuleDescriptor {
public:
    static ModuleDescriptor free_module(AlgebraDescriptor algebra, std::size_t rank);
    /// L^2(mu) for an atomic mu, identified with C^N under the weighted inner product.
    static ModuleDescriptor atomic_l2(MeasureModel mu);
    /// Finitely supported part (frequencies 0..F) of WC(X, L^2(mu_x)).
    static ModuleDescriptor trig_module(MeasureFamily family, std::size_t max_frequency);
    /// C(X, C^d) over a grid of m points.
    static ModuleDescriptor grid_hilbert(std::size_t grid_size, std::size_t fiber_dim);

    ModuleKind kind() const noexcept;
    /// The algebra the inner product takes values in.
    AlgebraDescriptor algebra() const noexcept;
    std::size_t flat_size() const noexcept;

    std::size_t rank() const;            // Free
    const MeasureModel& measure() const; // AtomicL2
    const MeasureFamily& family() const; // Trig
    std::size_t max_frequency() const;   // Trig
    std::size_t grid_size() const;       // Trig (fibers) and GridHilbert
    std::size_t fiber_dim() const;       // GridHilbert

    bool operator==(const ModuleDescriptor& other) const;

    struct Impl;
    const Impl& impl() const noexcept { return *impl_; }

private:
    explicit ModuleDescriptor(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

class ModuleVector {
public:
    /// Throws ValidationError on size mismatch or non-finite coordinates.
    ModuleVector(ModuleDescriptor descriptor, Eigen::VectorXcd flat);

    static ModuleVector zero(const ModuleDescriptor& descriptor);
    static ModuleVector free(const ModuleDescriptor& descriptor, std::span<const AlgebraElement> components);
    static ModuleVector atomic_values(const ModuleDescriptor& descriptor, std::span<const Complex> values);
    /// coefficients is (F+1) x |X|.
    static ModuleVector trig(const ModuleDescriptor& descriptor, const Eigen::MatrixXcd& coefficients);
    /// Same trig polynomial in every fiber.
    static ModuleVector trig_constant(const ModuleDescriptor& descriptor, std::span<const Complex> coefficients);
    /// values is d x m, column x = f(x).
    static ModuleVector grid(const ModuleDescriptor& descriptor, const Eigen::MatrixXcd& values);

    const ModuleDescriptor& descriptor() const noexcept { return descriptor_; }
    const Eigen::VectorXcd& flat() const noexcept { return flat_; }

    AlgebraElement component(std::size_t i) const;  // Free
    /// (F+1) x |X| coefficient view (Trig) or d x m value view (GridHilbert).
    Eigen::Map<const Eigen::MatrixXcd> as_matrix() const;

    ModuleVector& operator+=(const ModuleVector& other);
    ModuleVector& operator-=(const ModuleVector& other);

    static ModuleVector trusted(ModuleDescriptor descriptor, Eigen::VectorXcd flat) {
        return ModuleVector(std::move(descriptor), std::move(flat), Trusted{});
    }

private:
    struct Trusted {};
    ModuleVector(ModuleDescriptor descriptor, Eigen::VectorXcd flat, Trusted)
        : descriptor_(std::move(descriptor)), flat_(std::move(flat)) {}

    ModuleDescriptor descriptor_;
    Eigen::VectorXcd flat_;
};

ModuleVector operator+(const ModuleVector& f, const ModuleVector& g);
ModuleVector operator-(const ModuleVector& f, const ModuleVector& g);
ModuleVector operator*(Complex lambda, const ModuleVector& f);
/// Left module action a . f.
ModuleVector operator*(const AlgebraElement& a, const ModuleVector& f);

/// target -= a . v, in place.
void subtract_scaled(ModuleVector& target, const AlgebraElement& a, const ModuleVector& v);
/// target += a . v, in place.
void add_scaled(ModuleVector& target, const AlgebraElement& a, const ModuleVector& v);

void require_same_module(const ModuleVector& f, const ModuleVector& g);

/// Algebra-valued inner product, linear in the first argument.
AlgebraElement inner(const ModuleVector& f, const ModuleVector& g);

/// sqrt(|| <f, f> ||_A).
double module_norm(const ModuleVector& f);

/// e^{2 pi i n y}: TrigModule with n <= F, or AtomicL2.
ModuleVector exponential_vector(const ModuleDescriptor& descriptor, std::size_t n);

/// <x, e_j> for j = 0..n_max, without materializing the exponentials.
std::vector<AlgebraElement> exponential_pairings(const ModuleVector& x, std::size_t n_max);

/// || <e, e> - I ||_A <= tol.
bool is_unit_vector(const ModuleVector& e, double tol = 1e-9);

/// Multiplication by e^{2 pi i y}; on a TrigModule the top frequency must be free.
ModuleVector multiply_by_exponential(const ModuleVector& f);

struct FrameSolution {
    ModuleVector solution;
    double condition_number;
    /// || S(solution) - x ||.
    double residual;
};

/// Solves S(y) = x for the finite frame operator S(f) = sum_n <f, e_n> e_n by
/// assembling S on flat coordinates. Throws RankDeficientError if S is singular.
FrameSolution frame_operator_solve(std::span<const ModuleVector> vectors, const ModuleVector& x);

/// S(f) = sum_n <f, e_n> e_n.
ModuleVector frame_operator_apply(std::span<const ModuleVector> vectors, const ModuleVector& f);

/// Hermitian G with trace<f, g> = g^H G f on flat coordinates (trace for
/// matrix algebras, sum over samples for C(X)).
Eigen::MatrixXcd trace_gram(const ModuleDescriptor& descriptor);

/// Matrix of a complex-linear map on flat coordinates.
Eigen::MatrixXcd flatten_map(const ModuleDescriptor& descriptor,
                             const std::function<ModuleVector(const ModuleVector&)>& map);

ModuleVector apply_flat(const Eigen::MatrixXcd& map, const ModuleVector& f);

/// Operator norm of an A-linear map given on flat coordinates. For such maps
/// the module operator norm equals the norm induced by trace_gram(), which
/// must be positive definite (not the case for TrigModule).
double module_operator_norm(const ModuleDescriptor& descriptor, const Eigen::MatrixXcd& map);

/// Adjoint of a complex-linear map with respect to trace_gram(): G^{-1} L^H G.
/// For AtomicL2 this is the Hilbert-space adjoint.
Eigen::MatrixXcd module_adjoint_map(const ModuleDescriptor& descriptor, const Eigen::MatrixXcd& map);

/// Pseudo-random vector. TrigModule vectors are trig polynomials of degree
/// <= min(degree, F) with coefficients that vary across fibers.
ModuleVector random_vector(const ModuleDescriptor& descriptor, std::uint64_t seed, std::size_t degree = 4);

/// Pseudo-random d x d unitary (QR of a complex Gaussian matrix).
Eigen::MatrixXcd random_unitary(std::size_t d, std::uint64_t seed);

}  // namespace kaczmod
