#pragma once

// Concrete unital C*-algebras: complex d x d matrices and complex functions
// sampled on a finite grid (the commutative case C(X) with X finite).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kaczmod {

using Complex = std::complex<double>;

inline constexpr double kDefaultPositivityTol = 1e-10;

enum class AlgebraKind { Matrix, SampledFunction };

class AlgebraDescriptor {
public:
    static AlgebraDescriptor matrix(std::size_t dimension);
    static AlgebraDescriptor sampled(std::size_t grid_size);

    AlgebraKind kind() const noexcept { return kind_; }
    bool is_matrix() const noexcept { return kind_ == AlgebraKind::Matrix; }
    bool is_commutative() const noexcept { return kind_ == AlgebraKind::SampledFunction || size_ == 1; }

    /// d for Matrix, m for SampledFunction.
    std::size_t size() const noexcept { return size_; }
    /// Number of complex entries in a payload.
    std::size_t payload_size() const noexcept { return is_matrix() ? size_ * size_ : size_; }

    bool operator==(const AlgebraDescriptor&) const = default;

private:
    AlgebraDescriptor(AlgebraKind kind, std::size_t size) : kind_(kind), size_(size) {}

    AlgebraKind kind_;
    std::size_t size_;
};

/// An element of a concrete algebra. Matrix payloads are d x d; sampled
/// payloads are stored as an m x 1 column of values.
class AlgebraElement {
public:
    /// Throws ValidationError on shape mismatch or non-finite entries.
    AlgebraElement(AlgebraDescriptor descriptor, Eigen::MatrixXcd payload);

    static AlgebraElement zero(AlgebraDescriptor descriptor);
    static AlgebraElement identity(AlgebraDescriptor descriptor);
    /// lambda * identity.
    static AlgebraElement constant(AlgebraDescriptor descriptor, Complex lambda);
    static AlgebraElement sampled(std::span<const Complex> values);
    /// A 1 x 1 matrix, the scalar algebra.
    static AlgebraElement scalar(Complex value);

    const AlgebraDescriptor& descriptor() const noexcept { return descriptor_; }
    const Eigen::MatrixXcd& payload() const noexcept { return payload_; }

    /// Sampled value at grid index i, or the (i, i) entry of a matrix.
    Complex at(std::size_t i) const { return descriptor_.is_matrix() ? payload_(i, i) : payload_(i, 0); }

    /// Unchecked construction for results of closed arithmetic.
    static AlgebraElement trusted(AlgebraDescriptor descriptor, Eigen::MatrixXcd payload) {
        return AlgebraElement(descriptor, std::move(payload), Trusted{});
    }

private:
    struct Trusted {};
    AlgebraElement(AlgebraDescriptor descriptor, Eigen::MatrixXcd payload, Trusted)
        : descriptor_(descriptor), payload_(std::move(payload)) {}

    AlgebraDescriptor descriptor_;
    Eigen::MatrixXcd payload_;
};

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Complex lambda, const AlgebraElement& a);
AlgebraElement& operator+=(AlgebraElement& a, const AlgebraElement& b);
AlgebraElement& operator-=(AlgebraElement& a, const AlgebraElement& b);

/// Conjugate transpose (Matrix) or pointwise conjugation (SampledFunction).
AlgebraElement adjoint(const AlgebraElement& a);

enum class ArithmeticOp { Add, Sub, Mul, AdjointOfFirst, ScalarMul };

/// Single dispatch point over the algebra operations; `b` is ignored by the
/// unary operations and `lambda` is used only by ScalarMul.
AlgebraElement arithmetic(const AlgebraElement& a, const AlgebraElement& b, ArithmeticOp op,
                          Complex lambda = Complex(1.0));

inline AlgebraElement identity(AlgebraDescriptor descriptor) { return AlgebraElement::identity(descriptor); }

/// C*-norm: operator 2-norm for matrices, sup of moduli for sampled functions.
double norm(const AlgebraElement& a);

/// Hermitian (within tol) with spectrum >= -tol.
bool is_positive(const AlgebraElement& a, double tol = kDefaultPositivityTol);

/// Throws StructuralError unless a and b share a descriptor.
void require_same_algebra(const AlgebraElement& a, const AlgebraElement& b);

}  // namespace kaczmod
