#include "kaczmod/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaczmod/errors.hpp"

namespace kaczmod {

AlgebraDescriptor AlgebraDescriptor::matrix(std::size_t dimension) {
    if (dimension == 0) throw ValidationError("matrix algebra dimension must be >= 1");
    return AlgebraDescriptor(AlgebraKind::Matrix, dimension);
}

AlgebraDescriptor AlgebraDescriptor::sampled(std::size_t grid_size) {
    if (grid_size == 0) throw ValidationError("sampled algebra grid size must be >= 1");
    return AlgebraDescriptor(AlgebraKind::SampledFunction, grid_size);
}

namespace {

Eigen::Index rows_of(const AlgebraDescriptor& d) { return static_cast<Eigen::Index>(d.size()); }
Eigen::Index cols_of(const AlgebraDescriptor& d) { return d.is_matrix() ? static_cast<Eigen::Index>(d.size()) : 1; }

}  // namespace

AlgebraElement::AlgebraElement(AlgebraDescriptor descriptor, Eigen::MatrixXcd payload)
    : descriptor_(descriptor), payload_(std::move(payload)) {
    if (payload_.rows() != rows_of(descriptor_) || payload_.cols() != cols_of(descriptor_))
        throw ValidationError("algebra element payload shape " + std::to_string(payload_.rows()) + "x" +
                              std::to_string(payload_.cols()) + " does not match its descriptor");
    if (!payload_.allFinite()) throw ValidationError("algebra element has non-finite entries");
}

AlgebraElement AlgebraElement::zero(AlgebraDescriptor descriptor) {
    return trusted(descriptor, Eigen::MatrixXcd::Zero(rows_of(descriptor), cols_of(descriptor)));
}

AlgebraElement AlgebraElement::identity(AlgebraDescriptor descriptor) { return constant(descriptor, 1.0); }

AlgebraElement AlgebraElement::constant(AlgebraDescriptor descriptor, Complex lambda) {
    if (descriptor.is_matrix())
        return trusted(descriptor, lambda * Eigen::MatrixXcd::Identity(rows_of(descriptor), rows_of(descriptor)));
    return trusted(descriptor, Eigen::MatrixXcd::Constant(rows_of(descriptor), 1, lambda));
}

AlgebraElement AlgebraElement::sampled(std::span<const Complex> values) {
    Eigen::MatrixXcd payload(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) payload(static_cast<Eigen::Index>(i), 0) = values[i];
    return AlgebraElement(AlgebraDescriptor::sampled(values.size()), std::move(payload));
}

AlgebraElement AlgebraElement::scalar(Complex value) {
    Eigen::MatrixXcd payload(1, 1);
    payload(0, 0) = value;
    return AlgebraElement(AlgebraDescriptor::matrix(1), std::move(payload));
}

void require_same_algebra(const AlgebraElement& a, const AlgebraElement& b) {
    if (!(a.descriptor() == b.descriptor()))
        throw StructuralError("algebra descriptor mismatch");
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_algebra(a, b);
    return AlgebraElement::trusted(a.descriptor(), a.payload() + b.payload());
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_algebra(a, b);
    return AlgebraElement::trusted(a.descriptor(), a.payload() - b.payload());
}

AlgebraElement operator-(const AlgebraElement& a) { return AlgebraElement::trusted(a.descriptor(), -a.payload()); }

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_algebra(a, b);
    if (a.descriptor().is_matrix()) return AlgebraElement::trusted(a.descriptor(), a.payload() * b.payload());
    return AlgebraElement::trusted(a.descriptor(), a.payload().cwiseProduct(b.payload()));
}

AlgebraElement operator*(Complex lambda, const AlgebraElement& a) {
    return AlgebraElement::trusted(a.descriptor(), lambda * a.payload());
}

AlgebraElement& operator+=(AlgebraElement& a, const AlgebraElement& b) { return a = a + b; }
AlgebraElement& operator-=(AlgebraElement& a, const AlgebraElement& b) { return a = a - b; }

AlgebraElement adjoint(const AlgebraElement& a) {
    if (a.descriptor().is_matrix()) return AlgebraElement::trusted(a.descriptor(), a.payload().adjoint());
    return AlgebraElement::trusted(a.descriptor(), a.payload().conjugate());
}

AlgebraElement arithmetic(const AlgebraElement& a, const AlgebraElement& b, ArithmeticOp op, Complex lambda) {
    switch (op) {
        case ArithmeticOp::Add: return a + b;
        case ArithmeticOp::Sub: return a - b;
        case ArithmeticOp::Mul: return a * b;
        case ArithmeticOp::AdjointOfFirst: return adjoint(a);
        case ArithmeticOp::ScalarMul: return lambda * a;
    }
    throw StructuralError("unknown arithmetic op");
}

double norm(const AlgebraElement& a) {
    const auto& p = a.payload();
    if (!a.descriptor().is_matrix()) return p.size() == 0 ? 0.0 : p.cwiseAbs().maxCoeff();
    if (p.rows() == 1) return std::abs(p(0, 0));
    // Largest eigenvalue of a* a; deterministic Hermitian solver, no estimators.
    const Eigen::MatrixXcd gram = p.adjoint() * p;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

bool is_positive(const AlgebraElement& a, double tol) {
    const auto& p = a.payload();
    if (!a.descriptor().is_matrix()) {
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            if (std::abs(p(i, 0).imag()) > tol || p(i, 0).real() < -tol) return false;
        }
        return true;
    }
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    const Eigen::MatrixXcd hermitian = 0.5 * (p + p.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

}  // namespace kaczmod
