#pragma once

#include <stdexcept>
#include <string>

namespace kaczmod {

/// Operands live in incompatible algebras or modules.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A value violates a documented invariant (weights, unit vectors, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation outside the domain of an analytic formula (|w| >= 1, poles).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A finite sequence has no term with the requested index.
class SequenceExhausted : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A trigonometric realization cannot hold the requested frequency.
class FrequencyOverflow : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// The frame operator of a family is not invertible.
class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(const std::string& what, double condition_number)
        : std::runtime_error(what), condition_number_(condition_number) {}

    double condition_number() const noexcept { return condition_number_; }

private:
    double condition_number_;
};

}  // namespace kaczmod
