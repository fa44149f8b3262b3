#include "kaczmod/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kaczmod/errors.hpp"

namespace kaczmod {

Complex unit_phase(double turns) {
    double r = turns - std::floor(turns);
    if (r >= 1.0) r = 0.0;
    const double quarters = 4.0 * r;
    if (quarters == std::floor(quarters)) {
        switch (static_cast<int>(quarters)) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
            default: break;
        }
    }
    const double angle = 2.0 * std::numbers::pi * r;
    return {std::cos(angle), std::sin(angle)};
}

namespace {

void validate_atoms(const std::vector<Atom>& atoms) {
    if (atoms.empty()) throw ValidationError("atoms: atomic measure needs at least one atom");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& a = atoms[i];
        if (!std::isfinite(a.position) || a.position < 0.0 || a.position >= 1.0)
            throw ValidationError("atoms: position " + std::to_string(a.position) + " outside [0,1)");
        if (!std::isfinite(a.weight) || a.weight <= 0.0)
            throw ValidationError("weights: atom weight must be positive");
        for (std::size_t j = 0; j < i; ++j) {
            if (atoms[j].position == a.position) throw ValidationError("atoms: positions must be pairwise distinct");
        }
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError("weights: atom weights sum to " + std::to_string(total) + ", expected 1");
}

Complex atomic_moment(std::span<const Atom> atoms, long n) {
    Complex sum = 0.0;
    for (const auto& a : atoms) sum += a.weight * std::conj(unit_phase(static_cast<double>(n) * a.position));
    return sum;
}

}  // namespace

MeasureModel MeasureModel::atomic(std::vector<Atom> atoms) {
    validate_atoms(atoms);
    return MeasureModel(MeasureKind::Atomic, 0.0, std::move(atoms));
}

MeasureModel MeasureModel::dirac(double position) { return atomic({{position, 1.0}}); }

MeasureModel MeasureModel::lebesgue() { return MeasureModel(MeasureKind::Lebesgue, 1.0, {}); }

MeasureModel MeasureModel::mixture(double alpha, std::vector<Atom> atoms) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha: mixture weight must lie in (0,1)");
    validate_atoms(atoms);
    return MeasureModel(MeasureKind::Mixture, alpha, std::move(atoms));
}

Complex moment(const MeasureModel& mu, long n) {
    if (n < 0) throw ValidationError("moment: frequency must be >= 0");
    if (n == 0) return 1.0;
    switch (mu.kind()) {
        case MeasureKind::Atomic: return atomic_moment(mu.atoms(), n);
        case MeasureKind::Lebesgue: return 0.0;
        case MeasureKind::Mixture: {
            const double alpha = mu.lebesgue_weight();
            return alpha * 0.0 + (1.0 - alpha) * atomic_moment(mu.atoms(), n);
        }
    }
    return 0.0;
}

Complex fourier_coefficient(const MeasureModel& mu, long n) {
    return n >= 0 ? moment(mu, n) : std::conj(moment(mu, -n));
}

MeasureClass classify(const MeasureModel& mu) {
    switch (mu.kind()) {
        case MeasureKind::Atomic: return MeasureClass::Singular;
        case MeasureKind::Lebesgue: return MeasureClass::Lebesgue;
        case MeasureKind::Mixture: return MeasureClass::Neither;
    }
    return MeasureClass::Neither;
}

MeasureFamily::MeasureFamily(std::vector<double> parameter_grid, std::vector<MeasureModel> fibers,
                             double continuity_budget, std::size_t check_frequency, FamilyProvenance provenance)
    : grid_(std::move(parameter_grid)), fibers_(std::move(fibers)), provenance_(provenance) {
    if (fibers_.empty()) throw ValidationError("family: at least one fiber is required");
    if (grid_.size() != fibers_.size())
        throw ValidationError("family: parameter grid has " + std::to_string(grid_.size()) + " points but " +
                              std::to_string(fibers_.size()) + " fibers were given");
    if (!(continuity_budget >= 0.0)) throw ValidationError("family: continuity budget must be >= 0");

    witness_.max_frequency = check_frequency;
    witness_.budget = continuity_budget;
    for (std::size_t i = 0; i + 1 < fibers_.size(); ++i) {
        for (std::size_t n = 0; n <= check_frequency; ++n) {
            const double jump = std::abs(moment(fibers_[i], static_cast<long>(n)) -
                                         moment(fibers_[i + 1], static_cast<long>(n)));
            witness_.observed = std::max(witness_.observed, jump);
        }
    }
    if (witness_.observed > continuity_budget)
        throw ValidationError("family: adjacent-fiber moment jump " + std::to_string(witness_.observed) +
                              " exceeds the continuity budget " + std::to_string(continuity_budget));
}

MeasureFamily MeasureFamily::parametrized(std::vector<double> parameter_grid,
                                          const std::function<MeasureModel(double)>& measure_at,
                                          double continuity_budget, std::size_t check_frequency) {
    std::vector<MeasureModel> fibers;
    fibers.reserve(parameter_grid.size());
    for (double x : parameter_grid) fibers.push_back(measure_at(x));
    return MeasureFamily(std::move(parameter_grid), std::move(fibers), continuity_budget, check_frequency,
                         FamilyProvenance::Parametrized);
}

MeasureFamily MeasureFamily::single(MeasureModel mu) { return MeasureFamily({0.0}, {std::move(mu)}, 0.0, 0); }

Eigen::MatrixXcd family_moments(const MeasureFamily& family, std::size_t n_max) {
    Eigen::MatrixXcd table(static_cast<Eigen::Index>(family.size()), static_cast<Eigen::Index>(n_max + 1));
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t n = 0; n <= n_max; ++n)
            table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) =
                moment(family.fiber(i), static_cast<long>(n));
    }
    return table;
}

std::vector<double> linear_grid(double start, double stop, std::size_t m) {
    if (m == 0) throw ValidationError("grid: count must be >= 1");
    std::vector<double> grid(m, start);
    if (m == 1) return grid;
    for (std::size_t i = 0; i < m; ++i)
        grid[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(m - 1);
    grid.back() = stop;
    return grid;
}

}  // namespace kaczmod
