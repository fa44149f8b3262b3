#include "kaczmod/kaczmarz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "kaczmod/errors.hpp"
#include "kaczmod/stationary.hpp"

namespace kaczmod {

struct SequenceSpec::Impl {
    SequenceKind kind;
    ModuleDescriptor descriptor;
    std::vector<ModuleVector> terms;
    bool periodic = false;
    std::optional<SequenceSpec> base;
    Eigen::MatrixXcd map;
};

namespace {

void require_unit(const ModuleVector& e, std::size_t n) {
    if (!is_unit_vector(e, kUnitVectorTol))
        throw ValidationError("sequence term " + std::to_string(n) + " is not a unit vector: ||<e,e> - I|| = " +
                              std::to_string(norm(inner(e, e) - identity(e.descriptor().algebra()))));
}

}  // namespace

SequenceSpec SequenceSpec::explicit_terms(std::vector<ModuleVector> terms, bool periodic) {
    if (terms.empty()) throw ValidationError("explicit sequence needs at least one term");
    for (std::size_t n = 0; n < terms.size(); ++n) {
        require_same_module(terms[n], terms.front());
        require_unit(terms[n], n);
    }
    ModuleDescriptor d = terms.front().descriptor();
    return SequenceSpec(std::make_shared<const Impl>(
        Impl{SequenceKind::Explicit, std::move(d), std::move(terms), periodic, std::nullopt, {}}));
}

SequenceSpec SequenceSpec::stationary_exponential(ModuleDescriptor descriptor) {
    if (descriptor.kind() != ModuleKind::Trig && descriptor.kind() != ModuleKind::AtomicL2)
        throw StructuralError("stationary exponential sequences need a TrigModule or AtomicL2 descriptor");
    return SequenceSpec(std::make_shared<const Impl>(
        Impl{SequenceKind::StationaryExponential, std::move(descriptor), {}, false, std::nullopt, {}}));
}

SequenceSpec SequenceSpec::conjugated(const SequenceSpec& base, Eigen::MatrixXcd map) {
    const auto n = static_cast<Eigen::Index>(base.descriptor().flat_size());
    if (map.rows() != n || map.cols() != n) throw ValidationError("conjugating map has the wrong shape");
    if (!map.allFinite() || !map.fullPivLu().isInvertible())
        throw ValidationError("conjugating map must be invertible");
    SequenceSpec spec(std::make_shared<const Impl>(
        Impl{SequenceKind::Conjugated, base.descriptor(), {}, false, base, std::move(map)}));
    (void)spec.term(0);
    return spec;
}

SequenceKind SequenceSpec::kind() const noexcept { return impl_->kind; }
const ModuleDescriptor& SequenceSpec::descriptor() const noexcept { return impl_->descriptor; }
bool SequenceSpec::is_periodic() const noexcept { return impl_->periodic; }

std::span<const ModuleVector> SequenceSpec::explicit_terms() const {
    if (impl_->kind != SequenceKind::Explicit) throw StructuralError("not an explicit sequence");
    return impl_->terms;
}

const Eigen::MatrixXcd& SequenceSpec::conjugating_map() const {
    if (impl_->kind != SequenceKind::Conjugated) throw StructuralError("not a conjugated sequence");
    return impl_->map;
}

const SequenceSpec& SequenceSpec::base() const {
    if (impl_->kind != SequenceKind::Conjugated) throw StructuralError("not a conjugated sequence");
    return *impl_->base;
}

std::optional<std::size_t> SequenceSpec::length() const {
    switch (impl_->kind) {
        case SequenceKind::Explicit:
            if (impl_->periodic) return std::nullopt;
            return impl_->terms.size();
        case SequenceKind::StationaryExponential:
            if (impl_->descriptor.kind() == ModuleKind::Trig) return impl_->descriptor.max_frequency() + 1;
            return std::nullopt;
        case SequenceKind::Conjugated: return impl_->base->length();
    }
    return std::nullopt;
}

ModuleVector SequenceSpec::term(std::size_t n) const {
    switch (impl_->kind) {
        case SequenceKind::Explicit: {
            const auto& terms = impl_->terms;
            if (impl_->periodic) return terms[n % terms.size()];
            if (n >= terms.size())
                throw SequenceExhausted("explicit sequence has " + std::to_string(terms.size()) +
                                        " terms; index " + std::to_string(n) + " requested");
            return terms[n];
        }
        case SequenceKind::StationaryExponential: return exponential_vector(impl_->descriptor, n);
        case SequenceKind::Conjugated: {
            ModuleVector e = apply_flat(impl_->map, impl_->base->term(n));
            require_unit(e, n);
            return e;
        }
    }
    throw StructuralError("unknown sequence kind");
}

// ---------------------------------------------------------------------------

const ModuleVector& AuxiliarySequence::term(std::size_t n) {
    while (terms_.size() <= n) terms_.push_back(spec_.term(terms_.size()));
    return terms_[n];
}

const ModuleVector& AuxiliarySequence::operator[](std::size_t n) {
    while (aux_.size() <= n) {
        const std::size_t k = aux_.size();
        ModuleVector g = term(k);
        // Near-zero g_j stay in the cache so indices line up with the recursion.
        for (std::size_t j = 0; j < k; ++j) subtract_scaled(g, inner(term(k), term(j)), aux_[j]);
        aux_.push_back(std::move(g));
    }
    return aux_[n];
}

std::vector<ModuleVector> auxiliary_sequence(const SequenceSpec& spec, std::size_t n) {
    AuxiliarySequence aux(spec);
    (void)aux[n];
    std::vector<ModuleVector> out;
    out.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out.push_back(aux[k]);
    return out;
}

// ---------------------------------------------------------------------------

KaczmarzState::KaczmarzState(SequenceSpec spec, ModuleVector target, bool track_defect)
    : spec_(std::move(spec)), target_(std::move(target)), current_(ModuleVector::zero(target_.descriptor())) {
    if (!(spec_.descriptor() == target_.descriptor()))
        throw StructuralError("Kaczmarz target lives in a different module than the sequence");
    if (track_defect) aux_ = std::make_shared<AuxiliarySequence>(spec_);
}

void KaczmarzState::step() {
    const std::size_t n = steps();
    const ModuleVector e = aux_ ? aux_->term(n) : spec_.term(n);
    add_scaled(current_, inner(target_ - current_, e), e);
    const ModuleVector remainder = target_ - current_;
    residuals_.push_back(module_norm(remainder));
    orthogonality_.push_back(norm(inner(remainder, e)));
    if (aux_) {
        const AlgebraElement a = inner(target_, (*aux_)[n]);
        const AlgebraElement previous = defects_.empty() ? inner(target_, target_) : defects_.back();
        defects_.push_back(previous - a * adjoint(a));
    }
}

std::vector<ModuleVector> KaczmarzState::auxiliary_cache() const {
    std::vector<ModuleVector> out;
    if (!aux_) return out;
    for (std::size_t k = 0; k < steps(); ++k) out.push_back((*aux_)[k]);
    return out;
}

KaczmarzState kaczmarz_step(KaczmarzState state) {
    state.step();
    return state;
}

ModuleVector reconstruct_partial(AuxiliarySequence& aux, const ModuleVector& x, std::size_t n) {
    ModuleVector sum = ModuleVector::zero(x.descriptor());
    for (std::size_t k = 0; k <= n; ++k) add_scaled(sum, inner(x, aux[k]), aux.term(k));
    return sum;
}

ModuleVector reconstruct_partial(const SequenceSpec& spec, const ModuleVector& x, std::size_t n) {
    AuxiliarySequence aux(spec);
    return reconstruct_partial(aux, x, n);
}

std::vector<AlgebraElement> parseval_defect_history(AuxiliarySequence& aux, const ModuleVector& x, std::size_t n) {
    std::vector<AlgebraElement> out;
    out.reserve(n + 1);
    AlgebraElement defect = inner(x, x);
    for (std::size_t k = 0; k <= n; ++k) {
        const AlgebraElement a = inner(x, aux[k]);
        defect -= a * adjoint(a);
        out.push_back(defect);
    }
    return out;
}

namespace {

// <x, g_k> = sum_{j<=k} <x, e_j> c_{k-j}, fiberwise; O(n^2) per fiber.
std::vector<AlgebraElement> stationary_defect_history(const SequenceSpec& spec, const ModuleVector& x,
                                                      std::size_t n) {
    const auto& d = spec.descriptor();
    const auto alg = d.algebra();
    const auto pairings = exponential_pairings(x, n);
    const auto series = fiber_series(spec, n);
    const AlgebraElement norm_sq = inner(x, x);
    const std::size_t m = series.size();

    std::vector<Eigen::MatrixXcd> defects(n + 1, Eigen::MatrixXcd(static_cast<Eigen::Index>(m), 1));
    for (std::size_t f = 0; f < m; ++f) {
        const auto fi = static_cast<Eigen::Index>(f);
        const auto& c = series[f].coefficients;
        double defect = norm_sq.payload()(fi, 0).real();
        for (std::size_t k = 0; k <= n; ++k) {
            Complex a = 0.0;
            for (std::size_t j = 0; j <= k; ++j) a += pairings[j].payload()(fi, 0) * c[k - j];
            defect -= std::norm(a);
            defects[k](fi, 0) = defect;
        }
    }
    std::vector<AlgebraElement> out;
    out.reserve(n + 1);
    for (auto& values : defects) out.push_back(AlgebraElement::trusted(alg, std::move(values)));
    return out;
}

void require_index(const SequenceSpec& spec, std::size_t n) {
    const auto len = spec.length();
    if (len && n >= *len)
        throw FrequencyOverflow("index " + std::to_string(n) + " is past the end of a sequence of length " +
                                std::to_string(*len));
}

}  // namespace

std::vector<AlgebraElement> parseval_defect_history(const SequenceSpec& spec, const ModuleVector& x, std::size_t n) {
    if (!(spec.descriptor() == x.descriptor())) throw StructuralError("target and sequence modules differ");
    require_index(spec, n);
    if (spec.kind() == SequenceKind::StationaryExponential) return stationary_defect_history(spec, x, n);
    AuxiliarySequence aux(spec);
    return parseval_defect_history(aux, x, n);
}

AlgebraElement parseval_defect(const SequenceSpec& spec, const ModuleVector& x, std::size_t n) {
    return parseval_defect_history(spec, x, n).back();
}

double periodic_contraction_norm(std::span<const ModuleVector> vectors) {
    if (vectors.empty()) throw ValidationError("periodic_contraction_norm(): empty family");
    const auto& d = vectors.front().descriptor();
    const auto dim = static_cast<Eigen::Index>(d.flat_size());
    Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t n = 0; n < vectors.size(); ++n) {
        const auto& e = vectors[n];
        require_same_module(e, vectors.front());
        require_unit(e, n);
        const Eigen::MatrixXcd projection =
            flatten_map(d, [&](const ModuleVector& f) { return inner(f, e) * e; });
        product = (Eigen::MatrixXcd::Identity(dim, dim) - projection) * product;
    }
    return module_operator_norm(d, product);
}

RunResult run_to_tolerance(const SequenceSpec& spec, const ModuleVector& x, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) throw ValidationError("run_to_tolerance(): tol must be > 0");
    if (max_iter == 0) throw ValidationError("run_to_tolerance(): max_iter must be >= 1");
    KaczmarzState state(spec, x);
    const auto len = spec.length();
    RunResult result;
    while (state.steps() < max_iter && (!len || state.steps() < *len)) {
        state.step();
        if (state.residual_history().back() <= tol) {
            result.converged = true;
            break;
        }
    }
    result.iterations = state.steps();
    result.residual_history.assign(state.residual_history().begin(), state.residual_history().end());
    return result;
}

BasisProbe orthonormal_basis_probe(const SequenceSpec& spec, std::size_t n, std::uint64_t seed, std::size_t trials) {
    if (n == 0) throw ValidationError("orthonormal_basis_probe(): needs at least one term");
    std::vector<ModuleVector> terms;
    for (std::size_t k = 0; k < n; ++k) terms.push_back(spec.term(k));

    BasisProbe probe;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) probe.max_cross_inner = std::max(probe.max_cross_inner, norm(inner(terms[i], terms[j])));

    const auto alg = spec.descriptor().algebra();
    const auto rows = static_cast<Eigen::Index>(alg.size());
    const auto cols = alg.is_matrix() ? rows : Eigen::Index{1};
    std::mt19937_64 rng(seed);
    const auto draw = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    probe.min_combination_norm = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        ModuleVector combination = ModuleVector::zero(spec.descriptor());
        Eigen::MatrixXcd stacked(rows, cols * static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k) {
            Eigen::MatrixXcd payload(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index r = 0; r < rows; ++r) payload(r, c) = Complex(draw(), draw());
            stacked.middleCols(cols * static_cast<Eigen::Index>(k), cols) = payload;
            add_scaled(combination, AlgebraElement::trusted(alg, std::move(payload)), terms[k]);
        }
        // Scale by the largest row of the coefficient block, matching the Gram bound below.
        const double scale = alg.is_matrix() ? stacked.operatorNorm() : stacked.rowwise().norm().maxCoeff();
        probe.min_combination_norm = std::min(probe.min_combination_norm, module_norm(combination) / scale);
    }

    // <sum c_k e_k, sum c_k e_k> = C G C* with G_ij = <e_i, e_j>, so the exact
    // minimum is sqrt(lambda_min(G)), fiberwise for C(X).
    const auto ni = static_cast<Eigen::Index>(n);
    std::vector<std::vector<Eigen::MatrixXcd>> gram(n, std::vector<Eigen::MatrixXcd>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gram[i][j] = inner(terms[i], terms[j]).payload();
    const auto smallest = [](const Eigen::MatrixXcd& g) {
        const Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
        return std::sqrt(std::max(0.0, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly)
                                           .eigenvalues()
                                           .minCoeff()));
    };
    if (alg.is_matrix()) {
        Eigen::MatrixXcd g(rows * ni, rows * ni);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g.block(rows * static_cast<Eigen::Index>(i), rows * static_cast<Eigen::Index>(j), rows, rows) =
                    gram[i][j];
        probe.min_combination_norm = std::min(probe.min_combination_norm, smallest(g));
    } else {
        for (Eigen::Index x = 0; x < rows; ++x) {
            Eigen::MatrixXcd g(ni, ni);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gram[i][j](x, 0);
            probe.min_combination_norm = std::min(probe.min_combination_norm, smallest(g));
        }
    }
    probe.independent = probe.min_combination_norm > 1e-8;
    return probe;
}

double effectivity_probe(const SequenceSpec& spec, std::size_t n, std::uint64_t seed, std::size_t probes,
                         std::size_t degree) {
    double worst = 0.0;
    for (std::size_t p = 0; p < probes; ++p) {
        const ModuleVector x = random_vector(spec.descriptor(), seed + p, degree);
        worst = std::max(worst, norm(parseval_defect(spec, x, n)));
    }
    return worst;
}

}  // namespace kaczmod
