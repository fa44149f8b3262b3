#include "kaczmod/csmodule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "kaczmod/errors.hpp"

namespace kaczmod {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Per-fiber data for evaluating trig polynomials at atoms.
struct TrigFiber {
    MeasureKind kind;
    double lebesgue_weight;
    Eigen::VectorXd weights;  // atomic-part weights
    Eigen::MatrixXcd phases;  // atoms x (F+1), entry (j, n) = e^{2 pi i n t_j}
};

}  // namespace

struct ModuleDescriptor::Impl {
    ModuleKind kind;
    AlgebraDescriptor algebra;
    std::size_t rank = 0;
    std::size_t grid_size = 0;
    std::size_t fiber_dim = 0;
    std::size_t max_frequency = 0;
    std::size_t flat_size = 0;
    std::shared_ptr<const MeasureModel> measure;
    std::shared_ptr<const MeasureFamily> family;
    std::vector<TrigFiber> trig;
    Eigen::VectorXd atomic_weights;
    Eigen::VectorXd atomic_positions;
};

ModuleDescriptor ModuleDescriptor::free_module(AlgebraDescriptor algebra, std::size_t rank) {
    if (rank == 0) throw ValidationError("free module rank must be >= 1");
    auto impl = std::make_shared<Impl>(Impl{ModuleKind::Free, algebra});
    impl->rank = rank;
    impl->flat_size = rank * algebra.payload_size();
    return ModuleDescriptor(std::move(impl));
}

ModuleDescriptor ModuleDescriptor::atomic_l2(MeasureModel mu) {
    if (mu.kind() != MeasureKind::Atomic) throw ValidationError("AtomicL2 requires an atomic measure");
    auto impl = std::make_shared<Impl>(Impl{ModuleKind::AtomicL2, AlgebraDescriptor::matrix(1)});
    const auto atoms = mu.atoms();
    impl->flat_size = atoms.size();
    impl->atomic_weights.resize(idx(atoms.size()));
    impl->atomic_positions.resize(idx(atoms.size()));
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        impl->atomic_weights(idx(j)) = atoms[j].weight;
        impl->atomic_positions(idx(j)) = atoms[j].position;
    }
    impl->measure = std::make_shared<const MeasureModel>(std::move(mu));
    return ModuleDescriptor(std::move(impl));
}

ModuleDescriptor ModuleDescriptor::trig_module(MeasureFamily family, std::size_t max_frequency) {
    if (max_frequency == 0) throw ValidationError("TrigModule max frequency must be >= 1");
    auto impl = std::make_shared<Impl>(Impl{ModuleKind::Trig, AlgebraDescriptor::sampled(family.size())});
    impl->grid_size = family.size();
    impl->max_frequency = max_frequency;
    impl->flat_size = (max_frequency + 1) * family.size();
    impl->trig.reserve(family.size());
    for (const auto& mu : family.fibers()) {
        TrigFiber fiber{mu.kind(), mu.lebesgue_weight(), {}, {}};
        const auto atoms = mu.atoms();
        fiber.weights.resize(idx(atoms.size()));
        fiber.phases.resize(idx(atoms.size()), idx(max_frequency + 1));
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            fiber.weights(idx(j)) = atoms[j].weight;
            for (std::size_t n = 0; n <= max_frequency; ++n)
                fiber.phases(idx(j), idx(n)) = unit_phase(static_cast<double>(n) * atoms[j].position);
        }
        impl->trig.push_back(std::move(fiber));
    }
    impl->family = std::make_shared<const MeasureFamily>(std::move(family));
    return ModuleDescriptor(std::move(impl));
}

ModuleDescriptor ModuleDescriptor::grid_hilbert(std::size_t grid_size, std::size_t fiber_dim) {
    if (fiber_dim == 0) throw ValidationError("GridHilbert fiber dimension must be >= 1");
    auto impl = std::make_shared<Impl>(Impl{ModuleKind::GridHilbert, AlgebraDescriptor::sampled(grid_size)});
    impl->grid_size = grid_size;
    impl->fiber_dim = fiber_dim;
    impl->flat_size = grid_size * fiber_dim;
    return ModuleDescriptor(std::move(impl));
}

ModuleKind ModuleDescriptor::kind() const noexcept { return impl_->kind; }
AlgebraDescriptor ModuleDescriptor::algebra() const noexcept { return impl_->algebra; }
std::size_t ModuleDescriptor::flat_size() const noexcept { return impl_->flat_size; }

std::size_t ModuleDescriptor::rank() const {
    if (impl_->kind != ModuleKind::Free) throw StructuralError("rank is defined for free modules only");
    return impl_->rank;
}

const MeasureModel& ModuleDescriptor::measure() const {
    if (impl_->kind != ModuleKind::AtomicL2) throw StructuralError("measure() is defined for AtomicL2 only");
    return *impl_->measure;
}

const MeasureFamily& ModuleDescriptor::family() const {
    if (impl_->kind != ModuleKind::Trig) throw StructuralError("family() is defined for TrigModule only");
    return *impl_->family;
}

std::size_t ModuleDescriptor::max_frequency() const {
    if (impl_->kind != ModuleKind::Trig) throw StructuralError("max_frequency() is defined for TrigModule only");
    return impl_->max_frequency;
}

std::size_t ModuleDescriptor::grid_size() const {
    if (impl_->kind != ModuleKind::Trig && impl_->kind != ModuleKind::GridHilbert)
        throw StructuralError("grid_size() is defined for TrigModule and GridHilbert only");
    return impl_->grid_size;
}

std::size_t ModuleDescriptor::fiber_dim() const {
    if (impl_->kind != ModuleKind::GridHilbert) throw StructuralError("fiber_dim() is defined for GridHilbert only");
    return impl_->fiber_dim;
}

bool ModuleDescriptor::operator==(const ModuleDescriptor& other) const {
    if (impl_ == other.impl_) return true;
    const Impl& a = *impl_;
    const Impl& b = *other.impl_;
    if (a.kind != b.kind || !(a.algebra == b.algebra) || a.flat_size != b.flat_size) return false;
    switch (a.kind) {
        case ModuleKind::Free: return a.rank == b.rank;
        case ModuleKind::AtomicL2: return *a.measure == *b.measure;
        case ModuleKind::Trig: return a.max_frequency == b.max_frequency && *a.family == *b.family;
        case ModuleKind::GridHilbert: return a.grid_size == b.grid_size && a.fiber_dim == b.fiber_dim;
    }
    return false;
}

// ---------------------------------------------------------------------------

ModuleVector::ModuleVector(ModuleDescriptor descriptor, Eigen::VectorXcd flat)
    : descriptor_(std::move(descriptor)), flat_(std::move(flat)) {
    if (flat_.size() != idx(descriptor_.flat_size()))
        throw ValidationError("module vector has " + std::to_string(flat_.size()) + " coordinates, descriptor expects " +
                              std::to_string(descriptor_.flat_size()));
    if (!flat_.allFinite()) throw ValidationError("module vector has non-finite coordinates");
}

ModuleVector ModuleVector::zero(const ModuleDescriptor& descriptor) {
    return trusted(descriptor, Eigen::VectorXcd::Zero(idx(descriptor.flat_size())));
}

ModuleVector ModuleVector::free(const ModuleDescriptor& descriptor, std::span<const AlgebraElement> components) {
    if (descriptor.kind() != ModuleKind::Free) throw StructuralError("free(): descriptor is not a free module");
    if (components.size() != descriptor.rank()) throw ValidationError("free(): wrong number of components");
    const auto block = idx(descriptor.algebra().payload_size());
    Eigen::VectorXcd flat(idx(descriptor.flat_size()));
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (!(components[i].descriptor() == descriptor.algebra()))
            throw StructuralError("free(): component algebra mismatch");
        flat.segment(idx(i) * block, block) = components[i].payload().reshaped();
    }
    return ModuleVector(descriptor, std::move(flat));
}

ModuleVector ModuleVector::atomic_values(const ModuleDescriptor& descriptor, std::span<const Complex> values) {
    if (descriptor.kind() != ModuleKind::AtomicL2) throw StructuralError("atomic_values(): descriptor is not AtomicL2");
    Eigen::VectorXcd flat(idx(values.size()));
    for (std::size_t j = 0; j < values.size(); ++j) flat(idx(j)) = values[j];
    return ModuleVector(descriptor, std::move(flat));
}

ModuleVector ModuleVector::trig(const ModuleDescriptor& descriptor, const Eigen::MatrixXcd& coefficients) {
    if (descriptor.kind() != ModuleKind::Trig) throw StructuralError("trig(): descriptor is not a TrigModule");
    if (coefficients.rows() != idx(descriptor.max_frequency() + 1) || coefficients.cols() != idx(descriptor.grid_size()))
        throw ValidationError("trig(): coefficient table must be (F+1) x |X|");
    return ModuleVector(descriptor, coefficients.reshaped());
}

ModuleVector ModuleVector::trig_constant(const ModuleDescriptor& descriptor, std::span<const Complex> coefficients) {
    if (descriptor.kind() != ModuleKind::Trig) throw StructuralError("trig_constant(): descriptor is not a TrigModule");
    if (coefficients.size() > descriptor.max_frequency() + 1)
        throw FrequencyOverflow("trig_constant(): degree exceeds the TrigModule frequency bound");
    Eigen::MatrixXcd table = Eigen::MatrixXcd::Zero(idx(descriptor.max_frequency() + 1), idx(descriptor.grid_size()));
    for (std::size_t n = 0; n < coefficients.size(); ++n) table.row(idx(n)).setConstant(coefficients[n]);
    return trig(descriptor, table);
}

ModuleVector ModuleVector::grid(const ModuleDescriptor& descriptor, const Eigen::MatrixXcd& values) {
    if (descriptor.kind() != ModuleKind::GridHilbert) throw StructuralError("grid(): descriptor is not GridHilbert");
    if (values.rows() != idx(descriptor.fiber_dim()) || values.cols() != idx(descriptor.grid_size()))
        throw ValidationError("grid(): value table must be d x m");
    return ModuleVector(descriptor, values.reshaped());
}

AlgebraElement ModuleVector::component(std::size_t i) const {
    if (descriptor_.kind() != ModuleKind::Free) throw StructuralError("component(): not a free module vector");
    if (i >= descriptor_.rank()) throw std::out_of_range("component(): index out of range");
    const auto alg = descriptor_.algebra();
    const auto block = idx(alg.payload_size());
    const auto rows = idx(alg.size());
    Eigen::MatrixXcd payload = flat_.segment(idx(i) * block, block).reshaped(rows, block / rows);
    return AlgebraElement::trusted(alg, std::move(payload));
}

Eigen::Map<const Eigen::MatrixXcd> ModuleVector::as_matrix() const {
    switch (descriptor_.kind()) {
        case ModuleKind::Trig:
            return {flat_.data(), idx(descriptor_.max_frequency() + 1), idx(descriptor_.grid_size())};
        case ModuleKind::GridHilbert:
            return {flat_.data(), idx(descriptor_.fiber_dim()), idx(descriptor_.grid_size())};
        default: throw StructuralError("as_matrix(): defined for TrigModule and GridHilbert only");
    }
}

void require_same_module(const ModuleVector& f, const ModuleVector& g) {
    if (!(f.descriptor() == g.descriptor())) throw StructuralError("module descriptor mismatch");
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& other) {
    require_same_module(*this, other);
    flat_ += other.flat_;
    return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& other) {
    require_same_module(*this, other);
    flat_ -= other.flat_;
    return *this;
}

ModuleVector operator+(const ModuleVector& f, const ModuleVector& g) {
    ModuleVector out = f;
    return out += g;
}

ModuleVector operator-(const ModuleVector& f, const ModuleVector& g) {
    ModuleVector out = f;
    return out -= g;
}

ModuleVector operator*(Complex lambda, const ModuleVector& f) {
    return ModuleVector::trusted(f.descriptor(), lambda * f.flat());
}

namespace {

void require_action(const AlgebraElement& a, const ModuleDescriptor& d) {
    if (!(a.descriptor() == d.algebra())) throw StructuralError("algebra element does not act on this module");
}

// out += sign * (a . v), written directly into flat coordinates.
void accumulate_action(Eigen::VectorXcd& out, const AlgebraElement& a, const ModuleVector& v, double sign) {
    const auto& d = v.descriptor();
    require_action(a, d);
    const auto& p = a.payload();
    const auto& src = v.flat();
    switch (d.kind()) {
        case ModuleKind::Free: {
            const auto alg = d.algebra();
            const auto block = idx(alg.payload_size());
            const auto dim = idx(alg.size());
            for (std::size_t i = 0; i < d.rank(); ++i) {
                auto seg_out = out.segment(idx(i) * block, block);
                auto seg_in = src.segment(idx(i) * block, block);
                if (alg.is_matrix()) {
                    Eigen::Map<Eigen::MatrixXcd> o(seg_out.data(), dim, dim);
                    Eigen::Map<const Eigen::MatrixXcd> in(seg_in.data(), dim, dim);
                    o.noalias() += sign * (p * in);
                } else {
                    seg_out += sign * p.col(0).cwiseProduct(seg_in);
                }
            }
            return;
        }
        case ModuleKind::AtomicL2: out += (sign * p(0, 0)) * src; return;
        case ModuleKind::Trig:
        case ModuleKind::GridHilbert: {
            const auto rows = d.kind() == ModuleKind::Trig ? idx(d.max_frequency() + 1) : idx(d.fiber_dim());
            const auto cols = idx(d.grid_size());
            Eigen::Map<Eigen::MatrixXcd> o(out.data(), rows, cols);
            Eigen::Map<const Eigen::MatrixXcd> in(src.data(), rows, cols);
            for (Eigen::Index x = 0; x < cols; ++x) o.col(x) += (sign * p(x, 0)) * in.col(x);
            return;
        }
    }
}

}  // namespace

ModuleVector operator*(const AlgebraElement& a, const ModuleVector& f) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.flat().size());
    accumulate_action(out, a, f, 1.0);
    return ModuleVector::trusted(f.descriptor(), std::move(out));
}

void subtract_scaled(ModuleVector& target, const AlgebraElement& a, const ModuleVector& v) {
    require_same_module(target, v);
    Eigen::VectorXcd flat = target.flat();
    accumulate_action(flat, a, v, -1.0);
    target = ModuleVector::trusted(target.descriptor(), std::move(flat));
}

void add_scaled(ModuleVector& target, const AlgebraElement& a, const ModuleVector& v) {
    require_same_module(target, v);
    Eigen::VectorXcd flat = target.flat();
    accumulate_action(flat, a, v, 1.0);
    target = ModuleVector::trusted(target.descriptor(), std::move(flat));
}

namespace {

// Fiber inner product of two trig polynomials in L^2(mu_x).
Complex trig_fiber_inner(const TrigFiber& fiber, const Eigen::Ref<const Eigen::VectorXcd>& a,
                         const Eigen::Ref<const Eigen::VectorXcd>& b) {
    Complex lebesgue = 0.0;
    Complex atomic = 0.0;
    if (fiber.kind != MeasureKind::Atomic) lebesgue = b.dot(a);  // sum a_n conj(b_n)
    if (fiber.kind != MeasureKind::Lebesgue) {
        const Eigen::VectorXcd fa = fiber.phases * a;
        const Eigen::VectorXcd gb = fiber.phases * b;
        for (Eigen::Index j = 0; j < fa.size(); ++j) atomic += fiber.weights(j) * fa(j) * std::conj(gb(j));
    }
    switch (fiber.kind) {
        case MeasureKind::Atomic: return atomic;
        case MeasureKind::Lebesgue: return lebesgue;
        case MeasureKind::Mixture: return fiber.lebesgue_weight * lebesgue + (1.0 - fiber.lebesgue_weight) * atomic;
    }
    return 0.0;
}

}  // namespace

AlgebraElement inner(const ModuleVector& f, const ModuleVector& g) {
    require_same_module(f, g);
    const auto& d = f.descriptor();
    const auto& impl = d.impl();
    const auto alg = d.algebra();
    switch (d.kind()) {
        case ModuleKind::Free: {
            const auto block = idx(alg.payload_size());
            const auto dim = idx(alg.size());
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, alg.is_matrix() ? dim : 1);
            for (std::size_t i = 0; i < d.rank(); ++i) {
                auto fi = f.flat().segment(idx(i) * block, block);
                auto gi = g.flat().segment(idx(i) * block, block);
                if (alg.is_matrix()) {
                    Eigen::Map<const Eigen::MatrixXcd> fm(fi.data(), dim, dim);
                    Eigen::Map<const Eigen::MatrixXcd> gm(gi.data(), dim, dim);
                    acc.noalias() += fm * gm.adjoint();
                } else {
                    acc.col(0) += fi.cwiseProduct(gi.conjugate());
                }
            }
            return AlgebraElement::trusted(alg, std::move(acc));
        }
        case ModuleKind::AtomicL2: {
            Complex sum = 0.0;
            const auto& fv = f.flat();
            const auto& gv = g.flat();
            for (Eigen::Index j = 0; j < fv.size(); ++j) sum += impl.atomic_weights(j) * fv(j) * std::conj(gv(j));
            return AlgebraElement::scalar(sum);
        }
        case ModuleKind::Trig: {
            const auto fm = f.as_matrix();
            const auto gm = g.as_matrix();
            Eigen::MatrixXcd values(fm.cols(), 1);
            for (Eigen::Index x = 0; x < fm.cols(); ++x)
                values(x, 0) = trig_fiber_inner(impl.trig[static_cast<std::size_t>(x)], fm.col(x), gm.col(x));
            return AlgebraElement::trusted(alg, std::move(values));
        }
        case ModuleKind::GridHilbert: {
            const auto fm = f.as_matrix();
            const auto gm = g.as_matrix();
            Eigen::MatrixXcd values(fm.cols(), 1);
            for (Eigen::Index x = 0; x < fm.cols(); ++x) values(x, 0) = gm.col(x).dot(fm.col(x));
            return AlgebraElement::trusted(alg, std::move(values));
        }
    }
    throw StructuralError("inner(): unknown module kind");
}

double module_norm(const ModuleVector& f) { return std::sqrt(norm(inner(f, f))); }

ModuleVector exponential_vector(const ModuleDescriptor& descriptor, std::size_t n) {
    switch (descriptor.kind()) {
        case ModuleKind::Trig: {
            if (n > descriptor.max_frequency())
                throw FrequencyOverflow("exponential_vector(): frequency " + std::to_string(n) +
                                        " exceeds the TrigModule bound " + std::to_string(descriptor.max_frequency()));
            Eigen::VectorXcd flat = Eigen::VectorXcd::Zero(idx(descriptor.flat_size()));
            const auto stride = idx(descriptor.max_frequency() + 1);
            for (std::size_t x = 0; x < descriptor.grid_size(); ++x) flat(idx(x) * stride + idx(n)) = 1.0;
            return ModuleVector::trusted(descriptor, std::move(flat));
        }
        case ModuleKind::AtomicL2: {
            const auto& pos = descriptor.impl().atomic_positions;
            Eigen::VectorXcd flat(pos.size());
            for (Eigen::Index j = 0; j < pos.size(); ++j) flat(j) = unit_phase(static_cast<double>(n) * pos(j));
            return ModuleVector::trusted(descriptor, std::move(flat));
        }
        default: throw StructuralError("exponential_vector(): needs a TrigModule or AtomicL2 descriptor");
    }
}

std::vector<AlgebraElement> exponential_pairings(const ModuleVector& x, std::size_t n_max) {
    const auto& d = x.descriptor();
    const auto& impl = d.impl();
    std::vector<AlgebraElement> out;
    out.reserve(n_max + 1);
    switch (d.kind()) {
        case ModuleKind::AtomicL2: {
            const auto& pos = impl.atomic_positions;
            Eigen::VectorXcd weighted = impl.atomic_weights.cast<Complex>().cwiseProduct(x.flat());
            for (std::size_t j = 0; j <= n_max; ++j) {
                Complex sum = 0.0;
                for (Eigen::Index t = 0; t < pos.size(); ++t)
                    sum += weighted(t) * std::conj(unit_phase(static_cast<double>(j) * pos(t)));
                out.push_back(AlgebraElement::scalar(sum));
            }
            return out;
        }
        case ModuleKind::Trig: {
            const auto coeffs = x.as_matrix();
            const auto m = coeffs.cols();
            const auto top = coeffs.rows();
            std::vector<Eigen::VectorXcd> atom_values(static_cast<std::size_t>(m));
            for (Eigen::Index c = 0; c < m; ++c) {
                const auto& fiber = impl.trig[static_cast<std::size_t>(c)];
                if (fiber.kind != MeasureKind::Lebesgue)
                    atom_values[static_cast<std::size_t>(c)] =
                        fiber.weights.cast<Complex>().cwiseProduct(fiber.phases * coeffs.col(c));
            }
            const auto positions_of = [&](std::size_t c) { return impl.family->fiber(c).atoms(); };
            for (std::size_t j = 0; j <= n_max; ++j) {
                Eigen::MatrixXcd values(m, 1);
                for (Eigen::Index c = 0; c < m; ++c) {
                    const auto& fiber = impl.trig[static_cast<std::size_t>(c)];
                    Complex lebesgue = idx(j) < top ? coeffs(idx(j), c) : Complex(0.0);
                    Complex atomic = 0.0;
                    if (fiber.kind != MeasureKind::Lebesgue) {
                        const auto atoms = positions_of(static_cast<std::size_t>(c));
                        const auto& av = atom_values[static_cast<std::size_t>(c)];
                        for (std::size_t t = 0; t < atoms.size(); ++t) {
                            const Complex phase = j <= d.max_frequency()
                                                      ? fiber.phases(idx(t), idx(j))
                                                      : unit_phase(static_cast<double>(j) * atoms[t].position);
                            atomic += av(idx(t)) * std::conj(phase);
                        }
                    }
                    switch (fiber.kind) {
                        case MeasureKind::Atomic: values(c, 0) = atomic; break;
                        case MeasureKind::Lebesgue: values(c, 0) = lebesgue; break;
                        case MeasureKind::Mixture:
                            values(c, 0) = fiber.lebesgue_weight * lebesgue + (1.0 - fiber.lebesgue_weight) * atomic;
                            break;
                    }
                }
                out.push_back(AlgebraElement::trusted(d.algebra(), std::move(values)));
            }
            return out;
        }
        default: throw StructuralError("exponential_pairings(): needs a TrigModule or AtomicL2 vector");
    }
}

bool is_unit_vector(const ModuleVector& e, double tol) {
    return norm(inner(e, e) - identity(e.descriptor().algebra())) <= tol;
}

ModuleVector multiply_by_exponential(const ModuleVector& f) {
    const auto& d = f.descriptor();
    switch (d.kind()) {
        case ModuleKind::Trig: {
            const auto coeffs = f.as_matrix();
            const auto top = coeffs.rows() - 1;
            if (coeffs.row(top).cwiseAbs().maxCoeff() != 0.0)
                throw FrequencyOverflow("multiply_by_exponential(): top frequency is occupied");
            Eigen::MatrixXcd shifted = Eigen::MatrixXcd::Zero(coeffs.rows(), coeffs.cols());
            shifted.bottomRows(top) = coeffs.topRows(top);
            return ModuleVector::trusted(d, shifted.reshaped());
        }
        case ModuleKind::AtomicL2: {
            const auto& pos = d.impl().atomic_positions;
            Eigen::VectorXcd flat = f.flat();
            for (Eigen::Index j = 0; j < pos.size(); ++j) flat(j) *= unit_phase(pos(j));
            return ModuleVector::trusted(d, std::move(flat));
        }
        default: throw StructuralError("multiply_by_exponential(): needs a TrigModule or AtomicL2 vector");
    }
}

ModuleVector frame_operator_apply(std::span<const ModuleVector> vectors, const ModuleVector& f) {
    ModuleVector out = ModuleVector::zero(f.descriptor());
    for (const auto& e : vectors) add_scaled(out, inner(f, e), e);
    return out;
}

Eigen::MatrixXcd flatten_map(const ModuleDescriptor& descriptor,
                             const std::function<ModuleVector(const ModuleVector&)>& map) {
    const auto n = idx(descriptor.flat_size());
    Eigen::MatrixXcd matrix(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(n);
        basis(c) = 1.0;
        const ModuleVector image = map(ModuleVector::trusted(descriptor, std::move(basis)));
        if (!(image.descriptor() == descriptor)) throw StructuralError("flatten_map(): map leaves the module");
        matrix.col(c) = image.flat();
    }
    return matrix;
}

ModuleVector apply_flat(const Eigen::MatrixXcd& map, const ModuleVector& f) {
    if (map.rows() != f.flat().size() || map.cols() != f.flat().size())
        throw StructuralError("apply_flat(): map shape does not match the module");
    return ModuleVector(f.descriptor(), map * f.flat());
}

FrameSolution frame_operator_solve(std::span<const ModuleVector> vectors, const ModuleVector& x) {
    if (vectors.empty()) throw ValidationError("frame_operator_solve(): empty family");
    const auto& d = x.descriptor();
    if (d.kind() == ModuleKind::Trig)
        throw StructuralError("frame_operator_solve(): TrigModule coordinates are not a faithful realization");
    for (const auto& e : vectors) require_same_module(e, x);

    const Eigen::MatrixXcd s = flatten_map(d, [&](const ModuleVector& f) { return frame_operator_apply(vectors, f); });
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const double condition =
        smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(smin > 1e-12 * smax))
        throw RankDeficientError("frame_operator_solve(): frame operator is singular (condition number " +
                                     std::to_string(condition) + "); the family does not generate the module",
                                 condition);

    Eigen::VectorXcd y = s.fullPivLu().solve(x.flat());
    ModuleVector solution(d, std::move(y));
    const double residual = module_norm(frame_operator_apply(vectors, solution) - x);
    return {std::move(solution), condition, residual};
}

Eigen::MatrixXcd trace_gram(const ModuleDescriptor& descriptor) {
    const auto n = idx(descriptor.flat_size());
    switch (descriptor.kind()) {
        case ModuleKind::Free:
        case ModuleKind::GridHilbert: return Eigen::MatrixXcd::Identity(n, n);
        case ModuleKind::AtomicL2: return descriptor.impl().atomic_weights.cast<Complex>().asDiagonal();
        case ModuleKind::Trig: {
            Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
            const auto stride = idx(descriptor.max_frequency() + 1);
            const auto& family = descriptor.family();
            for (std::size_t x = 0; x < family.size(); ++x) {
                const auto base = idx(x) * stride;
                for (Eigen::Index k = 0; k < stride; ++k)
                    for (Eigen::Index m = 0; m < stride; ++m)
                        gram(base + k, base + m) = fourier_coefficient(family.fiber(x), static_cast<long>(k - m));
            }
            return gram;
        }
    }
    throw StructuralError("trace_gram(): unknown module kind");
}

double module_operator_norm(const ModuleDescriptor& descriptor, const Eigen::MatrixXcd& map) {
    if (descriptor.kind() == ModuleKind::Trig)
        throw StructuralError("module_operator_norm(): TrigModule coordinates are not a faithful realization");
    if (descriptor.kind() != ModuleKind::AtomicL2) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(map);
        return svd.singularValues()(0);
    }
    const Eigen::VectorXd root = descriptor.impl().atomic_weights.cwiseSqrt();
    const Eigen::MatrixXcd similar =
        root.cast<Complex>().asDiagonal() * map * root.cwiseInverse().cast<Complex>().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(similar);
    return svd.singularValues()(0);
}

Eigen::MatrixXcd module_adjoint_map(const ModuleDescriptor& descriptor, const Eigen::MatrixXcd& map) {
    if (descriptor.kind() == ModuleKind::Trig)
        throw StructuralError("module_adjoint_map(): TrigModule coordinates are not a faithful realization");
    if (descriptor.kind() != ModuleKind::AtomicL2) return map.adjoint();
    const Eigen::VectorXcd w = descriptor.impl().atomic_weights.cast<Complex>();
    return w.cwiseInverse().asDiagonal() * map.adjoint() * w.asDiagonal();
}

namespace {

// Portable generators: mt19937_64 is fully specified, the distributions are ours.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double gaussian(std::mt19937_64& rng) {
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Complex complex_gaussian(std::mt19937_64& rng) {
    const double re = gaussian(rng);
    const double im = gaussian(rng);
    return {re, im};
}

}  // namespace

ModuleVector random_vector(const ModuleDescriptor& descriptor, std::uint64_t seed, std::size_t degree) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXcd flat = Eigen::VectorXcd::Zero(idx(descriptor.flat_size()));
    if (descriptor.kind() == ModuleKind::Trig) {
        const auto top = std::min(degree, descriptor.max_frequency());
        const auto stride = idx(descriptor.max_frequency() + 1);
        for (std::size_t x = 0; x < descriptor.grid_size(); ++x)
            for (std::size_t n = 0; n <= top; ++n) flat(idx(x) * stride + idx(n)) = complex_gaussian(rng);
    } else {
        for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = complex_gaussian(rng);
    }
    return ModuleVector::trusted(descriptor, std::move(flat));
}

Eigen::MatrixXcd random_unitary(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXcd z(idx(d), idx(d));
    for (Eigen::Index c = 0; c < z.cols(); ++c)
        for (Eigen::Index r = 0; r < z.rows(); ++r) z(r, c) = complex_gaussian(rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(idx(d), idx(d));
    // Fix column phases so the result depends only on z.
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
        const Complex diag = r(c, c);
        if (std::abs(diag) > 0.0) q.col(c) *= diag / std::abs(diag);
    }
    return q;
}

}  // namespace kaczmod
