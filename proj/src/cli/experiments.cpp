#include "kaczmod/cli/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>

#include "kaczmod/cauchy.hpp"
#include "kaczmod/csmodule.hpp"
#include "kaczmod/errors.hpp"
#include "kaczmod/kaczmarz.hpp"
#include "kaczmod/stationary.hpp"

namespace kaczmod::cli {

using nlohmann::json;

namespace {

json scalar(double value, json context = json::object()) {
    context["value"] = value;
    return context;
}

json truncation_context(const TruncationInfo& info) {
    json j{{"truncation", info.truncation}, {"truncation_limited", info.truncation_limited}};
    if (info.tail_bound) j["tail_bound"] = *info.tail_bound;
    return j;
}

std::string str(double v) { return format_double(v); }
std::string str(std::size_t v) { return std::to_string(v); }

CsvTable convergence_table() { return {"convergence.csv", {"iter", "residual_norm", "defect_norm"}, {}}; }
CsvTable identity_table() { return {"identity_residuals.csv", {"check_name", "n", "j", "residual"}, {}}; }

template <class Fn>
auto as_config_error(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    } catch (const std::out_of_range& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

ModuleVector build_target(const ModuleDescriptor& d, const ExperimentConfig& c) {
    return as_config_error("target", [&] {
        const auto& t = c.target;
        if (t.kind == "exponential") return exponential_vector(d, t.index);
        if (t.kind == "random") return random_vector(d, *c.numeric.seed, t.degree);
        std::vector<Complex> coeffs(t.re.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = {t.re[i], t.im.empty() ? 0.0 : t.im[i]};
        if (d.kind() == ModuleKind::Trig) return ModuleVector::trig_constant(d, coeffs);
        if (d.kind() == ModuleKind::AtomicL2) return ModuleVector::atomic_values(d, coeffs);
        throw StructuralError("explicit coefficients need a trig or atomic realization");
    });
}

ModuleDescriptor single_fiber_module(const ExperimentConfig& c, const MeasureModel& mu, std::size_t default_frequency) {
    return as_config_error("module", [&] {
        if (c.module.realization == "atomic") return ModuleDescriptor::atomic_l2(mu);
        return ModuleDescriptor::trig_module(MeasureFamily::single(mu), c.module.max_frequency.value_or(default_frequency));
    });
}

std::size_t index_bound(const SequenceSpec& spec, std::size_t wanted) {
    const auto len = spec.length();
    return len ? std::min(wanted, *len) : wanted;
}

// Kaczmarz run that also tracks g_n and checks the exact identities step by step.
struct TracedRun {
    std::vector<double> residuals;
    std::vector<double> defects;
    double max_orthogonality = 0.0;
    double max_partial_sum = 0.0;
    double max_defect_identity = 0.0;
    bool converged = false;
};

TracedRun traced_run(const SequenceSpec& spec, const ModuleVector& x, std::size_t max_iter, double tol,
                     CsvTable* identities) {
    TracedRun run;
    KaczmarzState state(spec, x);
    AuxiliarySequence aux(spec);
    ModuleVector partial = ModuleVector::zero(x.descriptor());
    AlgebraElement defect = inner(x, x);
    const std::size_t steps = index_bound(spec, max_iter);
    for (std::size_t n = 0; n < steps; ++n) {
        state.step();
        const AlgebraElement a = inner(x, aux[n]);
        add_scaled(partial, a, aux.term(n));
        defect -= a * adjoint(a);
        const ModuleVector remainder = x - state.approximation();

        const double orth = state.orthogonality_history().back();
        const double psum = module_norm(state.approximation() - partial);
        const double dres = norm(defect - inner(remainder, remainder));
        run.max_orthogonality = std::max(run.max_orthogonality, orth);
        run.max_partial_sum = std::max(run.max_partial_sum, psum);
        run.max_defect_identity = std::max(run.max_defect_identity, dres);
        run.residuals.push_back(state.residual_history().back());
        run.defects.push_back(norm(defect));
        if (identities) {
            identities->add_row({"orthogonality", str(n), "0", str(orth)});
            identities->add_row({"partial_sum", str(n), "0", str(psum)});
            identities->add_row({"defect_identity", str(n), "0", str(dres)});
        }
        if (run.residuals.back() <= tol) {
            run.converged = true;
            break;
        }
    }
    return run;
}

void fill_convergence(CsvTable& table, const std::vector<double>& residuals, const std::vector<double>& defects) {
    for (std::size_t n = 0; n < residuals.size(); ++n) table.add_row({str(n), str(residuals[n]), str(defects[n])});
}

json run_context(std::size_t iterations, double tol) { return {{"iterations", iterations}, {"tolerance", tol}}; }

// ---------------------------------------------------------------------------

ExperimentOutput finite_periodic(const ExperimentConfig& c) {
    const auto seed = c.periodic.unitary_seed;
    const auto alg = AlgebraDescriptor::matrix(2);
    const auto desc = ModuleDescriptor::free_module(alg, 2);
    const double s = 1.0 / std::sqrt(2.0);
    const AlgebraElement u(alg, random_unitary(2, seed));
    const AlgebraElement v(alg, random_unitary(2, seed + 1));
    const AlgebraElement w(alg, random_unitary(2, seed + 2));
    const std::vector<AlgebraElement> c0{s * u, s * v};
    const std::vector<AlgebraElement> c1{w, AlgebraElement::zero(alg)};
    std::vector<ModuleVector> terms{ModuleVector::free(desc, c0), ModuleVector::free(desc, c1)};
    const bool units = is_unit_vector(terms[0]) && is_unit_vector(terms[1]);
    const double contraction = periodic_contraction_norm(terms);
    const auto spec = SequenceSpec::explicit_terms(terms, true);

    const ModuleVector x = random_vector(desc, *c.numeric.seed);
    ExperimentOutput out;
    CsvTable identities = identity_table();
    const TracedRun run = traced_run(spec, x, c.numeric.max_iter, c.numeric.tol, &identities);

    // Residual after sweep k sits at index 2k+1.
    double worst_ratio = 0.0;
    for (std::size_t i = 3; i < run.residuals.size(); i += 2)
        if (run.residuals[i - 2] > 0.0) worst_ratio = std::max(worst_ratio, run.residuals[i] / run.residuals[i - 2]);

    CsvTable conv = convergence_table();
    fill_convergence(conv, run.residuals, run.defects);
    out.tables = {conv, identities};

    const auto steps = run.residuals.size();
    out.summary["verdicts"] = {{"unit_vectors", units}, {"converged", run.converged}};
    out.summary["scalars"] = {
        {"contraction_norm", scalar(contraction, {{"period", 2}, {"unitary_seed", seed}})},
        {"final_residual", scalar(run.residuals.back(), run_context(steps, c.numeric.tol))},
        {"sweeps", scalar(static_cast<double>((steps + 1) / 2), run_context(steps, c.numeric.tol))},
        {"max_sweep_ratio", scalar(worst_ratio, {{"bound", contraction}, {"iterations", steps}})},
        {"max_orthogonality_residual", scalar(run.max_orthogonality, {{"iterations", steps}})},
        {"max_partial_sum_residual", scalar(run.max_partial_sum, {{"iterations", steps}})},
        {"max_defect_identity_residual", scalar(run.max_defect_identity, {{"iterations", steps}})}};
    return out;
}

ExperimentOutput stationary_single(const ExperimentConfig& c) {
    const MeasureModel mu = build_measure(*c.measure);
    const std::size_t n_trunc = c.numeric.truncation;
    const auto desc = single_fiber_module(c, mu, std::max(c.numeric.max_iter, n_trunc) + 1);
    const auto spec = SequenceSpec::stationary_exponential(desc);
    const ModuleVector x = build_target(desc, c);

    const std::size_t series_n = index_bound(spec, n_trunc + 1) - 1;
    const ScalarSeries series = fiber_series(spec, series_n).front();
    const double sarason = sarason_sum(series);
    const auto tinfo = truncation_info(series);
    const auto classification = fiber_classification(MeasureFamily::single(mu), series_n, c.numeric.classification_tol);
    const auto effect = effectivity_condition(spec, series_n, c.numeric.classification_tol);

    // Iterate, then read the defects off the closed form.
    KaczmarzState state(spec, x);
    const std::size_t steps = index_bound(spec, c.numeric.max_iter);
    bool converged = false;
    while (state.steps() < steps) {
        state.step();
        if (state.residual_history().back() <= c.numeric.tol) {
            converged = true;
            break;
        }
    }
    const auto defects = parseval_defect_history(spec, x, state.steps() - 1);
    std::vector<double> residuals(state.residual_history().begin(), state.residual_history().end());
    std::vector<double> defect_norms;
    double worst_identity = 0.0;
    for (std::size_t n = 0; n < defects.size(); ++n) {
        defect_norms.push_back(norm(defects[n]));
        worst_identity = std::max(worst_identity, std::abs(defect_norms[n] - residuals[n] * residuals[n]));
    }

    ExperimentOutput out;
    CsvTable conv = convergence_table();
    fill_convergence(conv, residuals, defect_norms);

    CsvTable cls{"classification.csv", {"fiber_index", "parameter", "sarason_sum", "verdict"}, {}};
    for (const auto& f : classification.fibers)
        cls.add_row({str(f.index), str(f.parameter), str(f.sarason_sum), to_string(f.verdict)});

    CsvTable ser{"series.csv", {"index", "re", "im"}, {}};
    for (std::size_t n = 0; n <= series.truncation(); ++n)
        ser.add_row({str(n), str(series.coefficients[n].real()), str(series.coefficients[n].imag())});

    CsvTable ids = identity_table();
    ids.add_row({"recursion", str(series_n), "0", str(recursion_residual(series))});
    ids.add_row({"cauchy_product", str(series_n), "0", str(cauchy_product_residual(series))});
    ids.add_row({"defect_vs_residual", str(defects.size() - 1), "0", str(worst_identity)});
    AuxiliarySequence aux(spec);
    double worst_kwapien = 0.0;
    const std::size_t kw_max = index_bound(spec, 11) - 1;
    for (std::size_t n = 1; n <= kw_max; ++n)
        for (std::size_t j = 1; j <= n; ++j) {
            const double r = kwapien_identity_check(aux, n, j);
            worst_kwapien = std::max(worst_kwapien, r);
            ids.add_row({"kwapien", str(n), str(j), str(r)});
        }
    out.tables = {conv, cls, ser, ids};

    const auto iters = residuals.size();
    const auto verdict = classification.fibers.front().verdict;
    out.summary["verdicts"] = {{"fiber", to_string(verdict)},
                               {"effective", classification.effective},
                               {"effectivity_condition_holds", effect.holds},
                               {"converged", converged}};
    json scalars = {
        {"sarason_sum", scalar(sarason, truncation_context(tinfo))},
        {"effectivity_worst_residual",
         scalar(effect.worst_residual,
                {{"worst_k", effect.worst_k}, {"probe_range", effect.probe_range},
                 {"tolerance", c.numeric.classification_tol}, {"truncation", truncation_context(effect.truncation)}})},
        {"final_residual", scalar(residuals.back(), run_context(iters, c.numeric.tol))},
        {"final_defect_norm", scalar(defect_norms.back(), {{"iterations", iters}})},
        {"max_defect_vs_residual", scalar(worst_identity, {{"iterations", iters}})},
        {"max_kwapien_residual", scalar(worst_kwapien, {{"n_max", kw_max}})},
        {"recursion_residual", scalar(recursion_residual(series), {{"truncation", series_n}})}};
    if (!converged)
        scalars["stall_floor"] = scalar(residuals.back(), {{"iterations", iters},
                                                           {"sqrt_defect_norm", std::sqrt(defect_norms.back())},
                                                           {"tolerance", c.numeric.tol}});
    out.summary["scalars"] = scalars;
    return out;
}

ExperimentOutput stationary_family(const ExperimentConfig& c) {
    const MeasureFamily family = build_family(*c.family);
    const std::size_t n_trunc = c.numeric.truncation;
    const auto desc = as_config_error("module", [&] {
        return ModuleDescriptor::trig_module(family, c.module.max_frequency.value_or(c.numeric.max_iter + 1));
    });
    const auto spec = SequenceSpec::stationary_exponential(desc);
    const ModuleVector x = build_target(desc, c);
    const auto classification = fiber_classification(family, n_trunc, c.numeric.classification_tol);

    KaczmarzState state(spec, x);
    const std::size_t steps = index_bound(spec, c.numeric.max_iter);
    bool converged = false;
    while (state.steps() < steps) {
        state.step();
        if (state.residual_history().back() <= c.numeric.tol) {
            converged = true;
            break;
        }
    }
    const auto defects = parseval_defect_history(spec, x, state.steps() - 1);
    std::vector<double> residuals(state.residual_history().begin(), state.residual_history().end());
    std::vector<double> defect_norms;
    bool monotone = true;
    for (std::size_t n = 0; n < defects.size(); ++n) {
        defect_norms.push_back(norm(defects[n]));
        if (n > 0) {
            const Eigen::VectorXd now = defects[n].payload().col(0).real();
            const Eigen::VectorXd before = defects[n - 1].payload().col(0).real();
            monotone = monotone && ((now - before).maxCoeff() <= 1e-12);
        }
    }

    ExperimentOutput out;
    CsvTable conv = convergence_table();
    fill_convergence(conv, residuals, defect_norms);
    CsvTable cls{"classification.csv", {"fiber_index", "parameter", "sarason_sum", "verdict"}, {}};
    double worst_sarason = 0.0;
    json fiber_verdicts = json::array();
    for (const auto& f : classification.fibers) {
        cls.add_row({str(f.index), str(f.parameter), str(f.sarason_sum), to_string(f.verdict)});
        worst_sarason = std::max(worst_sarason, std::abs(f.sarason_sum - 1.0));
        fiber_verdicts.push_back(to_string(f.verdict));
    }
    out.tables = {conv, cls};

    const auto iters = residuals.size();
    out.summary["verdicts"] = {{"effective", classification.effective},
                               {"fibers", fiber_verdicts},
                               {"defect_monotone", monotone},
                               {"converged", converged}};
    out.summary["scalars"] = {
        {"max_sarason_deviation",
         scalar(worst_sarason, {{"truncation", n_trunc}, {"tolerance", c.numeric.classification_tol}})},
        {"continuity_witness", scalar(family.witness().observed, {{"budget", family.witness().budget},
                                                                   {"max_frequency", family.witness().max_frequency}})},
        {"final_residual", scalar(residuals.back(), run_context(iters, c.numeric.tol))},
        {"sup_defect_norm", scalar(defect_norms.back(), {{"iterations", iters}, {"fibers", family.size()}})}};
    return out;
}

ExperimentOutput cauchy_diagnostics(const ExperimentConfig& c) {
    const MeasureModel mu = build_measure(*c.measure);
    const std::size_t n_trunc = c.numeric.truncation;
    const auto desc = single_fiber_module(c, mu, n_trunc + 2);
    const auto spec = SequenceSpec::stationary_exponential(desc);
    const ModuleVector x = build_target(desc, c);
    const std::size_t n_top = index_bound(spec, n_trunc + 1) - 1;

    const auto sample = DiskSample::spiral(c.numeric.sample_points, c.numeric.r_max);
    const double herglotz = herglotz_residual(mu, sample);
    const double b_at_zero = std::abs(herglotz_b(mu, 0.0));
    const double coeff_check = inner_coefficient_check(mu, std::max<std::size_t>(n_top, 1));
    const auto taylor = herglotz_taylor(mu, std::max<std::size_t>(n_top, 1));
    double inner_energy = 0.0;
    for (std::size_t n = 1; n < taylor.size(); ++n) inner_energy += std::norm(taylor[n]);

    AuxiliarySequence aux(spec);
    const PowerSeries vf = normalized_cauchy(aux, x, n_top);
    const PowerSeries vone = normalized_cauchy(aux, aux.term(0), n_top);
    double one_deviation = std::abs(vone.at(0) - 1.0);
    for (std::size_t n = 1; n <= n_top; ++n) one_deviation = std::max(one_deviation, std::abs(vone.at(n)));

    ExperimentOutput out;
    CsvTable ser{"series.csv", {"index", "re", "im"}, {}};
    for (std::size_t n = 0; n <= n_top; ++n) ser.add_row({str(n), str(vf.at(n).real()), str(vf.at(n).imag())});

    CsvTable ids = identity_table();
    const double self = inner(x, x).payload()(0, 0).real();
    double energy = 0.0;
    bool monotone = true;
    double previous = 0.0;
    for (std::size_t n = 0; n <= n_top; ++n) {
        energy += std::norm(vf.at(n));
        const double defect = std::abs(self - energy);
        if (n > 0 && defect > previous + 1e-12) monotone = false;
        previous = defect;
        ids.add_row({"isometry_defect", str(n), "0", str(defect)});
    }
    const std::size_t m_top = std::min(c.numeric.test_degree, n_top);
    double model_space = 0.0;
    for (std::size_t m = 0; m <= m_top; ++m) {
        const double r = model_space_residual(spec, x, n_top, m);
        model_space = std::max(model_space, r);
        ids.add_row({"model_space", str(n_top), str(m), str(r)});
    }
    const auto len = spec.length();
    const std::size_t orbit_max = len ? std::min<std::size_t>(30, *len - 2) : 30;
    const double orbit = shift_orbit_residual(spec, orbit_max);
    ids.add_row({"shift_orbit", str(orbit_max), "0", str(orbit)});
    ids.add_row({"inner_coefficients", str(n_top), "0", str(coeff_check)});
    ids.add_row({"herglotz", str(sample.points.size()), "0", str(herglotz)});
    ids.add_row({"normalized_one", str(n_top), "0", str(one_deviation)});
    out.tables = {ser, ids};

    out.summary["verdicts"] = {{"fiber_class", classify(mu) == MeasureClass::Singular   ? "Singular"
                                               : classify(mu) == MeasureClass::Lebesgue ? "Lebesgue"
                                                                                        : "Neither"},
                               {"isometry_defect_monotone", monotone}};
    const double final_defect = std::abs(self - energy);
    out.summary["scalars"] = {
        {"herglotz_residual", scalar(herglotz, {{"points", sample.points.size()}, {"r_max", sample.r_max}})},
        {"herglotz_b_at_zero", scalar(b_at_zero)},
        {"inner_coefficient_discrepancy", scalar(coeff_check, {{"truncation", n_top}, {"convention", "b_n = -c_n"}})},
        {"inner_function_energy", scalar(inner_energy, {{"truncation", n_top}})},
        {"isometry_defect", scalar(final_defect, {{"truncation", n_top}})},
        {"model_space_residual", scalar(model_space, {{"truncation", n_top}, {"test_degree", m_top}})},
        {"shift_orbit_residual", scalar(orbit, {{"n_max", orbit_max}})},
        {"normalized_one_deviation", scalar(one_deviation, {{"truncation", n_top}})}};
    return out;
}

ExperimentOutput frame_orbit(const ExperimentConfig& c) {
    const MeasureModel mu = build_measure(*c.measure);
    const auto desc = as_config_error("measure", [&] { return ModuleDescriptor::atomic_l2(mu); });
    const auto base = SequenceSpec::stationary_exponential(desc);
    const auto k = static_cast<Eigen::Index>(desc.flat_size());

    // Unitary for the weighted inner product: W^{-1/2} U W^{1/2}.
    Eigen::VectorXd root(k);
    const auto atoms = mu.atoms();
    for (Eigen::Index j = 0; j < k; ++j) root(j) = std::sqrt(atoms[static_cast<std::size_t>(j)].weight);
    const Eigen::MatrixXcd u = random_unitary(desc.flat_size(), *c.numeric.seed);
    const Eigen::MatrixXcd map = root.cwiseInverse().asDiagonal() * u * root.asDiagonal();
    const auto conj = SequenceSpec::conjugated(base, map);
    const Eigen::MatrixXcd map_adjoint = module_adjoint_map(desc, map);

    const std::size_t n_top = c.numeric.truncation;
    AuxiliarySequence aux_base(base);
    AuxiliarySequence aux_conj(conj);
    const ModuleVector x = build_target(desc, c);
    std::vector<ModuleVector> frame;
    CsvTable ids = identity_table();
    double worst_recursion = 0.0;
    for (std::size_t n = 0; n <= n_top; ++n) {
        frame.push_back(apply_flat(map, aux_base[n]));
        const double r = module_norm(aux_conj[n] - frame.back());
        worst_recursion = std::max(worst_recursion, r);
        ids.add_row({"conjugated_recursion", str(n), "0", str(r)});
    }
    const PowerSeries theta = analysis_operator(frame, x, n_top);
    const PowerSeries pulled = normalized_cauchy(aux_base, apply_flat(map_adjoint, x), n_top);
    double worst_analysis = 0.0;
    for (std::size_t n = 0; n <= n_top; ++n) {
        const double r = std::abs(theta.at(n) - pulled.at(n));
        worst_analysis = std::max(worst_analysis, r);
        ids.add_row({"analysis_operator", str(n), "0", str(r)});
    }

    const TracedRun run = traced_run(conj, x, c.numeric.max_iter, c.numeric.tol, nullptr);
    ExperimentOutput out;
    CsvTable conv = convergence_table();
    fill_convergence(conv, run.residuals, run.defects);
    out.tables = {conv, ids};

    const double unitary_defect = (map.adjoint() * root.cwiseAbs2().asDiagonal() * map -
                                   Eigen::MatrixXcd(root.cwiseAbs2().asDiagonal()))
                                      .norm();
    const auto iters = run.residuals.size();
    out.summary["verdicts"] = {{"converged", run.converged}};
    out.summary["scalars"] = {
        {"conjugated_recursion_residual", scalar(worst_recursion, {{"truncation", n_top}})},
        {"analysis_operator_residual", scalar(worst_analysis, {{"truncation", n_top}})},
        {"map_unitarity_defect", scalar(unitary_defect, {{"dimension", desc.flat_size()}})},
        {"final_residual", scalar(run.residuals.back(), run_context(iters, c.numeric.tol))},
        {"max_orthogonality_residual", scalar(run.max_orthogonality, {{"iterations", iters}})},
        {"max_partial_sum_residual", scalar(run.max_partial_sum, {{"iterations", iters}})}};
    return out;
}

}  // namespace

MeasureModel build_measure(const MeasureSpec& spec) {
    return as_config_error("measure", [&] {
        std::vector<Atom> atoms;
        for (const auto& a : spec.atoms) atoms.push_back({a.position, a.weight});
        if (spec.kind == "lebesgue") return MeasureModel::lebesgue();
        if (spec.kind == "mixture") return MeasureModel::mixture(spec.alpha, atoms);
        return MeasureModel::atomic(atoms);
    });
}

MeasureFamily build_family(const FamilySpec& spec) {
    return as_config_error("family", [&] {
        const auto grid = linear_grid(spec.grid_start, spec.grid_stop, spec.grid_points);
        const auto at = [spec](double x) {
            std::vector<Atom> atoms;
            for (const auto& a : spec.atoms) atoms.push_back({a.position, a.intercept + a.slope * x});
            if (atoms.empty()) return MeasureModel::lebesgue();
            if (spec.alpha > 0.0) return MeasureModel::mixture(spec.alpha, atoms);
            return MeasureModel::atomic(atoms);
        };
        return MeasureFamily::parametrized(grid, at, spec.continuity_budget, spec.check_frequency);
    });
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    ExperimentOutput out;
    switch (config.experiment) {
        case Experiment::FinitePeriodic: out = finite_periodic(config); break;
        case Experiment::StationarySingle: out = stationary_single(config); break;
        case Experiment::StationaryFamily: out = stationary_family(config); break;
        case Experiment::CauchyDiagnostics: out = cauchy_diagnostics(config); break;
        case Experiment::FrameOrbit: out = frame_orbit(config); break;
    }
    out.summary["experiment"] = to_string(config.experiment);
    out.summary["config"] = to_json(config);
    return out;
}

json run_and_emit(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentOutput out = run_experiment(config);
    const bool csv = std::find(config.output.formats.begin(), config.output.formats.end(), "csv") !=
                     config.output.formats.end();
    const bool js = std::find(config.output.formats.begin(), config.output.formats.end(), "json") !=
                    config.output.formats.end();
    json files = json::array();
    if (csv)
        for (const auto& t : out.tables) files.push_back((out_dir / t.name).string());
    if (js) files.push_back((out_dir / "summary.json").string());
    out.summary["files"] = files;
    out.summary["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_outputs(out_dir, out.tables, out.summary, csv, js);
    return out.summary;
}

}  // namespace kaczmod::cli
