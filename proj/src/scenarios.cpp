#include "hcm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hcm {

namespace {

constexpr int kProbes = 5;

ModuleElement rehome(const HilbertModule& target, const ModuleElement& x, const Tolerances& tol) {
    return target.element(x.vec(), tol);
}

ModuleElement unit_element(const HilbertModule& free_rank_one) {
    MatrixOverA v(free_rank_one.shape(), 1, 1);
    v.set_entry(0, 0, AlgebraElement::unit(free_rank_one.shape()));
    return free_rank_one.element(v);
}

} // namespace

CounterexampleInstance build_counterexample(int n, const Tolerances& tol) {
    if (n < 1) throw InvalidInput("build_counterexample: n >= 1 required");
    CounterexampleInstance inst;
    inst.n = n;
    inst.algebra = AlgebraShape(std::vector<int>(n, 1));
    inst.ambient = HilbertModule::free_module(inst.algebra, n);

    // N_n is generated by e_i * delta_i: coordinate i lives in block i only
    std::vector<ModuleElement> gens;
    gens.reserve(n);
    for (int i = 0; i < n; ++i) {
        MatrixOverA v(inst.algebra, n, 1);
        v.block(i)(i, 0) = 1.0;
        gens.push_back(inst.ambient.element(v, tol));
    }
    inst.n_sub = submodule_from_generators(inst.ambient, gens, tol);

    // block j of T is the column lambda_j e_j
    MatrixOverA tmat(inst.algebra, n, 1);
    inst.lambdas.resize(n);
    for (int j = 0; j < n; ++j) {
        inst.lambdas[j] = 1.0 / (j + 1);
        tmat.block(j)(j, 0) = inst.lambdas[j];
    }
    inst.t = AdjointableOperator(HilbertModule::free_module(inst.algebra, 1),
                                 inst.n_sub.as_module(), tmat);
    return inst;
}

CounterexampleDiagnostics counterexample_diagnostics(const CounterexampleInstance& inst, int m_tail,
                                                     const Tolerances& tol) {
    if (m_tail < 0 || m_tail >= inst.n)
        throw InvalidInput("counterexample_diagnostics: need 0 <= m_tail < n");
    CounterexampleDiagnostics out;

    const MatrixOverA gram = mul(adjoint(inst.t.mat()), inst.t.mat());
    const AlgebraElement sqrt_gram = sqrt_pos(gram.entry(0, 0), tol);
    const AlgebraElement inv_sqrt = pinv_pos(sqrt_gram, tol);
    out.inv_sqrt_norm = norm(inv_sqrt);
    out.cond = norm(sqrt_gram) * out.inv_sqrt_norm;

    // f = T (T*T)^{-1/2}
    const HilbertModule a_free = inst.t.source();
    MatrixOverA s_mat(inst.algebra, 1, 1);
    s_mat.set_entry(0, 0, inv_sqrt);
    const AdjointableOperator f = compose(inst.t, AdjointableOperator(a_free, a_free, s_mat));

    const ModuleElement one = unit_element(a_free);
    const ModuleElement f_one = f.apply(one);
    out.f_one_gram_defect =
        max_abs_diff(inner(f_one, f_one), AlgebraElement::unit(inst.algebra));

    // tails: ||f(1) - P_m f(1)|| keeps only coordinates > m
    const AlgebraElement zero = AlgebraElement::zero(inst.algebra);
    auto tail_norm = [&](int m) {
        MatrixOverA diff = f_one.vec();
        for (int i = 0; i < m; ++i) diff.set_entry(i, 0, zero);
        return element_norm(ModuleElement(f_one.parent(), diff));
    };
    out.tail_norms.reserve(std::max(inst.n - 1, 0));
    for (int m = 1; m < inst.n; ++m) out.tail_norms.push_back(tail_norm(m));
    out.tail_norm_at_m = tail_norm(m_tail);

    // f is isometric on the truncation
    Rng rng(12345);
    const AlgebraElement a = random_element(inst.algebra, rng);
    MatrixOverA av(inst.algebra, 1, 1);
    av.set_entry(0, 0, a);
    const ModuleElement ax = a_free.element(av, tol);
    const ModuleElement fax = f.apply(ax);
    out.f_isometry_defect = max_abs_diff(inner(fax, fax), inner(ax, ax));
    return out;
}

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::duality_suite: return "duality_suite";
        case ScenarioKind::isometry_suite: return "isometry_suite";
        case ScenarioKind::theorem10: return "theorem10";
        case ScenarioKind::lemma12: return "lemma12";
        case ScenarioKind::fredholm_cross_check: return "fredholm_cross_check";
        case ScenarioKind::counterexample: return "counterexample";
    }
    throw UnknownKind("unhandled scenario kind");
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
    if (name == "duality_suite" || name == "duality") return ScenarioKind::duality_suite;
    if (name == "isometry_suite" || name == "isometry") return ScenarioKind::isometry_suite;
    if (name == "theorem10") return ScenarioKind::theorem10;
    if (name == "lemma12") return ScenarioKind::lemma12;
    if (name == "fredholm_cross_check" || name == "fredholm") return ScenarioKind::fredholm_cross_check;
    if (name == "counterexample") return ScenarioKind::counterexample;
    throw UnknownKind("unknown scenario kind: " + name);
}

ModuleElement random_module_element(const HilbertModule& m, Rng& rng) {
    return m.project(random_matrix(m.shape(), m.ambient_rank(), 1, rng));
}

HilbertModule random_projective_module(const AlgebraShape& shape, int ambient_rank, Rng& rng,
                                       const Tolerances& tol) {
    MatrixOverA proj(shape, ambient_rank, ambient_rank);
    for (int b = 0; b < shape.num_blocks(); ++b) {
        const int dim = ambient_rank * shape.block_dim(b);
        const int rank = rng.uniform_int(0, dim);
        ComplexMatrix g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
        const Svd dec = svd(g, tol);
        const ComplexMatrix q = submatrix(dec.u, 0, 0, dim, rank);
        proj.block(b) = mul(q, adjoint(q));
    }
    return HilbertModule::from_projection(shape, proj, tol);
}

Submodule random_submodule(const HilbertModule& m, int num_generators, Rng& rng,
                           const Tolerances& tol) {
    if (num_generators < 1) throw InvalidInput("random_submodule: need at least one generator");
    std::vector<ModuleElement> gens;
    gens.reserve(num_generators);
    for (int i = 0; i < num_generators; ++i) gens.push_back(random_module_element(m, rng));
    return submodule_from_generators(m, gens, tol);
}

AdjointableOperator random_operator(const HilbertModule& source, const HilbertModule& target,
                                    Rng& rng) {
    return AdjointableOperator(source, target,
                               random_matrix(source.shape(), target.ambient_rank(),
                                             source.ambient_rank(), rng));
}

MatrixOverA random_unitary(const AlgebraShape& shape, int k, Rng& rng) {
    MatrixOverA u(shape, k, k);
    for (int b = 0; b < shape.num_blocks(); ++b) {
        const int dim = k * shape.block_dim(b);
        ComplexMatrix g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
        const Svd dec = svd(g);
        u.block(b) = mul(dec.u, adjoint(dec.v));
    }
    return u;
}

namespace {

std::vector<int> default_dims(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::lemma12:
        case ScenarioKind::fredholm_cross_check: return {3, 2};
        case ScenarioKind::counterexample: return {8};
        default: return {3};
    }
}

void run_duality(const Scenario& s, Report& rep) {
    Rng rng(s.seed);
    const int k = s.dims[0];
    const HilbertModule m = random_projective_module(s.shape, k, rng, s.tol);
    const ModuleElement x = random_module_element(m, rng);
    const ModuleElement y = random_module_element(m, rng);
    const DualElement f = hat(random_module_element(m, rng));

    double conj_eval = 0.0, ident = 0.0, iphi = 0.0, pairing = 0.0, anti = 0.0;
    for (int p = 0; p < kProbes; ++p) {
        const ModuleElement probe = random_module_element(m, rng);
        const AlgebraElement a = random_element(s.shape, rng);
        // dot(x)(f) = (f(x))^*
        conj_eval =
            std::max(conj_eval, max_abs_diff(dot(probe).evaluate(f), adjoint(f.evaluate(probe))));
        // I(D(x)) = hat(x), re-verified by evaluation
        ident = std::max(ident, max_abs_diff(I_map(dot(x)).evaluate(probe), hat(x).evaluate(probe)));
        // I . Phi = id on M'
        iphi = std::max(iphi, max_abs_diff(I_map(phi(f)).evaluate(probe), f.evaluate(probe)));
        // Definition bullet: f(m) = <m^, f>'
        pairing = std::max(pairing, max_abs_diff(f.evaluate(probe), dual_inner(hat(probe), f)));
        // anti-A-linearity: f(m a) = a^* f(m)
        anti = std::max(anti, max_abs_diff(f.evaluate(module_action(probe, a)),
                                           mul(adjoint(a), f.evaluate(probe))));
    }
    rep.residuals["bidual_evaluation_conjugation"] = conj_eval;
    rep.residuals["double_dual_identification"] = ident;
    rep.residuals["i_phi_identity"] = iphi;
    rep.residuals["def_hilbert_dual_pairing"] = pairing;
    rep.residuals["anti_linearity"] = anti;

    // the bidual product extends the original one: <D(x), D(y)>'' = <x, y>
    rep.residuals["bidual_product_extension"] = max_abs_diff(pas_inner(dot(x), dot(y)), inner(x, y));

    // positivity of the bidual product
    const AlgebraElement pas_xx = pas_inner(dot(x), dot(x));
    double neg = 0.0;
    for (int b = 0; b < pas_xx.num_blocks(); ++b) {
        const HermEig eig = herm_eig(pas_xx.block(b), s.tol);
        for (double l : eig.eigenvalues) neg = std::max(neg, -l);
    }
    rep.residuals["pas_inner_positivity"] = neg;

    // norm coincidences
    rep.residuals["functional_norm_coincidence"] =
        std::abs(f.operator_norm() - std::sqrt(norm(dual_inner(f, f))));
    rep.residuals["hat_isometry"] = std::abs(hat(x).operator_norm() - element_norm(x));
    rep.residuals["pas_norm_coincidence"] =
        std::abs(std::sqrt(norm(pas_inner(dot(x), dot(x)))) - I_map(dot(x)).operator_norm());
    rep.residuals["phi_isometry"] = std::abs(phi(f).operator_norm() - f.operator_norm());

    // self-duality witness: the Riesz vector recovered from an evaluation
    // table on a spanning set is the original one
    const std::vector<ModuleElement> span = m.spanning_elements();
    std::vector<AlgebraElement> values;
    values.reserve(span.size());
    for (const auto& sp : span) values.push_back(f.evaluate(sp));
    const DualElement recovered = riesz_from_evaluations(m, span, values, s.tol);
    rep.residuals["riesz_uniqueness"] =
        max_abs_diff(recovered.riesz().vec(), f.riesz().vec());
}

void run_isometry(const Scenario& s, Report& rep) {
    Rng rng(s.seed);
    const int k = s.dims[0];
    const HilbertModule m = random_projective_module(s.shape, k, rng, s.tol);
    const int ngens = rng.uniform_int(1, std::max(1, k));
    const Submodule sub = random_submodule(m, ngens, rng, s.tol);

    const JSharpQPair jq = j_sharp_q_pair(sub);
    const HilbertModule kpp_mod = jq.biperp.as_module();
    const HilbertModule k_dual = sub.as_module();

    rep.residuals["q_jsharp_identity"] =
        max_abs_diff(compose(jq.q, jq.j_sharp).mat(), jq.biperp.projection());
    rep.residuals["jsharp_q_identity"] =
        max_abs_diff(compose(jq.j_sharp, jq.q).mat(), sub.projection());

    const AdjointableOperator j = inclusion(sub);
    double isometry = 0.0, eval_contract = 0.0, jk_hat = 0.0;
    for (int p = 0; p < kProbes; ++p) {
        const ModuleElement mm = random_module_element(kpp_mod, rng);
        const ModuleElement jm = jq.j_sharp.apply(mm);
        // <J# m, J# m>' = <m, m>
        isometry = std::max(isometry, max_abs_diff(inner(jm, jm), inner(mm, mm)));
        // (J# m)(k) = <J(k), m>
        const ModuleElement kk = random_module_element(k_dual, rng);
        const AlgebraElement lhs = DualElement(k_dual, jm).evaluate(kk);
        const AlgebraElement rhs =
            inner(rehome(m, j.apply(kk), s.tol), rehome(m, mm, s.tol));
        eval_contract = std::max(eval_contract, max_abs_diff(lhs, rhs));
        // J#(J(k)) = k^
        const ModuleElement jk = rehome(kpp_mod, j.apply(kk), s.tol);
        jk_hat = std::max(jk_hat, max_abs_diff(jq.j_sharp.apply(jk).vec(), kk.vec()));
    }
    rep.residuals["exact_isometry"] = isometry;
    rep.residuals["jsharp_evaluation_contract"] = eval_contract;
    rep.residuals["jsharp_of_inclusion_is_hat"] = jk_hat;
}

void run_theorem10(const Scenario& s, Report& rep) {
    Rng rng(s.seed);
    const int k = s.dims[0];
    const HilbertModule m = random_projective_module(s.shape, k, rng, s.tol);
    const HilbertModule free_target = HilbertModule::free_module(s.shape, k);
    const AdjointableOperator t0 = random_operator(m, free_target, rng);
    const Submodule im = image(t0, s.tol);
    const HilbertModule n = im.as_module();
    const AdjointableOperator t(m, n, t0.mat());

    try {
        const PolarIsomorphismResult res = polar_isomorphism(t, s.tol);
        rep.values["cond_s"] = res.cond_s;
        rep.values["sigma_min_s"] = res.sigma_min_s;
        rep.values["sigma_max_s"] = res.sigma_max_s;
        rep.residuals["vstar_v_identity"] =
            max_abs_diff(compose(adjoint(res.iso), res.iso).mat(), m.projection());
        rep.residuals["v_vstar_identity"] =
            max_abs_diff(compose(res.iso, adjoint(res.iso)).mat(), n.projection());
        double pres = 0.0;
        for (int p = 0; p < kProbes; ++p) {
            const ModuleElement x = random_module_element(m, rng);
            const ModuleElement y = random_module_element(m, rng);
            pres = std::max(pres, max_abs_diff(inner(res.iso.apply(x), res.iso.apply(y)),
                                               inner(x, y)));
        }
        rep.residuals["inner_product_preserved"] = pres;
    } catch (const Error& e) {
        rep.flags.push_back(std::string("polar_isomorphism: ") + e.what());
    }
}

void run_lemma12(const Scenario& s, Report& rep) {
    Rng rng(s.seed);
    const int k = s.dims[0];
    const int l = s.dims.size() > 1 ? s.dims[1] : s.dims[0];
    const HilbertModule m = random_projective_module(s.shape, k, rng, s.tol);
    const int ngens = rng.uniform_int(1, std::max(1, k));
    const Submodule sub = random_submodule(m, ngens, rng, s.tol);

    const ComplementDecomposition res = complement_decomposition(sub, s.tol);
    rep.residuals["rr_star_identity"] = res.rr_star_identity_residual;
    rep.residuals["rstar_r_projection"] = res.projection_residual;
    rep.residuals["kernel_matches_perp"] = res.kernel_matches_perp_residual;
    rep.residuals["complement_sum"] =
        max_abs_diff(add(res.biperp.projection(), res.perp.projection()), m.projection());
    rep.residuals["complement_orthogonality"] =
        op_norm(mul(res.biperp.projection(), res.perp.projection()));
    rep.residuals["biperp_equals_sub"] =
        max_abs_diff(res.biperp.projection(), sub.projection());

    double ortho = 0.0;
    const HilbertModule sub_mod = sub.as_module();
    const HilbertModule perp_mod = res.perp.as_module();
    for (int p = 0; p < kProbes; ++p) {
        const ModuleElement x = random_module_element(sub_mod, rng);
        const ModuleElement y = random_module_element(perp_mod, rng);
        ortho = std::max(ortho, norm(inner(rehome(m, x, s.tol), rehome(m, y, s.tol))));
    }
    rep.residuals["submodule_perp_inner"] = ortho;

    // (Im F)^perp = Ker F*
    const HilbertModule src = random_projective_module(s.shape, k, rng, s.tol);
    const HilbertModule tgt = random_projective_module(s.shape, l, rng, s.tol);
    const AdjointableOperator f = random_operator(src, tgt, rng);
    rep.residuals["image_perp_equals_kernel_adjoint"] =
        max_abs_diff(orthogonal_complement(image(f, s.tol)).projection(),
                     kernel(adjoint(f), s.tol).projection());
}

void run_fredholm(const Scenario& s, Report& rep) {
    Rng rng(s.seed);
    const HilbertModule m = random_projective_module(s.shape, s.dims[0], rng, s.tol);
    const HilbertModule n =
        random_projective_module(s.shape, s.dims.size() > 1 ? s.dims[1] : s.dims[0], rng, s.tol);
    const AdjointableOperator f = random_operator(m, n, rng);

    const IndexTheoremReport t16 = verify_index_theorem(f, s.tol);
    for (const auto& [name, value] : t16.residuals) rep.residuals[name] = value;
    for (const auto& flag : t16.flags) rep.flags.push_back(flag);
    rep.indices["index_decomp"] = t16.index_decomposition.ranks();
    rep.indices["index_kernels"] = t16.index_kernels.ranks();
    rep.indices["euler"] = sub(k0_class(m, s.tol), k0_class(n, s.tol)).ranks();
    if (!t16.indices_equal) rep.flags.push_back("indices differ");
}

void run_counterexample(const Scenario& s, Report& rep) {
    const int n = s.dims[0];
    const CounterexampleInstance inst = build_counterexample(n, s.tol);
    const CounterexampleDiagnostics diag =
        counterexample_diagnostics(inst, std::max(n - 1, 0), s.tol);

    rep.values["n"] = n;
    rep.values["inv_sqrt_norm"] = diag.inv_sqrt_norm;
    rep.values["cond"] = diag.cond;
    rep.residuals["inv_sqrt_norm_rel_dev"] = std::abs(diag.inv_sqrt_norm - n) / n;
    double tail_dev = 0.0;
    for (double t : diag.tail_norms) tail_dev = std::max(tail_dev, std::abs(t - 1.0));
    rep.residuals["tail_norm_deviation"] = tail_dev;
    rep.residuals["f_isometry_defect"] = diag.f_isometry_defect;
    rep.residuals["f_one_gram_defect"] = diag.f_one_gram_defect;

    // singular values of T are exactly {1/i}
    std::vector<double> sigmas;
    for (int b = 0; b < inst.t.mat().num_blocks(); ++b) {
        const Svd dec = svd(inst.t.mat().block(b), s.tol);
        for (double v : dec.sigma)
            if (v > 0.0) sigmas.push_back(v);
    }
    std::sort(sigmas.begin(), sigmas.end(), std::greater<>());
    double sig_dev = sigmas.size() == inst.lambdas.size() ? 0.0 : 1e300;
    if (sigmas.size() == inst.lambdas.size())
        for (size_t i = 0; i < sigmas.size(); ++i)
            sig_dev = std::max(sig_dev, std::abs(sigmas[i] - inst.lambdas[i]));
    rep.residuals["t_singular_values_exact"] = sig_dev;
}

} // namespace

Scenario random_scenario(ScenarioKind kind, std::uint64_t seed, const AlgebraShape& shape,
                         const std::vector<int>& dims, const Tolerances& tol) {
    tol.validate();
    Scenario s;
    s.kind = kind;
    s.seed = seed;
    s.shape = shape;
    s.dims = dims.empty() ? default_dims(kind) : dims;
    s.tol = tol;
    for (int d : s.dims)
        if (d < 1) throw InvalidInput("random_scenario: dims must be positive");
    if (kind == ScenarioKind::counterexample)
        s.shape = AlgebraShape(std::vector<int>(s.dims[0], 1));
    return s;
}

Report run_scenario(const Scenario& s) {
    s.tol.validate();
    Report rep;
    rep.scenario = s;
    switch (s.kind) {
        case ScenarioKind::duality_suite: run_duality(s, rep); break;
        case ScenarioKind::isometry_suite: run_isometry(s, rep); break;
        case ScenarioKind::theorem10: run_theorem10(s, rep); break;
        case ScenarioKind::lemma12: run_lemma12(s, rep); break;
        case ScenarioKind::fredholm_cross_check: run_fredholm(s, rep); break;
        case ScenarioKind::counterexample: run_counterexample(s, rep); break;
    }
    rep.passed = rep.flags.empty();
    for (const auto& [name, value] : rep.residuals)
        if (!(value <= s.tol.invariant_abs)) rep.passed = false;
    return rep;
}

std::vector<DivergenceRow> divergence_table(const std::vector<int>& ns, const Tolerances& tol) {
    std::vector<DivergenceRow> rows;
    rows.reserve(ns.size());
    for (int n : ns) {
        const CounterexampleInstance inst = build_counterexample(n, tol);
        const CounterexampleDiagnostics diag =
            counterexample_diagnostics(inst, std::max(n - 1, 0), tol);
        DivergenceRow row;
        row.n = n;
        row.inv_sqrt_norm = diag.inv_sqrt_norm;
        row.tail_norm = 0.0;
        for (double t : diag.tail_norms) row.tail_norm = std::max(row.tail_norm, t);
        rows.push_back(row);
    }
    return rows;
}

std::string divergence_csv(const std::vector<DivergenceRow>& rows) {
    std::string out = "n,inv_sqrt_norm,tail_norm\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", row.n, row.inv_sqrt_norm,
                      row.tail_norm);
        out += buf;
    }
    return out;
}

} // namespace hcm
