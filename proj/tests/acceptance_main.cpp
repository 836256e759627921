// Acceptance suite: one check per shipped guarantee, each printed as a single
// PASS/FAIL line. Exits with the number of failed criteria.
//
// Usage: hcm_acceptance [path-to-hcm-cli] [scratch-dir]
// The CLI path and scratch dir are needed only for the determinism criterion.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hcm/serialization.hpp"
#include "oracle.hpp"

using namespace hcm;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

const std::vector<std::vector<int>> kShapeDims = {{1}, {2}, {1, 2}, {1, 1, 1}, {2, 3}};

// projective module with every block rank >= 1 (rejection off the shared rng)
HilbertModule module_rank_ge1(const AlgebraShape& shape, int k, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const HilbertModule m = random_projective_module(shape, k, rng);
        const K0Class cls = k0_class(m);
        const bool ok = std::all_of(cls.ranks().begin(), cls.ranks().end(),
                                    [](std::int64_t r) { return r >= 1; });
        if (ok) return m;
    }
    throw Error("module_rank_ge1: rejection sampling failed");
}

struct Instance {
    HilbertModule m, n;
    AdjointableOperator f;
};

Instance make_instance(std::uint64_t seed) {
    const AlgebraShape shape(kShapeDims[seed % kShapeDims.size()]);
    Rng rng(seed * 1000003ULL + 17ULL);
    const int km = rng.uniform_int(2, 4);
    const int kn = rng.uniform_int(2, 4);
    Instance inst;
    // the restricted operator must see at least two singular directions, or
    // no interior threshold gap exists for the alternative decompositions
    for (int attempt = 0; attempt < 64; ++attempt) {
        inst.m = module_rank_ge1(shape, km, rng);
        inst.n = module_rank_ge1(shape, kn, rng);
        const K0Class cm = k0_class(inst.m), cn = k0_class(inst.n);
        std::int64_t dim = 0;
        for (size_t b = 0; b < cm.ranks().size(); ++b)
            dim += std::min(cm.ranks()[b], cn.ranks()[b]);
        if (dim >= 2) break;
    }
    inst.f = random_operator(inst.m, inst.n, rng);
    return inst;
}

// all restricted singular values of f, descending
std::vector<double> restricted_sigmas(const AdjointableOperator& f) {
    const auto bm = range_basis(f.source().projection());
    const auto bn = range_basis(f.target().projection());
    std::vector<double> sig;
    for (int b = 0; b < f.mat().num_blocks(); ++b) {
        const ComplexMatrix r = mul(adjoint(bn[b]), mul(f.mat().block(b), bm[b]));
        for (double s : svd(r).sigma) sig.push_back(s);
    }
    std::sort(sig.begin(), sig.end(), std::greater<>());
    return sig;
}

Criterion criterion1() {
    int mismatches = 0, ambiguities = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Instance inst = make_instance(seed);
        try {
            const FredholmData data = mf_decompose(inst.f);
            const K0Class via_kernels = index_via_kernels(inst.f);
            if (!(data.index == via_kernels)) ++mismatches;
        } catch (const ToleranceAmbiguity&) {
            ++ambiguities;
        }
    }
    std::ostringstream detail;
    detail << "100 operators over 5 shapes; " << mismatches << " index mismatches, " << ambiguities
           << " ambiguity flags";
    return {1, "Fredholm index cross-check (decomposition vs kernels)",
            mismatches == 0 && ambiguities == 0, detail.str()};
}

Criterion criterion2() {
    int failures = 0, instances_checked = 0;
    std::string first_failure;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Instance inst = make_instance(seed);
        const K0Class euler = sub(k0_class(inst.m), k0_class(inst.n));
        const std::vector<double> sig = restricted_sigmas(inst.f);
        if (sig.empty() || sig[0] == 0.0) continue;

        // three alternative thresholds: above everything, in the widest
        // interior gap, and just above the numerical-zero floor
        std::vector<std::pair<double, double>> cuts;  // (cutoff, separation)
        cuts.emplace_back(sig[0] * 100.0, 10.0);
        double best_ratio = 0.0, best_mid = 0.0;
        for (size_t i = 0; i + 1 < sig.size(); ++i) {
            if (sig[i + 1] <= sig[0] * 1e-12) break;  // numerically zero from here on
            const double ratio = sig[i] / sig[i + 1];
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best_mid = std::sqrt(sig[i] * sig[i + 1]);
            }
        }
        if (best_ratio > 1.000001)
            cuts.emplace_back(best_mid, std::min(3.0, std::sqrt(best_ratio) * 0.999));
        double smallest = sig[0];
        for (double s : sig)
            if (s > sig[0] * 1e-12) smallest = s;
        cuts.emplace_back(smallest / 100.0, 3.0);

        if (cuts.size() < 3) continue;  // no usable interior gap; instance skipped
        ++instances_checked;
        for (const auto& [cutoff, separation] : cuts) {
            try {
                const FredholmData alt = mf_decompose_with_cutoff(inst.f, cutoff, separation);
                if (!(alt.index == euler)) {
                    ++failures;
                    if (first_failure.empty())
                        first_failure = "seed " + std::to_string(seed) + ": index " +
                                        alt.index.to_string() + " != " + euler.to_string();
                }
            } catch (const ToleranceAmbiguity& e) {
                ++failures;
                if (first_failure.empty())
                    first_failure = "seed " + std::to_string(seed) + ": " + e.what();
            }
        }
    }
    std::ostringstream detail;
    detail << instances_checked << " instances x 3 cutoffs; " << failures << " failures";
    if (!first_failure.empty()) detail << " (" << first_failure << ")";
    return {2, "decomposition-independence of the index", failures == 0 && instances_checked == 100,
            detail.str()};
}

Criterion run_suite(int id, const std::string& name, ScenarioKind kind, int seeds,
                    const std::vector<std::vector<int>>& shapes,
                    const std::function<bool(const Report&)>& ok) {
    int failures = 0;
    std::string first;
    for (const auto& dims : shapes) {
        const AlgebraShape shape(dims);
        for (int seed = 0; seed < seeds; ++seed) {
            const Report rep = run_scenario(random_scenario(kind, seed, shape));
            if (!ok(rep)) {
                ++failures;
                if (first.empty()) {
                    std::ostringstream os;
                    os << "shape ";
                    for (int d : dims) os << d << ",";
                    os << " seed " << seed;
                    for (const auto& [k, v] : rep.residuals)
                        if (v > 1e-8) os << " " << k << "=" << v;
                    for (const auto& f : rep.flags) os << " [" << f << "]";
                    first = os.str();
                }
            }
        }
    }
    std::ostringstream detail;
    detail << shapes.size() * seeds << " runs; " << failures << " failures";
    if (!first.empty()) detail << " (" << first << ")";
    return {id, name, failures == 0, detail.str()};
}

bool residual_below(const Report& rep, const std::string& key, double bound) {
    const auto it = rep.residuals.find(key);
    return it != rep.residuals.end() && it->second <= bound;
}

Criterion criterion3() {
    return run_suite(3, "duality suite residuals <= 1e-8", ScenarioKind::duality_suite, 50,
                     kShapeDims, [](const Report& rep) {
                         if (!rep.flags.empty()) return false;
                         for (const auto& [name, value] : rep.residuals)
                             if (!(value <= 1e-8)) return false;
                         return true;
                     });
}

Criterion criterion4() {
    return run_suite(4, "isometric pair identities <= 1e-8", ScenarioKind::isometry_suite, 50,
                     {{1, 2}}, [](const Report& rep) {
                         return rep.flags.empty() &&
                                residual_below(rep, "q_jsharp_identity", 1e-8) &&
                                residual_below(rep, "jsharp_q_identity", 1e-8) &&
                                residual_below(rep, "exact_isometry", 1e-8);
                     });
}

Criterion criterion5() {
    return run_suite(5, "polar-type isomorphism unitarity <= 1e-8", ScenarioKind::theorem10, 50,
                     {{1, 2}}, [](const Report& rep) {
                         return rep.flags.empty() &&
                                residual_below(rep, "vstar_v_identity", 1e-8) &&
                                residual_below(rep, "v_vstar_identity", 1e-8);
                     });
}

Criterion criterion6() {
    return run_suite(6, "orthogonal decomposition identities", ScenarioKind::lemma12, 50, {{1, 2}},
                     [](const Report& rep) {
                         return rep.flags.empty() &&
                                residual_below(rep, "rr_star_identity", 1e-9) &&
                                residual_below(rep, "kernel_matches_perp", 1e-8) &&
                                residual_below(rep, "image_perp_equals_kernel_adjoint", 1e-8);
                     });
}

Criterion criterion7() {
    int failures = 0;
    std::string first;
    for (int n : {2, 4, 8, 16, 32, 64}) {
        const CounterexampleInstance inst = build_counterexample(n);
        const CounterexampleDiagnostics diag = counterexample_diagnostics(inst, n - 1);
        bool ok = std::abs(diag.inv_sqrt_norm - n) <= 1e-9 * n;
        for (double t : diag.tail_norms)
            if (std::abs(t - 1.0) > 1e-10) ok = false;
        if (!ok) {
            ++failures;
            if (first.empty())
                first = "n=" + std::to_string(n) + " norm=" + std::to_string(diag.inv_sqrt_norm);
        }
    }
    std::ostringstream detail;
    detail << "n in {2,4,8,16,32,64}; " << failures << " failures";
    if (!first.empty()) detail << " (" << first << ")";
    return {7, "counterexample divergence signatures", failures == 0, detail.str()};
}

Criterion criterion8() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const AlgebraShape shape(kShapeDims[seed % kShapeDims.size()]);
        Rng rng(seed * 7919ULL + 3ULL);
        const AlgebraElement a = random_element(shape, rng);
        const AlgebraElement b = random_element(shape, rng);

        worst = std::max(worst, oracle::max_abs_diff(
            oracle::mul(oracle::flatten_element(a), oracle::flatten_element(b)),
            oracle::flatten_element(mul(a, b))));
        worst = std::max(worst, oracle::max_abs_diff(
            oracle::add(oracle::flatten_element(a), oracle::flatten_element(b)),
            oracle::flatten_element(add(a, b))));
        worst = std::max(worst, oracle::max_abs_diff(
            oracle::adjoint(oracle::flatten_element(a)),
            oracle::flatten_element(adjoint(a))));

        const HilbertModule m = random_projective_module(shape, 3, rng);
        const ModuleElement x = random_module_element(m, rng);
        const ModuleElement y = random_module_element(m, rng);
        worst = std::max(worst, oracle::max_abs_diff(
            oracle::mul(oracle::adjoint(oracle::flatten_matrix(x.vec())),
                        oracle::flatten_matrix(y.vec())),
            oracle::flatten_element(inner(x, y))));
        worst = std::max(worst, oracle::max_abs_diff(
            oracle::mul(oracle::flatten_matrix(x.vec()), oracle::flatten_element(a)),
            oracle::flatten_matrix(module_action(x, a).vec())));
        worst = std::max(worst, oracle::max_abs_diff(
            oracle::mul(oracle::flatten_matrix(m.projection()), oracle::flatten_matrix(x.vec())),
            oracle::flatten_matrix(x.vec())));
    }
    std::ostringstream detail;
    detail << "100 instances; worst deviation " << worst;
    return {8, "agreement with the flattened faithful representation", worst <= 1e-10,
            detail.str()};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Criterion criterion9(const std::string& cli, const std::string& scratch) {
    if (cli.empty())
        return {9, "CLI determinism", false, "no CLI path supplied on the command line"};
    const std::string out1 = scratch + "/rep1.json";
    const std::string out2 = scratch + "/rep2.json";
    const std::string base =
        cli + " verify --suite fredholm --shape 1,2 --seeds 0..4 --out ";
    if (std::system((base + out1).c_str()) != 0)
        return {9, "CLI determinism", false, "first verify run failed"};
    if (std::system((base + out2).c_str()) != 0)
        return {9, "CLI determinism", false, "second verify run failed"};
    const std::string r1 = read_file(out1);
    const std::string r2 = read_file(out2);
    if (r1.empty() || r1 != r2)
        return {9, "CLI determinism", false, "verify outputs differ between runs"};

    const std::string csv_base = cli + " counterexample --n 2..8 --out ";
    if (std::system((csv_base + scratch + "/div1.csv").c_str()) != 0 ||
        std::system((csv_base + scratch + "/div2.csv").c_str()) != 0)
        return {9, "CLI determinism", false, "counterexample run failed"};
    if (read_file(scratch + "/div1.csv") != read_file(scratch + "/div2.csv"))
        return {9, "CLI determinism", false, "counterexample outputs differ"};
    return {9, "CLI determinism", true, "verify + counterexample outputs byte-identical"};
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::string scratch = argc > 2 ? argv[2] : ".";

    std::vector<Criterion> results;
    results.push_back(criterion1());
    results.push_back(criterion2());
    results.push_back(criterion3());
    results.push_back(criterion4());
    results.push_back(criterion5());
    results.push_back(criterion6());
    results.push_back(criterion7());
    results.push_back(criterion8());
    results.push_back(criterion9(cli, scratch));

    int failures = 0;
    for (const auto& c : results) {
        if (!c.pass) ++failures;
        std::printf("criterion %d [%s] %s — %s\n", c.id, c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
    }
    if (failures) std::printf("%d of %zu criteria failed\n", failures, results.size());
    return failures;
}
