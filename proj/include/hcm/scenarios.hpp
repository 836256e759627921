#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcm/fredholm.hpp"

namespace hcm {

/// The truncated counterexample: over A = C^n (n commutative blocks), the
/// submodule N_n of the free module A^n cut out by a_i = delta_i a_i, and the
/// operator T(a) = (lambda_1 delta_1 a, ..., lambda_n delta_n a) with
/// lambda_i = 1/i. Its singular values are exactly {1/i}.
struct CounterexampleInstance {
    int n = 0;
    AlgebraShape algebra;
    HilbertModule ambient;        ///< free A^n
    Submodule n_sub;              ///< N_n
    AdjointableOperator t;        ///< A -> N_n
    std::vector<double> lambdas;  ///< 1/i
};

CounterexampleInstance build_counterexample(int n, const Tolerances& tol = {});

/// Divergence signatures of the truncation: the norm of (T*T)^{-1/2} grows
/// like n while the tails of f(1) = (delta_1, ..., delta_n) never shrink.
struct CounterexampleDiagnostics {
    double inv_sqrt_norm = 0.0;          ///< ||(T*T)^{-1/2}|| (equals n)
    double cond = 0.0;                   ///< ||(T*T)^{1/2}|| * ||(T*T)^{-1/2}|| (equals n)
    std::vector<double> tail_norms;      ///< ||f(1) - P_m f(1)|| for m = 1..n-1
    double tail_norm_at_m = 0.0;         ///< the requested m_tail entry
    double f_isometry_defect = 0.0;      ///< ||<f(a), f(a)> - <a, a>|| on a seeded a
    double f_one_gram_defect = 0.0;      ///< ||<f(1), f(1)> - 1_A||
};

CounterexampleDiagnostics counterexample_diagnostics(const CounterexampleInstance& inst, int m_tail,
                                                     const Tolerances& tol = {});

enum class ScenarioKind {
    duality_suite,
    isometry_suite,
    theorem10,
    lemma12,
    fredholm_cross_check,
    counterexample,
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

/// One seeded verification instance. `dims` are ambient ranks (for the
/// counterexample kind, dims[0] is the truncation size n).
struct Scenario {
    ScenarioKind kind = ScenarioKind::duality_suite;
    std::uint64_t seed = 0;
    AlgebraShape shape;
    std::vector<int> dims;
    Tolerances tol;
};

/// Deterministic function of a Scenario. `residuals` must all be below
/// tol.invariant_abs and `flags` empty for `passed`.
struct Report {
    int schema = 1;
    Scenario scenario;
    std::map<std::string, double> residuals;
    std::map<std::string, double> values;  ///< non-residual diagnostics (cond numbers etc.)
    std::map<std::string, std::vector<std::int64_t>> indices;
    std::vector<std::string> flags;
    bool passed = false;
};

Scenario random_scenario(ScenarioKind kind, std::uint64_t seed, const AlgebraShape& shape,
                         const std::vector<int>& dims = {}, const Tolerances& tol = {});

Report run_scenario(const Scenario& s);

/// Seeded instance helpers shared by the suites and the tests.
ModuleElement random_module_element(const HilbertModule& m, Rng& rng);
/// Random projective module in A^k: per block an orthonormal frame of random
/// dimension (any K0 class in the positive cone can appear).
HilbertModule random_projective_module(const AlgebraShape& shape, int ambient_rank, Rng& rng,
                                       const Tolerances& tol = {});
Submodule random_submodule(const HilbertModule& m, int num_generators, Rng& rng,
                           const Tolerances& tol = {});
AdjointableOperator random_operator(const HilbertModule& source, const HilbertModule& target,
                                    Rng& rng);
/// Unitary on the free module A^k (per block, unitary factor of a Ginibre sample).
MatrixOverA random_unitary(const AlgebraShape& shape, int k, Rng& rng);

/// Rows of the divergence table emitted by the CLI.
struct DivergenceRow {
    int n = 0;
    double inv_sqrt_norm = 0.0;
    double tail_norm = 0.0;  ///< max over m < n
};

std::vector<DivergenceRow> divergence_table(const std::vector<int>& ns, const Tolerances& tol = {});
std::string divergence_csv(const std::vector<DivergenceRow>& rows);

} // namespace hcm
