#pragma once

#include <json.hpp>

#include "hcm/scenarios.hpp"

namespace hcm {

using json = nlohmann::json;

/// JSON schemas (all carry their payload only; module/operator objects embed
/// the shapes they need):
///   AlgebraShape    -> [n_1, ..., n_s]
///   AlgebraElement  -> { "shape", "blocks": [ [[re, im], ...] row-major ] }
///   MatrixOverA     -> { "shape", "rows", "cols", "blocks": flattened blocks }
///   HilbertModule   -> { "shape", "ambient_rank", "proj" }
///   ModuleElement   -> { "module", "vec" }
///   AdjointableOperator -> { "source", "target", "mat" }
///   K0Class         -> { "shape", "ranks" }
///   Scenario        -> { "schema": 1, "kind", "seed", "shape", "dims", "tolerances" }
///   Report          -> { "schema": 1, "scenario", "residuals", "values",
///                        "indices", "flags", "passed" }

json to_json(const AlgebraShape& shape);
AlgebraShape shape_from_json(const json& j);

json to_json(const ComplexMatrix& m);  ///< row-major [re, im] pairs (dims supplied by context)
ComplexMatrix matrix_from_json(const json& j, int rows, int cols);

json to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const json& j);

json to_json(const MatrixOverA& m);
MatrixOverA matrix_over_a_from_json(const json& j);

json to_json(const HilbertModule& m);
HilbertModule module_from_json(const json& j);

json to_json(const ModuleElement& x);
ModuleElement module_element_from_json(const json& j);

json to_json(const AdjointableOperator& t);
AdjointableOperator operator_from_json(const json& j);

json to_json(const K0Class& k);

json to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const json& j);

json to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

json to_json(const Report& r);

} // namespace hcm
