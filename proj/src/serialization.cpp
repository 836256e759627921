#include "hcm/serialization.hpp"

namespace hcm {

namespace {

json require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw InvalidInput(std::string("serialization: missing field '") + key + "'");
    return j.at(key);
}

} // namespace

json to_json(const AlgebraShape& shape) { return json(shape.block_dims()); }

AlgebraShape shape_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("shape: expected an array of block dims");
    std::vector<int> dims;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<int>() < 1)
            throw InvalidInput("shape: block dims must be positive integers");
        dims.push_back(v.get<int>());
    }
    return AlgebraShape(std::move(dims));
}

json to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return entries;
}

ComplexMatrix matrix_from_json(const json& j, int rows, int cols) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
        throw InvalidInput("matrix: expected " + std::to_string(rows * cols) + " [re, im] pairs");
    ComplexMatrix m(rows, cols);
    int idx = 0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c, ++idx) {
            const json& e = j.at(idx);
            if (!e.is_array() || e.size() != 2)
                throw InvalidInput("matrix: entries must be [re, im] pairs");
            m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    if (!m.all_finite()) throw InvalidInput("matrix: non-finite entry");
    return m;
}

json to_json(const AlgebraElement& a) {
    json blocks = json::array();
    for (int i = 0; i < a.num_blocks(); ++i) blocks.push_back(to_json(a.block(i)));
    return json{{"shape", to_json(a.shape())}, {"blocks", blocks}};
}

AlgebraElement element_from_json(const json& j) {
    const AlgebraShape shape = shape_from_json(require(j, "shape"));
    const json blocks = require(j, "blocks");
    if (!blocks.is_array() || static_cast<int>(blocks.size()) != shape.num_blocks())
        throw InvalidInput("element: block count mismatch");
    std::vector<ComplexMatrix> mats;
    for (int i = 0; i < shape.num_blocks(); ++i)
        mats.push_back(matrix_from_json(blocks.at(i), shape.block_dim(i), shape.block_dim(i)));
    return AlgebraElement(shape, std::move(mats));
}

json to_json(const MatrixOverA& m) {
    json blocks = json::array();
    for (int i = 0; i < m.num_blocks(); ++i) blocks.push_back(to_json(m.block(i)));
    return json{{"shape", to_json(m.shape())},
                {"rows", m.rows()},
                {"cols", m.cols()},
                {"blocks", blocks}};
}

MatrixOverA matrix_over_a_from_json(const json& j) {
    const AlgebraShape shape = shape_from_json(require(j, "shape"));
    const int rows = require(j, "rows").get<int>();
    const int cols = require(j, "cols").get<int>();
    if (rows < 0 || cols < 0) throw InvalidInput("matrix over A: negative dimensions");
    const json blocks = require(j, "blocks");
    if (!blocks.is_array() || static_cast<int>(blocks.size()) != shape.num_blocks())
        throw InvalidInput("matrix over A: block count mismatch");
    std::vector<ComplexMatrix> mats;
    for (int i = 0; i < shape.num_blocks(); ++i) {
        const int n = shape.block_dim(i);
        mats.push_back(matrix_from_json(blocks.at(i), rows * n, cols * n));
    }
    return MatrixOverA(shape, rows, cols, std::move(mats));
}

json to_json(const HilbertModule& m) {
    return json{{"shape", to_json(m.shape())},
                {"ambient_rank", m.ambient_rank()},
                {"proj", to_json(m.projection())}};
}

HilbertModule module_from_json(const json& j) {
    const AlgebraShape shape = shape_from_json(require(j, "shape"));
    const int rank = require(j, "ambient_rank").get<int>();
    const MatrixOverA proj = matrix_over_a_from_json(require(j, "proj"));
    if (proj.rows() != rank || proj.cols() != rank)
        throw InvalidInput("module: projection does not match ambient rank");
    return HilbertModule::from_projection(shape, proj);
}

json to_json(const ModuleElement& x) {
    return json{{"module", to_json(x.parent())}, {"vec", to_json(x.vec())}};
}

ModuleElement module_element_from_json(const json& j) {
    const HilbertModule m = module_from_json(require(j, "module"));
    return m.element(matrix_over_a_from_json(require(j, "vec")));
}

json to_json(const AdjointableOperator& t) {
    return json{{"source", to_json(t.source())},
                {"target", to_json(t.target())},
                {"mat", to_json(t.mat())}};
}

AdjointableOperator operator_from_json(const json& j) {
    const HilbertModule source = module_from_json(require(j, "source"));
    const HilbertModule target = module_from_json(require(j, "target"));
    return AdjointableOperator(source, target, matrix_over_a_from_json(require(j, "mat")));
}

json to_json(const K0Class& k) {
    return json{{"shape", to_json(k.shape())}, {"ranks", k.ranks()}};
}

json to_json(const Tolerances& tol) {
    return json{{"rank_rel", tol.rank_rel},
                {"invariant_abs", tol.invariant_abs},
                {"herm_sym", tol.herm_sym}};
}

Tolerances tolerances_from_json(const json& j) {
    Tolerances tol;
    if (j.contains("rank_rel")) tol.rank_rel = j.at("rank_rel").get<double>();
    if (j.contains("invariant_abs")) tol.invariant_abs = j.at("invariant_abs").get<double>();
    if (j.contains("herm_sym")) tol.herm_sym = j.at("herm_sym").get<double>();
    tol.validate();
    return tol;
}

json to_json(const Scenario& s) {
    return json{{"schema", 1},
                {"kind", to_string(s.kind)},
                {"seed", s.seed},
                {"shape", to_json(s.shape)},
                {"dims", s.dims},
                {"tolerances", to_json(s.tol)}};
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    if (j.contains("schema") && j.at("schema").get<int>() != 1)
        throw InvalidInput("scenario: unsupported schema version");
    s.kind = scenario_kind_from_string(require(j, "kind").get<std::string>());
    s.seed = require(j, "seed").get<std::uint64_t>();
    s.shape = shape_from_json(require(j, "shape"));
    if (j.contains("dims")) {
        for (const auto& d : j.at("dims")) {
            if (!d.is_number_integer() || d.get<int>() < 1)
                throw InvalidInput("scenario: dims must be positive integers");
            s.dims.push_back(d.get<int>());
        }
    }
    s.tol = j.contains("tolerances") ? tolerances_from_json(j.at("tolerances")) : Tolerances{};
    // normalize exactly like random_scenario so reports echo canonical inputs
    return random_scenario(s.kind, s.seed, s.shape, s.dims, s.tol);
}

json to_json(const Report& r) {
    json residuals = json::object();
    for (const auto& [name, value] : r.residuals) residuals[name] = value;
    json values = json::object();
    for (const auto& [name, value] : r.values) values[name] = value;
    json indices = json::object();
    for (const auto& [name, ranks] : r.indices) indices[name] = ranks;
    return json{{"schema", r.schema},
                {"scenario", to_json(r.scenario)},
                {"residuals", residuals},
                {"values", values},
                {"indices", indices},
                {"flags", r.flags},
                {"passed", r.passed}};
}

} // namespace hcm
