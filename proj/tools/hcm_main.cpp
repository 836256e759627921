#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hcm/serialization.hpp"

namespace {

using hcm::InvalidInput;

std::vector<int> parse_int_list(const std::string& s, const char* what) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t pos = 0;
            const int v = std::stoi(tok, &pos);
            if (pos != tok.size() || v < 1) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InvalidInput(std::string(what) + ": '" + tok + "' is not a positive integer");
        }
    }
    if (out.empty()) throw InvalidInput(std::string(what) + ": empty list");
    return out;
}

// "A..B" (inclusive) or a single value
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s, const char* what) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            const std::int64_t v = std::stoll(s);
            return {v, v};
        }
        const std::int64_t lo = std::stoll(s.substr(0, dots));
        const std::int64_t hi = std::stoll(s.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument(s);
        return {lo, hi};
    } catch (const std::exception&) {
        throw InvalidInput(std::string(what) + ": '" + s + "' is not a value or A..B range");
    }
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open output file: " + path);
    out << content;
}

struct CommonOpts {
    std::string shape;
    std::string seeds;
    std::string dims;
    std::string out;
    double rank_rel = hcm::Tolerances{}.rank_rel;
    double invariant_abs = hcm::Tolerances{}.invariant_abs;
    double herm_sym = hcm::Tolerances{}.herm_sym;

    hcm::Tolerances tolerances() const {
        hcm::Tolerances tol;
        tol.rank_rel = rank_rel;
        tol.invariant_abs = invariant_abs;
        tol.herm_sym = herm_sym;
        tol.validate();
        return tol;
    }
};

void add_tolerance_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--rank-rel", opts.rank_rel, "relative singular-value cutoff");
    cmd->add_option("--invariant-abs", opts.invariant_abs, "property-check tolerance");
    cmd->add_option("--herm-sym", opts.herm_sym, "Hermiticity symmetrization bound");
}

int cmd_verify(const std::string& suite, const CommonOpts& opts) {
    const hcm::ScenarioKind kind = hcm::scenario_kind_from_string(suite);
    const hcm::AlgebraShape shape(parse_int_list(opts.shape, "--shape"));
    const auto [lo, hi] = parse_range(opts.seeds, "--seeds");
    if (lo < 0) throw InvalidInput("--seeds: negative seed");
    std::vector<int> dims;
    if (!opts.dims.empty()) dims = parse_int_list(opts.dims, "--dims");
    const hcm::Tolerances tol = opts.tolerances();

    hcm::json reports = hcm::json::array();
    int failures = 0;
    for (std::int64_t seed = lo; seed <= hi; ++seed) {
        const hcm::Scenario s =
            hcm::random_scenario(kind, static_cast<std::uint64_t>(seed), shape, dims, tol);
        const hcm::Report rep = hcm::run_scenario(s);
        if (!rep.passed) {
            ++failures;
            std::cerr << "seed " << seed << ": FAIL";
            for (const auto& [name, value] : rep.residuals)
                if (!(value <= tol.invariant_abs)) std::cerr << "  " << name << "=" << value;
            for (const auto& flag : rep.flags) std::cerr << "  [" << flag << "]";
            std::cerr << "\n";
        }
        reports.push_back(hcm::to_json(rep));
    }
    write_output(opts.out, reports.dump(2) + "\n");
    if (failures > 0) {
        std::cerr << failures << " of " << (hi - lo + 1) << " seeds failed\n";
        return 1;
    }
    return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& out_path) {
    std::ifstream in(scenario_path);
    if (!in) throw InvalidInput("cannot open scenario file: " + scenario_path);
    hcm::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InvalidInput(std::string("scenario file is not valid JSON: ") + e.what());
    }
    const hcm::Scenario s = hcm::scenario_from_json(j);
    const hcm::Report rep = hcm::run_scenario(s);
    write_output(out_path, hcm::to_json(rep).dump(2) + "\n");
    if (!rep.passed) {
        std::cerr << "scenario failed\n";
        return 1;
    }
    return 0;
}

int cmd_counterexample(const std::string& n_range, const std::string& out_path,
                       const hcm::Tolerances& tol) {
    const auto [lo, hi] = parse_range(n_range, "--n");
    if (lo < 1) throw InvalidInput("--n: truncation sizes start at 1");
    if (hi > 256) throw InvalidInput("--n: truncation sizes beyond 256 are not supported");
    std::vector<int> ns;
    for (std::int64_t n = lo; n <= hi; ++n) ns.push_back(static_cast<int>(n));
    const auto rows = hcm::divergence_table(ns, tol);
    write_output(out_path, hcm::divergence_csv(rows));

    int failures = 0;
    for (const auto& row : rows) {
        if (std::abs(row.inv_sqrt_norm - row.n) > 1e-9 * row.n ||
            std::abs(row.tail_norm - 1.0) > 1e-10) {
            std::cerr << "n=" << row.n << ": divergence signature off (norm=" << row.inv_sqrt_norm
                      << ", tail=" << row.tail_norm << ")\n";
            ++failures;
        }
    }
    return failures > 0 ? 1 : 0;
}

int cmd_index(const std::string& in_path, const std::string& out_path,
              const hcm::Tolerances& tol) {
    std::ifstream in(in_path);
    if (!in) throw InvalidInput("cannot open operator file: " + in_path);
    hcm::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InvalidInput(std::string("operator file is not valid JSON: ") + e.what());
    }
    const hcm::AdjointableOperator op = hcm::operator_from_json(j);
    const hcm::FredholmData data = hcm::mf_decompose(op, tol);
    const hcm::K0Class via_kernels = hcm::index_via_kernels(op, tol);
    const bool equal = data.index == via_kernels;
    const hcm::json out{{"schema", 1},
                        {"index_decomposition", data.index.ranks()},
                        {"index_kernels", via_kernels.ranks()},
                        {"equal", equal}};
    write_output(out_path, out.dump(2) + "\n");
    if (!equal) {
        std::cerr << "index mismatch: " << data.index.to_string() << " vs "
                  << via_kernels.to_string() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hcm: numerical Hilbert C*-module calculus over block C*-algebras"};
    app.require_subcommand(1);

    std::string suite;
    CommonOpts verify_opts;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite over a seed range");
    verify->add_option("--suite", suite,
                       "duality | isometry | theorem10 | lemma12 | fredholm | counterexample")
        ->required();
    verify->add_option("--shape", verify_opts.shape, "algebra block dims, e.g. 1,2,2")->required();
    verify->add_option("--seeds", verify_opts.seeds, "seed range, e.g. 0..99")->required();
    verify->add_option("--dims", verify_opts.dims, "ambient ranks (suite-specific default)");
    verify->add_option("--out", verify_opts.out, "write the JSON report array here");
    add_tolerance_flags(verify, verify_opts);

    std::string scenario_path;
    std::string run_out;
    CLI::App* run = app.add_subcommand("run", "execute one scenario file and write its report");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", run_out, "report output path");

    std::string n_range;
    CommonOpts ce_opts;
    CLI::App* ce = app.add_subcommand("counterexample",
                                      "emit the truncation divergence table as CSV");
    ce->add_option("--n", n_range, "truncation sizes, e.g. 2..32")->required();
    ce->add_option("--out", ce_opts.out, "CSV output path");
    add_tolerance_flags(ce, ce_opts);

    std::string op_path;
    CommonOpts idx_opts;
    CLI::App* idx = app.add_subcommand("index", "index of a serialized operator, both routes");
    idx->add_option("--in", op_path, "operator JSON file")->required();
    idx->add_option("--out", idx_opts.out, "result output path");
    add_tolerance_flags(idx, idx_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(suite, verify_opts);
        if (run->parsed()) return cmd_run(scenario_path, run_out);
        if (ce->parsed()) return cmd_counterexample(n_range, ce_opts.out, ce_opts.tolerances());
        if (idx->parsed()) return cmd_index(op_path, idx_opts.out, idx_opts.tolerances());
    } catch (const hcm::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hcm::UnknownKind& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hcm::Error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
