#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gaps/errors.hpp"
#include "gaps/generator.hpp"
#include "gaps/problems.hpp"
#include "gaps/solver.hpp"
#include "gaps/solver_template.hpp"

namespace {

using nlohmann::json;
using namespace gaps;

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

std::uint64_t env_seed_fallback() {
    if (const char* s = std::getenv("GAPS_SEED")) {
        try {
            return std::stoull(s);
        } catch (...) {
            throw InvalidArgument("GAPS_SEED is not a valid integer");
        }
    }
    return 0;
}

void flatten_json_value(const json& v, const std::vector<int>& dims, size_t level,
                        std::vector<double>& out) {
    if (level == dims.size()) {
        if (!v.is_number())
            throw ParseFailure("instance: expected a number at depth " + std::to_string(level));
        out.push_back(v.get<double>());
        return;
    }
    if (!v.is_array() || static_cast<int>(v.size()) != dims[level])
        throw ParseFailure("instance: expected an array of length " + std::to_string(dims[level]) +
                           " at depth " + std::to_string(level));
    for (const auto& e : v) flatten_json_value(e, dims, level + 1, out);
}

Bindings<double> parse_instance_file(const std::string& path, const SolverTemplate& t) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseFailure("cannot open instance file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseFailure(std::string("instance parse error: ") + e.what());
    }
    if (!j.contains("args") || !j["args"].is_object())
        throw ParseFailure("instance: missing 'args' object");
    Bindings<double> b;
    for (const auto& arg : t.knowns) {
        if (!j["args"].contains(arg.name))
            throw ParseFailure("instance: missing argument '" + arg.name + "'");
        std::vector<double> flat;
        // Scalars may be written bare or as a singleton array.
        const json& v = j["args"][arg.name];
        if (arg.dims.empty() && v.is_array() && v.size() == 1)
            flatten_json_value(v[0], arg.dims, 0, flat);
        else
            flatten_json_value(v, arg.dims, 0, flat);
        b[arg.name] = std::move(flat);
    }
    return b;
}

json solution_to_json(const Solution& s, const std::vector<std::string>& names) {
    json u = json::object();
    for (size_t k = 0; k < s.unknowns.size(); ++k)
        u[names[k]] = {{"re", s.unknowns[k].real()}, {"im", s.unknowns[k].imag()}};
    return {{"unknowns", u},
            {"eigenvalue", {{"re", s.eigenvalue.real()}, {"im", s.eigenvalue.imag()}}},
            {"residuals", s.residuals},
            {"max_residual", s.max_residual()},
            {"real", s.is_real}};
}

void print_solutions_text(const SolutionSet& sols, const SolverTemplate& t) {
    std::cout << sols.solutions.size() << " solution(s)";
    if (sols.skipped_at_infinity > 0)
        std::cout << " (" << sols.skipped_at_infinity << " skipped at infinity)";
    std::cout << "\n";
    int idx = 0;
    for (const auto& s : sols.solutions) {
        std::cout << "solution " << ++idx << (s.is_real ? "  [real]" : "  [complex]") << "\n";
        for (size_t k = 0; k < s.unknowns.size(); ++k) {
            std::cout << "  " << t.var_names[k] << " = " << s.unknowns[k].real();
            if (std::abs(s.unknowns[k].imag()) > 0)
                std::cout << (s.unknowns[k].imag() >= 0 ? " + " : " - ")
                          << std::abs(s.unknowns[k].imag()) << "i";
            std::cout << "\n";
        }
        std::cout << "  eigenvalue = " << s.eigenvalue.real();
        if (std::abs(s.eigenvalue.imag()) > 0)
            std::cout << (s.eigenvalue.imag() >= 0 ? " + " : " - ") << std::abs(s.eigenvalue.imag())
                      << "i";
        std::cout << "\n  max residual = " << s.max_residual() << "\n";
    }
}

int cmd_generate(const std::string& problem_name, const std::string& out_path,
                 GenerateOptions opts) {
    const ProblemSpec prob = make_problem(problem_name);
    const SolverTemplate t = generate_template(prob, opts);
    const std::string path =
        out_path.empty() ? problem_name + ".gaps.json" : out_path;
    save_template(t, path);

    std::cout << "problem:        " << t.problem << "\n";
    std::cout << "solution count: " << t.solution_count << "\n";
    std::cout << "basis size:     " << t.basis.size() << "\n";
    std::cout << "template:       " << t.num_rows() << " x " << t.num_columns() << "  (E "
              << t.excessive.size() << " | R " << t.reducible.size() << " | B " << t.basis.size()
              << ")\n";
    if (t.triangular)
        std::cout << "triangular:     block of " << t.triangular->k << " eliminated offline\n";
    if (t.symmetry) {
        std::cout << "symmetry:       2-fold sign flip of {";
        bool first = true;
        for (size_t k = 0; k < t.symmetry->flip.size(); ++k)
            if (t.symmetry->flip[k]) {
                std::cout << (first ? "" : ", ") << t.var_names[k];
                first = false;
            }
        std::cout << "}\n";
    }
    std::cout << "validation:     held-out Z_p instance passed\n";
    std::cout << "written:        " << path << "\n";
    return kExitOk;
}

int cmd_solve(const std::string& tmpl_path, const std::string& instance_path, bool random_instance,
              std::uint64_t seed, const SolveOptions& opts, bool as_json) {
    const SolverTemplate t = load_template(tmpl_path);

    Bindings<double> args;
    RealInstance inst;
    const ProblemSpec* prob_for_metric = nullptr;
    ProblemSpec prob;
    if (random_instance) {
        prob = make_problem(t.problem);
        Rng rng(seed);
        inst = prob.sample_real(rng);
        args = inst.knowns;
        prob_for_metric = &prob;
    } else {
        args = parse_instance_file(instance_path, t);
    }

    const SolutionSet sols = solve(t, args, opts);

    if (as_json) {
        json out;
        out["solutions"] = json::array();
        for (const auto& s : sols.solutions)
            out["solutions"].push_back(solution_to_json(s, t.var_names));
        out["skipped_at_infinity"] = sols.skipped_at_infinity;
        std::cout << out.dump(2) << "\n";
    } else {
        print_solutions_text(sols, t);
    }

    if (random_instance && inst.truth && !as_json) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : sols.solutions) {
            double err;
            if (prob_for_metric->truth_error) {
                err = prob_for_metric->truth_error(s.unknowns, inst);
            } else {
                double d2 = 0, n2 = 0;
                for (size_t k = 0; k < s.unknowns.size(); ++k) {
                    d2 += std::norm(s.unknowns[k] - (*inst.truth)[k]);
                    n2 += (*inst.truth)[k] * (*inst.truth)[k];
                }
                err = std::sqrt(d2) / (1.0 + std::sqrt(n2));
            }
            best = std::min(best, err);
        }
        std::cout << "ground truth:";
        for (size_t k = 0; k < inst.truth->size(); ++k)
            std::cout << " " << t.var_names[k] << " = " << (*inst.truth)[k];
        std::cout << "\nbest ground-truth error: " << best << "\n";
    }
    return kExitOk;
}

int cmd_bench(const std::string& tmpl_path, int count, std::uint64_t seed) {
    const SolverTemplate t = load_template(tmpl_path);

    struct Row {
        std::string name;
        SolveMethod method;
        std::vector<double> times_ms;
        std::vector<double> log_residuals;
        int failures = 0;
    };
    std::vector<Row> rows = {{"eigen", SolveMethod::EigenQR, {}, {}, 0},
                             {"charpoly", SolveMethod::Charpoly, {}, {}, 0}};

    if (count > 0) {
        const ProblemSpec prob = make_problem(t.problem);
        Rng rng(seed);
        std::vector<RealInstance> instances;
        instances.reserve(count);
        for (int i = 0; i < count; ++i) instances.push_back(prob.sample_real(rng));

        for (auto& row : rows) {
            SolveOptions opts;
            opts.method = row.method;
            for (const auto& inst : instances) {
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    const SolutionSet sols = solve(t, inst.knowns, opts);
                    const auto t1 = std::chrono::steady_clock::now();
                    row.times_ms.push_back(
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
                    if (sols.solutions.empty()) {
                        ++row.failures;
                        continue;
                    }
                    double best = std::numeric_limits<double>::infinity();
                    for (const auto& s : sols.solutions) best = std::min(best, s.max_residual());
                    row.log_residuals.push_back(std::log10(std::max(best, 1e-300)));
                } catch (const Error&) {
                    ++row.failures;
                }
            }
        }
    }

    auto pct = [](std::vector<double> v, double q) {
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        const size_t i = std::min(v.size() - 1, static_cast<size_t>(q * (v.size() - 1) + 0.5));
        return v[i];
    };

    std::cout << "method    |  n    | med ms  | p95 ms  | med log10 r | max log10 r | fail\n";
    std::cout << "----------+-------+---------+---------+-------------+-------------+------\n";
    for (const auto& row : rows) {
        const double med_t = pct(row.times_ms, 0.5), p95_t = pct(row.times_ms, 0.95);
        const double med_r = pct(row.log_residuals, 0.5);
        const double max_r = row.log_residuals.empty()
                                 ? 0.0
                                 : *std::max_element(row.log_residuals.begin(),
                                                     row.log_residuals.end());
        const double fail_rate = count > 0 ? 100.0 * row.failures / count : 0.0;
        std::printf("%-9s | %5d | %7.3f | %7.3f | %11.2f | %11.2f | %4.1f%%\n", row.name.c_str(),
                    count, med_t, p95_t, med_r, max_r, fail_rate);
    }
    return kExitOk;
}

int cmd_inspect(const std::string& tmpl_path) {
    const SolverTemplate t = load_template(tmpl_path);
    std::cout << "problem:        " << t.problem << "\n";
    std::cout << "unknowns:      ";
    for (const auto& v : t.var_names) std::cout << " " << v;
    std::cout << "\nknowns:        ";
    for (const auto& a : t.knowns) {
        std::cout << " " << a.name << "[";
        for (size_t i = 0; i < a.dims.size(); ++i) std::cout << (i ? "x" : "") << a.dims[i];
        std::cout << "]";
    }
    std::cout << "\norder:          " << order_kind_name(t.order.kind) << "\n";
    std::cout << "action:         " << to_string(t.action, t.var_names) << "\n";
    std::cout << "solution count: " << t.solution_count << "\n";
    std::cout << "partition:      E " << t.excessive.size() << " | R " << t.reducible.size()
              << " | B " << t.basis.size() << "\n";
    std::cout << "basis:         ";
    for (const auto& b : t.basis) std::cout << " " << to_string(b, t.var_names);
    std::cout << "\nrecipe rows:    " << t.num_rows() << "\n";
    for (const auto& [mult, eq] : t.recipe)
        std::cout << "  " << to_string(mult, t.var_names) << " * f" << eq << "\n";
    std::cout << "program:        " << t.program.instrs.size() << " instructions, "
              << t.program.num_inputs << " inputs\n";
    if (t.triangular)
        std::cout << "triangular:     k = " << t.triangular->k << "\n";
    else
        std::cout << "triangular:     none\n";
    if (t.symmetry) {
        std::cout << "symmetry:       flip {";
        bool first = true;
        for (size_t k = 0; k < t.symmetry->flip.size(); ++k)
            if (t.symmetry->flip[k]) {
                std::cout << (first ? "" : ", ") << t.var_names[k];
                first = false;
            }
        std::cout << "}, fold " << t.symmetry->fold << "\n";
    } else {
        std::cout << "symmetry:       none\n";
    }
    std::cout << "generator:      p = " << t.generator.prime << ", seed = " << t.generator.seed
              << ", trials = " << t.generator.trials << " (kept " << t.generator.kept_trials
              << ")" << (t.generator.syzygy_reduction ? ", syzygy-reduced" : "") << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver-generator toolkit: offline elimination templates over Z_p, online\n"
                 "action-matrix solving over the reals"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a solver template for a named problem");
    std::string gen_problem, gen_out;
    GenerateOptions gopts;
    bool gen_seed_set = false;
    gen->add_option("problem", gen_problem, "registered problem name")->required();
    gen->add_option("-o,--output", gen_out, "output path (default <problem>.gaps.json)");
    gen->add_option("--prime", gopts.prime, "field modulus (odd prime)");
    gen->add_option("--trials", gopts.trials, "number of Z_p trials");
    auto* seed_opt = gen->add_option("--seed", gopts.seed, "RNG seed");
    gen->add_flag("--syzygy", gopts.syzygy_reduction, "syzygy-reduce cofactors before stripping");
    gen->add_flag("--triangular", gopts.triangular_reduction,
                  "plan an upper-triangular pre-elimination");
    gen->callback([&] { gen_seed_set = seed_opt->count() > 0; });

    // solve
    auto* sol = app.add_subcommand("solve", "solve one coefficient instance with a template");
    std::string sol_tmpl, sol_instance, sol_method = "eigen";
    bool sol_random = false, sol_json = false, sol_no_expand = false, sol_no_triangular = false;
    std::uint64_t sol_seed = 0;
    bool sol_seed_set = false;
    sol->add_option("template", sol_tmpl, "template file (.gaps.json)")->required();
    sol->add_option("-i,--instance", sol_instance, "instance JSON file");
    sol->add_flag("--random", sol_random, "draw an instance from the problem's real sampler");
    auto* sol_seed_opt = sol->add_option("--seed", sol_seed, "seed for --random");
    sol->add_option("--method", sol_method, "eigen | charpoly");
    sol->add_flag("--json", sol_json, "machine-readable output");
    sol->add_flag("--no-expand-symmetry", sol_no_expand,
                  "return one representative per symmetry orbit");
    sol->add_flag("--no-triangular", sol_no_triangular, "ignore the stored triangular plan");
    sol->callback([&] { sol_seed_set = sol_seed_opt->count() > 0; });

    // bench
    auto* ben = app.add_subcommand("bench", "timing/accuracy over random real instances");
    std::string ben_tmpl;
    int ben_count = 100;
    std::uint64_t ben_seed = 0;
    bool ben_seed_set = false;
    ben->add_option("template", ben_tmpl, "template file")->required();
    ben->add_option("count", ben_count, "number of instances")->required();
    auto* ben_seed_opt = ben->add_option("--seed", ben_seed, "RNG seed");
    ben->callback([&] { ben_seed_set = ben_seed_opt->count() > 0; });

    // inspect
    auto* ins = app.add_subcommand("inspect", "human-readable template dump");
    std::string ins_tmpl;
    ins->add_option("template", ins_tmpl, "template file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            if (!gen_seed_set) gopts.seed = env_seed_fallback();
            return cmd_generate(gen_problem, gen_out, gopts);
        }
        if (sol->parsed()) {
            if (sol_random == sol_instance.empty() && !sol_random)
                throw InvalidArgument("solve: provide --instance FILE or --random");
            SolveOptions opts;
            if (sol_method == "eigen")
                opts.method = SolveMethod::EigenQR;
            else if (sol_method == "charpoly")
                opts.method = SolveMethod::Charpoly;
            else
                throw InvalidArgument("solve: unknown method '" + sol_method + "'");
            // The CLI expands symmetric solutions by default so callers see
            // the complete set; the library default returns representatives.
            opts.expand_symmetry = !sol_no_expand;
            opts.use_triangular = !sol_no_triangular;
            if (!sol_seed_set) sol_seed = env_seed_fallback();
            return cmd_solve(sol_tmpl, sol_instance, sol_random, sol_seed, opts, sol_json);
        }
        if (ben->parsed()) {
            if (ben_count < 0) throw InvalidArgument("bench: count must be >= 0");
            if (!ben_seed_set) ben_seed = env_seed_fallback();
            return cmd_bench(ben_tmpl, ben_count, ben_seed);
        }
        if (ins->parsed()) return cmd_inspect(ins_tmpl);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegenerateInstance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const NumericFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
