#include "gaps/solver_template.hpp"

#include <fstream>
#include <sstream>

#include "gaps/errors.hpp"
#include "json.hpp"

namespace gaps {

using nlohmann::json;

Monomial SolverTemplate::column_monomial(int j) const {
    const int ne = static_cast<int>(excessive.size());
    const int nr = static_cast<int>(reducible.size());
    if (j < ne) return excessive[j];
    if (j < ne + nr) return reducible[j - ne];
    return basis[j - ne - nr];
}

namespace {

json mon_to_json(const Monomial& m) {
    json a = json::array();
    for (auto e : m.e) a.push_back(static_cast<int>(e));
    return a;
}

Monomial mon_from_json(const json& a, int nvars) {
    if (!a.is_array() || static_cast<int>(a.size()) != nvars)
        throw ParseFailure("template: bad monomial exponent vector");
    std::vector<std::uint16_t> e;
    for (const auto& v : a) e.push_back(static_cast<std::uint16_t>(v.get<int>()));
    return Monomial(std::move(e));
}

json mons_to_json(const std::vector<Monomial>& ms) {
    json a = json::array();
    for (const auto& m : ms) a.push_back(mon_to_json(m));
    return a;
}

std::vector<Monomial> mons_from_json(const json& a, int nvars) {
    std::vector<Monomial> ms;
    for (const auto& v : a) ms.push_back(mon_from_json(v, nvars));
    return ms;
}

const char* op_name(ExprOp op) {
    switch (op) {
        case ExprOp::Input: return "load";
        case ExprOp::Const: return "const";
        case ExprOp::Add: return "add";
        case ExprOp::Sub: return "sub";
        case ExprOp::Mul: return "mul";
        case ExprOp::Neg: return "neg";
    }
    return "?";
}

ExprOp op_from_name(const std::string& s) {
    if (s == "load") return ExprOp::Input;
    if (s == "const") return ExprOp::Const;
    if (s == "add") return ExprOp::Add;
    if (s == "sub") return ExprOp::Sub;
    if (s == "mul") return ExprOp::Mul;
    if (s == "neg") return ExprOp::Neg;
    throw ParseFailure("template: unknown program op '" + s + "'");
}

}  // namespace

std::string serialize(const SolverTemplate& t) {
    json j;
    j["schema_version"] = SolverTemplate::kSchemaVersion;
    j["kind"] = "gaps_template";
    j["problem"] = t.problem;

    json knowns = json::array();
    for (const auto& a : t.knowns) knowns.push_back({{"name", a.name}, {"dims", a.dims}});
    j["knowns"] = knowns;
    j["unknowns"] = t.var_names;

    j["order"] = {{"kind", order_kind_name(t.order.kind)}, {"precedence", t.order.precedence}};
    j["action"] = mon_to_json(t.action);
    j["basis"] = mons_to_json(t.basis);
    j["excessive"] = mons_to_json(t.excessive);
    j["reducible"] = mons_to_json(t.reducible);

    json recipe = json::array();
    for (const auto& [m, eq] : t.recipe) recipe.push_back({{"mult", mon_to_json(m)}, {"eq", eq}});
    j["recipe"] = recipe;

    json instrs = json::array();
    for (const auto& in : t.program.instrs) {
        json it;
        it["op"] = op_name(in.op);
        switch (in.op) {
            case ExprOp::Input: it["idx"] = in.imm; break;
            case ExprOp::Const: it["value"] = in.imm; break;
            case ExprOp::Neg: it["a"] = in.a; break;
            default:
                it["a"] = in.a;
                it["b"] = in.b;
        }
        instrs.push_back(it);
    }
    json eqs = json::array();
    for (const auto& eq : t.program.equations) {
        json terms = json::array();
        for (const auto& [mon, slot] : eq)
            terms.push_back({{"mon", mon_to_json(mon)}, {"slot", slot}});
        eqs.push_back(terms);
    }
    j["program"] = {{"num_inputs", t.program.num_inputs}, {"instructions", instrs}, {"equations", eqs}};

    if (t.triangular)
        j["triangular"] = {{"k", t.triangular->k},
                           {"row_order", t.triangular->row_order},
                           {"ecol_order", t.triangular->ecol_order}};
    else
        j["triangular"] = nullptr;

    if (t.symmetry) {
        std::vector<int> flip;
        for (bool b : t.symmetry->flip) flip.push_back(b ? 1 : 0);
        j["symmetry"] = {{"flip", flip},
                         {"fold", t.symmetry->fold},
                         {"equation_parity", t.symmetry->equation_parity}};
    } else {
        j["symmetry"] = nullptr;
    }

    j["solution_count"] = t.solution_count;
    j["generator"] = {{"prime", t.generator.prime},
                      {"seed", t.generator.seed},
                      {"trials", t.generator.trials},
                      {"kept_trials", t.generator.kept_trials},
                      {"syzygy_reduction", t.generator.syzygy_reduction}};

    return j.dump(2) + "\n";
}

SolverTemplate deserialize(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ParseFailure(std::string("template parse error: ") + e.what());
    }
    try {
        if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
            throw ParseFailure("template: missing schema_version");
        const int ver = j["schema_version"].get<int>();
        if (ver != SolverTemplate::kSchemaVersion)
            throw ParseFailure("template: unsupported schema version " + std::to_string(ver));
        if (j.value("kind", std::string{}) != "gaps_template")
            throw ParseFailure("template: not a template file");

        SolverTemplate t;
        t.problem = j.at("problem").get<std::string>();
        for (const auto& a : j.at("knowns"))
            t.knowns.push_back({a.at("name").get<std::string>(), a.at("dims").get<std::vector<int>>()});
        t.var_names = j.at("unknowns").get<std::vector<std::string>>();
        const int nvars = t.nvars();

        t.order.kind = order_kind_from_name(j.at("order").at("kind").get<std::string>());
        t.order.precedence = j.at("order").at("precedence").get<std::vector<int>>();
        t.action = mon_from_json(j.at("action"), nvars);
        t.basis = mons_from_json(j.at("basis"), nvars);
        t.excessive = mons_from_json(j.at("excessive"), nvars);
        t.reducible = mons_from_json(j.at("reducible"), nvars);

        for (const auto& r : j.at("recipe"))
            t.recipe.emplace_back(mon_from_json(r.at("mult"), nvars), r.at("eq").get<int>());

        const auto& p = j.at("program");
        t.program.num_inputs = p.at("num_inputs").get<int>();
        t.program.nvars = nvars;
        for (const auto& it : p.at("instructions")) {
            ExprNode n;
            n.op = op_from_name(it.at("op").get<std::string>());
            switch (n.op) {
                case ExprOp::Input: n.imm = it.at("idx").get<std::int64_t>(); break;
                case ExprOp::Const: n.imm = it.at("value").get<std::int64_t>(); break;
                case ExprOp::Neg: n.a = it.at("a").get<std::int32_t>(); break;
                default:
                    n.a = it.at("a").get<std::int32_t>();
                    n.b = it.at("b").get<std::int32_t>();
            }
            t.program.instrs.push_back(n);
        }
        for (const auto& eq : p.at("equations")) {
            std::vector<std::pair<Monomial, std::int32_t>> terms;
            for (const auto& term : eq)
                terms.emplace_back(mon_from_json(term.at("mon"), nvars),
                                   term.at("slot").get<std::int32_t>());
            t.program.equations.push_back(std::move(terms));
        }

        if (!j.at("triangular").is_null()) {
            TriangularPlan plan;
            plan.k = j["triangular"].at("k").get<int>();
            plan.row_order = j["triangular"].at("row_order").get<std::vector<int>>();
            plan.ecol_order = j["triangular"].at("ecol_order").get<std::vector<int>>();
            t.triangular = std::move(plan);
        }
        if (!j.at("symmetry").is_null()) {
            SymmetryDescriptor sym;
            for (int b : j["symmetry"].at("flip").get<std::vector<int>>()) sym.flip.push_back(b != 0);
            sym.fold = j["symmetry"].at("fold").get<int>();
            sym.equation_parity = j["symmetry"].at("equation_parity").get<std::vector<int>>();
            t.symmetry = std::move(sym);
        }

        t.solution_count = j.at("solution_count").get<int>();
        const auto& g = j.at("generator");
        t.generator.prime = g.at("prime").get<std::uint64_t>();
        t.generator.seed = g.at("seed").get<std::uint64_t>();
        t.generator.trials = g.at("trials").get<int>();
        t.generator.kept_trials = g.at("kept_trials").get<int>();
        t.generator.syzygy_reduction = g.at("syzygy_reduction").get<bool>();

        // Basic structural sanity.
        for (const auto& [m, eq] : t.recipe)
            if (eq < 0 || eq >= static_cast<int>(t.program.equations.size()))
                throw ParseFailure("template: recipe equation index out of range");
        return t;
    } catch (const json::exception& e) {
        throw ParseFailure(std::string("template: malformed document: ") + e.what());
    }
}

void save_template(const SolverTemplate& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseFailure("cannot open '" + path + "' for writing");
    out << serialize(t);
}

SolverTemplate load_template(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseFailure("cannot open template file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

}  // namespace gaps
