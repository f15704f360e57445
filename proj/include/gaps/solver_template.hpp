#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaps/expr.hpp"
#include "gaps/monomial.hpp"
#include "gaps/problem.hpp"

namespace gaps {

// Offline-discovered elimination order: rows row_order[0..k) paired with
// excessive columns ecol_order[0..k) form an upper-triangular block that the
// online phase eliminates by substitution before the RREF.
struct TriangularPlan {
    int k = 0;
    std::vector<int> row_order;   // permutation of all recipe rows
    std::vector<int> ecol_order;  // permutation of the excessive columns
};

// A 2-fold sign symmetry: flipping the signs of the flagged variables maps
// every equation to plus or minus itself. equation_parity[i] is the weight
// class mod 2 of equation i under the flip (0: invariant, 1: negated).
struct SymmetryDescriptor {
    std::vector<bool> flip;
    int fold = 2;
    std::vector<int> equation_parity;
};

struct GeneratorInfo {
    std::uint64_t prime = 0;
    std::uint64_t seed = 0;
    int trials = 0;
    int kept_trials = 0;
    bool syzygy_reduction = false;
};

// The offline product: everything the online phase needs to solve an
// instance of the problem with one linear elimination and one eigenvalue
// problem.
struct SolverTemplate {
    static constexpr int kSchemaVersion = 1;

    std::string problem;
    std::vector<ArgDecl> knowns;
    std::vector<std::string> var_names;
    MonomialOrder order;
    Monomial action;

    std::vector<Monomial> basis;      // x_B, descending
    std::vector<Monomial> excessive;  // x_E, descending
    std::vector<Monomial> reducible;  // x_R, descending

    // Template rows: multiplier monomial and original equation index.
    std::vector<std::pair<Monomial, int>> recipe;

    CoeffProgram program;
    std::optional<TriangularPlan> triangular;
    std::optional<SymmetryDescriptor> symmetry;
    int solution_count = 0;
    GeneratorInfo generator;

    int nvars() const { return static_cast<int>(var_names.size()); }
    int num_rows() const { return static_cast<int>(recipe.size()); }
    int num_columns() const {
        return static_cast<int>(excessive.size() + reducible.size() + basis.size());
    }
    // Column layout is [excessive | reducible | basis].
    Monomial column_monomial(int j) const;
};

// UTF-8 JSON, schema-versioned, deterministic byte output for identical
// templates.
std::string serialize(const SolverTemplate& t);
SolverTemplate deserialize(const std::string& bytes);

void save_template(const SolverTemplate& t, const std::string& path);
SolverTemplate load_template(const std::string& path);

}  // namespace gaps
