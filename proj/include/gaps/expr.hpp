#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gaps/errors.hpp"
#include "gaps/monomial.hpp"
#include "gaps/polynomial.hpp"

namespace gaps {

enum class ExprOp : std::uint8_t { Input, Const, Add, Sub, Mul, Neg };

// Handle into an ExprPool.
struct ExprId {
    std::int32_t v = -1;
    bool valid() const { return v >= 0; }
    bool operator==(const ExprId&) const = default;
};

struct ExprNode {
    ExprOp op;
    std::int32_t a = -1;
    std::int32_t b = -1;
    std::int64_t imm = 0;  // input index for Input, value for Const
};

// Hash-consed DAG of scalar expressions over the known arguments. Shared
// subexpressions (including problem-declared abbreviations) are stored once;
// construction applies constant folding and the usual identities.
class ExprPool {
  public:
    ExprId input(int index);
    ExprId constant(std::int64_t v);
    ExprId add(ExprId a, ExprId b);
    ExprId sub(ExprId a, ExprId b);
    ExprId mul(ExprId a, ExprId b);
    ExprId neg(ExprId a);

    const ExprNode& node(ExprId id) const { return nodes_[id.v]; }
    int size() const { return static_cast<int>(nodes_.size()); }

    bool is_const_zero(ExprId id) const {
        const auto& n = nodes_[id.v];
        return n.op == ExprOp::Const && n.imm == 0;
    }

    // Evaluates one expression with memoization over `cache` (size() entries,
    // validity tracked by `have`). Direct DAG walk, independent of the
    // straight-line program path.
    template <typename Ring>
    typename Ring::Scalar eval(ExprId id, const std::vector<typename Ring::Scalar>& inputs,
                               const Ring& ring, std::vector<typename Ring::Scalar>& cache,
                               std::vector<bool>& have) const {
        const std::int32_t i = id.v;
        if (have[i]) return cache[i];
        const ExprNode& n = nodes_[i];
        typename Ring::Scalar r;
        switch (n.op) {
            case ExprOp::Input:
                if (n.imm < 0 || n.imm >= static_cast<std::int64_t>(inputs.size()))
                    throw InvalidArgument("expression input index out of range");
                r = inputs[n.imm];
                break;
            case ExprOp::Const: r = ring.from_int(n.imm); break;
            case ExprOp::Add:
                r = ring.add(eval(ExprId{n.a}, inputs, ring, cache, have),
                             eval(ExprId{n.b}, inputs, ring, cache, have));
                break;
            case ExprOp::Sub:
                r = ring.sub(eval(ExprId{n.a}, inputs, ring, cache, have),
                             eval(ExprId{n.b}, inputs, ring, cache, have));
                break;
            case ExprOp::Mul:
                r = ring.mul(eval(ExprId{n.a}, inputs, ring, cache, have),
                             eval(ExprId{n.b}, inputs, ring, cache, have));
                break;
            case ExprOp::Neg: r = ring.neg(eval(ExprId{n.a}, inputs, ring, cache, have)); break;
            default: throw InvalidArgument("bad expression op");
        }
        cache[i] = r;
        have[i] = true;
        return r;
    }

  private:
    ExprId intern(ExprNode n);

    struct KeyHash {
        size_t operator()(const std::uint64_t& k) const { return std::hash<std::uint64_t>()(k); }
    };
    std::vector<ExprNode> nodes_;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> memo_;
};

// Coefficient ring whose scalars are expression handles; lets the symbolic
// equation builders reuse the generic polynomial algebra.
struct ExprRing {
    using Scalar = ExprId;
    ExprPool* pool;

    Scalar zero() const { return pool->constant(0); }
    Scalar one() const { return pool->constant(1); }
    Scalar from_int(std::int64_t v) const { return pool->constant(v); }
    Scalar add(Scalar a, Scalar b) const { return pool->add(a, b); }
    Scalar sub(Scalar a, Scalar b) const { return pool->sub(a, b); }
    Scalar mul(Scalar a, Scalar b) const { return pool->mul(a, b); }
    Scalar neg(Scalar a) const { return pool->neg(a); }
    bool is_zero(Scalar a) const { return pool->is_const_zero(a); }
};

using SymPoly = Polynomial<ExprId>;

// Straight-line program producing every coefficient of every equation from
// the flattened known-argument inputs. Instruction k writes slot k; slots are
// in dependency order and each is assigned exactly once.
struct CoeffProgram {
    int num_inputs = 0;
    int nvars = 0;
    std::vector<ExprNode> instrs;
    // Per equation: (monomial in the unknowns, slot holding its coefficient).
    std::vector<std::vector<std::pair<Monomial, std::int32_t>>> equations;

    template <typename Ring>
    std::vector<typename Ring::Scalar> run(const std::vector<typename Ring::Scalar>& inputs,
                                           const Ring& ring) const {
        if (static_cast<int>(inputs.size()) != num_inputs)
            throw InvalidArgument("coefficient program: expected " + std::to_string(num_inputs) +
                                  " inputs, got " + std::to_string(inputs.size()));
        std::vector<typename Ring::Scalar> slot(instrs.size());
        for (size_t k = 0; k < instrs.size(); ++k) {
            const ExprNode& n = instrs[k];
            switch (n.op) {
                case ExprOp::Input: slot[k] = inputs[n.imm]; break;
                case ExprOp::Const: slot[k] = ring.from_int(n.imm); break;
                case ExprOp::Add: slot[k] = ring.add(slot[n.a], slot[n.b]); break;
                case ExprOp::Sub: slot[k] = ring.sub(slot[n.a], slot[n.b]); break;
                case ExprOp::Mul: slot[k] = ring.mul(slot[n.a], slot[n.b]); break;
                case ExprOp::Neg: slot[k] = ring.neg(slot[n.a]); break;
                default: throw InvalidArgument("bad program op");
            }
        }
        return slot;
    }

    // Instantiates all equations over the given ring from precomputed slots.
    template <typename Ring>
    std::vector<PolyOf<Ring>> equations_from_slots(const std::vector<typename Ring::Scalar>& slot,
                                                   const Ring& ring,
                                                   const MonomialOrder& order) const {
        std::vector<PolyOf<Ring>> out;
        out.reserve(equations.size());
        for (const auto& eq : equations) {
            std::vector<std::pair<Monomial, typename Ring::Scalar>> terms;
            terms.reserve(eq.size());
            for (const auto& [mon, s] : eq) terms.emplace_back(mon, slot[s]);
            out.push_back(make_poly(nvars, std::move(terms), ring, order));
        }
        return out;
    }
};

// Emits the straight-line program for the given symbolic equations: reachable
// pool nodes only, renumbered in dependency order (hash-consing has already
// merged all common subexpressions).
CoeffProgram build_coeff_program(const ExprPool& pool, const std::vector<SymPoly>& equations,
                                 int num_inputs, int nvars);

}  // namespace gaps
