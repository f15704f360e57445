#include "gaps/expr.hpp"

#include <algorithm>

namespace gaps {

namespace {

std::uint64_t node_key(const ExprNode& n) {
    std::uint64_t h = static_cast<std::uint64_t>(n.op);
    h = h * 0x9E3779B97F4A7C15ull + static_cast<std::uint32_t>(n.a);
    h = h * 0x9E3779B97F4A7C15ull + static_cast<std::uint32_t>(n.b);
    h = h * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(n.imm);
    return h;
}

bool same_node(const ExprNode& x, const ExprNode& y) {
    return x.op == y.op && x.a == y.a && x.b == y.b && x.imm == y.imm;
}

}  // namespace

ExprId ExprPool::intern(ExprNode n) {
    const std::uint64_t key = node_key(n);
    auto& bucket = memo_[key];
    for (std::int32_t id : bucket)
        if (same_node(nodes_[id], n)) return ExprId{id};
    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(n);
    bucket.push_back(id);
    return ExprId{id};
}

ExprId ExprPool::input(int index) {
    if (index < 0) throw InvalidArgument("ExprPool: negative input index");
    return intern(ExprNode{ExprOp::Input, -1, -1, index});
}

ExprId ExprPool::constant(std::int64_t v) { return intern(ExprNode{ExprOp::Const, -1, -1, v}); }

ExprId ExprPool::add(ExprId a, ExprId b) {
    const ExprNode &na = nodes_[a.v], &nb = nodes_[b.v];
    if (na.op == ExprOp::Const && na.imm == 0) return b;
    if (nb.op == ExprOp::Const && nb.imm == 0) return a;
    if (na.op == ExprOp::Const && nb.op == ExprOp::Const) {
        std::int64_t s;
        if (!__builtin_add_overflow(na.imm, nb.imm, &s)) return constant(s);
    }
    if (a.v > b.v) std::swap(a, b);  // commutative: canonical operand order
    return intern(ExprNode{ExprOp::Add, a.v, b.v, 0});
}

ExprId ExprPool::sub(ExprId a, ExprId b) {
    const ExprNode &na = nodes_[a.v], &nb = nodes_[b.v];
    if (nb.op == ExprOp::Const && nb.imm == 0) return a;
    if (a == b) return constant(0);
    if (na.op == ExprOp::Const && nb.op == ExprOp::Const) {
        std::int64_t s;
        if (!__builtin_sub_overflow(na.imm, nb.imm, &s)) return constant(s);
    }
    if (na.op == ExprOp::Const && na.imm == 0) return neg(b);
    return intern(ExprNode{ExprOp::Sub, a.v, b.v, 0});
}

ExprId ExprPool::mul(ExprId a, ExprId b) {
    const ExprNode &na = nodes_[a.v], &nb = nodes_[b.v];
    if (na.op == ExprOp::Const) {
        if (na.imm == 0) return a;
        if (na.imm == 1) return b;
    }
    if (nb.op == ExprOp::Const) {
        if (nb.imm == 0) return b;
        if (nb.imm == 1) return a;
    }
    if (na.op == ExprOp::Const && nb.op == ExprOp::Const) {
        std::int64_t s;
        if (!__builtin_mul_overflow(na.imm, nb.imm, &s)) return constant(s);
    }
    if (a.v > b.v) std::swap(a, b);
    return intern(ExprNode{ExprOp::Mul, a.v, b.v, 0});
}

ExprId ExprPool::neg(ExprId a) {
    const ExprNode& na = nodes_[a.v];
    if (na.op == ExprOp::Const) {
        std::int64_t s;
        if (!__builtin_sub_overflow(std::int64_t{0}, na.imm, &s)) return constant(s);
    }
    if (na.op == ExprOp::Neg) return ExprId{na.a};
    return intern(ExprNode{ExprOp::Neg, a.v, -1, 0});
}

CoeffProgram build_coeff_program(const ExprPool& pool, const std::vector<SymPoly>& equations,
                                 int num_inputs, int nvars) {
    // Mark nodes reachable from any coefficient.
    std::vector<bool> reachable(pool.size(), false);
    std::vector<std::int32_t> stack;
    for (const auto& eq : equations)
        for (const auto& [mon, id] : eq.terms) stack.push_back(id.v);
    while (!stack.empty()) {
        const std::int32_t i = stack.back();
        stack.pop_back();
        if (reachable[i]) continue;
        reachable[i] = true;
        const ExprNode& n = pool.node(ExprId{i});
        if (n.a >= 0) stack.push_back(n.a);
        if (n.b >= 0) stack.push_back(n.b);
    }

    // Pool ids are already in dependency order (children interned first), so
    // emission in id order is a valid schedule.
    CoeffProgram prog;
    prog.num_inputs = num_inputs;
    prog.nvars = nvars;
    std::vector<std::int32_t> slot_of(pool.size(), -1);
    for (std::int32_t i = 0; i < pool.size(); ++i) {
        if (!reachable[i]) continue;
        ExprNode n = pool.node(ExprId{i});
        if (n.a >= 0) n.a = slot_of[n.a];
        if (n.b >= 0) n.b = slot_of[n.b];
        slot_of[i] = static_cast<std::int32_t>(prog.instrs.size());
        prog.instrs.push_back(n);
    }

    prog.equations.reserve(equations.size());
    for (const auto& eq : equations) {
        std::vector<std::pair<Monomial, std::int32_t>> terms;
        terms.reserve(eq.terms.size());
        for (const auto& [mon, id] : eq.terms) terms.emplace_back(mon, slot_of[id.v]);
        prog.equations.push_back(std::move(terms));
    }
    return prog;
}

}  // namespace gaps
