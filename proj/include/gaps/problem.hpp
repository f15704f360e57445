#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaps/expr.hpp"
#include "gaps/monomial.hpp"
#include "gaps/polynomial.hpp"
#include "gaps/rng.hpp"
#include "gaps/zp.hpp"

namespace gaps {

// A named argument with a shape: {} scalar, {n} vector, {r,c} matrix,
// {k,r,c} stack of matrices. Values are bound as flat row-major vectors.
struct ArgDecl {
    std::string name;
    std::vector<int> dims;

    int size() const {
        int s = 1;
        for (int d : dims) s *= d;
        return s;
    }
};

template <typename T>
using Bindings = std::map<std::string, std::vector<T>>;

struct ZpInstance {
    Bindings<FieldElem> knowns;
    std::optional<std::vector<FieldElem>> truth;  // flattened unknowns
};

struct RealInstance {
    Bindings<double> knowns;
    std::optional<std::vector<double>> truth;
    Bindings<double> aux;  // sampler extras (e.g. raw correspondences) for metrics
};

// A polynomial problem: known/unknown argument declarations, symbolic
// equations in the unknowns whose coefficients are expressions over the
// knowns, and instance samplers.
struct ProblemSpec {
    std::string name;
    std::vector<ArgDecl> knowns;
    std::vector<ArgDecl> unknowns;
    std::vector<std::string> var_names;  // flattened unknown scalar names
    MonomialOrder order;

    ExprPool pool;
    std::vector<SymPoly> equations;
    std::vector<std::pair<std::string, ExprId>> abbreviations;

    // Primary Z_p sampler (generative where the problem supports it).
    std::function<ZpInstance(const FieldSpec&, Rng&)> sample_zp;
    // Alternate sampler with independently drawn coefficients, when the
    // problem ships one.
    std::function<ZpInstance(const FieldSpec&, Rng&)> sample_zp_simple;
    std::function<RealInstance(Rng&)> sample_real;

    // Problem-specific distance from a solved unknown vector to the sampled
    // ground truth (smaller is better). Falls back to relative euclidean
    // distance on the unknowns when unset.
    std::function<double(const std::vector<std::complex<double>>&, const RealInstance&)>
        truth_error;

    int nvars() const { return static_cast<int>(var_names.size()); }
    int num_input_scalars() const {
        int s = 0;
        for (const auto& a : knowns) s += a.size();
        return s;
    }
};

// Flattens bindings into the program input vector (declaration order).
// Throws InvalidArgument on missing names or shape mismatches.
template <typename T>
std::vector<T> flatten_known_bindings(const ProblemSpec& prob, const Bindings<T>& b) {
    std::vector<T> flat;
    flat.reserve(prob.num_input_scalars());
    for (const auto& arg : prob.knowns) {
        auto it = b.find(arg.name);
        if (it == b.end())
            throw InvalidArgument("missing binding for known argument '" + arg.name + "'");
        if (static_cast<int>(it->second.size()) != arg.size())
            throw InvalidArgument("binding for '" + arg.name + "' has " +
                                  std::to_string(it->second.size()) + " values, expected " +
                                  std::to_string(arg.size()));
        flat.insert(flat.end(), it->second.begin(), it->second.end());
    }
    return flat;
}

// Instantiates the symbolic equations over a concrete field by direct
// evaluation of the coefficient DAG. Abbreviated subexpressions are
// evaluated once and shared through the memo cache.
template <typename Ring>
std::vector<PolyOf<Ring>> instantiate(const ProblemSpec& prob,
                                      const Bindings<typename Ring::Scalar>& bindings,
                                      const Ring& ring) {
    const auto inputs = flatten_known_bindings(prob, bindings);
    std::vector<typename Ring::Scalar> cache(prob.pool.size());
    std::vector<bool> have(prob.pool.size(), false);

    std::vector<PolyOf<Ring>> out;
    out.reserve(prob.equations.size());
    for (const auto& eq : prob.equations) {
        std::vector<std::pair<Monomial, typename Ring::Scalar>> terms;
        terms.reserve(eq.terms.size());
        for (const auto& [mon, id] : eq.terms)
            terms.emplace_back(mon, prob.pool.eval(id, inputs, ring, cache, have));
        out.push_back(make_poly(prob.nvars(), std::move(terms), ring, prob.order));
    }
    return out;
}

inline std::vector<Polynomial<FieldElem>> instantiate_zp(const ProblemSpec& prob,
                                                         const Bindings<FieldElem>& bindings,
                                                         const FieldSpec& field) {
    return instantiate(prob, bindings, ZpRing{field});
}

inline std::vector<Polynomial<double>> instantiate_real(const ProblemSpec& prob,
                                                        const Bindings<double>& bindings) {
    return instantiate(prob, bindings, RealRing{});
}

}  // namespace gaps
