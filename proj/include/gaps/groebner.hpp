#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaps/monomial.hpp"
#include "gaps/polynomial.hpp"
#include "gaps/zp.hpp"

namespace gaps {

using ZpPoly = Polynomial<FieldElem>;

// A reduced Groebner basis over Z_p together with an exact cofactor table:
// gens[i] = sum_j cofactors[i][j] * F[j] over the original input system F.
struct TrackedBasis {
    FieldSpec field;
    MonomialOrder order;
    int nvars = 0;
    int num_inputs = 0;
    std::vector<ZpPoly> gens;
    std::vector<std::vector<ZpPoly>> cofactors;
};

struct NormalFormResult {
    ZpPoly remainder;
    // q = sum_i cofactors[i] * gens[i] + remainder, exactly.
    std::vector<ZpPoly> cofactors;
};

// Buchberger's algorithm with degree-ordered pair selection and the two
// classic pair-pruning criteria; returns the reduced basis (monic leading
// coefficients, fully inter-reduced) with exact cofactors over F.
TrackedBasis buchberger(const std::vector<ZpPoly>& F, const MonomialOrder& order,
                        const FieldSpec& field);

NormalFormResult normal_form(const ZpPoly& q, const TrackedBasis& basis);

// Basis monomials of the quotient ring, sorted descending under the active
// order. Throws GenerationFailure when the ideal is not zero-dimensional,
// naming the variable with no pure-power leading term.
std::vector<Monomial> normal_set(const TrackedBasis& basis,
                                 const std::vector<std::string>& var_names = {});

int quotient_dimension(const TrackedBasis& basis,
                       const std::vector<std::string>& var_names = {});

// Action matrix of multiplication by alpha on the quotient ring: row i holds
// the normal-set coordinates of the normal form of alpha * B[i].
ZpMatrix action_matrix_zp(const TrackedBasis& basis, const std::vector<Monomial>& B,
                          const Monomial& alpha);

// First syzygy module of F: generators with sum_j s[j]*F[j] = 0 exactly, and
// a module Groebner basis of them under position-over-term with the ambient
// order.
struct SyzygyBasis {
    FieldSpec field;
    MonomialOrder order;
    int nvars = 0;
    int ncomp = 0;
    std::vector<std::vector<ZpPoly>> generators;
    std::vector<std::vector<ZpPoly>> module_gb;
};

SyzygyBasis syzygy_basis(const std::vector<ZpPoly>& F, const TrackedBasis& basis);

// Best-effort cofactor simplification: reduces h against the syzygy module
// GB and keeps the result only when it is no worse (max component degree,
// then total term count).
std::vector<ZpPoly> syzygy_reduce(const std::vector<ZpPoly>& h, const SyzygyBasis& syz);

struct MultiplierSets {
    // Reducible monomials r = alpha*b, b in B, r not in B (descending).
    std::vector<Monomial> reducibles;
    // Per original equation j: the union of cofactor-support monomials M_j,
    // sorted descending.
    std::vector<std::vector<Monomial>> per_equation;
};

// Cofactors of each reducible over the ORIGINAL F (normal-form cofactors
// composed through the tracked basis), stripped to monomial sets. When `syz`
// is given, cofactors are syzygy-reduced before stripping.
MultiplierSets multiplier_sets(const std::vector<ZpPoly>& F, const TrackedBasis& basis,
                               const std::vector<Monomial>& B, const Monomial& alpha,
                               const SyzygyBasis* syz = nullptr);

}  // namespace gaps
