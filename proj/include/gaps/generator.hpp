#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gaps/groebner.hpp"
#include "gaps/problem.hpp"
#include "gaps/solver_template.hpp"

namespace gaps {

struct GenerateOptions {
    std::uint64_t prime = 30011;
    std::uint64_t seed = 0;
    int trials = 5;
    // Action monomial; defaults to the first unknown.
    std::optional<Monomial> action;
    bool syzygy_reduction = false;
    bool triangular_reduction = false;
};

// The offline phase: repeated Z_p instantiation, normal-set and
// multiplier-set unions, template assembly, symmetry detection, coefficient
// program emission, and held-out validation.
SolverTemplate generate_template(const ProblemSpec& problem, const GenerateOptions& opts = {});

// Greedy search for an upper-triangular leading block among the excessive
// columns on a Z_p probe instance; stores the row/column plan when found.
SolverTemplate reduce_triangular(const SolverTemplate& t, const ProblemSpec& problem,
                                 std::uint64_t probe_seed);

// Searches sign assignments over the unknowns (excluding all-positive) under
// which every equation's monomials carry one common sign. Uses the symbolic
// supports, so the result is instance-independent.
std::optional<SymmetryDescriptor> detect_symmetries(const ProblemSpec& problem);

// Straight-line coefficient program for the problem's equations.
CoeffProgram build_coeff_program(const ProblemSpec& problem);

// Z_p realizations of the online pipeline, used for exact validation.
ZpMatrix assemble_zp(const SolverTemplate& t, const Bindings<FieldElem>& knowns,
                     const FieldSpec& field);
// RREF restricted to the excessive/reducible columns; returns the full m x m
// action matrix. Throws GenerationFailure when the template structure does
// not hold on this instance.
ZpMatrix eliminate_zp(const ZpMatrix& C, const SolverTemplate& t, const FieldSpec& field);

// Characteristic polynomial over Z_p (ascending, monic) and exhaustive root
// scan; small helpers for validation.
std::vector<FieldElem> zp_charpoly(const ZpMatrix& M, const FieldSpec& field);
std::vector<FieldElem> zp_poly_roots(const std::vector<FieldElem>& coeffs, const FieldSpec& field);

}  // namespace gaps
