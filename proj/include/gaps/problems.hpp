#pragma once

#include <map>
#include <string>

#include "gaps/problem.hpp"

namespace gaps {

// Desk-scale problems used as oracles: x^2 - a (2 solutions) and two generic
// conics in (x, y) (4 solutions).
ProblemSpec toy_univariate();
ProblemSpec toy_conics();

// Two equations even in x: {x^2 + y^2 - a, x^2*y - b}. Exercises sign-flip
// symmetry detection and orbit handling (6 solutions, 3 flip orbits).
ProblemSpec toy_even();

// Relative pose from 5 point correspondences via the essential matrix
// E = x E1 + y E2 + z E3 + E4: det E = 0 and 2 E E^T E - tr(E E^T) E = 0.
ProblemSpec relpose_5pt();

// Relative pose from 4 correspondences with known rotation angle: unknowns
// are the scaled rotation axis u with R parameterized by (s, u).
ProblemSpec relpose_4pt_rotation_angle();

using ProblemFactory = ProblemSpec (*)();

const std::map<std::string, ProblemFactory>& problem_registry();

// Throws InvalidArgument for unknown names.
ProblemSpec make_problem(const std::string& name);

}  // namespace gaps
